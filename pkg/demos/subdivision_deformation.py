"""Stellar subdivisions as certified zig-zags of expansions and collapses,
composed into a deformation from K to its barycentric subdivision.

Run:  python3 demos/subdivision_deformation.py
"""

import hombox as hb

# the hollow triangle with its rotation action
K = hb.CellComplex.from_simplices(
    [frozenset("ab"), frozenset("bc"), frozenset("ca")])
rot = {"a": "b", "b": "c", "c": "a"}
rot2 = {v: rot[rot[v]] for v in rot}
A = hb.GroupAction.from_payload_maps(
    K,
    [lambda p: p, lambda p: frozenset(rot[v] for v in p),
     lambda p: frozenset(rot2[v] for v in p)],
    ["e", "r", "rr"])
print("K: %d cells %s with a free Z_3 action (%d orbits)"
      % (len(K), K.dim_counts(), len(A.orbits())))

# one stellar stage: star the orbit of an edge
e = K.index[frozenset("ab")]
st = hb.stellar_deformation_certificate(K, A, e)
direct = hb.stellar_g_subdivision(K, A, e)
print("starring the edge orbit: %d cells -> %d, certified in %d steps"
      % (len(K), len(st.final), len(st.certificate.stages)))
assert st.final.fingerprint_hex == direct.fingerprint_hex

# the full composite: K deforms to (a complex isomorphic to) sd K
d = hb.sd_deformation(K, A)
print("sd deformation: %d steps; endpoint %d cells, sd K has %d chains"
      % (len(d.certificate.stages), len(d.final), len(d.sd)))
hb.verify_iso_ids(d.final, d.sd, [[i, j] for i, j in enumerate(d.iso)],
                  d.final_action, d.sd_action)
print("endpoint is Z_3-isomorphic to sd K (explicit table verified)")

# a replay rebuilds every intermediate universe and re-checks every step
final, action = hb.replay_sd_deformation(K, A, d.certificate)
assert final.fingerprint_hex == d.final.fingerprint_hex
print("replay ok; certificates compose backwards too:"
      " reversed endpoints %s" % (d.certificate.reversed().endpoints ==
                                  d.certificate.endpoints[::-1]))

# the same machinery runs on polytopal (product) cells: the box complex of
# K3_122 with its full S_3 action
box = hb.box_edge(hb.complete_multipartite([1, 2, 2]))
d2 = hb.sd_deformation(box.cx, box.action)
print("box(K3_122): %d cells deform to sd with %d chains in %d steps"
      % (len(box.cx), len(d2.sd), len(d2.certificate.stages)))

# with a non-free action the anchors can clash; the engine refuses instead
# of producing an unverified deformation
import itertools

perms = []
for p in itertools.permutations(range(3)):
    m = {"abc"[i]: "abc"[p[i]] for i in range(3)}
    perms.append(lambda pay, m=m: frozenset(m[v] for v in pay))
A6 = hb.GroupAction.from_payload_maps(
    K, perms, list(itertools.permutations(range(3))))
try:
    hb.sd_deformation(K, A6)
except hb.Stuck as e:
    print("full S_3 on the triangle is refused: %s" % e)
