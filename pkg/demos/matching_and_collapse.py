"""The equivariant acyclic matching on sd B_edge(H) and its execution as a
certified sequence of whole-orbit collapses.

Run:  python3 demos/matching_and_collapse.py
"""

import json

import hombox as hb

H = hb.complete_multipartite([1, 2, 2])
print("graph: %r" % H)

M = hb.build_matching(H)
print("matching: %s" % M.summary())
assert M.verify() and hb.verify_acyclic(M)

# classification of a single chain, spelled out
x = M.sigma1[0]
chain = M.sd.payloads[x]
y = M.mu[x]
print()
print("a Sigma_1 chain of length %d is matched with the chain of length %d"
      % (len(chain), len(M.sd.payloads[y])))
print("  chain ids  %s" % (chain,))
print("  mu(chain)  %s" % (M.sd.payloads[y],))
assert x in M.sd.down[y]

# execute the matching as elementary S_3-collapses
run = hb.matching_to_collapse(M.sd, M.action, M)
cert = run.certificate
print()
print("collapse: %d whole-orbit stages, %d cells moved (= |Sigma|+|mu(Sigma)|)"
      % (len(cert.stages), cert.total_cells_moved()))
assert cert.total_cells_moved() == len(M.sigma()) + len(M.upper)
print("endpoint: %d cells == critical subcomplex" % len(run.final))

# the endpoint is S_3-isomorphic to sd Hom(K_3^3, H)
iso = hb.verify_critical_isomorphism(M)
print("sd Hom has %d chains; isomorphism onto the critical cells checked"
      % len(iso.map))

# the certificate is replayable JSON: every step and fingerprint re-verified
text = json.dumps(cert.to_json_obj())
back = hb.DeformationCertificate.from_json_obj(json.loads(text))
state = hb.replay_collapse_certificate(M.sd, M.action, back)
print("replayed %d stages from %d bytes of JSON; %d cells alive"
      % (len(back.stages), len(text), state.n_alive))
assert state.alive_ids() == sorted(M.critical)

# tampering is detected
obj = back.to_json_obj()
obj["stages"][0][0] = "f" * 32
try:
    hb.replay_collapse_certificate(
        M.sd, M.action, hb.DeformationCertificate.from_json_obj(obj))
except hb.VerificationError as e:
    print("tampered certificate rejected: %s" % e)
