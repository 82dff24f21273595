"""Box complexes vs Hom complexes: the maps p and i, the regeneration
counterexample, the identity case, and the isomorphism criterion.

Run:  python3 demos/box_vs_hom.py
"""

import hombox as hb


def show(H, name):
    box = hb.box_edge(H)
    hom = hb.hom_complex(H)
    print("%-12s box %4d cells %-18s hom %4d cells %s"
          % (name, len(box.cx), box.cx.dim_counts(),
             len(hom.cx), hom.cx.dim_counts()))
    return box, hom


print("== complexes over the corpus ==")
for name, H in [
    ("K_3^2", hb.complete_rgraph(3, 2)),
    ("K_4^2", hb.complete_rgraph(4, 2)),
    ("K_4^3", hb.complete_rgraph(4, 3)),
    ("K_5^3", hb.complete_rgraph(5, 3)),
    ("K3_112", hb.complete_multipartite([1, 1, 2])),
    ("K3_122", hb.complete_multipartite([1, 2, 2])),
]:
    show(H, name)

print()
print("== the regeneration counterexample in K3_122 ==")
H = hb.complete_multipartite([1, 2, 2])
box = hb.box_edge(H)
F = frozenset([("a0", "b0", "c0"), ("a0", "b1", "c1")])
P = hb.map_p(F)
iP = hb.map_i(P)
print("F     = %s" % (sorted(F),))
print("p(F)  = %s" % (tuple(sorted(q) for q in P),))
print("i(p(F)) has %d tuples; F has %d; fixed: %s"
      % (len(iP), len(F), hb.ip_fixed(F)))
assert not hb.ip_fixed(F) and F < iP

fixed, _ = hb.ip_tables(box)
print("fixed simplices: %d of %d (the image subcomplex is proper)"
      % (sum(fixed), len(fixed)))
assert 0 < sum(fixed) < len(fixed)

print()
print("== the identity case K3_11n ==")
for n in (1, 2, 3):
    Hn = hb.complete_multipartite([1, 1, n])
    bx = hb.box_edge(Hn)
    hm = hb.hom_complex(Hn)
    fx, _ = hb.ip_tables(bx)
    f = hb.verify_isomorphism(hm.cx, bx.cx, hb.map_i, hm.action, bx.action)
    print("K3_11%d: all %d simplices fixed; box and Hom S_3-isomorphic "
          "on %d cells" % (n, len(fx), len(f)))
    assert all(fx)

print()
print("== isomorphism criterion: K_n^r iff n <= r+1 ==")
for r in (2, 3):
    for n in range(r, r + 4):
        a, b = hb.iso_criterion(hb.complete_rgraph(n, r))
        assert a == b == (n <= r + 1)
        print("K_%d^%d: every simplex a product: %-5s "
              "no K^r_{1,..,1,2,2} subgraph: %s" % (n, r, a, b))
