"""Equivariant acyclic partial matching on chains of box simplices.

Cells of sd B_edge(H) are chains F = (F_0 ⊂ ... ⊂ F_k) of box simplices.
D is the set of chains containing a non-product item.  For F in D let l(F)
be the least broken index, P = i(p(F_l)), and r(F) the largest r with
F_{l+r} contained in P (r >= 0 since F_l <= P always).  Then

  Sigma_1 = { l+r = k,  P not an item }      mu appends P at the end,
  Sigma_2 = { l+r < k,  Q = P ∩ F_{l+r+1} not an item }
                                             mu inserts Q after position l+r,

and Upper = D \\ (Sigma_1 ∪ Sigma_2).  On the graphs treated here Upper is
exactly mu(Sigma_1 ∪ Sigma_2), giving a partition D = Sigma ⊔ mu(Sigma);
build_matching checks that partition explicitly and raises MatchingInvalid
with a counterexample when it fails (it can fail: chains whose l-th item has
r = 0 and P ∩ F_{l+1} already an item are matched by nothing, e.g. in
B_edge(K_6^3)).  The matching commutes with the S_r-action and is acyclic;
its critical cells are precisely the chains of products, i.e. the order
complex of i(multihom poset).
"""

from collections import namedtuple

from .boxcx import box_edge, i_image_ids, ip_tables, map_i, map_p
from .cellcx import barycentric_subdivision, lift_action_to_order_complex
from .errors import MatchingInvalid, NotInSigma
from .homcx import hom_complex

ChainClass = namedtuple("ChainClass", "tag l r")

CRITICAL = "critical"
S1 = "S1"
S2 = "S2"
UPPER = "upper"


def _classify(items, is_fixed, image_of, meet, contains):
    """Shared classifier.

    items: the chain, ascending;  is_fixed(x): x is a product;
    image_of(x): i(p(x));  meet(a, b): intersection;  contains(a, b): b <= a.
    Returns (ChainClass, mu_items or None).
    """
    top = len(items) - 1
    l = None
    for k, x in enumerate(items):
        if not is_fixed(x):
            l = k
            break
    if l is None:
        return ChainClass(CRITICAL, None, None), None
    P = image_of(items[l])
    a = l
    while a + 1 <= top and contains(P, items[a + 1]):
        a += 1
    r = a - l
    if l + r == top:
        if P in items:
            return ChainClass(UPPER, l, r), None
        return ChainClass(S1, l, r), items + (P,)
    Q = meet(P, items[l + r + 1])
    if Q in items:
        return ChainClass(UPPER, l, r), None
    return ChainClass(S2, l, r), items[:l + r + 1] + (Q,) + items[l + r + 1:]


def classify_chain(chain):
    """Classify a chain of box simplices given as payloads (ascending tuple
    of frozensets of ordered edges).  Returns (ChainClass, mu_chain or None);
    mu_chain is None exactly for critical and upper chains."""
    return _classify(
        tuple(chain),
        is_fixed=lambda F: map_i(map_p(F)) == F,
        image_of=lambda F: map_i(map_p(F)),
        meet=lambda A, B: A & B,
        contains=lambda A, B: B <= A,
    )


def mu(chain):
    """The matched partner of a Sigma-chain of box simplex payloads.
    Raises NotInSigma on critical and upper chains."""
    cls, partner = classify_chain(chain)
    if partner is None:
        raise NotInSigma("chain is %s, not in Sigma" % cls.tag)
    return partner


class Matching:
    """A verified equivariant acyclic matching on sd B_edge(H).

    Attributes (ids refer to cells of .sd unless stated otherwise):
      graph, hom, box   the r-graph and its Hom/box complex bundles
      sd, action        the subdivided box complex and its lifted S_r-action
      tags              per-cell classification tag
      classes           per-cell ChainClass
      sigma1, sigma2    sorted id lists
      mu                dict id -> id on Sigma = sigma1 + sigma2
      upper, critical   sorted id lists
    """

    def __init__(self, graph, hom, box, sd, action, tags, classes, mu_map):
        self.graph = graph
        self.hom = hom
        self.box = box
        self.sd = sd
        self.action = action
        self.tags = tags
        self.classes = classes
        self.mu = mu_map
        self.sigma1 = [i for i, t in enumerate(tags) if t == S1]
        self.sigma2 = [i for i, t in enumerate(tags) if t == S2]
        self.upper = [i for i, t in enumerate(tags) if t == UPPER]
        self.critical = [i for i, t in enumerate(tags) if t == CRITICAL]

    def sigma(self):
        return sorted(self.sigma1 + self.sigma2)

    def d_cells(self):
        return sorted(self.sigma1 + self.sigma2 + self.upper)

    def _chain_payloads(self, i):
        from .cellcx import canon_key
        pay = self.box.cx.payloads
        return [sorted(pay[x], key=canon_key) for x in self.sd.payloads[i]]

    def verify(self):
        """Re-run every structural check; raise MatchingInvalid on failure."""
        sd, mu_map = self.sd, self.mu
        sig = self.sigma()
        if sorted(mu_map) != sig:
            raise MatchingInvalid("mu domain differs from Sigma")
        seen = {}
        for x in sig:
            y = mu_map[x]
            if self.tags[y] != UPPER:
                raise MatchingInvalid(
                    "mu target of chain %r is %s, not upper"
                    % (self._chain_payloads(x), self.tags[y]))
            if x not in sd.down[y]:
                raise MatchingInvalid(
                    "mu(%r) does not cover it" % (self._chain_payloads(x),))
            if y in seen:
                raise MatchingInvalid(
                    "mu not injective: chains %r and %r share target %r"
                    % (self._chain_payloads(seen[y]),
                       self._chain_payloads(x), self._chain_payloads(y)))
            seen[y] = x
        for y in self.upper:
            if y not in seen:
                raise MatchingInvalid(
                    "upper chain %r not matched by any Sigma chain: "
                    "D is not partitioned" % (self._chain_payloads(y),))
        A = self.action
        for g in range(A.order):
            for x in range(len(sd)):
                if self.tags[A.act(g, x)] != self.tags[x]:
                    raise MatchingInvalid(
                        "classification not equivariant at %r under %r"
                        % (self._chain_payloads(x), A.labels[g]))
            for x in sig:
                if mu_map[A.act(g, x)] != A.act(g, mu_map[x]):
                    raise MatchingInvalid(
                        "mu not equivariant at %r under %r"
                        % (self._chain_payloads(x), A.labels[g]))
        iP = set(i_image_ids(self.hom, self.box))
        for i, items in enumerate(sd.payloads):
            expect = all(x in iP for x in items)
            if expect != (self.tags[i] == CRITICAL):
                raise MatchingInvalid(
                    "critical cells differ from chains of products at %r"
                    % (self._chain_payloads(i),))
        cyc = _find_cycle(self)
        if cyc is not None:
            raise MatchingInvalid(
                "matching digraph has a cycle through %r"
                % ([self._chain_payloads(x) for x in cyc],))
        return True

    def to_json_obj(self):
        pay = self.sd.payloads
        sig = []
        for x in self.sigma():
            sig.append({
                "chain": list(pay[x]),
                "mu": list(pay[self.mu[x]]),
                "class": self.tags[x],
            })
        return {
            "sigma": sig,
            "critical": [list(pay[c]) for c in self.critical],
        }

    def summary(self):
        return ("%d chains; D %d = sigma1 %d + sigma2 %d + upper %d; "
                "critical %d" % (len(self.sd), len(self.d_cells()),
                                 len(self.sigma1), len(self.sigma2),
                                 len(self.upper), len(self.critical)))


def _find_cycle(M):
    """A cycle in the matching digraph (x -> y iff y != x, y in Sigma, y a
    facet of mu(x)), or None.  Kahn peeling; returns one cycle's node list."""
    sig = M.sigma()
    sigset = set(sig)
    succ = {}
    indeg = dict.fromkeys(sig, 0)
    for x in sig:
        outs = [y for y in M.sd.down[M.mu[x]] if y != x and y in sigset]
        succ[x] = outs
        for y in outs:
            indeg[y] += 1
    queue = [x for x in sig if indeg[x] == 0]
    done = 0
    while queue:
        x = queue.pop()
        done += 1
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if done == len(sig):
        return None
    rest = {x for x in sig if indeg[x] > 0}
    x = min(rest)
    path, seen = [], {}
    while x not in seen:
        seen[x] = len(path)
        path.append(x)
        x = next(y for y in succ[x] if y in rest)
    return path[seen[x]:]


def verify_acyclic(M):
    """Whether the matching digraph of M is acyclic."""
    return _find_cycle(M) is None


def build_matching(H, max_cells=None):
    """Construct and fully verify the matching on sd B_edge(H).

    Raises MatchingInvalid (with a counterexample chain in the message) if
    the Sigma/mu rules fail to partition D, are not equivariant, or are not
    acyclic on this graph; raises SizeGuard via the complex constructors.
    """
    hom = hom_complex(H, max_cells=max_cells)
    box = box_edge(H, max_cells=max_cells)
    sd = barycentric_subdivision(box.cx, max_cells=max_cells)
    action = lift_action_to_order_complex(box.action, sd)
    fixed, ipim = ip_tables(box)
    pay = box.cx.payloads
    index = box.cx.index

    tags = []
    classes = []
    mu_map = {}
    for i, items in enumerate(sd.payloads):
        cls, partner = _classify(
            items,
            is_fixed=lambda x: fixed[x],
            image_of=lambda x: ipim[x],
            meet=lambda a, b: index[pay[a] & pay[b]],
            contains=lambda a, b: pay[b] <= pay[a],
        )
        tags.append(cls.tag)
        classes.append(cls)
        if partner is not None:
            mu_map[i] = sd.index[partner]

    M = Matching(H, hom, box, sd, action, tags, classes, mu_map)
    M.verify()
    return M
