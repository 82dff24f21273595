"""G-collapsing and machine-checkable simple-G-homotopy certificates.

Three layers live here:

* Elementary G-collapses: remove a free cell orbit together with its facets
  (elementary_g_collapse), and a greedy whole-orbit engine that executes an
  equivariant acyclic matching as a sequence of such collapses
  (matching_to_collapse).

* Stellar deformations: a stellar G-subdivision K -> sd_sigma(K) is certified
  as a zig-zag through the auxiliary complex L = K + cones over the closed
  stars of the orbit members.  Leg A collapses all cone cells of L back onto
  K (recorded reversed, as expansions K -> L); leg B collapses the open stars
  and their cone tops, L -> sd_sigma(K).  Composing one stage per orbit of K
  (dimension descending) yields sd_deformation: a certificate from K to a
  complex isomorphic to the barycentric subdivision sd K.

* Certificates: a DeformationCertificate is a replayable list of orbit steps
  (collapse or expand) with 128-bit state fingerprints before and after each
  step.  Replay never trusts the certificate: every step re-verifies
  freeness, codimension, orbit closure and equivariant facet alignment
  against a freshly built state, and every fingerprint is recomputed.

main_theorem_certificate chains these into a single machine-checkable
witness that Hom(K_r^r, H) and B_edge(H) are simple-S_r-homotopy equivalent:
Hom ~ sd Hom = order complex of products = critical cells of the matching
on sd B_edge(H), which expands to sd B_edge(H) ~ B_edge(H).
"""

import heapq
from collections import namedtuple

from .boxcx import i_image_ids
from .cellcx import (
    BARY,
    CONE,
    CellComplex,
    GroupAction,
    barycentric_subdivision,
    canon_key,
    free_facet,
    lift_action_to_order_complex,
    orbit_star_data,
    verify_isomorphism,
)
from .errors import (
    InputError,
    NotFree,
    OrbitNotIndependentlyFree,
    SizeGuard,
    Stuck,
    VerificationError,
    WrongCodimension,
)

_MASK128 = (1 << 128) - 1


# ---------------------------------------------------------------------------
# collapse state and verified orbit steps


class CollapseState:
    """Mutable alive-set of a fixed universe complex.

    Tracks, per cell, the number of alive cells covering it (updeg) and the
    order-independent fingerprint of the alive set, both maintained
    incrementally under removals and additions.
    """

    def __init__(self, universe, alive=None):
        self.cx = universe
        n = len(universe.payloads)
        if alive is None:
            self.alive = [True] * n
        else:
            aset = set(alive)
            self.alive = [i in aset for i in range(n)]
        self.n_alive = sum(self.alive)
        self.updeg = [0] * n
        for i in range(n):
            if self.alive[i]:
                for j in universe.down[i]:
                    self.updeg[j] += 1
        self.fingerprint = sum(
            d for i, d in enumerate(universe.digests) if self.alive[i]
        ) & _MASK128

    @property
    def fingerprint_hex(self):
        return "%032x" % self.fingerprint

    def remove(self, i):
        self.alive[i] = False
        self.n_alive -= 1
        self.fingerprint = (self.fingerprint - self.cx.digests[i]) & _MASK128
        for j in self.cx.down[i]:
            self.updeg[j] -= 1

    def add(self, i):
        self.alive[i] = True
        self.n_alive += 1
        self.fingerprint = (self.fingerprint + self.cx.digests[i]) & _MASK128
        for j in self.cx.down[i]:
            self.updeg[j] += 1

    def alive_ids(self):
        return [i for i, a in enumerate(self.alive) if a]


def _check_step_shape(state, action, step):
    """Structural checks shared by both step directions.

    Verifies the orbit is ascending and closed under the action, and that the
    facet assignment is equivariant; raises WrongCodimension if any facet is
    not one dimension above its cell, OrbitNotIndependentlyFree if facets
    repeat."""
    K = state.cx
    orbit = step["orbit"]
    facets = step["facets"]
    if len(orbit) != len(facets):
        raise VerificationError("orbit and facet lists differ in length")
    if list(orbit) != sorted(set(orbit)):
        raise VerificationError("step orbit is not an ascending id list")
    if step["sigma"] != orbit[0]:
        raise VerificationError("step sigma is not the orbit representative")
    if len(set(facets)) != len(facets):
        raise OrbitNotIndependentlyFree(
            "facets of one orbit coincide: %s" % (sorted(facets),))
    pos = {m: k for k, m in enumerate(orbit)}
    for m, f in zip(orbit, facets):
        if m not in K.down[f]:
            raise VerificationError(
                "cell %d is not a cover of cell %d" % (f, m))
        if K.dims[f] != K.dims[m] + 1:
            raise WrongCodimension(
                "facet %d of cell %d has codimension %d"
                % (f, m, K.dims[f] - K.dims[m]))
    if action is not None:
        for g in range(action.order):
            gm = action.act(g, orbit[0])
            k = pos.get(gm)
            if k is None:
                raise VerificationError(
                    "step orbit not closed under the group action")
            if action.act(g, facets[0]) != facets[k]:
                raise VerificationError(
                    "facet assignment of step at cell %d is not equivariant"
                    % orbit[0])
        if {action.act(g, orbit[0]) for g in range(action.order)} != set(orbit):
            raise VerificationError("step orbit is not a single group orbit")


def apply_orbit_step(state, action, step):
    """Verify all preconditions of an orbit step against the current state,
    then apply it.  Returns the list of cell ids removed (or added)."""
    _check_step_shape(state, action, step)
    orbit = step["orbit"]
    facets = step["facets"]
    if step["direction"] == "collapse":
        for m, f in zip(orbit, facets):
            if not (state.alive[m] and state.alive[f]):
                raise NotFree("collapse step touches dead cell %d" % m)
            if state.updeg[f] != 0:
                raise NotFree("facet %d is not maximal in the alive set" % f)
            if state.updeg[m] != 1:
                raise NotFree(
                    "cell %d has %d alive cofacets, so it is not free"
                    % (m, state.updeg[m]))
        touched = list(facets) + list(orbit)
        for x in touched:
            state.remove(x)
        return touched
    if step["direction"] == "expand":
        for m, f in zip(orbit, facets):
            if state.alive[m] or state.alive[f]:
                raise VerificationError("expand step re-adds alive cell")
            if state.updeg[m] != 0 or state.updeg[f] != 0:
                raise VerificationError(
                    "expansion of cell %d would leave a dangling cofacet" % m)
            for j in state.cx.down[m]:
                if not state.alive[j]:
                    raise VerificationError(
                        "expansion of cell %d lacks face %d" % (m, j))
            for j in state.cx.down[f]:
                if j != m and not state.alive[j]:
                    raise VerificationError(
                        "expansion of facet %d lacks face %d" % (f, j))
        touched = list(orbit) + list(facets)
        for x in touched:
            state.add(x)
        return touched
    raise InputError("unknown step direction %r" % (step["direction"],))


def _flip_step(step):
    out = dict(step)
    out["direction"] = "expand" if step["direction"] == "collapse" else "collapse"
    return out


# ---------------------------------------------------------------------------
# deformation certificates


class DeformationCertificate:
    """A replayable zig-zag of elementary G-collapses and G-expansions.

    stages is a list of (fp_before, fp_after, step) with 128-bit integer
    state fingerprints; endpoints are the fingerprints of the two end
    complexes.  Steps acting inside an auxiliary universe carry its
    fingerprint under the "universe" key.
    """

    def __init__(self, endpoints, stages):
        self.endpoints = tuple(endpoints)
        self.stages = list(stages)

    def __len__(self):
        return len(self.stages)

    def __eq__(self, other):
        return (isinstance(other, DeformationCertificate)
                and self.endpoints == other.endpoints
                and self.stages == other.stages)

    def reversed(self):
        stages = [(a, b, _flip_step(s)) for (b, a, s) in reversed(self.stages)]
        return DeformationCertificate(
            (self.endpoints[1], self.endpoints[0]), stages)

    def to_json_obj(self):
        return {
            "endpoints": ["%032x" % f for f in self.endpoints],
            "stages": [["%032x" % b, "%032x" % a, step]
                       for (b, a, step) in self.stages],
        }

    @classmethod
    def from_json_obj(cls, obj):
        try:
            endpoints = tuple(int(f, 16) for f in obj["endpoints"])
            stages = [(int(b, 16), int(a, 16), dict(step))
                      for b, a, step in obj["stages"]]
        except (KeyError, TypeError, ValueError) as e:
            raise InputError("malformed deformation certificate: %s" % e)
        return cls(endpoints, stages)

    def total_cells_moved(self):
        return sum(2 * len(s["orbit"]) for _, _, s in self.stages)


# ---------------------------------------------------------------------------
# greedy whole-orbit engine


def _run_greedy(state, action, mu, universe_hex=None):
    """Collapse every matched pair of mu (cell -> facet), whole orbits at a
    time, smallest representative first among the ready orbits.

    Readiness of an orbit is monotone (a ready orbit stays ready until it is
    consumed), so taking the minimal ready representative each time
    reproduces a deterministic scan of the matched cells in id order.
    Returns the recorded stages; raises Stuck if unmatched readiness never
    arrives (which is exactly a cycle in the matching digraph).
    """
    sigma_ids = sorted(mu)
    orbs = action.orbits(sigma_ids)
    members, facets = [], []
    member_orbit, facet_orbit = {}, {}
    for k, ob in enumerate(orbs):
        ms = list(ob)
        fs = []
        for m in ms:
            if m not in mu:
                raise Stuck(
                    "matched set is not closed under the action at cell %d" % m)
            fs.append(mu[m])
            member_orbit[m] = k
        members.append(ms)
        facets.append(fs)
        for f in fs:
            if f in facet_orbit or f in member_orbit:
                raise Stuck("cell %d appears in two matched pairs" % f)
            facet_orbit[f] = k

    def ready(k):
        return (all(state.alive[m] and state.updeg[m] == 1 for m in members[k])
                and all(state.alive[f] and state.updeg[f] == 0
                        for f in facets[k]))

    done = [False] * len(orbs)
    heap = []
    for k in range(len(orbs)):
        if ready(k):
            heapq.heappush(heap, (members[k][0], k))
    stages = []
    remaining = len(orbs)
    while heap:
        _, k = heapq.heappop(heap)
        if done[k] or not ready(k):
            continue
        before = state.fingerprint
        step = {"direction": "collapse", "sigma": members[k][0],
                "orbit": list(members[k]), "facets": list(facets[k])}
        if universe_hex is not None:
            step["universe"] = universe_hex
        removed = apply_orbit_step(state, action, step)
        stages.append((before, state.fingerprint, step))
        done[k] = True
        remaining -= 1
        seen = set()
        for x in removed:
            for y in state.cx.down[x]:
                if y in seen or not state.alive[y]:
                    continue
                seen.add(y)
                j = member_orbit.get(y)
                if j is not None and not done[j] and state.updeg[y] == 1:
                    heapq.heappush(heap, (members[j][0], j))
                j = facet_orbit.get(y)
                if j is not None and not done[j] and state.updeg[y] == 0:
                    heapq.heappush(heap, (members[j][0], j))
    if remaining:
        left = [members[k][0] for k in range(len(orbs)) if not done[k]]
        raise Stuck(
            "collapse stuck with %d orbit(s) remaining (first representative "
            "cell %d): the matching is not acyclic on the alive set"
            % (remaining, min(left)))
    return stages


# ---------------------------------------------------------------------------
# elementary G-collapse and the matching-driven collapse


GCollapse = namedtuple("GCollapse", "cx action old2new orbit facets")


def _restrict_action(A, old2new, sub):
    perms = []
    for p in A.perms:
        perm = [None] * len(sub.payloads)
        for old, new in old2new.items():
            perm[new] = old2new[p[old]]
        perms.append(perm)
    return GroupAction(sub, perms, A.labels, check=False)


def elementary_g_collapse(K, A, sigma):
    """Remove the orbit of the free cell sigma together with its free facets.

    Raises NotFree if any orbit member is not a free cell, WrongCodimension
    if the free facet is more than one dimension up, and
    OrbitNotIndependentlyFree if two orbit members share a coface.  Returns
    GCollapse(cx, action, old2new, orbit, facets); exactly 2*|orbit| cells
    are removed.
    """
    orbit = A.orbit(sigma)
    facets = []
    cof = {}
    for m in orbit:
        f = free_facet(K, m)
        if f is None:
            raise NotFree("cell %d is not a free cell" % m)
        if K.dims[f] != K.dims[m] + 1:
            raise WrongCodimension(
                "free facet %d of cell %d has codimension %d"
                % (f, m, K.dims[f] - K.dims[m]))
        facets.append(f)
        cof[m] = K.cofaces(m)
    for i, a in enumerate(orbit):
        for b in orbit[i + 1:]:
            if cof[a] & cof[b]:
                raise OrbitNotIndependentlyFree(
                    "orbit members %d and %d share a coface" % (a, b))
    removed = set(orbit) | set(facets)
    if len(removed) != 2 * len(orbit):
        raise OrbitNotIndependentlyFree(
            "orbit of cell %d does not remove 2*%d distinct cells"
            % (sigma, len(orbit)))
    keep = [i for i in range(len(K.payloads)) if i not in removed]
    sub, old2new = K.subcomplex(keep)
    return GCollapse(sub, _restrict_action(A, old2new, sub), old2new,
                     list(orbit), facets)


CollapseRun = namedtuple("CollapseRun", "certificate final final_action old2new")


def matching_to_collapse(K, A, M):
    """Execute the verified matching M on K = sd B_edge(H) as a sequence of
    elementary S_r-collapses, yielding a replayable certificate whose end
    complex is the critical subcomplex.

    Removes exactly |Sigma| + |mu(Sigma)| cells in whole-orbit steps;
    raises Stuck if the greedy scan cannot finish (impossible for an acyclic
    matching).
    """
    state = CollapseState(K)
    stages = _run_greedy(state, A, M.mu)
    moved = sum(2 * len(s["orbit"]) for _, _, s in stages)
    expect = len(M.sigma()) + len(M.upper)
    if moved != expect:
        raise VerificationError(
            "bookkeeping: removed %d cells, expected |Sigma|+|mu(Sigma)| = %d"
            % (moved, expect))
    if state.alive_ids() != sorted(M.critical):
        raise VerificationError(
            "collapse endpoint differs from the critical subcomplex")
    final, old2new = K.subcomplex(state.alive_ids())
    cert = DeformationCertificate((K.fingerprint, final.fingerprint), stages)
    return CollapseRun(cert, final, _restrict_action(A, old2new, final),
                       old2new)


CriticalIso = namedtuple(
    "CriticalIso", "sd_hom sd_hom_action critical critical_action old2new map")


def critical_complex(M):
    """The critical subcomplex of M.sd with its restricted action."""
    crit, old2new = M.sd.subcomplex(M.critical)
    return crit, _restrict_action(M.action, old2new, crit), old2new


def verify_critical_isomorphism(M, max_cells=None):
    """Check that chains of products (the critical cells) form a complex
    S_r-isomorphic to sd Hom(K_r^r, H), via the itemwise product map i."""
    sdh = barycentric_subdivision(M.hom.cx, max_cells=max_cells)
    sdh_action = lift_action_to_order_complex(M.hom.action, sdh)
    iids = i_image_ids(M.hom, M.box)
    crit, crit_action, old2new = critical_complex(M)
    f = verify_isomorphism(
        sdh, crit,
        lambda ch: tuple(iids[h] for h in ch),
        sdh_action, crit_action)
    return CriticalIso(sdh, sdh_action, crit, crit_action, old2new, f)


def replay_collapse_certificate(universe, action, cert, start_alive=None):
    """Replay a single-universe certificate from the given alive set (default
    all cells), re-verifying fingerprints and every step precondition.
    Returns the final CollapseState."""
    state = CollapseState(universe, alive=start_alive)
    if state.fingerprint != cert.endpoints[0]:
        raise VerificationError(
            "certificate start fingerprint %032x does not match the state %s"
            % (cert.endpoints[0], state.fingerprint_hex))
    for before, after, step in cert.stages:
        if state.fingerprint != before:
            raise VerificationError(
                "fingerprint drift before step at cell %d" % step["sigma"])
        apply_orbit_step(state, action, step)
        if state.fingerprint != after:
            raise VerificationError(
                "fingerprint drift after step at cell %d" % step["sigma"])
    if state.fingerprint != cert.endpoints[1]:
        raise VerificationError("certificate end fingerprint does not match")
    return state


# ---------------------------------------------------------------------------
# stellar deformation stages


def _is_simplicial(K):
    return all(isinstance(p, frozenset) for p in K.payloads)


def _cone_universe(K, A, orbit, cof, ring, simplicial, max_cells):
    """L = K plus, per orbit member m, an apex and a cone cell over every
    cell of the closed star of m.  K keeps its ids (0..len(K)-1); new cells
    are appended deterministically.  Returns (L, L_action, apex_id, cone_id).
    """
    n = len(K.payloads)
    payloads = list(K.payloads)
    dims = list(K.dims)
    downs = [list(d) for d in K.down]
    digests = list(K.digests)
    apex_id = {}
    cone_id = {}
    star_list = {m: sorted(cof[m] | ring[m]) for m in orbit}
    for m in orbit:
        apex_id[m] = len(payloads)
        if simplicial:
            payloads.append(frozenset([(BARY, K.payloads[m])]))
        else:
            payloads.append((BARY, K.payloads[m]))
        dims.append(0)
        downs.append([])
        digests.append(None)
    nxt = len(payloads)
    for m in orbit:
        for b in star_list[m]:
            cone_id[(m, b)] = nxt
            nxt += 1
    for m in orbit:
        ax = apex_id[m]
        for b in star_list[m]:
            if simplicial:
                tok = (BARY, K.payloads[m])
                payloads.append(K.payloads[b] | {tok})
            else:
                payloads.append((CONE, payloads[ax], K.payloads[b]))
            dims.append(K.dims[b] + 1)
            if K.dims[b] == 0:
                downs.append([b, ax])
            else:
                downs.append([b] + [cone_id[(m, j)] for j in K.down[b]])
            digests.append(None)
    if max_cells is not None and len(payloads) > max_cells:
        raise SizeGuard(
            "cone universe needs %d cells, over the %d-cell guard"
            % (len(payloads), max_cells),
            needed=len(payloads), limit=max_cells)
    L = CellComplex(payloads, dims, downs, digests=digests)
    perms = []
    for g, p in enumerate(A.perms):
        perm = list(p)
        perm.extend([None] * (len(payloads) - n))
        for m in orbit:
            gm = p[m]
            perm[apex_id[m]] = apex_id[gm]
            for b in star_list[m]:
                perm[cone_id[(m, b)]] = cone_id[(gm, p[b])]
        perms.append(perm)
    LA = GroupAction(L, perms, A.labels, check=False)
    LA._check_automorphisms(range(n, len(payloads)))
    return L, LA, apex_id, cone_id


def _anchors(K, A, orbit):
    """An equivariant family of anchor vertices: the minimal vertex cell under
    the representative, transported along the action.  Raises Stuck when a
    stabilizer moves the anchor (then no equivariant matching of this shape
    exists)."""
    rep = orbit[0]
    pay = K.payloads[rep]
    if isinstance(pay, frozenset):
        a_pay = frozenset([min(pay, key=canon_key)])
    elif isinstance(pay, tuple) and all(isinstance(q, frozenset) for q in pay):
        a_pay = tuple(frozenset([min(q, key=canon_key)]) for q in pay)
    else:
        raise InputError(
            "no anchor rule for payloads of shape %r" % (type(pay).__name__,))
    aid = K.index.get(a_pay)
    if aid is None:
        raise Stuck("anchor vertex %r is not a cell" % (a_pay,))
    anchors = {}
    for g in range(A.order):
        m = A.act(g, rep)
        img = K.payloads[A.act(g, aid)]
        if anchors.setdefault(m, img) != img:
            raise Stuck(
                "the stabilizer of cell %d moves its anchor vertex: the "
                "cone cells admit no equivariant matching" % m)
    return anchors


def _conepartner(B, tstar, sstar):
    """Partner of a cone-base payload under the anchored pairing: toggle the
    anchor in the first non-anchor coordinate of a product, recursing through
    nested cones; None means the empty base (the partner is the bare apex).
    """
    if isinstance(B, tuple) and len(B) == 2 and B[0] == BARY:
        return (CONE, B, sstar)
    if isinstance(B, tuple) and len(B) == 3 and B[0] == CONE:
        q = _conepartner(B[2], tstar, sstar)
        return B[1] if q is None else (CONE, B[1], q)
    if isinstance(B, tuple) and all(isinstance(q, frozenset) for q in B):
        for j, part in enumerate(B):
            tj = tstar[j]
            if len(part) == 1 and tj in part:
                continue
            new = part - {tj} if tj in part else part | {tj}
            return B[:j] + (new,) + B[j + 1:]
        return None
    raise InputError("no pairing rule for cone base %r" % (B,))


def _leg_a_pairs(K, A, L, LA, orbit, cof, ring, apex_id, cone_id, simplicial):
    """Perfect matching on the cone cells of L (pairing each with its anchor
    toggle), whose collapse retracts L back onto K.

    The pairing is built on the representative's cone cells only and then
    transported along the action: a per-member construction would break
    equivariance whenever a group element reorders product coordinates.
    Raises Stuck when the pairing escapes the cone cells, fails to be a
    perfect involution, or clashes with a stabilizer."""
    anchors = _anchors(K, A, orbit)
    rep = orbit[0]
    ids = [apex_id[rep]] + [cone_id[(rep, b)]
                            for b in sorted(cof[rep] | ring[rep])]
    a_pay = anchors[rep]
    partner_rep = {}
    if simplicial:
        v = next(iter(a_pay))
        for cid in ids:
            S = L.payloads[cid]
            q_pay = S - {v} if v in S else S | {v}
            q = L.index.get(q_pay)
            if q is None:
                raise Stuck(
                    "anchor toggle leaves the cone cells at cell %d" % cid)
            partner_rep[cid] = q
    else:
        tstar = tuple(next(iter(q)) for q in a_pay)
        apex_pay = L.payloads[apex_id[rep]]
        for cid in ids:
            X = L.payloads[cid]
            if cid == apex_id[rep]:
                q_pay = (CONE, apex_pay, a_pay)
            else:
                qb = _conepartner(X[2], tstar, a_pay)
                q_pay = apex_pay if qb is None else (CONE, apex_pay, qb)
            q = L.index.get(q_pay)
            if q is None:
                raise Stuck(
                    "anchor toggle leaves the cone cells at cell %d" % cid)
            partner_rep[cid] = q
    cone_cells = set()
    for m in orbit:
        cone_cells.add(apex_id[m])
        cone_cells.update(cone_id[(m, b)] for b in cof[m] | ring[m])
    partner = {}
    for g in range(LA.order):
        for x, y in partner_rep.items():
            gx, gy = LA.act(g, x), LA.act(g, y)
            if partner.setdefault(gx, gy) != gy:
                raise Stuck(
                    "a stabilizer of cell %d is incompatible with its cone "
                    "pairing" % A.act(g, rep))
    mu = {}
    for x, y in partner.items():
        if y not in partner or partner[y] != x or y not in cone_cells:
            raise Stuck("cone pairing is not an involution at cell %d" % x)
        if L.dims[y] == L.dims[x] + 1:
            mu[x] = y
        elif L.dims[y] != L.dims[x] - 1:
            raise Stuck("cone pairing is not a facet pairing at cell %d" % x)
    if 2 * len(mu) != len(cone_cells):
        raise Stuck("cone pairing does not cover the cone cells")
    return mu


def _leg_b_pairs(cof, cone_id):
    """Pair every open-star cell with its cone; collapsing these takes L to
    the stellar subdivision."""
    mu = {}
    for m, cells in cof.items():
        for b in cells:
            mu[b] = cone_id[(m, b)]
    return mu


StellarStage = namedtuple(
    "StellarStage",
    "certificate universe universe_action final final_action old2new")


def stellar_deformation_certificate(K, A, sigma, max_cells=None):
    """Certify K ~ stellar G-subdivision of K at the orbit of sigma, as
    expansions K -> L followed by collapses L -> sd_sigma(K).

    The end complex equals the output of stellar_g_subdivision (simplicial
    payloads) or stellar_subdivision_poset (otherwise), cell for cell.
    """
    simplicial = _is_simplicial(K)
    orbit, cof, ring = orbit_star_data(K, A, sigma)
    L, LA, apex_id, cone_id = _cone_universe(
        K, A, orbit, cof, ring, simplicial, max_cells)
    uhex = L.fingerprint_hex

    mu_a = _leg_a_pairs(K, A, L, LA, orbit, cof, ring, apex_id, cone_id,
                        simplicial)
    state_a = CollapseState(L)
    stages_a = _run_greedy(state_a, LA, mu_a, universe_hex=uhex)
    if state_a.alive_ids() != list(range(len(K.payloads))):
        raise Stuck("cone collapse did not retract the universe onto K")

    mu_b = _leg_b_pairs(cof, cone_id)
    state_b = CollapseState(L)
    stages_b = _run_greedy(state_b, LA, mu_b, universe_hex=uhex)

    expand = [(a, b, _flip_step(s)) for (b, a, s) in reversed(stages_a)]
    cert = DeformationCertificate(
        (K.fingerprint, state_b.fingerprint), expand + stages_b)
    final, old2new = L.subcomplex(state_b.alive_ids())
    return StellarStage(cert, L, LA, final,
                        _restrict_action(LA, old2new, final), old2new)


# ---------------------------------------------------------------------------
# full subdivision deformation


SdDeformation = namedtuple(
    "SdDeformation", "certificate final final_action sd sd_action iso")


def _schedule(K, A):
    """Orbits of K, dimension descending, representatives ascending."""
    orbs = A.orbits()
    return sorted(orbs, key=lambda ob: (-K.dims[ob[0]], ob[0]))


def _flatten_map(K, simplicial):
    """Payload map from fully subdivided cells (apexes and nested cones over
    cells of K) to chains of K-ids, i.e. cells of sd K."""
    if simplicial:
        def flat(p):
            ids = []
            for tok in p:
                if not (isinstance(tok, tuple) and len(tok) == 2
                        and tok[0] == BARY):
                    raise VerificationError(
                        "cell %r is not fully subdivided" % (p,))
                ids.append(K.index[tok[1]])
            return tuple(sorted(ids))
        return flat

    def flat(p):
        if isinstance(p, tuple) and len(p) == 2 and p[0] == BARY:
            return (K.index[p[1]],)
        if isinstance(p, tuple) and len(p) == 3 and p[0] == CONE:
            return tuple(sorted(flat(p[2]) + flat(p[1])))
        raise VerificationError("cell %r is not fully subdivided" % (p,))
    return flat


def sd_deformation(K, A, max_cells=None):
    """Certify K ~ (a complex isomorphic to) sd K by composing one stellar
    stage per orbit of K, dimension descending.

    Verifies that the end complex is G-isomorphic to the barycentric
    subdivision sd K (with the action lifted to chains) and returns
    SdDeformation(certificate, final, final_action, sd, sd_action, iso).
    """
    simplicial = _is_simplicial(K)
    schedule = _schedule(K, A)
    loc = list(range(len(K.payloads)))
    cur, cur_action = K, A
    stages = []
    for ob in schedule:
        rep = loc[ob[0]]
        if rep is None:
            raise VerificationError(
                "schedule cell %d vanished before its stage" % ob[0])
        st = stellar_deformation_certificate(
            cur, cur_action, rep, max_cells=max_cells)
        stages.extend(st.certificate.stages)
        loc = [st.old2new.get(x) if x is not None else None for x in loc]
        cur, cur_action = st.final, st.final_action
    cert = DeformationCertificate((K.fingerprint, cur.fingerprint), stages)
    sd = barycentric_subdivision(K, max_cells=max_cells)
    sd_action = lift_action_to_order_complex(A, sd)
    iso = verify_isomorphism(cur, sd, _flatten_map(K, simplicial),
                             cur_action, sd_action)
    return SdDeformation(cert, cur, cur_action, sd, sd_action, iso)


def replay_sd_deformation(K, A, cert, max_cells=None):
    """Replay an sd_deformation certificate: rebuild each cone universe from
    the deterministic schedule, check its fingerprint against the steps'
    "universe" key, re-verify and apply every step, and check the chained
    state fingerprints.  Returns (final complex, final action)."""
    if cert.endpoints[0] != K.fingerprint:
        raise VerificationError("certificate does not start at this complex")
    runs = []
    for st in cert.stages:
        u = st[2].get("universe")
        if u is None:
            raise VerificationError("subdivision step lacks a universe mark")
        if runs and runs[-1][0] == u:
            runs[-1][1].append(st)
        else:
            runs.append((u, [st]))
    schedule = _schedule(K, A)
    if len(runs) != len(schedule):
        raise VerificationError(
            "certificate has %d stages but the schedule needs %d"
            % (len(runs), len(schedule)))
    simplicial = _is_simplicial(K)
    loc = list(range(len(K.payloads)))
    cur, cur_action = K, A
    for ob, (uhex, steps) in zip(schedule, runs):
        rep = loc[ob[0]]
        orbit, cof, ring = orbit_star_data(cur, cur_action, rep)
        L, LA, _, _ = _cone_universe(
            cur, cur_action, orbit, cof, ring, simplicial, max_cells)
        if L.fingerprint_hex != uhex:
            raise VerificationError(
                "universe fingerprint mismatch at schedule cell %d" % ob[0])
        state = CollapseState(L, alive=range(len(cur.payloads)))
        if state.fingerprint != cur.fingerprint:
            raise VerificationError("embedded state fingerprint mismatch")
        for before, after, step in steps:
            if state.fingerprint != before:
                raise VerificationError(
                    "fingerprint drift before step at cell %d" % step["sigma"])
            apply_orbit_step(state, LA, step)
            if state.fingerprint != after:
                raise VerificationError(
                    "fingerprint drift after step at cell %d" % step["sigma"])
        final, old2new = L.subcomplex(state.alive_ids())
        loc = [old2new.get(x) if x is not None else None for x in loc]
        cur, cur_action = final, _restrict_action(LA, old2new, final)
    if cur.fingerprint != cert.endpoints[1]:
        raise VerificationError("certificate end fingerprint does not match")
    return cur, cur_action


# ---------------------------------------------------------------------------
# the main theorem certificate


def verify_iso_ids(K1, K2, pairs, A1=None, A2=None):
    """Check that an explicit id-pair list is a (G-)isomorphism K1 -> K2.

    Raises VerificationError with the offending cell; returns the map as a
    list indexed by K1 ids."""
    n = len(K1.payloads)
    if len(K2.payloads) != n:
        raise VerificationError("cell counts differ: %d vs %d"
                                % (n, len(K2.payloads)))
    if len(pairs) != n:
        raise VerificationError("isomorphism table has %d rows, expected %d"
                                % (len(pairs), n))
    f = [None] * n
    seen = set()
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n) or f[i] is not None or j in seen:
            raise VerificationError("isomorphism table is not a bijection")
        f[i] = j
        seen.add(j)
        if K1.dims[i] != K2.dims[j]:
            raise VerificationError("dimension mismatch at cell %d" % i)
    for i in range(n):
        if {f[j] for j in K1.down[i]} != set(K2.down[f[i]]):
            raise VerificationError("covers are not preserved at cell %d" % i)
    if A1 is not None or A2 is not None:
        if A1 is None or A2 is None or A1.labels != A2.labels:
            raise VerificationError("group actions are not aligned")
        for g in range(A1.order):
            p1, p2 = A1.perms[g], A2.perms[g]
            for i in range(n):
                if f[p1[i]] != p2[f[i]]:
                    raise VerificationError(
                        "map is not equivariant at cell %d, element %d"
                        % (i, g))
    return f


class MainTheoremCertificate:
    """A six-stage machine-checkable witness that Hom(K_r^r, H) and
    B_edge(H) are simple-S_r-homotopy equivalent.

    Stages (deformation certificates alternating with explicit isomorphism
    tables):
      1. subdivide-hom          Hom  ~>  E_hom  (stellar stages)
      2. unfold-hom-subdivision E_hom ≅ sd Hom
      3. products-into-sd-box   sd Hom ≅ critical subcomplex of sd B_edge
      4. expand-to-sd-box       critical  ~>  sd B_edge  (reversed collapse)
      5. fold-box-subdivision   sd B_edge ≅ E_box
      6. desubdivide-box        E_box  ~>  B_edge  (reversed stellar stages)
    """

    def __init__(self, endpoints, stages):
        self.endpoints = tuple(endpoints)
        self.stages = list(stages)

    def __eq__(self, other):
        return (isinstance(other, MainTheoremCertificate)
                and self.endpoints == other.endpoints
                and self.stages == other.stages)

    def to_json_obj(self):
        return {"endpoints": ["%032x" % f for f in self.endpoints],
                "stages": self.stages}

    @classmethod
    def from_json_obj(cls, obj):
        try:
            endpoints = tuple(int(f, 16) for f in obj["endpoints"])
            stages = list(obj["stages"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError("malformed main theorem certificate: %s" % e)
        return cls(endpoints, stages)


def _iso_stage(name, K1, K2, f):
    return {"kind": "isomorphism", "name": name,
            "from": K1.fingerprint_hex, "to": K2.fingerprint_hex,
            "map": [[i, j] for i, j in enumerate(f)]}


def main_theorem_certificate(H, max_cells=None, matching=None):
    """Build (and fully verify while building) the six-stage certificate for
    H.  Pass a prebuilt verified matching to avoid reconstructing it.

    The returned object also carries the working pieces as attributes
    (matching, hom_def, box_def, collapse_run) for callers that want them.
    """
    from .morse import build_matching

    M = matching if matching is not None else build_matching(H, max_cells)
    hom_def = sd_deformation(M.hom.cx, M.hom.action, max_cells=max_cells)
    crit, crit_action, _ = critical_complex(M)
    iids = i_image_ids(M.hom, M.box)
    into_crit = verify_isomorphism(
        hom_def.sd, crit, lambda ch: tuple(iids[h] for h in ch),
        hom_def.sd_action, crit_action)
    run = matching_to_collapse(M.sd, M.action, M)
    if run.final.fingerprint != crit.fingerprint:
        raise VerificationError(
            "collapse endpoint fingerprint differs from critical subcomplex")
    box_def = sd_deformation(M.box.cx, M.box.action, max_cells=max_cells)
    if box_def.sd.fingerprint != M.sd.fingerprint:
        raise VerificationError(
            "independent subdivisions of the box complex disagree")
    inv3 = [None] * len(box_def.iso)
    for i, j in enumerate(box_def.iso):
        inv3[j] = i
    stages = [
        {"kind": "deformation", "name": "subdivide-hom",
         "certificate": hom_def.certificate.to_json_obj()},
        _iso_stage("unfold-hom-subdivision", hom_def.final, hom_def.sd,
                   hom_def.iso),
        _iso_stage("products-into-sd-box", hom_def.sd, crit, into_crit),
        {"kind": "deformation", "name": "expand-to-sd-box",
         "certificate": run.certificate.reversed().to_json_obj()},
        _iso_stage("fold-box-subdivision", M.sd, box_def.final, inv3),
        {"kind": "deformation", "name": "desubdivide-box",
         "certificate": box_def.certificate.reversed().to_json_obj()},
    ]
    cert = MainTheoremCertificate(
        (M.hom.cx.fingerprint, M.box.cx.fingerprint), stages)
    cert.matching = M
    cert.hom_def = hom_def
    cert.box_def = box_def
    cert.collapse_run = run
    return cert


def replay_main_theorem(H, cert, max_cells=None, matching=None):
    """Re-verify a main theorem certificate against a fresh build for H.

    Every deformation is replayed step by step (preconditions and
    fingerprints re-checked), every isomorphism table is re-verified
    including equivariance, and all stage endpoints must chain.  Returns
    True; raises VerificationError (or a subclass) on any mismatch."""
    from .morse import build_matching

    if not isinstance(cert, MainTheoremCertificate):
        cert = MainTheoremCertificate.from_json_obj(cert)
    M = matching if matching is not None else build_matching(H, max_cells)
    if cert.endpoints != (M.hom.cx.fingerprint, M.box.cx.fingerprint):
        raise VerificationError(
            "certificate endpoints do not match Hom and box complexes")
    names = [s.get("name") for s in cert.stages]
    want = ["subdivide-hom", "unfold-hom-subdivision", "products-into-sd-box",
            "expand-to-sd-box", "fold-box-subdivision", "desubdivide-box"]
    if names != want:
        raise VerificationError("certificate stages are %r, expected %r"
                                % (names, want))
    s = cert.stages

    c0 = DeformationCertificate.from_json_obj(s[0]["certificate"])
    e_hom, e_hom_action = replay_sd_deformation(
        M.hom.cx, M.hom.action, c0, max_cells=max_cells)

    sdh = barycentric_subdivision(M.hom.cx, max_cells=max_cells)
    sdh_action = lift_action_to_order_complex(M.hom.action, sdh)
    if (s[1]["from"], s[1]["to"]) != (e_hom.fingerprint_hex,
                                      sdh.fingerprint_hex):
        raise VerificationError("stage 2 endpoints do not match")
    verify_iso_ids(e_hom, sdh, s[1]["map"], e_hom_action, sdh_action)

    crit, crit_action, _ = critical_complex(M)
    if (s[2]["from"], s[2]["to"]) != (sdh.fingerprint_hex,
                                      crit.fingerprint_hex):
        raise VerificationError("stage 3 endpoints do not match")
    verify_iso_ids(sdh, crit, s[2]["map"], sdh_action, crit_action)

    c3 = DeformationCertificate.from_json_obj(s[3]["certificate"])
    if c3.endpoints != (crit.fingerprint, M.sd.fingerprint):
        raise VerificationError("stage 4 endpoints do not match")
    replay_collapse_certificate(M.sd, M.action, c3, start_alive=M.critical)

    c5 = DeformationCertificate.from_json_obj(s[5]["certificate"])
    e_box, e_box_action = replay_sd_deformation(
        M.box.cx, M.box.action, c5.reversed(), max_cells=max_cells)
    if c5.endpoints != (e_box.fingerprint, M.box.cx.fingerprint):
        raise VerificationError("stage 6 endpoints do not match")

    if (s[4]["from"], s[4]["to"]) != (M.sd.fingerprint_hex,
                                      e_box.fingerprint_hex):
        raise VerificationError("stage 5 endpoints do not match")
    verify_iso_ids(M.sd, e_box, s[4]["map"], M.action, e_box_action)
    return True
