"""Shared fixtures: the standard graph corpus and session-cached matchings."""

import pytest

import hombox as hb

CORPUS_NAMES = [
    "K_2^2", "K_3^2", "K_4^2", "K_3^3", "K_4^3", "K_5^3",
    "K3_112", "K3_122",
]


def make_graph(name):
    if name.startswith("K3_"):
        sizes = [int(c) for c in name.split("_")[1]]
        return hb.complete_multipartite(sizes)
    body = name[2:]
    n, r = body.split("^")
    return hb.complete_rgraph(int(n), int(r))


@pytest.fixture(scope="session")
def corpus():
    return {name: make_graph(name) for name in CORPUS_NAMES}


@pytest.fixture(scope="session")
def matchings(corpus):
    """Verified matchings for every corpus graph, built once per session."""
    return {name: hb.build_matching(H) for name, H in corpus.items()}


@pytest.fixture(scope="session")
def solid_triangle():
    return hb.CellComplex.from_simplices([frozenset("abc")])


@pytest.fixture(scope="session")
def hollow_triangle():
    return hb.CellComplex.from_simplices(
        [frozenset("ab"), frozenset("bc"), frozenset("ca")])


def z3_action(hollow):
    rot = {"a": "b", "b": "c", "c": "a"}
    rot2 = {v: rot[rot[v]] for v in rot}
    return hb.GroupAction.from_payload_maps(
        hollow,
        [lambda p: p,
         lambda p: frozenset(rot[v] for v in p),
         lambda p: frozenset(rot2[v] for v in p)],
        ["e", "r", "rr"])
