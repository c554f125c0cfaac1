import itertools

import networkx as nx
import pytest

from artin_biauto.complex import (
    InsufficientRadius,
    build_fragment,
    check_six_large,
    default_radius,
    dump_complex,
    link_of,
    one_ball_in,
    overlap_pattern,
    residue_in,
    search_overlap_pattern,
    x1_distances,
    zigzag_pattern,
)
from artin_biauto.coxeter import CoxeterMatrix
from conftest import pipeline

FIVE = ["z2", "a2", "b2", "z2_free_z", "f2_times_z"]


def frag_of(name, radius=None):
    return pipeline(name, radius).fragment


def graph_of(frag):
    g = nx.Graph()
    g.add_nodes_from(range(frag.n_vertices))
    g.add_edges_from(frag.edges())
    return g


def test_default_radius():
    assert default_radius(CoxeterMatrix.from_labels("ab", {("a", "b"): 4})) == 7
    assert default_radius(CoxeterMatrix.from_labels("ab", {("a", "b"): 3})) == 4


def test_z2_complex_is_the_triangulated_plane():
    frag = frag_of("z2")
    v0 = frag.real("1")
    assert {frag.name(v) for v in frag.adj[v0]} == {"a", "A", "b", "B", "ab", "AB"}
    assert all(frag.is_real(v) for v in range(frag.n_vertices))
    assert max(frag.simplices) == 2


@pytest.mark.parametrize("name", FIVE + ["f2"])
def test_triangulation_counts(name):
    frag = frag_of(name)
    done = [pc for pc in frag.precells.values() if pc.complete]
    if name == "f2":
        assert not done
        return
    assert len(done) >= 10
    for pc in done:
        m = pc.m
        assert pc.added == (m - 2, 5 * m - 9, 4 * m - 6)


@pytest.mark.parametrize("name, top", [("z2", 2), ("a2", 3), ("b2", 4)])
def test_top_dimension_equals_label(name, top):
    assert max(frag_of(name).simplices) == top


@pytest.mark.parametrize("name", FIVE)
def test_six_large(name):
    rep = check_six_large(frag_of(name))
    assert rep.checked > 0
    assert rep.ok, rep.violations[:3]


@pytest.mark.parametrize("name", ["a2", "b2"])
def test_six_large_against_networkx(name):
    frag = frag_of(name)
    g = graph_of(frag)
    for v in range(frag.n_vertices):
        if frag.bdist[v] < 2:
            continue
        link = g.subgraph(frag.adj[v])
        short = [c for c in nx.chordless_cycles(link, length_bound=5) if len(c) >= 4]
        assert not short, (frag.name(v), [frag.name(x) for x in short[0]])


def test_overlap_edges_are_needed():
    mx = CoxeterMatrix.from_labels("ab", {("a", "b"): 3})
    frag = build_fragment(mx, overlap=False)
    rep = check_six_large(frag)
    assert not rep.ok
    v, cyc = rep.violations[0]
    assert len(cyc) in (4, 5)
    # the witness is a full cycle in the link
    assert all(x in frag.adj[v] for x in cyc)
    for i, j in itertools.combinations(range(len(cyc)), 2):
        adjacent = (j - i) in (1, len(cyc) - 1)
        assert (cyc[j] in frag.adj[cyc[i]]) == adjacent


@pytest.mark.parametrize("m", [3, 4])
def test_overlap_search_matches_zigzag(m):
    found = search_overlap_pattern(m)
    assert found == {k: zigzag_pattern(m, k) for k in range(2, m)}
    assert overlap_pattern(m) == found


def test_zigzag_values():
    assert zigzag_pattern(3, 2) == ((1, 1),)
    assert zigzag_pattern(4, 2) == ((1, 2),)
    assert zigzag_pattern(4, 3) == ((1, 1), (1, 2), (2, 2))


@pytest.mark.parametrize("name", ["a2", "b2", "z2_free_z"])
def test_flag(name):
    """Every clique among vertices with exact stars is a recorded simplex."""
    frag = frag_of(name)
    g = graph_of(frag)
    inner = [v for v in range(frag.n_vertices) if frag.bdist[v] >= 3]
    for clique in nx.find_cliques(g.subgraph(set(inner))):
        s = tuple(sorted(clique))
        assert s in frag.simplices[len(s) - 1]


def test_link_residue_ball_in_z2():
    frag = frag_of("z2")
    r = frag.real
    v0 = r("1")
    link = link_of(v0, frag)
    assert len(link.vertices) == 6 and len(link.edges()) == 6
    # link of the diagonal is the two apexes b and a
    diag = link_of({v0, r("ab")}, frag)
    assert {frag.name(x) for x in diag.vertices} == {"a", "b"}
    res = residue_in(frozenset({r("a")}), link, frag)
    ball = one_ball_in(frozenset({r("a")}), link, frag)
    assert {frag.name(x) for x in ball.vertices} == {"a", "ab", "B"}
    assert {frag.name(x) for x in res.vertices} == {"a", "ab", "B"}


def test_link_needs_visibility():
    frag = frag_of("z2")
    far = max(range(frag.n_vertices), key=lambda v: len(frag.anchor(v).word))
    with pytest.raises(InsufficientRadius):
        link_of(far, frag)


def test_distances_in_a2():
    frag = frag_of("a2")
    d = x1_distances(frag, frag.real("1"))
    assert d[frag.real("ab")] == 2
    assert d[frag.real("aba")] == 2
    assert d[frag.interior("1", (0, 1), 1)] == 1


def test_dump_is_deterministic():
    mx = CoxeterMatrix.from_labels("ab", {("a", "b"): 3})
    t1 = dump_complex(build_fragment(mx))
    t2 = dump_complex(build_fragment(mx))
    assert t1 == t2
    assert t1.splitlines() == sorted(t1.splitlines())
    assert "v c:1:ab:1 interior 1" in t1
