import itertools

import pytest

from artin_biauto.biauto import (
    AcceptorError,
    axiom_check,
    build_multiplier,
    check_length_bounds,
    check_prefix_property,
    check_soundness,
    format_accepted,
    geodesic_of,
    grow_left_differences,
    non_prefix_closure_witness,
    non_symmetry_witness,
    prefix_bound,
    reduce_word,
    trace_word,
    word_over_B,
)
from artin_biauto.fsa import accepts, count_language, enumerate_language
from artin_biauto.geodesics import is_directed_geodesic
from conftest import pipeline


@pytest.mark.parametrize("name,nfa,dfa", [
    ("z2", 19, 20), ("a2", 101, 51), ("b2", 355, 93),
    ("z2_free_z", 21, 22), ("f2_times_z", 35, 39), ("f2", 5, 5),
])
def test_acceptor_sizes(name, nfa, dfa):
    acc = pipeline(name).acceptor
    assert (acc.nfa.n_states, acc.dfa.n_states) == (nfa, dfa)


def test_f2_accepts_freely_reduced_words():
    acc = pipeline("f2").acceptor
    inv = {"a": "A", "A": "a", "b": "B", "B": "b"}
    for n in range(5):
        for w in itertools.product("aAbB", repeat=n):
            reduced = all(inv[x] != y for x, y in zip(w, w[1:]))
            assert accepts(acc.dfa, w) == reduced


@pytest.mark.parametrize("name", ["z2", "a2", "z2_free_z", "f2_times_z"])
def test_acceptor_is_a_cross_section_of_the_ball(name):
    p = pipeline(name)
    acc = p.acceptor
    seen = {}
    for w in enumerate_language(acc.dfa, 3):
        g = acc.value(w)
        assert g not in seen, (w, seen.get(g))
        seen[g] = w
    # every element of word length <= 3 has a representative of length <= 3
    ball = {p.group.identity}
    frontier = set(ball)
    for _ in range(3):
        frontier = {g * p.group.canonical((x,)) for g in frontier for x in range(2 * p.group.matrix.n)}
        ball |= frontier
    assert ball <= set(seen)


def test_traced_words_are_directed_geodesics():
    acc = pipeline("a2").acceptor
    frag = acc.frag
    for w in enumerate_language(acc.dfa, 2):
        sims = geodesic_of(acc, w)
        if sims is None:
            continue
        assert len(sims) == len(w) + 1
        assert is_directed_geodesic(sims, frag)[0]


def test_trace_rejects():
    acc = pipeline("f2").acceptor
    with pytest.raises(AcceptorError):
        trace_word(acc, ("a", "A"))


def test_word_over_B_preserves_value():
    p = pipeline("z2")
    acc, (_, B) = p.acceptor, p.alphabets
    img = word_over_B(acc, ("ab",), B)
    assert img in (["ab", "1"], ["1", "ab"])
    q = pipeline("a2")
    for w in enumerate_language(q.acceptor.dfa, 3):
        img = word_over_B(q.acceptor, w, q.alphabets[1])
        assert len(img) == 2 * len(w)
        g = q.group.identity
        for s in img:
            g = g * q.alphabets[1].value(s)
        assert g == q.acceptor.value(w)


def test_multiplier_examples():
    z2 = pipeline("z2")
    assert accepts(z2.right["a"].fsa, [("b", "ab")])
    assert not accepts(z2.right["a"].fsa, [("b", "b")])
    a2 = pipeline("a2")
    assert accepts(a2.right["b"].fsa, [("a", "1"), ("_", "ab")])


def test_multiplier_side_is_checked():
    acc = pipeline("z2").acceptor
    with pytest.raises(ValueError):
        build_multiplier(acc, "a", "up", acc.alphabet.element_set())


def test_right_axioms_hold():
    p = pipeline("a2")
    rep = axiom_check(p.acceptor, p.right, maxlen=5)
    assert rep.ok, rep.lines()


def test_too_small_difference_set_fails_with_witness():
    p = pipeline("z2")
    acc = p.acceptor
    one = {acc.group.identity, acc.alphabet.value("a")}
    mults = {"a": build_multiplier(acc, "a", "right", one)}
    rep = axiom_check(acc, mults, W=one, maxlen=4)
    assert not rep.ok
    assert rep.witnesses


def test_left_growth_a2():
    p = pipeline("a2")
    W, mult, rep = grow_left_differences(p.acceptor, "a", p.right)
    assert rep.ok, rep.lines()
    assert len(W) == 15


@pytest.mark.parametrize("word,expected", [
    ("ab", "1 ab"), ("ba", "1 ba"), ("aba", "1 aba"), ("ABA", "ABA 1"),
    ("aab", "1 a ab"), ("aB", "BA ba"), ("abab", "1 a aba"), ("aA", ""),
])
def test_reduce_a2(word, expected):
    p = pipeline("a2")
    assert format_accepted(reduce_word(p.acceptor, word, p.right)) == expected


def test_reduce_agrees_with_group():
    p = pipeline("b2")
    acc = p.acceptor
    for w in ["abab", "BAba", "aabbA", "bAbAb"]:
        u = reduce_word(acc, w, p.right)
        assert accepts(acc.dfa, u)
        assert acc.value(u) == p.group.canonical(w)


def test_reduce_symbol_sequence():
    p = pipeline("a2")
    assert reduce_word(p.acceptor, ["aba", "1"], p.right) == ("1", "aba")


def test_length_and_prefix_checks():
    for name in ["z2", "a2"]:
        acc = pipeline(name).acceptor
        for rep in (check_length_bounds(acc, 5), check_prefix_property(acc, 5), check_soundness(acc, 3)):
            assert rep.ok, rep.lines()


def test_prefix_bound():
    assert prefix_bound(pipeline("a2").group.matrix) == 2
    assert prefix_bound(pipeline("b2").group.matrix) == 3
    assert prefix_bound(pipeline("f2").group.matrix) == 1


def test_language_is_not_symmetric_or_prefix_closed():
    a2 = pipeline("a2").acceptor
    assert non_symmetry_witness(a2) == ("1", "a", "ab")
    assert non_prefix_closure_witness(a2) == (("1", "ab"), ("1",))
    z2 = pipeline("z2").acceptor
    assert non_symmetry_witness(z2) is not None
    assert non_prefix_closure_witness(z2) is None


def test_growth_counts_are_finite():
    acc = pipeline("z2").acceptor
    counts = count_language(acc.dfa, 3)
    assert counts[0] == 1
    assert all(c > 0 for c in counts)
