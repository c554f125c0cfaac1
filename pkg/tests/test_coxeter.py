import itertools

import pytest
from hypothesis import given, strategies as st

from artin_biauto.coxeter import (
    INF,
    CoxeterError,
    CoxeterMatrix,
    alternating_word,
    free_reduce,
    invert_word,
    parse_coxeter,
    validate_type,
)


def test_parse_z2():
    mx = parse_coxeter("gens: a b\nm a b = 2\n")
    assert mx.n == 2 and mx.m[0][1] == 2 and mx.m[1][0] == 2


def test_missing_pair_is_infinite():
    mx = parse_coxeter("gens: a b")
    assert mx.m[0][1] == INF


def test_parse_f2_times_z_with_comments():
    text = "# F2 x Z\ngens: a b c\nm a b = 2   # commute\nm a c = 2\n"
    mx = parse_coxeter(text)
    assert (mx.m[0][1], mx.m[0][2], mx.m[1][2]) == (2, 2, INF)


@pytest.mark.parametrize("text, line", [
    ("gens: a b\nm a b = 1\n", 2),
    ("gens: a b\nm a x = 2\n", 2),
    ("gens: a b\nm a b = 2\nm b a = 3\n", 3),
    ("m a b = 2\ngens: a b\n", 1),
    ("gens: a b\nnonsense\n", 2),
    ("gens: a A\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(CoxeterError) as exc:
        parse_coxeter(text)
    assert exc.value.line == line


def test_missing_gens():
    with pytest.raises(CoxeterError):
        parse_coxeter("# nothing\n")


def test_alternating_words():
    assert alternating_word("a", "b", 3) == ("a", "b", "a")
    assert alternating_word("a", "b", 2) == ("a", "b")
    assert alternating_word("b", "a", 4) == ("b", "a", "b", "a")
    with pytest.raises(ValueError):
        alternating_word("a", "b", 0)


@given(st.integers(1, 30))
def test_alternating_word_shape(m):
    w = alternating_word(0, 2, m)
    assert len(w) == m
    assert all(x != y for x, y in zip(w, w[1:]))


def test_validate_all_two_triangle():
    rep = validate_type(CoxeterMatrix.from_labels("abc", {("a", "b"): 2, ("b", "c"): 2, ("a", "c"): 2}))
    assert not rep.almost_large and not rep.supported


def test_validate_all_three_triangle():
    rep = validate_type(CoxeterMatrix.from_labels("abc", {("a", "b"): 3, ("b", "c"): 3, ("a", "c"): 3}))
    assert rep.almost_large and rep.supported and rep.M == 3


def test_validate_f2_times_z():
    rep = validate_type(CoxeterMatrix.from_labels("abc", {("a", "b"): 2, ("a", "c"): 2}))
    assert rep.almost_large and rep.M == 2


def test_square_with_two_commuting_edges():
    # a-b, b-c, c-d, d-a with two 2-edges and no infinite edge
    labels = {("a", "b"): 2, ("b", "c"): 3, ("c", "d"): 2, ("a", "d"): 3, ("a", "c"): 3, ("b", "d"): 3}
    rep = validate_type(CoxeterMatrix.from_labels("abcd", labels))
    assert not rep.almost_large


def test_label_five_parses_but_unsupported():
    rep = validate_type(parse_coxeter("gens: a b\nm a b = 5\n"))
    assert rep.almost_large and not rep.supported


def test_free_group_reports_no_M():
    rep = validate_type(parse_coxeter("gens: a b\n"))
    assert rep.M is None
    assert "M: none" in list(rep.lines())


label_values = st.sampled_from([2, 3, 4, INF])


@given(st.lists(label_values, min_size=6, max_size=6), st.permutations(range(4)))
def test_validate_invariant_under_relabelling(vals, perm):
    names = "abcd"
    pairs = list(itertools.combinations(range(4), 2))
    labels = {(names[i], names[j]): v for (i, j), v in zip(pairs, vals) if v != INF}
    moved = {(names[perm[i]], names[perm[j]]): v for (i, j), v in zip(pairs, vals) if v != INF}
    r1 = validate_type(CoxeterMatrix.from_labels(names, labels))
    r2 = validate_type(CoxeterMatrix.from_labels(names, moved))
    assert (r1.almost_large, r1.supported, r1.M) == (r2.almost_large, r2.supported, r2.M)


def test_presentation_relations():
    mx = CoxeterMatrix.from_labels("ab", {("a", "b"): 3})
    pres = mx.presentation()
    assert len(pres.relations) == 1
    lhs, rhs = pres.relations[0]
    assert mx.format_word(lhs) == "aba" and mx.format_word(rhs) == "bab"


def test_word_io_round_trip():
    mx = CoxeterMatrix.from_labels("ab", {("a", "b"): 3})
    w = mx.parse_word("aBAb")
    assert mx.format_word(w) == "aBAb"
    assert mx.format_word(invert_word(w)) == "BabA"
    assert free_reduce(mx.parse_word("aAbB")) == ()
