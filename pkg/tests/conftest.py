import functools
import re
import sys
from pathlib import Path

HERE = Path(__file__).parent
FIXTURES = HERE.parent / "fixtures"
sys.path.insert(0, str(HERE))


@functools.lru_cache(maxsize=None)
def pipeline(name, radius=None):
    from artin_biauto.cli import Pipeline, RunConfig
    return Pipeline(RunConfig(str(FIXTURES / f"{name}.txt"), "test", radius=radius))


def fixture_path(name):
    return str(FIXTURES / f"{name}.txt")


# -- the Z^2 language written out family by family ---------------------------------

# one character per symbol: d = ab, capitals are inverses
Z2_CHAR = {"a": "a", "A": "A", "b": "b", "B": "B", "ab": "d", "AB": "D", "1": "1"}

_TYPE2 = ["ad", "bd", "Ab", "DA", "DB", "Ba"]
_TYPE3 = [("ad", "a"), ("ad", "d"), ("bd", "b"), ("bd", "d"), ("Ab", "A"), ("Ab", "b"),
          ("DA", "A"), ("DA", "D"), ("DB", "B"), ("DB", "D"), ("Ba", "a"), ("Ba", "B")]


def z2_regex():
    alts = [f"{x}*" for x in "aAbBdD"]
    alts += [f"({p})*" for p in _TYPE2]
    alts += [f"({p})+{q}+" for p, q in _TYPE3]
    return re.compile("^(?:" + "|".join(alts) + ")$")


def z2_hand_fsa(alphabet=("1", "a", "A", "b", "B", "ab", "AB")):
    """NFA for the Z^2 families, assembled directly from the list of forms."""
    from artin_biauto.fsa import make_fsa
    sym = {v: k for k, v in Z2_CHAR.items()}
    trans = []
    n = [1]            # state 0 is the start
    acc = {0}

    def new():
        n[0] += 1
        return n[0] - 1

    for x in "aAbBdD":          # alpha^n
        s = new()
        acc.add(s)
        trans += [(0, sym[x], s), (s, sym[x], s)]
    for p in _TYPE2:            # (xy)^n
        s, t = new(), new()
        acc.add(t)
        trans += [(0, sym[p[0]], s), (s, sym[p[1]], t), (t, sym[p[0]], s)]
    for p, q in _TYPE3:         # (xy)^k z^m, k, m >= 1
        s, t, u = new(), new(), new()
        acc.add(u)
        trans += [(0, sym[p[0]], s), (s, sym[p[1]], t), (t, sym[p[0]], s),
                  (t, sym[q], u), (u, sym[q], u)]
    return make_fsa(alphabet, n[0], [0], acc, trans)


def z2_word_ok(word):
    return bool(z2_regex().match("".join(Z2_CHAR[x] for x in word)))


def z2_free_z_word_ok(word):
    """Alternating blocks: a Z^2-word, then c^i (i != 0), ...; later blocks nonempty."""
    blocks = []
    for x in word:
        kind = "c" if x in ("c", "C") else "ab"
        if blocks and blocks[-1][0] == kind:
            blocks[-1][1].append(x)
        else:
            blocks.append((kind, [x]))
    for kind, letters in blocks:
        if kind == "c":
            if len(set(letters)) != 1:
                return False
        elif not z2_word_ok(letters):
            return False
    return True
