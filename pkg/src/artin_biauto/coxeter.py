"""Coxeter matrices, Artin presentations and word syntax.

Input format::

    gens: a b c
    m a b = 3      # symmetric entry, stated once
    m a c = 2

Unlisted pairs default to infinity.  Words are written without spaces;
a lowercase letter is a generator and the matching uppercase letter its
inverse, ``1`` alone is the empty word.

Internally a letter is an int: ``2*i`` is generator ``i`` and ``2*i+1`` its
inverse, so the natural int order is ``a < A < b < B < ...``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

INF = math.inf

_NAME = re.compile(r"^[a-z][a-z0-9_]*$")


class CoxeterError(ValueError):
    """Malformed or inconsistent Coxeter matrix input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedGroupError(ValueError):
    """The presentation lies outside the class handled downstream."""


def inverse_letter(x: int) -> int:
    return x ^ 1


def invert_word(w):
    return tuple(x ^ 1 for x in reversed(w))


def free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class CoxeterMatrix:
    names: tuple
    m: tuple  # n x n tuple of tuples; entries int or INF

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise CoxeterError("generator names must be distinct")
        if n == 0:
            raise CoxeterError("at least one generator is required")
        if len(self.m) != n or any(len(row) != n for row in self.m):
            raise CoxeterError("matrix shape does not match generator count")
        for i in range(n):
            if self.m[i][i] != 1:
                raise CoxeterError(f"diagonal entry m[{i}][{i}] must be 1")
            for j in range(n):
                if i != j:
                    if self.m[i][j] != self.m[j][i]:
                        raise CoxeterError(f"entries for {self.names[i]},{self.names[j]} are not symmetric")
                    if self.m[i][j] < 2:
                        raise CoxeterError(f"entry for {self.names[i]},{self.names[j]} must be >= 2")

    @property
    def n(self):
        return len(self.names)

    def label(self, i, j):
        return self.m[i][j]

    def finite_pairs(self):
        """Pairs (i, j), i < j, with a finite label."""
        return [(i, j) for i, j in itertools.combinations(range(self.n), 2) if self.m[i][j] != INF]

    @classmethod
    def from_labels(cls, names, labels=None):
        names = tuple(names)
        idx = {x: k for k, x in enumerate(names)}
        n = len(names)
        m = [[1 if i == j else INF for j in range(n)] for i in range(n)]
        for (x, y), v in (labels or {}).items():
            i, j = idx[x], idx[y]
            m[i][j] = m[j][i] = v
        return cls(names, tuple(tuple(r) for r in m))

    # -- word I/O -------------------------------------------------------

    def parse_word(self, text: str):
        text = text.strip()
        if text in ("", "1"):
            return ()
        if any(len(x) != 1 for x in self.names):
            raise CoxeterError("word syntax needs single-letter generator names")
        idx = {x: k for k, x in enumerate(self.names)}
        out = []
        for ch in text:
            if ch in idx:
                out.append(2 * idx[ch])
            elif ch.lower() in idx and ch.isupper():
                out.append(2 * idx[ch.lower()] + 1)
            else:
                raise CoxeterError(f"unknown letter {ch!r} in word {text!r}")
        return tuple(out)

    def format_word(self, w) -> str:
        if not w:
            return "1"
        return "".join(self.names[x >> 1].upper() if x & 1 else self.names[x >> 1] for x in w)

    def presentation(self) -> "ArtinPresentation":
        rels = []
        for i, j in self.finite_pairs():
            mij = self.m[i][j]
            rels.append((alternating_word(2 * i, 2 * j, mij), alternating_word(2 * j, 2 * i, mij)))
        return ArtinPresentation(self, tuple(rels))


@dataclass(frozen=True)
class ArtinPresentation:
    matrix: CoxeterMatrix
    relations: tuple  # pairs of words (_m(a_i,a_j), _m(a_j,a_i))

    @property
    def generators(self):
        return tuple(2 * i for i in range(self.matrix.n))

    @property
    def inverses(self):
        return tuple(2 * i + 1 for i in range(self.matrix.n))


@dataclass(frozen=True)
class TypeReport:
    almost_large: bool
    supported: bool
    M: object  # int, or None for free groups
    reasons: tuple = field(default=())

    def lines(self):
        yield f"almost_large: {str(self.almost_large).lower()}"
        yield f"supported: {str(self.supported).lower()}"
        yield f"M: {'none' if self.M is None else self.M}"
        for r in self.reasons:
            yield f"reason: {r}"


def alternating_word(a, b, m):
    """The length-m word a b a b ... starting with ``a``."""
    if m < 1:
        raise ValueError("alternating word needs m >= 1")
    return tuple(a if k % 2 == 0 else b for k in range(m))


def parse_coxeter(text: str) -> CoxeterMatrix:
    names = None
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gens:"):
            if names is not None:
                raise CoxeterError("duplicate gens line", lineno)
            names = line[len("gens:"):].split()
            for x in names:
                if not _NAME.match(x):
                    raise CoxeterError(f"bad generator name {x!r}", lineno)
            if len(set(names)) != len(names):
                raise CoxeterError("generator names must be distinct", lineno)
            continue
        mt = re.match(r"^m\s+(\S+)\s+(\S+)\s*=\s*(\S+)$", line)
        if not mt:
            raise CoxeterError(f"cannot parse {line!r}", lineno)
        if names is None:
            raise CoxeterError("m line before gens line", lineno)
        x, y, v = mt.groups()
        for g in (x, y):
            if g not in names:
                raise CoxeterError(f"unknown generator {g!r}", lineno)
        if x == y:
            raise CoxeterError("diagonal entries are fixed at 1", lineno)
        if v.lower() in ("inf", "infinity", "oo"):
            val = INF
        else:
            try:
                val = int(v)
            except ValueError:
                raise CoxeterError(f"bad label {v!r}", lineno) from None
            if val < 2:
                raise CoxeterError(f"off-diagonal label must be >= 2, got {val}", lineno)
        key = tuple(sorted((x, y)))
        if key in labels and labels[key] != val:
            raise CoxeterError(f"non-symmetric entries for {x},{y}", lineno)
        labels[key] = val
    if names is None:
        raise CoxeterError("missing gens line")
    return CoxeterMatrix.from_labels(names, labels)


def validate_type(mx: CoxeterMatrix) -> TypeReport:
    n = mx.n
    reasons = []
    ok = True
    for tri in itertools.combinations(range(n), 3):
        edges = [mx.m[i][j] for i, j in itertools.combinations(tri, 2)]
        if INF not in edges and 2 in edges:
            ok = False
            reasons.append("triangle " + ",".join(mx.names[i] for i in tri) + " has a 2-edge and no infinite edge")
    # squares: 4-cycles v0 v1 v2 v3 in the complete graph on the diagram
    for quad in itertools.combinations(range(n), 4):
        a = quad[0]
        for p in itertools.permutations(quad[1:]):
            if p[0] > p[2]:
                continue  # each 4-cycle through `a` once
            cyc = (a,) + p
            edges = [mx.m[cyc[k]][cyc[(k + 1) % 4]] for k in range(4)]
            if INF not in edges and edges.count(2) > 1:
                ok = False
                reasons.append("square " + ",".join(mx.names[i] for i in cyc) + " has two 2-edges and no infinite edge")
    finite = [mx.m[i][j] for i, j in mx.finite_pairs()]
    M = max(finite) if finite else None
    supported = ok and all(v <= 4 for v in finite)
    if ok and not supported:
        reasons.append("labels above 4 are not handled")
    return TypeReport(ok, supported, M, tuple(reasons))
