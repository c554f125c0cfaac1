"""Exact group arithmetic for the supported Artin groups.

The Coxeter diagram is split recursively into free products (components of
the finite-label graph) and direct products (joins along 2-labelled edges).
The leaves are free groups, dihedral Artin groups (handled through their
Garside normal form) and, for anything that does not decompose, a bounded
rewriting search over dihedral subwords.

Every element carries a structural normal form used for hashing.  Its
canonical key is the shortlex-least geodesic word, generator order as in
the input with each inverse immediately after its generator.
"""

from __future__ import annotations

import itertools
from collections import deque

from .coxeter import (
    INF,
    CoxeterMatrix,
    UnsupportedGroupError,
    alternating_word,
    free_reduce,
    invert_word,
    validate_type,
)


class OracleError(RuntimeError):
    """The word-problem backend failed or hit a configured limit."""


class Element:
    __slots__ = ("group", "nf", "_hash")

    def __init__(self, group, nf):
        self.group = group
        self.nf = nf
        self._hash = hash(nf)

    def __eq__(self, other):
        return isinstance(other, Element) and self.nf == other.nf and self.group is other.group

    def __hash__(self):
        return self._hash

    def __mul__(self, other):
        return self.group.multiply(self, other)

    def inverse(self):
        return self.group.inverse(self)

    @property
    def word(self):
        """Shortlex-least geodesic word (the canonical key)."""
        return self.group.shortlex(self)

    @property
    def key(self):
        return self.group.matrix.format_word(self.word)

    def __len__(self):
        return len(self.word)

    def is_identity(self):
        return self.nf == self.group.identity.nf

    def __repr__(self):
        return f"<{self.key}>"

    def __lt__(self, other):
        a, b = self.word, other.word
        return (len(a), a) < (len(b), b)


# ---------------------------------------------------------------------------
# pieces


class FreePiece:
    """Free group on a set of generators; normal form = freely reduced word."""

    def __init__(self, gens):
        self.gens = tuple(sorted(gens))
        self.identity = ()

    def mul(self, nf, x):
        if nf and nf[-1] == x ^ 1:
            return nf[:-1]
        return nf + (x,)

    def word(self, nf):
        return nf

    def geodesic(self, nf):
        return nf


class DihedralPiece:
    """Artin group <a, b | _m(a,b) = _m(b,a)>, 2 <= m < inf.

    Normal form ``(k, P)`` stands for Delta^k P where P is a positive word
    without an alternating factor of length m; such words are the unique
    positive representatives of Delta-free elements.
    """

    ball_limit = 400_000

    def __init__(self, i, j, m):
        if m == INF or m < 2:
            raise ValueError("dihedral piece needs a finite label")
        self.gens = (i, j)
        self.a, self.b = 2 * i, 2 * j
        self.m = m
        self.identity = (0, ())
        self.delta = alternating_word(self.a, self.b, m)
        self._swap = {self.a: self.b, self.b: self.a} if m % 2 else {self.a: self.a, self.b: self.b}
        self._ball = {self.identity: ()}
        self._sphere = [self.identity]
        self._radius = 0
        self._geo = {}

    # -- arithmetic ------------------------------------------------------

    def _phi(self, P):
        s = self._swap
        return tuple(s[x] for x in P)

    def _alternating_tail(self, P):
        m = self.m
        if len(P) < m:
            return False
        tail = P[-m:]
        return all(tail[t] != tail[t + 1] for t in range(m - 1))

    def _mul_pos(self, k, P, x):
        P = P + (x,)
        if self._alternating_tail(P):
            return k + 1, self._phi(P[: -self.m])
        return k, P

    def mul(self, nf, x):
        k, P = nf
        if not x & 1:
            return self._mul_pos(k, P, x)
        y = x ^ 1
        if P and P[-1] == y:
            return k, P[:-1]
        # Delta = W y, so P y^-1 = Delta^-1 phi(P) W
        other = self.b if y == self.a else self.a
        start = y if self.m % 2 else other
        W = alternating_word(start, self.b if start == self.a else self.a, self.m)[:-1]
        k, P = k - 1, self._phi(P)
        for z in W:
            k, P = self._mul_pos(k, P, z)
        return k, P

    def word(self, nf):
        k, P = nf
        d = self.delta if k >= 0 else invert_word(self.delta)
        return d * abs(k) + P

    def garside(self, nf):
        """Left-greedy normal form: (k, [proper simple factors as words])."""
        k, P = nf
        runs = []
        for x in P:
            if runs and runs[-1][-1] != x:
                runs[-1].append(x)
            else:
                runs.append([x])
        return k, [tuple(r) for r in runs]

    # -- geodesics -------------------------------------------------------

    def _letters(self):
        return (self.a, self.a ^ 1, self.b, self.b ^ 1)

    def _grow(self):
        letters = self._letters()
        nxt = {}
        for h in sorted(self._sphere, key=lambda g: self._ball[g]):
            w = self._ball[h]
            for x in letters:
                g = self.mul(h, x)
                if g not in self._ball and g not in nxt:
                    nxt[g] = w + (x,)
        self._ball.update(nxt)
        self._sphere = list(nxt)
        self._radius += 1

    def ensure_radius(self, r):
        while self._radius < r and len(self._ball) < self.ball_limit:
            self._grow()

    def geodesic(self, nf):
        if nf in self._ball:
            return self._ball[nf]
        got = self._geo.get(nf)
        if got is not None:
            return got
        # grow the cached ball a little with demand, then search outward from nf
        if len(self._ball) < self.ball_limit // 8:
            self._grow()
            if nf in self._ball:
                return self._ball[nf]
        letters = self._letters()
        dist = {nf: 0}
        layer = [nf]
        hits = []
        d = 0
        while not hits:
            d += 1
            new = []
            for h in layer:
                for x in letters:
                    g = self.mul(h, x)
                    if g not in dist:
                        dist[g] = d
                        new.append(g)
                        if g in self._ball and len(self._ball[g]) == self._radius:
                            hits.append(g)
            if not new:
                raise OracleError("dihedral geodesic search exhausted")
            layer = new
        # every geodesic from 1 leaves the cached ball through its outer sphere
        h = min(hits, key=lambda g: self._ball[g])
        w = list(self._ball[h])
        cur = h
        while cur != nf:
            for x in letters:
                g = self.mul(cur, x)
                if dist.get(g, -1) == dist[cur] - 1:
                    w.append(x)
                    cur = g
                    break
        w = tuple(w)
        self._geo[nf] = w
        return w

    def all_geodesics(self, nf):
        """Every geodesic word for the element (used by the rewriting backend)."""
        n = len(self.geodesic(nf))
        out = []

        def rec(g, suffix, left):
            if left == 0:
                out.append(tuple(reversed(suffix)))
                return
            for x in self._letters():
                h = self.mul(g, x ^ 1)
                if len(self.geodesic(h)) == left - 1:
                    suffix.append(x)
                    rec(h, suffix, left - 1)
                    suffix.pop()

        rec(nf, [], n)
        return sorted(set(out))


class FreeProductPiece:
    def __init__(self, factors):
        self.factors = tuple(factors)
        self.gens = tuple(sorted(g for f in self.factors for g in f.gens))
        self._route = {g: k for k, f in enumerate(self.factors) for g in f.gens}
        self.identity = ()

    def mul(self, nf, x):
        f = self._route[x >> 1]
        fac = self.factors[f]
        if nf and nf[-1][0] == f:
            new = fac.mul(nf[-1][1], x)
            if new == fac.identity:
                return nf[:-1]
            return nf[:-1] + ((f, new),)
        return nf + ((f, fac.mul(fac.identity, x)),)

    def word(self, nf):
        return tuple(itertools.chain.from_iterable(self.factors[f].word(s) for f, s in nf))

    def geodesic(self, nf):
        return tuple(itertools.chain.from_iterable(self.factors[f].geodesic(s) for f, s in nf))


class DirectProductPiece:
    def __init__(self, factors):
        self.factors = tuple(factors)
        self.gens = tuple(sorted(g for f in self.factors for g in f.gens))
        self._route = {g: k for k, f in enumerate(self.factors) for g in f.gens}
        self.identity = tuple(f.identity for f in self.factors)

    def mul(self, nf, x):
        f = self._route[x >> 1]
        return nf[:f] + (self.factors[f].mul(nf[f], x),) + nf[f + 1:]

    def word(self, nf):
        return tuple(itertools.chain.from_iterable(f.word(s) for f, s in zip(self.factors, nf)))

    def geodesic(self, nf):
        # factors use disjoint letters: the lex-least shuffle is the greedy merge
        parts = [list(f.geodesic(s)) for f, s in zip(self.factors, nf)]
        pos = [0] * len(parts)
        out = []
        while True:
            best = None
            for k, p in enumerate(parts):
                if pos[k] < len(p) and (best is None or p[pos[k]] < parts[best][pos[best]]):
                    best = k
            if best is None:
                return tuple(out)
            out.append(parts[best][pos[best]])
            pos[best] += 1


class RewritingPiece:
    """Bounded length-non-increasing rewriting over dihedral subwords.

    Normal form is the shortlex-least word reachable from the input by free
    reduction and replacement of 2-generator factors by dihedral-equal words
    of no greater length.  Exactness is not guaranteed in general, so the
    owning oracle validates it on a ball before use.
    """

    def __init__(self, matrix, gens, class_cap=20_000):
        self.gens = tuple(sorted(gens))
        self.identity = ()
        self.class_cap = class_cap
        self.dihedral = {}
        for i, j in itertools.combinations(self.gens, 2):
            if matrix.m[i][j] != INF:
                self.dihedral[(i, j)] = DihedralPiece(i, j, matrix.m[i][j])
        self._memo = {}

    def _runs(self, w):
        for (i, j), piece in self.dihedral.items():
            allowed = {i, j}
            start = 0
            n = len(w)
            while start < n:
                if (w[start] >> 1) not in allowed:
                    start += 1
                    continue
                end = start
                while end < n and (w[end] >> 1) in allowed:
                    end += 1
                if end - start >= 2 and len({x >> 1 for x in w[start:end]}) == 2:
                    yield start, end, piece
                start = end

    def _dihedral_nf(self, piece, sub):
        nf = piece.identity
        for x in sub:
            nf = piece.mul(nf, x)
        return nf

    def reduce(self, w):
        w = free_reduce(w)
        got = self._memo.get(w)
        if got is not None:
            return got
        orig = w
        while True:
            shorter = None
            seen = {w}
            queue = deque([w])
            while queue and shorter is None:
                u = queue.popleft()
                for s, e, piece in self._runs(u):
                    nf = self._dihedral_nf(piece, u[s:e])
                    geos = piece.all_geodesics(nf)
                    if len(geos[0]) < e - s:
                        shorter = free_reduce(u[:s] + geos[0] + u[e:])
                        break
                    for g in geos:
                        v = u[:s] + g + u[e:]
                        fv = free_reduce(v)
                        if len(fv) < len(v):
                            shorter = fv
                            break
                        if v not in seen:
                            seen.add(v)
                            if len(seen) > self.class_cap:
                                raise OracleError(f"rewriting class exceeded {self.class_cap} words")
                            queue.append(v)
                    if shorter is not None:
                        break
            if shorter is None:
                best = min(seen)
                self._memo[orig] = best
                return best
            w = shorter

    def mul(self, nf, x):
        return self.reduce(nf + (x,))

    def word(self, nf):
        return nf

    def geodesic(self, nf):
        return nf


def decompose(matrix: CoxeterMatrix, gens=None):
    gens = tuple(range(matrix.n)) if gens is None else tuple(sorted(gens))
    if len(gens) == 1:
        return FreePiece(gens)
    comps = _components(gens, lambda i, j: matrix.m[i][j] != INF)
    if len(comps) > 1:
        singles = [c[0] for c in comps if len(c) == 1]
        factors = [decompose(matrix, c) for c in comps if len(c) > 1]
        if singles:
            factors.append(FreePiece(singles))
        if len(factors) == 1:
            return factors[0]
        return FreeProductPiece(sorted(factors, key=lambda f: f.gens))
    joins = _components(gens, lambda i, j: matrix.m[i][j] != 2)
    if len(joins) > 1:
        return DirectProductPiece([decompose(matrix, c) for c in joins])
    if len(gens) == 2:
        return DihedralPiece(gens[0], gens[1], matrix.m[gens[0]][gens[1]])
    return RewritingPiece(matrix, gens)


def _components(gens, adjacent):
    left = set(gens)
    comps = []
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        left.discard(start)
        while stack:
            i = stack.pop()
            for j in list(left):
                if adjacent(i, j):
                    left.discard(j)
                    comp.add(j)
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return sorted(comps)


def _uses_rewriting(piece):
    if isinstance(piece, RewritingPiece):
        return True
    return any(_uses_rewriting(f) for f in getattr(piece, "factors", ()))


# ---------------------------------------------------------------------------


class ArtinGroup:
    """Word problem, products and geodesic lengths for a supported Artin group."""

    def __init__(self, matrix: CoxeterMatrix, validate_radius=4, check=True):
        if check:
            report = validate_type(matrix)
            if not report.supported:
                raise UnsupportedGroupError(
                    "presentation is not supported: " + ("; ".join(report.reasons) or "labels above 4")
                )
        self.matrix = matrix
        self.piece = decompose(matrix)
        self.identity = Element(self, self.piece.identity)
        self.letters = tuple(range(2 * matrix.n))
        self._shortlex = {}
        self.backend = "rewriting" if _uses_rewriting(self.piece) else "structural"
        if self.backend == "rewriting" and validate_radius:
            self.verify_oracle_on_ball(validate_radius)

    # -- construction ----------------------------------------------------

    def canonical(self, w) -> Element:
        if isinstance(w, str):
            w = self.matrix.parse_word(w)
        nf = self.piece.identity
        for x in w:
            nf = self.piece.mul(nf, x)
        return Element(self, nf)

    def generator(self, x: int) -> Element:
        return Element(self, self.piece.mul(self.piece.identity, x))

    def multiply(self, g: Element, h) -> Element:
        if isinstance(h, Element):
            w = self.piece.word(h.nf)
        elif isinstance(h, int):
            w = (h,)
        else:
            w = h
        nf = g.nf
        for x in w:
            nf = self.piece.mul(nf, x)
        return Element(self, nf)

    def inverse(self, g: Element) -> Element:
        return self.canonical(invert_word(self.piece.word(g.nf)))

    def equal(self, u, v) -> bool:
        return self.canonical(u) == self.canonical(v)

    # -- geodesics -------------------------------------------------------

    def shortlex(self, g: Element):
        w = self._shortlex.get(g.nf)
        if w is None:
            w = self.piece.geodesic(g.nf)
            self._shortlex[g.nf] = w
        return w

    def geodesic_length(self, g: Element) -> int:
        return len(self.shortlex(g))

    def garside_normal_form(self, w):
        """Left-greedy Garside normal form of a word in one dihedral parabolic.

        Returns ``(k, factors)`` meaning Delta^k * factors[0] * factors[1] ...,
        where each factor is a proper simple element given as a positive word.
        """
        if isinstance(w, str):
            w = self.matrix.parse_word(w)
        gens = sorted({x >> 1 for x in w})
        if len(gens) > 2:
            raise ValueError("word involves more than two generators")
        if not gens:
            return 0, []
        if len(gens) == 1:
            other = 1 if gens[0] == 0 else 0
            if self.matrix.n < 2:
                raise ValueError("Garside form needs a dihedral parabolic")
            gens = sorted((gens[0], other))
            if self.matrix.m[gens[0]][gens[1]] == INF:
                candidates = [j for j in range(self.matrix.n) if j != w[0] >> 1 and self.matrix.m[w[0] >> 1][j] != INF]
                if not candidates:
                    raise ValueError("generator lies in no finite parabolic")
                gens = sorted((w[0] >> 1, candidates[0]))
        i, j = gens
        m = self.matrix.m[i][j]
        if m == INF:
            raise ValueError("parabolic has infinite label")
        piece = DihedralPiece(i, j, m)
        nf = piece.identity
        for x in w:
            nf = piece.mul(nf, x)
        return piece.garside(nf)

    # -- balls -----------------------------------------------------------

    def ball(self, radius):
        """Cayley ball: dict Element -> shortlex word, and sphere lists."""
        words = {self.identity: ()}
        spheres = [[self.identity]]
        for _ in range(radius):
            nxt = []
            for h in sorted(spheres[-1], key=lambda e: words[e]):
                for x in self.letters:
                    g = self.multiply(h, x)
                    if g not in words:
                        words[g] = words[h] + (x,)
                        nxt.append(g)
            spheres.append(nxt)
        return words, spheres

    def verify_oracle_on_ball(self, radius):
        """Check every defining relation at every ball vertex; return sphere sizes."""
        rels = self.matrix.presentation().relations
        words, spheres = self.ball(radius)
        for g, w in words.items():
            for left, right in rels:
                if self.multiply(g, left) != self.multiply(g, right):
                    raise OracleError(
                        "relation check failed at " + self.matrix.format_word(w)
                        + " for " + self.matrix.format_word(left) + "=" + self.matrix.format_word(right)
                    )
            if self.shortlex(g) != w:
                raise OracleError("shortlex key disagrees with ball search at " + self.matrix.format_word(w))
        return [len(s) for s in spheres]

    def format(self, g: Element) -> str:
        return self.matrix.format_word(self.shortlex(g))
