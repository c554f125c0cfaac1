"""Orbit representatives, simplex labels and the alphabets built from them.

Every simplex is a translate of exactly one representative.  The
candidates for the representative of ``sigma`` are the translates
``anchor(u)^-1 * sigma`` for u in sigma, where the anchor of a real vertex
is itself and that of an interior vertex is its precell's base.  This
candidate set depends only on the orbit, so any rule picking one of them is
orbit-invariant.  We take the candidate meeting the base precell of some
finite parabolic in the most vertices, breaking ties by sorted vertex
descriptors (real vertices before interior ones, elements in shortlex).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .complex import Fragment, InsufficientRadius, desc_key
from .coxeter import alternating_word
from .oracle import Element


class LabelError(RuntimeError):
    pass


def _base_precell_vertices(frag: Fragment):
    """Vertex sets of the precells based at the identity, one per finite pair."""
    out = []
    one = frag.group.identity
    for pair in frag.matrix.finite_pairs():
        pc = frag.precells.get((one, pair))
        if pc is None or not pc.complete:
            raise InsufficientRadius("base precell not built")
        vs = {frag.vid[("r", g)] for g in pc.boundary()} | set(pc.interior)
        out.append(frozenset(vs))
    return out


def _rep_order(frag, sigma, base_sets):
    best = max((len(sigma & b) for b in base_sets), default=0)
    keys = sorted(_tie_key(frag.desc[v]) for v in sigma)
    return (-best, tuple(keys))


def _tie_key(d):
    return desc_key(d)


class LabelTable:
    """Representatives and labels, computed on demand and memoized."""

    def __init__(self, frag: Fragment):
        self.frag = frag
        self.base_sets = _base_precell_vertices(frag)
        self._memo = {}

    def rep_and_label(self, sigma):
        sigma = frozenset((sigma,)) if isinstance(sigma, int) else frozenset(sigma)
        got = self._memo.get(sigma)
        if got is not None:
            return got
        frag = self.frag
        best = None
        for u in sigma:
            h = frag.anchor(u)
            cand = frag.translate_simplex(h.inverse(), sigma)
            if cand is None:
                raise InsufficientRadius("translate of " + frag.simplex_name(sigma) + " leaves the built ball")
            key = _rep_order(frag, cand, self.base_sets)
            if best is None or key < best[0]:
                best = (key, cand, h)
        _, rep, lam = best
        self._memo[sigma] = (rep, lam)
        return rep, lam

    def rep(self, sigma):
        return self.rep_and_label(sigma)[0]

    def label(self, sigma) -> Element:
        return self.rep_and_label(sigma)[1]


def canonical_rep_and_label(sigma, frag, table=None):
    table = table or LabelTable(frag)
    return table.rep_and_label(sigma)


@dataclass
class OrbitTable:
    frag: Fragment
    labels: LabelTable
    reps: dict = field(default_factory=dict)   # dimension -> sorted list of rep simplices

    @property
    def v0(self):
        return self.frag.real(self.frag.group.identity)

    def counts(self):
        return {d: len(r) for d, r in sorted(self.reps.items())}

    def all_reps(self):
        return [s for d in sorted(self.reps) for s in self.reps[d]]

    def name(self, sigma):
        return self.frag.simplex_name(sigma)


def _near_origin(frag):
    """Vertices every representative must contain one of."""
    one = frag.group.identity
    core = [frag.real(one)]
    for pair in frag.matrix.finite_pairs():
        core += frag.precells[(one, pair)].interior
    return core


def choose_orbit_tables(frag: Fragment) -> OrbitTable:
    table = LabelTable(frag)
    core = _near_origin(frag)
    for v in core:
        if v not in frag.star_complete:
            raise InsufficientRadius("star of " + frag.name(v) + " is not fully built")
    seen = set()
    for v in core:
        nb = sorted(frag.adj[v])
        # all cliques containing v
        stack = [((v,), [w for w in nb])]
        while stack:
            clique, cands = stack.pop()
            seen.add(frozenset(clique))
            for idx, w in enumerate(cands):
                stack.append((clique + (w,), [x for x in cands[idx + 1:] if x in frag.adj[w]]))
    reps = {}
    for s in seen:
        r = table.rep(s)
        reps.setdefault(len(r) - 1, set()).add(r)
    out = OrbitTable(frag, table)
    for d, rs in reps.items():
        out.reps[d] = sorted(rs, key=lambda s: sorted(_tie_key(frag.desc[v]) for v in s))
    verify_based_on_base_precell(out)
    return out


def verify_based_on_base_precell(table: OrbitTable):
    """The representatives contain v0, the real edges at v0 on each base
    precell, all interior cells of those precells, and every representative
    meets a base precell."""
    frag = table.frag
    one = frag.group.identity
    v0 = frag.real(one)
    reps = set(table.all_reps())
    problems = []
    if frozenset((v0,)) not in reps:
        problems.append("v0 is not a representative")
    for pair in frag.matrix.finite_pairs():
        pc = frag.precells[(one, pair)]
        for g in (pc.top[0], pc.bottom[0]):
            e = frozenset((v0, frag.real(g)))
            if e not in reps:
                problems.append("real edge " + frag.simplex_name(e) + " is not a representative")
        inner = set(pc.interior)
        local = inner | {frag.real(g) for g in pc.boundary()}
        for c in inner:
            if frozenset((c,)) not in reps:
                problems.append("interior vertex " + frag.name(c) + " is not a representative")
            for w in frag.adj[c]:
                if w in local:
                    e = frozenset((c, w))
                    if e not in reps:
                        problems.append("interior edge " + frag.simplex_name(e) + " is not a representative")
    base_sets = table.labels.base_sets
    if base_sets:
        for r in reps:
            if not any(r & b for b in base_sets):
                problems.append(frag.simplex_name(r) + " misses every base precell")
    if problems:
        raise LabelError("; ".join(problems))


# ---------------------------------------------------------------------------
# alphabets


@dataclass
class Alphabet:
    symbols: list      # display names, identity first
    values: dict       # name -> Element

    def __len__(self):
        return len(self.symbols)

    def value(self, name):
        return self.values[name]

    def element_set(self):
        return set(self.values.values())

    def inverse(self, name):
        target = self.values[name].inverse()
        for n, v in self.values.items():
            if v == target:
                return n
        raise KeyError(name)


def _alphabet_from(group, elements):
    elements = set(elements) | {group.identity}
    ordered = sorted(elements, key=lambda e: (len(e.word), _letter_key(e.word)))
    names = [group.format(e) for e in ordered]
    return Alphabet(names, dict(zip(names, ordered)))


def _letter_key(w):
    return tuple(w)


def garside_generators(group):
    """X plus, per finite parabolic, all alternating words of length < m and Delta."""
    mx = group.matrix
    out = {group.canonical((2 * i,)) for i in range(mx.n)}
    for i, j in mx.finite_pairs():
        m = mx.m[i][j]
        for k in range(1, m):
            out.add(group.canonical(alternating_word(2 * i, 2 * j, k)))
            out.add(group.canonical(alternating_word(2 * j, 2 * i, k)))
        out.add(group.canonical(alternating_word(2 * i, 2 * j, m)))
    return out


def build_alphabets(table: OrbitTable):
    """Return (A, B).  A: labels of disjoint spanning pairs; B: of nested pairs."""
    frag = table.frag
    group = frag.group
    lab = table.labels.label
    a_set, b_set = set(), set()
    for psi in table.all_reps():
        verts = sorted(psi)
        for r in range(1, len(verts)):
            for rho in itertools.combinations(verts, r):
                rho = frozenset(rho)
                tau = psi - rho
                a_set.add(lab(rho).inverse() * lab(tau))
        for r in range(1, len(verts) + 1):
            for sub in itertools.combinations(verts, r):
                sub = frozenset(sub)
                x = lab(sub).inverse() * lab(psi)
                b_set.add(x)
                b_set.add(x.inverse())
    A = _alphabet_from(group, a_set)
    B = _alphabet_from(group, b_set)
    expected = garside_generators(group)
    expected = expected | {g.inverse() for g in expected} | {group.identity}
    if A.element_set() != expected:
        raise LabelError("alphabet A differs from the Garside generators and inverses")
    return A, B
