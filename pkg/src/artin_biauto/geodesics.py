"""Directed geodesics, allowable geodesics and polygonal paths."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complex import (
    Fragment,
    InsufficientRadius,
    ball_vertices,
    link_vertices,
    res_vertices,
    x1_distances,
)


class GeodesicError(RuntimeError):
    """Zero or several directed geodesics where exactly one must exist."""


@dataclass(frozen=True)
class DirectedGeodesic:
    simplices: tuple   # frozensets of vertex ids

    def __len__(self):
        return len(self.simplices) - 1

    @property
    def length(self):
        return len(self.simplices) - 1

    def __getitem__(self, k):
        return self.simplices[k]


def _fs(x):
    return frozenset((x,)) if isinstance(x, int) else frozenset(x)


def condition_two(frag, prev, mid, nxt, link_vs=None):
    """Res(prev, link mid) and B1(nxt, link mid) share no vertex."""
    link_vs = link_vertices(frag, mid) if link_vs is None else link_vs
    if not (prev <= link_vs and nxt <= link_vs):
        return False
    return not (res_vertices(frag, prev, link_vs) & ball_vertices(frag, nxt, link_vs))


def spans(frag, s, t):
    return not (s & t) and frag.is_simplex(s | t)


def is_directed_geodesic(seq, frag: Fragment):
    """(True, None) or (False, first failing position)."""
    seq = [_fs(s) for s in seq]
    for i in range(len(seq) - 1):
        if not spans(frag, seq[i], seq[i + 1]):
            return False, i
    for i in range(len(seq) - 2):
        if not condition_two(frag, seq[i], seq[i + 1], seq[i + 2]):
            return False, i + 1
    return True, None


def _cliques(frag, verts):
    verts = sorted(verts)
    out = []

    def rec(clique, cands):
        for idx, w in enumerate(cands):
            c = clique + (w,)
            out.append(frozenset(c))
            rec(c, [x for x in cands[idx + 1:] if x in frag.adj[w]])

    rec((), verts)
    return out


def directed_geodesic_between(v, w, frag: Fragment) -> DirectedGeodesic:
    """The unique directed geodesic from vertex v to vertex w, by layered search."""
    dv = x1_distances(frag, v)
    if w not in dv:
        raise InsufficientRadius("vertices are not connected inside the built piece")
    d = dv[w]
    for u, k in dv.items():
        if k < d and u not in frag.star_complete:
            raise InsufficientRadius("ball of radius d about the start is not fully built")
    if d == 0:
        return DirectedGeodesic((frozenset((v,)),))
    dw = x1_distances(frag, w)
    layers = [[u for u, k in dv.items() if k == i and dw.get(u) == d - i] for i in range(d + 1)]
    options = [_cliques(frag, L) for L in layers]
    options[0] = [frozenset((v,))]
    options[d] = [frozenset((w,))]
    found = []

    def rec(path):
        i = len(path)
        if i == d + 1:
            found.append(tuple(path))
            return
        for s in options[i]:
            if not frag.is_simplex(path[-1] | s):
                continue
            if i >= 2 and not condition_two(frag, path[-2], path[-1], s):
                continue
            path.append(s)
            rec(path)
            path.pop()

    rec([frozenset((v,))])
    if len(found) != 1:
        raise GeodesicError(
            f"found {len(found)} directed geodesics from {frag.name(v)} to {frag.name(w)}"
        )
    return DirectedGeodesic(found[0])


def allowable_geodesics_of(gamma: DirectedGeodesic, frag: Fragment):
    seq = [tuple(sorted(s)) for s in gamma.simplices]
    out = []
    for choice in itertools.product(*seq):
        if all(choice[k + 1] in frag.adj[choice[k]] for k in range(len(choice) - 1)):
            out.append(list(choice))
    if out:
        d = x1_distances(frag, out[0][0]).get(out[0][-1])
        for path in out:
            if d is not None and len(path) - 1 != d:
                raise GeodesicError("allowable path is not a 1-skeleton geodesic")
    return out


def polygonal_path_of(gamma: DirectedGeodesic):
    s = gamma.simplices
    out = [s[0]]
    for a, b in zip(s, s[1:]):
        out += [a | b, b]
    return out


def extend_to_real_vertex(gamma: DirectedGeodesic, frag: Fragment, max_steps=None) -> DirectedGeodesic:
    """Replace the last simplex by one of its vertices and walk on to a real vertex."""
    seq = list(gamma.simplices)
    last = seq[-1]
    if len(last) == 1 and frag.is_real(next(iter(last))):
        return gamma
    if max_steps is None:
        finite = [frag.matrix.m[i][j] for i, j in frag.matrix.finite_pairs()]
        max_steps = max(finite, default=2) - 2
    verts = sorted(last, key=lambda u: (not frag.is_real(u), frag.sort_key(u)))
    if len(seq) == 1:
        return DirectedGeodesic((frozenset((verts[0],)),))
    prev = seq[-2]
    for u in verts:
        head = seq[:-1] + [frozenset((u,))]
        if frag.is_real(u):
            return DirectedGeodesic(tuple(head))
        tail = _walk_to_real(frag, prev, u, max_steps)
        if tail is not None:
            return DirectedGeodesic(tuple(head + [frozenset((x,)) for x in tail]))
    raise GeodesicError("no extension to a real vertex within the step bound")


def _walk_to_real(frag, prev, u, steps):
    """Shortest vertex walk u -> ... -> real keeping condition (2) at each step."""
    frontier = [(prev, frozenset((u,)), [])]
    for _ in range(steps):
        nxt = []
        for p, cur, tail in frontier:
            link = link_vertices(frag, cur)
            cands = sorted(link, key=lambda x: (not frag.is_real(x), frag.sort_key(x)))
            for x in cands:
                s = frozenset((x,))
                if not condition_two(frag, p, cur, s, link):
                    continue
                if frag.is_real(x):
                    return tail + [x]
                nxt.append((cur, s, tail + [x]))
        frontier = nxt
        if not frontier:
            return None
    return None
