"""A finite piece of the systolic complex built from the Cayley graph.

Real vertices are the elements of a Cayley ball.  Every relator circuit
(precell) whose boundary lies in the ball is triangulated: for label m it
gets m-2 interior vertices strung on a path from its initial to its
terminal vertex, each joined to the four flanking boundary vertices (for
m=2 the only addition is the diagonal).  Interior vertices of overlapping
precells are then joined by the local repair pattern and the result is
flag-completed.

Vertex descriptors:
  ('r', g)                 real vertex g
  ('i', g, (i, j), k)      k-th interior vertex of the precell based at g
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .coxeter import CoxeterMatrix, alternating_word, invert_word
from .oracle import ArtinGroup, Element


class InsufficientRadius(RuntimeError):
    """A query needs cells beyond the part of the complex that was built."""


class ConstructionError(RuntimeError):
    pass


def default_radius(matrix: CoxeterMatrix) -> int:
    return 7 if any(matrix.m[i][j] == 4 for i, j in matrix.finite_pairs()) else 4


@dataclass
class Precell:
    base: Element
    pair: tuple
    m: int
    top: list          # base * prefixes of _m(a_i, a_j), lengths 1..m
    bottom: list       # base * prefixes of _m(a_j, a_i), lengths 1..m
    complete: bool
    interior: list = field(default_factory=list)   # vertex ids c_1..c_{m-2}
    added: tuple = (0, 0, 0)                        # vertices, edges, triangles

    @property
    def initial(self):
        return self.base

    @property
    def terminal(self):
        return self.top[-1]

    def halves(self):
        return [self.base] + self.top, [self.base] + self.bottom

    def boundary(self):
        """The 2m boundary vertices in cyclic order."""
        return [self.base] + self.top + self.bottom[-2::-1]


def desc_key(d):
    if d[0] == "r":
        w = d[1].word
        return (0, len(w), w)
    w = d[1].word
    return (1, len(w), w, d[2], d[3])


class Fragment:
    """The built complex piece plus bookkeeping; immutable once returned."""

    def __init__(self, group: ArtinGroup, radius: int):
        self.group = group
        self.matrix = group.matrix
        self.radius = radius
        self.desc = []
        self.vid = {}
        self.adj = []
        self.words = {}
        self.precells = {}
        self.simplices = {}
        self.star_complete = set()
        self.bdist = []
        self.overlap_edges = set()

    # -- vertices --------------------------------------------------------

    def _add_vertex(self, d):
        v = self.vid.get(d)
        if v is None:
            v = len(self.desc)
            self.desc.append(d)
            self.vid[d] = v
            self.adj.append(set())
        return v

    def _add_edge(self, u, v):
        if u == v:
            raise ConstructionError("loop edge")
        new = v not in self.adj[u]
        self.adj[u].add(v)
        self.adj[v].add(u)
        return new

    def real(self, g):
        if isinstance(g, (str, tuple)):
            g = self.group.canonical(g)
        return self.vid.get(("r", g))

    def interior(self, base, pair, k):
        if isinstance(base, (str, tuple)):
            base = self.group.canonical(base)
        return self.vid.get(("i", base, tuple(pair), k))

    def is_real(self, v):
        return self.desc[v][0] == "r"

    def anchor(self, v) -> Element:
        """The real vertex for a real id, the precell base for an interior id."""
        return self.desc[v][1]

    def name(self, v) -> str:
        d = self.desc[v]
        if d[0] == "r":
            return self.group.format(d[1])
        i, j = d[2]
        return f"c:{self.group.format(d[1])}:{self.matrix.names[i]}{self.matrix.names[j]}:{d[3]}"

    def sort_key(self, v):
        return desc_key(self.desc[v])

    def translate(self, h: Element, v):
        """Id of h·v, or None when that vertex was not built."""
        d = self.desc[v]
        g = h * d[1]
        return self.vid.get((d[0], g) + d[2:])

    def translate_simplex(self, h, sigma):
        out = []
        for v in sigma:
            t = self.translate(h, v)
            if t is None:
                return None
            out.append(t)
        return frozenset(out)

    # -- structure -------------------------------------------------------

    @property
    def n_vertices(self):
        return len(self.desc)

    def edges(self):
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u < v:
                    yield u, v

    def is_simplex(self, vs):
        vs = list(vs)
        return all(b in self.adj[a] for a, b in itertools.combinations(vs, 2))

    def visible(self, sigma) -> bool:
        return max(self.bdist[v] for v in sigma) >= 2

    def require_visible(self, sigma):
        if not self.visible(sigma):
            raise InsufficientRadius("link of " + self.simplex_name(sigma) + " reaches the edge of the built ball")

    def simplex_name(self, sigma):
        return "{" + ",".join(self.name(v) for v in sorted(sigma, key=self.sort_key)) + "}"

    def precell_of(self, v):
        d = self.desc[v]
        if d[0] != "i":
            return None
        return self.precells[(d[1], d[2])]


# ---------------------------------------------------------------------------
# overlap shapes


def overlap_partner(group, pc: Precell, half: int, k: int):
    """Base of the precell whose half boundary ends with the first k edges of
    ``pc``'s given half (so that precell's terminal vertex lies on ``pc``)."""
    i, j = pc.pair
    a, b = 2 * i, 2 * j
    m = pc.m
    first = a if half == 0 else b
    other = b if first == a else a
    start = first if (m - k) % 2 == 0 else other
    w = alternating_word(start, b if start == a else a, m)
    return pc.base * invert_word(w[: m - k])


def zigzag_pattern(m, k):
    """Edges (c_i of the later precell, c_j of the earlier one) for overlap length k."""
    out = []
    for i in range(1, k):
        for j in (m - k + i - 1, m - k + i):
            if 1 <= j <= m - 2:
                out.append((i, j))
    return tuple(out)


_PATTERNS = {}


def overlap_pattern(m):
    """Resolved repair pattern {k: edge tuple} for label m (cached)."""
    if m in _PATTERNS:
        return _PATTERNS[m]
    if m <= 2:
        _PATTERNS[m] = {}
        return _PATTERNS[m]
    _PATTERNS[m] = search_overlap_pattern(m)
    return _PATTERNS[m]


def search_overlap_pattern(m, radius=None):
    """Find the unique smallest edge choice that makes the dihedral complex 6-large.

    Candidate edges for overlap length k join c_i (i < k, the vertices next
    to the shared path on the later precell) with c_j (j >= m-k) on the
    earlier precell.  Every combination over all k is tried; link checks are
    done at v0 and at the interior vertices of the base precell, which is
    enough by equivariance.
    """
    names = ("a", "b")
    mx = CoxeterMatrix.from_labels(names, {("a", "b"): m})
    group = ArtinGroup(mx)
    radius = radius or 2 * m + 1
    frag = _build(group, radius, patterns={})
    ks = list(range(2, m))
    cand = {k: [(i, j) for i in range(1, k) for j in range(m - k, m - 1)] for k in ks}
    pairs = _overlap_pairs(frag)
    everything = {k: tuple(cand[k]) for k in ks}
    full_edges = _pattern_edges(frag, pairs, everything)
    adj = [set(s) for s in frag.adj]
    for u, v in full_edges:
        adj[u].add(v)
        adj[v].add(u)
    bd = _boundary_distance(adj, frag.star_complete)
    p0 = frag.precells[(group.identity, (0, 1))]
    probe = [frag.real(group.identity)] + p0.interior
    if min(bd[v] for v in probe) < 2:
        raise InsufficientRadius("pattern search radius too small")
    subsets = {k: [tuple(c) for r in range(len(cand[k]) + 1) for c in itertools.combinations(cand[k], r)] for k in ks}
    good = []
    for combo in itertools.product(*(subsets[k] for k in ks)):
        pattern = dict(zip(ks, combo))
        edges = _pattern_edges(frag, pairs, pattern)
        adj = [set(s) for s in frag.adj]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        if not _overlap_neighbours_adjacent(frag, adj, pairs):
            continue
        if all(not _bad_cycles(adj, v, limit=1) for v in probe):
            good.append(pattern)
    if not good:
        raise ConstructionError(f"no overlap pattern repairs the links for m={m}")
    size = min(sum(len(p[k]) for k in ks) for p in good)
    best = [p for p in good if sum(len(p[k]) for k in ks) == size]
    if len(best) != 1:
        raise ConstructionError(f"minimal overlap pattern for m={m} is not unique ({len(best)} choices)")
    return best[0]


def _overlap_pairs(frag):
    """(k, later precell, earlier precell) for every overlapping complete pair."""
    out = []
    for key, pc in frag.precells.items():
        if not pc.complete or pc.m < 3:
            continue
        for half in (0, 1):
            for k in range(2, pc.m):
                h = overlap_partner(frag.group, pc, half, k)
                other = frag.precells.get((h, pc.pair))
                if other is not None and other.complete:
                    out.append((k, pc, other))
    return out


def _pattern_edges(frag, pairs, pattern):
    edges = set()
    for k, later, earlier in pairs:
        for i, j in pattern.get(k, ()):
            u, v = later.interior[i - 1], earlier.interior[j - 1]
            edges.add((min(u, v), max(u, v)))
    return edges


def _overlap_neighbours_adjacent(frag, adj, pairs):
    """If u in one precell joins u2, u3 of an overlapping one then u2u3 is an edge."""
    for _, p, q in pairs:
        for x, y in ((p, q), (q, p)):
            ys = set(y.interior)
            for u in x.interior:
                hit = [w for w in adj[u] if w in ys]
                for w1, w2 in itertools.combinations(hit, 2):
                    if w2 not in adj[w1]:
                        return False
    return True


# ---------------------------------------------------------------------------
# construction


def build_fragment(matrix: CoxeterMatrix, radius=None, overlap=True, group=None) -> Fragment:
    group = group or ArtinGroup(matrix)
    radius = default_radius(matrix) if radius is None else radius
    if radius < 2:
        raise ValueError("radius must be at least 2")
    if overlap:
        patterns = {m: overlap_pattern(m) for m in {matrix.m[i][j] for i, j in matrix.finite_pairs()}}
    else:
        patterns = {}
    return _build(group, radius, patterns)


def _build(group, radius, patterns):
    frag = Fragment(group, radius)
    words, spheres = group.ball(radius)
    frag.words = words
    for sphere in spheres:
        for g in sorted(sphere, key=lambda e: words[e]):
            frag._add_vertex(("r", g))
    n = group.matrix.n
    for g in words:
        u = frag.vid[("r", g)]
        for i in range(n):
            v = frag.vid.get(("r", g * (2 * i)))
            if v is not None:
                frag._add_edge(u, v)
    pairs = group.matrix.finite_pairs()
    for g in sorted(words, key=lambda e: words[e]):
        for pair in pairs:
            pc = make_precell(group, g, pair, words)
            frag.precells[(g, pair)] = pc
            if pc.complete:
                triangulate_precell(frag, pc)
            elif pc.m == 2 and g in words and pc.terminal in words:
                # the diagonal is determined by its endpoints alone
                frag._add_edge(frag.vid[("r", g)], frag.vid[("r", pc.terminal)])
    for k, later, earlier in _overlap_pairs(frag):
        for i, j in patterns.get(later.m, {}).get(k, ()):
            u, v = later.interior[i - 1], earlier.interior[j - 1]
            if frag._add_edge(u, v):
                frag.overlap_edges.add((min(u, v), max(u, v)))
    _mark_star_complete(frag)
    frag.bdist = _boundary_distance(frag.adj, frag.star_complete)
    _flag_complete(frag)
    return frag


def make_precell(group, g, pair, words):
    i, j = pair
    m = group.matrix.m[i][j]
    top, bottom = [], []
    x, y = g, g
    for k in range(m):
        x = x * (2 * i if k % 2 == 0 else 2 * j)
        y = y * (2 * j if k % 2 == 0 else 2 * i)
        top.append(x)
        bottom.append(y)
    if top[-1] != bottom[-1]:
        raise ConstructionError("relator circuit does not close")
    complete = g in words and all(v in words for v in top + bottom)
    return Precell(g, pair, m, top, bottom, complete)


def triangulate_precell(frag: Fragment, pc: Precell):
    """Add the interior cells of a complete precell; returns the added counts."""
    if not pc.complete:
        raise InsufficientRadius("precell is not complete")
    r = lambda g: frag.vid[("r", g)]
    m = pc.m
    new_edges = []
    new_vertices = []
    if m == 2:
        new_edges.append((r(pc.base), r(pc.terminal)))
    else:
        cs = [frag._add_vertex(("i", pc.base, pc.pair, k)) for k in range(1, m - 1)]
        new_vertices = cs
        pc.interior = cs
        path = [r(pc.base)] + cs + [r(pc.terminal)]
        new_edges += list(zip(path, path[1:]))
        for k, c in enumerate(cs, start=1):
            for v in (pc.top[k - 1], pc.top[k], pc.bottom[k - 1], pc.bottom[k]):
                new_edges.append((c, r(v)))
    for u, v in new_edges:
        frag._add_edge(u, v)
    # triangles of this precell's own triangulation that use an added edge
    local = set(r(v) for v in pc.boundary()) | set(new_vertices)
    own = {frozenset(e) for e in new_edges}
    bnd = pc.boundary()
    for a_, b_ in zip(bnd, bnd[1:] + bnd[:1]):
        own.add(frozenset((r(a_), r(b_))))
    tri = 0
    for t in itertools.combinations(sorted(local), 3):
        es = [frozenset(p) for p in itertools.combinations(t, 2)]
        if all(e in own for e in es) and any(frozenset(e) in {frozenset(x) for x in new_edges} for e in es):
            tri += 1
    pc.added = (len(new_vertices), len(set(frozenset(e) for e in new_edges)), tri)
    return pc.added


def _precells_containing(frag, g):
    """Keys of all precells (built or not) having real vertex g on the boundary."""
    out = []
    for pair in frag.matrix.finite_pairs():
        i, j = pair
        m = frag.matrix.m[i][j]
        for start in (2 * i, 2 * j):
            w = alternating_word(start, 2 * j if start == 2 * i else 2 * i, m)
            for k in range(1, m + 1):
                out.append((g * invert_word(w[:k]), pair))
        out.append((g, pair))
    return set(out)


def _is_complete(frag, key):
    pc = frag.precells.get(key)
    return pc is not None and pc.complete


def _mark_star_complete(frag):
    group = frag.group
    for v, d in enumerate(frag.desc):
        if d[0] == "r":
            g = d[1]
            if len(frag.words[g]) >= frag.radius:
                continue
            if all(_is_complete(frag, key) for key in _precells_containing(frag, g)):
                frag.star_complete.add(v)
        else:
            pc = frag.precells[(d[1], d[2])]
            ok = True
            for half in (0, 1):
                for k in range(2, pc.m):
                    h = overlap_partner(group, pc, half, k)
                    if not _is_complete(frag, (h, pc.pair)):
                        ok = False
                    # precells whose initial vertex lies on this one
                    for key in _later_partners(group, pc, half, k):
                        if not _is_complete(frag, key):
                            ok = False
            if ok:
                frag.star_complete.add(v)


def _later_partners(group, pc, half, k):
    """Precells whose first k boundary edges run along the end of ``pc``'s half."""
    i, j = pc.pair
    a, b = 2 * i, 2 * j
    first = a if half == 0 else b
    w = alternating_word(first, b if first == a else a, pc.m)
    h = pc.base * w[: pc.m - k]
    return [(h, pc.pair)]


def _boundary_distance(adj, good):
    """1 + graph distance to the nearest vertex outside ``good`` (so those get 1)."""
    n = len(adj)
    dist = [-1] * n
    queue = deque()
    for v in range(n):
        if v not in good:
            dist[v] = 0
            queue.append(v)
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    big = n + 1
    return [d + 1 if d >= 0 else big for d in dist]


def _flag_complete(frag, max_size=5):
    """Every clique (up to max_size vertices) becomes a simplex."""
    simplices = {0: set((v,) for v in range(frag.n_vertices))}
    order = list(range(frag.n_vertices))

    def extend(clique, cands):
        size = len(clique)
        simplices.setdefault(size - 1, set()).add(tuple(clique))
        if size == max_size + 1:
            return
        for w in sorted(cands):
            extend(clique + [w], cands & {x for x in frag.adj[w] if x > w})

    for v in order:
        extend([v], {x for x in frag.adj[v] if x > v})
    if max_size in simplices:
        # a clique on max_size+1 vertices inside the exact region breaks the dimension bound
        bad = [s for s in simplices[max_size] if frag.star_complete.issuperset(s)]
        if bad:
            raise ConstructionError("clique on six vertices: " + frag.simplex_name(bad[0]))
        del simplices[max_size]
    frag.simplices = simplices


# ---------------------------------------------------------------------------
# queries


@dataclass(frozen=True)
class Subcomplex:
    vertices: frozenset
    simplices: frozenset   # frozensets of vertex ids, including singletons

    def edges(self):
        return sorted(tuple(sorted(s)) for s in self.simplices if len(s) == 2)

    def dimension(self):
        return max((len(s) - 1 for s in self.simplices), default=-1)


def _as_simplex(sigma):
    if isinstance(sigma, int):
        return frozenset((sigma,))
    return frozenset(sigma)


def _cliques_within(frag, vs, base=frozenset()):
    """All nonempty cliques S of ``vs`` with S ∪ base a clique."""
    vs = sorted(vs)
    out = []

    def rec(clique, cands):
        for idx, w in enumerate(cands):
            c = clique + (w,)
            out.append(frozenset(c))
            rec(c, [x for x in cands[idx + 1:] if x in frag.adj[w]])

    rec((), [v for v in vs if all(v in frag.adj[b] for b in base)])
    return out


def link_vertices(frag, sigma):
    sigma = _as_simplex(sigma)
    frag.require_visible(sigma)
    it = iter(sigma)
    common = set(frag.adj[next(it)])
    for v in it:
        common &= frag.adj[v]
    return frozenset(common - sigma)


def link_of(sigma, frag) -> Subcomplex:
    sigma = _as_simplex(sigma)
    if not frag.is_simplex(sigma):
        raise ValueError("not a simplex: " + frag.simplex_name(sigma))
    vs = link_vertices(frag, sigma)
    return Subcomplex(vs, frozenset(_cliques_within(frag, vs)))


def residue_in(rho, Y: Subcomplex, frag) -> Subcomplex:
    """Closed star of rho in Y."""
    rho = _as_simplex(rho)
    if rho not in Y.simplices:
        raise ValueError("simplex is not in the subcomplex")
    cand = {v for v in Y.vertices - rho if all(v in frag.adj[u] for u in rho)}
    simp = {s for s in Y.simplices if s <= rho | cand and frag.is_simplex(s | rho)}
    return Subcomplex(frozenset(rho | cand), frozenset(simp))


def one_ball_in(tau, Y: Subcomplex, frag) -> Subcomplex:
    """Union of closed simplices of Y meeting tau."""
    tau = _as_simplex(tau)
    if tau not in Y.simplices:
        raise ValueError("simplex is not in the subcomplex")
    simp = set()
    for s in Y.simplices:
        if s & tau:
            simp.add(s)
    faces = set()
    for s in simp:
        for r in range(1, len(s) + 1):
            faces.update(frozenset(c) for c in itertools.combinations(s, r))
    verts = frozenset(v for s in faces for v in s)
    return Subcomplex(verts, frozenset(faces))


def res_vertices(frag, rho, link_vs):
    return frozenset(rho) | {v for v in link_vs if v not in rho and all(v in frag.adj[u] for u in rho)}


def ball_vertices(frag, tau, link_vs):
    return frozenset(tau) | {v for v in link_vs if any(v in frag.adj[u] for u in tau)}


def _bad_cycles(adj, v, limit=None):
    """Induced 4- and 5-cycles in the neighbour graph of v."""
    nb = sorted(adj[v])
    nbs = set(nb)
    local = {u: adj[u] & nbs for u in nb}
    found = []
    # 4-cycles a-b-c-d with a<b,c,d and no chords
    for a in nb:
        for b, d in itertools.combinations(sorted(local[a]), 2):
            if b < a or d < a or d in local[b]:
                continue
            for c in local[b] & local[d]:
                if c > a and c not in local[a] and c != a:
                    found.append((a, b, c, d))
                    if limit and len(found) >= limit:
                        return found
    # 5-cycles a-b-c-d-e, a smallest, b < e to fix orientation
    for a in nb:
        for b in local[a]:
            if b < a:
                continue
            for c in local[b]:
                if c <= a or c in local[a]:
                    continue
                for d in local[c]:
                    if d <= a or d == b or d in local[a] or d in local[b]:
                        continue
                    for e in local[d] & local[a]:
                        if e <= b or e == c or e in local[b] or e in local[c]:
                            continue
                        found.append((a, b, c, d, e))
                        if limit and len(found) >= limit:
                            return found
    return found


@dataclass
class LargenessReport:
    checked: int
    violations: list   # (vertex, cycle)

    @property
    def ok(self):
        return not self.violations


def check_six_large(frag, limit_per_vertex=1) -> LargenessReport:
    """Look for full 4- and 5-cycles in links of vertices whose link is visible."""
    checked = 0
    bad = []
    for v in range(frag.n_vertices):
        if frag.bdist[v] < 2:
            continue
        checked += 1
        cyc = _bad_cycles(frag.adj, v, limit=limit_per_vertex)
        if cyc:
            bad.append((v, cyc[0]))
    return LargenessReport(checked, bad)


def x1_distances(frag, source):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in frag.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def dump_complex(frag) -> str:
    lines = []
    for v in range(frag.n_vertices):
        kind = "real" if frag.is_real(v) else "interior"
        lines.append(f"v {frag.name(v)} {kind} {frag.group.format(frag.anchor(v))}")
    for u, v in frag.edges():
        a, b = sorted((frag.name(u), frag.name(v)))
        lines.append(f"e {a} {b}")
    for dim, ss in frag.simplices.items():
        if dim < 2:
            continue
        for s in ss:
            lines.append(f"s {dim} " + " ".join(sorted(frag.name(v) for v in s)))
    for (g, (i, j)), pc in frag.precells.items():
        if pc.complete:
            lines.append(f"p {frag.group.format(g)} {frag.matrix.names[i]} {frag.matrix.names[j]}")
    return "\n".join(sorted(lines)) + "\n"
