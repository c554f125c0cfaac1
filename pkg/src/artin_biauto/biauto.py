"""Word acceptor, multipliers and checks for the biautomatic structure.

The acceptor reads labels mu_1 ... mu_n of directed geodesics
sigma_0 = v0, sigma_1, ..., sigma_n = g v0, where mu_i is
lambda(sigma_{i-1})^-1 lambda(sigma_i).  A state records the last two
simplices translated into the frame of the last one, so the last simplex
is always an orbit representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex import InsufficientRadius, ball_vertices, link_vertices, res_vertices
from .fsa import PAD, Fsa, determinize, make_fsa, minimize, pair_alphabet
from .labels import Alphabet, OrbitTable, build_alphabets, choose_orbit_tables


class AcceptorError(RuntimeError):
    pass


START = "start"


@dataclass
class Acceptor:
    """The synthesized NFA, its minimized DFA and what is needed to trace words."""

    table: OrbitTable
    alphabet: Alphabet
    nfa: Fsa
    dfa: Fsa
    states: list                     # NFA state -> START or (P, S) frame pair
    moves: dict = field(default_factory=dict)   # frame pair -> [(symbol, sigma', target pair)]
    _conj: dict = field(default_factory=dict, repr=False)

    @property
    def frag(self):
        return self.table.frag

    @property
    def group(self):
        return self.table.frag.group

    def conjugator(self, x, d, y):
        """x^-1 d y for symbols x, y (padding counts as 1), memoized."""
        key = (x, d, y)
        got = self._conj.get(key)
        if got is None:
            g = d
            if x != PAD:
                g = self.alphabet.value(x).inverse() * g
            if y != PAD:
                g = g * self.alphabet.value(y)
            got = self._conj[key] = g
        return got

    def value(self, word):
        g = self.group.identity
        for sym in word:
            g = g * self.alphabet.value(sym)
        return g


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


class _Synth:
    def __init__(self, table: OrbitTable, alphabet: Alphabet):
        self.table = table
        self.frag = table.frag
        self.labels = table.labels
        self.names = {v: k for k, v in alphabet.values.items()}
        self.v0 = frozenset((table.v0,))

    def normalize(self, span, sigma):
        """Translate (span, sigma) so that sigma becomes its representative."""
        rep, lam = self.labels.rep_and_label(sigma)
        moved = self.frag.translate_simplex(lam.inverse(), span)
        if moved is None:
            raise InsufficientRadius("translate of " + self.frag.simplex_name(span) + " leaves the built ball")
        return (moved, rep), lam

    def symbol(self, lam):
        try:
            return self.names[lam]
        except KeyError:
            raise AcceptorError("label " + self.frag.group.format(lam) + " is not in the alphabet") from None

    def moves_from(self, state):
        """(symbol, sigma', next frame pair) for every allowed next simplex."""
        frag = self.frag
        if state == START:
            S, prev = self.v0, None
        else:
            P, S = state
            prev = P - S
        link = link_vertices(frag, S)
        res = res_vertices(frag, prev, link) if prev is not None else frozenset()
        out = []
        for nxt in _cliques(frag, link):
            if prev is not None and res & ball_vertices(frag, nxt, link):
                continue
            pair, lam = self.normalize(S | nxt, nxt)
            out.append((self.symbol(lam), nxt, pair))
        return out


def synthesize_acceptor(frag, table: OrbitTable = None, alphabet: Alphabet = None) -> Acceptor:
    """Explore frame pairs from the start state and build the acceptor."""
    table = table or choose_orbit_tables(frag)
    if alphabet is None:
        alphabet, _ = build_alphabets(table)
    syn = _Synth(table, alphabet)
    index = {START: 0}
    states = [START]
    trans = []
    moves = {}
    k = 0
    while k < len(states):
        st = states[k]
        moves[st] = syn.moves_from(st)
        for sym, _, pair in moves[st]:
            if pair not in index:
                index[pair] = len(states)
                states.append(pair)
            trans.append((k, sym, index[pair]))
        k += 1
    accepting = {0} | {i for i, st in enumerate(states) if st != START and st[1] == syn.v0}
    nfa = make_fsa(alphabet.symbols, len(states), [0], accepting, trans)
    dfa = minimize(determinize(nfa))
    return Acceptor(table, alphabet, nfa, dfa, states, moves)


# ---------------------------------------------------------------------------
# tracing words back to directed geodesics


@dataclass
class Trace:
    """Frames visited by an accepted word.

    ``steps[i]`` is (frame pair before the step, sigma' in that frame), so
    the i-th simplex of the geodesic is prefix_value(i) applied to sigma'.
    """

    word: tuple
    frames: list    # frame pair (or START) after each prefix, length n+1
    steps: list     # (frame, sigma') for i = 1..n


def trace_word(acc: Acceptor, word) -> Trace:
    """Follow the NFA along ``word``; raises AcceptorError if not accepted."""
    word = tuple(word)
    layer = {START: []}
    for sym in word:
        nxt = {}
        for st, path in layer.items():
            for s, sigma, pair in acc.moves[st]:
                if s == sym and pair not in nxt:
                    nxt[pair] = path + [(st, sigma)]
        layer = nxt
        if not layer:
            break
    v0 = frozenset((acc.table.v0,))
    done = [(st, p) for st, p in layer.items() if st == START or st[1] == v0]
    if not done:
        raise AcceptorError("word not accepted: " + " ".join(word))
    if len(done) > 1:
        raise AcceptorError("word has several traces: " + " ".join(word))
    end, steps = done[0]
    frames = [st for st, _ in steps] + [end]
    return Trace(word, frames, steps)


def geodesic_of(acc: Acceptor, word):
    """Actual simplices sigma_0..sigma_n in the fragment, or None past the ball."""
    tr = trace_word(acc, word)
    frag = acc.frag
    out = [frozenset((acc.table.v0,))]
    h = acc.group.identity
    for (st, sigma), sym in zip(tr.steps, tr.word):
        moved = frag.translate_simplex(h, sigma)
        if moved is None:
            return None
        out.append(moved)
        h = h * acc.alphabet.value(sym)
    return out


def word_over_B(acc: Acceptor, word, B: Alphabet):
    """Image of an accepted word over the inclusion alphabet, two letters per step."""
    tr = trace_word(acc, word)
    lab = acc.table.labels.label
    names = {v: k for k, v in B.values.items()}
    out = []
    for st, sigma in tr.steps:
        S = frozenset((acc.table.v0,)) if st == START else st[1]
        span = lab(S | sigma)
        out.append(names[span])
        out.append(names[span.inverse() * lab(sigma)])
    return out


# ---------------------------------------------------------------------------
# multipliers


@dataclass
class Multiplier:
    letter: str
    side: str
    fsa: Fsa
    escapes: list      # (pair word prefix, difference) that left W


def _tape_moves(dfa, s, padded):
    """(symbol, next state, padded) for one tape of a padded pair word."""
    out = []
    if not padded:
        row = dfa.delta[s]
        out = [(sym, row[sym][0], False) for sym in dfa.alphabet if sym in row]
    if padded or s in dfa.accepting:
        out.append((PAD, s, True))
    return out


def build_multiplier(acc: Acceptor, letter: str, side: str, W, record=200) -> Multiplier:
    """Padded pair automaton for u.a = v (right) or u = a.v (left) within W."""
    if side not in ("right", "left"):
        raise ValueError("side must be right or left")
    dfa = acc.dfa
    a = acc.alphabet.value(letter)
    one = acc.group.identity
    W = set(W)
    start_diff, goal = (one, a) if side == "right" else (a, one)
    if start_diff not in W:
        raise ValueError("initial difference is not in W")
    conj = acc.conjugator
    start = (dfa.initial[0], dfa.initial[0], start_diff, False, False)
    index = {start: 0}
    order = [start]
    trans = []
    escapes = []
    k = 0
    while k < len(order):
        su, sv, d, pu, pv = order[k]
        ys = _tape_moves(dfa, sv, pv)
        for x, tu, qu in _tape_moves(dfa, su, pu):
            for y, tv, qv in ys:
                if x == PAD and y == PAD:
                    continue
                d2 = conj(x, d, y)
                if d2 not in W:
                    if len(escapes) < record:
                        escapes.append(((x, y), d2))
                    continue
                nxt = (tu, tv, d2, qu, qv)
                if nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                trans.append((k, (x, y), index[nxt]))
        k += 1
    accepting = {i for i, (su, sv, d, _, _) in enumerate(order)
                 if su in dfa.accepting and sv in dfa.accepting and d == goal}
    m = make_fsa(pair_alphabet(dfa.alphabet), len(order), [0], accepting, trans)
    return Multiplier(letter, side, minimize(m), escapes)


def multiplier_letters(acc: Acceptor):
    """Symbols for 1 and the generators with their inverses."""
    mx = acc.group.matrix
    return ["1"] + [mx.format_word((x,)) for x in range(2 * mx.n)]


def build_right_multipliers(acc: Acceptor, W=None):
    W = acc.alphabet.element_set() if W is None else W
    return {x: build_multiplier(acc, x, "right", W) for x in multiplier_letters(acc)}


# ---------------------------------------------------------------------------
# word reduction


class ReductionError(RuntimeError):
    pass


def _extend(mult: Fsa, u, limit):
    """The accepted v with (u, v) in the pair machine, or None."""
    layer = {mult.initial[0]: ()}
    for x in u:
        nxt = {}
        for s, v in layer.items():
            for sym, ts in mult.delta[s].items():
                if sym[0] == x and ts[0] not in nxt:
                    nxt[ts[0]] = v + (sym[1],)
        layer = nxt
    for _ in range(limit + 1):
        for s, v in sorted(layer.items(), key=lambda kv: len(kv[1])):
            if s in mult.accepting:
                return tuple(y for y in v if y != PAD)
        nxt = {}
        for s, v in layer.items():
            for sym, ts in mult.delta[s].items():
                if sym[0] == PAD and ts[0] not in nxt:
                    nxt[ts[0]] = v + (sym[1],)
        layer = nxt
        if not layer:
            break
    return None


def reduce_word(acc: Acceptor, word, multipliers, tail_limit=64):
    """The accepted word equal in the group to ``word``.

    ``word`` is a string of generator letters or a sequence of alphabet
    symbols; alphabet symbols are expanded to generator words first.
    """
    mx = acc.group.matrix
    if isinstance(word, str):
        letters = mx.parse_word(word)
    else:
        letters = []
        for sym in word:
            letters += list(acc.alphabet.value(sym).word)
    u = ()
    for x in letters:
        name = mx.format_word((x,))
        v = _extend(multipliers[name].fsa, u, tail_limit)
        if v is None:
            raise ReductionError("no accepted continuation after " + " ".join(u) + " . " + name)
        u = v
    return u


def format_accepted(word):
    return " ".join(word) if word else ""


# ---------------------------------------------------------------------------
# checks


@dataclass
class CheckReport:
    name: str
    ok: bool = True
    witnesses: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def fail(self, witness, keep=5):
        self.ok = False
        if len(self.witnesses) < keep:
            self.witnesses.append(witness)

    def lines(self):
        head = ("PASS " if self.ok else "FAIL ") + self.name
        extra = ", ".join(f"{k}={v}" for k, v in self.info.items())
        out = [head + (f" ({extra})" if extra else "")]
        out += ["  witness: " + w for w in self.witnesses]
        return out


def _fmt(word):
    return " ".join(word) if word else "(empty)"


def _pair_words(mult: Multiplier, maxlen):
    from .fsa import enumerate_language
    for pw in enumerate_language(mult.fsa, maxlen):
        u = tuple(x for x, _ in pw if x != PAD)
        v = tuple(y for _, y in pw if y != PAD)
        yield pw, u, v


def _differences(acc, pw, start):
    """Prefix differences of a padded pair word, starting from ``start``."""
    val = acc.alphabet.value
    one = acc.group.identity
    d = start
    out = [d]
    for x, y in pw:
        X = one if x == PAD else val(x)
        Y = one if y == PAD else val(y)
        d = X.inverse() * d * Y
        out.append(d)
    return out


def projection_check(acc: Acceptor, mult: Multiplier):
    """Both tapes of the multiplier project onto the accepted language."""
    from .fsa import difference_witness, pair_projection
    bad = []
    for comp in (1, 2):
        proj = pair_projection(mult.fsa, comp, acc.dfa.alphabet)
        w = difference_witness(acc.dfa, proj)
        if w is None:
            w = difference_witness(proj, acc.dfa)
        if w is not None:
            bad.append((comp, w))
    return bad


def check_multiplier_pairs(acc: Acceptor, mult: Multiplier, W, maxlen, report: CheckReport):
    a = acc.alphabet.value(mult.letter)
    one = acc.group.identity
    start, goal = (one, a) if mult.side == "right" else (a, one)
    W = set(W)
    n = 0
    for pw, u, v in _pair_words(mult, maxlen):
        n += 1
        gu, gv = acc.value(u), acc.value(v)
        eq = gu * a == gv if mult.side == "right" else gu == a * gv
        if not eq:
            report.fail(f"M_{mult.letter} {mult.side}: ({_fmt(u)}, {_fmt(v)}) fails the equation")
        diffs = _differences(acc, pw, start)
        if diffs[-1] != goal or not all(d in W for d in diffs):
            report.fail(f"M_{mult.letter} {mult.side}: ({_fmt(u)}, {_fmt(v)}) leaves the difference set")
    return n


def check_cross_section(acc: Acceptor, maxlen, report: CheckReport):
    """Accepted words up to maxlen are distinct elements and cover the X-ball of radius maxlen."""
    from .fsa import enumerate_language
    seen = {}
    for w in enumerate_language(acc.dfa, maxlen):
        g = acc.value(w)
        if g in seen:
            report.fail(f"{_fmt(seen[g])} and {_fmt(w)} have the same value")
        seen[g] = w
    words, _ = acc.group.ball(maxlen)
    missing = [g for g in words if g not in seen]
    for g in missing[:5]:
        report.fail(f"{acc.group.format(g)} has no accepted word of length <= {maxlen}")
    report.info["words"] = len(seen)
    return seen


def axiom_check(acc: Acceptor, multipliers, W=None, maxlen=6, cross_len=None) -> CheckReport:
    """Projection, equation and cross-section checks for a family of multipliers."""
    rep = CheckReport("axiom check")
    for name, mult in sorted(multipliers.items()):
        for comp, w in projection_check(acc, mult):
            rep.fail(f"M_{name} {mult.side} tape {comp} differs from the acceptor on {_fmt(w)}")
        ws = W if W is not None else _default_W(acc, mult)
        check_multiplier_pairs(acc, mult, ws, maxlen, rep)
    check_cross_section(acc, maxlen if cross_len is None else cross_len, rep)
    return rep


def _default_W(acc, mult):
    return getattr(mult, "W", None) or acc.alphabet.element_set()


def _add_left_differences(acc, a, u, v, W):
    L = max(len(u), len(v))
    pu = list(u) + [PAD] * (L - len(u))
    pv = list(v) + [PAD] * (L - len(v))
    new = [d for d in _differences(acc, list(zip(pu, pv)), a) if d not in W]
    W.update(new)
    return bool(new)


def grow_left_differences(acc: Acceptor, letter, right, maxlen=4, rounds=10, cap=2000):
    """Enlarge W_L until the left multiplier for ``letter`` passes the projection check.

    Each failing round reduces the witnesses of the projection check and adds
    their differences; if that adds nothing, all accepted words up to
    ``maxlen`` are used and ``maxlen`` grows.  Returns (W_L, multiplier, report).
    """
    from .fsa import enumerate_language
    a = acc.alphabet.value(letter)
    W = set(acc.alphabet.element_set()) | {a}
    rep = CheckReport(f"left differences for {letter}")
    inv = acc.alphabet.inverse(letter)
    n = maxlen
    for r in range(rounds + 1):
        mult = build_multiplier(acc, letter, "left", W)
        mult.W = W
        bad = projection_check(acc, mult)
        if not bad:
            rep.info.update(rounds=r, size=len(W))
            return W, mult, rep
        if r == rounds or len(W) > cap:
            break
        grew = False
        for comp, w in bad:
            if comp == 1:
                grew |= _add_left_differences(acc, a, w, reduce_word(acc, (inv,) + w, right), W)
            else:
                grew |= _add_left_differences(acc, a, reduce_word(acc, (letter,) + w, right), w, W)
        if not grew:
            for u in enumerate_language(acc.dfa, n):
                grew |= _add_left_differences(acc, a, u, reduce_word(acc, (inv,) + u, right), W)
            n += 1
    for comp, w in bad:
        rep.fail(f"tape {comp} still differs on {_fmt(w)}")
    if len(W) > cap:
        rep.fail(f"difference set exceeded {cap} elements")
    rep.info.update(rounds=rounds, size=len(W))
    return W, mult, rep


def check_length_bounds(acc: Acceptor, maxlen=6) -> CheckReport:
    """|w| <= |g|_X <= max(2, M-2) |w| for accepted w representing g."""
    from .fsa import enumerate_language
    mx = acc.group.matrix
    M = max((mx.m[i][j] for i, j in mx.finite_pairs()), default=2)
    c = max(2, M - 2)
    rep = CheckReport("length bounds")
    n = 0
    for w in enumerate_language(acc.dfa, maxlen):
        n += 1
        gl = acc.group.geodesic_length(acc.value(w))
        if not len(w) <= gl <= c * len(w):
            rep.fail(f"{_fmt(w)}: |w|={len(w)}, |g|={gl}")
    rep.info.update(words=n, factor=c)
    return rep


def prefix_bound(matrix):
    return max((matrix.m[i][j] - 1 for i, j in matrix.finite_pairs()), default=1)


def extend_prefix(acc: Acceptor, tr: Trace, k):
    """Accepted word sharing the first k-1 letters of the traced word, via its
    geodesic cut after step k and walked on to a real vertex."""
    from .geodesics import DirectedGeodesic, extend_to_real_vertex
    P, S = tr.frames[k]          # sigma_{k-1} and sigma_k, centred on sigma_k
    prev_s = P - S
    ext = extend_to_real_vertex(DirectedGeodesic((prev_s, S)), acc.frag)
    lab = acc.table.labels.label
    names = {v: n for n, v in acc.alphabet.values.items()}
    prev = lab(prev_s)
    new = []
    for s in ext.simplices[1:]:
        h = lab(s)
        new.append(names[prev.inverse() * h])
        prev = h
    return tuple(tr.word[:k - 1]) + tuple(new)


def check_prefix_property(acc: Acceptor, maxlen=6) -> CheckReport:
    """Every prefix w1 = w2 x of an accepted word has an accepted extension of w2
    at most max(m-1) letters longer than w2."""
    from .fsa import accepts, enumerate_language
    bound = prefix_bound(acc.group.matrix)
    rep = CheckReport("prefix property")
    worst = 0
    done = set()
    for w in enumerate_language(acc.dfa, maxlen):
        tr = trace_word(acc, w)
        for k in range(1, len(w) + 1):
            if w[:k] in done:
                continue
            done.add(w[:k])
            ext = extend_prefix(acc, tr, k)
            excess = len(ext) - (k - 1)
            worst = max(worst, excess)
            if ext[:k - 1] != w[:k - 1] or not accepts(acc.dfa, ext) or excess > bound:
                rep.fail(f"prefix {_fmt(w[:k])} of {_fmt(w)} extends to {_fmt(ext)}")
    rep.info.update(prefixes=len(done), worst_excess=worst, bound=bound)
    return rep


def check_soundness(acc: Acceptor, maxlen=4) -> CheckReport:
    """Traced geodesics are directed geodesics ending at the word's value."""
    from .fsa import enumerate_language
    from .geodesics import is_directed_geodesic
    rep = CheckReport("evaluation soundness")
    n = 0
    for w in enumerate_language(acc.dfa, maxlen):
        seq = geodesic_of(acc, w)
        if seq is None:
            continue
        n += 1
        end = acc.frag.real(acc.value(w))
        if seq[-1] != frozenset((end,)):
            rep.fail(f"{_fmt(w)} ends at {acc.frag.simplex_name(seq[-1])}")
            continue
        inner = [s for s in seq if acc.frag.visible(s)]
        if len(inner) == len(seq):
            ok, pos = is_directed_geodesic(seq, acc.frag)
            if not ok:
                rep.fail(f"{_fmt(w)} is not directed at position {pos}")
    rep.info["checked"] = n
    return rep


def _inverse_word(acc, w):
    return tuple(acc.alphabet.inverse(x) for x in reversed(w))


def non_symmetry_witness(acc: Acceptor, maxlen=4):
    """An accepted word whose formal inverse is rejected, or None."""
    from .fsa import accepts, enumerate_language
    for w in enumerate_language(acc.dfa, maxlen):
        if not accepts(acc.dfa, _inverse_word(acc, w)):
            return w
    return None


def non_prefix_closure_witness(acc: Acceptor, maxlen=4):
    """An accepted word with a rejected prefix, or None."""
    from .fsa import accepts, enumerate_language
    for w in enumerate_language(acc.dfa, maxlen):
        for k in range(1, len(w)):
            if not accepts(acc.dfa, w[:k]):
                return w, w[:k]
    return None
