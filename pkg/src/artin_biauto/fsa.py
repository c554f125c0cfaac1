"""Finite automata over symbol alphabets, plus padded pair machines.

Automata are partial: a missing transition rejects.  States are ints,
``delta[s]`` maps a symbol to a tuple of targets.  Deterministic results
are renumbered in breadth-first order from the initial state, with symbols
taken in alphabet order, so equal languages give identical minimal machines.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

PAD = "_"
EPS = None


class FsaError(ValueError):
    pass


class StateLimitExceeded(FsaError):
    pass


@dataclass(frozen=True)
class Fsa:
    alphabet: tuple
    n_states: int
    initial: tuple
    accepting: frozenset
    delta: tuple  # per state: dict symbol -> tuple of targets

    def __post_init__(self):
        for s, row in enumerate(self.delta):
            for sym, ts in row.items():
                for t in ts:
                    if not 0 <= t < self.n_states:
                        raise FsaError(f"transition {s} --{sym}--> {t} out of range")
        if len(self.delta) != self.n_states:
            raise FsaError("transition table size does not match state count")

    @property
    def deterministic(self):
        return len(self.initial) == 1 and all(len(ts) <= 1 for row in self.delta for ts in row.values())

    def step(self, s, sym):
        ts = self.delta[s].get(sym, ())
        return ts[0] if ts else None

    def transitions(self):
        order = {x: k for k, x in enumerate(self.alphabet)}
        for s, row in enumerate(self.delta):
            for sym in sorted(row, key=lambda x: order.get(x, -1)):
                for t in row[sym]:
                    yield s, sym, t

    def n_transitions(self):
        return sum(len(ts) for row in self.delta for ts in row.values())


def make_fsa(alphabet, n_states, initial, accepting, transitions):
    """Build from a list of (src, sym, dst) triples; ``sym`` None is an epsilon move."""
    rows = [dict() for _ in range(n_states)]
    for s, sym, t in transitions:
        rows[s].setdefault(sym, set()).add(t)
    delta = tuple({k: tuple(sorted(v)) for k, v in row.items()} for row in rows)
    fsa = Fsa(tuple(alphabet), n_states, tuple(sorted(set(initial))), frozenset(accepting), delta)
    if any(EPS in row for row in delta):
        fsa = remove_epsilon(fsa)
    return fsa


def remove_epsilon(m: Fsa) -> Fsa:
    def closure(s):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for t in m.delta[u].get(EPS, ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    closures = [closure(s) for s in range(m.n_states)]
    trans = []
    accepting = set()
    for s in range(m.n_states):
        if closures[s] & m.accepting:
            accepting.add(s)
        for u in closures[s]:
            for sym, ts in m.delta[u].items():
                if sym is EPS:
                    continue
                for t in ts:
                    trans.append((s, sym, t))
    return make_fsa(m.alphabet, m.n_states, m.initial, accepting, trans)


def _check_symbol(m, sym):
    if sym not in m.alphabet:
        raise FsaError(f"unknown symbol {sym!r}")


def accepts(m: Fsa, word) -> bool:
    cur = set(m.initial)
    for sym in word:
        _check_symbol(m, sym)
        cur = {t for s in cur for t in m.delta[s].get(sym, ())}
        if not cur:
            return False
    return bool(cur & m.accepting)


def determinize(m: Fsa, limit=10**6) -> Fsa:
    start = frozenset(m.initial)
    index = {start: 0}
    order = [start]
    trans = []
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        s = index[cur]
        for sym in m.alphabet:
            nxt = frozenset(t for u in cur for t in m.delta[u].get(sym, ()))
            if not nxt:
                continue
            if nxt not in index:
                if len(index) >= limit:
                    raise StateLimitExceeded(f"subset construction exceeded {limit} states")
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            trans.append((s, sym, index[nxt]))
    accepting = {index[S] for S in order if S & m.accepting}
    return make_fsa(m.alphabet, len(order), [0], accepting, trans)


def trim(m: Fsa) -> Fsa:
    """Drop states that are unreachable or cannot reach an accepting state."""
    reach = set(m.initial)
    queue = deque(m.initial)
    while queue:
        s = queue.popleft()
        for ts in m.delta[s].values():
            for t in ts:
                if t not in reach:
                    reach.add(t)
                    queue.append(t)
    back = [set() for _ in range(m.n_states)]
    for s, _, t in m.transitions():
        back[t].add(s)
    live = set(a for a in m.accepting if a in reach)
    queue = deque(live)
    while queue:
        t = queue.popleft()
        for s in back[t]:
            if s in reach and s not in live:
                live.add(s)
                queue.append(s)
    keep = sorted(live)
    if not any(s in live for s in m.initial):
        return make_fsa(m.alphabet, 1, [0], [], [])
    new = {s: k for k, s in enumerate(keep)}
    trans = [(new[s], sym, new[t]) for s, sym, t in m.transitions() if s in new and t in new]
    init = [new[s] for s in m.initial if s in new]
    return make_fsa(m.alphabet, len(keep), init, [new[a] for a in m.accepting if a in new], trans)


def _renumber_bfs(m: Fsa) -> Fsa:
    start = m.initial[0]
    index = {start: 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for sym in m.alphabet:
            t = m.step(s, sym)
            if t is not None and t not in index:
                index[t] = len(index)
                queue.append(t)
    trans = [(index[s], sym, index[t]) for s, sym, t in m.transitions() if s in index]
    return make_fsa(m.alphabet, len(index), [0], [index[a] for a in m.accepting if a in index], trans)


def minimize(m: Fsa) -> Fsa:
    """Minimal partial DFA (no dead state) by partition refinement."""
    if not m.deterministic:
        raise FsaError("minimize needs a deterministic automaton")
    m = trim(m)
    if not m.accepting:
        return m
    first = {}
    cls = [first.setdefault(s in m.accepting, len(first)) for s in range(m.n_states)]
    n_cls = len(first)
    while True:
        sigs = {}
        new = []
        for s in range(m.n_states):
            sig = (cls[s],) + tuple(
                cls[t] if (t := m.step(s, sym)) is not None else -1 for sym in m.alphabet
            )
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == n_cls:
            break
        cls, n_cls = new, len(sigs)
    trans = {(cls[s], sym, cls[t]) for s, sym, t in m.transitions()}
    acc = {cls[a] for a in m.accepting}
    out = make_fsa(m.alphabet, n_cls, [cls[m.initial[0]]], acc, sorted(trans, key=lambda x: (x[0], str(x[1]), x[2])))
    return _renumber_bfs(out)


def _as_dfa(m):
    return m if m.deterministic else determinize(m)


def combine(op: str, m1: Fsa, m2: Fsa) -> Fsa:
    """Product construction for intersect, union or difference."""
    if tuple(m1.alphabet) != tuple(m2.alphabet):
        raise FsaError("alphabet mismatch")
    if op not in ("intersect", "union", "difference"):
        raise FsaError(f"unknown operation {op!r}")
    d1, d2 = _as_dfa(m1), _as_dfa(m2)
    start = (d1.initial[0], d2.initial[0])
    index = {start: 0}
    order = [start]
    trans = []
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for sym in d1.alphabet:
            a = d1.step(p[0], sym) if p[0] is not None else None
            b = d2.step(p[1], sym) if p[1] is not None else None
            if op == "intersect" and (a is None or b is None):
                continue
            if op == "difference" and a is None:
                continue
            if a is None and b is None:
                continue
            q = (a, b)
            if q not in index:
                index[q] = len(order)
                order.append(q)
                queue.append(q)
            trans.append((index[p], sym, index[q]))

    def acc(q):
        x = q[0] is not None and q[0] in d1.accepting
        y = q[1] is not None and q[1] in d2.accepting
        return {"intersect": x and y, "union": x or y, "difference": x and not y}[op]

    return make_fsa(d1.alphabet, len(order), [0], [index[q] for q in order if acc(q)], trans)


def is_empty(m: Fsa) -> bool:
    seen = set(m.initial)
    queue = deque(m.initial)
    while queue:
        s = queue.popleft()
        if s in m.accepting:
            return False
        for ts in m.delta[s].values():
            for t in ts:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return True


def language_equal(m1: Fsa, m2: Fsa) -> bool:
    return is_empty(combine("difference", m1, m2)) and is_empty(combine("difference", m2, m1))


def difference_witness(m1: Fsa, m2: Fsa):
    """A shortest word in L(m1) minus L(m2), or None."""
    d = combine("difference", m1, m2)
    prev = {0: None}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        if s in d.accepting:
            word = []
            while prev[s] is not None:
                s, sym = prev[s]
                word.append(sym)
            return tuple(reversed(word))
        for sym in d.alphabet:
            t = d.step(s, sym)
            if t is not None and t not in prev:
                prev[t] = (s, sym)
                queue.append(t)
    return None


def enumerate_language(m: Fsa, maxlen: int):
    """Accepted words of length <= maxlen in shortlex order."""
    d = _as_dfa(m)
    out = []
    layer = [((), d.initial[0])]
    for length in range(maxlen + 1):
        for w, s in layer:
            if s in d.accepting:
                out.append(w)
        if length == maxlen:
            break
        nxt = []
        for w, s in layer:
            for sym in d.alphabet:
                t = d.step(s, sym)
                if t is not None:
                    nxt.append((w + (sym,), t))
        layer = nxt
    return out


def count_language(m: Fsa, maxlen: int):
    """Number of accepted words of each length 0..maxlen."""
    d = _as_dfa(m)
    counts = {d.initial[0]: 1}
    out = []
    for length in range(maxlen + 1):
        out.append(sum(c for s, c in counts.items() if s in d.accepting))
        nxt = {}
        for s, c in counts.items():
            for ts in d.delta[s].values():
                for t in ts:
                    nxt[t] = nxt.get(t, 0) + c
        counts = nxt
    return out


# -- pairs ------------------------------------------------------------------


def pair_alphabet(alphabet):
    syms = list(alphabet) + [PAD]
    return tuple((x, y) for x in syms for y in syms if not (x == PAD and y == PAD))


def pair_projection(m: Fsa, component: int, alphabet=None) -> Fsa:
    """NFA for one tape of a pair machine, padding erased."""
    if component not in (1, 2):
        raise FsaError("component must be 1 or 2")
    if alphabet is None:
        alphabet = []
        for sym in m.alphabet:
            x = sym[component - 1]
            if x != PAD and x not in alphabet:
                alphabet.append(x)
    trans = []
    for s, sym, t in m.transitions():
        x = sym[component - 1]
        trans.append((s, EPS if x == PAD else x, t))
    return make_fsa(alphabet, m.n_states, m.initial, m.accepting, trans)


def with_alphabet(m: Fsa, alphabet) -> Fsa:
    """Same automaton viewed over a larger alphabet."""
    if not set(m.alphabet) <= set(alphabet):
        raise FsaError("new alphabet must contain the old one")
    return Fsa(tuple(alphabet), m.n_states, m.initial, m.accepting, m.delta)


# -- text format ------------------------------------------------------------


def _fmt_sym(sym):
    if isinstance(sym, tuple):
        return f"{sym[0]},{sym[1]}"
    return str(sym)


def _parse_sym(tok):
    if "," in tok:
        x, y = tok.split(",", 1)
        return (x, y)
    return tok


def to_text(m: Fsa) -> str:
    lines = [
        "alphabet: " + " ".join(_fmt_sym(s) for s in m.alphabet),
        f"states: {m.n_states}",
        "initial: " + " ".join(str(s) for s in m.initial),
        "accepting: " + " ".join(str(s) for s in sorted(m.accepting)),
    ]
    order = {x: k for k, x in enumerate(m.alphabet)}
    trans = sorted(m.transitions(), key=lambda x: (x[0], order[x[1]], x[2]))
    lines += [f"t {s} {_fmt_sym(sym)} {t}" for s, sym, t in trans]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Fsa:
    alphabet = None
    n = None
    initial = []
    accepting = []
    trans = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            alphabet = [_parse_sym(t) for t in line.split(":", 1)[1].split()]
        elif line.startswith("states:"):
            n = int(line.split(":", 1)[1])
        elif line.startswith("initial:"):
            initial = [int(t) for t in line.split(":", 1)[1].split()]
        elif line.startswith("accepting:"):
            accepting = [int(t) for t in line.split(":", 1)[1].split()]
        elif line.startswith("t "):
            _, s, sym, t = line.split()
            trans.append((int(s), _parse_sym(sym), int(t)))
        else:
            raise FsaError(f"line {lineno}: cannot parse {line!r}")
    if alphabet is None or n is None:
        raise FsaError("missing alphabet or states line")
    return make_fsa(alphabet, n, initial, accepting, trans)
