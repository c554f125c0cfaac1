"""Command-line front end: ``artin-biauto <command> INPUT [options]``.

Exit status: 0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from functools import cached_property

from . import __version__
from .biauto import (
    CheckReport,
    axiom_check,
    build_right_multipliers,
    check_length_bounds,
    check_prefix_property,
    check_soundness,
    grow_left_differences,
    multiplier_letters,
    non_prefix_closure_witness,
    non_symmetry_witness,
    reduce_word,
    synthesize_acceptor,
)
from .complex import (
    InsufficientRadius,
    build_fragment,
    check_six_large,
    default_radius,
    dump_complex,
    x1_distances,
)
from .coxeter import CoxeterError, UnsupportedGroupError, parse_coxeter, validate_type
from .fsa import to_text
from .geodesics import GeodesicError, directed_geodesic_between
from .labels import build_alphabets, choose_orbit_tables
from .oracle import ArtinGroup

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    input: str
    command: str
    radius: int | None = None
    maxlen: int = 6
    seed: int = 0
    out: str | None = None
    format: str = "text"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.radius is not None and self.radius < 2:
            raise UsageError("--radius must be at least 2")
        if self.maxlen < 1:
            raise UsageError("--maxlen must be positive")


class Pipeline:
    """Lazily computed stages shared by the subcommands."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        try:
            with open(cfg.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {cfg.input}: {exc.strerror}") from None
        self.matrix = parse_coxeter(text)
        self.report = validate_type(self.matrix)

    def require_supported(self):
        if not self.report.supported:
            raise UnsupportedGroupError("input is not a supported Artin group: " + "; ".join(self.report.reasons or ["labels above 4"]))

    @cached_property
    def group(self):
        self.require_supported()
        return ArtinGroup(self.matrix)

    @cached_property
    def radius(self):
        return self.cfg.radius or default_radius(self.matrix)

    @cached_property
    def fragment(self):
        return build_fragment(self.matrix, self.radius, group=self.group)

    @cached_property
    def orbits(self):
        return choose_orbit_tables(self.fragment)

    @cached_property
    def alphabets(self):
        return build_alphabets(self.orbits)

    @cached_property
    def acceptor(self):
        return synthesize_acceptor(self.fragment, self.orbits, self.alphabets[0])

    @cached_property
    def right(self):
        return build_right_multipliers(self.acceptor)

    @cached_property
    def left(self):
        out = {}
        for x in multiplier_letters(self.acceptor):
            out[x] = grow_left_differences(self.acceptor, x, self.right)
        return out


def _write(cfg, name, text):
    if not cfg.out:
        return
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, name), "w", encoding="utf-8") as fh:
        fh.write(text)


def _elements(group, xs):
    return sorted(group.format(g) for g in xs)


def _orbit_dump(p: Pipeline):
    table = p.orbits
    lab = table.labels.label
    lines = []
    for d in sorted(table.reps):
        for r in table.reps[d]:
            lines.append(f"o {d} {table.name(r)} {p.group.format(lab(r))}")
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------


def cmd_validate(p: Pipeline, out):
    for line in p.report.lines():
        print(line, file=out)
    return EXIT_OK if p.report.supported else EXIT_FAIL


def cmd_build(p: Pipeline, out):
    frag = p.fragment
    n_real = sum(1 for v in range(frag.n_vertices) if frag.is_real(v))
    print(f"radius: {p.radius}", file=out)
    print(f"vertices: {frag.n_vertices} ({n_real} real)", file=out)
    print(f"edges: {sum(1 for _ in frag.edges())}", file=out)
    print(f"complete precells: {sum(1 for pc in frag.precells.values() if pc.complete)}", file=out)
    for d, n in p.orbits.counts().items():
        print(f"orbits dim {d}: {n}", file=out)
    _write(p.cfg, "complex.txt", dump_complex(frag))
    _write(p.cfg, "orbits.txt", _orbit_dump(p))
    return EXIT_OK


def cmd_acceptor(p: Pipeline, out):
    acc = p.acceptor
    print(f"alphabet: {' '.join(acc.alphabet.symbols)}", file=out)
    print(f"states: {acc.dfa.n_states}", file=out)
    _write(p.cfg, "acceptor.fsa", to_text(acc.dfa))
    return EXIT_OK


def cmd_multipliers(p: Pipeline, out):
    group = p.group
    print("W_R: " + " ".join(_elements(group, p.acceptor.alphabet.element_set())), file=out)
    for x, m in sorted(p.right.items()):
        print(f"right {x}: {m.fsa.n_states} states", file=out)
        _write(p.cfg, f"right_{x}.fsa", to_text(m.fsa))
    status = EXIT_OK
    for x, (W, m, rep) in sorted(p.left.items()):
        print(f"left {x}: {m.fsa.n_states} states, |W_L| = {len(W)}", file=out)
        _write(p.cfg, f"left_{x}.fsa", to_text(m.fsa))
        _write(p.cfg, f"W_L_{x}.txt", "\n".join(_elements(group, W)) + "\n")
        if not rep.ok:
            status = EXIT_FAIL
            for line in rep.lines():
                print(line, file=out)
    return status


def uniqueness_report(p: Pipeline, maxdist=4, samples=None, seed=0) -> CheckReport:
    """Directed geodesics from each vertex representative to every vertex within maxdist."""
    frag = p.fragment
    rep = CheckReport("directed geodesic uniqueness")
    pairs = []
    for r in p.orbits.reps.get(0, []):
        v = next(iter(r))
        for w, d in sorted(x1_distances(frag, v).items()):
            if 0 < d <= maxdist:
                pairs.append((v, w, d))
    if samples is not None and len(pairs) > samples:
        pairs = random.Random(seed).sample(pairs, samples)
    checked = skipped = 0
    for v, w, d in pairs:
        try:
            g = directed_geodesic_between(v, w, frag)
        except InsufficientRadius:
            skipped += 1
            continue
        except GeodesicError as exc:
            rep.fail(str(exc))
            continue
        checked += 1
        if g.length != d:
            rep.fail(f"{frag.name(v)} -> {frag.name(w)}: length {g.length}, distance {d}")
    rep.info.update(checked=checked, skipped=skipped)
    return rep


def cmd_verify(p: Pipeline, out):
    cfg = p.cfg
    acc = p.acceptor
    reports = []
    six = check_six_large(p.fragment)
    r = CheckReport("six-large links")
    r.info["vertices"] = six.checked
    for v, cyc in six.violations[:5]:
        r.fail(f"{p.fragment.name(v)}: cycle " + " ".join(p.fragment.name(x) for x in cyc))
    reports.append(r)
    right = axiom_check(acc, p.right, maxlen=cfg.maxlen)
    right.name = "right multipliers (W_R = A)"
    reports.append(right)
    left = CheckReport("left multipliers")
    for x, (W, m, rep) in sorted(p.left.items()):
        if not rep.ok:
            left.fail(f"{x}: " + "; ".join(rep.witnesses))
        sub = axiom_check(acc, {x: m}, W=W, maxlen=cfg.maxlen, cross_len=0)
        for w in sub.witnesses:
            left.fail(w)
        left.info[f"W_L({x})"] = len(W)
    reports.append(left)
    reports.append(check_length_bounds(acc, cfg.maxlen))
    reports.append(check_prefix_property(acc, cfg.maxlen))
    reports.append(uniqueness_report(p, samples=cfg.extra.get("samples"), seed=cfg.seed))
    reports.append(check_soundness(acc, min(cfg.maxlen, 4)))
    for rep in reports:
        for line in rep.lines():
            print(line, file=out)
    w = non_symmetry_witness(acc)
    print("non-symmetry witness: " + (" ".join(w) if w else "none"), file=out)
    w = non_prefix_closure_witness(acc)
    print("non-prefix-closure witness: " + (" ".join(w[0]) + " (prefix " + " ".join(w[1]) + ")" if w else "none"), file=out)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_reduce(p: Pipeline, out):
    word = p.cfg.extra["word"]
    acc = p.acceptor
    try:
        if " " in word.strip():
            syms = word.split()
            for s in syms:
                if s not in acc.alphabet.values:
                    raise UsageError(f"unknown symbol {s!r}")
            result = reduce_word(acc, syms, p.right)
        else:
            result = reduce_word(acc, "" if word == "1" else word, p.right)
    except CoxeterError as exc:
        raise UsageError(str(exc)) from None
    print(" ".join(result) if result else "(empty)", file=out)
    return EXIT_OK


def cmd_stats(p: Pipeline, out):
    print(f"backend: {p.group.backend}", file=out)
    _, spheres = p.group.ball(p.cfg.extra.get("sphere_radius", 4))
    print("sphere sizes: " + " ".join(str(len(s)) for s in spheres), file=out)
    for d, n in p.orbits.counts().items():
        print(f"orbits dim {d}: {n}", file=out)
    A, B = p.alphabets
    print(f"|A|: {len(A)}", file=out)
    print(f"|B|: {len(B)}", file=out)
    return EXIT_OK


def cmd_dump(p: Pipeline, out):
    what = p.cfg.extra.get("what", "complex")
    text = dump_complex(p.fragment) if what == "complex" else _orbit_dump(p)
    out.write(text)
    _write(p.cfg, f"{what}.txt", text)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "build": cmd_build,
    "acceptor": cmd_acceptor,
    "multipliers": cmd_multipliers,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
    "stats": cmd_stats,
    "dump": cmd_dump,
}


def make_parser():
    ap = argparse.ArgumentParser(prog="artin-biauto", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="Coxeter matrix file")
    common.add_argument("--radius", type=int, default=None, help="Cayley ball radius (default: 7 with a label 4, else 4)")
    common.add_argument("--maxlen", type=int, default=6, help="word length for exhaustive checks")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--out", default=None, help="directory for artifacts")
    common.add_argument("--format", default="text", choices=["text"])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], help=COMMANDS[name].__name__[4:])
        if name == "reduce":
            sp.add_argument("word", help="generator word such as aB, or quoted alphabet symbols")
        elif name == "dump":
            sp.add_argument("--what", choices=["complex", "orbits"], default="complex")
        elif name == "verify":
            sp.add_argument("--samples", type=int, default=None, help="cap on geodesic pairs checked")
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    extra = {k: getattr(args, k) for k in ("word", "what", "samples") if hasattr(args, k)}
    try:
        cfg = RunConfig(args.input, args.command, args.radius, args.maxlen, args.seed, args.out, args.format, extra)
        p = Pipeline(cfg)
        return COMMANDS[args.command](p, out)
    except (UsageError, CoxeterError, UnsupportedGroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InsufficientRadius as exc:
        print(f"error: radius too small: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
