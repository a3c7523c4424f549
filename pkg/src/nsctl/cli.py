"""``nsctl`` command line.

Output is line-oriented ``key value`` text; exact values are printed as
``p/q`` and floats with 12 significant digits. ``--human`` appends aligned
tables for reading at a terminal.

Exit codes: 0 check passed / computation succeeded, 1 check failed,
2 bad input or usage.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from fractions import Fraction

from . import verify
from .bell import ALL_VARIANTS, LOCAL_BOUND, ChshVariant, chsh_value, correlator, max_chsh_violation
from .catalog import EXAMPLE_NAMES, get_example
from .errors import NsctlError
from .fileformat import emit_strategy, parse_strategy
from .mechanisms import (
    OneWayProtocol,
    emit_empirical,
    empirical_tv,
    induce_active,
    induce_passive,
    one_way_protocol,
    paper_active_mechanism,
    simulate,
)
from .nosignaling import (
    X_B_GIVEN_A,
    Y_A_GIVEN_B,
    check_no_signaling,
    check_posterior,
    conditional_mutual_information,
)
from .polytope import (
    binary_local_vertices,
    binary_nonlocal_vertices,
    decomposition_to_mechanism,
    emit_functional,
    local_membership,
)
from .tables import ObservationPrior, Strategy, format_fraction, joint_from_prior

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
MIN_SAMPLES_PER_CONTEXT = 50_000


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


class Report:
    def __init__(self, argv):
        self.lines = [f"command {' '.join(argv)}"]
        self.tables = []

    def add(self, key, *values):
        self.lines.append(" ".join([key, *map(fmt, values)]))

    def raw(self, text):
        self.lines.extend(text.rstrip("\n").split("\n"))

    def table(self, title, header, rows):
        self.tables.append((title, header, [[fmt(c) for c in r] for r in rows]))

    def render(self, human: bool) -> str:
        out = list(self.lines)
        if human:
            for title, header, rows in self.tables:
                widths = [max(len(str(h)), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
                out.append("")
                out.append(f"== {title}")
                out.append("  ".join(str(h).rjust(w) for h, w in zip(header, widths)))
                out.extend("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)
        return "\n".join(out) + "\n"


def _load(args, report: Report):
    """Return (strategy, prior-or-None, assumed-prior flag) from FILE or --name."""
    if getattr(args, "name", None):
        ex = get_example(args.name)
        text = emit_strategy(ex.strategy)
        report.add("input", f"example:{ex.name}", "sha256:" + hashlib.sha256(text.encode()).hexdigest())
        return ex.strategy, None, ex.prior_assumed
    if not args.file:
        raise UsageError("give a FILE or --name")
    if args.file == "-":
        data = sys.stdin.read()
    else:
        with open(args.file, encoding="utf-8") as fh:
            data = fh.read()
    report.add("input", args.file, "sha256:" + hashlib.sha256(data.encode()).hexdigest())
    s, prior = parse_strategy(data)
    return s, prior, prior is None


def _strategy_table(report: Report, title: str, s: Strategy):
    al = s.alphabets
    rows = [[a, b, x, *(s[a, b, x, y] for y in range(al.nY))] for a, b in al.contexts() for x in range(al.nX)]
    report.table(title, ["a", "b", "x", *(f"y={y}" for y in range(al.nY))], rows)


def cmd_check_ns(args, report):
    s, _, _ = _load(args, report)
    report.add("alphabets", *s.alphabets.as_tuple())
    rep = check_no_signaling(s)
    for v in rep.violations:
        alt = "b'" if v.side == "venkat" else "a'"
        act = "x" if v.side == "venkat" else "y"
        report.add("violation", v.side, f"a={v.a}", f"b={v.b}", f"{alt}={v.other}", f"{act}={v.action}",
                   f"lhs={fmt(v.lhs)}", f"rhs={fmt(v.rhs)}")
    report.add("no-signaling", "holds" if rep.holds else "violated")
    report.add("verdict", "PASS" if rep.holds else "FAIL")
    _strategy_table(report, "strategy", s)
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_posterior(args, report):
    s, file_prior, defaulted = _load(args, report)
    al = s.alphabets
    if args.prior == "table":
        if file_prior is None:
            raise UsageError("--prior table needs a 'prior table' block in the input")
        prior = file_prior
    elif args.prior == "uniform" or file_prior is None:
        prior = ObservationPrior.uniform(al.nA, al.nB)
    else:
        prior = file_prior
    if prior is file_prior:
        report.add("prior", "table")
    else:
        report.add("prior", "uniform", "assumed" if defaulted else "requested")
    rep = check_posterior(s, prior)
    for v in rep.violations:
        what = "P(a|b,y)" if v.side == "vivek" else "P(b|a,x)"
        act = "y" if v.side == "vivek" else "x"
        report.add("violation", v.side, what, f"a={v.a}", f"b={v.b}", f"{act}={v.action}",
                   f"lhs={fmt(v.lhs)}", f"rhs={fmt(v.rhs)}")
    ns = check_no_signaling(s).holds
    j = joint_from_prior(s, prior)
    report.add("cmi", X_B_GIVEN_A, conditional_mutual_information(j, X_B_GIVEN_A), "nats")
    report.add("cmi", Y_A_GIVEN_B, conditional_mutual_information(j, Y_A_GIVEN_B), "nats")
    report.add("posterior", "holds" if rep.holds else "violated")
    report.add("no-signaling", "holds" if ns else "violated")
    if prior.has_full_support:
        report.add("equivalence", "consistent" if ns == rep.holds else "INCONSISTENT")
    report.add("verdict", "PASS" if rep.holds else "FAIL")
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_membership(args, report):
    s, _, _ = _load(args, report)
    result = local_membership(s)
    report.add("alphabets", *s.alphabets.as_tuple())
    report.add("membership", "feasible" if result.feasible else "infeasible")
    if result.feasible:
        atoms = result.decomposition.atoms
        report.add("atoms", len(atoms))
        if args.decomposition:
            for w, d in atoms:
                report.add("atom", w, "f=" + ",".join(map(str, d.f)), "g=" + ",".join(map(str, d.g)))
        report.table("decomposition", ["weight", "f", "g"],
                     [[w, ",".join(map(str, d.f)), ",".join(map(str, d.g))] for w, d in atoms])
    else:
        c = result.certificate
        report.add("value", c.value_on_strategy)
        report.add("localmax", c.max_on_local)
        if args.certificate:
            report.raw(emit_functional(c))
        al = s.alphabets
        report.table("separating functional", ["a", "b", "x", "y", "coeff"],
                     [[*idx, c.coefficient(*idx)] for idx in al.indices()])
    if args.expect is None:
        return EXIT_OK
    ok = result.feasible == (args.expect == "feasible")
    report.add("verdict", "PASS" if ok else "FAIL", f"expected {args.expect}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_chsh(args, report):
    s, _, _ = _load(args, report)
    for a, b in s.alphabets.contexts() if s.alphabets.is_binary else ():
        report.add("correlator", a, b, correlator(s, a, b))
    if args.all:
        chosen = [(v, chsh_value(s, v)) for v in ALL_VARIANTS]
    elif args.variant:
        v = ChshVariant(*args.variant)
        chosen = [(v, chsh_value(s, v))]
    else:
        chosen = [max_chsh_violation(s)]
    for v, value in chosen:
        verdict = "VIOLATES" if value > LOCAL_BOUND else "SATISFIES"
        report.add("chsh", "variant", *v.label(), "value", value, verdict, f"(local bound {LOCAL_BOUND})")
    report.table("chsh", ["alpha", "beta", "gamma", "value"], [[*v.label(), val] for v, val in chosen])
    return EXIT_OK


def cmd_vertices(args, report):
    if args.nonlocal_:
        items = [("nonlocal", lab, s) for lab, s in binary_nonlocal_vertices()]
    else:
        items = [("local", lab, s) for lab, s in binary_local_vertices()]
    report.add("count", len(items))
    for kind, label, s in items:
        report.add("vertex", kind, *label)
        report.raw(emit_strategy(s))
    return EXIT_OK


def _simulation_source(spec: str, report: Report):
    if spec == "paper-active":
        m = paper_active_mechanism()
        return m, induce_active(m)
    if spec == "one-way":
        return OneWayProtocol(), one_way_protocol()[0]
    if spec.startswith("file:"):
        with open(spec[5:], encoding="utf-8") as fh:
            s, _ = parse_strategy(fh.read())
        result = local_membership(s)
        if not result.feasible:
            raise UsageError(
                f"{spec[5:]} is outside the local polytope; no passive mechanism reproduces it"
            )
        m = decomposition_to_mechanism(result.decomposition)
        report.add("mechanism-atoms", m.nW)
        return m, induce_passive(m)
    raise UsageError(f"unknown mechanism {spec!r}")


def cmd_simulate(args, report):
    source, exact = _simulation_source(args.mechanism, report)
    al = exact.alphabets
    prior = ObservationPrior.uniform(al.nA, al.nB)
    report.add("prior", "uniform")
    e = simulate(source, prior, args.trials, args.seed, chunks=args.chunks, workers=args.workers)
    report.raw(emit_empirical(e))
    per_context, worst = empirical_tv(e, exact)
    for (a, b), tv in per_context.items():
        report.add("tv", a, b, tv)
    report.add("maxtv", worst)
    least = min(n for row in e.trials_per_context for n in row)
    if least < MIN_SAMPLES_PER_CONTEXT:
        report.add("note", f"only {least} samples in some context; tolerance is calibrated for {MIN_SAMPLES_PER_CONTEXT}")
    ok = worst <= args.tv_tol
    report.add("verdict", "PASS" if ok else "FAIL", f"tolerance {fmt(args.tv_tol)}")
    report.table("total variation", ["a", "b", "n", "tv"],
                 [[a, b, e.trials_per_context[a][b], tv] for (a, b), tv in per_context.items()])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_examples(args, report):
    ex = get_example(args.name)
    lines = [f"# example {ex.name}: {ex.description}", f"# expected class {ex.expected_classification}"]
    if ex.prior_assumed:
        lines.append("# prior: uniform is an assumption, not given with the example")
    sys.stdout.write("\n".join(lines) + "\n" + emit_strategy(ex.strategy))
    return EXIT_OK


def cmd_verify_paper(args, report):
    failures = 0
    rows = []
    for name, ok, detail in verify.run_all():
        failures += not ok
        report.add("check", "PASS" if ok else "FAIL", name + (f" ({detail})" if detail else ""))
        rows.append([name, "PASS" if ok else "FAIL", detail])
    report.add("verdict", "PASS" if failures == 0 else "FAIL", f"{failures} failed")
    report.table("verify-paper", ["check", "result", "detail"], rows)
    return EXIT_OK if failures == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="append aligned tables")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("file", nargs="?", help="strategy file ('-' for stdin)")
    source.add_argument("--name", choices=EXAMPLE_NAMES, help="use a built-in example instead of FILE")

    parser = argparse.ArgumentParser(prog="nsctl", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-ns", parents=[common, source], help="exact no-signaling check")
    p.set_defaults(func=cmd_check_ns)

    p = sub.add_parser("posterior", parents=[common, source], help="posterior condition and CMI")
    p.add_argument("--prior", choices=("uniform", "table"))
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("membership", parents=[common, source], help="local polytope membership")
    p.add_argument("--decomposition", action="store_true")
    p.add_argument("--certificate", action="store_true")
    p.add_argument("--expect", choices=("feasible", "infeasible"))
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("chsh", parents=[common, source], help="CHSH values")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--variant", nargs=3, type=int, choices=(0, 1), metavar=("ALPHA", "BETA", "GAMMA"))
    g.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("vertices", parents=[common], help="binary vertex catalog")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--local", action="store_true")
    g.add_argument("--nonlocal", dest="nonlocal_", action="store_true")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("simulate", parents=[common], help="seeded exact sampling")
    p.add_argument("--mechanism", required=True, help="paper-active | one-way | file:PATH")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tv-tol", type=float, default=0.01)
    p.add_argument("--chunks", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("examples", parents=[common], help="print a built-in example")
    p.add_argument("--name", required=True, choices=EXAMPLE_NAMES)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("verify-paper", parents=[common], help="run every built-in check")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    report = Report(["nsctl", *argv])
    try:
        code = args.func(args, report)
    except (NsctlError, UsageError, OSError, ValueError) as exc:
        print(f"nsctl: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command != "examples":
        sys.stdout.write(report.render(args.human))
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))
