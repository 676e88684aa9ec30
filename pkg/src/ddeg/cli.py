"""Command line interface: ddeg {compute,enumerate,classify,realize,oracle}.

Exit codes: 0 exact result, 2 evidence-based or bracket, 3 input error,
4 resource cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebraic import format_int_poly
from .config import ENV_PREFIX, JobConfig
from .errors import DdegError, DomainError, ParseError, ResourceLimitError
from .textio import format_endomorphism, parse_endomorphism

SCHEMA = "ddeg.v1"

EXIT_EXACT, EXIT_EVIDENCE, EXIT_INPUT, EXIT_RESOURCE = 0, 2, 3, 4


class _Out:
    def __init__(self, fmt, stream):
        self.fmt = fmt
        self.stream = stream

    def record(self, kind, payload, config):
        if self.fmt != "records":
            return
        rec = {"schema": SCHEMA, "kind": kind, "config": config.to_record()}
        rec.update(payload)
        self.stream.write(json.dumps(rec, sort_keys=True, default=str) + "\n")

    def line(self, text=""):
        if self.fmt == "table":
            self.stream.write(text + "\n")


def _read_input(args):
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            return fh.read().strip()
    if args.input is None or args.input == "-":
        return sys.stdin.read().strip()
    return args.input


def _config(args) -> JobConfig:
    base = JobConfig.from_env()
    return base.with_(precision_bits=args.precision_bits, digits=args.digits, oracle_depth=args.oracle_depth,
                      horizon=args.horizon, budget_terms=args.budget_terms,
                      budget_matrices=args.budget_matrices)


def _number_text(value, digits):
    r = value.rational_value()
    if r is not None:
        return str(r)
    iv = value.refine(Fraction(1, 10**6))
    return f"{value.approx(digits)}  (root of {format_int_poly(value.defining)} in [{iv.lo}, {iv.hi}])"


def _oracle_table(out, report):
    out.line(f"{'r':>3}  {'deg f^r':>12}  {'deg^(1/r)':>14}  method")
    for row in report.rows:
        out.line(f"{row.r:>3}  {row.degree:>12}  {row.bound:>14.10f}  {row.method}")
    if report.estimate is not None:
        out.line(f"growth estimate {report.estimate:.12f} ({report.estimate_method})")
    if report.truncated:
        out.line("oracle truncated by the term budget")
    if report.note:
        out.line(report.note)


# ---------------------------------------------------------------------------
# subcommands


def cmd_compute(args, out, config):
    from .polynomial import is_dominant
    from .stability import Status, dynamical_degree, jacobian_witness
    f = parse_endomorphism(_read_input(args))
    if not is_dominant(f, config.seed):
        raise DomainError(f"map is not dominant; Jacobian determinant = {jacobian_witness(f)}")
    res = dynamical_degree(f, config, oracle=not args.no_oracle, check_dominant=False)
    digits = config.digits
    out.record("compute", {"input": format_endomorphism(f), "result": res.to_record(digits)}, config)
    out.line(f"map       {format_endomorphism(f)}")
    out.line(f"status    {res.status.value}")
    if res.value is not None:
        out.line(f"lambda    {_number_text(res.value, digits)}")
    else:
        b = res.bracket
        rel = "<" if b.upper_strict else "<="
        out.line(f"lambda    {b.lower.approx(digits)} <= lambda {rel} {b.upper.approx(digits)}")
    cert = res.certificate
    out.line(f"route     {cert.get('route')}" + (f" ({cert['key']})" if "key" in cert else ""))
    if "theta" in cert:
        out.line(f"theta     {cert['theta']['approx']}")
    if res.oracle is not None:
        out.line()
        _oracle_table(out, res.oracle)
        if res.agreement is not None:
            ag = res.agreement
            out.line(f"oracle agreement: {'yes' if ag.ok else 'no'} ({ag.detail}, difference "
                     f"{ag.difference if ag.difference is None else format(ag.difference, '.3e')}, "
                     f"tolerance {ag.tolerance})")
    return EXIT_EXACT if res.status is Status.PROVEN else EXIT_EVIDENCE


def cmd_enumerate(args, out, config):
    from .normal_forms import enumerate_shiftlike_set_A3, enumerate_theorem1_set
    fn = enumerate_theorem1_set if args.kind == "theorem1" else enumerate_shiftlike_set_A3
    entries = fn(args.d)
    if args.new_only:
        entries = [e for e in entries if e.new]
    digits = config.digits
    out.record("enumerate", {"set": args.kind, "d": args.d,
                             "entries": [e.to_record(digits) for e in entries]}, config)
    out.line(f"{args.kind} values for degree {args.d}: {len(entries)}")
    out.line(f"{'new':>3}  {'(a,b,c)':>10}  {'value':>22}  defining polynomial")
    for e in entries:
        a, b, c = e.triple
        out.line(f"{'*' if e.new else '':>3}  {f'({a},{b},{c})':>10}  {e.value.approx(20):>22}  "
                 f"{format_int_poly(e.value.defining)}")
    return EXIT_EXACT


def _candidate(args):
    from .perron import AlgebraicCandidate
    text = _read_input(args)
    sel = args.root
    if sel not in (None, "largest"):
        sel = int(sel) if sel.isdigit() else float(sel)
    try:
        k = int(text)
    except ValueError:
        return AlgebraicCandidate.from_text(text, sel)
    return AlgebraicCandidate.integer(k)


def cmd_classify(args, out, config):
    from .perron import classify
    c = _candidate(args)
    rep = classify(c, args.degree_cap, realize=not args.no_realize, config=config)
    out.record("classify", {"report": rep}, config)
    out.line(f"number            {_number_text(c.root, config.digits)}")
    out.line(f"minimal poly      {format_int_poly(c.minimal)}")
    out.line(f"weak Perron       {rep['weak_perron']}")
    out.line(f"Perron            {rep['perron']}")
    h = rep["handelman"]
    cert = f" (certificate {h['certificate']['polynomial']})" if "certificate" in h else ""
    out.line(f"Handelman         {h['answer']}{cert}; {h['reason']}")
    md = rep.get("minimal_dimension")
    out.line(f"minimal dimension {md if md is not None else 'unknown'}")
    if "open_question" in rep:
        out.line(f"note              {rep['open_question']}")
    real = rep.get("realization")
    if real:
        if "error" in real:
            out.line(f"realization       failed: {real['error']}")
        else:
            out.line(f"realization       {real['automorphism']} [{real['tag']}], verified {real['verified']}")
    return EXIT_EXACT


def cmd_realize(args, out, config):
    from .perron import realize_weak_perron
    c = _candidate(args)
    matrix = json.loads(args.matrix) if args.matrix else None
    plan = realize_weak_perron(c, matrix, verify=True, config=config)
    out.record("realize", {"plan": plan.to_record(config.digits)}, config)
    out.line(f"number       {_number_text(c.root, config.digits)}")
    out.line(f"dimension    {plan.dimension}")
    out.line(f"map          {format_endomorphism(plan.automorphism)}")
    out.line(f"construction {plan.tag}")
    out.line(f"verified     {plan.verified} ({plan.verification.get('status')}, {plan.verification.get('match')})")
    for note in plan.notes:
        out.line(f"note         {note}")
    return EXIT_EXACT if plan.verified else EXIT_EVIDENCE


def cmd_oracle(args, out, config):
    from .oracle import oracle_degree_sequence
    f = parse_endomorphism(_read_input(args))
    depth = args.depth or config.oracle_depth
    rep = oracle_degree_sequence(f, depth, config.budget, seed=config.seed)
    out.record("oracle", {"input": format_endomorphism(f), "oracle": rep.to_record()}, config)
    out.line(f"map {format_endomorphism(f)}")
    _oracle_table(out, rep)
    return EXIT_EXACT


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration (environment: " + ENV_PREFIX + "<NAME>)")
    g.add_argument("--precision-bits", type=int)
    g.add_argument("--digits", type=int)
    g.add_argument("--oracle-depth", type=int)
    g.add_argument("--horizon", type=int)
    g.add_argument("--budget-terms", type=int)
    g.add_argument("--budget-matrices", type=int)
    g.add_argument("--format", choices=("table", "records"), default="table")

    parser = argparse.ArgumentParser(prog="ddeg", description="Dynamical degrees of polynomial endomorphisms.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("input", nargs="?", help="text input, or - for stdin")
        p.add_argument("-f", "--file", help="read the input from a file")

    p = sub.add_parser("compute", parents=[common], help="dynamical degree of a map")
    with_input(p)
    p.add_argument("--no-oracle", action="store_true", help="skip the brute-force degree oracle")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("enumerate", parents=[common], help="values (a + sqrt(a^2 + 4bc))/2 for a degree bound")
    p.add_argument("kind", choices=("theorem1", "shiftlike"))
    p.add_argument("d", type=int)
    p.add_argument("--new-only", action="store_true", help="only values not present for smaller degrees")
    p.set_defaults(func=cmd_enumerate)

    for name, func, helptext in (("classify", cmd_classify, "Perron / weak Perron / Handelman report"),
                                 ("realize", cmd_realize, "map realizing a weak Perron number")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        with_input(p)
        p.add_argument("--root", default="largest",
                       help="'largest', a 1-based index into the real roots, or a decimal approximation")
        if name == "classify":
            p.add_argument("--degree-cap", type=int, help="degree bound for the Handelman search")
            p.add_argument("--no-realize", action="store_true")
        else:
            p.add_argument("--matrix", help="non-negative integer matrix witness as JSON, e.g. [[0,1],[1,1]]")
        p.set_defaults(func=func)

    p = sub.add_parser("oracle", parents=[common], help="degree sequence of iterates")
    with_input(p)
    p.add_argument("--depth", type=int)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
    except DomainError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    out = _Out(args.format, stdout)
    try:
        return args.func(args, out, config)
    except ParseError as exc:
        stderr.write(f"parse error: {exc}\n")
        if exc.text is not None and exc.position is not None:
            stderr.write(f"  {exc.text}\n  {' ' * exc.position}^\n")
        out.record("error", {"error": "parse", "message": str(exc), "position": exc.position}, config)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        stderr.write(f"resource limit: {exc}\n")
        out.record("error", {"error": "resource", "message": str(exc)}, config)
        return EXIT_RESOURCE
    except (DomainError, ValueError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        out.record("error", {"error": "input", "message": str(exc)}, config)
        return EXIT_INPUT
    except DdegError as exc:
        stderr.write(f"internal error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
