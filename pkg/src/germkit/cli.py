"""Command line front end: invariant reports, family verdicts, the table.

Three subcommands share one plumbing path: parse the source, build the
resource caps, run, render as text or JSON.  All randomness flows from
--seed, and identical invocations produce byte-identical output.

Exit codes: 0 success, 1 reproduced table mismatch, 2 not finitely
determined, 3 parse error, 4 resource cap hit.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import (GenericityError, IntegrityError, NonPrincipalError,
                     NotFinitelyDetermined, ParseError, ResourceCapExceeded)
from .family import DEFAULT_T_SAMPLES, analyze_family, reproduce_table1
from .germs import parse_germ, parse_unfolding
from .groebner import ResourceLimits
from .invariants import REPORT_FIELDS, invariant_report

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_NOT_DETERMINED = 2
EXIT_PARSE = 3
EXIT_CAPPED = 4


class RunConfig:
    """Everything one invocation needs, normalized from argparse."""

    __slots__ = ("command", "source", "seed", "plane_samples", "t_samples",
                 "fmt", "limits")

    def __init__(self, command, source=None, seed=0, plane_samples=5,
                 t_samples=DEFAULT_T_SAMPLES, fmt="text", limits=None):
        self.command = command
        self.source = source
        self.seed = seed
        self.plane_samples = plane_samples
        self.t_samples = tuple(Fraction(t) for t in t_samples)
        self.fmt = fmt
        self.limits = limits


def _read_source(text):
    """Inline germ text, or the contents of a file holding one."""
    if os.path.isfile(text):
        with open(text, "r", encoding="utf-8") as fh:
            return fh.read().strip()
    return text


def _parse_t_samples(text):
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as ex:
        raise ParseError(f"bad t-sample list {text!r}: {ex}") from ex


def _limits_from(args):
    kwargs = {}
    if args.max_spairs is not None:
        kwargs["max_pairs"] = args.max_spairs
    if args.max_terms is not None:
        kwargs["max_steps"] = args.max_terms
    if args.time_budget is not None:
        kwargs["max_seconds"] = args.time_budget
    return ResourceLimits(**kwargs) if kwargs else None


def _emit_json(payload, out):
    out.write(json.dumps(payload, sort_keys=True, indent=2))
    out.write("\n")


def _render_report_text(report, out):
    for name in REPORT_FIELDS:
        out.write("%-13s = %d  [%s]\n"
                  % (name, getattr(report, name), report.provenance[name]))
    out.write("plane samples (a, b, c) -> (mu_Ytilde, mu_Y):\n")
    for s in report.plane_samples:
        out.write("  %r -> (%s, %s)\n"
                  % (s.coefficients, s.mu_Ytilde, s.mu_Y))


def cmd_invariants(config, out):
    f = parse_germ(config.source)
    report = invariant_report(f, seed=config.seed,
                              n_samples=config.plane_samples,
                              limits=config.limits)
    if config.fmt == "json":
        _emit_json({"invariants": report.as_dict()}, out)
    else:
        out.write("germ: %s\n" % config.source)
        _render_report_text(report, out)
    return EXIT_OK


def cmd_family(config, out):
    F = parse_unfolding(config.source)
    verdict = analyze_family(F, t_samples=config.t_samples,
                             seed=config.seed, limits=config.limits)
    if config.fmt == "json":
        _emit_json(verdict.as_dict(), out)
        return EXIT_OK
    out.write("unfolding: %s\n" % config.source)
    for t, report in verdict.samples:
        if report is None:
            out.write("t=%s: %s\n" % (t, verdict.failures.get(t)))
        else:
            out.write("t=%s: %s\n" % (t, "  ".join(
                "%s=%d" % (n, getattr(report, n)) for n in REPORT_FIELDS)))
    out.write("topologically trivial: %s; Whitney: %s; "
              "counterexample to conjecture: %s\n"
              % (verdict.topologically_trivial, verdict.whitney,
                 "YES" if verdict.counterexample_to_conjecture else "no"))
    for line in verdict.criteria_fired:
        out.write("  criterion: %s\n" % line)
    for line in verdict.notes:
        out.write("  note: %s\n" % line)
    out.write("caveat: %s\n" % verdict.caveat)
    return EXIT_OK


def cmd_table1(config, out):
    rows = reproduce_table1(seed=config.seed, limits=config.limits)
    if config.fmt == "json":
        _emit_json({"rows": [r.as_dict() for r in rows]}, out)
    else:
        for r in rows:
            shown = "-" if r.computed is None else str(tuple(r.computed))
            flag = "ok" if r.matched else r.status
            if r.status == "ok" and not r.matched:
                flag = "MISMATCH"
            out.write("%-50s expected %-18s computed %-18s %s\n"
                      % (r.family, tuple(r.expected), shown, flag))
    if any(r.status.startswith("capped") for r in rows):
        return EXIT_CAPPED
    if not all(r.matched for r in rows):
        return EXIT_MISMATCH
    return EXIT_OK


def _build_parser():
    top = argparse.ArgumentParser(
        prog="germkit",
        description="Exact invariants of finitely determined map germs "
                    "from the plane to three-space")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, with_source):
        if with_source:
            p.add_argument("source", help="germ text or a file containing it")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--planes", type=int, default=5,
                       help="number of plane sections to sample")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--max-spairs", type=int, default=None,
                       help="cap on S-pairs per basis computation")
        p.add_argument("--max-terms", type=int, default=None,
                       help="cap on reduction work per basis computation")
        p.add_argument("--time-budget", type=float, default=None,
                       help="seconds allowed per basis computation")

    common(sub.add_parser("invariants", help="invariant report of one germ"),
           with_source=True)
    fam = sub.add_parser("family", help="verdicts for a t-unfolding")
    common(fam, with_source=True)
    fam.add_argument("--t-samples", default=None,
                     help="comma separated rationals, must include 0")
    common(sub.add_parser("table1", help="reproduce the counterexample table"),
           with_source=False)
    return top


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = _build_parser().parse_args(argv)
    try:
        t_samples = DEFAULT_T_SAMPLES
        if getattr(args, "t_samples", None):
            t_samples = _parse_t_samples(args.t_samples)
        config = RunConfig(
            command=args.command,
            source=_read_source(args.source) if hasattr(args, "source")
            else None,
            seed=args.seed,
            plane_samples=args.planes,
            t_samples=t_samples,
            fmt=args.format,
            limits=_limits_from(args),
        )
        if config.command == "invariants":
            return cmd_invariants(config, out)
        if config.command == "family":
            return cmd_family(config, out)
        return cmd_table1(config, out)
    except ParseError as ex:
        print("parse error: %s" % ex, file=sys.stderr)
        return EXIT_PARSE
    except ValueError as ex:
        print("bad input: %s" % ex, file=sys.stderr)
        return EXIT_PARSE
    except (NotFinitelyDetermined, NonPrincipalError) as ex:
        print("not finitely determined: %s" % ex, file=sys.stderr)
        return EXIT_NOT_DETERMINED
    except ResourceCapExceeded as ex:
        print("resource cap: %s" % ex, file=sys.stderr)
        return EXIT_CAPPED
    except GenericityError as ex:
        print("genericity unresolved: %s" % ex, file=sys.stderr)
        return EXIT_CAPPED
    except IntegrityError as ex:
        print("integrity failure: %s" % ex, file=sys.stderr)
        raise


if __name__ == "__main__":
    sys.exit(main())
