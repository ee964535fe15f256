"""Command-line interface.

Exit codes: 0 success, 1 violations found in ``--strict`` mode, 2 input
error (unreadable file, parse, schema or validation failure), 3 usage error.
Data goes to stdout (or ``--output``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys as _sys
from pathlib import Path

from . import __version__
from .coherence import Enumeration
from .config import PropagationConfig, Thresholds
from .core import induced_subgraph
from .diagnostics import divergence_map, graph_report, render_text
from .exceptions import BeliefGraphError, InvalidParameter
from .extraction import enumerate_maximal_coherent, max_coherent_subgraph
from .format import (
    DiagnosticsOverlay,
    ParseReport,
    detect_format,
    parse_text,
    render_bgl,
    to_dot,
    to_graphml,
    to_json,
)
from .propagation import propagate_confidence

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class InputError(Exception):
    def __init__(self, exc: BaseException):
        super().__init__(str(exc))
        self.exc = exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if status:
            raise UsageError((message or "").strip())
        if message:
            self._print_message(message, _sys.stderr)
        raise _Exit(status)


class _Exit(Exception):
    def __init__(self, status):
        self.status = status


def _unit(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _damping(text: str):
    return text if text == "auto" else _unit(text)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("file", help="input .bgl or .json file, or - for stdin")
    common.add_argument("--format", choices=["bgl", "json"], help="input format (default: from extension)")
    common.add_argument("--output", "-o", help="write data here instead of stdout")
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--json", dest="as_json", action="store_true", help="machine-readable output")
    mode.add_argument("--text", dest="as_json", action="store_false", help="human-readable output (default)")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help="worker threads (default: $BELIEF_THREADS or 1)")

    thresholds = _Parser(add_help=False)
    t = Thresholds()
    thresholds.add_argument("--tau-high", type=_unit, default=t.tau_high)
    thresholds.add_argument("--tau-low", type=_unit, default=t.tau_low)
    thresholds.add_argument("--sigma", "--sigma-strong", dest="sigma_strong", type=_unit, default=t.sigma_strong)

    solver = _Parser(add_help=False)
    c = PropagationConfig()
    solver.add_argument("--damping", type=_damping, default="auto", help="step size in (0,1] or 'auto'")
    solver.add_argument("--tolerance", type=_unit, default=c.tolerance)
    solver.add_argument("--max-iter", "--max-iterations", dest="max_iterations", type=_positive_int,
                        default=c.max_iterations)

    p = _Parser(prog="beliefgraph", description="Structural diagnostics for typed belief graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    v = sub.add_parser("validate", parents=[common], help="check that a document builds")
    v.add_argument("--strict", action="store_true", help="exit 1 when defaults had to be applied")

    a = sub.add_parser("analyze", parents=[common, thresholds, solver], help="full diagnostic report")
    a.add_argument("--skip-cycles", action="store_true", help="do not enumerate contradiction cycles")
    a.add_argument("--max-cycles", type=_positive_int, default=10_000)
    a.add_argument("--chain-len", type=_positive_int, default=5, help="maximum nodes on a chain")
    a.add_argument("--max-chains", type=_positive_int, default=10_000)
    a.add_argument("--strict", action="store_true", help="exit 1 on confidence-consistency violations")

    e = sub.add_parser("extract", parents=[common], help="maximum coherent subgraph")
    e.add_argument("--objective", choices=["count", "cred", "conf", "total_cred", "total_conf"], default="count")
    e.add_argument("--mode", choices=["exact", "heuristic", "auto"], default="auto")
    e.add_argument("--exact-limit", type=int, default=40)
    e.add_argument("--enumerate", type=_positive_int, metavar="N",
                   help="also list up to N inclusion-maximal coherent sets")
    e.add_argument("--subgraph", choices=["json", "bgl"],
                   help="emit the selected subgraph as a document instead of the result")

    pr = sub.add_parser("propagate", parents=[common, solver], help="structure-derived confidence")
    pr.add_argument("--write", metavar="OUT", help="write a copy of the document with conf replaced")

    d = sub.add_parser("diverge", parents=[common, thresholds, solver], help="credibility/confidence divergence")
    d.add_argument("--conf", choices=["assigned", "propagated"], default="assigned")

    x = sub.add_parser("export", parents=[common], help="convert or render a document")
    x.add_argument("--to", choices=["dot", "graphml", "json", "bgl"], required=True)
    x.add_argument("--overlay", metavar="REPORT", help="JSON report whose diagnostics decorate the nodes")
    return p


def _read_input(args, stdin) -> ParseReport:
    try:
        if args.file == "-":
            text = (stdin or _sys.stdin).read()
            if isinstance(text, bytes):
                text = text.decode("utf-8")
            path = None
        else:
            path = Path(args.file)
            text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(exc) from None
    try:
        return parse_text(text, args.format or detect_format(path, text))
    except BeliefGraphError as exc:
        raise InputError(exc) from None


def _config_from(args):
    try:
        th = Thresholds(args.tau_high, args.tau_low, args.sigma_strong) if hasattr(args, "tau_high") else None
        cfg = None
        if hasattr(args, "damping"):
            damping = None if args.damping == "auto" else args.damping
            cfg = PropagationConfig(damping, args.tolerance, args.max_iterations)
    except InvalidParameter as exc:
        raise UsageError(str(exc)) from None
    return th, cfg


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("BELIEF_THREADS")
    if env:
        try:
            return _positive_int(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"BELIEF_THREADS: {exc}") from None
    return 1


def _cmd_validate(args, report: ParseReport, err) -> tuple[str, int]:
    s = report.system
    for w in report.warnings:
        where = f"{w.line}:{w.column}" if w.line is not None else w.path
        err.write(f"warning: {where}: {w.message}\n")
    code = EXIT_VIOLATIONS if args.strict and report.warnings else EXIT_OK
    if args.as_json:
        return _dump({
            "valid": True,
            "nodes": len(s.nodes),
            "edges": len(s.edges),
            "warnings": [w.to_dict() for w in report.warnings],
        }), code
    n_warn = len(report.warnings)
    return (f"{len(s.nodes)} nodes, {len(s.edges)} edges"
            + (f", {n_warn} warning{'s' if n_warn != 1 else ''}" if n_warn else "") + "\n"), code


def _cmd_analyze(args, report: ParseReport, err) -> tuple[str, int]:
    th, cfg = _config_from(args)
    if args.chain_len < 2:
        raise UsageError("--chain-len must be at least 2")
    rep = graph_report(report.system, th, cfg, include_cycles=not args.skip_cycles,
                       max_cycles=args.max_cycles, chain_max_len=args.chain_len,
                       max_chains=args.max_chains, threads=_threads(args))
    code = EXIT_VIOLATIONS if args.strict and rep.consistency_violations else EXIT_OK
    if not rep.propagation.converged:
        err.write("warning: confidence propagation did not converge\n")
    return (rep.to_json() if args.as_json else render_text(rep)), code


def _cmd_extract(args, report: ParseReport, err) -> tuple[str, int]:
    s = report.system
    try:
        res = max_coherent_subgraph(s, args.objective, args.mode, exact_limit=args.exact_limit)
    except InvalidParameter as exc:
        raise UsageError(str(exc)) from None
    if args.subgraph:
        sub = induced_subgraph(s, res.nodes)
        return (to_json(sub) if args.subgraph == "json" else render_bgl(sub)), EXIT_OK
    sets: Enumeration | None = enumerate_maximal_coherent(s, args.enumerate) if args.enumerate else None
    if args.as_json:
        out = {"result": res.to_dict()}
        if sets is not None:
            out["maximal_sets"] = {"items": [sorted(x) for x in sets], "truncated": sets.truncated}
        return _dump(out), EXIT_OK
    lines = [
        f"objective: {res.objective}",
        f"solver: {'exact' if res.exact else 'heuristic'}",
        f"score: {res.score:g}",
        f"nodes ({len(res.nodes)}): {', '.join(sorted(res.nodes))}",
    ]
    if sets is not None:
        lines.append(f"maximal coherent sets: {len(sets)}" + (" (truncated)" if sets.truncated else ""))
        lines.extend(f"  {{{', '.join(sorted(x))}}}" for x in sets)
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_propagate(args, report: ParseReport, err) -> tuple[str, int]:
    _, cfg = _config_from(args)
    res = propagate_confidence(report.system, cfg)
    if not res.converged:
        err.write(f"warning: did not converge after {res.iterations} iterations (residual {res.residual:.3g})\n")
    if args.write:
        try:
            Path(args.write).write_text(to_json(report.system.with_conf(res.conf_out)), encoding="utf-8")
        except OSError as exc:
            raise InputError(exc) from None
    if args.as_json:
        return _dump(res.to_dict()), EXIT_OK
    lines = [f"{'converged' if res.converged else 'not converged'}: {res.iterations} iterations, "
             f"residual {res.residual:.3g}, damping {res.damping}"]
    width = max((len(n) for n in res.conf_out), default=4)
    for n, c in res.conf_out.items():
        lines.append(f"{n:<{width}}  {report.system.nodes[n].conf:.4f} -> {c:.4f}")
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_diverge(args, report: ParseReport, err) -> tuple[str, int]:
    th, cfg = _config_from(args)
    entries = divergence_map(report.system, th, args.conf, cfg=cfg)
    if args.as_json:
        return _dump({
            "conf_source": args.conf,
            "thresholds": th.to_dict(),
            "entries": [e.to_dict() for e in entries],
        }), EXIT_OK
    width = max([len(e.node) for e in entries] + [4])
    lines = [f"{'node':<{width}}  cred   conf   delta   class"]
    for e in entries:
        lines.append(f"{e.node:<{width}}  {e.cred:.3f}  {e.conf:.3f}  {e.delta:+.3f}  {e.cls}")
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_export(args, report: ParseReport, err) -> tuple[str, int]:
    overlay = None
    if args.overlay:
        try:
            doc = json.loads(Path(args.overlay).read_text(encoding="utf-8"))
            overlay = DiagnosticsOverlay.from_report(doc)
        except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
            raise InputError(exc) from None
    s = report.system
    if args.to == "dot":
        return to_dot(s, overlay), EXIT_OK
    if args.to == "graphml":
        return to_graphml(s, overlay), EXIT_OK
    if args.to == "json":
        return to_json(s), EXIT_OK
    try:
        return render_bgl(s), EXIT_OK
    except InvalidParameter as exc:
        raise InputError(exc) from None


_COMMANDS = {
    "validate": _cmd_validate,
    "analyze": _cmd_analyze,
    "extract": _cmd_extract,
    "propagate": _cmd_propagate,
    "diverge": _cmd_diverge,
    "export": _cmd_export,
}


def _error_payload(kind: str, exc: BaseException, code: int) -> dict:
    if isinstance(exc, BeliefGraphError):
        detail = exc.to_dict()
    else:
        detail = {"type": type(exc).__name__, "message": str(exc)}
    detail["category"] = kind
    return {"error": detail, "exit_code": code}


def run(argv: list[str], stdin=None) -> tuple[str, str, int]:
    """Run the CLI in-process; returns ``(stdout, stderr, exit_code)``."""
    out, err = io.StringIO(), io.StringIO()
    want_json = "--json" in argv
    args = None
    try:
        args = build_parser().parse_args(argv)
        _config_from(args)
        if hasattr(args, "threads"):
            _threads(args)
        report = _read_input(args, stdin)
        data, code = _COMMANDS[args.command](args, report, err)
        if args.output:
            try:
                Path(args.output).write_text(data, encoding="utf-8")
            except OSError as exc:
                raise InputError(exc) from None
        else:
            out.write(data)
        return out.getvalue(), err.getvalue(), code
    except _Exit as exc:
        return out.getvalue(), err.getvalue(), exc.status
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        if want_json:
            out.write(_dump(_error_payload("usage", exc, EXIT_USAGE)))
        return out.getvalue(), err.getvalue(), EXIT_USAGE
    except InputError as exc:
        err.write(f"input error: {exc.exc}\n")
        if want_json:
            out.write(_dump(_error_payload("input", exc.exc, EXIT_INPUT)))
        return out.getvalue(), err.getvalue(), EXIT_INPUT


def main(argv: list[str] | None = None) -> int:
    argv = list(_sys.argv[1:] if argv is None else argv)
    stdout, stderr, code = run(argv)
    _sys.stderr.write(stderr)
    try:
        _sys.stdout.write(stdout)
        _sys.stdout.flush()
    except BrokenPipeError:
        pass
    return code


if __name__ == "__main__":
    raise SystemExit(main())
