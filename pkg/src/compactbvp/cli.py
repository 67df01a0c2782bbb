"""Command-line driver.

``compactbvp solve``  solves one named problem and writes the nodal table.
``compactbvp study``  runs a truncation, accuracy or pointwise study.

Exit codes:

0  success
1  invalid configuration or arguments
2  boundary closure not solvable on this mesh
3  global system singular or too ill-conditioned
4  coefficient evaluation failed during assembly
5  solved closure values disagree with their re-derivation

Errors are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .convergence import FIELDS, ConvergenceReport, accuracy_study, pointwise_rates, truncation_errors, truncation_study
from .errors import AssemblyError, SelfConsistencyError, SingularSystem, SolvabilityViolation
from .problems import PROBLEMS, get_problem
from .solver import solve_bvp

__all__ = ["RunConfig", "ConfigError", "load_config", "main", "EXIT_CODES"]

EXIT_CODES = {
    "ok": 0,
    "config": 1,
    "solvability": 2,
    "singular": 3,
    "assembly": 4,
    "consistency": 5,
}
KINDS = ("solve", "truncation", "accuracy", "pointwise")
FORMATS = ("csv", "json")
FLOAT_FMT = "%.16e"


class ConfigError(ValueError):
    """Invalid run configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


@dataclass(frozen=True)
class RunConfig:
    problem: str = "problem1"
    kind: str = "solve"
    ns: Tuple[int, ...] = ()
    fmt: str = "csv"
    out: Optional[str] = None
    pointwise_out: Optional[str] = None
    pointwise_pair: Optional[Tuple[int, int]] = None
    align: str = "nodes"
    endpoints: Optional[bool] = None
    coefs: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {self.problem!r}; known: {', '.join(sorted(PROBLEMS))}")
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        if self.align not in ("nodes", "index"):
            raise ConfigError(f"align must be 'nodes' or 'index', got {self.align!r}")
        if not self.ns:
            raise ConfigError("no grid sizes given")
        if any(n < 4 for n in self.ns):
            raise ConfigError(f"grid sizes must be >= 4, got {list(self.ns)}")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ConfigError(f"grid sizes must be strictly ascending, got {list(self.ns)}")
        if self.kind == "solve" and len(self.ns) != 1:
            raise ConfigError("solve takes exactly one grid size")
        if self.kind == "pointwise" and len(self.ns) != 2:
            raise ConfigError("a pointwise study takes exactly two grid sizes")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _int_list(text: str) -> Tuple[int, ...]:
    items = [t.strip() for t in str(text).split(",") if t.strip()]
    try:
        return tuple(int(t) for t in items)
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _pair(text: str) -> Tuple[int, int]:
    values = _int_list(text)
    if len(values) != 2:
        raise ConfigError(f"expected two grid sizes, got {text!r}")
    return values


def _coef(text: str) -> Tuple[str, float]:
    name, sep, value = str(text).partition("=")
    if not sep:
        raise ConfigError(f"coefficient override must look like NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise ConfigError(f"coefficient {name.strip()!r} needs a numeric value, got {value!r}") from None


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "include"):
        return True
    if t in ("0", "false", "no", "exclude"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


_CONFIG_KEYS = {"problem", "kind", "n", "ns", "format", "out", "pointwise_out", "pointwise_pair", "align", "endpoints", "coef"}


def load_config(path: str) -> Dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, lists are comma-separated."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="compactbvp", description="Compact finite-difference solver for fourth-order BVPs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="flat key = value file; command-line flags take precedence")
        p.add_argument("--problem", choices=sorted(PROBLEMS))
        p.add_argument("--format", dest="fmt", choices=FORMATS)
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument(
            "--coef", action="append", default=None, metavar="NAME=VALUE",
            help="override a constant coefficient (problem1: A, B, D, H)",
        )

    s = sub.add_parser("solve", help="solve one problem on one grid")
    common(s)
    s.add_argument("--n", type=int, help="number of cells")

    t = sub.add_parser("study", help="convergence study over several grids")
    common(t)
    t.add_argument("--ns", help="comma-separated ascending grid sizes")
    t.add_argument("--kind", choices=KINDS[1:])
    t.add_argument("--pointwise-out", help="also write per-node rates to this path")
    t.add_argument("--pointwise-pair", help="two nested grid sizes for per-node rates (default: the last two)")
    t.add_argument("--align", choices=("nodes", "index"), help="per-node comparison: same point or same node index")
    t.add_argument("--endpoints", choices=("include", "exclude"), help="whether error norms include the endpoint slots")
    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else {}

    def pick(flag, key):
        value = getattr(args, flag, None)
        return value if value is not None else cfg.get(key)

    if args.command == "solve":
        kind = "solve"
        if cfg.get("kind", "solve") != "solve":
            raise ConfigError("config kind conflicts with the solve command")
        n = pick("n", "n")
        ns = _int_list(n) if n is not None else ()
    else:
        kind = pick("kind", "kind") or "accuracy"
        if kind == "solve":
            raise ConfigError("use the solve command for kind=solve")
        raw = pick("ns", "ns")
        ns = _int_list(raw) if raw is not None else ()

    coefs: Dict[str, float] = {}
    if args.coef is not None:
        coef_items = list(args.coef)
    else:
        coef_items = [c for c in cfg.get("coef", "").split(",") if c.strip()]
    for item in coef_items:
        name, value = _coef(item)
        coefs[name] = value

    pair = pick("pointwise_pair", "pointwise_pair")
    endpoints = pick("endpoints", "endpoints")
    return RunConfig(
        problem=pick("problem", "problem") or "problem1",
        kind=kind,
        ns=ns,
        fmt=pick("fmt", "format") or "csv",
        out=pick("out", "out"),
        pointwise_out=pick("pointwise_out", "pointwise_out"),
        pointwise_pair=_pair(pair) if pair is not None else None,
        align=pick("align", "align") or "nodes",
        endpoints=_bool(endpoints) if endpoints is not None else None,
        coefs=coefs,
    )


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _num(v: Optional[float]) -> str:
    return "" if v is None else FLOAT_FMT % v


def _csv(header: Sequence[str], rows, comments: Sequence[Tuple[str, object]] = ()) -> str:
    buf = io.StringIO()
    for key, value in comments:
        buf.write(f"# {key}={value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(c) if isinstance(c, float) or c is None else c for c in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def render_solution(problem: str, sol, fmt: str) -> str:
    g = sol.grid
    summary = {"problem": problem, "n": g.n, "a": g.a, "b": g.b, "norm_d4_h": sol.norm_d4, "rcond": sol.rcond}
    cols = ("x", "u", "p", "d2", "d3", "d4")
    data = (g.nodes, sol.u.v, sol.p.v, sol.d2.v, sol.d3.v, sol.d4.v)
    rows = [tuple(float(c[j]) for c in data) for j in range(g.n + 1)]
    if fmt == "json":
        return _json({"summary": summary, "columns": list(cols), "rows": [list(r) for r in rows]})
    comments = [(k, _num(v) if isinstance(v, float) else v) for k, v in summary.items()]
    return _csv(cols, rows, comments)


def render_report(rep: ConvergenceReport, fmt: str) -> str:
    prev = {}
    rows = []
    for n1, n2 in zip(rep.ns, rep.ns[1:]):
        for name in FIELDS:
            prev[(n2, name)] = (rep.rate(n1, n2, name, "l2h"), rep.rate(n1, n2, name, "sup"))
    for rec in sorted(rep.records, key=lambda r: (FIELDS.index(r.field), r.n)):
        rh, rs = prev.get((rec.n, rec.field), (None, None))
        rows.append((rec.field, rec.n, rec.norm_h, rec.norm_sup, rh, rs))
    header = ("field", "n", "norm_h", "norm_sup", "rate_h", "rate_sup")
    meta = {"kind": rep.kind, "problem": rep.problem, "endpoints": "include" if rep.include_endpoints else "exclude"}
    if fmt == "json":
        return _json({**meta, "ns": list(rep.ns), "columns": list(header), "rows": [list(r) for r in rows]})
    return _csv(header, rows, list(meta.items()))


def render_pointwise(points, meta: Dict[str, object], fmt: str) -> str:
    header = ("x", "j", "field", "slope")
    rows = [(p.x, p.j, p.field, p.slope) for p in points]
    if fmt == "json":
        return _json({**meta, "columns": list(header), "rows": [list(r) for r in rows]})
    return _csv(header, rows, list(meta.items()))


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path!r}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _problem(cfg: RunConfig):
    try:
        return get_problem(cfg.problem, **cfg.coefs)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc.args[0] if exc.args else exc)) from None


def cmd_solve(cfg: RunConfig) -> None:
    problem = _problem(cfg)
    sol = solve_bvp(problem.spec(cfg.ns[0]))
    _write(render_solution(problem.name, sol, cfg.fmt), cfg.out)


def cmd_study(cfg: RunConfig) -> None:
    problem = _problem(cfg)
    if cfg.kind == "pointwise":
        coarse, fine = (truncation_errors(problem.exact, problem.coeffs, problem.grid(n)) for n in cfg.ns)
        try:
            points = pointwise_rates(coarse, fine, cfg.align)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        meta = {"kind": "pointwise", "problem": problem.name, "n_coarse": cfg.ns[0], "n_fine": cfg.ns[1], "align": cfg.align}
        _write(render_pointwise(points, meta, cfg.fmt), cfg.out)
        return

    pair = None
    if cfg.pointwise_out is not None:
        if len(cfg.ns) < 2 and cfg.pointwise_pair is None:
            raise ConfigError("per-node rates need at least two grid sizes")
        pair = cfg.pointwise_pair or cfg.ns[-2:]
    kwargs = {"pointwise_pair": pair, "pointwise_align": cfg.align}
    if cfg.endpoints is not None:
        kwargs["include_endpoints"] = cfg.endpoints
    try:
        if cfg.kind == "truncation":
            rep = truncation_study(problem.exact, problem.coeffs, (problem.a, problem.b), cfg.ns, name=problem.name, **kwargs)
        else:
            rep = accuracy_study(problem, cfg.ns, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _write(render_report(rep, cfg.fmt), cfg.out)
    if pair is not None:
        meta = {"kind": f"pointwise-{rep.kind}", "problem": problem.name, "n_coarse": pair[0], "n_fine": pair[1], "align": cfg.align}
        _write(render_pointwise(rep.pointwise, meta, cfg.fmt), cfg.pointwise_out)


def _fail(kind: str, exc: BaseException, **extra) -> int:
    code = EXIT_CODES[kind]
    payload = {"error": type(exc).__name__, "kind": kind, "exit_code": code, "message": str(exc), **extra}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve(args)
        (cmd_solve if args.command == "solve" else cmd_study)(cfg)
    except ConfigError as exc:
        return _fail("config", exc)
    except SolvabilityViolation as exc:
        return _fail("solvability", exc, side=exc.side, quantity=exc.quantity, threshold=exc.threshold)
    except SingularSystem as exc:
        return _fail("singular", exc, rcond=exc.rcond)
    except AssemblyError as exc:
        return _fail("assembly", exc)
    except SelfConsistencyError as exc:
        return _fail("consistency", exc)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
