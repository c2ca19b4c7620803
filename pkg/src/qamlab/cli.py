"""Command-line entry point.

Subcommands: ``check`` evaluates the commutation residual for a given
pair, spaces, and simple function; ``witness`` searches for a simple
function on which the pair fails to commute; ``suite`` runs both seeded
commutation suites; ``phi`` emits the scalar-reduction diagnostics for a
pair.  Input documents are the JSON schemas of the owning modules.

Exit codes: 0 pass / no witness, 1 check failed / witness found,
2 malformed input, 3 numeric range failure (message carries the stage).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError, RangeError
from .generators import Generator, generator_from_json
from .means import SimpleFunctionMatrix, commutation_residual
from .measure_space import DiscreteMeasureSpace, ProductGrid
from .phi_reduction import run_diagnostics
from .suites import run_finite_measure_suite, run_probability_suite
from .witness_search import GridSpec, Spacing, block_witness_search, full_witness_search

__all__ = ["RunConfig", "dispatch", "main"]


@dataclass
class RunConfig:
    command: str
    f: str | None = None
    g: str | None = None
    space_x: str | None = None
    space_y: str | None = None
    h: str | None = None
    grid: int = 21
    value_range: tuple[float, float] = (0.1, 10.0)
    spacing: str = "geometric"
    tol: float = 1e-8
    threshold: float = 1e-4
    seed: int = 42
    workers: int = 1
    out: str | None = None
    format: str = "json"


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read JSON document {path}: {exc}") from exc


def _load_generator(path: str) -> Generator:
    return generator_from_json(_load_json(path))


def _load_space(path: str) -> DiscreteMeasureSpace:
    return DiscreteMeasureSpace.from_json(_load_json(path))


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ValueError(f"{cfg.command} requires --{', --'.join(m.replace('_', '-') for m in missing)}")


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------

def _cmd_check(cfg: RunConfig) -> tuple[int, object]:
    _require(cfg, "f", "g", "space_x", "space_y", "h")
    f = _load_generator(cfg.f)
    g = _load_generator(cfg.g)
    grid = ProductGrid(_load_space(cfg.space_x), _load_space(cfg.space_y))
    h = SimpleFunctionMatrix.from_json(_load_json(cfg.h))
    if h.shape != grid.shape:
        raise ValueError(f"h has shape {h.shape} but the spaces give {grid.shape}")
    # values outside either domain are a malformed input, not a numeric failure
    for gen in (f, g):
        if not gen.domain.contains_all(h.values):
            raise ValueError(f"h contains values outside the domain of {gen.describe()}")
    report = commutation_residual(f, g, grid, h)
    doc = {
        "command": "check",
        "f": f.to_json(),
        "g": g.to_json(),
        "space_x": grid.space_x.to_json(),
        "space_y": grid.space_y.to_json(),
        "h": h.to_json(),
        "tolerance": cfg.tol,
        **report.to_dict(),
        "pass": report.passes(cfg.tol),
    }
    return (0 if report.passes(cfg.tol) else 1), doc


def _cmd_witness(cfg: RunConfig) -> tuple[int, object]:
    _require(cfg, "f", "g", "space_x", "space_y")
    f = _load_generator(cfg.f)
    g = _load_generator(cfg.g)
    space_x = _load_space(cfg.space_x)
    space_y = _load_space(cfg.space_y)
    grid = GridSpec(cfg.grid, cfg.value_range, Spacing(cfg.spacing))
    if len(space_x) == 2 and len(space_y) == 2:
        wx, wy = space_x.weights, space_y.weights
        witness = block_witness_search(
            f, g, float(wx[0]), float(wx[1]), float(wy[0]), float(wy[1]),
            grid, cfg.threshold, workers=cfg.workers,
        )
    else:
        witness = full_witness_search(
            f, g, (len(space_x), len(space_y)), (space_x, space_y),
            grid, cfg.threshold, workers=cfg.workers,
        )
    if witness is None:
        return 0, "none"
    return 1, witness.to_json_dict()


def _cmd_suite(cfg: RunConfig) -> tuple[int, object]:
    fm = run_finite_measure_suite(seed=cfg.seed, tol=cfg.tol)
    pr = run_probability_suite(seed=cfg.seed, tol=cfg.tol)
    ok = fm.passed and pr.passed
    doc = {
        "command": "suite",
        "seed": cfg.seed,
        "summaries": [fm.summary(), pr.summary()],
        "rows": fm.rows + pr.rows,
        "pass": ok,
    }
    return (0 if ok else 1), doc


def _cmd_phi(cfg: RunConfig) -> tuple[int, object]:
    _require(cfg, "f", "g")
    f = _load_generator(cfg.f)
    g = _load_generator(cfg.g)
    a1 = a2 = b1 = b2 = 1.0
    if cfg.space_x is not None:
        sx = _load_space(cfg.space_x)
        if len(sx) != 2:
            raise ValueError("phi diagnostics need a two-atom X space")
        a1, a2 = (float(w) for w in sx.weights)
    if cfg.space_y is not None:
        sy = _load_space(cfg.space_y)
        if len(sy) != 2:
            raise ValueError("phi diagnostics need a two-atom Y space")
        b1, b2 = (float(w) for w in sy.weights)
    rows = run_diagnostics(f, g, a1, a2, b1, b2, tol=cfg.tol)
    doc = {
        "command": "phi",
        "f": f.to_json(),
        "g": g.to_json(),
        "masses": [a1, a2, b1, b2],
        "tolerance": cfg.tol,
        "checks": rows,
    }
    return 0, doc


_COMMANDS = {
    "check": _cmd_check,
    "witness": _cmd_witness,
    "suite": _cmd_suite,
    "phi": _cmd_phi,
}


def dispatch(cfg: RunConfig) -> tuple[int, object]:
    """Run one configured command; returns (exit code, report document)."""
    if cfg.command not in _COMMANDS:
        raise ValueError(f"unknown command {cfg.command!r}")
    if not cfg.tol > 0.0:
        raise ValueError("tolerance must be positive")
    return _COMMANDS[cfg.command](cfg)


# ---------------------------------------------------------------------------
# Serialisation and argument parsing
# ---------------------------------------------------------------------------

def _to_csv(doc: object) -> str:
    if isinstance(doc, dict) and "rows" in doc:
        rows = doc["rows"]
    elif isinstance(doc, dict) and "checks" in doc:
        rows = doc["checks"]
    elif isinstance(doc, dict):
        rows = [doc]
    else:
        rows = [{"result": doc}]
    if not rows:
        return ""
    columns = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        flat = {
            k: json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v
            for k, v in row.items()
        }
        writer.writerow(flat)
    return buf.getvalue()


def _write(doc: object, cfg: RunConfig) -> None:
    # witness documents are always JSON so reruns are byte-comparable
    if cfg.format == "csv" and cfg.command != "witness":
        text = _to_csv(doc)
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text)


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError as exc:
        raise ValueError(f"--range expects LO:HI, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qamlab",
        description="Quasi-arithmetic mean commutation: residual checks, "
        "witness search, randomized suites, and scalar diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("check", "evaluate the commutation residual for f, g, spaces, and h"),
        ("witness", "search for a simple function on which f and g fail to commute"),
        ("suite", "run both seeded commutation suites"),
        ("phi", "emit scalar-reduction diagnostics for a pair"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--f", help="generator JSON file for f")
        p.add_argument("--g", help="generator JSON file for g")
        p.add_argument("--space-x", dest="space_x", help="X space JSON file")
        p.add_argument("--space-y", dest="space_y", help="Y space JSON file")
        p.add_argument("--h", help="simple-function JSON file (check only)")
        p.add_argument("--grid", type=int, default=21, help="points per search axis")
        p.add_argument("--range", dest="value_range", default="0.1:10",
                       help="search value range LO:HI")
        p.add_argument("--spacing", choices=["linear", "geometric"], default="geometric")
        p.add_argument("--tol", type=float, default=1e-8, help="pass tolerance")
        p.add_argument("--threshold", type=float, default=1e-4,
                       help="witness residual threshold")
        p.add_argument("--seed", type=int, default=42, help="suite RNG seed")
        p.add_argument("--workers", type=int, default=1, help="search partitions")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--format", choices=["json", "csv"], default="json")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            f=args.f,
            g=args.g,
            space_x=args.space_x,
            space_y=args.space_y,
            h=args.h,
            grid=args.grid,
            value_range=_parse_range(args.value_range),
            spacing=args.spacing,
            tol=args.tol,
            threshold=args.threshold,
            seed=args.seed,
            workers=args.workers,
            out=args.out,
            format=args.format,
        )
        code, doc = dispatch(cfg)
    except RangeError as exc:
        stage = f" [stage: {exc.stage}]" if exc.stage else ""
        print(f"range error: {exc}{stage}", file=sys.stderr)
        return 3
    except (DomainError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    _write(doc, cfg)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
