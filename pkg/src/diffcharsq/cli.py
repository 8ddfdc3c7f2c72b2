"""Command-line front end: JSON reports for spaces, computations and verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .circle_u1 import (
    CircleMap,
    QuadratureError,
    ResolutionError,
    SamplingError,
    cs_product_quadrature,
    discrete_product_value,
    q0_circle,
    random_circle_map,
)
from .cohomology import cohomology_group, homology_group
from .complex_core import (
    ComplexError,
    ComplexFileError,
    Ring,
    SimplicialComplex,
    build_space_with_projections,
    load_complex,
    parse_space_descriptor,
)
from .diffchar import (
    CSCochain,
    CharacterClass,
    ConsistencyError,
    canonical_lift,
    cs_action,
    q_map,
    random_character,
    sl2z_defect,
)
from .steenrod import DualityError, is_spin, steenrod_square, stiefel_whitney_classes, verify_axioms, wu_classes
from .suites import (
    SuiteReport,
    verify_cup_i_relations,
    verify_exact_sequences,
    verify_proposition,
    verify_theorem,
)

SCHEMA_VERSION = 1

COMPUTE_TARGETS = ("cohomology", "steenrod", "wu", "qmap", "cs-action")
VERIFY_SUITES = ("cup-i-relations", "proposition", "theorem", "axioms", "exact-sequences")
SEEDED = {("verify", s) for s in VERIFY_SUITES if s != "axioms"} | {("compute", "cs-action")}

SL2Z_GENERATORS = {"S": ((0, -1), (1, 0)), "T": ((1, 1), (0, 1))}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    space: str | None = None
    file: str | None = None
    deg: int | None = None
    k: int | None = None
    ring: str | None = None
    seed: int | None = None
    trials: int | None = None
    out: str | None = None
    dry_run: bool = False
    winding: list[int] = field(default_factory=list)
    csv: list[str] = field(default_factory=list)
    m: list[int] = field(default_factory=list)
    quad_n: int | None = None

    def validate(self) -> None:
        if self.command != "circle":
            if (self.space is None) == (self.file is None):
                raise UsageError("give exactly one of --space or --file")
            if self.space is not None:
                parse_space_descriptor(self.space)
            elif not Path(self.file).is_file():
                raise UsageError(f"no such file: {self.file}")
        if (self.command, self.target) in SEEDED and self.seed is None:
            raise UsageError("--seed is required for randomized runs")
        if self.ring not in (None, "both"):
            Ring.parse(self.ring)
        for name in ("deg", "k", "trials"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise UsageError(f"--{name} must be non-negative")
        if self.command == "circle":
            if not 1 <= len(self.winding) <= 2:
                raise UsageError("--winding takes one or two integers")
            if len(self.csv) > len(self.winding):
                raise UsageError("each --csv file needs a --winding")
            if len(self.csv) < len(self.winding) and self.seed is None:
                raise UsageError("--seed is required when a map is generated at random")
            for path in self.csv:
                if not Path(path).is_file():
                    raise UsageError(f"no such file: {path}")
            if any(m < 3 for m in self.m):
                raise UsageError("--m values must be at least 3")


# --------------------------------------------------------------------------
# JSON


def _encode(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (tuple, set)):
        return list(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _normalize(obj):
    """Turn Fractions anywhere in the report into "num/den" strings."""
    if isinstance(obj, Fraction):
        return _encode(obj)
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_normalize(report), indent=2, default=_encode) + "\n"


def _emit(cfg: RunConfig | None, report: dict, stream=None) -> None:
    text = dumps(report)
    if cfg is not None and cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        (stream or sys.stdout).write(text)


# --------------------------------------------------------------------------
# commands


def _space(cfg: RunConfig) -> tuple[SimplicialComplex, tuple | None]:
    if cfg.file is not None:
        return load_complex(cfg.file), None
    return build_space_with_projections(cfg.space)


def _rng(cfg: RunConfig) -> np.random.Generator:
    return np.random.default_rng(cfg.seed)


def _degrees(cfg: RunConfig, K: SimplicialComplex, lo: int = 0) -> list[int]:
    if cfg.deg is None:
        return list(range(lo, K.dimension + 1))
    if not lo <= cfg.deg <= K.dimension:
        raise UsageError(f"--deg must lie in {lo}..{K.dimension}")
    return [cfg.deg]


def cmd_build(cfg: RunConfig) -> tuple[int, dict]:
    K, _ = _space(cfg)
    return 0, {
        "name": K.name,
        "dimension": K.dimension,
        "f_vector": list(K.f_vector),
        "euler_characteristic": K.euler_characteristic,
        "complex": K.to_json(),
    }


def cmd_compute(cfg: RunConfig) -> tuple[int, dict]:
    K, _ = _space(cfg)
    t = cfg.target
    if t == "cohomology":
        ring = Ring.parse(cfg.ring or "int")
        return 0, {"groups": [cohomology_group(K, p, ring).to_json() for p in _degrees(cfg, K)]}
    if t == "steenrod":
        rows = []
        for p in _degrees(cfg, K):
            H = cohomology_group(K, p, Ring.MOD2)
            squares = [cfg.k] if cfg.k is not None else list(range(0, p + 1))
            for i in squares:
                if p + i > K.dimension:
                    continue
                target = cohomology_group(K, p + i, Ring.MOD2)
                images = [target.coordinate_map(steenrod_square(i, g)) for g in H.generators]
                rows.append({"degree": p, "i": i, "images": images})
        return 0, {"squares": rows}
    if t == "wu":
        wu = wu_classes(K)
        sw = stiefel_whitney_classes(K)
        spin = is_spin(K) if 1 <= K.dimension <= 5 else None
        return 0, {"wu": wu.to_json(), "stiefel_whitney": {f"w{j}": c for j, c in enumerate(sw.coordinates)}, "spin": spin}
    if t == "qmap":
        k = cfg.k or 0
        H = cohomology_group(K, 2 * k + 1, Ring.INT)
        values = [list(q_map(K, k, g).values) for g in H.generators]
        return 0, {
            "k": k,
            "cohomology_generators": len(H.generators),
            "homology_generators": len(homology_group(K, 4 * k + 1, Ring.INT).generators),
            "q": values,
        }
    if t == "cs-action":
        if K.dimension != 5:
            raise UsageError("cs-action needs a 5-dimensional space")
        rng = _rng(cfg)
        H = cohomology_group(K, 3, Ring.INT)
        zero = CharacterClass(CSCochain.zero(K, 3, 3))
        gen_rows = []
        for j, g in enumerate(H.generators):
            x = CharacterClass(canonical_lift(g))
            gen_rows.append({"generator": j, "defect_T": sl2z_defect(K, SL2Z_GENERATORS["T"], zero, x)})
        trials = []
        for j in range(cfg.trials if cfg.trials is not None else 3):
            a = CharacterClass(random_character(K, 3, rng))
            b = CharacterClass(random_character(K, 3, rng))
            row = {"trial": j, "action": cs_action(K, a, b)}
            for name, g in SL2Z_GENERATORS.items():
                row[f"defect_{name}"] = sl2z_defect(K, g, a, b)
            trials.append(row)
        return 0, {"generator_defects": gen_rows, "random_fields": trials}
    raise UsageError(f"unknown compute target {t!r}")


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    K, projections = _space(cfg)
    t = cfg.target
    if t == "cup-i-relations":
        ring = cfg.ring or "both"
        rings = (Ring.INT, Ring.MOD2) if ring == "both" else (Ring.parse(ring),)
        rep = verify_cup_i_relations(K, _rng(cfg), cfg.trials if cfg.trials is not None else 1000, rings)
    elif t == "proposition":
        rep = verify_proposition(K, _rng(cfg), cfg.trials if cfg.trials is not None else 200)
    elif t == "theorem":
        k = cfg.k or 0
        rep = verify_theorem(K, k, _rng(cfg), cfg.trials if cfg.trials is not None else 3)
    elif t == "axioms":
        ax = verify_axioms(K, projections)
        rep = SuiteReport()
        for name, c in ax.checks.items():
            chk = rep.check(name)
            chk.passed, chk.checked, chk.counterexample = c.passed, c.checked, c.witness
    elif t == "exact-sequences":
        rng = _rng(cfg)
        rep = SuiteReport()
        for p in _degrees(cfg, K, lo=1):
            rep.merge(verify_exact_sequences(K, p, rng, cfg.trials if cfg.trials is not None else 5), prefix=f"level{p}_")
    else:
        raise UsageError(f"unknown suite {t!r}")
    return (0 if rep.passed else 1), rep.to_json()


def cmd_circle(cfg: RunConfig) -> tuple[int, dict]:
    rng = _rng(cfg) if cfg.seed is not None else None
    maps = []
    for j, w in enumerate(cfg.winding):
        if j < len(cfg.csv):
            maps.append(CircleMap.from_csv(cfg.csv[j], w))
        else:
            maps.append(random_circle_map(rng, w))
    f = maps[0]
    g = maps[1] if len(maps) > 1 else f
    n = cfg.quad_n or 4096
    quad = cs_product_quadrature(f, g, n)
    rows, gaps = [], []
    for m in cfg.m or [32, 64, 128]:
        exact = discrete_product_value(f, g, m)
        d = abs(float(exact) - quad) % 1.0
        gap = min(d, 1.0 - d)
        gaps.append(gap)
        rows.append({"m": m, "discrete": exact, "discrete_float": float(exact), "gap": gap})
    ratios = [b / a if a > 0 else None for a, b in zip(gaps, gaps[1:])]
    return 0, {
        "windings": [mp.winding for mp in maps],
        "quadrature": quad,
        "quadrature_samples": n,
        "levels": rows,
        "gap_ratios": ratios,
        "q0_quadrature": q0_circle(f, n),
        "winding_parity": f.winding % 2,
    }


COMMANDS = {"build": cmd_build, "compute": cmd_compute, "verify": cmd_verify, "circle": cmd_circle}


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 with a JSON error, like other input errors
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, space: bool = True) -> None:
    if space:
        p.add_argument("--space", help="space descriptor, e.g. rp(3), torus^5, 'rp(2) x circle(3)'")
        p.add_argument("--file", help="JSON complex file {\"vertices\": n, \"facets\": [...]}")
        p.add_argument("--deg", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--ring", choices=["int", "mod2", "rat", "both"])
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--out")
    p.add_argument("--dry-run", action="store_true", help="validate the inputs and stop")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diffcharsq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("build", help="build a space and report its face counts"))
    p = sub.add_parser("compute", help="cohomology, squares, Wu classes, q-maps, Chern-Simons action")
    p.add_argument("target", choices=COMPUTE_TARGETS)
    _common(p)
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("target", choices=VERIFY_SUITES)
    _common(p)
    p = sub.add_parser("circle", help="circle-valued maps: quadrature versus discrete product")
    p.add_argument("--winding", type=int, nargs="+", required=True)
    p.add_argument("--csv", nargs="+", default=[], help="samples 'theta, F(theta)' per map")
    p.add_argument("--m", type=int, nargs="+", default=[32, 64, 128])
    p.add_argument("--quad-n", type=int, help="quadrature intervals (default 4096)")
    _common(p, space=False)
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**values)


def _config_json(cfg: RunConfig) -> dict:
    skip = ("command", "target", "out", "dry_run")
    return {k: v for k, v in asdict(cfg).items() if k not in skip and v is not None and v != []}


def _error(cfg: RunConfig | None, exc: Exception) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if getattr(exc, "line", None) is not None:
        err["line"] = exc.line
    return {"schema_version": SCHEMA_VERSION, "command": cfg.command if cfg else None, "error": err}


def main(argv: Sequence[str] | None = None) -> int:
    cfg = None
    try:
        ns = build_parser().parse_args(argv)
        cfg = _config(ns)
        cfg.validate()
        header = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "target": cfg.target,
                  "config": _config_json(cfg)}
        if cfg.dry_run:
            _emit(cfg, {**header, "dry_run": True, "valid": True})
            return 0
        code, result = COMMANDS[cfg.command](cfg)
        report = {**header, "result": result}
        if cfg.command == "verify":
            report["passed"] = code == 0
        _emit(cfg, report)
        return code
    except (UsageError, ComplexError, ComplexFileError, SamplingError, ResolutionError, QuadratureError, OSError) as exc:
        _emit(None, _error(cfg, exc))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConsistencyError, DualityError) as exc:
        _emit(None, _error(cfg, exc))
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
