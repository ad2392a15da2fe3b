"""JSON file formats for the core objects.

Rationals travel as lowest-terms strings ("3/4", "2", "0"); parsing the
serialized form reproduces the object exactly, so round-trips are the
identity on canonical files.

MetricSpace:   {"points": [...], "diam": "p/q", "d": [["p/q", ...], ...]}
KatetovFn:     {"space": <inline object or file path>, "values": [...]}
Approximant:   MetricSpace keys plus {"denom", "subset_bound", "rounds",
                "round_sizes", "log"}
StepFn2D:      {"x_breaks": [...], "y_breaks": [...], "values": [[...]]}
StepFn1D:      {"breaks": [...], "values": [...]}
RadialProfile: {"breakpoints": [...], "values": [...], "tail_slope": "p/q"}
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .banach import RadialProfile, StepFn1D, StepFn2D
from .errors import MslabError
from .metric import KatetovFn, MetricSpace
from .rationals import format_rational, parse_rational
from .urysohn import Approximant, RealizationRecord


class FormatError(MslabError):
    pass


def _rat_list(values) -> list[str]:
    return [format_rational(v) for v in values]


def space_to_dict(space: MetricSpace) -> dict:
    return {
        "points": list(space.labels),
        "diam": format_rational(space.diam_bound),
        "d": [_rat_list(row) for row in space.d],
    }


def space_from_dict(data: dict) -> MetricSpace:
    try:
        return MetricSpace(
            tuple(data["points"]),
            tuple(tuple(parse_rational(v) for v in row) for row in data["d"]),
            parse_rational(data["diam"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad metric space payload: {exc}") from exc


def katetov_to_dict(fn: KatetovFn) -> dict:
    return {"space": space_to_dict(fn.space), "values": _rat_list(fn.values)}


def katetov_from_dict(data: dict, base_dir: Path | None = None) -> KatetovFn:
    try:
        spec = data["space"]
        if isinstance(spec, str):
            path = Path(spec)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            space = load_space(path)
        else:
            space = space_from_dict(spec)
        return KatetovFn.over(space, [parse_rational(v) for v in data["values"]])
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad katetov payload: {exc}") from exc


def approximant_to_dict(a: Approximant) -> dict:
    out = space_to_dict(a.as_metric_space())
    out.update(
        {
            "denom": a.denom,
            "subset_bound": a.subset_bound,
            "rounds": a.rounds,
            "round_sizes": list(a.round_sizes),
            "log": [
                {
                    "round": rec.round,
                    "subset": list(rec.subset),
                    "values": [format_rational(Fraction(v, a.denom)) for v in rec.values],
                    "point": rec.point,
                }
                for rec in a.log
            ],
        }
    )
    return out


def approximant_from_dict(data: dict) -> Approximant:
    try:
        space = space_from_dict(data)
        a = Approximant.from_space(space, int(data["denom"]), int(data["subset_bound"]))
        a.rounds = int(data.get("rounds", 0))
        a.round_sizes = [int(v) for v in data.get("round_sizes", [space.n_points])]
        a.log = [
            RealizationRecord(
                round=int(rec["round"]),
                subset=tuple(int(i) for i in rec["subset"]),
                values=tuple(
                    int(parse_rational(v) * a.denom) for v in rec["values"]
                ),
                point=int(rec["point"]),
            )
            for rec in data.get("log", [])
        ]
        return a
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad approximant payload: {exc}") from exc


def stepfn2d_to_dict(f: StepFn2D) -> dict:
    return {
        "x_breaks": _rat_list(f.x_breaks),
        "y_breaks": _rat_list(f.y_breaks),
        "values": [_rat_list(row) for row in f.values],
    }


def stepfn2d_from_dict(data: dict) -> StepFn2D:
    try:
        return StepFn2D(
            tuple(parse_rational(v) for v in data["x_breaks"]),
            tuple(parse_rational(v) for v in data["y_breaks"]),
            tuple(tuple(parse_rational(v) for v in row) for row in data["values"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad 2d step function payload: {exc}") from exc


def stepfn1d_to_dict(f: StepFn1D) -> dict:
    return {"breaks": _rat_list(f.breaks), "values": _rat_list(f.values)}


def stepfn1d_from_dict(data: dict) -> StepFn1D:
    try:
        return StepFn1D(
            tuple(parse_rational(v) for v in data["breaks"]),
            tuple(parse_rational(v) for v in data["values"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad 1d step function payload: {exc}") from exc


def profile_to_dict(h: RadialProfile) -> dict:
    return {
        "breakpoints": _rat_list(h.breakpoints),
        "values": _rat_list(h.values),
        "tail_slope": format_rational(h.tail_slope),
    }


def profile_from_dict(data: dict) -> RadialProfile:
    try:
        return RadialProfile(
            tuple(parse_rational(v) for v in data["breakpoints"]),
            tuple(parse_rational(v) for v in data["values"]),
            parse_rational(data["tail_slope"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad radial profile payload: {exc}") from exc


def _load_json(path: str | Path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def _dump_json(payload: Any, path: str | Path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_space(path: str | Path) -> MetricSpace:
    return space_from_dict(_load_json(path))


def save_space(space: MetricSpace, path: str | Path):
    _dump_json(space_to_dict(space), path)


def load_katetov(path: str | Path) -> KatetovFn:
    return katetov_from_dict(_load_json(path), base_dir=Path(path).parent)


def save_katetov(fn: KatetovFn, path: str | Path):
    _dump_json(katetov_to_dict(fn), path)


def load_approximant(path: str | Path) -> Approximant:
    return approximant_from_dict(_load_json(path))


def save_approximant(a: Approximant, path: str | Path):
    _dump_json(approximant_to_dict(a), path)


def load_stepfn2d(path: str | Path) -> StepFn2D:
    return stepfn2d_from_dict(_load_json(path))


def load_stepfn1d(path: str | Path) -> StepFn1D:
    return stepfn1d_from_dict(_load_json(path))


def load_profile(path: str | Path) -> RadialProfile:
    return profile_from_dict(_load_json(path))


def save_profile(h: RadialProfile, path: str | Path):
    _dump_json(profile_to_dict(h), path)
