"""Parsers for the component and synthetic spec file grammars.

Component spec file: one component per line, ``kind key=value ...`` with
``#`` comments and blank lines ignored. Kinds are ``mean`` (no
parameters), ``cooling`` (tau_c, amp), ``heating`` (tau_h, amp),
``bathpulse`` (tau_c, tau_h, amp), ``heatkernel`` (r, amp); omitted
parameters fall back to grid-derived defaults.

Synthetic spec file: the same component lines, each extended with a
mandatory ``weights=MODEL:args`` clause, plus ``key=value`` directive
lines. Directives: ``n`` (recordings), ``m`` (time points), ``dt``
(seconds), ``seed``, and either ``noise`` (absolute Gaussian sigma) or
``noise_rel`` (fraction of the clean data range). Weight models:
``constant:VALUE``, ``drift:BASE,SLOPE``, ``periodic:BASE,AMP,PERIOD``,
``walk:BASE,STEP``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import SpecFileError, ValidationError
from .initialization import (
    BATH_PULSE,
    COOLING,
    CURVE_KINDS,
    HEAT_KERNEL,
    HEATING,
    MEAN,
    ComponentSpec,
    time_vector,
)
from .synth import GroundTruth, PlantedComponent, SyntheticSpec, WeightModel, generate, noise_sigma_for_range

_CURVE_KEYS = {
    MEAN: frozenset(),
    COOLING: frozenset({"amp", "tau_c"}),
    HEATING: frozenset({"amp", "tau_h"}),
    BATH_PULSE: frozenset({"amp", "tau_c", "tau_h"}),
    HEAT_KERNEL: frozenset({"amp", "r"}),
}

_WEIGHT_ARGS = {
    "constant": ("base",),
    "drift": ("base", "slope"),
    "periodic": ("base", "amp", "period"),
    "walk": ("base", "step"),
}


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_float(raw: str, line_no: int, what: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise SpecFileError(f"{what} is not a number: {raw!r}", line=line_no) from None


def _parse_component_tokens(tokens: list[str], line_no: int) -> tuple[ComponentSpec, str | None]:
    kind = tokens[0].lower()
    if kind not in CURVE_KINDS:
        raise SpecFileError(
            f"unknown component kind {tokens[0]!r}; expected one of {', '.join(CURVE_KINDS)}",
            line=line_no,
        )
    params: dict[str, float] = {}
    weights_clause = None
    for token in tokens[1:]:
        if "=" not in token:
            raise SpecFileError(f"expected key=value, got {token!r}", line=line_no)
        key, raw = token.split("=", 1)
        key = key.strip().lower()
        if key == "weights":
            weights_clause = raw.strip()
            continue
        if key not in _CURVE_KEYS[kind]:
            allowed = ", ".join(sorted(_CURVE_KEYS[kind])) or "none"
            raise SpecFileError(
                f"parameter {key!r} not valid for {kind!r} (allowed: {allowed})",
                line=line_no,
            )
        params[key] = _parse_float(raw.strip(), line_no, key)
    try:
        spec = ComponentSpec(kind=kind, **params)
    except ValidationError as exc:
        raise SpecFileError(str(exc), line=line_no) from None
    return spec, weights_clause


def parse_component_specs(text: str) -> list[ComponentSpec]:
    """Parse a component spec file body into curve specs, in file order."""
    specs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        spec, weights = _parse_component_tokens(line.split(), line_no)
        if weights is not None:
            raise SpecFileError(
                "weights= clauses belong in synthetic spec files", line=line_no
            )
        specs.append(spec)
    if not specs:
        raise SpecFileError("no components defined")
    return specs


def _parse_weight_model(clause: str, line_no: int) -> WeightModel:
    head, sep, rest = clause.partition(":")
    kind = head.strip().lower()
    if kind not in _WEIGHT_ARGS:
        raise SpecFileError(
            f"unknown weight model {head!r}; expected one of {', '.join(_WEIGHT_ARGS)}",
            line=line_no,
        )
    names = _WEIGHT_ARGS[kind]
    args = [a for a in rest.split(",") if a.strip()] if sep else []
    if len(args) != len(names):
        raise SpecFileError(
            f"weight model {kind!r} takes {len(names)} argument(s) "
            f"({':'.join((kind, ','.join(names)))}), got {len(args)}",
            line=line_no,
        )
    values = {
        name: _parse_float(arg.strip(), line_no, f"{kind} {name}")
        for name, arg in zip(names, args)
    }
    try:
        return WeightModel(kind=kind, **values)
    except ValidationError as exc:
        raise SpecFileError(str(exc), line=line_no) from None


@dataclass(frozen=True)
class ParsedSyntheticSpec:
    n: int
    m: int
    dt: float
    seed: int
    noise_abs: float
    noise_rel: float | None
    components: tuple[PlantedComponent, ...]


def parse_synthetic_spec(text: str) -> ParsedSyntheticSpec:
    """Parse a synthetic spec file body (directives plus component lines)."""
    directives: dict[str, float] = {}
    directive_lines: dict[str, int] = {}
    components: list[PlantedComponent] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 1 and "=" in tokens[0]:
            key, _, value = tokens[0].partition("=")
            key = key.strip().lower()
            if key not in ("n", "m", "dt", "seed", "noise", "noise_rel"):
                raise SpecFileError(f"unknown directive {key!r}", line=line_no)
            if key in directives:
                raise SpecFileError(
                    f"directive {key!r} already set on line {directive_lines[key]}",
                    line=line_no,
                )
            directives[key] = _parse_float(value.strip(), line_no, key)
            directive_lines[key] = line_no
            continue
        spec, weights_clause = _parse_component_tokens(tokens, line_no)
        if weights_clause is None:
            raise SpecFileError(
                "synthetic components need a weights= clause", line=line_no
            )
        components.append(
            PlantedComponent(curve=spec, weights=_parse_weight_model(weights_clause, line_no))
        )

    for required in ("n", "m", "dt"):
        if required not in directives:
            raise SpecFileError(f"missing required directive {required!r}")
    if not components:
        raise SpecFileError("no components defined")
    if "noise" in directives and "noise_rel" in directives:
        raise SpecFileError("give either noise or noise_rel, not both")
    return ParsedSyntheticSpec(
        n=int(directives["n"]),
        m=int(directives["m"]),
        dt=float(directives["dt"]),
        seed=int(directives.get("seed", 0)),
        noise_abs=float(directives.get("noise", 0.0)),
        noise_rel=(
            float(directives["noise_rel"]) if "noise_rel" in directives else None
        ),
        components=tuple(components),
    )


def build_ground_truth(parsed: ParsedSyntheticSpec) -> tuple[SyntheticSpec, GroundTruth]:
    """Generate data from a parsed spec, resolving relative noise levels.

    Relative noise needs the clean data range, so the dataset is generated
    once noiselessly to measure it and then regenerated with the absolute
    sigma; the clean data is identical across both passes (same seed).
    """
    spec = SyntheticSpec(
        n=parsed.n,
        grid=time_vector(parsed.m, parsed.dt),
        components=parsed.components,
        noise_sigma=parsed.noise_abs,
        seed=parsed.seed,
    )
    if parsed.noise_rel is not None:
        clean = generate(dataclasses.replace(spec, noise_sigma=0.0))
        sigma = noise_sigma_for_range(clean.t_clean, parsed.noise_rel)
        spec = dataclasses.replace(spec, noise_sigma=sigma)
    return spec, generate(spec)
