"""
Scenario files.

A file holds either one scenario object or a suite::

    {"schema_version": 1, "scenarios": [...], "calibration": {...}}

JSON is the primary format; ``.yaml``/``.yml`` files are read with PyYAML. Unknown keys are
rejected at every level.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import yaml

from fronttrack.analysis.characteristics import Selection
from fronttrack.config.expressions import compile_expression
from fronttrack.engine.initial import Datum, RiemannDatum, SampledDatum, StepsDatum
from fronttrack.engine.params import DEFAULT_LADDER, RunParams, validate_ladder
from fronttrack.errors import ConfigError
from fronttrack.model.curves import lax_composite
from fronttrack.model.systems import SystemModel, as_state, model_from_description

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

CHECK_NAMES: Tuple[str, ...] = (
    "replay",
    "lax",
    "rh",
    "glimm",
    "identities",
    "regions",
    "jump_cases",
    "terminal",
    "positive_decay",
    "cont_decay",
    "exceptional",
    "ladder",
    "oracle",
)
DEFAULT_CHECKS: Tuple[str, ...] = tuple(c for c in CHECK_NAMES if c != "oracle")

# conservative fallbacks for constants absent from the calibration block
DEFAULT_CALIBRATION: Dict[str, float] = {
    "wave_balance": 4.0,
    "terminal": 4.0,
    "region": 4.0,
    "positive_decay": 1.1,
    "cont_decay": 4.0,
}

SCENARIO_KEYS = frozenset(
    {
        "name",
        "system",
        "datum",
        "run",
        "ladder",
        "checks",
        "output_dir",
        "seed",
        "regions",
        "decay_unions",
        "interval_unions",
        "oracle",
        "characteristics",
    }
)
SUITE_KEYS = frozenset({"schema_version", "scenarios", "calibration", "calibration_sources"})
UNOBSERVED = "unobserved"
SYSTEM_KEYS = {
    "burgers": frozenset({"kind", "box"}),
    "p_system": frozenset({"kind", "gamma", "box"}),
    "polynomial": frozenset({"kind", "terms", "fields", "box", "gn_constant", "name"}),
}
DATUM_KEYS = {
    "riemann": frozenset({"kind", "left", "right", "strengths", "x"}),
    "steps": frozenset({"kind", "breakpoints", "states"}),
    "sampled": frozenset({"kind", "expression", "cells", "domain"}),
}
RUN_KEYS = frozenset({"nu", "horizon", "np_threshold", "np_budget", "speed_perturb", "c0", "tv_guard", "max_fronts", "case_split"})
UNION_KEYS = frozenset({"t0", "tau", "intervals"})
ORACLE_KEYS = frozenset({"nus", "t", "grid", "min_order"})
SEED_KEYS = frozenset({"t0", "x0", "family", "tau", "selection"})

DEFAULT_REGIONS = 100
DEFAULT_DECAY_UNIONS = 50
DEFAULT_ORACLE_GRID = 4096


def _keys(data: Any, allowed: Iterable[str], where: str, required: Iterable[str] = ()) -> Dict[str, Any]:
    if not isinstance(data, Mapping):
        raise ConfigError(f"{where} must be an object")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")
    missing = [k for k in required if k not in data]
    if missing:
        raise ConfigError(f"missing key(s) {missing} in {where}")
    return dict(data)


def _float(value: Any, where: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where} must be a number, got {value!r}") from exc


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint closed intervals at time t0, followed along characteristics for a time tau."""

    t0: float
    tau: float
    intervals: Tuple[Tuple[float, float], ...]

    @classmethod
    def from_dict(cls, data: Any, where: str) -> "IntervalUnion":
        data = _keys(data, UNION_KEYS, where, required=UNION_KEYS)
        intervals = []
        for k, pair in enumerate(data["intervals"]):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ConfigError(f"{where}.intervals[{k}] must be an [a, b] pair")
            a, b = _float(pair[0], where), _float(pair[1], where)
            if a > b:
                raise ConfigError(f"{where}.intervals[{k}] is empty")
            intervals.append((a, b))
        if not intervals:
            raise ConfigError(f"{where}.intervals must not be empty")
        t0, tau = _float(data["t0"], f"{where}.t0"), _float(data["tau"], f"{where}.tau")
        if t0 < 0.0 or tau <= 0.0:
            raise ConfigError(f"{where} needs t0 >= 0 and tau > 0")
        return cls(t0, tau, tuple(sorted(intervals)))

    def to_dict(self) -> Dict[str, Any]:
        return {"t0": self.t0, "tau": self.tau, "intervals": [list(i) for i in self.intervals]}


@dataclass(frozen=True)
class OracleOptions:
    nus: Tuple[float, ...] = (0.1, 0.05, 0.025)
    t: float = 1.0
    grid: int = DEFAULT_ORACLE_GRID
    min_order: float = 0.8

    @classmethod
    def from_dict(cls, data: Any, where: str) -> "OracleOptions":
        data = _keys(data, ORACLE_KEYS, where)
        nus = tuple(_float(v, f"{where}.nus") for v in data.get("nus", cls.nus))
        if len(nus) < 2 or any(n <= 0.0 for n in nus):
            raise ConfigError(f"{where}.nus needs at least two positive values")
        options = cls(
            nus=tuple(sorted(nus, reverse=True)),
            t=_float(data.get("t", cls.t), f"{where}.t"),
            grid=int(data.get("grid", cls.grid)),
            min_order=_float(data.get("min_order", cls.min_order), f"{where}.min_order"),
        )
        if options.t <= 0.0 or options.grid < 16:
            raise ConfigError(f"{where} needs t > 0 and grid >= 16")
        return options

    def to_dict(self) -> Dict[str, Any]:
        return {"nus": list(self.nus), "t": self.t, "grid": self.grid, "min_order": self.min_order}


@dataclass(frozen=True)
class CharacteristicSeed:
    t0: float
    x0: float
    family: int
    tau: float
    selection: Selection = Selection.MINIMAL

    @classmethod
    def from_dict(cls, data: Any, where: str) -> "CharacteristicSeed":
        data = _keys(data, SEED_KEYS, where, required=("t0", "x0", "family", "tau"))
        try:
            selection = Selection(data.get("selection", Selection.MINIMAL.value))
        except ValueError as exc:
            raise ConfigError(f"{where}.selection must be 'minimal' or 'maximal'") from exc
        return cls(
            t0=_float(data["t0"], f"{where}.t0"),
            x0=_float(data["x0"], f"{where}.x0"),
            family=int(data["family"]),
            tau=_float(data["tau"], f"{where}.tau"),
            selection=selection,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"t0": self.t0, "x0": self.x0, "family": self.family, "tau": self.tau, "selection": self.selection.value}


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    system: Dict[str, Any]
    datum: Dict[str, Any]
    run: Dict[str, Any]
    ladder: Tuple[Tuple[float, float], ...] = DEFAULT_LADDER
    checks: Tuple[str, ...] = DEFAULT_CHECKS
    output_dir: Optional[str] = None
    seed: int = 0
    regions: int = DEFAULT_REGIONS
    decay_unions: int = DEFAULT_DECAY_UNIONS
    interval_unions: Tuple[IntervalUnion, ...] = ()
    oracle: Optional[OracleOptions] = None
    characteristics: Tuple[CharacteristicSeed, ...] = ()

    def build_model(self) -> SystemModel:
        return model_from_description(self.system)

    def build_datum(self) -> Datum:
        return build_datum(self.datum, self.build_model())

    def build_params(self, nu: Optional[float] = None) -> RunParams:
        values = dict(self.run)
        if nu is not None:
            values["nu"] = nu
        try:
            return RunParams(epsilon_ladder=self.ladder, **values)
        except TypeError as exc:
            raise ConfigError(f"scenario {self.name!r}: invalid run parameters: {exc}") from exc

    def with_output_dir(self, output_dir: Optional[str]) -> "ScenarioConfig":
        if output_dir is None:
            return self
        return ScenarioConfig(**{**self.__dict__, "output_dir": output_dir})

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "name": self.name,
            "system": self.system,
            "datum": self.datum,
            "run": self.run,
            "ladder": [list(p) for p in self.ladder],
            "checks": list(self.checks),
            "seed": self.seed,
            "regions": self.regions,
            "decay_unions": self.decay_unions,
        }
        if self.output_dir is not None:
            out["output_dir"] = self.output_dir
        if self.interval_unions:
            out["interval_unions"] = [u.to_dict() for u in self.interval_unions]
        if self.oracle is not None:
            out["oracle"] = self.oracle.to_dict()
        if self.characteristics:
            out["characteristics"] = [c.to_dict() for c in self.characteristics]
        return out


def build_datum(data: Mapping[str, Any], model: SystemModel) -> Datum:
    """
    Datum from its config object. A Riemann datum may give ``strengths`` instead of ``right``;
    the right state is then the end of the composite wave curve from ``left``.
    """
    kind = data.get("kind")
    if kind == "riemann":
        left = as_state(data["left"], model.n_eqs)
        if "strengths" in data:
            right = lax_composite(model, left, as_state(data["strengths"], model.n_eqs))[-1]
        else:
            right = as_state(data["right"], model.n_eqs)
        return RiemannDatum(left=left, right=right, x=float(data.get("x", 0.0)))
    if kind == "steps":
        return StepsDatum(
            breakpoints=tuple(float(b) for b in data["breakpoints"]),
            states=tuple(data["states"]),
        )
    if kind == "sampled":
        domain = data["domain"]
        return SampledDatum(
            function=compile_expression(data["expression"]),
            cells=int(data["cells"]),
            domain=(float(domain[0]), float(domain[1])),
            expression=data["expression"],
        )
    raise ConfigError(f"unknown datum kind {kind!r}")


def _system(data: Any, where: str) -> Dict[str, Any]:
    if not isinstance(data, Mapping) or data.get("kind") not in SYSTEM_KEYS:
        raise ConfigError(f"{where}.kind must be one of {sorted(SYSTEM_KEYS)}")
    return _keys(data, SYSTEM_KEYS[data["kind"]], where)


def _datum(data: Any, where: str) -> Dict[str, Any]:
    if not isinstance(data, Mapping) or data.get("kind") not in DATUM_KEYS:
        raise ConfigError(f"{where}.kind must be one of {sorted(DATUM_KEYS)}")
    required = DATUM_KEYS[data["kind"]] - {"x", "right", "strengths"}
    data = _keys(data, DATUM_KEYS[data["kind"]], where, required=required)
    if data["kind"] == "riemann" and ("right" in data) == ("strengths" in data):
        raise ConfigError(f"{where} needs exactly one of right and strengths")
    return data


def scenario_from_dict(data: Any, where: str = "scenario") -> ScenarioConfig:
    data = _keys(data, SCENARIO_KEYS, where, required=("name", "system", "datum", "run"))
    name = str(data["name"])
    where = f"scenario {name!r}"

    checks = tuple(data.get("checks", DEFAULT_CHECKS))
    unknown = sorted(set(checks) - set(CHECK_NAMES))
    if unknown:
        raise ConfigError(f"{where}: unknown check(s) {unknown}")

    ladder = validate_ladder(data.get("ladder", DEFAULT_LADDER))
    regions = int(data.get("regions", DEFAULT_REGIONS))
    decay_unions = int(data.get("decay_unions", DEFAULT_DECAY_UNIONS))
    if regions < 0 or decay_unions < 0:
        raise ConfigError(f"{where}: regions and decay_unions must be non-negative")

    config = ScenarioConfig(
        name=name,
        system=_system(data["system"], f"{where}.system"),
        datum=_datum(data["datum"], f"{where}.datum"),
        run=_keys(data["run"], RUN_KEYS, f"{where}.run", required=("nu", "horizon")),
        ladder=ladder,
        checks=checks,
        output_dir=data.get("output_dir"),
        seed=int(data.get("seed", 0)),
        regions=regions,
        decay_unions=decay_unions,
        interval_unions=tuple(
            IntervalUnion.from_dict(u, f"{where}.interval_unions[{k}]") for k, u in enumerate(data.get("interval_unions", ()))
        ),
        oracle=OracleOptions.from_dict(data["oracle"], f"{where}.oracle") if "oracle" in data else None,
        characteristics=tuple(
            CharacteristicSeed.from_dict(c, f"{where}.characteristics[{k}]") for k, c in enumerate(data.get("characteristics", ()))
        ),
    )

    # build once so that every problem surfaces at load time
    try:
        model = config.build_model()
        config.build_datum()
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    params = config.build_params()
    for seed in config.characteristics:
        if not 1 <= seed.family <= model.n_eqs:
            raise ConfigError(f"{where}: characteristic family {seed.family} is not in 1..{model.n_eqs}")
    for union in config.interval_unions:
        if union.t0 + union.tau > params.horizon:
            raise ConfigError(f"{where}: interval union runs past the horizon {params.horizon:g}")
    if "oracle" in checks and not model.is_scalar:
        raise ConfigError(f"{where}: the oracle check needs a scalar system")
    return config


@dataclass(frozen=True)
class Suite:
    scenarios: Tuple[ScenarioConfig, ...]
    calibration: Dict[str, float] = field(default_factory=dict)
    calibration_sources: Dict[str, str] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    source: Optional[Path] = None

    def names(self) -> List[str]:
        return [s.name for s in self.scenarios]

    def select(self, name: Optional[str]) -> List[ScenarioConfig]:
        if name is None:
            return list(self.scenarios)
        chosen = [s for s in self.scenarios if s.name == name]
        if not chosen:
            raise ConfigError(f"no scenario named {name!r}; available: {self.names()}")
        return chosen

    def constant(self, name: str) -> float:
        return float(self.calibration.get(name, DEFAULT_CALIBRATION[name]))


def _calibration(data: Any) -> Dict[str, float]:
    data = _keys(data or {}, DEFAULT_CALIBRATION, "calibration")
    out = {k: _float(v, f"calibration.{k}") for k, v in data.items()}
    if any(v <= 0.0 for v in out.values()):
        raise ConfigError("calibration constants must be positive")
    return out


def _calibration_sources(data: Any) -> Dict[str, str]:
    """Scenario behind each frozen constant, or ``unobserved`` when no run bounded it."""
    data = _keys(data or {}, DEFAULT_CALIBRATION, "calibration_sources")
    if not all(isinstance(v, str) and v for v in data.values()):
        raise ConfigError("calibration_sources must map constants to scenario names")
    return dict(data)


def suite_from_dict(data: Any, source: Optional[Path] = None) -> Suite:
    if not isinstance(data, Mapping):
        raise ConfigError("a scenario file must hold an object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}")

    if "scenarios" in data:
        data = _keys(data, SUITE_KEYS, "suite", required=("scenarios",))
        raw = data["scenarios"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("suite.scenarios must be a non-empty list")
        scenarios = tuple(scenario_from_dict(s, f"scenarios[{k}]") for k, s in enumerate(raw))
    else:
        body = {k: v for k, v in data.items() if k not in SUITE_KEYS}
        scenarios = (scenario_from_dict(body),)

    names = [s.name for s in scenarios]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigError(f"duplicate scenario name(s) {duplicates}")
    sources = _calibration_sources(data.get("calibration_sources"))
    strangers = sorted(set(sources.values()) - set(names) - {UNOBSERVED})
    if strangers:
        raise ConfigError(f"calibration_sources name unknown scenario(s) {strangers}")
    return Suite(
        scenarios=scenarios,
        calibration=_calibration(data.get("calibration")),
        calibration_sources=sources,
        source=source,
    )


def load_suite(path: Path | str) -> Suite:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    suite = suite_from_dict(data, source=path)
    logger.info("loaded %d scenario(s) from %s", len(suite.scenarios), path)
    return suite


def write_calibration(
    path: Path | str, constants: Mapping[str, float], sources: Optional[Mapping[str, str]] = None
) -> Path:
    """
    Replace the calibration block of a suite file, keeping everything else as written. With
    ``sources`` the scenario behind each constant is frozen alongside it.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    yaml_file = path.suffix.lower() in (".yaml", ".yml")
    data = yaml.safe_load(text) if yaml_file else json.loads(text)
    data["calibration"] = {k: float(constants[k]) for k in sorted(constants)}
    if sources is not None:
        data["calibration_sources"] = {k: str(sources.get(k, UNOBSERVED)) for k in sorted(constants)}
    suite_from_dict(data, source=path)
    if yaml_file:
        path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
    else:
        path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return path
