"""The weighted generator menu used to produce training mixes.

A mix bundles three layers of configuration:

* the weighted list of generator options, one of which is drawn per problem
  (SAT options and UNSAT options are separate menus; a fair SAT/UNSAT coin
  picks the side first);
* per-role menus of distribution families ("distribution of distributions")
  consulted by the "+ distribution shift" options; non-shift options use the
  fixed base distributions;
* the clause-to-variable ratio table keyed by the variable-distribution
  family in effect.

``draw_plan`` performs all the random configuration choices and returns a
plan; ``execute_plan`` runs the chosen generator. Keeping the two apart lets
callers measure option frequencies without paying for generation.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .core import Assignment, Label, LabeledProblem
from .dist import (
    Bernoulli,
    BloomWeights,
    ClauseRatioSpec,
    DistributionSpec,
    KMinusOneBias,
    LogNormal,
    NormalClipped,
    Pareto,
    PowerLaw,
    UniformIndex,
    UniformNonZeroBias,
    WeightedCategorical,
    sample_clause_count,
    sample_polarities,
    sample_weighted,
    spec_from_dict,
    spec_to_dict,
)
from .errors import ConfigError
from .rng import RngState
from .satgen import SatGenConfig, biased_sat_cover, generate_sat, random_cnf, sat_cover
from .unsatgen import UnsatGenConfig, generate_unsat, unsat_with_sat_tail

# Generator options. `source` is what the cover transformations re-polarize;
# `shift` marks options that re-draw their distributions from the menus.
_SAT_OPTIONS: dict[str, dict] = {
    "uniform-bias": {"recipe": "direct", "shift": False},
    "biased-cover-flip": {"recipe": "cover", "cover": "biased", "flip": True, "source": "random", "shift": False},
    "biased-cover": {"recipe": "cover", "cover": "biased", "flip": False, "source": "random", "shift": False},
    "from-random-uniform-bias-shift": {"recipe": "cover", "cover": "full", "source": "random", "shift": True},
    "from-unsat-uniform-bias-shift": {"recipe": "cover", "cover": "full", "source": "unsat", "shift": True},
    "uniform-bias-shift": {"recipe": "direct", "shift": True},
    "from-random-biased-cover-flip-shift": {"recipe": "cover", "cover": "biased", "flip": True, "source": "random", "shift": True},
    "from-random-biased-cover-shift": {"recipe": "cover", "cover": "biased", "flip": False, "source": "random", "shift": True},
    "from-unsat-biased-cover-flip-shift": {"recipe": "cover", "cover": "biased", "flip": True, "source": "unsat", "shift": True},
    "from-unsat-biased-cover-shift": {"recipe": "cover", "cover": "biased", "flip": False, "source": "unsat", "shift": True},
    "from-sat-biased-cover-flip-shift": {"recipe": "cover", "cover": "biased", "flip": True, "source": "sat", "shift": True},
}

_UNSAT_OPTIONS: dict[str, dict] = {
    "shallow-bloom": {"preset": "shallow", "tail": "random", "shift": False},
    "deep-bloom": {"preset": "deep", "tail": "random", "shift": False},
    "shallow-bloom-shift": {"preset": "shallow", "tail": "random", "shift": True},
    "deep-bloom-shift": {"preset": "deep", "tail": "random", "shift": True},
    "sat-tail-shallow-bloom-shift": {"preset": "shallow", "tail": "sat", "shift": True},
    "sat-tail-deep-bloom-shift": {"preset": "deep", "tail": "sat", "shift": True},
}

# Stable ids for the packed record format (u8); SAT options first.
OPTION_IDS: dict[str, int] = {
    name: i
    for i, name in enumerate(list(_SAT_OPTIONS) + list(_UNSAT_OPTIONS))
}
OPTION_NAMES: dict[int, str] = {i: name for name, i in OPTION_IDS.items()}


@dataclass(frozen=True, slots=True)
class BloomPreset:
    depth: int | None
    down_clause_p: float


@dataclass(frozen=True, slots=True)
class RatioTable:
    """Clause-to-variable ratio rows, keyed by the vars family in effect."""

    c_phi: float = 4.27
    power_law_3cnf: float = 3.71
    default: float = 4.27
    std: float = 1.0
    clip: tuple[float, float] = (2.0, 11.0)

    def for_vars(self, vars_spec: DistributionSpec) -> ClauseRatioSpec:
        if isinstance(vars_spec, PowerLaw):
            mean = self.power_law_3cnf
        elif isinstance(vars_spec, UniformIndex):
            mean = self.c_phi
        else:
            mean = self.default
        return ClauseRatioSpec(mean, self.std, self.clip[0], self.clip[1])


@dataclass(frozen=True, slots=True)
class RoleDists:
    """One concrete distribution per sampling role."""

    vars: DistributionSpec
    lits_clause: DistributionSpec
    polarities: Bernoulli
    polarity_bias: DistributionSpec
    bloom: DistributionSpec


@dataclass(frozen=True, slots=True)
class Menu:
    """Weighted family choices for one role."""

    specs: tuple[DistributionSpec, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.specs) != len(self.weights):
            raise ConfigError("menu specs and weights differ in length")
        WeightedCategorical(self.weights)  # validates nonnegative, sum > 0

    def draw(self, rng: RngState) -> DistributionSpec:
        return self.specs[sample_weighted(WeightedCategorical(self.weights), rng)]


def _default_menus() -> dict[str, Menu]:
    return {
        "vars": Menu(
            (UniformIndex(), Pareto(1.16, 2.0), PowerLaw(2.6), LogNormal(10.0, 2.0)),
            (0.70, 0.20, 0.0, 0.10),
        ),
        "lits_clause": Menu(
            (NormalClipped(4.5, 1.0), UniformIndex(3, 7)),
            (0.90, 0.10),
        ),
        "polarities": Menu(
            (Bernoulli(0.5), Bernoulli(0.3), Bernoulli(0.7)),
            (0.80, 0.10, 0.10),
        ),
        "polarity_bias": Menu(
            (UniformNonZeroBias(), KMinusOneBias()),
            (1.0, 0.0),
        ),
        "bloom": Menu(
            (BloomWeights(0.48, 0.48, 0.02), BloomWeights(0.5, 0.3, 0.2)),
            (0.85, 0.15),
        ),
    }


@dataclass(frozen=True)
class GeneratorMixConfig:
    seed: int = 0
    n_min: int = 4
    max_vars: int = 20
    sat_fraction: float = 0.5
    sat_options: tuple[tuple[str, float], ...] = ()
    unsat_options: tuple[tuple[str, float], ...] = ()
    menus: dict[str, Menu] = field(default_factory=_default_menus)
    base: RoleDists = field(
        default_factory=lambda: RoleDists(
            UniformIndex(),
            NormalClipped(4.5, 1.0),
            Bernoulli(0.5),
            UniformNonZeroBias(),
            BloomWeights(0.48, 0.48, 0.02),
        )
    )
    ratio: RatioTable = RatioTable()
    init_size_max: int = 4
    shallow: BloomPreset = BloomPreset(3, 0.5)
    deep: BloomPreset = BloomPreset(None, 1.0)
    record_trace: bool = True

    def __post_init__(self) -> None:
        if self.n_min < 4:
            raise ConfigError(
                f"n_min below 4 cannot guarantee room for an unsatisfiable "
                f"core at the minimum clause ratio (got {self.n_min})"
            )
        if self.max_vars < self.n_min:
            raise ConfigError("max_vars must be >= n_min")
        if not 0.0 <= self.sat_fraction <= 1.0:
            raise ConfigError("sat_fraction must be in [0, 1]")
        for name, _ in self.sat_options:
            if name not in _SAT_OPTIONS:
                raise ConfigError(f"unknown SAT generator option {name!r}")
        for name, _ in self.unsat_options:
            if name not in _UNSAT_OPTIONS:
                raise ConfigError(f"unknown UNSAT generator option {name!r}")
        for options in (self.sat_options, self.unsat_options):
            if options and sum(w for _, w in options) <= 0:
                raise ConfigError("option weights must sum to a positive value")
        for role in ("vars", "lits_clause", "polarities", "polarity_bias", "bloom"):
            if role not in self.menus:
                raise ConfigError(f"distribution menu missing role {role!r}")


@dataclass(frozen=True, slots=True)
class SamplePlan:
    """Every random configuration choice behind one problem, pre-generation."""

    label: Label
    option: str
    n: int
    m: int
    dists: RoleDists


def _draw_option(options: tuple[tuple[str, float], ...], rng: RngState) -> str:
    if not options:
        raise ConfigError("no generator options configured for this label")
    weights = WeightedCategorical(tuple(w for _, w in options))
    return options[sample_weighted(weights, rng)][0]


def draw_plan(mix: GeneratorMixConfig, rng: RngState) -> SamplePlan:
    """Draw the label, option, shifted distributions, and problem shape."""
    gen = rng.gen
    sat_side = gen.random() < mix.sat_fraction
    if sat_side:
        option = _draw_option(mix.sat_options, rng)
        meta = _SAT_OPTIONS[option]
    else:
        option = _draw_option(mix.unsat_options, rng)
        meta = _UNSAT_OPTIONS[option]
    if meta["shift"]:
        dists = RoleDists(
            vars=mix.menus["vars"].draw(rng),
            lits_clause=mix.menus["lits_clause"].draw(rng),
            polarities=mix.menus["polarities"].draw(rng),
            polarity_bias=mix.menus["polarity_bias"].draw(rng),
            bloom=mix.menus["bloom"].draw(rng),
        )
    else:
        dists = mix.base
    n = int(gen.integers(mix.n_min, mix.max_vars + 1))
    m = sample_clause_count(mix.ratio.for_vars(dists.vars), n, rng)
    return SamplePlan(
        Label.SAT if sat_side else Label.UNSAT, option, n, m, dists
    )


def _sat_config(plan: SamplePlan) -> SatGenConfig:
    return SatGenConfig(
        plan.n,
        plan.m,
        vars=plan.dists.vars,
        lits_clause=plan.dists.lits_clause,
        polarities=plan.dists.polarities,
        polarity_bias=plan.dists.polarity_bias,
    )


def _unsat_config(
    mix: GeneratorMixConfig, plan: SamplePlan, preset_name: str, rng: RngState
) -> UnsatGenConfig:
    preset = mix.shallow if preset_name == "shallow" else mix.deep
    init_cap = max(1, min(mix.init_size_max, plan.m // 2))
    init_size = int(rng.gen.integers(1, init_cap + 1))
    return UnsatGenConfig(
        plan.n,
        plan.m,
        init_size=init_size,
        depth=preset.depth,
        down_clause=Bernoulli(preset.down_clause_p),
        vars=plan.dists.vars,
        lits_clause=plan.dists.lits_clause,
        polarities=plan.dists.polarities,
        bloom=plan.dists.bloom,
        record_trace=mix.record_trace,
    )


def _source_formula(
    mix: GeneratorMixConfig, plan: SamplePlan, source: str, rng: RngState
):
    if source == "random":
        return random_cnf(
            plan.n, plan.m, plan.dists.vars, plan.dists.lits_clause,
            plan.dists.polarities, rng,
        )
    if source == "unsat":
        cfg = _unsat_config(mix, plan, "shallow", rng)
        return generate_unsat(cfg, rng).cnf
    if source == "sat":
        return generate_sat(_sat_config(plan), rng).cnf
    raise ConfigError(f"unknown cover source {source!r}")


def execute_plan(
    mix: GeneratorMixConfig, plan: SamplePlan, rng: RngState
) -> LabeledProblem:
    """Run the generator (or transformation chain) a plan describes."""
    if plan.label is Label.SAT:
        meta = _SAT_OPTIONS[plan.option]
        if meta["recipe"] == "direct":
            return generate_sat(_sat_config(plan), rng)
        base = _source_formula(mix, plan, meta["source"], rng)
        polarity = sample_polarities(plan.dists.polarities, plan.n, rng)
        alpha: Assignment = tuple(bool(p == 1) for p in polarity)
        if meta["cover"] == "full":
            covered = sat_cover(base, alpha, plan.dists.polarity_bias, rng)
        else:
            covered = biased_sat_cover(base, alpha, meta["flip"], rng)
        return LabeledProblem(covered, Label.SAT, alpha)
    meta = _UNSAT_OPTIONS[plan.option]
    cfg = _unsat_config(mix, plan, meta["preset"], rng)
    if meta["tail"] == "sat":
        return unsat_with_sat_tail(cfg, _sat_config(plan), rng)
    return generate_unsat(cfg, rng)


def sample_problem(mix: GeneratorMixConfig, rng: RngState) -> LabeledProblem:
    plan = draw_plan(mix, rng)
    return execute_plan(mix, plan, rng)


# -- configuration file handling ----------------------------------------------


def _menu_to_json(menu: Menu) -> list[dict]:
    return [
        {"weight": w, "spec": spec_to_dict(s)}
        for s, w in zip(menu.specs, menu.weights)
    ]


def _menu_from_json(rows: list[dict]) -> Menu:
    specs = tuple(spec_from_dict(row["spec"]) for row in rows)
    weights = tuple(float(row["weight"]) for row in rows)
    return Menu(specs, weights)


def mix_to_dict(mix: GeneratorMixConfig) -> dict:
    return {
        "seed": mix.seed,
        "n_min": mix.n_min,
        "max_vars": mix.max_vars,
        "sat_fraction": mix.sat_fraction,
        "sat_options": [{"name": n, "weight": w} for n, w in mix.sat_options],
        "unsat_options": [{"name": n, "weight": w} for n, w in mix.unsat_options],
        "distribution_menus": {
            role: _menu_to_json(menu) for role, menu in mix.menus.items()
        },
        "base_distributions": {
            "vars": spec_to_dict(mix.base.vars),
            "lits_clause": spec_to_dict(mix.base.lits_clause),
            "polarities": spec_to_dict(mix.base.polarities),
            "polarity_bias": spec_to_dict(mix.base.polarity_bias),
            "bloom": spec_to_dict(mix.base.bloom),
        },
        "clause_ratio": {
            "c_phi": mix.ratio.c_phi,
            "power_law_3cnf": mix.ratio.power_law_3cnf,
            "default": mix.ratio.default,
            "std": mix.ratio.std,
            "clip": list(mix.ratio.clip),
        },
        "unsat_structure": {
            "init_size_max": mix.init_size_max,
            "shallow": {"depth": mix.shallow.depth, "down_clause_p": mix.shallow.down_clause_p},
            "deep": {"depth": mix.deep.depth, "down_clause_p": mix.deep.down_clause_p},
            "record_trace": mix.record_trace,
        },
    }


def mix_from_dict(data: dict) -> GeneratorMixConfig:
    try:
        base = data["base_distributions"]
        ratio = data["clause_ratio"]
        unsat = data["unsat_structure"]
        return GeneratorMixConfig(
            seed=int(data.get("seed", 0)),
            n_min=int(data.get("n_min", 4)),
            max_vars=int(data["max_vars"]),
            sat_fraction=float(data.get("sat_fraction", 0.5)),
            sat_options=tuple(
                (row["name"], float(row["weight"])) for row in data["sat_options"]
            ),
            unsat_options=tuple(
                (row["name"], float(row["weight"])) for row in data["unsat_options"]
            ),
            menus={
                role: _menu_from_json(rows)
                for role, rows in data["distribution_menus"].items()
            },
            base=RoleDists(
                vars=spec_from_dict(base["vars"]),
                lits_clause=spec_from_dict(base["lits_clause"]),
                polarities=spec_from_dict(base["polarities"]),
                polarity_bias=spec_from_dict(base["polarity_bias"]),
                bloom=spec_from_dict(base["bloom"]),
            ),
            ratio=RatioTable(
                c_phi=float(ratio["c_phi"]),
                power_law_3cnf=float(ratio["power_law_3cnf"]),
                default=float(ratio["default"]),
                std=float(ratio["std"]),
                clip=(float(ratio["clip"][0]), float(ratio["clip"][1])),
            ),
            init_size_max=int(unsat["init_size_max"]),
            shallow=BloomPreset(
                unsat["shallow"]["depth"], float(unsat["shallow"]["down_clause_p"])
            ),
            deep=BloomPreset(
                unsat["deep"]["depth"], float(unsat["deep"]["down_clause_p"])
            ),
            record_trace=bool(unsat.get("record_trace", True)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad mix config: {exc}") from exc


def load_mix(path: str | Path) -> GeneratorMixConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return mix_from_dict(data)


def default_mix(**overrides) -> GeneratorMixConfig:
    """The checked-in default mix (the full weighted option tables)."""
    text = resources.files("satforge").joinpath("data/default_mix.json").read_text()
    mix = mix_from_dict(json.loads(text))
    if overrides:
        mix = replace(mix, **overrides)
    return mix


def config_hash(mix: GeneratorMixConfig) -> str:
    canonical = json.dumps(mix_to_dict(mix), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
