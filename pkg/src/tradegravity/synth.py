"""Synthetic worlds drawn from the perfect-specialization tradability model.

Each country produces one tradable good (output ``lambda * Y``) and a
non-traded good (output ``(1 - lambda) * Y``). With identical homothetic
preferences, exports from a to b are ``lambda_a * Y_a * Y_b / Y_w``; the
generator multiplies that by a directed-pair effect ``exp(u_ab)`` and a
lognormal disturbance ``exp(eps_abt)``, so the log-linear regression
``ln X = b0 + b1 ln lambda_a + b2 ln(Y_a Y_b / Y_w)`` holds with
``(b0, b1, b2) = (0, 1, 1)`` plus a pair effect.

Random numbers come from NumPy's PCG64 bit generator seeded through
``SeedSequence([seed, stream])``; replication ``r`` uses ``stream = r`` so
replications are independent and can run in any order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .domain import CountryYearGDP, TradeFlow, build_panel
from .econometrics import (
    f_test_panel_effects,
    fixed_effects,
    hausman,
    pooled,
    random_effects,
    t_test_equals,
)
from .errors import GravityError, InvalidConfig


@dataclass(frozen=True)
class GenConfig:
    n_countries: int = 40
    n_years: int = 10
    first_year: int = 2000
    lambda_range: tuple[float, float] = (0.04, 0.14)
    gdp_log_range: tuple[float, float] = (25.0, 30.0)
    sigma_noise: float = 0.5
    pair_effect_sigma: float = 1.0
    correlate_effects_with_regressors: bool = False
    effect_correlation: float = 1.0
    lambda_varies_by_year: bool = True
    lambda_year_sigma: float = 0.1
    gdp_year_sigma: float = 0.1
    seed: int = 0

    def validate(self) -> "GenConfig":
        lo, hi = self.lambda_range
        if not (0 < lo <= hi <= 1):
            raise InvalidConfig(f"lambda_range must be a sub-interval of (0, 1], got {self.lambda_range}")
        glo, ghi = self.gdp_log_range
        if not (math.isfinite(glo) and math.isfinite(ghi) and glo <= ghi):
            raise InvalidConfig(f"gdp_log_range must be a finite nonempty interval, got {self.gdp_log_range}")
        if self.n_countries < 2 or self.n_years < 1:
            raise InvalidConfig("need at least 2 countries and 1 year")
        for name in ("sigma_noise", "pair_effect_sigma", "lambda_year_sigma", "gdp_year_sigma"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise InvalidConfig(f"{name} must be a nonnegative number, got {v}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise InvalidConfig(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        return self


@dataclass(frozen=True, eq=False)
class SyntheticWorld:
    """Countries x years arrays; ``pair_effects[a, b]`` is the log effect on a's exports to b."""

    countries: tuple[str, ...]
    years: tuple[int, ...]
    tradable_output: np.ndarray
    nontradable_output: np.ndarray
    pair_effects: np.ndarray
    noise_sigma: float
    seed: int
    stream: int | None = None

    @property
    def gdp(self) -> np.ndarray:
        return self.tradable_output + self.nontradable_output

    @property
    def lambdas(self) -> np.ndarray:
        return self.tradable_output / self.gdp

    @property
    def world_gdp(self) -> np.ndarray:
        return self.gdp.sum(axis=0)

    def _entropy(self) -> list[int]:
        return [self.seed] if self.stream is None else [self.seed, self.stream]

    def gdp_records(self) -> list[CountryYearGDP]:
        Y = self.gdp
        return [
            CountryYearGDP(c, t, float(Y[i, j]))
            for i, c in enumerate(self.countries)
            for j, t in enumerate(self.years)
        ]

    def lambda_index(self) -> dict[tuple[str, int], float]:
        """Tradability on the 0-100 index scale, keyed by (country, year)."""
        L = self.lambdas
        return {
            (c, t): float(100.0 * L[i, j])
            for i, c in enumerate(self.countries)
            for j, t in enumerate(self.years)
        }


def _rng(entropy: list[int], key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy, spawn_key=(key,))))


def generate_world(config: GenConfig, stream: int | None = None) -> SyntheticWorld:
    config.validate()
    entropy = [config.seed] if stream is None else [config.seed, stream]
    rng = _rng(entropy, 0)
    nc, ny = config.n_countries, config.n_years

    base_ln_gdp = rng.uniform(*config.gdp_log_range, size=nc)
    ln_gdp = base_ln_gdp[:, None] + config.gdp_year_sigma * rng.standard_normal((nc, ny))
    lo, hi = config.lambda_range
    base_lambda = rng.uniform(lo, hi, size=nc)
    year_shock = rng.standard_normal((nc, ny))
    if config.lambda_varies_by_year:
        lam = np.clip(base_lambda[:, None] * np.exp(config.lambda_year_sigma * year_shock), lo, hi)
    else:
        lam = np.repeat(base_lambda[:, None], ny, axis=1)

    Y = np.exp(ln_gdp)
    tradable = lam * Y
    nontradable = Y - tradable

    z = rng.standard_normal((nc, nc))
    effects = config.pair_effect_sigma * z
    if config.correlate_effects_with_regressors:
        ln_w = np.log(Y.sum(axis=0))
        mean_mass = (ln_gdp.mean(axis=1)[:, None] + ln_gdp.mean(axis=1)[None, :]) - ln_w.mean()
        off = ~np.eye(nc, dtype=bool)
        effects = effects + config.effect_correlation * (mean_mass - mean_mass[off].mean())
    np.fill_diagonal(effects, 0.0)

    width = len(str(nc - 1))
    countries = tuple(f"C{i:0{width}d}" for i in range(nc))
    years = tuple(range(config.first_year, config.first_year + ny))
    return SyntheticWorld(countries, years, tradable, nontradable, effects, config.sigma_noise, config.seed, stream)


def generate_flows(world: SyntheticWorld) -> list[TradeFlow]:
    """One flow per ordered pair per year, ordered by (year, exporter, importer)."""
    rng = _rng(world._entropy(), 1)
    nc, ny = len(world.countries), len(world.years)
    Y = world.gdp
    Yw = world.world_gdp
    lam = world.lambdas
    eps = world.noise_sigma * rng.standard_normal((ny, nc, nc)) if world.noise_sigma > 0 else None
    flows = []
    for j, year in enumerate(world.years):
        mass = Y[:, j, None] * Y[None, :, j] / Yw[j]
        X = lam[:, j, None] * mass
        shock = world.pair_effects if eps is None else world.pair_effects + eps[j]
        if np.any(shock):
            X = X * np.exp(shock)
        for a in range(nc):
            ca = world.countries[a]
            row = X[a]
            flows.extend(
                TradeFlow(ca, world.countries[b], year, float(row[b])) for b in range(nc) if b != a
            )
    return flows


@dataclass
class RecoverySummary:
    n_replications: int
    n_ok: int
    mean_fixed_effects: np.ndarray
    mean_random_effects: np.ndarray
    coverage_fixed_effects: dict[str, float]
    coverage_random_effects: dict[str, float]
    hausman_rejection_rate: float
    f_panel_rejection_rate: float
    level: float
    fe_coefficients: np.ndarray
    re_coefficients: np.ndarray
    hausman_p: np.ndarray
    f_panel_p: np.ndarray
    failures: list[tuple[int, str]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "n_replications": self.n_replications,
            "n_ok": self.n_ok,
            "level": self.level,
            "mean_fixed_effects": self.mean_fixed_effects.tolist(),
            "mean_random_effects": self.mean_random_effects.tolist(),
            "coverage_fixed_effects": self.coverage_fixed_effects,
            "coverage_random_effects": self.coverage_random_effects,
            "hausman_rejection_rate": self.hausman_rejection_rate,
            "f_panel_rejection_rate": self.f_panel_rejection_rate,
            "failures": [{"replication": r, "error": e} for r, e in self.failures],
        }


def simulate_panel(config: GenConfig, stream: int | None = None):
    world = generate_world(config, stream)
    return build_panel(generate_flows(world), world.gdp_records(), world.lambda_index())


def recovery_experiment(config: GenConfig, n_replications: int, level: float = 0.05) -> RecoverySummary:
    """Repeat generate -> assemble -> estimate and summarize how well (0, 1, 1) is recovered.

    Coverage counts replications whose two-sided t test of a slope against 1
    does not reject at ``level``, i.e. the ``1 - level`` interval covers 1.
    Estimator failures are recorded per replication and do not abort the run.
    """
    if n_replications < 1:
        raise InvalidConfig("n_replications must be at least 1")
    config.validate()
    fe_b, re_b, h_p, f_p = [], [], [], []
    cover_fe, cover_re = [], []
    failures = []
    for r in range(n_replications):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                panel = simulate_panel(config, r)
                po = pooled(panel)
                fe = fixed_effects(panel)
                re = random_effects(panel)
                h = hausman(fe, re)
                f = f_test_panel_effects(po, fe)
        except GravityError as exc:
            failures.append((r, f"{type(exc).__name__}: {exc}"))
            continue
        fe_b.append(fe.coefficients)
        re_b.append(re.coefficients)
        h_p.append(h.p_value)
        f_p.append(f.p_value)
        cover_fe.append([t_test_equals(fe, i, 1.0).p_value >= level for i in (1, 2)])
        cover_re.append([t_test_equals(re, i, 1.0).p_value >= level for i in (1, 2)])

    n_ok = len(fe_b)
    fe_arr = np.array(fe_b).reshape(n_ok, 3)
    re_arr = np.array(re_b).reshape(n_ok, 3)
    names = ("ln_lambda_exporter", "ln_mass")

    def rate(rows):
        a = np.array(rows, dtype=float).reshape(n_ok, 2)
        return {n: float(a[:, i].mean()) if n_ok else float("nan") for i, n in enumerate(names)}

    h_arr, f_arr = np.array(h_p), np.array(f_p)
    return RecoverySummary(
        n_replications=n_replications,
        n_ok=n_ok,
        mean_fixed_effects=fe_arr.mean(axis=0) if n_ok else np.full(3, np.nan),
        mean_random_effects=re_arr.mean(axis=0) if n_ok else np.full(3, np.nan),
        coverage_fixed_effects=rate(cover_fe),
        coverage_random_effects=rate(cover_re),
        hausman_rejection_rate=float((h_arr < level).mean()) if n_ok else float("nan"),
        f_panel_rejection_rate=float((f_arr < level).mean()) if n_ok else float("nan"),
        level=level,
        fe_coefficients=fe_arr,
        re_coefficients=re_arr,
        hausman_p=h_arr,
        f_panel_p=f_arr,
        failures=failures,
    )


def noiseless(config: GenConfig) -> GenConfig:
    """Same world layout with the disturbance and pair effects switched off."""
    return replace(config, sigma_noise=0.0, pair_effect_sigma=0.0, correlate_effects_with_regressors=False)
