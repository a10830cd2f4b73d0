"""Acceptance suites: each suite recomputes a closed form or a statistical law and
records every comparison with its measured value, tolerance and verdict.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from dunkl_intertwining.density import SeriesControls, TpdQuery, dyson_tpd_series, grabiner_tpd
from dunkl_intertwining.hermite import (
    freeze_eval,
    freeze_grad,
    freeze_hess,
    freeze_prediction,
    hermite_roots,
    hermite_value,
    root_identities,
)
from dunkl_intertwining.intertwine import intertwine_limit, intertwine_monomial
from dunkl_intertwining.jack import apply_operator, jack_expansion
from dunkl_intertwining.partition import Partition, enumerate_partitions
from dunkl_intertwining.simulation.dyson import simulate_dunkl, simulate_dyson
from dunkl_intertwining.simulation.ensemble import grabiner_marginal_cdf, ks_against, ks_distance
from dunkl_intertwining.simulation.experiments import freeze_experiment, mc_norm_check
from dunkl_intertwining.simulation.simulation_typing import SimConfig
from dunkl_intertwining.symfunc import eval_monomial, eval_schur

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def at_most(self, name: str, measured: float, tolerance: float) -> None:
        self.add(Check(name, float(measured), float(tolerance), bool(measured <= tolerance)))

    def below(self, name: str, measured: float, bound: float) -> None:
        self.add(Check(name, float(measured), float(bound), bool(measured < bound)))

    def add(self, check: Check) -> None:
        logger.info(
            "%s: measured %.6g, tolerance %.3g, %s",
            check.name,
            check.measured,
            check.tolerance,
            "pass" if check.passed else "FAIL",
        )
        self.checks.append(check)


@dataclass(frozen=True)
class VerifyOptions:
    n_vars: int | None = None
    k: float | None = None
    n_traj: int = 10_000
    seed: int = 7
    dt: float | None = None
    workers: int | None = None


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def suite_quadratic(options: VerifyOptions) -> SuiteReport:
    """V_k m_(2) and V_k m_(1,1) against their closed forms, exactly."""
    report = SuiteReport("quadratic")
    two, one_one = Partition.of(2), Partition.of(1, 1)
    for n_vars in range(2, 7):
        for k in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5)):
            denominator = k * n_vars + 1
            expected = {
                two: {two: (k + 1) / denominator, one_one: 2 * k / denominator},
                one_one: {two: k * (n_vars - 1) / (2 * denominator), one_one: (k * (n_vars - 1) + 1) / denominator},
            }
            for lam, coefficients in expected.items():
                result = intertwine_monomial(lam, k, n_vars)
                mismatch = sum(result.coefficient(mu) != c for mu, c in coefficients.items())
                report.at_most(f"V m{lam} N={n_vars} k={k}", mismatch, 0)
    return report


def suite_limit(options: VerifyOptions) -> SuiteReport:
    """Coefficients at k = 1e4 and 2e4 approach the k -> infinity form monotonically."""
    report = SuiteReport("limit")
    for n_vars in range(1, 5):
        for degree in range(1, 5):
            for lam in enumerate_partitions(degree, n_vars):
                limit = intertwine_limit(lam, n_vars).as_sympoly().coefficients
                near = intertwine_monomial(lam, Fraction(10**4), n_vars)
                far = intertwine_monomial(lam, Fraction(2 * 10**4), n_vars)
                gaps_near = [abs(near.coefficient(mu) - c) for mu, c in limit.items()]
                gaps_far = [abs(far.coefficient(mu) - c) for mu, c in limit.items()]
                report.at_most(f"limit gap {lam} N={n_vars}", float(max(gaps_near)), 1e-3)
                shrinking = all(b < a or a == b == 0 for a, b in zip(gaps_near, gaps_far))
                report.at_most(f"limit gap shrinks {lam} N={n_vars}", 0 if shrinking else 1, 0)
    return report


# Points in the radius-2 ball at t = 1/2 reach degree 40 before two consecutive layers
# fall under 1e-12 of the sum.
BETA2_CONTROLS = SeriesControls(n_max=60, tol=1e-11)


def _ball_point(rng: np.random.Generator, n_vars: int, radius: float) -> np.ndarray:
    g = rng.standard_normal(n_vars)
    return np.sort(g / np.linalg.norm(g) * radius * rng.random() ** (1 / n_vars))


def suite_beta2(options: VerifyOptions) -> SuiteReport:
    """The 0F0 series density at beta = 2 against the determinantal formula."""
    report = SuiteReport("beta2")
    rng = _rng(options.seed)
    worst = 0.0
    for n in range(50):
        n_vars = 2 + n % 2
        t = (0.5, 1.0, 2.0)[n % 3]
        q = TpdQuery(t, _ball_point(rng, n_vars, 2.0), _ball_point(rng, n_vars, 2.0), 2.0, BETA2_CONTROLS)
        exact = grabiner_tpd(q)
        worst = max(worst, abs(dyson_tpd_series(q).value - exact) / abs(exact))
    report.at_most("max relative error over 50 points", worst, 1e-8)
    return report


def suite_thm1(options: VerifyOptions) -> SuiteReport:
    """Symmetric Dunkl process versus Dyson's model at beta = 2k, and Dyson versus the exact beta = 2 law."""
    report = SuiteReport("thm1")
    n_vars = options.n_vars or 3
    k = options.k or 1.0
    config = SimConfig(n_vars, k, options.dt or 1e-3, 1.0, options.n_traj, options.seed, n_grid=11)
    x0 = np.linspace(-1.0, 1.0, n_vars)
    dyson = simulate_dyson(config, x0, options.workers)
    dunkl = simulate_dunkl(replace(config, seed=options.seed + 1, symmetric_start=True), x0, options.workers)
    for i, distance in enumerate(ks_distance(dunkl, dyson)):
        report.at_most(f"KS dunkl vs dyson, sorted coordinate {i}", distance, 0.05)
    if k == 1.0 and n_vars <= 3:
        final = dyson.final()
        for i in range(n_vars):
            distance = ks_against(final[:, i], lambda s, i=i: grabiner_marginal_cdf(x0, 1.0, i, s))
            report.at_most(f"KS dyson vs exact marginal, sorted coordinate {i}", distance, 0.05)
    return report


def suite_hermite(options: VerifyOptions) -> SuiteReport:
    """Root identities and the extremum structure of F_N."""
    report = SuiteReport("hermite")
    rng = _rng(options.seed)
    for n_vars in range(1, (options.n_vars or 20) + 1):
        identities = root_identities(n_vars)
        z = hermite_roots(n_vars).roots
        value, slope = hermite_value(n_vars, z)
        report.at_most(f"N={n_vars} root sum", abs(identities.root_sum), 1e-12)
        report.at_most(
            f"N={n_vars} root square sum", abs(identities.sum_sq - identities.sum_sq_reference), 1e-10 * n_vars**2
        )
        report.at_most(
            f"N={n_vars} discriminant",
            abs(identities.log_discriminant - identities.log_discriminant_reference),
            1e-9,
        )
        report.at_most(f"N={n_vars} H_N residual", float(np.max(np.abs(value / slope))), 1e-9)
        report.at_most(f"N={n_vars} fixed point residual", identities.fixed_point_residual, 1e-9)
        for t in (0.5, 1.0, 3.0):
            v = freeze_prediction(n_vars, t)
            report.at_most(f"N={n_vars} t={t} F_N at roots", abs(freeze_eval(v, t)), 1e-9)
            report.at_most(f"N={n_vars} t={t} gradient at roots", float(np.linalg.norm(freeze_grad(v, t))), 1e-9)
            hessian = freeze_hess(v, t)
            directions = rng.standard_normal((100, n_vars))
            forms = np.einsum("ni,ij,nj->n", directions, hessian, directions)
            report.below(f"N={n_vars} t={t} max quadratic form", float(forms.max()), 0.0)
    return report


def suite_freeze(options: VerifyOptions) -> SuiteReport:
    """Rescaled Dyson configurations at large k against sqrt(2t) z_N."""
    report = SuiteReport("freeze")
    n_values = (options.n_vars,) if options.n_vars else (3, 4)
    for n_vars in n_values:
        config = SimConfig(n_vars, options.k or 1e4, options.dt or 1e-4, 1.0, 100, options.seed, n_grid=2)
        freeze = freeze_experiment(config, np.linspace(-1.0, 1.0, n_vars), workers=options.workers)
        base = freeze.runs[0]
        report.at_most(f"N={n_vars} mean max deviation", base.max_deviation, 0.05)
        report.below(f"N={n_vars} rms at 4k relative to k", freeze.runs[1].rms_deviation, base.rms_deviation)
        report.at_most(f"N={n_vars} centered gap between starts", freeze.x0_gap_centered, base.max_deviation)
    return report


def suite_jack(options: VerifyOptions) -> SuiteReport:
    """Exact eigenrelation, and the alpha = 1 rows against bialternant Schur values."""
    report = SuiteReport("jack")
    for n_vars in range(1, 5):
        for degree in range(0, 6):
            for tau in enumerate_partitions(degree, n_vars):
                for alpha in (Fraction(1, 2), Fraction(1), Fraction(2)):
                    expansion = jack_expansion(tau, alpha, n_vars)
                    poly = expansion.polynomial()
                    residual = apply_operator(poly, 1 / alpha) - poly * expansion.eigenvalue
                    report.at_most(f"eigenrelation {tau} N={n_vars} alpha={alpha}", len(residual.terms), 0)

    rng = _rng(options.seed)
    for n_vars in range(1, 5):
        points = rng.uniform(0.5, 1.5, size=(3, n_vars))
        for degree in range(0, 5):
            for tau in enumerate_partitions(degree, n_vars):
                row = jack_expansion(tau, Fraction(1), n_vars).u
                worst = max(
                    abs(sum(float(u) * eval_monomial(lam, x) for lam, u in row.items()) - eval_schur(tau, x))
                    / abs(eval_schur(tau, x))
                    for x in points
                )
                report.at_most(f"Schur row {tau} N={n_vars}", worst, 1e-9)
    return report


def suite_selberg(options: VerifyOptions) -> SuiteReport:
    """Monte Carlo Gaussian integral of |h_N|^(2k) against the closed-form c_k."""
    report = SuiteReport("selberg")
    for n_vars, k in ((2, 1.0), (3, 0.5)):
        check = mc_norm_check(n_vars, k, 10**6, options.seed)
        report.at_most(f"N={n_vars} k={k} deviation in standard errors", check.sigmas, 3.0)
    return report


def suite_norm(options: VerifyOptions) -> SuiteReport:
    """Integral of the N = 2 series density over the ordered chamber, by tensor Gauss-Legendre."""
    report = SuiteReport("norm")
    x = np.array([-0.5, 0.5])
    controls = SeriesControls(n_max=60, tol=1e-10, strict=False)
    center_nodes, center_weights = np.polynomial.legendre.leggauss(48)
    gap_nodes, gap_weights = np.polynomial.legendre.leggauss(48)
    centers, center_weights = 6.0 * center_nodes, 6.0 * center_weights
    gaps, gap_weights = 5.0 * (gap_nodes + 1), 5.0 * gap_weights
    for beta in (1.0, 2.0, 4.0):
        total = 0.0
        for c, wc in zip(centers, center_weights):
            for g, wg in zip(gaps, gap_weights):
                y = np.array([c - g / 2, c + g / 2])
                total += wc * wg * dyson_tpd_series(TpdQuery(1.0, x, y, beta, controls)).value
        report.at_most(f"beta={beta} total mass error", abs(total - 1.0), 1e-4)
    return report


SUITES: dict[str, Callable[[VerifyOptions], SuiteReport]] = {
    "quadratic": suite_quadratic,
    "limit": suite_limit,
    "beta2": suite_beta2,
    "thm1": suite_thm1,
    "hermite": suite_hermite,
    "freeze": suite_freeze,
    "jack": suite_jack,
    "selberg": suite_selberg,
    "norm": suite_norm,
}


def run_suite(name: str, options: VerifyOptions) -> SuiteReport:
    return SUITES[name](options)
