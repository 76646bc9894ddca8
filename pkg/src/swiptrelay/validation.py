"""Cross-validation harness: closed forms vs quadrature vs Monte Carlo.

Runs a matrix of (m, theta) cells and checks, per cell:

* sup-norm of |closed CDF - quadrature CDF| on a log grid of thresholds;
* the empirical CDF of sampled end-to-end SNRs against the closed CDF
  inside the 99% Dvoretzky-Kiefer-Wolfowitz band;
* hop capacities, quadrature vs sample means, within 3 standard errors;
* outage, closed composition vs a seeded indicator simulation under the
  same joint law, within 3 binomial standard errors;
* the convention adjudication of the two ambiguous closed forms.

``inject_coefficient_error`` perturbs the closed CDF by a relative 1e-3 and
must make the harness fail; it exists as a negative control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .copula import fgm_copula, sample_pair
from .fading import NakagamiPower, power_quantile
from .montecarlo import McConfig, McEstimate, batch_stream, simulate_outage_survival_law
from .product_dist import closed_form_model, product_cdf_general, snr_cdf_closed
from .swipt_metrics import (
    OutageQuery,
    SwiptSystem,
    adjudicate_closed_forms,
    derive_snr_scales,
    ergodic_capacity_rd,
    ergodic_capacity_sr,
    outage_probability,
    outage_probability_quadrature,
)
from .sweepcfg import fmt

SUPNORM_TOL = 1e-6
QUAD_OUTAGE_TOL = 1e-9
DKW_CONFIDENCE = 0.99

_BASE_SYSTEM = SwiptSystem(
    source_power=10.0,
    noise_power=1e-2,
    ps_factor=0.3,
    eh_efficiency=0.7,
    dist_sr=2.0,
    dist_rd=2.0,
    pathloss_exp=2.5,
)


@dataclass(frozen=True)
class CheckResult:
    cell: str
    name: str
    value: float
    bound: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.cell} {self.name}: {self.value:.6g} (bound {self.bound:.6g})"


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, cell: str, name: str, value: float, bound: float, ok=None) -> None:
        passed = (abs(value) <= bound) if ok is None else bool(ok)
        self.checks.append(CheckResult(cell, name, float(value), float(bound), passed))

    def csv_rows(self) -> list[list[str]]:
        rows = []
        for c in self.checks:
            rows.append([
                "validation", "0", "", "", "check", f"{c.cell}/{c.name}",
                fmt(c.value), "", "", fmt(c.bound), "", "",
            ])
        return rows


def _threshold_grid(gamma_hat_d: float, count: int) -> np.ndarray:
    return np.geomspace(1e-3 * gamma_hat_d, 1e2 * gamma_hat_d, count)


def dkw_epsilon(n: int, confidence: float = DKW_CONFIDENCE) -> float:
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n))


def _sample_cell(sys: SwiptSystem, n: int, seed: int):
    """One seeded joint draw reused by every stochastic check of a cell."""
    rng = batch_stream(seed, 0)
    cop = fgm_copula(sys.theta)
    u1, u2 = sample_pair(cop, rng, size=n)
    marg = NakagamiPower(float(sys.fading_m), 1.0)
    return power_quantile(marg, np.asarray(u1)), power_quantile(marg, np.asarray(u2))


def run_validation(
    ms=(1, 2, 3),
    thetas=(-1.0, -0.5, 0.0, 0.5, 1.0),
    samples: int = 1_000_000,
    seed: int = 12345,
    grid_points: int = 60,
    threshold: float = 1.0,
    inject_coefficient_error: bool = False,
) -> ValidationReport:
    report = ValidationReport()
    err_factor = 1.0 + 1e-3 if inject_coefficient_error else 1.0

    for m in ms:
        for theta in thetas:
            cell = f"m={m},theta={fmt(theta)}"
            sys = SwiptSystem(
                source_power=_BASE_SYSTEM.source_power,
                noise_power=_BASE_SYSTEM.noise_power,
                ps_factor=_BASE_SYSTEM.ps_factor,
                eh_efficiency=_BASE_SYSTEM.eh_efficiency,
                dist_sr=_BASE_SYSTEM.dist_sr,
                dist_rd=_BASE_SYSTEM.dist_rd,
                pathloss_exp=_BASE_SYSTEM.pathloss_exp,
                fading_m=m,
                theta=theta,
            )
            scales = derive_snr_scales(sys)
            model = closed_form_model(scales.gamma_hat_d, m, fgm_copula(theta))
            grid = _threshold_grid(scales.gamma_hat_d, grid_points)

            closed = np.array([err_factor * snr_cdf_closed(model, y) for y in grid])
            quad_cdf = np.array([product_cdf_general(model, y) for y in grid])
            report.add(cell, "cdf_supnorm_closed_vs_quadrature",
                       float(np.max(np.abs(closed - quad_cdf))), SUPNORM_TOL)

            g1, g2 = _sample_cell(sys, samples, seed)
            snr = scales.gamma_hat_d * g1 * g2
            snr_sorted = np.sort(snr)
            emp = np.searchsorted(snr_sorted, grid, side="right") / samples
            report.add(cell, "cdf_dkw_gap_minus_band",
                       float(np.max(np.abs(emp - closed))) - dkw_epsilon(samples),
                       0.0, ok=float(np.max(np.abs(emp - closed))) <= dkw_epsilon(samples))

            # Capacities: quadrature vs the sample means at 3 standard errors.
            gamma_r = scales.gamma_hat_r * g1
            for name, sample_vals, analytic in (
                ("capacity_sr", 0.5 * np.log2(1.0 + gamma_r),
                 ergodic_capacity_sr(scales.gamma_hat_r, m)),
                ("capacity_rd", 0.5 * np.log2(1.0 + snr),
                 ergodic_capacity_rd(scales.gamma_hat_d, m, theta)),
            ):
                mean = float(sample_vals.mean())
                stderr = float(sample_vals.std(ddof=1)) / math.sqrt(samples)
                report.add(cell, f"{name}_quadrature_vs_mc_stderr_units",
                           (analytic - mean) / stderr, 3.0)

            q = OutageQuery(threshold)
            p_closed = err_factor * outage_probability(sys, q)
            p_quad = outage_probability_quadrature(sys, q)
            report.add(cell, "outage_closed_vs_quadrature",
                       p_closed - p_quad, QUAD_OUTAGE_TOL)
            cfg = McConfig(samples=samples, seed=seed, batch_size=min(samples, 1_000_000))
            mc = simulate_outage_survival_law(
                sys, q, cfg, product_cdf_general(model, q.threshold)
            )
            stderr = max(mc.stderr, 1e-12)
            report.add(cell, "outage_closed_vs_mc_stderr_units",
                       (p_closed - mc.mean) / stderr, 3.0)

    # Convention adjudication of the two ambiguous closed forms, reported
    # once at the baseline scales.
    scales = derive_snr_scales(_BASE_SYSTEM)
    for m in ms:
        adj = adjudicate_closed_forms(scales.gamma_hat_r, scales.gamma_hat_d, m, 0.5)
        cell = f"adjudication,m={m}"
        report.add(cell, "sr_upper_param_is_1_minus_m", adj["sr_match_abs_error"],
                   1e-9, ok=adj["sr_matching_variant"] == "1-m" and adj["sr_match_abs_error"] < 1e-9)
        report.add(cell, "rd_prefactor_has_no_pi", adj["rd_match_abs_error"],
                   1e-9, ok=adj["rd_matching_variant"] == "prefactor-times-bracket-no-pi"
                   and adj["rd_match_abs_error"] < 1e-9)
    return report
