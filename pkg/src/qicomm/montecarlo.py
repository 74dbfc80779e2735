"""Seeded Monte-Carlo simulation of the two implementable receivers.

Each trial's randomness is a pure function of (seed, trial index): trial i
draws from a Philox generator seeded with child i of SeedSequence(seed), so
results are reproducible and independent of any parallel execution order.

Both receivers are simulated through exact sufficient statistics rather than
by materializing all M per-mode samples (see docs/receivers.md for the
derivations):

homodyne -- the likelihood-ratio test for the sign-mirrored pair reduces to
    the sign of T = sum_m x_m y_m.  Writing the pair as x = sx*u,
    y = sy*(rho*u + sqrt(1-rho^2)*v) with u, v standard normal, T has the
    exact representation sx*sy*(rho*Q + sqrt((1-rho^2)*Q)*Z) with
    Q ~ chi^2_M and Z standard normal, so sign(T) = sign(rho*sqrt(Q)
    + sqrt(1-rho^2)*Z).  Two scalar draws replace 2M draws, identically
    distributed.

amplifier -- photon counts are iid Bose-Einstein (geometric) with mean N_k,
    and the likelihood-ratio test on the total count K = sum_m n_m is a
    threshold test at n* = M ln((N0+1)/(N1+1)) / ln(N0(N1+1)/(N1(N0+1))),
    ties declared bit 0.  K is exactly negative binomial NB(M, 1/(N_k+1)),
    drawn in one shot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import homodyne_cov, opa_spec
from .params import InvalidParams, ProtocolParams

Z95 = 1.959963984540054


@dataclass(frozen=True)
class McConfig:
    """Parameters, trial count and seed for one simulation run."""

    params: ProtocolParams
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 100:
            raise InvalidParams(f"trials must be >= 100, got {self.trials}")
        if self.seed < 0:
            raise InvalidParams(f"seed must be a nonnegative integer, got {self.seed}")


@dataclass(frozen=True)
class McResult:
    """Error count, estimate and Wilson 95% interval for one run."""

    errors: int
    trials: int
    p_hat: float
    ci95: tuple[float, float]


def wilson_interval(errors: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion; always contains p_hat."""
    p = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    # rounding can push an endpoint past p by ~1e-18 at the extremes
    return (max(0.0, min(center - half, p)), min(1.0, max(center + half, p)))


def _trial_generators(seed: int, trials: int):
    for child in np.random.SeedSequence(seed).spawn(trials):
        yield np.random.Generator(np.random.Philox(child))


def _result(errors: int, trials: int) -> McResult:
    return McResult(
        errors=errors,
        trials=trials,
        p_hat=errors / trials,
        ci95=wilson_interval(errors, trials),
    )


def simulate_homodyne(cfg: McConfig) -> McResult:
    """Bit error rate of the sign-of-cross-correlation homodyne receiver."""
    p = cfg.params
    cov = homodyne_cov(p, 0)
    rho = float(cov[0, 1] / math.sqrt(cov[0, 0] * cov[1, 1]))
    ortho = math.sqrt(1.0 - rho * rho)
    m = p.m
    errors = 0
    for rng in _trial_generators(cfg.seed, cfg.trials):
        k = int(rng.integers(0, 2))
        q = rng.chisquare(m)
        z = rng.standard_normal()
        signed_rho = rho if k == 0 else -rho
        stat = signed_rho * math.sqrt(q) + ortho * z
        k_hat = 0 if stat >= 0.0 else 1
        errors += k_hat != k
    return _result(errors, cfg.trials)


def simulate_opa(cfg: McConfig) -> McResult:
    """Bit error rate of the amplifier receiver's total-photon-count threshold test."""
    p = cfg.params
    spec = opa_spec(p)
    n0, n1 = spec.mean_n0, spec.mean_n1
    m = p.m
    degenerate = (n0 - n1) <= 1e-15 * max(n0, 1.0)
    if not degenerate:
        nstar = (
            m
            * math.log((n0 + 1.0) / (n1 + 1.0))
            / math.log(n0 * (n1 + 1.0) / (n1 * (n0 + 1.0)))
        )
    errors = 0
    for rng in _trial_generators(cfg.seed, cfg.trials):
        k = int(rng.integers(0, 2))
        if degenerate:
            k_hat = 0  # ties go to bit 0
        else:
            mean = n0 if k == 0 else n1
            total = int(rng.negative_binomial(m, 1.0 / (mean + 1.0)))
            k_hat = 0 if total >= nstar else 1
        errors += k_hat != k
    return _result(errors, cfg.trials)
