"""Error exponents and error-probability bounds for the binary discrimination problems.

For M independent copies of a mode-pair state, the minimum error probability of
distinguishing the two bit hypotheses obeys

    (1 - sqrt(1 - exp(-2*M*E(1/2)))) / 2  <=  Pr(e)  <=  exp(-M*max_s E(s)) / 2

with E(s) = -ln tr(rho0^s rho1^(1-s)).  For the sign-flip (BPSK) pairs treated
here the optimum is at s = 1/2, so the upper bound is the Bhattacharyya
evaluation of the Chernoff bound.

The trace overlap of two zero-mean Gaussian states is evaluated from their
Williamson decompositions.  Rescaling covariances to vacuum-1 units (x4), with
G_p(x) = 2^p / ((x+1)^p - (x-1)^p) and L_p(x) = ((x+1)^p + (x-1)^p) /
((x+1)^p - (x-1)^p),

    tr(rho0^s rho1^(1-s)) = 2^N * prod_k G_s(a_k) G_(1-s)(b_k)
                            / sqrt(det(V0(s) + V1(1-s)))

where a_k, b_k are the symplectic spectra and V_i(p) rebuilds each covariance
with L_p applied to its spectrum.  All evaluation is done in the log domain so
exponents near 1e-8 and copy numbers up to 1e7 survive without underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    OpaSpec,
    alice_conditional_cov,
    eve_conditional_cov,
    homodyne_cov,
    opa_spec,
)
from .params import InvalidParams, ProtocolParams
from .symplectic import WilliamsonDecomp, williamson

LN2 = math.log(2.0)


class NumericalInstability(RuntimeError):
    """An intermediate quantity left its valid range beyond tolerance."""


@dataclass(frozen=True)
class OverlapResult:
    """Overlap parameter s and the trace overlap Q_s = tr(rho0^s rho1^(1-s))."""

    s: float
    q: float


@dataclass(frozen=True)
class BoundSet:
    """Per-mode-pair exponent with the induced M-copy error-probability bounds."""

    exponent: float
    upper: float
    lower: float
    m: int

    @classmethod
    def from_exponent(cls, exponent: float, m: int) -> "BoundSet":
        return cls(
            exponent=exponent,
            upper=chernoff_upper(exponent, m),
            lower=error_lower(exponent, m),
            m=m,
        )


@dataclass(frozen=True)
class AsymptoticExponents:
    """Closed-form low-brightness/high-noise exponents and their validity flag."""

    alice: float
    eve: float
    homodyne: float
    opa: float
    valid: bool


def _log_gp(p: float, x: float) -> float:
    denom = (x + 1.0) ** p - (x - 1.0) ** p
    if denom <= 0.0:
        raise NumericalInstability(f"G_{p}({x}) denominator is {denom}")
    return p * LN2 - math.log(denom)


def _lambda_p(p: float, x: float) -> float:
    up = (x + 1.0) ** p
    dn = (x - 1.0) ** p
    return (up + dn) / (up - dn)


def _rebuilt(dec: WilliamsonDecomp, p: float, spectrum: np.ndarray) -> np.ndarray:
    lam = np.array([_lambda_p(p, x) for x in spectrum])
    return (dec.symplectic * np.repeat(lam, 2)) @ dec.symplectic.T


def _log_overlap(cov0, cov1, s: float) -> float:
    """ln tr(rho0^s rho1^(1-s)) for zero-mean Gaussian states."""
    if np.array_equal(cov0, cov1):
        williamson(cov0)  # still validate the input
        return 0.0
    dec0 = williamson(cov0)
    dec1 = williamson(cov1)
    # Vacuum-1 units; clamp at 1 to absorb rounding on the pure-state boundary.
    spec0 = np.maximum(4.0 * dec0.nu, 1.0)
    spec1 = np.maximum(4.0 * dec1.nu, 1.0)
    log_g = sum(_log_gp(s, x) for x in spec0) + sum(_log_gp(1.0 - s, x) for x in spec1)
    vsum = _rebuilt(dec0, s, spec0) + _rebuilt(dec1, 1.0 - s, spec1)
    sign, logdet = np.linalg.slogdet(vsum)
    if sign <= 0.0:
        raise NumericalInstability("det(V0(s) + V1(1-s)) is not positive")
    return 2.0 * LN2 + log_g - 0.5 * logdet


def gaussian_s_overlap(cov0, cov1, s: float) -> OverlapResult:
    """Trace overlap tr(rho0^s rho1^(1-s)) of two zero-mean Gaussian states."""
    if not 0.0 < s < 1.0:
        raise InvalidParams(f"s must be in (0, 1), got {s}")
    return OverlapResult(s=s, q=math.exp(_log_overlap(cov0, cov1, s)))


def qcb_exponent(cov0, cov1, check_optimum: bool = False) -> float:
    """Chernoff-bound exponent -ln Q_(1/2) for a sign-mirrored Gaussian pair.

    With ``check_optimum`` the exponent is also evaluated on an s grid
    {0.05, ..., 0.95} and the maximum is required to sit at s = 1/2 within the
    grid step, diagnosing non-mirrored inputs.
    """
    exponent = -_log_overlap(cov0, cov1, 0.5)
    if exponent < 0.0:
        if exponent < -1e-9:
            raise NumericalInstability(f"negative exponent {exponent:.3e}")
        exponent = 0.0
    if check_optimum:
        grid = np.linspace(0.05, 0.95, 19)
        values = [-_log_overlap(cov0, cov1, s) for s in grid]
        best = grid[int(np.argmax(values))]
        if abs(best - 0.5) > 0.05 + 1e-12:
            raise NumericalInstability(f"Chernoff optimum at s={best:.2f}, expected 1/2")
    return exponent


def chernoff_upper(exponent: float, m: int) -> float:
    """Upper bound exp(-M*exponent)/2 on the M-copy error probability."""
    _check_exponent_m(exponent, m)
    return 0.5 * math.exp(-m * exponent)


def error_lower(exponent: float, m: int) -> float:
    """Universal lower bound (1 - sqrt(1 - exp(-2*M*E)))/2; not exponentially tight."""
    _check_exponent_m(exponent, m)
    q = math.exp(-2.0 * m * exponent)
    return q / (2.0 * (1.0 + math.sqrt(1.0 - q)))


def _check_exponent_m(exponent: float, m: int):
    if exponent < 0.0:
        raise InvalidParams(f"exponent must be >= 0, got {exponent}")
    if m < 1:
        raise InvalidParams(f"m must be >= 1, got {m}")


def homodyne_exponent(cov0, cov1) -> float:
    """Bhattacharyya exponent for two zero-mean bivariate Gaussian densities.

    -ln int sqrt(p0 p1) = (1/2) ln( det((S0+S1)/2) / sqrt(det S0 det S1) ).
    For the sign-mirrored pair produced by ``homodyne_cov`` this is the
    Chernoff optimum and reduces to (1/2) ln(A*S / (A*S - C^2)) in the scaled
    entries.
    """
    cov0 = np.asarray(cov0, dtype=float)
    cov1 = np.asarray(cov1, dtype=float)
    det0 = np.linalg.det(cov0)
    det1 = np.linalg.det(cov1)
    if det0 <= 0.0 or det1 <= 0.0:
        raise InvalidParams("singular homodyne covariance")
    det_avg = np.linalg.det(0.5 * (cov0 + cov1))
    return float(0.5 * (math.log(det_avg) - 0.5 * (math.log(det0) + math.log(det1))))


def opa_exponent(spec: OpaSpec) -> float:
    """Bhattacharyya exponent for Bose-Einstein photon counts with means n0 > n1.

    -ln sum_n sqrt(P0(n) P1(n)) = ln( sqrt((n0+1)(n1+1)) - sqrt(n0 n1) ).
    """
    n0, n1 = spec.mean_n0, spec.mean_n1
    if n1 < 0.0 or n0 < n1:
        raise InvalidParams(f"need n0 >= n1 >= 0, got {n0}, {n1}")
    return math.log(math.sqrt((n0 + 1.0) * (n1 + 1.0)) - math.sqrt(n0 * n1))


def asymptotic_exponents(p: ProtocolParams) -> AsymptoticExponents:
    """Low-brightness/high-noise closed forms for all four receivers.

    ``valid`` flags ns <= 0.01 and kappa*nb >= 10, the regime where these
    forms are meant to track the exact exponents.
    """
    if p.nb <= 0.0:
        raise InvalidParams("asymptotic forms require nb > 0")
    scale = p.kappa * p.ns / p.nb
    return AsymptoticExponents(
        alice=4.0 * scale,
        eve=4.0 * (1.0 - p.kappa) * p.ns * scale,
        homodyne=scale,
        opa=2.0 * scale,
        valid=(p.ns <= 0.01 and p.kappa * p.nb >= 10.0),
    )


def receiver_bounds(p: ProtocolParams, m: int | None = None) -> dict:
    """Exact exponents and bounds for every receiver at m mode pairs.

    The amplifier entry is None at nb = 0, where its gain diverges.
    """
    m = p.m if m is None else int(m)
    out = {
        "alice_opt": BoundSet.from_exponent(
            qcb_exponent(alice_conditional_cov(p, 0), alice_conditional_cov(p, 1)), m
        ),
        "eve_opt": BoundSet.from_exponent(
            qcb_exponent(eve_conditional_cov(p, 0), eve_conditional_cov(p, 1)), m
        ),
        "homodyne": BoundSet.from_exponent(
            homodyne_exponent(homodyne_cov(p, 0), homodyne_cov(p, 1)), m
        ),
    }
    if p.nb > 0.0:
        out["opa"] = BoundSet.from_exponent(opa_exponent(opa_spec(p)), m)
    else:
        out["opa"] = None
    return out
