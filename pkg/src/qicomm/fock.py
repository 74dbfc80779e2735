"""Truncated two-mode Fock-space oracle: convention-free states and channels.

Every protocol state at small photon numbers can be rebuilt here as an explicit
density matrix and pushed through Kraus-sum channels, giving an independent
check of the Gaussian-covariance formulas.  All states and channel operators
are real, so density matrices are stored as real symmetric arrays of dimension
(cutoff+1)^2 with mode index ordering (n_first * (cutoff+1) + n_second).

The additive classical-noise channel is realized exactly as pure loss at
transmissivity 1/(1+nb) followed by amplification at gain 1+nb; that
composition adds nb mean photons and nb/2 per quadrature variance, matching
the covariance-level map.  (Amplifying first would add only nb/(1+nb).)
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bounds import NumericalInstability, gaussian_s_overlap
from .model import alice_conditional_cov
from .params import InvalidParams, ProtocolParams


class CutoffTooSmall(ValueError):
    """Truncation at the current cutoff loses more weight than allowed."""


@dataclass(frozen=True)
class FockState2:
    """Two-mode density matrix truncated at ``cutoff`` photons per mode."""

    rho: np.ndarray
    cutoff: int

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    @property
    def deficit(self) -> float:
        """Weight lost to truncation so far."""
        return 1.0 - self.trace


def tmsv_fock(ns: float, cutoff: int) -> FockState2:
    """Two-mode squeezed vacuum sum_n sqrt((1-x) x^n) |n,n> as a density matrix."""
    if ns < 0.0:
        raise InvalidParams(f"ns must be >= 0, got {ns}")
    if cutoff < 1:
        raise InvalidParams(f"cutoff must be >= 1, got {cutoff}")
    dim = cutoff + 1
    x = ns / (ns + 1.0)
    if x > 0.0 and x ** (cutoff + 1) > 1e-6:
        raise CutoffTooSmall(
            f"two-mode squeezed vacuum at ns={ns} loses {x ** (cutoff + 1):.2e} > 1e-6"
        )
    n = np.arange(dim)
    amps = np.sqrt((1.0 - x) * x**n) if x > 0.0 else np.eye(1, dim, 0).ravel()
    vec = np.zeros(dim * dim)
    vec[n * dim + n] = amps
    return FockState2(rho=np.outer(vec, vec), cutoff=cutoff)


def _loss_kraus(cutoff: int, kappa: float) -> list[np.ndarray]:
    dim = cutoff + 1
    ops = []
    for lost in range(dim):
        k = np.zeros((dim, dim))
        for n in range(lost, dim):
            k[n - lost, n] = math.sqrt(
                math.comb(n, lost) * (1.0 - kappa) ** lost * kappa ** (n - lost)
            )
        ops.append(k)
    return ops


def _amp_kraus(cutoff: int, gain: float) -> list[np.ndarray]:
    dim = cutoff + 1
    t2 = (gain - 1.0) / gain
    ops = []
    for added in range(dim):
        k = np.zeros((dim, dim))
        for n in range(dim - added):
            k[n + added, n] = math.sqrt(math.comb(n + added, added) * t2**added / gain ** (n + 1))
        ops.append(k)
    return ops


def _apply_channel(state: FockState2, mode: int, kraus: list[np.ndarray]) -> FockState2:
    if mode not in (0, 1):
        raise InvalidParams(f"mode must be 0 or 1, got {mode}")
    dim = state.cutoff + 1
    eye = np.eye(dim)
    out = np.zeros_like(state.rho)
    for k in kraus:
        full = np.kron(k, eye) if mode == 0 else np.kron(eye, k)
        out += full @ state.rho @ full.T
    return FockState2(rho=out, cutoff=state.cutoff)


def apply_loss(state: FockState2, mode: int, kappa: float) -> FockState2:
    """Beam-splitter loss at transmissivity kappa on one mode."""
    if not 0.0 <= kappa <= 1.0:
        raise InvalidParams(f"kappa must be in [0, 1], got {kappa}")
    return _apply_channel(state, mode, _loss_kraus(state.cutoff, kappa))


def apply_bpsk(state: FockState2, mode: int, k: int) -> FockState2:
    """Phase flip (-1)^k on one mode, the diagonal unitary (-1)^n."""
    if k not in (0, 1):
        raise InvalidParams(f"bit must be 0 or 1, got {k}")
    if k == 0:
        return state
    dim = state.cutoff + 1
    parity = (-1.0) ** np.arange(dim)
    ones = np.ones(dim)
    diag = np.kron(parity, ones) if mode == 0 else np.kron(ones, parity)
    return FockState2(rho=state.rho * np.outer(diag, diag), cutoff=state.cutoff)


def apply_additive_noise(state: FockState2, mode: int, nb: float) -> FockState2:
    """Classical isotropic noise of nb mean photons on one mode (loss then gain)."""
    if nb < 0.0:
        raise InvalidParams(f"nb must be >= 0, got {nb}")
    if nb == 0.0:
        return state
    before = state.trace
    out = _apply_channel(state, mode, _loss_kraus(state.cutoff, 1.0 / (1.0 + nb)))
    out = _apply_channel(out, mode, _amp_kraus(state.cutoff, 1.0 + nb))
    if before - out.trace > 1e-5:
        raise CutoffTooSmall(
            f"noise channel lost {before - out.trace:.2e} > 1e-5 at cutoff {state.cutoff}"
        )
    return out


def s_overlap_fock(state0: FockState2, state1: FockState2, s: float) -> float:
    """tr(rho0^s rho1^(1-s)) by Hermitian eigendecomposition, negatives clipped at 0."""
    if not 0.0 < s < 1.0:
        raise InvalidParams(f"s must be in (0, 1), got {s}")
    if state0.cutoff != state1.cutoff:
        raise InvalidParams("states must share a cutoff")
    try:
        pow0 = _matrix_power(state0.rho, s)
        pow1 = _matrix_power(state1.rho, 1.0 - s)
    except np.linalg.LinAlgError as exc:
        raise NumericalInstability(f"eigendecomposition failed: {exc}") from exc
    return float(np.sum(pow0 * pow1))


def _matrix_power(rho: np.ndarray, p: float) -> np.ndarray:
    sym = 0.5 * (rho + rho.T)
    eigs, vecs = np.linalg.eigh(sym)
    eigs = np.clip(eigs, 0.0, None)
    return (vecs * eigs**p) @ vecs.T


def mean_photons_fock(state: FockState2, mode: int) -> float:
    """Mean photon number of one mode."""
    dim = state.cutoff + 1
    n = np.arange(dim, dtype=float)
    ones = np.ones(dim)
    weights = np.kron(n, ones) if mode == 0 else np.kron(ones, n)
    return float(np.dot(np.diag(state.rho).real, weights))


def covariance_from_fock(state: FockState2) -> np.ndarray:
    """4x4 Wigner covariance extracted from second moments of the density matrix.

    The states built here are zero mean, so no mean subtraction is needed.
    """
    dim = state.cutoff + 1
    lower = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    eye = np.eye(dim)
    ops = []
    for a in (np.kron(lower, eye), np.kron(eye, lower)):
        ops.append(0.5 * (a + a.conj().T))
        ops.append(-0.5j * (a - a.conj().T))
    cov = np.zeros((4, 4))
    rho = state.rho.astype(complex)
    for i in range(4):
        for j in range(i, 4):
            sym_prod = 0.5 * (ops[i] @ ops[j] + ops[j] @ ops[i])
            cov[i, j] = cov[j, i] = float(np.trace(rho @ sym_prod).real)
    return cov


def alice_pair_fock(kappa: float, ns: float, nb: float, cutoff: int) -> tuple[FockState2, FockState2]:
    """The sender's two conditional states built through the Fock-space round trip.

    Chain per bit: source, loss, phase flip, additive noise, loss, all on the
    signal/return mode (index 0); the idler (index 1) is untouched.
    """
    state = apply_loss(tmsv_fock(ns, cutoff), 0, kappa)
    out = []
    for k in (0, 1):
        branch = apply_bpsk(state, 0, k)
        branch = apply_additive_noise(branch, 0, nb)
        branch = apply_loss(branch, 0, kappa)
        out.append(branch)
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Gaussian-vs-Fock comparison grid
# ---------------------------------------------------------------------------

DEFAULT_GRID = {
    "ns": (0.05, 0.1, 0.3),
    "kappa": (0.3, 0.6, 0.9),
    "nb": (0.0, 0.2, 0.5),
    "s": (0.3, 0.5, 0.7),
}


@dataclass(frozen=True)
class OracleRow:
    """One grid point of the Gaussian-formula vs Fock-oracle comparison."""

    ns: float
    kappa: float
    nb: float
    s: float
    q_gaussian: float
    q_fock: float
    deviation: float
    deficit: float
    error: str | None = None


def oracle_grid_rows(
    ns_values=DEFAULT_GRID["ns"],
    kappa_values=DEFAULT_GRID["kappa"],
    nb_values=DEFAULT_GRID["nb"],
    s_values=DEFAULT_GRID["s"],
    cutoff: int = 20,
) -> list[OracleRow]:
    """Compare the Gaussian trace-overlap against the Fock oracle over a grid.

    A CutoffTooSmall at any point is surfaced as an error row, never silently
    passed.
    """
    rows = []
    for ns, kappa, nb in itertools.product(ns_values, kappa_values, nb_values):
        try:
            state0, state1 = alice_pair_fock(kappa, ns, nb, cutoff)
        except CutoffTooSmall as exc:
            for s in s_values:
                rows.append(
                    OracleRow(ns, kappa, nb, s, math.nan, math.nan, math.nan, math.nan, str(exc))
                )
            continue
        deficit = max(state0.deficit, state1.deficit)
        p = ProtocolParams(kappa=kappa, ns=ns, nb=nb)
        cov0 = alice_conditional_cov(p, 0)
        cov1 = alice_conditional_cov(p, 1)
        for s in s_values:
            q_gauss = gaussian_s_overlap(cov0, cov1, s).q
            q_fock = s_overlap_fock(state0, state1, s)
            rows.append(
                OracleRow(ns, kappa, nb, s, q_gauss, q_fock, abs(q_gauss - q_fock), deficit)
            )
    return rows
