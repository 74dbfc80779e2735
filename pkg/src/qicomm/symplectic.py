"""Williamson decomposition and symplectic utilities for 4x4 Wigner covariance matrices.

Convention: quadratures are the real and imaginary parts of each mode operator,
ordered (Re1, Im1, Re2, Im2), so the vacuum covariance matrix is I/4 and every
physical symplectic eigenvalue satisfies nu >= 1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .params import DerivedSymbols, _check_bit

#: Two-mode symplectic form in (Re1, Im1, Re2, Im2) ordering.
OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)

#: Symplectic eigenvalue of the vacuum in this convention.
VACUUM_NU = 0.25


class NonPhysicalCovariance(ValueError):
    """Covariance is not symmetric positive definite or violates the uncertainty bound."""


class DomainError(ValueError):
    """Closed-form decomposition evaluated outside its mathematical domain."""


@dataclass(frozen=True)
class WilliamsonDecomp:
    """Symplectic matrix and spectrum with cov = S diag(nu1, nu1, nu2, nu2) S^T.

    ``nu`` is sorted descending; column signs of ``symplectic`` are fixed by
    requiring the first nonzero entry of each column pair positive.  The
    in-plane rotation of each column pair is not canonicalized, so two valid
    decompositions of the same matrix agree in ``nu`` but may differ in
    ``symplectic`` by a block rotation.
    """

    symplectic: np.ndarray
    nu: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Rebuild the covariance matrix this decomposition factors."""
        diag = np.repeat(self.nu, 2)
        return (self.symplectic * diag) @ self.symplectic.T


def is_symplectic(mat: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff max|M Omega M^T - Omega| <= tol."""
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (4, 4):
        return False
    return bool(np.max(np.abs(mat @ OMEGA @ mat.T - OMEGA)) <= tol)


def validate_covariance(cov, sym_tol: float = 1e-12, slack: float = 1e-9) -> np.ndarray:
    """Check symmetry, positive definiteness and the uncertainty condition.

    Returns the symmetrized matrix.  Raises NonPhysicalCovariance on failure.
    The uncertainty condition cov + (i/4) Omega >= 0 is checked with a small
    slack because pure states sit exactly on the boundary.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        raise NonPhysicalCovariance(f"expected a 4x4 matrix, got shape {cov.shape}")
    scale = float(np.max(np.abs(cov)))
    if scale == 0.0 or np.max(np.abs(cov - cov.T)) > sym_tol * scale:
        raise NonPhysicalCovariance("covariance matrix is not symmetric")
    cov = 0.5 * (cov + cov.T)
    eigs = np.linalg.eigvalsh(cov)
    if eigs[0] <= 0.0:
        raise NonPhysicalCovariance(f"covariance not positive definite (min eig {eigs[0]:.3e})")
    herm = cov + 0.25j * OMEGA
    min_unc = np.linalg.eigvalsh(herm)[0]
    if min_unc < -slack:
        raise NonPhysicalCovariance(
            f"uncertainty condition violated (min eig of cov + i*Omega/4 is {min_unc:.3e})"
        )
    return cov


def _fix_column_signs(smat: np.ndarray) -> np.ndarray:
    """Flip column pairs so the first nonzero entry of each pair's lead column is positive."""
    out = smat.copy()
    for i in (0, 1):
        col = out[:, 2 * i]
        nz = np.flatnonzero(np.abs(col) > 1e-10 * np.max(np.abs(col)))
        if col[nz[0]] < 0:
            out[:, 2 * i : 2 * i + 2] *= -1.0
    return out


def williamson(cov) -> WilliamsonDecomp:
    """Numerically diagonalize a physical covariance matrix by symplectic congruence.

    Uses the real Schur form of cov^(-1/2) Omega cov^(-1/2): with orthogonal R
    bringing that antisymmetric kernel to blocks [[0, 1/nu], [-1/nu, 0]], the
    matrix S = cov^(1/2) R diag(nu)^(-1/2) is symplectic and satisfies
    cov = S diag(nu1, nu1, nu2, nu2) S^T.

    Raises
    ------
    NonPhysicalCovariance
        If the input fails symmetry, positive definiteness or the uncertainty
        condition; this usually signals malformed protocol parameters upstream.
    """
    cov = validate_covariance(cov)
    eigs, vecs = np.linalg.eigh(cov)
    root = (vecs * np.sqrt(eigs)) @ vecs.T
    inv_root = (vecs / np.sqrt(eigs)) @ vecs.T
    kernel = inv_root @ OMEGA @ inv_root
    kernel = 0.5 * (kernel - kernel.T)
    tmat, rmat = schur(kernel, output="real")
    rmat = rmat.copy()

    freq = np.array([tmat[0, 1], tmat[2, 3]])
    for i in range(2):
        if freq[i] < 0.0:
            rmat[:, [2 * i, 2 * i + 1]] = rmat[:, [2 * i + 1, 2 * i]]
            freq[i] = -freq[i]
    nu = 1.0 / freq
    if nu[0] < nu[1]:
        rmat = rmat[:, [2, 3, 0, 1]]
        nu = nu[::-1]

    smat = (root @ rmat) / np.sqrt(np.repeat(nu, 2))
    smat = _fix_column_signs(smat)
    return WilliamsonDecomp(symplectic=smat, nu=np.ascontiguousarray(nu))


def _canonical(smat: np.ndarray, nu: np.ndarray) -> WilliamsonDecomp:
    """Sort a closed-form decomposition descending in nu and fix column signs."""
    if nu[0] < nu[1]:
        smat = smat[:, [2, 3, 0, 1]]
        nu = nu[::-1]
    return WilliamsonDecomp(symplectic=_fix_column_signs(smat), nu=np.ascontiguousarray(nu))


def analytic_decomp_alice(symbols: DerivedSymbols, k: int) -> WilliamsonDecomp:
    """Closed-form decomposition of the sender's conditional covariance for bit k.

    Built from two-mode-squeezer blocks diag(x, +/-x); the spectrum is
    independent of k.  Agrees with ``williamson`` of the same matrix in the
    sense documented on WilliamsonDecomp.
    """
    _check_bit(k)
    a, s, ca = symbols.ret_var, symbols.src_var, symbols.ret_cross
    disc = (a + s) ** 2 - 4.0 * ca**2
    if disc <= 0.0:
        raise DomainError("(ret_var + src_var)^2 <= 4 ret_cross^2; parameters are corrupt")
    h = math.sqrt(disc)
    xp = math.sqrt((a + s + h) / (2.0 * h))
    xm = math.sqrt((a + s - h) / (2.0 * h))
    sign = -1.0 if k else 1.0
    pblock = np.diag([xp, xp])
    mblock = np.diag([xm, -xm])
    smat = np.block([[pblock, sign * mblock], [sign * mblock, pblock]])
    nu = np.array([(a - s + h) / 8.0, (s - a + h) / 8.0])
    return _canonical(smat, nu)


def analytic_decomp_eve(symbols: DerivedSymbols, k: int) -> WilliamsonDecomp:
    """Closed-form decomposition of the eavesdropper's conditional covariance for bit k.

    Built from a mode-mixing rotation; the spectrum is independent of k.
    """
    _check_bit(k)
    d, e, ce = symbols.tap1_var, symbols.tap2_var, symbols.tap_cross
    root = math.hypot(d - e, 2.0 * ce)
    if d + e <= root:
        raise DomainError("tap variances inconsistent; parameters are corrupt")
    theta = 0.5 * math.atan2(2.0 * ce, d - e)
    cosblock = math.cos(theta) * np.eye(2)
    sinblock = math.sin(theta) * np.eye(2)
    top = -sinblock if k == 0 else sinblock
    bot = sinblock if k == 0 else -sinblock
    smat = np.block([[cosblock, top], [bot, cosblock]])
    nu = np.array([(d + e + root) / 8.0, (d + e - root) / 8.0])
    return _canonical(smat, nu)


def random_symplectic(rng: np.random.Generator, max_squeeze: float = 1.0) -> np.ndarray:
    """Random two-mode symplectic matrix: passive * squeeze * passive."""

    def passive():
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, r = np.linalg.qr(z)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        block = np.block([[q.real, -q.imag], [q.imag, q.real]])
        perm = [0, 2, 1, 3]  # (q1,q2,p1,p2) -> (q1,p1,q2,p2)
        return block[np.ix_(perm, perm)]

    r1, r2 = rng.uniform(-max_squeeze, max_squeeze, size=2)
    squeeze = np.diag([math.exp(r1), math.exp(-r1), math.exp(r2), math.exp(-r2)])
    return passive() @ squeeze @ passive()


def random_physical_cov(
    rng: np.random.Generator, max_squeeze: float = 1.0, max_thermal: float = 3.0
) -> np.ndarray:
    """Random physical covariance: random symplectic acting on a thermal spectrum.

    Roughly one in five spectra touches the vacuum boundary so boundary
    handling stays exercised.
    """
    mean = rng.uniform(0.0, max_thermal, size=2)
    mean[rng.random(2) < 0.2] = 0.0
    nu = 0.25 * (1.0 + 2.0 * np.sort(mean)[::-1])
    gmat = random_symplectic(rng, max_squeeze)
    cov = (gmat * np.repeat(nu, 2)) @ gmat.T
    return 0.5 * (cov + cov.T)

