"""Covariance matrices and mode statistics for every state appearing in the protocol.

The protocol: the sender keeps the idler halves of two-mode squeezed vacuum
pairs and launches the signal halves through a lossy channel; the remote
modulator flips the sign of each incoming mode according to the bit, adds
isotropic classical noise, and sends the modes back through the same channel.
A passive eavesdropper holds the modes lost on both passes.  Everything here
is second-moment (Wigner covariance) level, which is exact for these Gaussian
states; vacuum covariance is I/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DerivedSymbols, InvalidParams, ProtocolParams, _check_bit


@dataclass(frozen=True)
class OpaSpec:
    """Parametric-amplifier receiver settings and its output photon statistics.

    gain : amplifier gain, 1 + ns/sqrt(kappa*nb).
    mean_n0, mean_n1 : mean photon number of the combined output mode under
        bit 0 / bit 1.  The output mode is thermal, so photon counts are
        Bose-Einstein distributed with these means.
    """

    gain: float
    mean_n0: float
    mean_n1: float


def derive_symbols(p: ProtocolParams) -> DerivedSymbols:
    """Evaluate the scalar covariance entries for the given parameters."""
    kappa, ns, nb = p.kappa, p.ns, p.nb
    src_var = 2.0 * ns + 1.0
    src_cross = 2.0 * math.sqrt(ns * (ns + 1.0))
    return DerivedSymbols(
        src_var=src_var,
        src_cross=src_cross,
        ret_var=2.0 * kappa**2 * ns + 2.0 * kappa * nb + 1.0,
        ret_cross=kappa * src_cross,
        tap1_var=2.0 * (1.0 - kappa) * ns + 1.0,
        tap2_var=2.0 * (1.0 - kappa) * kappa * ns + 2.0 * (1.0 - kappa) * nb + 1.0,
        tap_cross=2.0 * (1.0 - kappa) * math.sqrt(kappa) * ns,
    )


def tmsv_cov(ns: float) -> np.ndarray:
    """Covariance of a two-mode squeezed vacuum with ns photons per mode."""
    if ns < 0.0:
        raise InvalidParams(f"ns must be >= 0, got {ns}")
    s = 2.0 * ns + 1.0
    c = 2.0 * math.sqrt(ns * (ns + 1.0))
    return 0.25 * np.array(
        [
            [s, 0.0, c, 0.0],
            [0.0, s, 0.0, -c],
            [c, 0.0, s, 0.0],
            [0.0, -c, 0.0, s],
        ]
    )


def alice_conditional_cov(p: ProtocolParams, k: int) -> np.ndarray:
    """Covariance of the sender's (return, idler) pair conditioned on bit k.

    The bit only flips the sign of the four cross-correlation entries; the
    cross block carries the phase-sensitive +/- pattern of the source.
    """
    _check_bit(k)
    sym = derive_symbols(p)
    a, s = sym.ret_var, sym.src_var
    c = sym.ret_cross if k == 0 else -sym.ret_cross
    return 0.25 * np.array(
        [
            [a, 0.0, c, 0.0],
            [0.0, a, 0.0, -c],
            [c, 0.0, s, 0.0],
            [0.0, -c, 0.0, s],
        ]
    )


def eve_conditional_cov(p: ProtocolParams, k: int) -> np.ndarray:
    """Covariance of the eavesdropper's (first tap, second tap) pair for bit k.

    Unlike the sender's state, the cross block is phase insensitive: the
    Re-Re and Im-Im entries carry the same sign.
    """
    _check_bit(k)
    sym = derive_symbols(p)
    d, e = sym.tap1_var, sym.tap2_var
    c = sym.tap_cross if k == 0 else -sym.tap_cross
    return 0.25 * np.array(
        [
            [d, 0.0, c, 0.0],
            [0.0, d, 0.0, c],
            [c, 0.0, e, 0.0],
            [0.0, c, 0.0, e],
        ]
    )


def homodyne_cov(p: ProtocolParams, k: int) -> np.ndarray:
    """2x2 covariance of (Re return, Re idler) conditioned on bit k.

    This is the marginal of ``alice_conditional_cov`` on the two Re
    quadratures (rows/columns 0 and 2).
    """
    _check_bit(k)
    sym = derive_symbols(p)
    c = sym.ret_cross if k == 0 else -sym.ret_cross
    return 0.25 * np.array([[sym.ret_var, c], [c, sym.src_var]])


def opa_spec(p: ProtocolParams) -> OpaSpec:
    """Gain and output photon means for the parametric-amplifier receiver.

    The receiver mixes the idler with the conjugated return mode at gain
    G = 1 + ns/sqrt(kappa*nb), undefined at nb = 0.
    """
    if p.nb <= 0.0:
        raise InvalidParams("amplifier gain is undefined at nb = 0")
    sym = derive_symbols(p)
    gain = 1.0 + p.ns / math.sqrt(p.kappa * p.nb)
    base = gain * p.ns + (gain - 1.0) * (p.kappa**2 * p.ns + p.kappa * p.nb + 1.0)
    shift = math.sqrt(gain * (gain - 1.0)) * sym.ret_cross
    return OpaSpec(gain=gain, mean_n0=base + shift, mean_n1=base - shift)


# ---------------------------------------------------------------------------
# Covariance-level channel maps and the explicit round-trip propagation.
# These are used to cross-check the closed-form matrices above.
# ---------------------------------------------------------------------------


def _mode_slice(mode: int) -> slice:
    return slice(2 * mode, 2 * mode + 2)


def pure_loss(cov: np.ndarray, mode: int, kappa: float) -> np.ndarray:
    """Mix one mode of a covariance matrix with vacuum at transmissivity kappa."""
    if not 0.0 <= kappa <= 1.0:
        raise InvalidParams(f"kappa must be in [0, 1], got {kappa}")
    out = np.array(cov, dtype=float, copy=True)
    sl = _mode_slice(mode)
    root = math.sqrt(kappa)
    out[sl, :] *= root
    out[:, sl] *= root
    out[sl, sl] += (1.0 - kappa) * 0.25 * np.eye(2)
    return out


def bpsk_flip(cov: np.ndarray, mode: int) -> np.ndarray:
    """Sign-flip one mode; only cross blocks with other modes change sign."""
    out = np.array(cov, dtype=float, copy=True)
    sl = _mode_slice(mode)
    out[sl, :] *= -1.0
    out[:, sl] *= -1.0
    return out


def add_classical_noise(cov: np.ndarray, mode: int, nb: float) -> np.ndarray:
    """Add isotropic classical noise of nb mean photons to one mode."""
    if nb < 0.0:
        raise InvalidParams(f"nb must be >= 0, got {nb}")
    out = np.array(cov, dtype=float, copy=True)
    sl = _mode_slice(mode)
    out[sl, sl] += 0.5 * nb * np.eye(2)
    return out


def _beamsplitter(kappa: float, n_modes: int, first: int, second: int) -> np.ndarray:
    """Symplectic of out1 = sqrt(k) in1 + sqrt(1-k) in2, out2 = sqrt(1-k) in1 - sqrt(k) in2."""
    t, r = math.sqrt(kappa), math.sqrt(1.0 - kappa)
    full = np.eye(2 * n_modes)
    i, j = _mode_slice(first), _mode_slice(second)
    full[i, i] = t * np.eye(2)
    full[i, j] = r * np.eye(2)
    full[j, i] = r * np.eye(2)
    full[j, j] = -t * np.eye(2)
    return full


def round_trip_covariances(p: ProtocolParams, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Propagate the full four-mode covariance through the round trip.

    Tracks (signal chain, idler, first environment, second environment),
    applying beam splitter, bit flip, additive noise, beam splitter, and
    returns the sender's (return, idler) and the eavesdropper's (tap1, tap2)
    4x4 restrictions.  Independent of the closed forms; used to validate them.
    """
    _check_bit(k)
    full = 0.25 * np.eye(8)
    full[:4, :4] = tmsv_cov(p.ns)

    bs1 = _beamsplitter(p.kappa, 4, 0, 2)
    full = bs1 @ full @ bs1.T
    if k == 1:
        full = bpsk_flip(full, 0)
    full = add_classical_noise(full, 0, p.nb)
    bs2 = _beamsplitter(p.kappa, 4, 0, 3)
    full = bs2 @ full @ bs2.T

    alice_idx = [0, 1, 2, 3]
    eve_idx = [4, 5, 6, 7]
    alice = full[np.ix_(alice_idx, alice_idx)]
    eve = full[np.ix_(eve_idx, eve_idx)]
    return alice, eve


def mean_photons(cov: np.ndarray, mode: int) -> float:
    """Mean photon number of one mode of a covariance matrix."""
    sl = _mode_slice(mode)
    return float(np.trace(cov[sl, sl]) - 0.5)


def opa_output_mean(cov: np.ndarray, gain: float) -> float:
    """Mean photon number of the amplifier output, from the (return, idler) covariance.

    Quadratic-form evaluation of <a'^dag a'> for a' = sqrt(G) a_idler
    + sqrt(G-1) a_return^dag; the Re part of the phase-sensitive cross
    correlation is cov[0,2] - cov[1,3].
    """
    n_ret = mean_photons(cov, 0)
    n_idl = mean_photons(cov, 1)
    re_cross = cov[0, 2] - cov[1, 3]
    return gain * n_idl + (gain - 1.0) * (n_ret + 1.0) + 2.0 * math.sqrt(gain * (gain - 1.0)) * re_cross
