"""Protocol parameters and the scalar covariance entries derived from them."""

from __future__ import annotations

from dataclasses import dataclass


class InvalidParams(ValueError):
    """Raised when protocol parameters or operation inputs are out of range."""


def _check_bit(k: int):
    if k not in (0, 1):
        raise InvalidParams(f"bit must be 0 or 1, got {k!r}")


@dataclass(frozen=True)
class ProtocolParams:
    """Link parameters for one communication bit.

    Parameters
    ----------
    kappa : float
        One-way channel transmissivity, in (0, 1].
    ns : float
        Mean photon number per signal (and idler) mode, >= 0.
    nb : float
        Mean classical noise photons added per mode at the modulator, >= 0.
    m : int
        Number of signal-idler mode pairs carrying the bit, >= 1.
    """

    kappa: float
    ns: float
    nb: float
    m: int = 1

    def __post_init__(self):
        if not 0.0 < self.kappa <= 1.0:
            raise InvalidParams(f"kappa must be in (0, 1], got {self.kappa}")
        if self.ns < 0.0:
            raise InvalidParams(f"ns must be >= 0, got {self.ns}")
        if self.nb < 0.0:
            raise InvalidParams(f"nb must be >= 0, got {self.nb}")
        if self.m != int(self.m) or self.m < 1:
            raise InvalidParams(f"m must be a positive integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class DerivedSymbols:
    """Scaled Wigner-covariance entries (4x the matrix entries) for the protocol states.

    src_var : signal/idler diagonal of the source, 2*ns + 1.
    src_cross : phase-sensitive signal-idler cross correlation, 2*sqrt(ns*(ns+1)).
    ret_var : diagonal of the mode returned to the sender after the noisy round trip.
    ret_cross : return/idler cross correlation, kappa * src_cross.
    tap1_var : diagonal of the eavesdropper's first-pass tap mode.
    tap2_var : diagonal of the eavesdropper's second-pass tap mode.
    tap_cross : phase-insensitive correlation between the two tap modes.
    """

    src_var: float
    src_cross: float
    ret_var: float
    ret_cross: float
    tap1_var: float
    tap2_var: float
    tap_cross: float
