"""Error-probability bounds for entanglement-assisted BPSK communication.

The sender keeps idler modes entangled with the signal she launches; the
remote modulator phase-flips and noise-loads the light before returning it.
This package computes exact and asymptotic error exponents for the sender's
optimum quantum, homodyne and parametric-amplifier receivers and for a
passive eavesdropper's optimum receiver, validates the Gaussian formulas
against a truncated Fock-space oracle, and simulates the implementable
receivers.
"""

from .bounds import (
    AsymptoticExponents,
    BoundSet,
    NumericalInstability,
    OverlapResult,
    asymptotic_exponents,
    chernoff_upper,
    error_lower,
    gaussian_s_overlap,
    homodyne_exponent,
    opa_exponent,
    qcb_exponent,
    receiver_bounds,
)
from .fock import (
    CutoffTooSmall,
    FockState2,
    alice_pair_fock,
    apply_additive_noise,
    apply_bpsk,
    apply_loss,
    covariance_from_fock,
    mean_photons_fock,
    oracle_grid_rows,
    s_overlap_fock,
    tmsv_fock,
)
from .model import (
    OpaSpec,
    add_classical_noise,
    alice_conditional_cov,
    bpsk_flip,
    derive_symbols,
    eve_conditional_cov,
    homodyne_cov,
    mean_photons,
    opa_output_mean,
    opa_spec,
    pure_loss,
    round_trip_covariances,
    tmsv_cov,
)
from .montecarlo import McConfig, McResult, simulate_homodyne, simulate_opa, wilson_interval
from .params import DerivedSymbols, InvalidParams, ProtocolParams
from .symplectic import (
    OMEGA,
    VACUUM_NU,
    DomainError,
    NonPhysicalCovariance,
    WilliamsonDecomp,
    analytic_decomp_alice,
    analytic_decomp_eve,
    is_symplectic,
    random_physical_cov,
    random_symplectic,
    validate_covariance,
    williamson,
)

__version__ = "0.1.0"
