"""Acceptance gate: every release criterion, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL line
per criterion.  Criteria 2 and 3 are asserted exactly as stated even though
the exact-exponent measurements show the required tolerances cannot hold at
those parameters; the tests report the measured values so the discrepancy
stays visible instead of being tuned away.
"""

import math
import time

import numpy as np

from qicomm.bounds import (
    asymptotic_exponents,
    chernoff_upper,
    error_lower,
    homodyne_exponent,
    opa_exponent,
    qcb_exponent,
)
from qicomm.fock import oracle_grid_rows
from qicomm.model import (
    alice_conditional_cov,
    derive_symbols,
    eve_conditional_cov,
    homodyne_cov,
    opa_spec,
)
from qicomm.montecarlo import McConfig, simulate_homodyne, simulate_opa
from qicomm.params import ProtocolParams
from qicomm.symplectic import (
    OMEGA,
    analytic_decomp_alice,
    analytic_decomp_eve,
    is_symplectic,
    random_physical_cov,
    random_symplectic,
    williamson,
)

FIG1 = ProtocolParams(kappa=0.1, ns=0.004, nb=100.0, m=2_000_000)


def _report(tag: str, ok: bool, detail: str) -> bool:
    print(f"ACCEPTANCE {tag}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def _exact_exponents(p: ProtocolParams) -> dict:
    exponents = {
        "alice": qcb_exponent(alice_conditional_cov(p, 0), alice_conditional_cov(p, 1)),
        "eve": qcb_exponent(eve_conditional_cov(p, 0), eve_conditional_cov(p, 1)),
        "homodyne": homodyne_exponent(homodyne_cov(p, 0), homodyne_cov(p, 1)),
    }
    if p.nb > 0.0:
        exponents["opa"] = opa_exponent(opa_spec(p))
    return exponents


def test_criterion_1_reference_bound_values():
    """Amplifier upper bound <= 7.15e-6 (within 5%); eavesdropper bounds 0.285/0.451 (5%)."""
    start = time.perf_counter()
    exps = _exact_exponents(FIG1)
    opa_upper = chernoff_upper(exps["opa"], FIG1.m)
    eve_upper = chernoff_upper(exps["eve"], FIG1.m)
    eve_lower = error_lower(exps["eve"], FIG1.m)
    elapsed = time.perf_counter() - start
    ok = (
        opa_upper <= 7.15e-6
        and abs(opa_upper - 7.15e-6) / 7.15e-6 <= 0.05
        and abs(eve_lower - 0.285) / 0.285 <= 0.05
        and abs(eve_upper - 0.451) / 0.451 <= 0.05
        and elapsed < 1.0
    )
    _report(
        "1 reference-bounds",
        ok,
        f"opa_upper={opa_upper:.4e} eve_lower={eve_lower:.4f} eve_upper={eve_upper:.4f} "
        f"t={elapsed * 1e3:.0f}ms",
    )
    assert ok


def test_criterion_2_exact_exponent_ratios():
    """Exact-exponent ratios at the reference point: 4 (5%), 2 (5%), 277.8 (10%).

    Measured exact ratios are about 3.41 and 2.32: the 4x and 2x relations
    hold between the closed-form asymptotic exponents (asserted exactly in
    test_bounds), not between the exact exponents at these parameters, so the
    first two checks fail by construction.  Recorded here unweakened.
    """
    exps = _exact_exponents(FIG1)
    r_hom = exps["alice"] / exps["homodyne"]
    r_opa = exps["alice"] / exps["opa"]
    r_eve = exps["alice"] / exps["eve"]
    target_eve = 1.0 / ((1.0 - FIG1.kappa) * FIG1.ns)
    ok_hom = abs(r_hom - 4.0) / 4.0 <= 0.05
    ok_opa = abs(r_opa - 2.0) / 2.0 <= 0.05
    ok_eve = abs(r_eve - target_eve) / target_eve <= 0.10
    ok = ok_hom and ok_opa and ok_eve
    _report(
        "2 exponent-ratios",
        ok,
        f"alice/hom={r_hom:.4f} (want 4 +/-5%: {ok_hom}), "
        f"alice/opa={r_opa:.4f} (want 2 +/-5%: {ok_opa}), "
        f"alice/eve={r_eve:.2f} (want {target_eve:.1f} +/-10%: {ok_eve})",
    )
    assert ok, (
        f"exact ratios alice/hom={r_hom:.4f}, alice/opa={r_opa:.4f}, alice/eve={r_eve:.2f}; "
        "the 4x/2x relations hold only between the asymptotic forms"
    )


def test_criterion_3_asymptotic_agreement():
    """Exact vs asymptotic exponents within 10% for 50 random sets, ns<=0.005, kappa*nb>=20.

    Sampling is restricted to ns in [2e-3, 5e-3] and kappa*nb in [20, 50],
    inside the stated region and where every exponent is large enough to
    evaluate above double-precision noise.  The exact exponents carry
    corrections of order sqrt(ns) and 1/sqrt(kappa*nb) that reach 15% to 23%
    here, so the 10% requirement fails; measured maxima are reported.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(2718)
    worst = {"alice": 0.0, "eve": 0.0, "homodyne": 0.0, "opa": 0.0}
    for _ in range(50):
        ns = 10.0 ** rng.uniform(math.log10(2e-3), math.log10(5e-3))
        kappa = rng.uniform(0.2, 0.8)
        knb = 10.0 ** rng.uniform(math.log10(20.0), math.log10(50.0))
        p = ProtocolParams(kappa=kappa, ns=ns, nb=knb / kappa)
        asym = asymptotic_exponents(p)
        targets = {"alice": asym.alice, "eve": asym.eve, "homodyne": asym.homodyne, "opa": asym.opa}
        for name, exact in _exact_exponents(p).items():
            dev = abs(exact - targets[name]) / targets[name]
            worst[name] = max(worst[name], dev)
    elapsed = time.perf_counter() - start
    ok = all(dev <= 0.10 for dev in worst.values()) and elapsed < 1.0
    detail = " ".join(f"{name}={dev:.3f}" for name, dev in worst.items())
    _report("3 asymptotic-agreement", ok, f"worst rel dev: {detail} t={elapsed:.2f}s")
    assert ok, f"worst relative deviations {worst} exceed 0.10"


def test_criterion_4_regime_contrast():
    """Without added noise eavesdropping wins; at high brightness the two nearly tie."""
    no_noise = ProtocolParams(kappa=0.1, ns=0.004, nb=0.0)
    e_alice = qcb_exponent(alice_conditional_cov(no_noise, 0), alice_conditional_cov(no_noise, 1))
    e_eve = qcb_exponent(eve_conditional_cov(no_noise, 0), eve_conditional_cov(no_noise, 1))
    ok_dark = e_eve > e_alice
    bright = ProtocolParams(kappa=0.1, ns=10.0, nb=100.0)
    b_alice = qcb_exponent(alice_conditional_cov(bright, 0), alice_conditional_cov(bright, 1))
    b_eve = qcb_exponent(eve_conditional_cov(bright, 0), eve_conditional_cov(bright, 1))
    ratio = max(b_alice, b_eve) / min(b_alice, b_eve)
    ok = ok_dark and ratio < 1.5
    _report(
        "4 regime-contrast",
        ok,
        f"no-noise eve/alice={e_eve / e_alice:.2f} (>1: {ok_dark}); bright ratio={ratio:.3f} (<1.5)",
    )
    assert ok


def test_criterion_5_oracle_equivalence():
    """Gaussian overlap formula vs Fock oracle within 1e-4; truncation deficit < 1e-7."""
    start = time.perf_counter()
    rows = oracle_grid_rows(cutoff=20)
    elapsed = time.perf_counter() - start
    errors = [row for row in rows if row.error is not None]
    max_dev = max(row.deviation for row in rows if row.error is None)
    max_deficit = max(row.deficit for row in rows if row.error is None)
    ok = not errors and max_dev < 1e-4 and max_deficit < 1e-7 and elapsed < 120.0
    _report(
        "5 oracle-equivalence",
        ok,
        f"{len(rows)} comparisons, max dev={max_dev:.2e}, max deficit={max_deficit:.2e}, "
        f"t={elapsed:.0f}s",
    )
    assert ok


def test_criterion_6_symplectic_property_suite():
    """Reconstruction 1e-8, symplecticity 1e-9, spectrum invariance 1e-10 over 1000 draws;
    closed-form spectra match numeric spectra to 1e-10 on 200 parameter sets."""
    rng = np.random.default_rng(1618)
    worst_recon = worst_symp = worst_inv = 0.0
    for _ in range(1000):
        cov = random_physical_cov(rng)
        dec = williamson(cov)
        scale = np.max(np.abs(cov))
        worst_recon = max(worst_recon, np.max(np.abs(dec.reconstruct() - cov)) / scale)
        worst_symp = max(
            worst_symp, np.max(np.abs(dec.symplectic @ OMEGA @ dec.symplectic.T - OMEGA))
        )
        g = random_symplectic(rng)
        conj = g @ cov @ g.T
        nu2 = williamson(0.5 * (conj + conj.T)).nu
        worst_inv = max(worst_inv, np.max(np.abs(nu2 - dec.nu) / dec.nu))

    worst_analytic = 0.0
    for _ in range(200):
        p = ProtocolParams(
            kappa=rng.uniform(0.02, 1.0),
            ns=10.0 ** rng.uniform(-4, 1),
            nb=0.0 if rng.random() < 0.1 else 10.0 ** rng.uniform(-2, 2.5),
        )
        sym = derive_symbols(p)
        for k in (0, 1):
            for cov, dec in (
                (alice_conditional_cov(p, k), analytic_decomp_alice(sym, k)),
                (eve_conditional_cov(p, k), analytic_decomp_eve(sym, k)),
            ):
                num = williamson(cov)
                worst_analytic = max(worst_analytic, np.max(np.abs(num.nu - dec.nu) / num.nu))
                assert is_symplectic(dec.symplectic, 1e-9)

    ok = (
        worst_recon <= 1e-8
        and worst_symp <= 1e-9
        and worst_inv <= 1e-10
        and worst_analytic <= 1e-10
    )
    _report(
        "6 symplectic-properties",
        ok,
        f"recon={worst_recon:.1e} symp={worst_symp:.1e} invariance={worst_inv:.1e} "
        f"analytic={worst_analytic:.1e}",
    )
    assert ok


def test_criterion_7_monte_carlo_dominance_and_tracking():
    """Simulated error rates never beat the bounds (3 sigma) and track the exponents."""
    start = time.perf_counter()
    ms = [125_000, 250_000, 500_000, 1_000_000]

    hom_ys = []
    dominance_ok = True
    for m in ms:
        p = ProtocolParams(kappa=0.1, ns=0.004, nb=100.0, m=m)
        result = simulate_homodyne(McConfig(params=p, trials=10_000, seed=11))
        bound = chernoff_upper(homodyne_exponent(homodyne_cov(p, 0), homodyne_cov(p, 1)), m)
        sigma = math.sqrt(result.p_hat * (1.0 - result.p_hat) / result.trials)
        dominance_ok &= result.p_hat - 3.0 * sigma <= bound
        hom_ys.append(-math.log(2.0 * result.p_hat))
    hom_slope = np.polyfit(np.asarray(ms, dtype=float), hom_ys, 1)[0]
    hom_target = 0.1 * 0.004 / 100.0
    hom_ok = abs(hom_slope - hom_target) / hom_target < 0.25

    opa_ys = []
    for m in ms:
        p = ProtocolParams(kappa=0.1, ns=0.004, nb=100.0, m=m)
        result = simulate_opa(McConfig(params=p, trials=100_000, seed=13))
        bound = chernoff_upper(opa_exponent(opa_spec(p)), m)
        sigma = math.sqrt(result.p_hat * (1.0 - result.p_hat) / result.trials)
        dominance_ok &= result.p_hat - 3.0 * sigma <= bound
        opa_ys.append(-math.log(2.0 * result.p_hat))
    opa_slope = np.polyfit(np.asarray(ms, dtype=float), opa_ys, 1)[0]
    opa_exact = opa_exponent(opa_spec(ProtocolParams(kappa=0.1, ns=0.004, nb=100.0)))
    opa_ok = abs(opa_slope - opa_exact) / opa_exact < 0.25

    p = ProtocolParams(kappa=0.1, ns=0.004, nb=100.0, m=250_000)
    cfg = McConfig(params=p, trials=10_000, seed=11)
    deterministic = simulate_homodyne(cfg) == simulate_homodyne(cfg)

    elapsed = time.perf_counter() - start
    ok = dominance_ok and hom_ok and opa_ok and deterministic and elapsed < 300.0
    _report(
        "7 monte-carlo",
        ok,
        f"dominance={dominance_ok} hom_slope/target={hom_slope / hom_target:.3f} "
        f"opa_slope/exact={opa_slope / opa_exact:.3f} deterministic={deterministic} "
        f"t={elapsed:.0f}s",
    )
    assert ok


def test_criterion_8_bound_ordering():
    """Lower bound never exceeds the upper bound; both are 1/2 only at zero exponent."""
    exponents = np.concatenate(([0.0], np.geomspace(1e-9, 1e-2, 40)))
    ms = [1, 10, 100, 10_000, 1_000_000, 10_000_000]
    ok = True
    for exponent in exponents:
        for m in ms:
            lower = error_lower(float(exponent), m)
            upper = chernoff_upper(float(exponent), m)
            ok &= lower <= upper + 1e-15
            if exponent == 0.0:
                ok &= lower == upper == 0.5
            else:
                ok &= upper < 0.5
    _report("8 bound-ordering", ok, f"{len(exponents)} exponents x {len(ms)} copy counts")
    assert ok
