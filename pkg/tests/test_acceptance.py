"""Acceptance criteria: one test per criterion, each reporting a PASS/FAIL line."""

import time

import numpy as np

from chiralchain import core, gaussian
from chiralchain.core import ModelParams
from chiralchain.dynamics import (
    delta_correlation,
    delta_correlation_analytic,
    entropy_growth,
    entropy_series,
    growth_scaling,
    relaxation_exponent,
    steady_profile,
)
from chiralchain.entanglement import block_entropy, central_charge_fit
from chiralchain.gaussian import QuenchSetup
from chiralchain.numerics import kink_detect, pfaffian
from chiralchain.oracle import ed_build, ed_hopping, ed_observables
from chiralchain.spincorr import (
    chiral_order,
    correlation_profile,
    decay_exponent,
    mutual_information,
    spin_correlator,
    spin_observables,
    two_site_density,
)

from conftest import nondegenerate_systems, random_antisymmetric, random_params

CORRELATION_TABLE = [
    # D, h, alpha, I_R exponent, C^xx_R exponent, gapless
    (1.5, 0.5, 0.5, 0.25, 0.3, False),
    (1.5, 0.5, 0.8, 1.0, 0.45, True),
    (1.5, 0.5, 1.3, 1.0, 0.46, True),
    (2.5, -0.5, 0.5, 0.4, 0.5, False),
    (2.5, -0.5, 0.8, 1.5, 1.2, False),
    (2.5, -0.5, 1.3, 1.0, 0.45, True),
]
FIG5 = ModelParams(1.0, 1.3, -0.5, 1.1, 30000)
FIG6 = ModelParams(1.0, 1.3, -0.5, 1.1, 512)
FIG7_AC = ModelParams(1.0, 1.3, -0.5, 1.1, 512)
FIG7_DE = ModelParams(0.5, 2.5, -0.5, 0.5, 512)
R_WINDOW = (3, 64)  # R in [4, N/8] at N = 512


def test_1_oracle_equivalence(report):
    start = time.perf_counter()
    worst = {k: 0.0 for k in ("energy", "corr", "rho", "entropy", "chiral", "dynamics")}
    rng = np.random.default_rng(1)
    for p, system in nondegenerate_systems(2024, 50):
        state = gaussian.ground_state(p)
        worst["energy"] = max(worst["energy"], abs(gaussian.energy(state) - system.ground_energy))
        obs = spin_observables(state)
        con = gaussian.Contractions(state, 4)
        for r in range(1, 5):
            ed = ed_observables(system, r, r)
            errs = [abs(obs.mz - ed.mz)] + [abs(obs.corr(k, r) - ed.corr[k]) for k in ("xx", "yy", "zz", "xy", "yx")]
            worst["corr"] = max(worst["corr"], *errs)
            worst["rho"] = max(worst["rho"], np.abs(two_site_density(state, r, con) - ed.rho).max())
            worst["entropy"] = max(
                worst["entropy"],
                abs(block_entropy(state, r) - ed.block_entropy),
                abs(mutual_information(state, r, con) - ed.mutual_information),
            )
        worst["chiral"] = max(worst["chiral"], abs(chiral_order(state) - ed_observables(system, 1, 1).chiral_order))
        post = random_params(rng)
        post_system = ed_build(post)
        for t in (0.5, 1.0, 5.0):
            psi = post_system.evolve(system.ground_vector, t)
            c_d, _ = gaussian.two_point(gaussian.evolve_state(state, post, t), np.arange(4))
            for d in range(4):
                worst["dynamics"] = max(worst["dynamics"], abs(ed_hopping(post_system, 1, 1 + d, psi) - c_d[d]))
    tol = {"energy": 1e-10, "corr": 1e-8, "rho": 1e-8, "entropy": 1e-8, "chiral": 1e-9, "dynamics": 1e-8}
    ok = all(worst[k] <= tol[k] for k in tol)
    details = ", ".join(f"{k} {worst[k]:.1e}" for k in worst)
    report(1, "oracle equivalence (50 instances, N=8)", ok, details, time.perf_counter() - start, 120)


def _kink_of_cxx1(params, hs):
    c1 = np.array([spin_correlator(gaussian.ground_state(params.with_(h=h)), "x", "x", 1) for h in hs])
    return kink_detect(hs, np.gradient(c1, hs))


def test_2_nn_limit_criticality(report):
    start = time.perf_counter()
    ising = ModelParams(1.0, 0.0, 1.0, 500.0, 512)
    hs = np.round(np.arange(0.5, 1.5 + 1e-9, 0.005), 10)
    gaps = np.array([core.gap(ising.with_(h=h)) for h in hs])
    h_gap = hs[np.argmin(gaps)]
    h_pos = _kink_of_cxx1(ising, hs)
    lr = ModelParams(1.0, 0.0, -0.5, 2.0, 512)
    hs_neg = np.round(np.arange(-1.0, 0.0 + 1e-9, 0.005), 10)
    h_neg = _kink_of_cxx1(lr, hs_neg)
    target_neg = -1 + 2 ** (1 - lr.alpha)
    ok = abs(h_gap - 1.0) <= 0.005 and abs(h_pos - 1.0) <= 0.02 and abs(h_neg - target_neg) <= 0.02
    details = f"gap minimum at h={h_gap:g}, kink h>0 at {h_pos:g} (1.0), kink h<0 at {h_neg:g} ({target_neg:g})"
    report(2, "NN-limit criticality", ok, details, time.perf_counter() - start, 300)


def test_3_gapless_chiral_region(report):
    start = time.perf_counter()
    base = ModelParams(0.5, 0.0, -0.5, 1.0, 512)
    alphas = np.linspace(0.25, 3.0, 30)
    ds = np.linspace(0.0, 2.5, 30)
    gap = np.empty((30, 30))
    ch = np.empty((30, 30))
    for i, a in enumerate(alphas):
        for j, d in enumerate(ds):
            p = base.with_(alpha=float(a), d=float(d))
            gap[i, j] = core.gap(p)
            ch[i, j] = chiral_order(gaussian.ground_state(p))
    a_ok = bool(np.all(gap[:, ds < base.gamma] > 0))
    region = (gap > 0) & (ds[None, :] > base.gamma) & (alphas[:, None] < 2)
    b_ok = bool(region.any())
    gapless = gap == 0
    chiral = np.abs(ch) > 1e-6
    mismatch = int(np.sum(chiral != gapless))
    c_ok = mismatch == 0
    details = (
        f"(a) gapped for all D<gamma: {a_ok}; (b) gapped points with D>gamma, alpha<2: {int(region.sum())}; "
        f"(c) CH/gap mismatches: {mismatch} of 900 ({int(gapless.sum())} gapless)"
    )
    report(3, "gapless and chiral regions (30x30 grid)", a_ok and b_ok and c_ok, details, time.perf_counter() - start, 900)


def test_4_correlation_table(report):
    start = time.perf_counter()
    rows = []
    misses = []
    rows_ok = 0
    for d, h, alpha, i_target, c_target, gapless in CORRELATION_TABLE:
        p = ModelParams(0.5, d, h, alpha, 512)
        r, mi, cxx = correlation_profile(gaussian.ground_state(p), 64)
        i_exp = decay_exponent(r, mi, R_WINDOW).exponent
        c_exp = decay_exponent(r, cxx, R_WINDOW).exponent
        rows.append((i_exp, c_exp, gapless))
        rows_ok += abs(i_exp - i_target) <= 0.1 and abs(c_exp - c_target) <= 0.1
        for name, got, want in (("I", i_exp, i_target), ("Cxx", c_exp, c_target)):
            if abs(got - want) > 0.1:
                misses.append(f"D={d} a={alpha} {name} {got:.3f} vs {want}")
    chiral_rows = [r for r in rows if r[2]]
    spread_i = max(r[0] for r in chiral_rows) - min(r[0] for r in chiral_rows)
    spread_c = max(r[1] for r in chiral_rows) - min(r[1] for r in chiral_rows)
    prop2 = spread_i <= 0.1 and spread_c <= 0.1
    ok = not misses and prop2
    details = (
        f"{rows_ok}/6 rows within 0.1; "
        f"gapless spread I {spread_i:.3f}, Cxx {spread_c:.3f}; misses: {'; '.join(misses) or 'none'}"
    )
    report(4, "correlation-table exponents", ok, details, time.perf_counter() - start, 1200)


def test_5_central_charge(report):
    start = time.perf_counter()
    c_ising = central_charge_fit(ModelParams(1.0, 0.0, 1.0, 3.0, 512)).slope
    c_dm = central_charge_fit(ModelParams(1.0, 1.3, 1.0, 3.0, 512)).slope
    grid = [central_charge_fit(ModelParams(1.0, 0.0, 1.0, a, 512)).slope for a in (1.1, 1.3, 1.5, 1.7, 1.9)]
    monotone = bool(np.all(np.diff(grid) > 0))
    ok = abs(c_ising - 0.5) <= 0.05 and abs(c_dm - 1.0) <= 0.1 and monotone
    details = (
        f"D=0: {c_ising:.4f} (0.5); D=1.3: {c_dm:.4f} (1.0); "
        f"alpha 1.1..1.9: {', '.join(f'{c:.3f}' for c in grid)} monotone={monotone}"
    )
    report(5, "central charge", ok, details, time.perf_counter() - start, 600)


def test_6_relaxation_exponents(report):
    start = time.perf_counter()
    window = (100.0, 1000.0)
    niii = relaxation_exponent(delta_correlation(QuenchSetup.alpha_quench(FIG5, 1.1, 2.1)), window)
    qii = relaxation_exponent(delta_correlation(QuenchSetup.alpha_quench(FIG5, 2.1, 1.1)), window)
    rng = np.random.default_rng(6)
    worst = 0.0
    done = 0
    while done < 10:
        pre, post = random_params(rng, 128), random_params(rng, 128)
        if core.gap(pre) <= 0.05:
            continue
        setup = QuenchSetup(pre, post)
        times = np.sort(rng.uniform(0, 200, 10))
        direct = delta_correlation(setup, 1, 2, times).values
        analytic = delta_correlation_analytic(setup, 1, 2, times)
        worst = max(worst, np.abs(analytic - direct).max() / np.abs(direct).max())
        done += 1
    ok = abs(niii.exponent - 1.5) <= 0.15 and abs(qii.exponent - 0.3) <= 0.1 and worst <= 1e-4
    details = (
        f"niii chi {niii.exponent:.3f} (1.5, r2 {niii.r2:.2f}); qii chi {qii.exponent:.3f} (0.3, r2 {qii.r2:.2f}); "
        f"analytic vs direct {worst:.1e} relative"
    )
    report(6, "relaxation exponents", ok, details, time.perf_counter() - start, 1200)


def test_7_steady_state_profiles(report):
    start = time.perf_counter()
    quenches = [(1.1, 2.1), (2.1, 1.1), (1.1, 1.2), (2.1, 2.5)]
    exps = {}
    for ai, aq in quenches:
        setup = QuenchSetup.alpha_quench(FIG6, ai, aq)
        r, mi, cxx = steady_profile(setup, 64)
        gapless_post = core.gap(setup.post) == 0
        exps[(ai, aq)] = (
            decay_exponent(r, mi, R_WINDOW).exponent,
            decay_exponent(r, cxx, R_WINDOW).exponent,
            gapless_post,
        )
    gapless = [k for k, v in exps.items() if v[2]]
    gapped = [k for k, v in exps.items() if not v[2]]
    ratios = []
    for a in gapless:
        for b in gapped:
            ratios.append(min(exps[a][0] / exps[b][0], exps[a][1] / exps[b][1]))
    ok = bool(gapless and gapped and min(ratios) >= 2)
    desc = "; ".join(
        f"{ai}->{aq} {'gapless' if v[2] else 'gapped'}-post I {v[0]:.2f} Cxx {v[1]:.2f}" for (ai, aq), v in exps.items()
    )
    details = f"{desc}; smallest gapless/gapped ratio {min(ratios):.2f} (need >= 2)"
    report(7, "steady-state profiles", ok, details, time.perf_counter() - start, 900)


def test_8_entropy_growth(report):
    start = time.perf_counter()
    times = np.linspace(0.0, 160.0, 161)
    l = 80
    series = {
        "a": entropy_growth(QuenchSetup.alpha_quench(FIG7_AC, 1.1, 2.1), l, times),
        "b": entropy_growth(QuenchSetup.alpha_quench(FIG7_AC, 2.1, 1.1), l, times),
        "c": entropy_growth(QuenchSetup.alpha_quench(FIG7_AC, 1.1, 1.2), l, times),
        "d": entropy_growth(QuenchSetup.alpha_quench(FIG7_DE, 0.5, 2.5), l, times),
        "e": entropy_growth(QuenchSetup.alpha_quench(FIG7_DE, 2.5, 0.5), l, times),
    }
    t_sat = series["d"].saturation_time
    sat_ok = abs(t_sat - l / 2) <= 0.15 * l / 2
    control = entropy_series(QuenchSetup(FIG7_DE, FIG7_DE), l, times)
    control_ok = np.ptp(control) <= 1e-8
    pairs = [("a", "b"), ("d", "e"), ("a", "c")]
    scaling = {pair: growth_scaling([series[pair[0]], series[pair[1]]]) for pair in pairs}
    scaling_ok = all(s.spread <= 2 for s in scaling.values())
    desc = ", ".join(f"({p[0]},{p[1]}) {s.branch} spread {s.spread:.1f}" for p, s in scaling.items())
    slopes = ", ".join(f"{k} {v.slope:.4f}" for k, v in series.items())
    details = (
        f"saturation {t_sat:g} (40 +- 6); control ptp {np.ptp(control):.1e}; "
        f"a1 spread per pair {desc} (need <= 2); slopes {slopes}"
    )
    ok = sat_ok and control_ok and scaling_ok
    report(8, "entropy growth", ok, details, time.perf_counter() - start, 900)


def test_9_numerics_kernels(report):
    start = time.perf_counter()
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(500):
        a = random_antisymmetric(rng, 8)
        det = np.linalg.det(a)
        worst = max(worst, abs(pfaffian(a) ** 2 - det) / abs(det))
    worst4 = 0.0
    for _ in range(100):
        a = random_antisymmetric(rng, 4)
        closed = a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
        worst4 = max(worst4, abs(pfaffian(a) - closed))
    ok = worst <= 1e-8 and worst4 <= 1e-12
    details = f"pf^2 vs det worst relative {worst:.1e}; 4x4 closed form worst {worst4:.1e}"
    report(9, "numerics kernels", ok, details, time.perf_counter() - start, 10)
