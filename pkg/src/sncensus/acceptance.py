"""Acceptance suite: every release criterion as a runnable check.

Each criterion function either returns a details dict or raises
AssertionError; the runner times it against its stated budget.  Expected
values marked as oracle-derived are computed by the self-contained brute
-force oracles in this module, never by the code paths under test.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import census as census_mod
from . import constants as constants_mod
from . import densities, ffpoly, galois, primes, resolvent, sievestats
from .ofield import OPoly, preset

# Frozen calibration constants.  The decay ratio cap is twice the largest
# value observed on the committed grid (~2.08 at N=10); the sieve and
# large-sieve caps are stated directly by the criteria.
DECAY_RATIO_CAP = 4.0
MEAN_SQUARE_CAP = 10.0
LARGE_SIEVE_CAP = 16.0
SLOPE_TOLERANCE = 0.2


# -- brute-force oracles (independent of the library counting paths) -------------


def oracle_cubic_census_q(N: int):
    """Literal enumeration of monic cubics over Z with height <= N: totals,
    reducible count, zero/unit T-counts and the zero-sum L-count."""
    rng = range(-N, N + 1)
    total = 0
    reducible = 0
    t_counts = {0: 0, 1: 0, -1: 0}
    l_zero = 0
    root_range = range(-(N + 1), N + 2)
    for a in rng:
        for b in rng:
            for c in rng:
                total += 1
                if any(((t + a) * t + b) * t + c == 0 for t in root_range):
                    reducible += 1
                for nu in t_counts:
                    t = -nu
                    if ((t + a) * t + b) * t + c == 0:
                        t_counts[nu] += 1
                if a + b + c == 0:
                    l_zero += 1
    return {"total": total, "reducible": reducible, "T": t_counts,
            "L0": l_zero}


def oracle_root_count_mod_p(coeffs_desc, p):
    out = 0
    for t in range(p):
        acc = 0
        for c in coeffs_desc:
            acc = (acc * t + c) % p
        if acc == 0:
            out += 1
    return out


# -- criteria ---------------------------------------------------------------------


def crit_density_identities():
    """Exact density identities and brute-force agreement, n <= 8."""
    for n in range(1, 9):
        types = ffpoly.all_splitting_types(n)
        total = sum(densities.delta_r(t).value for t in types)
        fixed = sum(t.r[0] * densities.delta_r(t).value for t in types)
        assert total == 1, f"sum delta_r != 1 at n={n}: {total}"
        assert fixed == 1, f"sum r_1 delta_r != 1 at n={n}: {fixed}"
    for n in range(2, 9):
        dt, dtb = densities.delta_T(n).value, densities.delta_T_brute(n).value
        dp, dpb = densities.delta_P(n).value, densities.delta_P_brute(n).value
        assert dt == dtb, f"delta_T mismatch at n={n}: {dt} vs {dtb}"
        assert dp == dpb, f"delta_P mismatch at n={n}: {dp} vs {dpb}"
        T, P = densities.type_sets(n)
        assert sum(densities.delta_r(t).value for t in T) == dt
        assert sum(densities.delta_r(t).value for t in P) == dp
    return {"n_max": 8}


def crit_finite_field_counts():
    """|count_type - delta(r) q^n| <= n^2 q^(n-1) on the full desk grid."""
    worst = 0.0
    for q in (2, 3, 5, 7, 9):
        F = ffpoly.make_fq(q)
        for n in (2, 3, 4):
            counts = ffpoly.count_all_types(F, n)
            sq_total = sum(v for k, v in counts.items() if k is not None)
            assert sq_total == q**n - q**(n - 1), \
                f"squarefree total off at q={q}, n={n}"
            for r in ffpoly.all_splitting_types(n):
                cnt = counts.get(r, 0)
                dev = abs(cnt - float(densities.delta_r(r).value) * q**n)
                cap = n * n * q ** (n - 1)
                worst = max(worst, dev / cap)
                assert dev <= cap, \
                    f"count deviation {dev} > {cap} at q={q}, n={n}, r={r.r}"
    return {"worst_fraction_of_cap": round(worst, 4)}


def crit_census_exactness():
    """Census counters against the committed brute-force oracle at N = 1."""
    oracle = oracle_cubic_census_q(1)
    Q = preset("Q")
    spec = census_mod.CensusSpec(Q, 3, 1)
    assert spec.population == oracle["total"] == 27
    rho_k, rho_val = census_mod.rho(spec)
    assert rho_val == oracle["reducible"] == 15
    assert rho_k[1] == 15, "cubic reducibility is linear-factor reducibility"
    rho_k2, rho2 = census_mod.rho(spec, exhaustive=True)
    assert (rho_k2, rho2) == (rho_k, rho_val), "fast and exhaustive rho differ"
    assert census_mod.L_count(spec, 0) == oracle["L0"] == 7
    t0 = census_mod.T_count(spec, Q.zero())
    t1 = census_mod.T_count(spec, Q.from_int(1))
    assert t0 == oracle["T"][0] == 9
    # the oracle count for T(1) is 6: the quotient pair (b1, b0) = (-2, 1),
    # i.e. f = (X+1)(X-1)^2, lies outside the +-1 coefficient box sometimes
    # quoted for this example
    assert t1 == oracle["T"][1] == 6
    assert census_mod.T_count(spec, Q.from_int(-1)) == oracle["T"][-1] == 6
    return {"total": spec.population, "rho": rho_val, "T0": t0, "T1": t1,
            "L0": oracle["L0"]}


def crit_theorem3_trend():
    """Reducible-count ratio versus the assembled constant formula."""
    Q = preset("Q")
    report = constants_mod.theorem3_compare(Q, 3, [50, 100, 200, 300])
    assert report["ratio_monotone"], \
        f"rho/N^2 not monotone: {[r['ratio'] for r in report['rows']]}"
    assert report["gap_decreasing"], \
        f"formula gap not decreasing: {[r['gap'] for r in report['rows']]}"
    final = report["rows"][-1]
    assert final["relative_gap"] < 0.10, \
        f"relative gap {final['relative_gap']:.3f} >= 10% at N=300"
    dval, _, _ = constants_mod.d_nk(Q, 3, 10**6)
    target = 2 * (math.pi**2 / 6 - 1)
    assert abs(dval - target) < 1e-3, f"D_3 partial sum {dval} vs {target}"
    return {"ratios": [round(r["ratio"], 5) for r in report["rows"]],
            "gaps": [round(r["gap"], 5) for r in report["rows"]],
            "relative_gap_at_300": round(final["relative_gap"], 5),
            "A_hat": report["A_hat"]}


def crit_knd_volumes():
    """Exact slab-integration volumes against lattice-count estimates."""
    k31, est31 = constants_mod.k_nd(3, 1)
    assert k31 == Fraction(3), f"k_31 = {k31}"
    k41, est41 = constants_mod.k_nd(4, 1)
    assert k41 == Fraction(16, 3), f"k_41 = {k41}"
    k32, est32 = constants_mod.k_nd(3, 2)
    assert k32 == Fraction(9), f"k_32 = {k32}"
    out = {}
    for name, exact, est in (("31", k31, est31), ("41", k41, est41),
                             ("32", k32, est32)):
        rel = abs(est - float(exact)) / float(exact)
        assert rel < 0.03, f"lattice estimate off by {rel:.4f} for k_{name}"
        out[f"k_{name}"] = [str(exact), round(est, 5)]
    return out


def crit_sieve_mean_square():
    """Mean-square deviation window and exceptional-set bound, n = 2."""
    Q = preset("Q")
    out = {}
    for N in (20, 40, 80):
        x = sievestats.default_x(Q, N)
        spec = census_mod.CensusSpec(Q, 2, N)
        rep = sievestats.deviation_sweep(spec, (2, 0), x)
        assert rep.ratio <= MEAN_SQUARE_CAP, \
            f"mean-square ratio {rep.ratio:.3f} > {MEAN_SQUARE_CAP} at N={N}"
        out[f"N={N}"] = {"x": x, "ratio": round(rep.ratio, 4),
                         "exceptional": rep.exceptional_count}
        if N == 80:
            frac = rep.exceptional_count / rep.population
            assert frac < 0.01, f"exceptional fraction {frac:.4f} >= 1%"
    return out


def crit_large_sieve():
    """Brute-force character-sum ratio stays under the frozen constant."""
    out = {}
    for label in ("Q", "Q(i)"):
        K = preset(label)
        rep = sievestats.large_sieve_check(K, 1, 10, 16, 100, seed=42)
        assert rep.max_ratio <= LARGE_SIEVE_CAP, \
            f"{label}: max ratio {rep.max_ratio:.3f} > {LARGE_SIEVE_CAP}"
        out[label] = round(rep.max_ratio, 4)
    return out


def crit_certification_soundness():
    """Exhaustive certify-vs-classifier agreement for cubics of height <= 3."""
    Q = preset("Q")
    spec = census_mod.CensusSpec(Q, 3, 3)
    checked = 0
    for f in census_mod.enumerate_polys(spec):
        cert = galois.certify_sn(f, x_max=500)
        if census_mod.is_reducible(f):
            assert cert.verdict == "proven_not_sn", f"{f!r}: {cert}"
            continue
        label = galois.classify_small(f)
        assert cert.verdict != "undecided", f"undecided irreducible {f!r}"
        assert (cert.verdict == "proven_sn") == (label == "S3"), \
            f"unsound certificate for {f!r}: {cert.verdict} vs {label}"
        checked += 1
    return {"population": spec.population, "irreducible_checked": checked}


def crit_non_sn_decay():
    """Non-full-group counts against the N^(5/2) log N envelope."""
    Q = preset("Q")
    rows = []
    for N in (10, 20, 40, 80):
        spec = census_mod.CensusSpec(Q, 3, N)
        rep = galois.non_sn_census(spec)
        count = rep["non_sn_total"]
        envelope = N**2.5 * math.log(N)
        rows.append((N, count, count / envelope))
        assert rep["undecided"] == 0
    for N, count, ratio in rows:
        assert ratio <= DECAY_RATIO_CAP, \
            f"count/envelope {ratio:.3f} > {DECAY_RATIO_CAP} at N={N}"
    slope = (math.log(rows[-1][1] / rows[0][1])
             / math.log(rows[-1][0] / rows[0][0]))
    assert slope <= 2.5 + SLOPE_TOLERANCE, f"decay slope {slope:.3f} > 2.7"
    return {"rows": [(N, c, round(r, 4)) for N, c, r in rows],
            "slope": round(slope, 4)}


def crit_theorem2_exponent():
    """Cyclic-cubic count exponent and exhaustive dual-route agreement."""
    Q = preset("Q")
    rep = resolvent.theorem2_sweep(Q, 3, resolvent.A3_GENERATORS,
                                   [25, 50, 100, 200])
    assert rep["slope"] <= 2.5 + SLOPE_TOLERANCE, \
        f"fitted slope {rep['slope']:.3f} > 2.7"
    checked, mismatches = resolvent.a3_agreement_sweep(Q, 25)
    assert mismatches == 0, f"{mismatches} resolvent/disc disagreements"
    return {"slope": round(rep["slope"], 4),
            "counts": rep["rows"], "agreement_checked": checked}


def crit_resolvent_integrality():
    """Rounding residuals on random cubics and the exhaustive root test."""
    rng = random.Random(11)
    max_residual = 0.0
    for label in ("Q", "Q(i)"):
        K = preset(label)
        d = K.degree
        built = 0
        while built < 100:
            coords = [[rng.randint(-10, 10) for _ in range(d)]
                      for _ in range(3)]
            f = OPoly(K, [K.element(c) for c in coords])
            if resolvent.poly_disc(f).is_zero():
                continue
            res = resolvent.build_resolvent(f, resolvent.A3_GENERATORS)
            max_residual = max(max_residual, res.residual)
            built += 1
    assert max_residual < 1e-6, f"max residual {max_residual:.2e}"

    Q = preset("Q")
    spec = census_mod.CensusSpec(Q, 3, 2)
    checked = 0
    for f in census_mod.enumerate_polys(spec):
        if census_mod.is_reducible(f):
            continue
        res = resolvent.build_resolvent(f, resolvent.A3_GENERATORS)
        has_root = resolvent.resolvent_has_ok_root(res)
        disc_square = galois.is_square_in_ok(resolvent.poly_disc(f)) is not None
        assert has_root == disc_square, f"mismatch at {f!r}"
        checked += 1
    return {"max_residual": max_residual, "exhaustive_checked": checked}


def crit_iterated_disc():
    """Symbolic iterated discriminant of the depressed cubic family."""
    a1 = sympy.Symbol("a1")
    D = resolvent.iterated_disc(3, coeffs={2: 0})
    assert sympy.expand(D + 432 * a1**3) == 0, f"D = {D}"
    assert resolvent.iterated_disc_resultant_identity(3)
    return {"D": str(D)}


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    elapsed: float
    budget: float
    details: object


CRITERIA = [
    (1, "density-identities", 10.0, crit_density_identities),
    (2, "finite-field-counts", 60.0, crit_finite_field_counts),
    (3, "census-exactness", 1.0, crit_census_exactness),
    (4, "theorem3-trend", 600.0, crit_theorem3_trend),
    (5, "knd-volumes", 60.0, crit_knd_volumes),
    (6, "sieve-mean-square", 300.0, crit_sieve_mean_square),
    (7, "large-sieve-numeric", 120.0, crit_large_sieve),
    (8, "certification-soundness", 60.0, crit_certification_soundness),
    (9, "non-sn-decay", 300.0, crit_non_sn_decay),
    (10, "theorem2-exponent", 600.0, crit_theorem2_exponent),
    (11, "resolvent-integrality", 60.0, crit_resolvent_integrality),
    (12, "iterated-discriminant", 1.0, crit_iterated_disc),
]


def run_criterion(cid: int) -> CriterionResult:
    for c, name, budget, fn in CRITERIA:
        if c == cid:
            start = time.perf_counter()
            try:
                details = fn()
                elapsed = time.perf_counter() - start
                passed = elapsed < budget
                if not passed:
                    details = {"error": f"runtime {elapsed:.1f}s over budget "
                                        f"{budget}s", "details": details}
            except AssertionError as exc:
                elapsed = time.perf_counter() - start
                return CriterionResult(cid, name, False, elapsed, budget,
                                       {"error": str(exc)})
            return CriterionResult(cid, name, passed, elapsed, budget, details)
    raise KeyError(f"no criterion {cid}")


def run_all(only=None):
    results = []
    for cid, name, budget, fn in CRITERIA:
        if only and cid not in only:
            continue
        results.append(run_criterion(cid))
    return results
