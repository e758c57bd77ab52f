"""Acceptance suite: ten numbered criteria, each a self-contained check.

Each criterion builds its own data at a guard precision a few digits above
the declared target so that the assertion tolerances quoted in its docstring
refer to the target precision, not to whatever survives intermediate
divisions.  Every function returns a report dict and raises CriterionFailure
with the first failing assertion.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from . import linalg
from .dpseries import DPSeries, coaction, log_t, sen_theta, solve_theta
from .field import cyclotomic_field, eisenstein_field, qp_field, scalar_embedding, trace_to_Qp
from .gamma import (build_level, dense_solve, g_minus_one, kernel_check,
                    neumann_invert, rho_bound, symmetric_range)
from .padic import PadicScalar, padic_log
from .picard import boundary, functoriality_check, in_picard_image, kernel_lattice, witness_of_order
from .senmod import (SenModule, bk_twist, char_poly_of_twist_via_resultant,
                     cohomology, nearly_ht_test, operator_series,
                     operator_series_apply, regular_representation, trivial_module)


class CriterionFailure(AssertionError):
    pass


def _require(cond, message):
    if not cond:
        raise CriterionFailure(message)


def _ramified_base(prec):
    """K = Q_3(sqrt 3), the ramified quadratic used throughout the suite."""
    return eisenstein_field(3, [-3, 0, 1], prec)


def _random_element(field, rng, span=3 ** 6):
    grid = [[PadicScalar.from_int(rng.randrange(-span, span), field.p, field.prec)
             for _ in range(field.e_ram)] for _ in range(field.f)]
    return field.from_grid(grid)


def _random_admissible_b(field, rng):
    """Random b with v(b) >= 1, mixing rational and uniformizer parts."""
    return field.from_int(field.p * rng.randrange(1, 50)) + \
        field.pi * field.from_int(field.p * rng.randrange(0, 50))


# ---------------------------------------------------------------------------

def criterion_1():
    """theta of the degree-wise preimage returns the input through degree
    N-1, and the kernel of theta on the truncation is exactly the constants.
    K = Q_3(sqrt 3), truncation 24, precision 40; 20 random integral inputs;
    exact to stated precision."""
    start = time.time()
    K = _ramified_base(40)
    n_trunc = 24
    rng = random.Random(2024)
    for trial in range(20):
        g = DPSeries(K, [_random_element(K, rng) for _ in range(n_trunc + 1)])
        back = sen_theta(solve_theta(g))
        _require(back.eq_to_precision(g, through=n_trunc - 1),
                 f"round trip failed on trial {trial}")
    reg = regular_representation(K, n_trunc)
    coh = cohomology(reg)
    _require(coh.h0_dim == 1, f"kernel dimension {coh.h0_dim} != 1")
    vec = coh.h0_basis[0]
    _require(not vec[0].is_zero(), "kernel vector has no constant part")
    _require(all(x.is_zero() for x in vec[1:]),
             "kernel vector is not a constant")
    return {"trials": 20, "kernel_dim": coh.h0_dim, "elapsed": time.time() - start}


def criterion_2():
    """The preimage of 1 under theta has coefficients (-e)^(n-1) (n-1)!
    exactly for n = 1..N, i.e. it is the additive coordinate log(1+ea)/e."""
    start = time.time()
    K = _ramified_base(50)
    n_trunc = 32
    sol = solve_theta(DPSeries.one(K, n_trunc))
    expected = K.one()
    for n in range(1, n_trunc + 1):
        _require((sol.coeffs[n] - expected).is_zero(),
                 f"coefficient {n} differs from the closed form")
        expected = expected * (-K.different_e) * n
    _require(sol.coeffs[0].is_zero(), "constant term must vanish")
    lt = log_t(K, n_trunc)
    _require(sol.eq_to_precision(lt), "preimage differs from the log coordinate")
    return {"trunc": n_trunc, "elapsed": time.time() - start}


def criterion_3():
    """Group substitution equals the operator series on the regular
    representation: truncation 16, ten random (f, b) with v(b) >= 1,
    entrywise agreement at >= 50 - 4 digits."""
    start = time.time()
    target, guard = 50, 4
    K = _ramified_base(target + guard)
    n_trunc = 16
    reg = regular_representation(K, n_trunc)
    _require(nearly_ht_test(reg).verdict,
             "regular representation fails the classifier")
    rng = random.Random(3)
    worst = None
    for trial in range(10):
        f = DPSeries(K, [_random_element(K, rng, span=3 ** 4)
                         for _ in range(n_trunc + 1)])
        b = _random_admissible_b(K, rng)
        via_sub = coaction(f, b)
        via_series = operator_series_apply(reg, b, list(f.coeffs), check=False)
        for n in range(n_trunc + 1):
            diff = via_series[n] - via_sub.coeffs[n]
            bound = diff.val_bound()
            worst = bound if worst is None else min(worst, bound)
            _require(diff.is_zero() and bound >= target - 4,
                     f"trial {trial} degree {n}: agreement only to {bound}")
    return {"trials": 10, "worst_agreement": str(worst),
            "tolerance": target - 4, "elapsed": time.time() - start}


def criterion_4():
    """Operator-series group law S(b) S(b') = S(b + b' + e b b') at
    >= 50 - 4 digits for ten random nearly-Hodge-Tate modules (dim <= 4,
    weights in [-3, 3], integral perturbations), plus rank-one binomial
    checks: weight n in {0, 1, 3} terminates to (1+eb)^n exactly and
    weight -1 matches the geometric inverse to precision."""
    start = time.time()
    target, guard = 50, 6
    K = _ramified_base(target + guard)
    e = K.different_e
    rng = random.Random(4)
    worst = None
    for trial in range(10):
        d = rng.randrange(1, 5)
        theta = [[e * rng.randrange(-3, 4) if i == j else K.zero()
                  for j in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(d):
                theta[i][j] = theta[i][j] + K.from_int(3 * rng.randrange(-20, 21))
        M = SenModule(K, theta)
        _require(nearly_ht_test(M).verdict, f"trial {trial}: module not nearly HT")
        b1 = _random_admissible_b(K, rng)
        b2 = _random_admissible_b(K, rng)
        s1 = operator_series(M, b1, check=False)
        s2 = operator_series(M, b2, check=False)
        s3 = operator_series(M, b1 + b2 + e * b1 * b2, check=False)
        prod = linalg.mat_mul(s1, s2, K.zero())
        for i in range(d):
            for j in range(d):
                diff = prod[i][j] - s3[i][j]
                bound = diff.val_bound()
                worst = bound if worst is None else min(worst, bound)
                _require(diff.is_zero() and bound >= target - 4,
                         f"trial {trial}: group law only to {bound} digits")
    one_mod = trivial_module(K)
    b = K.from_int(3)
    for n in (0, 1, 3):
        s = operator_series(bk_twist(one_mod, n), b, check=False)
        _require((s[0][0] - (K.one() + e * b) ** n).is_zero(),
                 f"rank-one weight {n} does not terminate to the binomial")
    s = operator_series(bk_twist(one_mod, -1), b, check=False)
    diff = s[0][0] - (K.one() + e * b).inverse()
    _require(diff.is_zero() and diff.val_bound() >= target - 4,
             "rank-one weight -1 misses the geometric inverse")
    return {"trials": 10, "worst_agreement": str(worst),
            "tolerance": target - 4, "elapsed": time.time() - start}


def criterion_5():
    """Classifier verdicts: integer-weight diagonals pass, the identity over
    a ramified field fails, a negative-valuation eigenvalue fails, nilpotent
    passes; and the resultant-based characteristic polynomial of
    theta^p - e^(p-1) theta agrees exactly with the direct computation on 20
    random matrices of dimension <= 4."""
    start = time.time()
    K = _ramified_base(50)
    Q5 = qp_field(5, 40)
    _require(nearly_ht_test(SenModule.diagonal_weights(K, [0, 1, -3])).verdict,
             "integer-weight diagonal must pass")
    _require(not nearly_ht_test(SenModule.from_int_matrix(K, [[1, 0], [0, 1]])).verdict,
             "identity over a ramified field must fail")
    half = Q5.from_scalar(PadicScalar.from_fraction(Fraction(1, 5), 5, 40))
    _require(not nearly_ht_test(SenModule(Q5, [[half]])).verdict,
             "negative-valuation eigenvalue must fail")
    _require(nearly_ht_test(SenModule.from_int_matrix(K, [[0, -1], [0, 0]])).verdict,
             "nilpotent module must pass")
    rng = random.Random(5)
    for trial in range(20):
        d = rng.randrange(1, 5)
        M = SenModule.from_int_matrix(
            K, [[rng.randrange(-9, 10) for _ in range(d)] for _ in range(d)])
        direct = nearly_ht_test(M).char_q
        oracle = char_poly_of_twist_via_resultant(M)
        for a, b in zip(direct, oracle):
            _require((a - b).is_zero(),
                     f"trial {trial}: resultant oracle disagrees")
    return {"random_matrices": 20, "elapsed": time.time() - start}


def criterion_6():
    """Cohomology of theta: h0 = h1 on 50 random modules; theta = 0 gives
    (d, d); the rank-two nilpotent gives (1, 1); invertible theta gives
    (0, 0).  Exact."""
    start = time.time()
    K = _ramified_base(40)
    Q5 = qp_field(5, 40)
    rng = random.Random(6)
    for trial in range(50):
        field = K if trial % 2 else Q5
        d = rng.randrange(1, 6)
        M = SenModule.from_int_matrix(
            field, [[rng.randrange(-12, 13) for _ in range(d)] for _ in range(d)])
        coh = cohomology(M)
        _require(coh.h0_dim == coh.h1_dim,
                 f"trial {trial}: h0 {coh.h0_dim} != h1 {coh.h1_dim}")
    coh = cohomology(SenModule.from_int_matrix(K, [[0, 0], [0, 0]]))
    _require((coh.h0_dim, coh.h1_dim) == (2, 2), "theta = 0 must give (2, 2)")
    coh = cohomology(SenModule.from_int_matrix(K, [[0, -1], [0, 0]]))
    _require((coh.h0_dim, coh.h1_dim) == (1, 1), "nilpotent must give (1, 1)")
    coh = cohomology(SenModule.diagonal_weights(K, [1, 2]))
    _require((coh.h0_dim, coh.h1_dim) == (0, 0), "invertible theta must give (0, 0)")
    return {"random_modules": 50, "elapsed": time.time() - start}


def criterion_7():
    """Uniform inverse bounds: p = 3, generator a = 2 at levels m = 1, 2, 3,
    twists n in [-10, 10] without 0.  One finite delta bounds every exponent
    and the per-level maxima agree exactly."""
    start = time.time()
    deltas = {}
    tables = {}
    for m in (1, 2, 3):
        level = build_level(3, m, 2, 40)
        report = rho_bound(level, symmetric_range(10))
        deltas[m] = report.delta
        tables[m] = report.per_n
    _require(all(d < Fraction(10 ** 6) for d in deltas.values()),
             "no finite uniform bound")
    _require(deltas[1] == deltas[2] == deltas[3],
             f"per-level maxima differ: {deltas}")
    _require(tables[1] == tables[2] == tables[3],
             "per-twist exponent tables differ between levels")
    return {"delta": str(deltas[1]), "elapsed": time.time() - start}


def criterion_8():
    """Neumann inversion at p = 3, m = 2, chi = 1 + 9, e = 1, truncation 8:
    the contraction certificate holds (rho M is strictly upper triangular and
    topologically nilpotent, so the series inverts exactly), the kernel is
    zero, and the Neumann solution matches a dense solve at >= 50 - 4 digits
    on five random right-hand sides.

    The literal entrywise sup-norm of rho M is p (exponent 1 >= 0): the
    blocks fixed by the automorphism contribute entries chi^n y / (chi^n - 1)
    of valuation -v_p(n) - v(e) <= 0 for every admissible parameter choice,
    so a sup-norm smaller than 1 is unattainable in this finite model; the
    certificate asserted here is the spectral one that actually drives the
    series."""
    start = time.time()
    target, guard = 50, 10
    level = build_level(3, 2, 10, target + guard)
    T = g_minus_one(level, PadicScalar.from_int(1, 3, target + guard), 8)
    con = T.contraction_report()
    _require(con["topologically_nilpotent"],
             "rho M is not topologically nilpotent")
    _require(kernel_check(T) == 0, "twisted operator has a kernel")
    rng = random.Random(8)
    worst = None
    for trial in range(5):
        rhs = [PadicScalar.from_int(rng.randrange(-3 ** 10, 3 ** 10), 3, target + guard)
               for _ in range(T.size)]
        res = neumann_invert(T, rhs)
        direct = dense_solve(T, rhs)
        for a, b in zip(res["solution"], direct):
            diff = a - b
            bound = diff.val_bound()
            worst = bound if worst is None else min(worst, bound)
            _require(diff.is_zero() and bound >= target - 4,
                     f"trial {trial}: agreement only to {bound}")
        _require(res["residual_valuation"] >= target - 4,
                 f"trial {trial}: residual valuation {res['residual_valuation']}")
    return {"sup_norm_exponent": str(con["sup_norm_exponent"]),
            "power_exponents": [str(x) for x in con["power_exponents"]],
            "worst_agreement": str(worst), "tolerance": target - 4,
            "elapsed": time.time() - start}


def criterion_9():
    """Boundary map: over Q_5 the unit maps to 1/5 and p to 0, the s = 0
    kernel lattice is pZ_p with image order p; over Q_5(zeta_5) the root of
    unity maps to 4/5 (cross-checked against the trace read off the defining
    polynomial); the boundary scales by the relative degree along the
    embedding on ten random elements; witnesses of exact order p^k exist for
    k <= 5.  Exact."""
    start = time.time()
    p = 5
    Q = qp_field(p, 40)
    _require(boundary(Q.one()).as_fraction() == Fraction(1, p),
             "boundary of 1 must be 1/p")
    _require(boundary(Q.from_int(p)).is_zero(), "boundary of p must vanish")
    _require(not in_picard_image(Q.one()), "1 must not lie in the kernel")
    rep = kernel_lattice(Q, 0)
    _require(rep.image_order_exponent == 1, "image order must be p at s = 0")
    _require(len(rep.basis) == 1 and (rep.basis[0] - Q.from_int(p)).is_zero(),
             "kernel lattice must be pZ_p")
    C = cyclotomic_field(p, 1, 40)
    zeta = C.one() + C.pi
    # companion oracle: Tr(pi) = -(second-highest coefficient of E)
    comp = -C.E[C.e_ram - 1][0]
    tr_zeta_oracle = comp + PadicScalar.from_int(C.degree, p, 40)
    _require(tr_zeta_oracle == PadicScalar.from_int(-1, p, 40),
             "companion trace oracle must give -1")
    _require(trace_to_Qp(zeta) == tr_zeta_oracle,
             "matrix trace disagrees with the companion oracle")
    _require(boundary(zeta).as_fraction() == Fraction(p - 1, p),
             "boundary of the root of unity must be (p-1)/p")
    emb = scalar_embedding(Q, C)
    rng = random.Random(9)
    for trial in range(10):
        x = Q.from_int(rng.randrange(-10 ** 6, 10 ** 6))
        _require(functoriality_check(emb, x)["equal"],
                 f"functoriality fails on trial {trial}")
    for k in range(6):
        for field in (Q, C):
            w = witness_of_order(field, k)
            _require(boundary(w).order_exponent() == k,
                     f"witness of order p^{k} not found")
    rep = kernel_lattice(C, 0)
    _require(all(in_picard_image(x) for x in rep.basis),
             "kernel lattice basis must map to zero")
    return {"elapsed": time.time() - start}


def criterion_10():
    """The substitution shifts the log coordinate by a constant: over Q_3
    (where e = 1) coaction(log_t, b) - log_t equals the scalar log(1 + e b)
    exactly to precision 40 through degree 24, for five admissible b.  The
    comparison degrees are computed at working truncation 96 so their
    truncation tails clear the target precision."""
    start = time.time()
    target, guard = 40, 6
    K = qp_field(3, target + guard)
    n_work, n_report = 96, 24
    lt = log_t(K, n_work)
    checked = 0
    for b_int in (3, 6, 9, 12, 21):
        b = K.from_int(b_int)
        shifted = coaction(lt, b)
        const = padic_log(PadicScalar.from_int(1 + b_int, 3, target + guard))
        diff0 = shifted.coeffs[0] - K.from_scalar(const)
        _require(diff0.is_zero() and diff0.val_bound() >= target,
                 f"b = {b_int}: constant term off (bound {diff0.val_bound()})")
        for n in range(1, n_report + 1):
            diff = shifted.coeffs[n] - lt.coeffs[n]
            _require(diff.is_zero() and diff.val_bound() >= target,
                     f"b = {b_int}, degree {n}: agreement only to {diff.val_bound()}")
            checked += 1
    return {"values_checked": checked, "tolerance": target,
            "elapsed": time.time() - start}


CRITERIA = {
    1: ("theta-solve exactness at truncation", criterion_1),
    2: ("closed form for the theta-preimage of 1", criterion_2),
    3: ("substitution equals operator series on the regular representation", criterion_3),
    4: ("operator-series group law and rank-one binomials", criterion_4),
    5: ("classifier verdicts and resultant cross-check", criterion_5),
    6: ("cohomology dimensions of theta", criterion_6),
    7: ("uniform inverse bounds across cyclotomic levels", criterion_7),
    8: ("Neumann inversion of the twisted operator", criterion_8),
    9: ("boundary map, kernel lattice, functoriality", criterion_9),
    10: ("log coordinate shifts by a scalar logarithm", criterion_10),
}

RUNTIME_BUDGETS = {1: 1.0, 2: 0.1, 3: 5.0, 4: 5.0, 5: 5.0,
                   6: 1.0, 7: 30.0, 8: 30.0, 9: 5.0, 10: 1.0}

SUITES = {
    "dpseries": (1, 2, 3, 10),
    "senmod": (4, 5, 6),
    "gamma": (7, 8),
    "picard": (9,),
}


def run_criterion(index: int):
    name, fn = CRITERIA[index]
    start = time.time()
    try:
        details = fn()
        passed = True
        message = ""
    except CriterionFailure as err:
        details = {"elapsed": time.time() - start}
        passed = False
        message = str(err)
    return {
        "index": index,
        "name": name,
        "passed": passed,
        "message": message,
        "budget_s": RUNTIME_BUDGETS[index],
        "details": {k: v for k, v in details.items() if k != "elapsed"},
        "elapsed_s": details.get("elapsed", 0.0),
    }


def run_suite(which: str = "all"):
    if which == "all":
        indices = sorted(CRITERIA)
    elif which in SUITES:
        indices = list(SUITES[which])
    else:
        raise KeyError(which)
    return [run_criterion(i) for i in indices]
