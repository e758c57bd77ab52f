"""Finite-level model of the twisted cyclotomic action over Q_p.

Level m is K_m = Q_p(zeta_{p^m}) with the automorphism sigma_a : z -> z^a and
character value chi = a.  On the truncated module D_N = sum_{n=1}^N K_m a^n/n!
the twisted action g(a) = chi a + y, with y = (chi - 1)/e, is the block
upper-triangular Q_p-matrix

    block (m, m+k) = chi^m (y^k / k!) sigma      (k >= 1),
    block (m, m)   = chi^m sigma - 1,

whose diagonal blocks are inverted exactly (per-block Gauss-Jordan); their
operator-norm exponents give the finite-level Tate bound delta.  The strict
upper part M then satisfies |M| <= |y|, and rho M (rho the block diagonal of
the inverses) is strictly upper triangular, hence nilpotent: the Neumann sum
sum (-rho M)^k rho inverts g - 1 exactly on the truncation.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import linalg
from .errors import ConvergenceError, DomainError, PrecisionError, UsageError
from .field import cyclotomic_field, FieldEmbedding
from .padic import DEFAULT_PRECISION, PadicScalar


class CyclotomicLevel:
    """Validated level: field Q_p(zeta_{p^m}), generator a, chi = a."""

    __slots__ = ("p", "m", "a", "prec", "field", "sigma", "chi")

    def __init__(self, p, m, a, prec, field, sigma, chi):
        self.p = p
        self.m = m
        self.a = a
        self.prec = prec
        self.field = field
        self.sigma = sigma          # degree x degree PadicScalar matrix
        self.chi = chi              # PadicScalar value of the character

    @property
    def degree(self):
        return self.field.degree

    def __repr__(self):
        return f"CyclotomicLevel(p={self.p}, m={self.m}, a={self.a})"


def build_level(p: int, m: int, a: int, prec: int = DEFAULT_PRECISION) -> CyclotomicLevel:
    """Construct and certify the level.

    Rejects gcd(a, p) > 1 and generators whose character is trivial (a = 1,
    or a a torsion unit so that a^(p-1) = 1 to working precision).  A with
    a = 1 mod p^m is allowed: sigma_a is then trivial on the finite level
    while chi = a still twists the action.
    """
    if m < 1:
        raise UsageError("level m must be >= 1")
    if math.gcd(a, p) != 1 or a <= 0:
        raise UsageError("generator a must be a positive integer prime to p")
    if a == 1:
        raise DomainError("a = 1 gives the trivial character; nothing to invert",
                          concept="twisted action nondegeneracy")
    proj = pow(a, p - 1, p ** prec)
    if proj == 1:
        raise DomainError(
            "a^(p-1) = 1 to working precision: the character has trivial "
            "image in 1 + pZ_p", concept="twisted action nondegeneracy")
    field = cyclotomic_field(p, m, prec)
    zeta = field.one() + field.pi
    u_image = (zeta ** (a % (p ** m))) - field.one()
    try:
        emb = FieldEmbedding(field, field, field.one(), u_image, check=True)
    except DomainError as err:
        raise DomainError("automorphism certificate failed: %s" % err,
                          concept="cyclotomic automorphism") from err
    d = field.degree
    cols = []
    power = field.one()
    for _ in range(d):
        cols.append(power.coordinates())
        power = power * u_image
    sigma = [[cols[t][s] for t in range(d)] for s in range(d)]
    chi = PadicScalar.from_int(a, p, prec)
    return CyclotomicLevel(p, m, a, prec, field, sigma, chi)


# ---------------------------------------------------------------------------
# Tate bounds
# ---------------------------------------------------------------------------

class RhoReport:
    __slots__ = ("per_n", "delta")

    def __init__(self, per_n, delta):
        self.per_n = per_n          # {n: Fraction exponent}
        self.delta = delta

    def __repr__(self):
        return f"RhoReport(delta={self.delta})"


def _diagonal_block(level: CyclotomicLevel, n: int):
    """chi^n sigma - 1 as a Q_p matrix."""
    d = level.degree
    scale = level.chi ** n
    one = PadicScalar.one(level.p, level.prec)
    out = [[level.sigma[i][j] * scale for j in range(d)] for i in range(d)]
    for i in range(d):
        out[i][i] = out[i][i] - one
    return out


def _norm_exponent(rows) -> Fraction:
    """sup-norm exponent: minus the smallest entry valuation bound."""
    return Fraction(-min(x.val_bound() for row in rows for x in row))


def rho_bound(level: CyclotomicLevel, n_values) -> RhoReport:
    """Invert chi^n sigma - 1 for each n and report norm exponents.

    The inverse exists for every n != 0: the blocks are exactly invertible at
    finite level because an integer a > 1 is never a root of unity.
    """
    per_n = {}
    one = PadicScalar.one(level.p, level.prec)
    zero = PadicScalar.zero(level.p, level.prec)
    for n in n_values:
        if n == 0:
            raise UsageError("n = 0 is the untwisted block; it is not invertible")
        block = _diagonal_block(level, n)
        try:
            inv = linalg.invert(block, one, zero)
        except PrecisionError as err:
            raise PrecisionError(
                "diagonal block at n = %d is singular to working precision: %s"
                % (n, err)) from err
        per_n[n] = _norm_exponent(inv)
    return RhoReport(per_n, max(per_n.values()))


def symmetric_range(n_max: int):
    """[-n_max, n_max] with 0 removed."""
    return [n for n in range(-n_max, n_max + 1) if n != 0]


# ---------------------------------------------------------------------------
# the twisted operator on D_N
# ---------------------------------------------------------------------------

class TwistedOperator:
    """(g - 1) on D_N as one Q_p matrix, with its block structure kept."""

    __slots__ = ("level", "e", "trunc", "y", "matrix", "rho", "rho_m")

    def __init__(self, level, e, trunc, y, matrix, rho, rho_m):
        self.level = level
        self.e = e
        self.trunc = trunc
        self.y = y
        self.matrix = matrix
        self.rho = rho              # block diagonal of inverses, full size
        self.rho_m = rho_m          # rho times the strict upper part

    @property
    def size(self):
        return self.trunc * self.level.degree

    def strict_upper_norm_exponent(self) -> Fraction:
        """Literal sup-norm exponent of rho M (positive means norm > 1)."""
        return _norm_exponent(self.rho_m)

    def contraction_report(self):
        """Certify topological nilpotence of rho M.

        rho M is strictly block upper triangular, so (rho M)^trunc = 0 and
        the Neumann series terminates; the report carries the per-power
        sup-norm exponents so the decay is visible, together with the literal
        first-power exponent.
        """
        zero = PadicScalar.zero(self.level.p, self.level.prec)
        exps = []
        power = self.rho_m
        for _ in range(self.trunc):
            exps.append(_norm_exponent(power))
            if all(x.is_zero() for row in power for x in row):
                break
            power = linalg.mat_mul(power, self.rho_m, zero)
        nilpotent = all(x.is_zero() for row in power for x in row)
        return {
            "sup_norm_exponent": exps[0],
            "power_exponents": exps,
            "nilpotent": nilpotent,
            "topologically_nilpotent": nilpotent,
        }


def g_minus_one(level: CyclotomicLevel, e: PadicScalar, trunc: int) -> TwistedOperator:
    """Assemble (g - 1), its block-diagonal inverse rho, and rho M."""
    if isinstance(e, int):
        e = PadicScalar.from_int(e, level.p, level.prec)
    if e.is_zero():
        raise UsageError("the twist parameter e must be nonzero")
    if trunc < 1:
        raise UsageError("truncation must be >= 1")
    y = (level.chi - PadicScalar.one(level.p, level.prec)) / e
    if y.is_zero() or y.val < 1:
        raise DomainError(
            "need v(y) >= 1 for y = (chi - 1)/e; got v(y) = %s"
            % (y.val if not y.is_zero() else ">= %d" % y.prec),
            concept="normalization y in pO_K")
    p = level.p
    d = level.degree
    size = trunc * d
    zero = PadicScalar.zero(p, level.prec)
    one = PadicScalar.one(p, level.prec)
    mat = [[zero for _ in range(size)] for _ in range(size)]
    rho = [[zero for _ in range(size)] for _ in range(size)]
    rho_blocks = {}
    # y^k / k! scalars
    y_over_fact = [one]
    for k in range(1, trunc):
        y_over_fact.append(y_over_fact[-1] * y / PadicScalar.from_int(k, p, level.prec))
    chi_pow = {n: level.chi ** n for n in range(1, trunc + 1)}
    for n in range(1, trunc + 1):
        base = (n - 1) * d
        diag = _diagonal_block(level, n)
        inv = linalg.invert(diag, one, zero)
        rho_blocks[n] = inv
        for i in range(d):
            for j in range(d):
                mat[base + i][base + j] = diag[i][j]
                rho[base + i][base + j] = inv[i][j]
        for k in range(1, trunc - n + 1):
            scale = chi_pow[n] * y_over_fact[k]
            cbase = (n + k - 1) * d
            for i in range(d):
                for j in range(d):
                    mat[base + i][cbase + j] = level.sigma[i][j] * scale
    strict = [[mat[i][j] if (j // d) > (i // d) else zero
               for j in range(size)] for i in range(size)]
    rho_m = linalg.mat_mul(rho, strict, zero)
    return TwistedOperator(level, e, trunc, y, mat, rho, rho_m)


def neumann_invert(T: TwistedOperator, rhs, target_prec: int | None = None,
                   require_contraction: bool = False):
    """Solve (g - 1) x = rhs by x = sum_k (-rho M)^k rho rhs.

    The sum always terminates on the truncation (rho M is nilpotent); when
    require_contraction is set, a literal sup-norm >= 1 for rho M raises
    ConvergenceError instead, the cure being a smaller y (larger level or a
    generator closer to 1).  The residual valuation is reported.
    """
    p = T.level.p
    prec = T.level.prec
    target = prec if target_prec is None else target_prec
    if len(rhs) != T.size:
        raise UsageError("right-hand side has size %d; expected %d"
                         % (len(rhs), T.size))
    sup = T.strict_upper_norm_exponent()
    if require_contraction and sup >= 0:
        raise ConvergenceError(
            "|rho M| has sup-norm exponent %s >= 0 (norm >= 1); take a smaller "
            "y (larger level m or generator closer to 1)" % sup,
            concept="Neumann contraction bound")
    zero = PadicScalar.zero(p, prec)
    w = linalg.mat_vec(T.rho, list(rhs), zero)
    acc = list(w)
    # (rho M)^trunc vanishes, so trunc iterations compute the exact inverse
    for _ in range(T.trunc):
        w = [-x for x in linalg.mat_vec(T.rho_m, w, zero)]
        acc = [x + y for x, y in zip(acc, w)]
    residual = [x - y for x, y in zip(linalg.mat_vec(T.matrix, acc, zero), rhs)]
    res_bound = min(x.val_bound() for x in residual)
    if any(not x.is_zero() for x in residual):
        raise ConvergenceError(
            "Neumann residual is nonzero at valuation %s; |rho M| exponent %s "
            "suggests a smaller y" % (res_bound, sup),
            concept="Neumann contraction bound")
    return {
        "solution": acc,
        "residual_valuation": res_bound,
        "sup_norm_exponent": sup,
    }


def dense_solve(T: TwistedOperator, rhs):
    """Direct Gaussian elimination on the full operator; the oracle route."""
    zero = PadicScalar.zero(T.level.p, T.level.prec)
    return linalg.solve(T.matrix, list(rhs), zero)


def kernel_check(T: TwistedOperator) -> int:
    """Nullity of (g - 1) on D_N; zero whenever the blocks invert."""
    return T.size - linalg.rank(T.matrix)


# ---------------------------------------------------------------------------
# finite-level log coordinate
# ---------------------------------------------------------------------------

def log_coordinate_vector(T: TwistedOperator):
    """Coefficients of log(1 + e a)/e on slots n = 1..trunc, flattened."""
    p = T.level.p
    d = T.level.degree
    out = []
    cur = PadicScalar.one(p, T.level.prec)
    for n in range(1, T.trunc + 1):
        out.extend([cur] + [PadicScalar.zero(p, T.level.prec)] * (d - 1))
        cur = cur * (-T.e) * n
    return out


def log_coordinate_tail_bounds(T: TwistedOperator):
    """Per-slot valuation bound of the truncation tail of (g-1) log.

    Slot n of (g - 1) applied to the full log coordinate vanishes; the
    truncated operator only misses the terms k > trunc - n, each of size
    chi^n c_{n+k} y^k / k!, so the residual at slot n has valuation at least
    min_k [ v(c_{n+k}) + k v(y) - v_p(k!) ].
    """
    p = T.level.p
    vy = T.y.val
    exact, ve = T.e.pivot_val()
    bounds = []
    for n in range(1, T.trunc + 1):
        best = None
        for k in range(T.trunc - n + 1, T.trunc + DEFAULT_PRECISION):
            deg = n + k
            v_c = (deg - 1) * ve + _vp_factorial(deg - 1, p)
            val = v_c + k * vy - _vp_factorial(k, p)
            best = val if best is None else min(best, val)
        bounds.append(best)
    return bounds


def _vp_factorial(n: int, p: int) -> int:
    v = 0
    q = p
    while q <= n:
        v += n // q
        q *= p
    return v
