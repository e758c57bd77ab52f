"""Sen modules (M, theta) over a local field K.

A module is a square matrix theta over K together with the twist parameter e
(by default the field's different generator).  The module provides:

  * division-free characteristic polynomials (Samuelson-Berkowitz);
  * the nearly-Hodge-Tate classifier: theta^p - e^(p-1) theta must be
    topologically nilpotent, certified through Newton-polygon slopes of its
    characteristic polynomial, never through root finding;
  * integer weight multiplicities, cohomology of theta as kernel/cokernel,
    tensor/dual/twist constructions;
  * the semilinear operator series (1 + e b)^(theta/e)
      = sum_n (b^n/n!) prod_{i<n} (theta - e i),
    whose convergence is exactly the classifier condition.

Sign convention: theta is the operator induced by the derivation
(1 + e a) d/da on the divided-power algebra; some treatments in the
literature use the negative of this operator.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import linalg
from .errors import ConvergenceError, DomainError, UsageError
from .field import FieldElement, LocalField
from .padic import NewtonPolygon, PadicScalar, newton_polygon_from_points


class SenModule:
    """Finite free K-module with endomorphism theta and twist parameter e."""

    __slots__ = ("field", "dim", "theta", "e")

    def __init__(self, field: LocalField, theta, e: FieldElement | None = None):
        self.field = field
        self.theta = tuple(tuple(row) for row in theta)
        self.dim = len(self.theta)
        if any(len(row) != self.dim for row in self.theta):
            raise UsageError("theta must be a square matrix")
        self.e = field.different_e if e is None else e
        if self.e.is_zero():
            raise UsageError("the twist parameter e must be nonzero")

    @classmethod
    def from_int_matrix(cls, field, rows, e=None):
        return cls(field, [[field.from_int(c) for c in row] for row in rows], e=e)

    @classmethod
    def diagonal_weights(cls, field, weights, e=None):
        """Direct sum of rank-one twists: theta = e * diag(weights)."""
        e = field.different_e if e is None else e
        d = len(weights)
        theta = [[field.zero() for _ in range(d)] for _ in range(d)]
        for i, n in enumerate(weights):
            theta[i][i] = e * n
        return cls(field, theta, e=e)

    def _zero(self):
        return self.field.zero()

    def _one(self):
        return self.field.one()

    def matrix(self):
        return [list(row) for row in self.theta]

    def __repr__(self):
        return f"SenModule(dim={self.dim})"


def regular_representation(field: LocalField, trunc: int,
                           e: FieldElement | None = None) -> SenModule:
    """theta acting on the degree-<=trunc divided-power polynomials."""
    from .dpseries import theta_matrix
    return SenModule(field, theta_matrix(field, trunc, e=e), e=e)


# ---------------------------------------------------------------------------
# characteristic polynomials and the classifier
# ---------------------------------------------------------------------------

def char_poly(M: SenModule):
    """Monic characteristic polynomial det(T - theta), coefficients ascending."""
    desc = linalg.charpoly_berkowitz(M.matrix(), M._one(), M._zero())
    return list(reversed(desc))


def char_poly_polygon(coeffs, allow_bounds: bool = True) -> NewtonPolygon:
    """Newton polygon of a monic K-polynomial given by ascending coefficients."""
    points = []
    d = len(coeffs) - 1
    for i, c in enumerate(coeffs):
        exact, v = c.pivot_val()
        points.append((i, v if exact else None, v))
    points[d] = (d, Fraction(0), Fraction(0))
    return newton_polygon_from_points(points, allow_bounds=allow_bounds)


class ClassifierReport:
    """Outcome of the topological-nilpotence test on theta^p - e^(p-1) theta."""

    __slots__ = ("verdict", "char_q", "polygon", "offending")

    def __init__(self, verdict, char_q, polygon, offending):
        self.verdict = verdict
        self.char_q = char_q
        self.polygon = polygon
        self.offending = offending

    def __repr__(self):
        return f"ClassifierReport(verdict={self.verdict}, offending={self.offending})"


def frobenius_twist_matrix(M: SenModule):
    """Q = theta^p - e^(p-1) * theta."""
    K = M.field
    p = K.p
    theta = M.matrix()
    theta_p = linalg.mat_pow(theta, p, M._one(), M._zero())
    scale = M.e ** (p - 1)
    return linalg.mat_sub(theta_p, linalg.mat_scale(theta, scale))


def nearly_ht_test(M: SenModule) -> ClassifierReport:
    """All eigenvalues of theta in e*Z + maximal ideal, tested slope-wise.

    Equivalent to every Newton-polygon slope of char(Q) being positive, since
    over the residue field X^p - e^(p-1) X splits into the p linear factors
    X - e*i.
    """
    q = frobenius_twist_matrix(M)
    coeffs = linalg.charpoly_berkowitz(q, M._one(), M._zero())
    coeffs = list(reversed(coeffs))
    polygon = char_poly_polygon(coeffs, allow_bounds=True)
    verdict = polygon.all_slopes_positive()
    return ClassifierReport(verdict, coeffs, polygon, polygon.offending_slopes())


def char_poly_of_twist_via_resultant(M: SenModule):
    """Independent route to char(Q): eliminate S from (char_theta(S), T - q(S)).

    Evaluates the Sylvester resultant at d+1 integer values of T by exact
    determinants and Lagrange-interpolates the monic degree-d answer.  Used as
    the cross-check oracle for the classifier; never shares code with the
    direct matrix computation.
    """
    K = M.field
    p = K.p
    d = M.dim
    f = char_poly(M)                      # ascending, monic, degree d
    e_pow = M.e ** (p - 1)
    samples = []
    nodes = list(range(d + 1))
    for t in nodes:
        # g(S) = t - S^p + e^(p-1) S, degree p in S
        g = [K.zero() for _ in range(p + 1)]
        g[0] = K.from_int(t)
        g[1] = g[1] + e_pow
        g[p] = g[p] - K.one()
        samples.append(_resultant(f, g, K))
    # interpolate sum_j det_j * L_j(T) with rational Lagrange weights
    coeffs = [K.zero() for _ in range(d + 1)]
    for j, t_j in enumerate(nodes):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for l, t_l in enumerate(nodes):
            if l == j:
                continue
            basis = _poly_shift_mul(basis, -t_l)
            denom *= Fraction(t_j - t_l)
        for i, w in enumerate(basis):
            coeffs[i] = coeffs[i] + samples[j] * K.from_scalar(
                PadicScalar.from_fraction(w / denom, K.p, K.prec))
    return coeffs


def _poly_shift_mul(poly, root):
    """Multiply a rational polynomial (ascending) by (T + root)."""
    out = [Fraction(0)] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i] += c * root
        out[i + 1] += c
    return out


def _resultant(f, g, K: LocalField):
    """Sylvester resultant of two K-polynomials (ascending coefficients)."""
    n = len(f) - 1
    m = len(g) - 1
    size = n + m
    rows = []
    f_desc = list(reversed(f))
    g_desc = list(reversed(g))
    for i in range(m):
        rows.append([K.zero()] * i + f_desc + [K.zero()] * (size - n - 1 - i))
    for i in range(n):
        rows.append([K.zero()] * i + g_desc + [K.zero()] * (size - m - 1 - i))
    return linalg.det(rows, K.one(), K.zero())


# ---------------------------------------------------------------------------
# weights and cohomology
# ---------------------------------------------------------------------------

def default_weight_range(M: SenModule):
    """Heuristic window [-B, B] read off the polygon of char(theta).

    A slope only pins v_p of a candidate weight, never its size, so the
    window combines the slope spread with a fixed floor of 32; pass an
    explicit range to be definitive.
    """
    coeffs = char_poly(M)
    polygon = char_poly_polygon(coeffs, allow_bounds=True)
    exact, v_e = M.e.pivot_val()
    spread = 0
    for s in polygon.slopes:
        if s.exact:
            spread = max(spread, math.ceil(s.value - (v_e if exact else 0)))
    b = max(32, M.field.p ** min(8, max(0, spread)))
    return (-b, b)


def ht_weights(M: SenModule, n_range=None, check: bool = True):
    """Multiplicity of each integer weight n: dim ker (theta - e n)^dim.

    Only eigenvalues exactly equal to e*n within the working precision are
    detected; nearby eigenvalues keep full rank and report multiplicity 0.
    """
    if check:
        report = nearly_ht_test(M)
        if not report.verdict:
            raise DomainError("weight detection requires a nearly-Hodge-Tate module",
                              concept="nearly Hodge-Tate classifier")
    if n_range is None:
        n_range = default_weight_range(M)
    n_min, n_max = n_range
    if n_min > n_max:
        raise UsageError("empty weight range")
    K = M.field
    out = []
    ident = linalg.identity(M.dim, M._one(), M._zero())
    for n in range(n_min, n_max + 1):
        shift = linalg.mat_sub(M.matrix(), linalg.mat_scale(ident, M.e * n))
        power = linalg.mat_pow(shift, M.dim, M._one(), M._zero())
        mult = M.dim - linalg.rank(power)
        if mult:
            out.append((n, mult))
    return out


class CohomologyReport:
    __slots__ = ("h0_dim", "h1_dim", "h0_basis", "h1_basis_indices")

    def __init__(self, h0_dim, h1_dim, h0_basis, h1_basis_indices):
        self.h0_dim = h0_dim
        self.h1_dim = h1_dim
        self.h0_basis = h0_basis
        self.h1_basis_indices = h1_basis_indices

    def __repr__(self):
        return f"CohomologyReport(h0={self.h0_dim}, h1={self.h1_dim})"


def cohomology(M: SenModule) -> CohomologyReport:
    """Kernel and cokernel of theta on K^dim; dimensions always agree."""
    mat = M.matrix()
    kernel = linalg.kernel_basis(mat, M._one(), M._zero())
    transpose = [[mat[j][i] for j in range(M.dim)] for i in range(M.dim)]
    _, _, pivot_rows, r = linalg.row_reduce(transpose)
    coker = [i for i in range(M.dim) if i not in pivot_rows]
    return CohomologyReport(len(kernel), M.dim - r, kernel, coker)


# ---------------------------------------------------------------------------
# tensor operations
# ---------------------------------------------------------------------------

def tensor(m1: SenModule, m2: SenModule) -> SenModule:
    """theta = theta_1 (x) 1 + 1 (x) theta_2 on the Kronecker product."""
    if m1.field is not m2.field:
        raise UsageError("tensor factors live over different fields")
    if not (m1.e - m2.e).is_zero():
        raise UsageError("tensor factors carry different twist parameters")
    d1, d2 = m1.dim, m2.dim
    zero = m1._zero()
    d = d1 * d2
    theta = [[zero for _ in range(d)] for _ in range(d)]
    for a in range(d1):
        for b in range(d1):
            for c in range(d2):
                theta[a * d2 + c][b * d2 + c] = theta[a * d2 + c][b * d2 + c] + m1.theta[a][b]
    for a in range(d1):
        for b in range(d2):
            for c in range(d2):
                theta[a * d2 + b][a * d2 + c] = theta[a * d2 + b][a * d2 + c] + m2.theta[b][c]
    return SenModule(m1.field, theta, e=m1.e)


def dual(m: SenModule) -> SenModule:
    theta = [[-m.theta[j][i] for j in range(m.dim)] for i in range(m.dim)]
    return SenModule(m.field, theta, e=m.e)


def bk_twist(m: SenModule, n: int) -> SenModule:
    """Shift theta by e*n, the rank-one twist with integer weight n."""
    shift = m.e * n
    theta = [[m.theta[i][j] + (shift if i == j else m._zero())
              for j in range(m.dim)] for i in range(m.dim)]
    return SenModule(m.field, theta, e=m.e)


def trivial_module(field: LocalField, e: FieldElement | None = None) -> SenModule:
    return SenModule(field, [[field.zero()]], e=e)


# ---------------------------------------------------------------------------
# the semilinear operator series
# ---------------------------------------------------------------------------

def _series_terms(M: SenModule, b: FieldElement, target: int, vector=None):
    """Yield the terms (b^n/n!) prod_{i<n}(theta - e i), matrix or applied."""
    K = M.field
    ident = linalg.identity(M.dim, M._one(), M._zero())
    coef = K.one()
    if vector is None:
        prod = ident
        yield linalg.mat_scale(prod, coef)
    else:
        prod = list(vector)
        yield [coef * x for x in prod]
    n = 0
    theta = M.matrix()
    while True:
        shift = linalg.mat_sub(theta, linalg.mat_scale(ident, M.e * n))
        n += 1
        coef = coef * b / K.from_int(n)
        if vector is None:
            prod = linalg.mat_mul(shift, prod, M._zero())
            yield linalg.mat_scale(prod, coef)
        else:
            prod = linalg.mat_vec(shift, prod, M._zero())
            yield [coef * x for x in prod]


def _min_val_bound(rows):
    vals = []
    for row in rows:
        if isinstance(row, list):
            vals.extend(x.val_bound() for x in row)
        else:
            vals.append(row.val_bound())
    return min(vals)


def _summed_series(M, b, target, vector=None):
    K = M.field
    p = K.p
    window = max(5, p)
    cap = 10 * max(target, 1)
    acc = None
    recent = []
    for count, term in enumerate(_series_terms(M, b, target, vector=vector)):
        if count > cap:
            raise ConvergenceError(
                "operator series exceeded %d terms; first non-decreasing term "
                "valuation %s" % (cap, recent[0] if recent else None),
                concept="series stop rule")
        if acc is None:
            acc = term
        elif vector is None:
            acc = linalg.mat_add(acc, term)
        else:
            acc = [x + y for x, y in zip(acc, term)]
        v = _min_val_bound(term if vector is None else [term])
        recent.append(v)
        if len(recent) > window:
            recent.pop(0)
        if v >= target and len(recent) == window and \
                all(recent[i] <= recent[i + 1] for i in range(window - 1)):
            return acc
    raise ConvergenceError("operator series generator stopped unexpectedly")


def operator_series(M: SenModule, b, target_prec: int | None = None,
                    check: bool = True):
    """The matrix (1 + e b)^(theta/e) = sum (b^n/n!) prod_{i<n}(theta - e i).

    Requires the nearly-Hodge-Tate condition, which makes the factor products
    tend to zero; admissible pairs satisfy the group law
    S(b) S(b') = S(b + b' + e b b').
    """
    K = M.field
    if isinstance(b, (int, PadicScalar)):
        b = K.from_scalar(b)
    if check:
        report = nearly_ht_test(M)
        if not report.verdict:
            raise DomainError(
                "operator series requires a nearly-Hodge-Tate module; offending "
                "slopes %s" % report.offending,
                concept="nearly Hodge-Tate classifier")
    target = K.prec if target_prec is None else target_prec
    return _summed_series(M, b, target)


def operator_series_apply(M: SenModule, b, vector, target_prec: int | None = None,
                          check: bool = True):
    """Apply the operator series to one vector without forming the matrix."""
    K = M.field
    if isinstance(b, (int, PadicScalar)):
        b = K.from_scalar(b)
    if check:
        report = nearly_ht_test(M)
        if not report.verdict:
            raise DomainError(
                "operator series requires a nearly-Hodge-Tate module",
                concept="nearly Hodge-Tate classifier")
    target = K.prec if target_prec is None else target_prec
    return _summed_series(M, b, target, vector=list(vector))


def semilinear_descent_matrix(M: SenModule, chi_value: PadicScalar,
                              target_prec: int | None = None, check: bool = True):
    """Matrix by which an automorphism with unit-ball value chi acts on M.

    chi must lie in 1 + p^alpha O (the exponential's convergence ball); the
    matrix is the operator series at b = (chi - 1)/e.
    """
    K = M.field
    if chi_value.p != K.p:
        raise UsageError("character value must share the field's prime")
    diff = chi_value - PadicScalar.one(K.p, chi_value.prec)
    if not diff.is_zero() and diff.val < 1:
        alpha = Fraction(1, 2) if K.p == 2 else Fraction(1, K.p - 1)
        raise DomainError(
            "character value must satisfy v(chi - 1) > alpha = %s; got v = %s"
            % (alpha, diff.val),
            concept="convergence radius alpha")
    b = K.from_scalar(diff) / M.e
    return operator_series(M, b, target_prec=target_prec, check=check)


# ---------------------------------------------------------------------------
# residue-field factorization identity
# ---------------------------------------------------------------------------

def fermat_identity_gap(field: LocalField):
    """Coefficients of (X^p - e^(p-1) X) - prod_{i<p} (X - e i) over K.

    Every entry has positive valuation: the two polynomials agree over the
    residue field, which is what makes the classifier's slope test detect
    exactly the weights modulo the maximal ideal.
    """
    p = field.p
    e = field.different_e
    lhs = [field.zero() for _ in range(p + 1)]
    lhs[p] = field.one()
    lhs[1] = -(e ** (p - 1))
    rhs = [field.one()]
    for i in range(p):
        root = e * i
        nxt = [field.zero() for _ in range(len(rhs) + 1)]
        for k, c in enumerate(rhs):
            nxt[k] = nxt[k] - c * root
            nxt[k + 1] = nxt[k + 1] + c
        rhs = nxt
    return [a - b for a, b in zip(lhs, rhs)]
