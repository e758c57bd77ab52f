"""Truncated divided-power algebra over O_K with its Sen derivation.

Series are stored against the basis a^n/n!, so multiplication only ever uses
integer binomials:  (f g)_n = sum_{i+j=n} C(n, i) f_i g_j.  The derivation

    theta = (1 + e a) d/da,      theta(f)_n = c_{n+1} + e n c_n,

has the constants as kernel and is inverted degree by degree via
c_{n+1} = b_n - e n c_n.  The group substitution a -> a (1 + e b) + b and the
coordinate changes to and from the additive coordinate log(1 + e a)/e are
carried out exactly on the truncation.

Coefficients are only guaranteed through `valid_to`: applying theta loses the
top degree, since the incoming coefficient above the truncation is unknown.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import ConvergenceError, UsageError
from .field import FieldElement, LocalField
from .padic import PadicScalar


class DPSeries:
    """sum c_n a^n/n! for n <= trunc, coefficients in a local field."""

    __slots__ = ("field", "e", "trunc", "coeffs", "valid_to")

    def __init__(self, field: LocalField, coeffs, e: FieldElement | None = None,
                 valid_to: int | None = None):
        self.field = field
        self.e = field.different_e if e is None else e
        if self.e.is_zero():
            raise UsageError("the twist parameter e must be nonzero")
        self.coeffs = tuple(coeffs)
        self.trunc = len(self.coeffs) - 1
        self.valid_to = self.trunc if valid_to is None else min(valid_to, self.trunc)
        if self.trunc < 0:
            raise UsageError("a series needs at least the constant coefficient")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, field, trunc, e=None):
        return cls(field, [field.zero()] * (trunc + 1), e=e)

    @classmethod
    def one(cls, field, trunc, e=None):
        coeffs = [field.one()] + [field.zero()] * trunc
        return cls(field, coeffs, e=e)

    @classmethod
    def from_ints(cls, field, ints, trunc, e=None):
        coeffs = [field.from_int(c) for c in ints]
        coeffs += [field.zero()] * (trunc + 1 - len(coeffs))
        return cls(field, coeffs[:trunc + 1], e=e)

    def replace(self, coeffs, valid_to=None):
        return DPSeries(self.field, coeffs, e=self.e,
                        valid_to=self.valid_to if valid_to is None else valid_to)

    # -- queries ----------------------------------------------------------------

    def is_integral(self) -> bool:
        """Advisory: every stored coefficient has valuation >= 0."""
        return all(c.val_bound() >= 0 for c in self.coeffs)

    def eq_to_precision(self, other, through: int | None = None) -> bool:
        self._check_compatible(other)
        limit = min(self.valid_to, other.valid_to)
        if through is not None:
            limit = min(limit, through)
        return all((self.coeffs[n] - other.coeffs[n]).is_zero()
                   for n in range(limit + 1))

    def _check_compatible(self, other):
        if self.field is not other.field:
            raise UsageError("series live over different fields")
        if not (self.e - other.e).is_zero():
            raise UsageError("series carry different twist parameters e")

    def __repr__(self):
        return f"DPSeries(trunc={self.trunc}, valid_to={self.valid_to})"


def dp_mul(f: DPSeries, g: DPSeries) -> DPSeries:
    """Binomial convolution in the divided-power basis."""
    f._check_compatible(g)
    trunc = min(f.trunc, g.trunc)
    valid = min(f.valid_to, g.valid_to, trunc)
    out = []
    for n in range(trunc + 1):
        acc = f.field.zero()
        for i in range(n + 1):
            acc = acc + (f.coeffs[i] * g.coeffs[n - i]) * comb(n, i)
        out.append(acc)
    return DPSeries(f.field, out, e=f.e, valid_to=valid)


def sen_theta(f: DPSeries) -> DPSeries:
    """theta(f)_n = c_{n+1} + e n c_n; the top output degree is incomplete."""
    out = []
    for n in range(f.trunc + 1):
        term = f.e * f.coeffs[n] * n
        if n + 1 <= f.trunc:
            term = term + f.coeffs[n + 1]
        out.append(term)
    return DPSeries(f.field, out, e=f.e, valid_to=min(f.valid_to, f.trunc) - 1)


def solve_theta(g: DPSeries) -> DPSeries:
    """The unique preimage with zero constant term: c_{n+1} = b_n - e n c_n."""
    out = [g.field.zero()]
    for n in range(g.trunc):
        out.append(g.coeffs[n] - g.e * out[n] * n)
    return DPSeries(g.field, out, e=g.e, valid_to=min(g.valid_to + 1, g.trunc))


def theta_matrix(field: LocalField, trunc: int, e: FieldElement | None = None):
    """Matrix of theta on the degree-<=trunc polynomial part, basis a^n/n!.

    Column n carries theta(a^n/n!) = a^{n-1}/(n-1)! + e n a^n/n!, so the only
    nonzero entries are [n][n] = e n and [n-1][n] = 1.
    """
    e = field.different_e if e is None else e
    d = trunc + 1
    m = [[field.zero() for _ in range(d)] for _ in range(d)]
    for n in range(d):
        m[n][n] = e * n
        if n >= 1:
            m[n - 1][n] = field.one()
    return m


def coaction(f: DPSeries, b: FieldElement) -> DPSeries:
    """Substitution a -> a (1 + e b) + b, exact on the stored polynomial.

    Output degree m is (1 + e b)^m sum_k c_{m+k} b^k / k!, a finite sum here.
    The monitor rejects b of nonpositive valuation whose term valuations keep
    falling, since then the truncated sum no longer tracks the completed one.
    """
    K = f.field
    b = b if isinstance(b, FieldElement) else K.from_scalar(b)
    _monitor_coaction_tail(f, b)
    one_plus_eb = K.one() + f.e * b
    b_over_fact = [K.one()]
    for k in range(1, f.trunc + 1):
        b_over_fact.append(b_over_fact[-1] * b / K.from_int(k))
    out = []
    scale = K.one()
    for m in range(f.trunc + 1):
        acc = K.zero()
        for k in range(f.trunc - m + 1):
            acc = acc + f.coeffs[m + k] * b_over_fact[k]
        out.append(acc * scale)
        scale = scale * one_plus_eb
    return DPSeries(K, out, e=f.e, valid_to=f.valid_to)


def _monitor_coaction_tail(f: DPSeries, b: FieldElement):
    exact, vb = b.pivot_val()
    if not exact or vb > 0:
        return
    p = f.field.p
    window = max(5, p)
    vals = []
    vfact = 0
    for k in range(f.trunc + 1):
        if k:
            vfact += _vp_int(k, p)
        c = f.coeffs[k]
        vals.append(c.val_bound() + k * vb - vfact)
    tail = vals[-window:]
    if any(tail[i] > tail[i + 1] for i in range(len(tail) - 1)):
        raise ConvergenceError(
            "coaction terms keep growing for v(b) = %s <= 0; the truncated sum "
            "does not approximate the completed algebra" % vb,
            concept="coaction convergence monitor")


def _vp_int(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def log_t(field: LocalField, trunc: int, e: FieldElement | None = None) -> DPSeries:
    """The additive coordinate log(1 + e a)/e: coefficients (-e)^(n-1) (n-1)!.

    It solves theta(f) = 1 with zero constant term; e * log_t is log(1 + e a).
    """
    e = field.different_e if e is None else e
    coeffs = [field.zero()]
    cur = field.one()
    for n in range(1, trunc + 1):
        coeffs.append(cur)
        cur = cur * (-e) * n
    return DPSeries(field, coeffs, e=e)


def dp_compose(f: DPSeries, phi: DPSeries) -> DPSeries:
    """f(phi(a)) for phi with zero constant term; degree-filtered, hence exact.

    Uses divided powers gamma_k(phi) = phi^k / k!, whose coefficients stay
    integral whenever phi's do; the division by k is exact in that case.
    """
    f._check_compatible(phi)
    if not phi.coeffs[0].is_zero():
        raise UsageError("composition requires a zero constant term")
    trunc = min(f.trunc, phi.trunc)
    valid = min(f.valid_to, phi.valid_to)
    K = f.field
    out = [f.coeffs[0]] + [K.zero()] * trunc
    gamma = DPSeries.one(K, trunc, e=f.e)
    for n in range(1, trunc + 1):
        gamma = dp_mul(gamma, phi)
        gamma = gamma.replace([c / K.from_int(n) for c in gamma.coeffs])
        for m in range(n, trunc + 1):
            out[m] = out[m] + f.coeffs[n] * gamma.coeffs[m]
    return DPSeries(K, out, e=f.e, valid_to=valid)


def gsharp_map(field: LocalField, trunc: int, e: FieldElement | None = None,
               inverse: bool = False) -> DPSeries:
    """The coordinate change series between the group with law a+b+eab and
    the additive group: log(1 + e a)/e, or (exp(e a) - 1)/e for the inverse.
    """
    e = field.different_e if e is None else e
    if not inverse:
        return log_t(field, trunc, e=e)
    coeffs = [field.zero()]
    cur = field.one()
    for n in range(1, trunc + 1):
        coeffs.append(cur)
        cur = cur * e
    return DPSeries(field, coeffs, e=e)


def gsharp_transport(f: DPSeries, direction: str) -> DPSeries:
    """Compose with the additive-coordinate change; round trips are identity."""
    if direction == "to_gsharp":
        phi = gsharp_map(f.field, f.trunc, e=f.e, inverse=False)
    elif direction == "from_gsharp":
        phi = gsharp_map(f.field, f.trunc, e=f.e, inverse=True)
    else:
        raise UsageError("direction must be 'to_gsharp' or 'from_gsharp'")
    if not phi.is_integral():
        raise ConvergenceError(
            "coordinate-change series is not integral for this e; transport "
            "is not defined on the divided-power lattice",
            concept="divided-power integrality")
    return dp_compose(f, phi)
