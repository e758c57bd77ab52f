"""Exact arithmetic in Q_p at finite absolute precision.

A scalar is either known-nonzero, stored as p^val * unit with the unit part
kept modulo p^(prec - val), or zero-to-precision, meaning the element is 0
modulo p^prec and nothing more is known.  All arithmetic propagates the
largest absolute precision the operands justify:

    add/sub : min(N_x, N_y)
    mul     : min(N_x + v(y), N_y + v(x))
    div     : min(N_x - v(y), N_y + v(x) - 2 v(y))

Valuations are normalized by v(p) = 1.  The module also provides the p-adic
exponential and logarithm (with their convergence balls) and Newton polygons
with slopes reported as root valuations.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ConvergenceError, DomainError, PrecisionError, UsageError

DEFAULT_PRECISION = 50

# Series stop rule: a term may only be dropped once its valuation clears the
# target and the last max(5, p) term valuations were nondecreasing.
HARD_CAP_FACTOR = 10


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_fraction(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def inv_mod(a: int, modulus: int) -> int:
    return pow(a, -1, modulus)


def fraction_mod(x: Fraction, p: int, prec: int) -> int:
    """Reduce a p-integral rational modulo p^prec."""
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise ValueError("fraction is not p-integral")
    m = p ** prec
    return (num % m) * inv_mod(den % m, m) % m


class PadicScalar:
    """An element of Q_p known modulo p^prec."""

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p, val, unit, prec):
        self.p = p
        self.val = val          # None for zero-to-precision
        self.unit = unit        # 0 for zero-to-precision
        self.prec = prec

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, p: int, prec: int = DEFAULT_PRECISION) -> "PadicScalar":
        return cls(p, None, 0, prec)

    @classmethod
    def one(cls, p: int, prec: int = DEFAULT_PRECISION) -> "PadicScalar":
        return cls(p, 0, 1, prec)

    @classmethod
    def from_residue(cls, p: int, residue: int, prec: int) -> "PadicScalar":
        """Build from an integer known modulo p^prec (absolute window at 0)."""
        residue %= p ** prec
        if residue == 0:
            return cls.zero(p, prec)
        v = vp_int(residue, p)
        unit = (residue // p ** v) % p ** (prec - v)
        return cls(p, v, unit, prec)

    @classmethod
    def from_int(cls, n: int, p: int, prec: int = DEFAULT_PRECISION) -> "PadicScalar":
        return cls.from_residue(p, n, prec)

    @classmethod
    def from_fraction(cls, x: Fraction, p: int, prec: int = DEFAULT_PRECISION) -> "PadicScalar":
        """Exact rational at absolute precision prec; denominator may carry p."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        v = vp_fraction(x, p)
        unit_frac = x / Fraction(p) ** v
        rel = prec - v
        if rel <= 0:
            return cls.zero(p, prec)
        unit = fraction_mod(unit_frac, p, rel)
        return cls(p, v, unit, prec)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        """Zero to the stored precision."""
        return self.val is None

    def valuation(self):
        """Exact valuation, or None when only the bound >= prec is known."""
        return self.val

    def val_bound(self) -> int:
        """Exact valuation for known-nonzero, else the lower bound prec."""
        return self.prec if self.val is None else self.val

    def pivot_val(self):
        """(is_exact, value) pair used by valuation-pivoted elimination."""
        if self.val is None:
            return (False, Fraction(self.prec))
        return (True, Fraction(self.val))

    def rel_prec(self) -> int:
        return self.prec if self.val is None else self.prec - self.val

    def lift(self) -> int:
        """Canonical integer representative modulo p^prec (val >= 0 only)."""
        if self.val is None:
            return 0
        if self.val < 0:
            raise ValueError("lift of a non-integral scalar")
        return (self.p ** self.val * self.unit) % self.p ** self.prec

    def lift_fraction(self) -> Fraction:
        if self.val is None:
            return Fraction(0)
        return Fraction(self.p) ** self.val * self.unit

    def residue(self) -> int:
        """Image in F_p; requires val >= 0 and one known digit."""
        if self.val is None:
            if self.prec < 1:
                raise PrecisionError("no digit available for residue")
            return 0
        if self.val < 0:
            raise DomainError("residue of an element of negative valuation")
        if self.prec < 1:
            raise PrecisionError("no digit available for residue")
        return self.unit % self.p if self.val == 0 else 0

    def truncated(self, prec: int) -> "PadicScalar":
        prec = min(prec, self.prec)
        if self.val is None or self.val >= prec:
            return PadicScalar.zero(self.p, prec)
        return PadicScalar(self.p, self.val, self.unit % self.p ** (prec - self.val), prec)

    # -- arithmetic --------------------------------------------------------

    def _check_same_p(self, other: "PadicScalar") -> None:
        if self.p != other.p:
            raise UsageError("cannot mix scalars over different primes")

    def __neg__(self):
        if self.val is None:
            return self
        rel = self.prec - self.val
        return PadicScalar(self.p, self.val, (-self.unit) % self.p ** rel, self.prec)

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicScalar.from_int(other, self.p, self.prec)
        self._check_same_p(other)
        p = self.p
        n = min(self.prec, other.prec)
        known = [t for t in (self, other) if t.val is not None and t.val < n]
        if not known:
            return PadicScalar.zero(p, n)
        m = min(t.val for t in known)
        width = n - m
        s = sum(p ** (t.val - m) * t.unit for t in known) % p ** width
        if s == 0:
            return PadicScalar.zero(p, n)
        v = vp_int(s, p)
        unit = (s // p ** v) % p ** (width - v)
        return PadicScalar(p, m + v, unit, n)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        if isinstance(other, int):
            other = PadicScalar.from_int(other, self.p, self.prec)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = PadicScalar.from_int(other, self.p, self.prec)
        self._check_same_p(other)
        if self.val is None and other.val is None:
            return PadicScalar.zero(self.p, self.prec + other.prec)
        if self.val is None:
            return PadicScalar.zero(self.p, self.prec + other.val)
        if other.val is None:
            return PadicScalar.zero(self.p, other.prec + self.val)
        v = self.val + other.val
        rel = min(self.prec - self.val, other.prec - other.val)
        unit = self.unit * other.unit % self.p ** rel
        return PadicScalar(self.p, v, unit, v + rel)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = PadicScalar.from_int(other, self.p, self.prec)
        self._check_same_p(other)
        if other.val is None:
            raise PrecisionError(
                "division by a scalar that is zero to precision %d" % other.prec)
        if self.val is None:
            return PadicScalar.zero(self.p, self.prec - other.val)
        v = self.val - other.val
        rel = min(self.prec - self.val, other.prec - other.val)
        unit = self.unit * inv_mod(other.unit, self.p ** rel) % self.p ** rel
        return PadicScalar(self.p, v, unit, v + rel)

    def inverse(self):
        return PadicScalar.one(self.p, self.prec).__truediv__(self)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicScalar(self.p, 0, 1, self.rel_prec())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # Two scalars are equal when they agree on the coarser stored window.
    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicScalar.from_int(other, self.p, self.prec)
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if self.val is None:
            return f"O({self.p}^{self.prec})"
        return f"{self.p}^{self.val}*{self.unit} + O({self.p}^{self.prec})"


def scalar_arith(x: PadicScalar, y: PadicScalar, op: str) -> PadicScalar:
    """Dispatch table form of +, -, *, / used by the JSON front end."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise UsageError(f"unknown scalar operation {op!r}")


# ---------------------------------------------------------------------------
# monitored series summation
# ---------------------------------------------------------------------------

def sum_padic_series(terms, p: int, target_prec: int) -> PadicScalar:
    """Sum exact-rational terms modulo p^target_prec.

    Stops once the next term's valuation reaches the target and the last
    max(5, p) term valuations were nondecreasing; a hard cap of
    10 * target_prec terms raises ConvergenceError.
    """
    window = max(5, p)
    hard_cap = HARD_CAP_FACTOR * max(target_prec, 1)
    acc = 0
    modulus = p ** target_prec
    recent = []
    count = 0
    for term in terms:
        count += 1
        if count > hard_cap:
            raise ConvergenceError(
                "series exceeded %d terms without clearing precision %d"
                % (hard_cap, target_prec),
                concept="series stop rule")
        if term == 0:
            v = target_prec
        else:
            v = vp_fraction(term, p)
            if v < target_prec:
                acc = (acc + fraction_mod(term / Fraction(p) ** v, p, target_prec - v)
                       * p ** v) % modulus
        recent.append(v)
        if len(recent) > window:
            recent.pop(0)
        if v >= target_prec and len(recent) == window and \
                all(recent[i] <= recent[i + 1] for i in range(window - 1)):
            break
    else:
        # generator exhausted: fine, it was a finite sum
        pass
    return PadicScalar.from_residue(p, acc, target_prec)


def exp_domain_threshold(p: int) -> int:
    """Smallest integer valuation inside the exponential's convergence ball.

    The ball is v(x) > alpha with alpha = 1/(p-1) for p odd and the
    exponential over Q_2 converging only for v(x) >= 2.
    """
    return 2 if p == 2 else 1


def padic_exp(x: PadicScalar, target_prec=None) -> PadicScalar:
    """exp(x) = sum x^n / n!, defined for v(x) above the convergence radius."""
    p = x.p
    prec = x.prec if target_prec is None else min(target_prec, x.prec)
    if x.is_zero():
        return PadicScalar.one(p, prec)
    threshold = exp_domain_threshold(p)
    if x.val < threshold:
        alpha = Fraction(1, 2) if p == 2 else Fraction(1, p - 1)
        raise DomainError(
            "exp requires v(x) > alpha = %s (v(x) >= %d for p = %d); got v(x) = %d"
            % (alpha, threshold, p, x.val),
            concept="convergence radius alpha")
    x0 = Fraction(x.lift())

    def terms():
        term = Fraction(1)
        n = 0
        while True:
            yield term
            n += 1
            term = term * x0 / n

    return sum_padic_series(terms(), p, prec)


def padic_log(x: PadicScalar, target_prec=None) -> PadicScalar:
    """log(x) = sum (-1)^(n-1) (x-1)^n / n, defined for v(x-1) >= 1."""
    p = x.p
    prec = x.prec if target_prec is None else min(target_prec, x.prec)
    u = x - PadicScalar.one(p, x.prec)
    if u.is_zero():
        return PadicScalar.zero(p, prec)
    if u.val < 1:
        raise DomainError(
            "log requires v(x - 1) >= 1; got v(x - 1) = %d" % u.val,
            concept="logarithm domain 1 + pZ_p")
    u0 = Fraction(u.lift())

    def terms():
        power = Fraction(1)
        n = 0
        while True:
            n += 1
            power = power * (-u0)
            yield -power / n

    return sum_padic_series(terms(), p, prec)


# ---------------------------------------------------------------------------
# polynomials over Q_p
# ---------------------------------------------------------------------------

class PadicPoly:
    """Dense polynomial over Q_p, coefficients ascending by degree."""

    def __init__(self, coeffs, monic=False):
        if not coeffs:
            raise UsageError("polynomial needs at least one coefficient")
        self.coeffs = tuple(coeffs)
        self.monic = monic

    @classmethod
    def from_ints(cls, ints, p, prec=DEFAULT_PRECISION):
        coeffs = [PadicScalar.from_int(c, p, prec) for c in ints]
        return cls(coeffs, monic=(ints[-1] == 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def p(self) -> int:
        return self.coeffs[0].p

    def __mul__(self, other):
        p = self.p
        prec = min(c.prec for c in self.coeffs + other.coeffs)
        out = [PadicScalar.zero(p, prec) for _ in range(self.degree + other.degree + 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PadicPoly(out, monic=self.monic and other.monic)

    def evaluate(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    def derivative(self):
        if self.degree == 0:
            return PadicPoly([PadicScalar.zero(self.p, self.coeffs[0].prec)])
        return PadicPoly([self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def scaled_roots(self, c: int) -> "PadicPoly":
        """Coefficient transform sending every root r to p^c * r."""
        p = self.p
        d = self.degree
        out = []
        for i, a in enumerate(self.coeffs):
            out.append(a * PadicScalar.from_fraction(Fraction(p) ** (c * (d - i)), p, a.prec + abs(c) * d))
        return PadicPoly(out, monic=self.monic)


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------

class PolygonSlope:
    """One slope entry: `mult` roots of valuation `value` (>= value if not exact)."""

    __slots__ = ("value", "mult", "exact")

    def __init__(self, value: Fraction, mult: int, exact: bool = True):
        self.value = Fraction(value)
        self.mult = mult
        self.exact = exact

    def __repr__(self):
        tag = "" if self.exact else ">="
        return f"Slope({tag}{self.value} x{self.mult})"

    def __eq__(self, other):
        return (self.value, self.mult, self.exact) == (other.value, other.mult, other.exact)


class NewtonPolygon:
    """Lower convex hull of (i, v(c_i)); slopes are root valuations."""

    def __init__(self, vertices, slopes):
        self.vertices = tuple(vertices)      # [(index, Fraction valuation)]
        self.slopes = tuple(slopes)          # [PolygonSlope], root vals descending

    def slope_multiset(self):
        """Sorted list of exact root valuations with multiplicity."""
        out = []
        for s in self.slopes:
            if s.exact:
                out.extend([s.value] * s.mult)
        return sorted(out)

    def total_multiplicity(self) -> int:
        return sum(s.mult for s in self.slopes)

    def all_slopes_positive(self) -> bool:
        for s in self.slopes:
            if s.exact and s.value <= 0:
                return False
            if not s.exact and s.value <= 0:
                raise PrecisionError(
                    "polygon slope only bounded below by %s; raise the working "
                    "precision to certify positivity" % s.value)
        return True

    def offending_slopes(self):
        return [s.value for s in self.slopes if s.exact and s.value <= 0]

    def __repr__(self):
        return f"NewtonPolygon(vertices={list(self.vertices)}, slopes={list(self.slopes)})"


def newton_polygon_from_points(points, allow_bounds: bool = False) -> NewtonPolygon:
    """Hull of points (index, exact_val or None, lower_bound).

    Bound-only points must sit on or above the hull of the exact points;
    a bound below the hull is a hull-relevant unknown and raises.  When
    allow_bounds is set, an all-unknown left end is reported as a single
    inexact slope entry instead of raising.
    """
    exact = [(i, Fraction(v)) for (i, v, _b) in points if v is not None]
    if not exact:
        raise PrecisionError("no coefficient valuation is exactly known")
    exact.sort()
    # monotone-chain lower hull
    hull = []
    for pt in exact:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)

    def hull_value(i: int) -> Fraction:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= i <= x2:
                return y1 + Fraction(y2 - y1, x2 - x1) * (i - x1)
        raise ValueError("abscissa outside hull span")

    i_first = hull[0][0]
    v_first = hull[0][1]
    left_bounds = []
    for (i, v, bound) in points:
        if v is not None:
            continue
        if i < i_first:
            left_bounds.append((i, Fraction(bound)))
            continue
        if Fraction(bound) < hull_value(i):
            raise PrecisionError(
                "coefficient at index %d is zero to precision %s but the hull "
                "needs its valuation; raise the working precision" % (i, bound))

    slopes = []
    if left_bounds:
        if not allow_bounds:
            raise PrecisionError(
                "coefficients below index %d are zero to precision; raise the "
                "working precision (or accept slope lower bounds)" % i_first)
        s_min = min(Fraction(b - v_first, i_first - i) for (i, b) in left_bounds)
        slopes.append(PolygonSlope(s_min, i_first, exact=False))
    elif i_first != 0:
        raise ValueError("polygon is missing low-degree points")

    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append(PolygonSlope(Fraction(y1 - y2, x2 - x1), x2 - x1, exact=True))
    return NewtonPolygon(hull, slopes)


def newton_polygon(f: PadicPoly, allow_bounds: bool = False) -> NewtonPolygon:
    """Newton polygon of a monic polynomial over Q_p."""
    coeffs = list(f.coeffs)
    lead = coeffs[-1]
    if lead.is_zero():
        raise PrecisionError("leading coefficient is zero to precision")
    if not (f.monic or (lead.val == 0 and lead.unit == 1)):
        coeffs = [c / lead for c in coeffs]
    points = []
    for i, c in enumerate(coeffs):
        if c.is_zero():
            points.append((i, None, Fraction(c.prec)))
        else:
            points.append((i, Fraction(c.val), Fraction(c.val)))
    # monic leading point is exact by construction
    points[-1] = (f.degree, Fraction(0), Fraction(0))
    return newton_polygon_from_points(points, allow_bounds=allow_bounds)
