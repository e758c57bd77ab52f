"""
The divided-power algebra and its derivation
============================================

Series live against the basis a^n/n!, where multiplication uses only integer
binomials.  The derivation theta = (1 + e a) d/da kills exactly the
constants; solving theta f = g is a two-term recursion; and the group
substitution a -> a(1 + e b) + b acts exactly on truncated polynomials.
"""

from senlab import (DPSeries, coaction, dp_mul, eisenstein_field,
                    gsharp_transport, log_t, qp_field, sen_theta, solve_theta)
from senlab.padic import PadicScalar, padic_log

K = eisenstein_field(3, [-3, 0, 1], prec=40)
e = K.different_e
N = 12

# a * a = 2 (a^2/2!): the structure constants are binomials
a = DPSeries.from_ints(K, [0, 1], N)
print("(a*a) coefficient at a^2/2! :", dp_mul(a, a).coeffs[2])

# theta(a) = 1 + e a, and t = 1 + e a is a theta-eigenvector with value e
t = DPSeries(K, [K.one(), e] + [K.zero()] * (N - 1))
print("theta(t) = e t:", all(
    (sen_theta(t).coeffs[n] - e * t.coeffs[n]).is_zero() for n in range(N)))

# solving theta f = 1 gives the additive coordinate log(1 + e a)/e,
# whose divided-power coefficients are (-e)^(n-1) (n-1)!
sol = solve_theta(DPSeries.one(K, N))
print("solve(1) equals log_t:", sol.eq_to_precision(log_t(K, N)))

# the coordinate changes to/from the additive group are inverse substitutions
f = DPSeries.from_ints(K, [2, 7, 1, 5], N)
round_trip = gsharp_transport(gsharp_transport(f, "to_gsharp"), "from_gsharp")
print("coordinate-change round trip:", round_trip.eq_to_precision(f))

# over Q_3 (where e = 1) the substitution shifts log_t by the scalar log;
# compute with truncation headroom so the compared degrees are exact
Q = qp_field(3, prec=40)
lt = log_t(Q, 60)
b = Q.from_int(3)
shifted = coaction(lt, b)
const = padic_log(PadicScalar.from_int(4, 3, 40))
print("coaction(log_t, 3) - log_t = log(4):",
      (shifted.coeffs[0] - Q.from_scalar(const)).is_zero(),
      all((shifted.coeffs[n] - lt.coeffs[n]).is_zero() for n in range(1, 25)))
