#include "strat/arith.hpp"

#include <numeric>

namespace strat {

bool is_prime(i64 p) {
  if (p < 2) return false;
  for (i64 d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) fail(Errc::depth, "integer overflow in exponent arithmetic");
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Errc::depth, "integer overflow in exponent arithmetic");
  return r;
}

i64 checked_pow(i64 base, i64 exp) {
  i64 r = 1;
  for (i64 i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

i64 safe_level_bound(i64 p, i64 scale) {
  if (scale < 1) scale = 1;
  const i64 limit = INT64_MAX / 4;
  i64 n = 0, v = 1;
  while (v <= limit / (p * scale)) {
    v *= p;
    ++n;
  }
  return n;
}

namespace fp {

i64 norm(i64 a, i64 p) {
  a %= p;
  return a < 0 ? a + p : a;
}
i64 add(i64 a, i64 b, i64 p) { return norm(a + b, p); }
i64 sub(i64 a, i64 b, i64 p) { return norm(a - b, p); }
i64 mul(i64 a, i64 b, i64 p) { return norm((__int128)a * b % p, p); }
i64 neg(i64 a, i64 p) { return norm(-a, p); }

i64 pow(i64 a, i64 e, i64 p) {
  a = norm(a, p);
  i64 r = 1;
  while (e > 0) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

i64 inv(i64 a, i64 p) {
  a = norm(a, p);
  if (a == 0) fail(Errc::validation, "division by zero in F_p");
  return pow(a, p - 2, p);
}

}  // namespace fp

PExp::PExp(i64 n, i64 d) {
  if (d == 0) fail(Errc::validation, "exponent with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i64 g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num = n;
  den = d;
}

PExp PExp::operator+(const PExp& o) const {
  return PExp(checked_add(checked_mul(num, o.den), checked_mul(o.num, den)), checked_mul(den, o.den));
}

PExp PExp::operator-(const PExp& o) const { return *this + PExp(-o.num, o.den); }

PExp PExp::operator-() const { return PExp(-num, den); }

PExp PExp::class_mod_z() const {
  i64 r = num % den;
  if (r < 0) r += den;
  return PExp(r, den);
}

void check_exponent(const PExp& alpha, i64 p) {
  if (!is_prime(p)) fail(Errc::validation, "p must be prime");
  if (alpha.den % p == 0) fail(Errc::validation, "exponent denominator divisible by p");
  if ((p - 1) % alpha.den != 0)
    fail(Errc::validation, "exponent denominator must divide p-1 (digit stream not eventually constant)");
}

namespace {

// One digit step: returns d = alpha mod p and replaces alpha by (alpha - d)/p.
i64 digit_step(PExp& a, i64 p) {
  i64 d = fp::mul(fp::norm(a.num, p), fp::inv(fp::norm(a.den, p), p), p);
  // num - d*den is divisible by p because a = d (mod p) in Z_p.
  i64 n = checked_add(a.num, -checked_mul(d, a.den));
  a = PExp(n / p, a.den);
  return d;
}

}  // namespace

i64 padic_digit(const PExp& alpha, i64 n, i64 p) {
  check_exponent(alpha, p);
  PExp a = alpha;
  i64 d = 0;
  PExp prev = a;
  for (i64 i = 0; i <= n; ++i) {
    prev = a;
    d = digit_step(a, p);
    if (a == prev) break;  // digit stream is constant from here on
  }
  return d;
}

i64 digit_preperiod(const PExp& alpha, i64 p) {
  check_exponent(alpha, p);
  PExp a = alpha;
  for (i64 i = 0; i < 256; ++i) {
    PExp prev = a;
    digit_step(a, p);
    if (a == prev) return i;
  }
  fail(Errc::depth, "digit stream failed to stabilize");
}

i64 digit_tail(const PExp& alpha, i64 p) { return padic_digit(alpha, digit_preperiod(alpha, p), p); }

i64 digit_partial_sum(const PExp& alpha, i64 n, i64 p) {
  i64 s = 0, q = 1;
  for (i64 k = 0; k < n; ++k) {
    s = checked_add(s, checked_mul(padic_digit(alpha, k, p), q));
    q = checked_mul(q, p);
  }
  return s;
}

i64 binom_small_mod_p(i64 a, i64 b, i64 p) {
  if (b < 0 || b > a) return 0;
  i64 r = 1;
  for (i64 i = 0; i < b; ++i) r = fp::mul(r, fp::norm(a - i, p), p);
  for (i64 i = 1; i <= b; ++i) r = fp::mul(r, fp::inv(i, p), p);
  return r;
}

i64 binom_mod_p(const PExp& alpha, i64 m, i64 p) {
  check_exponent(alpha, p);
  if (m < 0) fail(Errc::validation, "binomial lower index must be nonnegative");
  PExp a = alpha;
  i64 r = 1;
  while (m > 0 || !a.is_zero()) {
    i64 mi = m % p;
    i64 ai = digit_step(a, p);
    r = fp::mul(r, binom_small_mod_p(ai, mi, p), p);
    if (r == 0) return 0;
    m /= p;
    if (m == 0) {
      // Remaining digits of m are zero and C(ai, 0) = 1: done.
      break;
    }
  }
  return r;
}

}  // namespace strat
