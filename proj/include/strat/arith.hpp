#ifndef STRAT_ARITH_HPP
#define STRAT_ARITH_HPP

#include <cstdint>
#include <vector>

#include "strat/errors.hpp"

namespace strat {

using i64 = std::int64_t;

bool is_prime(i64 p);

// Checked integer helpers: overflow raises Errc::depth, since it only occurs
// when a caller pushes a computation past the representable level range.
i64 checked_add(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);
i64 checked_pow(i64 base, i64 exp);

// Largest n such that p^n * scale still fits comfortably in an i64.
i64 safe_level_bound(i64 p, i64 scale);

// Arithmetic in the prime field F_p.  Values are normalized to [0, p).
namespace fp {
i64 norm(i64 a, i64 p);
i64 add(i64 a, i64 b, i64 p);
i64 sub(i64 a, i64 b, i64 p);
i64 mul(i64 a, i64 b, i64 p);
i64 neg(i64 a, i64 p);
i64 pow(i64 a, i64 e, i64 p);
i64 inv(i64 a, i64 p);
}  // namespace fp

// Exact rational exponent num/den, den > 0, gcd(num, den) = 1.  These encode
// p-adic integers whose base-p digit stream is eventually constant; that is
// equivalent to gcd(den, p) = 1 together with den | p - 1, which check_p_ok
// enforces for a given prime.
struct PExp {
  i64 num = 0;
  i64 den = 1;

  PExp() = default;
  PExp(i64 n, i64 d);
  static PExp integer(i64 n) { return PExp(n, 1); }

  bool is_integer() const { return den == 1; }
  bool is_zero() const { return num == 0; }

  PExp operator+(const PExp& o) const;
  PExp operator-(const PExp& o) const;
  PExp operator-() const;
  PExp operator+(i64 n) const { return *this + PExp::integer(n); }
  PExp operator-(i64 n) const { return *this - PExp::integer(n); }
  bool operator==(const PExp& o) const { return num == o.num && den == o.den; }
  bool operator!=(const PExp& o) const { return !(*this == o); }

  // Representative of the class mod Z lying in [0, 1).
  PExp class_mod_z() const;
  bool is_normal_form() const { return num >= 0 && num < den; }
};

// Validates that alpha has an eventually constant digit stream for p.
void check_exponent(const PExp& alpha, i64 p);

// n-th base-p digit of alpha (digit 0 is alpha mod p), each in [0, p).
i64 padic_digit(const PExp& alpha, i64 n, i64 p);

// Number of levels before the digit stream of alpha becomes constant, and
// the constant itself.
i64 digit_preperiod(const PExp& alpha, i64 p);
i64 digit_tail(const PExp& alpha, i64 p);

// Exact partial digit sum sum_{k<n} digit(alpha,k) p^k.
i64 digit_partial_sum(const PExp& alpha, i64 n, i64 p);

// Binomial coefficient C(a, b) mod p for 0 <= a, b < p.
i64 binom_small_mod_p(i64 a, i64 b, i64 p);

// Generalized Lucas product: C(alpha, m) mod p as the product over base-p
// digits, prod_i C(alpha_i, m_i) mod p, for m >= 0.
i64 binom_mod_p(const PExp& alpha, i64 m, i64 p);

}  // namespace strat

#endif
