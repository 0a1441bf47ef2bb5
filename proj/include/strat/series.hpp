#ifndef STRAT_SERIES_HPP
#define STRAT_SERIES_HPP

#include <map>
#include <optional>
#include <string>

#include "strat/arith.hpp"
#include "strat/support.hpp"

namespace strat {

// The three coefficient rings in play.  gm is the exact Laurent polynomial
// ring k[t^{+-1}]; disc0 and discinf are the Laurent series fields k((t)) and
// k((t^-1)) carried to finite precision.
enum class RingTag { gm, disc0, discinf };

const char* ring_name(RingTag r);
RingTag ring_from_name(const std::string& s);

// Sparse Laurent polynomial / truncated Laurent series over F_p.
//
// Precision convention: a disc0 element is known modulo t^P (all exponents
// < P are stored and correct); a discinf element is known modulo t^{-P}
// (exponents > -P stored).  gm elements are exact and ignore prec().
// Requesting information hidden behind the precision bound raises
// Errc::depth rather than silently returning a wrong answer.
class Series {
 public:
  static constexpr i64 kExact = INT64_MAX;

  Series() = default;
  Series(RingTag ring, i64 p, i64 prec = kExact);
  static Series monomial(RingTag ring, i64 p, i64 e, i64 c, i64 prec = kExact);

  RingTag ring() const { return ring_; }
  i64 p() const { return p_; }
  i64 prec() const { return prec_; }
  bool exact() const { return ring_ == RingTag::gm; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<i64, i64>& terms() const { return terms_; }
  i64 coeff(i64 e) const;
  void set_coeff(i64 e, i64 c);

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series scaled(i64 c) const;
  Series shifted(i64 e) const;  // multiply by t^e
  bool operator==(const Series& o) const;

  // Multiplicative inverse of a unit.  Over gm the element must be a unit
  // monomial; over a disc it must have an invertible leading term within the
  // precision window.
  Series inverse() const;

  // Keep only terms with exponent in U.  When exact_required is set, also
  // prove that the unknown tail region cannot meet U.
  Series restricted(const SupportSet& u, bool exact_required = false) const;

  // (negative-exponent part, nonnegative-exponent part)
  std::pair<Series, Series> split_sign() const;

  // Membership in R^{p^n}: support contained in p^n Z.
  bool level_member(i64 n) const;

  // delta^{(m)} applied termwise: coefficient at t^i scales by C(i, m) mod p.
  Series delta(i64 m) const;

  // Unit decomposition at level n: f = t^{a p^n} * lambda * u with u a
  // 1-unit of the disc (u = 1 over gm, where f must be a unit monomial).
  struct UnitParts;
  UnitParts unit_decompose(i64 n) const;

  // Reinterpret an exact element in a disc at precision P (drops nothing:
  // raises if the element has terms outside the representable window --
  // cannot happen for polynomials, which are finite).
  Series to_local(RingTag side, i64 prec) const;
  // Forget precision and reinterpret the stored terms as an exact element.
  Series to_exact() const;
  Series truncated(i64 prec) const;

  // Agreement on the common known window (capped at `window` if given).
  static bool congruent(const Series& a, const Series& b, i64 window = kExact);

  // Smallest exponent with a known term (disc0/gm), or prec() if none known.
  i64 order_at0() const;
  // Largest exponent (discinf/gm), or -prec() if none known.
  i64 order_atinf() const;

  std::string str() const;

 private:
  RingTag ring_ = RingTag::gm;
  i64 p_ = 2;
  i64 prec_ = kExact;
  std::map<i64, i64> terms_;

  void drop_unknown();
  void check_compatible(const Series& o) const;
};

struct Series::UnitParts {
  i64 a;       // t-order divided by p^n
  i64 lambda;  // leading coefficient
  Series u;    // 1-unit cofactor
};

}  // namespace strat

#endif
