#ifndef STRAT_UNIPOTENT_HPP
#define STRAT_UNIPOTENT_HPP

#include "strat/tower.hpp"

namespace strat {

// Level multiplier sequence (beta_n) of a twisted G_a system: the gauge
// action is a_n ~ a_n + y_n - t^{beta_n p^n} y_{n+1}.  For a standalone
// class this is the base-p digit sequence of the twist; entries extracted
// from a triangular tower carry the raw difference of the diagonal digit
// sequences instead, which agrees with the digits mod p levelwise but may
// take negative values.
struct MultiplierSeq {
  PExp alpha;               // class value of the twist
  std::vector<i64> prefix;  // beta_0 .. beta_{k-1}
  i64 tail = 0;             // beta_n for n >= k (eventually constant)

  i64 beta(i64 n) const { return n < (i64)prefix.size() ? prefix[n] : tail; }
  i64 stable_from() const { return (i64)prefix.size(); }

  static MultiplierSeq from_digits(const PExp& alpha, i64 p);
};

// Element of the twisted limit: finitely many explicit levels (prefix)
// followed by either zero or a self-similar tail a_n = sum_j c_j t^{e_j p^n}
// for n >= from.
struct UnipClass {
  i64 p = 2;
  PExp twist;
  std::vector<Series> prefix;  // exact Laurent polynomials, level n < len
  struct Tail {
    i64 from = 0;
    std::map<i64, i64> terms;  // e -> coefficient
  } tail;

  bool tail_zero() const { return tail.terms.empty(); }
  Series level(i64 n) const;
  void validate() const;

  // Raise the tail start, materializing the intermediate levels.
  UnipClass with_tail_from(i64 f) const;

  UnipClass operator+(const UnipClass& o) const;
  UnipClass operator-(const UnipClass& o) const;
  UnipClass operator-() const;
  bool is_zero() const;
};

struct AdditiveWitness {
  std::vector<Series> ys;  // y_0 .. y_M; zero beyond
  Series y(i64 n, i64 p, RingTag ring = RingTag::gm, i64 prec = Series::kExact) const;
};

// a_from(n) - a_to(n) == y_n - t^{beta_n p^n} y_{n+1} for all n < levels,
// within the given precision window when the witness is held over a disc.
bool verify_additive(const UnipClass& from, const UnipClass& to, const MultiplierSeq& beta,
                     const AdditiveWitness& w, i64 levels, RingTag ring = RingTag::gm,
                     i64 window = Series::kExact);

struct NormalizeResult {
  UnipClass normalized;
  AdditiveWitness witness;
};

// Support normalization: gauge the class so every level avoids the residue
// class beta_n p^n + p^{n+1} Z.  Terms landing on the forbidden residue
// migrate one level up with exponent e -> (e - beta_n)/p; a term caught in
// the fixed-point cycle of that contraction never resurfaces and is dropped
// (its trivialization is materialized in the witness level by level).
NormalizeResult normalize_support(const UnipClass& c, const MultiplierSeq& beta, const RunConfig& cfg);

struct DecideResult {
  bool trivial = false;
  AdditiveWitness witness;              // when trivial
  UnipClass normalized;                 // always
  std::map<i64, i64> offending;         // normalized tail terms violating the criterion
};

// Triviality over the given ring, decided on the normalized representative:
// gm needs an empty tail, disc0 needs all tail exponents >= 0, discinf needs
// all tail exponents < 0.  Witness series are truncated to cfg.precision
// over the discs.
DecideResult decide_trivial(const UnipClass& c, RingTag ring, const MultiplierSeq& beta,
                            const RunConfig& cfg);

// Telescoping witness for a normalized class satisfying the ring criterion:
// y_m = a_m + sum_{n>m} a_n t^{beta_m p^m + ... + beta_{n-1} p^{n-1}}.
AdditiveWitness witness_ysum(const UnipClass& normalized, RingTag ring, const MultiplierSeq& beta,
                             const RunConfig& cfg);

// (negative-exponent part, nonnegative-exponent part), levelwise.
std::pair<UnipClass, UnipClass> split_class(const UnipClass& c);

struct GlueResult {
  UnipClass glued;
  AdditiveWitness witness0;    // glued - a trivialized over disc0
  AdditiveWitness witnessinf;  // glued - b trivialized over discinf
};

// Glue a class prescribed near 0 with one prescribed near infinity: keep the
// negative part of the first and the nonnegative part of the second after
// normalization.
GlueResult glue_rank2(const UnipClass& a, const UnipClass& b, const MultiplierSeq& beta,
                      const RunConfig& cfg);

}  // namespace strat

#endif
