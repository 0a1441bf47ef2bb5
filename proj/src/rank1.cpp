#include "strat/rank1.hpp"

namespace strat {

Tower make_oalpha(const PExp& alpha, i64 p, i64 depth, RingTag ring, i64 prec) {
  check_exponent(alpha, p);
  Tower t;
  t.p = p;
  t.ring = ring;
  t.group = Group::D;
  t.rank = 1;
  t.depth = depth;
  t.prec = ring == RingTag::gm ? Series::kExact : prec;
  t.twist = {alpha};
  for (i64 n = 0; n < depth; ++n) {
    i64 e = checked_mul(padic_digit(alpha, n, p), checked_pow(p, n));
    Mat m(1, 1, Series(ring, p, t.prec));
    m.at(0, 0).set_coeff(e, 1);
    t.levels.push_back(m);
  }
  return t;
}

namespace {

// Exact rational value of one diagonal position: sum of the decomposed
// monomial exponents over the explicit levels, plus the twist tail
// twist - sum_{n<N} digit(twist, n) p^n.
PExp diag_value(const Tower& t, i64 i) {
  i64 s = 0, q = 1;
  for (i64 n = 0; n < t.depth; ++n) {
    auto parts = t.levels[n].at(i, i).unit_decompose(n);
    s = checked_add(s, checked_mul(parts.a, q));
    q = checked_mul(q, t.p);
  }
  PExp tail = t.twist.at(i) - PExp::integer(digit_partial_sum(t.twist.at(i), t.depth, t.p));
  return PExp::integer(s) + tail;
}

}  // namespace

PExp classify_rank1_value(const Tower& t) {
  if (t.rank != 1) fail(Errc::validation, "classify_rank1 expects rank 1");
  t.validate();
  return diag_value(t, 0);
}

Rank1Class classify_rank1(const Tower& t) {
  PExp v = classify_rank1_value(t);
  if (t.ring == RingTag::discinf) v = -v;
  return {v.class_mod_z()};
}

std::vector<PExp> diagonal_class_values(const Tower& t) {
  if (t.group != Group::B && t.group != Group::D && t.rank != 1)
    fail(Errc::validation, "diagonal classes require a triangular tower");
  std::vector<PExp> out;
  for (i64 i = 0; i < t.rank; ++i) out.push_back(diag_value(t, i));
  return out;
}

Rank1Class flip_side(const Rank1Class& c) { return {(-c.alpha).class_mod_z()}; }

}  // namespace strat
