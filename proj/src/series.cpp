#include "strat/series.hpp"

#include <sstream>

namespace strat {

const char* ring_name(RingTag r) {
  switch (r) {
    case RingTag::gm: return "gm";
    case RingTag::disc0: return "disc0";
    case RingTag::discinf: return "discinf";
  }
  return "?";
}

RingTag ring_from_name(const std::string& s) {
  if (s == "gm") return RingTag::gm;
  if (s == "disc0") return RingTag::disc0;
  if (s == "discinf") return RingTag::discinf;
  fail(Errc::parse, "unknown ring: " + s);
}

Series::Series(RingTag ring, i64 p, i64 prec) : ring_(ring), p_(p), prec_(prec) {
  if (!is_prime(p)) fail(Errc::validation, "p must be prime");
  if (ring_ == RingTag::gm) prec_ = kExact;
  // Disc elements carry per-element knowledge: prec_ <= 0 denotes an element
  // about which nothing is known within the working window (the quotient ring
  // is zero there), and prec_ == kExact an exactly known Laurent polynomial
  // viewed inside the disc.
}

Series Series::monomial(RingTag ring, i64 p, i64 e, i64 c, i64 prec) {
  Series s(ring, p, prec);
  s.set_coeff(e, c);
  return s;
}

i64 Series::coeff(i64 e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

void Series::set_coeff(i64 e, i64 c) {
  c = fp::norm(c, p_);
  if (ring_ == RingTag::disc0 && e >= prec_) return;
  if (ring_ == RingTag::discinf && e <= -prec_) return;
  if (c == 0)
    terms_.erase(e);
  else
    terms_[e] = c;
}

void Series::drop_unknown() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    bool keep = true;
    if (ring_ == RingTag::disc0 && it->first >= prec_) keep = false;
    if (ring_ == RingTag::discinf && it->first <= -prec_) keep = false;
    it = keep ? std::next(it) : terms_.erase(it);
  }
}

void Series::check_compatible(const Series& o) const {
  if (ring_ != o.ring_ || p_ != o.p_) fail(Errc::validation, "mixing incompatible coefficient rings");
}

Series Series::operator+(const Series& o) const {
  check_compatible(o);
  Series r(ring_, p_, std::min(prec_, o.prec_));
  r.terms_ = terms_;
  for (auto& [e, c] : o.terms_) {
    i64 v = fp::add(r.coeff(e), c, p_);
    if (v == 0)
      r.terms_.erase(e);
    else
      r.terms_[e] = v;
  }
  r.drop_unknown();
  return r;
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& [e, c] : r.terms_) c = fp::neg(c, p_);
  return r;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

i64 Series::order_at0() const { return terms_.empty() ? prec_ : terms_.begin()->first; }
i64 Series::order_atinf() const { return terms_.empty() ? -prec_ : terms_.rbegin()->first; }

Series Series::operator*(const Series& o) const {
  check_compatible(o);
  i64 prec = kExact;
  // The unknown tail of one factor is shifted by the other factor's order; an
  // exact factor (or an exactly zero one) imposes no constraint.
  auto cap = [](i64 ord, i64 opp) { return ord == kExact || opp == kExact ? kExact : checked_add(ord, opp); };
  if (ring_ == RingTag::disc0)
    prec = std::min(cap(order_at0(), o.prec_), cap(o.order_at0(), prec_));
  else if (ring_ == RingTag::discinf)
    prec = std::min(cap(-order_atinf(), o.prec_), cap(-o.order_atinf(), prec_));
  Series r(ring_, p_, prec);
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) {
      i64 e = checked_add(e1, e2);
      r.set_coeff(e, fp::add(r.coeff(e), fp::mul(c1, c2, p_), p_));
    }
  return r;
}

Series Series::scaled(i64 c) const {
  Series r(ring_, p_, prec_);
  c = fp::norm(c, p_);
  for (auto& [e, v] : terms_) r.set_coeff(e, fp::mul(v, c, p_));
  return r;
}

Series Series::shifted(i64 e) const {
  i64 prec = prec_;
  if (ring_ == RingTag::disc0 && prec != kExact) prec = checked_add(prec, e);
  if (ring_ == RingTag::discinf && prec != kExact) prec = checked_add(prec, -e);
  Series r(ring_, p_, prec);
  for (auto& [e1, c] : terms_) r.set_coeff(checked_add(e1, e), c);
  return r;
}

bool Series::operator==(const Series& o) const {
  return ring_ == o.ring_ && p_ == o.p_ && prec_ == o.prec_ && terms_ == o.terms_;
}

Series Series::inverse() const {
  if (ring_ == RingTag::gm) {
    if (terms_.size() != 1) fail(Errc::validation, "not a unit in k[t^(+-1)]: " + str());
    auto [e, c] = *terms_.begin();
    return monomial(ring_, p_, -e, fp::inv(c, p_));
  }
  if (terms_.empty()) {
    if (prec_ == kExact) fail(Errc::validation, "division by zero");
    fail(Errc::depth, "inverting an element that vanishes within precision");
  }
  if (prec_ == kExact) {
    if (terms_.size() != 1)
      fail(Errc::depth, "inverse of an exact disc element is an infinite series");
    auto [e, c] = *terms_.begin();
    return monomial(ring_, p_, -e, fp::inv(c, p_), kExact);
  }
  // Work in mirrored coordinates for discinf so the leading term is minimal.
  bool mirror = ring_ == RingTag::discinf;
  std::map<i64, i64> ts;
  for (auto& [e, c] : terms_) ts[mirror ? -e : e] = c;
  i64 o = ts.begin()->first;
  i64 lam = ts.begin()->second;
  // In mirrored coordinates the element is known below exponent prec_, so the
  // 1-unit cofactor has relative precision prec_ - o.
  i64 rel = prec_ - o;
  // h = f * lambda^{-1} t^{-o} - 1 has order >= 1; invert 1 + h by geometric series.
  std::map<i64, i64> h;
  for (auto& [e, c] : ts)
    if (e != o) h[e - o] = fp::mul(c, fp::inv(lam, p_), p_);
  // result precision: prec - 2o in mirrored coordinates
  i64 rprec = checked_add(prec_, checked_mul(-2, o));
  if (rprec < 1) return Series(ring_, p_, rprec);
  std::map<i64, i64> acc{{0, 1}}, pw{{0, 1}};
  i64 horder = h.empty() ? rel : h.begin()->first;
  for (i64 k = 1; !h.empty() && k * horder < rel; ++k) {
    std::map<i64, i64> nx;
    for (auto& [e1, c1] : pw)
      for (auto& [e2, c2] : h) {
        i64 e = e1 + e2;
        if (e >= rel) continue;
        nx[e] = fp::add(nx.count(e) ? nx[e] : 0, fp::mul(c1, c2, p_), p_);
      }
    pw = std::move(nx);
    for (auto& [e, c] : pw) {
      i64 v = fp::add(acc.count(e) ? acc[e] : 0, k % 2 ? fp::neg(c, p_) : c, p_);
      if (v == 0)
        acc.erase(e);
      else
        acc[e] = v;
    }
  }
  Series r(ring_, p_, rprec);
  i64 ilam = fp::inv(lam, p_);
  for (auto& [e, c] : acc) {
    i64 ex = e - o;
    r.set_coeff(mirror ? -ex : ex, fp::mul(c, ilam, p_));
  }
  return r;
}

Series Series::restricted(const SupportSet& u, bool exact_required) const {
  if (exact_required && ring_ == RingTag::disc0 && u.intersects_geq(prec_))
    fail(Errc::depth, "support restriction undecidable within precision");
  if (exact_required && ring_ == RingTag::discinf && u.intersects_leq(-prec_))
    fail(Errc::depth, "support restriction undecidable within precision");
  Series r(ring_, p_, prec_);
  for (auto& [e, c] : terms_)
    if (u.contains(e)) r.set_coeff(e, c);
  return r;
}

std::pair<Series, Series> Series::split_sign() const {
  Series neg(ring_, p_, prec_), nonneg(ring_, p_, prec_);
  for (auto& [e, c] : terms_) (e < 0 ? neg : nonneg).set_coeff(e, c);
  return {neg, nonneg};
}

bool Series::level_member(i64 n) const {
  i64 q = checked_pow(p_, n);
  for (auto& [e, c] : terms_)
    if (e % q != 0) return false;
  return true;
}

Series Series::delta(i64 m) const {
  Series r(ring_, p_, prec_);
  for (auto& [e, c] : terms_) r.set_coeff(e, fp::mul(c, binom_mod_p(PExp::integer(e), m, p_), p_));
  return r;
}

Series::UnitParts Series::unit_decompose(i64 n) const {
  i64 q = checked_pow(p_, n);
  if (ring_ == RingTag::gm) {
    if (terms_.size() != 1) fail(Errc::validation, "unit decomposition over gm requires a unit monomial");
    auto [e, c] = *terms_.begin();
    if (e % q != 0) fail(Errc::validation, "unit monomial exponent not divisible by p^n");
    return {e / q, c, monomial(ring_, p_, 0, 1)};
  }
  if (terms_.empty()) fail(Errc::depth, "unit decomposition of an element vanishing within precision");
  i64 o = ring_ == RingTag::disc0 ? order_at0() : order_atinf();
  if (o % q != 0) fail(Errc::validation, "series order not divisible by p^n");
  i64 lam = terms_.count(o) ? terms_.at(o) : 0;
  Series u = shifted(-o).scaled(fp::inv(lam, p_));
  return {o / q, lam, u};
}

Series Series::to_local(RingTag side, i64 prec) const {
  if (ring_ != RingTag::gm) fail(Errc::validation, "to_local expects an exact element");
  Series r(side, p_, prec);
  for (auto& [e, c] : terms_) {
    if (side == RingTag::disc0 && e >= prec) fail(Errc::depth, "polynomial does not fit in precision window");
    if (side == RingTag::discinf && e <= -prec) fail(Errc::depth, "polynomial does not fit in precision window");
    r.set_coeff(e, c);
  }
  return r;
}

Series Series::to_exact() const {
  Series r(RingTag::gm, p_);
  for (auto& [e, c] : terms_) r.set_coeff(e, c);
  return r;
}

Series Series::truncated(i64 prec) const {
  if (ring_ == RingTag::gm) return *this;
  Series r(ring_, p_, std::min(prec, prec_));
  for (auto& [e, c] : terms_) r.set_coeff(e, c);
  return r;
}

bool Series::congruent(const Series& a, const Series& b, i64 window) {
  if (a.p_ != b.p_) return false;
  if (a.ring_ != b.ring_) return false;
  i64 w = std::min({a.prec_, b.prec_, window});
  for (auto& [e, c] : a.terms_) {
    if (a.ring_ == RingTag::disc0 && e >= w) continue;
    if (a.ring_ == RingTag::discinf && e <= -w) continue;
    if (b.coeff(e) != c) return false;
  }
  for (auto& [e, c] : b.terms_) {
    if (a.ring_ == RingTag::disc0 && e >= w) continue;
    if (a.ring_ == RingTag::discinf && e <= -w) continue;
    if (a.coeff(e) != c) return false;
  }
  return true;
}

std::string Series::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (e == 0)
      os << c;
    else {
      if (c != 1) os << c << "*";
      os << "t^" << e;
    }
  }
  return os.str();
}

}  // namespace strat
