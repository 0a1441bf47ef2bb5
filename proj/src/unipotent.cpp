#include "strat/unipotent.hpp"

#include <algorithm>
#include <optional>

namespace strat {

MultiplierSeq MultiplierSeq::from_digits(const PExp& alpha, i64 p) {
  MultiplierSeq m;
  m.alpha = alpha;
  i64 k = digit_preperiod(alpha, p);
  for (i64 n = 0; n < k; ++n) m.prefix.push_back(padic_digit(alpha, n, p));
  m.tail = padic_digit(alpha, k, p);
  return m;
}

Series UnipClass::level(i64 n) const {
  if (n < (i64)prefix.size()) return prefix[n];
  Series s(RingTag::gm, p);
  if (!tail.terms.empty() && n >= tail.from) {
    i64 q = checked_pow(p, n);
    for (auto& [e, c] : tail.terms) s.set_coeff(checked_mul(e, q), c);
  }
  return s;
}

void UnipClass::validate() const {
  if (!is_prime(p)) fail(Errc::validation, "p must be prime");
  check_exponent(twist, p);
  for (i64 n = 0; n < (i64)prefix.size(); ++n) {
    if (prefix[n].p() != p || prefix[n].ring() != RingTag::gm)
      fail(Errc::validation, "class prefix entry must be an exact polynomial over F_p");
    if (!prefix[n].level_member(n))
      fail(Errc::validation, "class level " + std::to_string(n) + " outside R^(p^n)");
  }
  if (!tail.terms.empty() && tail.from < (i64)prefix.size())
    fail(Errc::validation, "tail start overlaps explicit prefix");
  for (auto& [e, c] : tail.terms)
    if (fp::norm(c, p) == 0) fail(Errc::validation, "tail term with zero coefficient");
}

UnipClass UnipClass::with_tail_from(i64 f) const {
  UnipClass r = *this;
  if (tail.terms.empty()) {
    return r;
  }
  if (f <= tail.from) return r;
  while ((i64)r.prefix.size() < f) r.prefix.push_back(level(r.prefix.size()));
  r.tail.from = f;
  return r;
}

UnipClass UnipClass::operator+(const UnipClass& o) const {
  if (p != o.p || !(twist == o.twist)) fail(Errc::validation, "adding classes with different twists");
  i64 f = std::max({(i64)prefix.size(), (i64)o.prefix.size(), tail.terms.empty() ? 0 : tail.from,
                    o.tail.terms.empty() ? 0 : o.tail.from});
  UnipClass a = with_tail_from(f), b = o.with_tail_from(f);
  UnipClass r;
  r.p = p;
  r.twist = twist;
  i64 len = std::max(a.prefix.size(), b.prefix.size());
  for (i64 n = 0; n < len; ++n) r.prefix.push_back(a.level(n) + b.level(n));
  r.tail.from = f;
  for (auto& [e, c] : a.tail.terms) r.tail.terms[e] = c;
  for (auto& [e, c] : b.tail.terms) {
    i64 v = fp::add(r.tail.terms.count(e) ? r.tail.terms[e] : 0, c, p);
    if (v == 0)
      r.tail.terms.erase(e);
    else
      r.tail.terms[e] = v;
  }
  // Trim trailing zero prefix levels not covered by the tail.
  while (!r.prefix.empty() && r.prefix.back().is_zero() &&
         (r.tail.terms.empty() || (i64)r.prefix.size() > r.tail.from))
    r.prefix.pop_back();
  if (!r.tail.terms.empty()) r.tail.from = std::max((i64)r.prefix.size(), r.tail.from);
  return r;
}

UnipClass UnipClass::operator-() const {
  UnipClass r = *this;
  for (auto& s : r.prefix) s = -s;
  for (auto& [e, c] : r.tail.terms) c = fp::neg(c, p);
  return r;
}

UnipClass UnipClass::operator-(const UnipClass& o) const { return *this + (-o); }

bool UnipClass::is_zero() const {
  for (auto& s : prefix)
    if (!s.is_zero()) return false;
  return tail.terms.empty();
}

// Reinterpret an exact element over a disc, dropping terms beyond the
// precision window (they are congruent to 0 there, so nothing is lost).
static Series local_view(const Series& s, RingTag ring, i64 prec) {
  if (s.ring() != RingTag::gm) return s.truncated(prec);
  Series r(ring, s.p(), prec);
  for (auto& [e, c] : s.terms()) r.set_coeff(e, c);
  return r;
}

Series AdditiveWitness::y(i64 n, i64 p, RingTag ring, i64 prec) const {
  Series s = n < (i64)ys.size() ? ys[n] : Series(RingTag::gm, p);
  if (ring == RingTag::gm) return s;
  return local_view(s, ring, prec);
}

bool verify_additive(const UnipClass& from, const UnipClass& to, const MultiplierSeq& beta,
                     const AdditiveWitness& w, i64 levels, RingTag ring, i64 window) {
  i64 prec = window == Series::kExact ? 64 : window;
  for (i64 n = 0; n < levels; ++n) {
    Series diff = from.level(n) - to.level(n);
    Series yn = w.y(n, from.p, ring, ring == RingTag::gm ? Series::kExact : prec);
    Series yn1 = w.y(n + 1, from.p, ring, ring == RingTag::gm ? Series::kExact : prec);
    Series rhs = yn - yn1.shifted(checked_mul(beta.beta(n), checked_pow(from.p, n)));
    Series lhs = ring == RingTag::gm ? diff : local_view(diff, ring, prec);
    if (!Series::congruent(lhs, rhs, window)) return false;
  }
  return true;
}

namespace {

// Chase one tail term through the migration map e -> (e - beta)/p.  Returns
// the number of steps and the surfaced exponent, or nullopt when the term
// enters the fixed-point cycle and never resurfaces.
std::optional<std::pair<i64, i64>> chase(i64 e, i64 beta_tail, i64 p, i64 max_steps) {
  i64 steps = 0;
  while (fp::norm(e - beta_tail, p) == 0) {
    i64 nx = (e - beta_tail) / p;
    if (nx == e) return std::nullopt;  // fixed point: term cycles forever
    e = nx;
    if (++steps > max_steps) fail(Errc::depth, "tail migration did not stabilize within max_depth");
  }
  return std::make_pair(steps, e);
}

i64 max_abs_exponent(const UnipClass& c) {
  i64 m = 1;
  for (auto& s : c.prefix)
    for (auto& [e, _] : s.terms()) m = std::max(m, e < 0 ? -e : e);
  for (auto& [e, _] : c.tail.terms) m = std::max(m, e < 0 ? -e : e);
  return m;
}

}  // namespace

NormalizeResult normalize_support(const UnipClass& c, const MultiplierSeq& beta, const RunConfig& cfg) {
  c.validate();
  const i64 p = c.p;
  // Prefix terms caught in the migration fixed point never resurface if pushed
  // upward, but a term at a single explicit level can always be cancelled
  // downward by a finite telescoping gauge.  Strip such terms first and record
  // that gauge; the main recursion then runs on the cleaned class.
  UnipClass cc = c;
  std::vector<Series> down;
  for (i64 n0 = 0; n0 < (i64)cc.prefix.size(); ++n0) {
    i64 q0 = checked_pow(p, n0);
    Series lvl = cc.prefix[n0];
    for (auto& [E, co] : lvl.terms()) {
      i64 e = E / q0, n = n0, steps = 0;
      bool trapped = false;
      while (fp::norm(e - beta.beta(n), p) == 0) {
        i64 nx = (e - beta.beta(n)) / p;
        if (n >= beta.stable_from() && nx == e) {
          trapped = true;
          break;
        }
        e = nx;
        ++n;
        if (++steps > cfg.max_depth)
          fail(Errc::depth, "normalization did not stabilize within max_depth");
      }
      if (!trapped) continue;
      cc.prefix[n0].set_coeff(E, 0);
      if ((i64)down.size() < n0 + 1) down.resize(n0 + 1, Series(RingTag::gm, p));
      i64 ex = E;
      for (i64 k = n0; k >= 0; --k) {
        down[k].set_coeff(ex, fp::add(down[k].coeff(ex), co, p));
        if (k > 0) ex = checked_add(ex, checked_mul(beta.beta(k - 1), checked_pow(p, k - 1)));
      }
    }
  }
  i64 L0 =
      std::max({(i64)cc.prefix.size(), cc.tail.terms.empty() ? 0 : cc.tail.from, beta.stable_from()});

  // Analytic prediction of the normalized tail.
  std::map<i64, i64> out_tail;
  i64 maxchain = 0;
  for (auto& [e, co] : cc.tail.terms) {
    auto res = chase(e, beta.tail, p, cfg.max_depth);
    if (!res) continue;  // cycling term: dropped from the normal form
    maxchain = std::max(maxchain, res->first);
    i64 v = fp::add(out_tail.count(res->second) ? out_tail[res->second] : 0, co, p);
    if (v == 0)
      out_tail.erase(res->second);
    else
      out_tail[res->second] = v;
  }
  i64 L1 = L0 + maxchain;
  // Prefix terms can migrate upward as well; track where each one surfaces.
  for (i64 n0 = 0; n0 < (i64)cc.prefix.size(); ++n0) {
    i64 q0 = checked_pow(p, n0);
    for (auto& [E, _] : cc.prefix[n0].terms()) {
      i64 e = E / q0, n = n0, steps = 0;
      while (fp::norm(e - beta.beta(n), p) == 0) {
        i64 nx = (e - beta.beta(n)) / p;
        if (n >= beta.stable_from() && nx == e) { n = -1; break; }  // cycles forever
        e = nx;
        ++n;
        if (++steps > cfg.max_depth)
          fail(Errc::depth, "normalization did not stabilize within max_depth");
      }
      if (n >= 0) L1 = std::max(L1, n + 1);
    }
  }
  if (L1 > cfg.max_depth)
    fail(Errc::depth, "normalization did not stabilize within max_depth");
  i64 cap = safe_level_bound(p, std::max(max_abs_exponent(cc), (i64)(p + 1)));
  i64 Lrun = std::min(std::max(L1 + 2, cfg.max_depth), cap);
  if (Lrun < L1 + 2) fail(Errc::depth, "exponent range exhausted during normalization");

  // Levelwise recursion, also materializing the witness.
  NormalizeResult res;
  res.normalized.p = p;
  res.normalized.twist = cc.twist;
  Series y(RingTag::gm, p);
  res.witness.ys.push_back(y);  // y_0 = 0
  std::vector<Series> outs;
  for (i64 n = 0; n < Lrun; ++n) {
    i64 q = checked_pow(p, n);
    i64 bn = beta.beta(n);
    SupportSet forbidden = SupportSet::residue(checked_mul(bn, q), checked_mul(q, p));
    Series a_in = cc.level(n);
    Series a2 = a_in.restricted(forbidden);
    Series a1 = a_in - a2;
    Series y2 = y.restricted(forbidden);
    Series y1 = y - y2;
    outs.push_back(a1 - y1);
    y = (y2 - a2).shifted(checked_mul(-bn, q));
    res.witness.ys.push_back(y);
  }
  // The levels past L1 must match the analytic tail prediction.
  for (i64 n = L1; n < Lrun; ++n) {
    Series want(RingTag::gm, p);
    i64 q = checked_pow(p, n);
    for (auto& [e, co] : out_tail) want.set_coeff(checked_mul(e, q), co);
    if (!(outs[n] == want)) fail(Errc::depth, "normalization did not stabilize within max_depth");
  }
  outs.resize(L1);
  if (out_tail.empty())
    while (!outs.empty() && outs.back().is_zero()) outs.pop_back();
  res.normalized.prefix = std::move(outs);
  res.normalized.tail.from = L1;
  res.normalized.tail.terms = std::move(out_tail);
  // Fold in the downward gauge that removed the fixed-point prefix terms.
  for (i64 k = 0; k < (i64)down.size(); ++k) {
    while ((i64)res.witness.ys.size() <= k) res.witness.ys.push_back(Series(RingTag::gm, p));
    res.witness.ys[k] = res.witness.ys[k] + down[k];
  }
  return res;
}

AdditiveWitness witness_ysum(const UnipClass& nc, RingTag ring, const MultiplierSeq& beta,
                             const RunConfig& cfg) {
  const i64 p = nc.p;
  const i64 P = cfg.precision;
  AdditiveWitness w;
  if (ring == RingTag::gm) {
    if (!nc.tail_zero()) fail(Errc::validation, "ysum over gm requires an empty tail");
    i64 len = nc.prefix.size();
    for (i64 m = 0; m <= len; ++m) {
      Series y(RingTag::gm, p);
      i64 off = 0;
      for (i64 n = m; n < len; ++n) {
        y = y + nc.level(n).shifted(off);
        off = checked_add(off, checked_mul(beta.beta(n), checked_pow(p, n)));
      }
      w.ys.push_back(y);
    }
    return w;
  }
  // Disc cases: truncate at the precision boundary; contributions leave the
  // window once p^n/(p-1) clears P plus the prefix-offset correction.
  i64 L0 = std::max({(i64)nc.prefix.size(), nc.tail.terms.empty() ? 0 : nc.tail.from, beta.stable_from()});
  i64 cap = safe_level_bound(p, std::max(max_abs_exponent(nc), (i64)(p + 1)));
  i64 c0 = 1;
  for (i64 k = 0; k <= L0 && k < cap; ++k) c0 = checked_mul(c0, p);
  i64 depth_needed = 0;
  {
    i64 q = 1;
    while (depth_needed < cap && q / (p - 1) <= checked_add(P, c0)) {
      q = checked_mul(q, p);
      ++depth_needed;
    }
    if (depth_needed >= cap) fail(Errc::depth, "precision window too large for exponent range");
  }
  // The ys are kept exact (they are honest finite truncations of the
  // telescoping sums; the dropped contributions are invisible in the
  // window), so downstream shifts do not suffer generic precision loss.
  i64 levels = std::max(depth_needed, L0 + 1);
  // A tail term at exponent 0 contributes the same constant to every level:
  // the witness is eventually constant rather than eventually zero, so carry
  // the truncation out to the stabilization bound (the convention everywhere
  // is that witnesses are valid up to max_depth levels).
  if (ring == RingTag::disc0 && nc.tail.terms.count(0)) levels = std::max(levels, cfg.max_depth);
  for (i64 m = 0; m <= levels; ++m) {
    Series y(RingTag::gm, p);
    i64 off = 0;
    for (i64 n = m; n <= levels; ++n) {
      y = y + nc.level(n).shifted(off);
      off = checked_add(off, checked_mul(beta.beta(n), checked_pow(p, n)));
    }
    w.ys.push_back(y);
  }
  return w;
}

DecideResult decide_trivial(const UnipClass& c, RingTag ring, const MultiplierSeq& beta,
                            const RunConfig& cfg) {
  // The triviality criteria are proved only for twists in class-mod-Z normal
  // form (in particular negative integer twists are rejected).
  if (!beta.alpha.is_normal_form()) fail(Errc::validation, "decider requires twist in [0,1) normal form");
  NormalizeResult nr = normalize_support(c, beta, cfg);
  DecideResult r;
  r.normalized = nr.normalized;
  for (auto& [e, co] : nr.normalized.tail.terms) {
    bool ok = ring == RingTag::disc0 ? e >= 0 : ring == RingTag::discinf ? e < 0 : false;
    if (!ok) r.offending[e] = co;
  }
  if (!r.offending.empty()) return r;
  r.trivial = true;
  // Combine the normalization witness with the telescoping witness of the
  // normalized representative.
  AdditiveWitness tele = witness_ysum(nr.normalized, ring, beta, cfg);
  i64 n = std::max(nr.witness.ys.size(), tele.ys.size());
  for (i64 i = 0; i < n; ++i) {
    Series a = i < (i64)nr.witness.ys.size() ? nr.witness.ys[i] : Series(RingTag::gm, c.p);
    Series b = i < (i64)tele.ys.size() ? tele.ys[i] : Series(RingTag::gm, c.p);
    r.witness.ys.push_back(a + b);
  }
  // Trailing zero levels carry no information; keep the witness short so
  // downstream consumers do not push empty series past the precision window.
  while (!r.witness.ys.empty() && r.witness.ys.back().is_zero()) r.witness.ys.pop_back();
  return r;
}

std::pair<UnipClass, UnipClass> split_class(const UnipClass& c) {
  UnipClass neg = c, nonneg = c;
  for (i64 n = 0; n < (i64)c.prefix.size(); ++n) {
    auto [a, b] = c.prefix[n].split_sign();
    neg.prefix[n] = a;
    nonneg.prefix[n] = b;
  }
  neg.tail.terms.clear();
  nonneg.tail.terms.clear();
  for (auto& [e, co] : c.tail.terms) (e < 0 ? neg : nonneg).tail.terms[e] = co;
  return {neg, nonneg};
}

GlueResult glue_rank2(const UnipClass& a, const UnipClass& b, const MultiplierSeq& beta,
                      const RunConfig& cfg) {
  if (a.p != b.p || !(a.twist == b.twist)) fail(Errc::validation, "gluing classes with different twists");
  if (!beta.alpha.is_normal_form()) fail(Errc::validation, "gluing requires twist in [0,1) normal form");
  NormalizeResult na = normalize_support(a, beta, cfg);
  NormalizeResult nb = normalize_support(b, beta, cfg);
  GlueResult g;
  g.glued = split_class(na.normalized).first + split_class(nb.normalized).second;
  DecideResult d0 = decide_trivial(g.glued - a, RingTag::disc0, beta, cfg);
  if (!d0.trivial) fail(Errc::internal, "glued class not equivalent to the 0-side input");
  DecideResult dinf = decide_trivial(g.glued - b, RingTag::discinf, beta, cfg);
  if (!dinf.trivial) fail(Errc::internal, "glued class not equivalent to the infinity-side input");
  g.witness0 = d0.witness;
  g.witnessinf = dinf.witness;
  return g;
}

}  // namespace strat
