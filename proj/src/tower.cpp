#include "strat/tower.hpp"

#include <algorithm>
#include <functional>

namespace strat {

const char* group_name(Group g) {
  switch (g) {
    case Group::GL: return "GL";
    case Group::B: return "B";
    case Group::U: return "U";
    case Group::D: return "D";
  }
  return "?";
}

Group group_from_name(const std::string& s) {
  if (s == "GL") return Group::GL;
  if (s == "B") return Group::B;
  if (s == "U") return Group::U;
  if (s == "D") return Group::D;
  fail(Errc::parse, "unknown group: " + s);
}

Mat Tower::sigma(i64 n) const {
  if (n < depth) return levels.at(n);
  i64 q = checked_pow(p, n);
  Mat m = Mat::zero(rank, rank, ring, p, prec);
  for (i64 i = 0; i < rank; ++i) {
    i64 d = padic_digit(twist.at(i), n, p);
    m.at(i, i) = Series(ring, p, prec);
    // Over a disc the monomial may fall outside the precision window, in
    // which case the level is only known to vanish modulo the precision.
    m.at(i, i).set_coeff(checked_mul(d, q), 1);
  }
  for (auto& [ij, ts] : entry_tails)
    for (auto& tt : ts) {
      Series& s = m.at(ij.first, ij.second);
      s.set_coeff(checked_mul(tt.e, q), fp::add(s.coeff(checked_mul(tt.e, q)), tt.c, p));
    }
  return m;
}

void Tower::validate() const {
  if (!is_prime(p)) fail(Errc::validation, "p must be prime");
  if (rank < 1) fail(Errc::validation, "rank must be >= 1");
  if (depth < 0) fail(Errc::validation, "negative depth");
  if ((i64)twist.size() != rank) fail(Errc::validation, "twist vector length != rank");
  for (auto& a : twist) check_exponent(a, p);
  if ((i64)levels.size() != depth) fail(Errc::validation, "levels count != depth");
  if (ring != RingTag::gm && prec == Series::kExact) fail(Errc::validation, "disc tower requires precision");
  for (i64 n = 0; n < depth; ++n) {
    const Mat& m = levels[n];
    if (m.rows != rank || m.cols != rank) fail(Errc::validation, "level matrix shape != rank");
    for (auto& s : m.e) {
      if (s.ring() != ring || s.p() != p) fail(Errc::validation, "level entry in wrong ring");
    }
    if (!m.level_member(n)) fail(Errc::validation, "level " + std::to_string(n) + " entry outside R^(p^n)");
    switch (group) {
      case Group::D:
        if (!m.is_diagonal()) fail(Errc::validation, "D tower with off-diagonal entry");
        break;
      case Group::U:
        if (!m.is_unipotent_upper()) fail(Errc::validation, "U tower level not unipotent upper");
        break;
      case Group::B:
        if (!m.is_upper()) fail(Errc::validation, "B tower level not upper triangular");
        break;
      case Group::GL: break;
    }
    if (group == Group::B || group == Group::D) {
      for (i64 i = 0; i < rank; ++i) {
        // Over a disc a deep diagonal level may sit entirely beyond the
        // precision window; unit-ness is then unrefutable, so accept it.
        if (ring != RingTag::gm && m.at(i, i).is_zero()) continue;
        m.at(i, i).unit_decompose(n);  // throws if not a unit
      }
    }
    if (group == Group::GL && rank <= 5) m.inverse();  // throws if not invertible
  }
  for (auto& [ij, ts] : entry_tails) {
    auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= rank || j >= rank || i == j) fail(Errc::validation, "entry tail index out of range");
    if ((group == Group::B || group == Group::U) && i > j)
      fail(Errc::validation, "entry tail below the diagonal in a triangular tower");
    if (group == Group::D) fail(Errc::validation, "entry tail in a diagonal tower");
    for (auto& tt : ts)
      if (fp::norm(tt.c, p) == 0) fail(Errc::validation, "entry tail with zero coefficient");
  }
}

Mat GaugeWitness::psi(i64 n) const {
  if (n < size()) return psis.at(n);
  return Mat::identity(rank, ring, p, prec);
}

GaugeWitness GaugeWitness::identity_like(const Tower& t) {
  GaugeWitness w;
  w.p = t.p;
  w.ring = t.ring;
  w.group = t.group;
  w.rank = t.rank;
  w.prec = t.prec;
  return w;
}

GaugeWitness GaugeWitness::inverse() const {
  GaugeWitness w = *this;
  for (auto& m : w.psis) m = m.inverse();
  return w;
}

GaugeWitness GaugeWitness::compose(const GaugeWitness& o) const {
  GaugeWitness w = *this;
  i64 n = std::max(size(), o.size());
  w.psis.clear();
  for (i64 i = 0; i < n; ++i) w.psis.push_back(psi(i) * o.psi(i));
  return w;
}

Tower gauge_apply(const Tower& t, const GaugeWitness& w) {
  if (w.p != t.p || w.ring != t.ring || w.rank != t.rank) fail(Errc::validation, "witness/tower mismatch");
  i64 limit = std::max(t.depth, w.size());
  Tower r = t;
  r.depth = limit;
  r.levels.clear();
  for (i64 n = 0; n < limit; ++n) r.levels.push_back(w.psi(n) * t.sigma(n) * w.psi(n + 1).inverse());
  return r;
}

bool verify_witness(const Tower& t, const Tower& t2, const GaugeWitness& w, i64 window) {
  if (t.p != t2.p || t.ring != t2.ring || t.rank != t2.rank) return false;
  i64 limit = std::max({t.depth, t2.depth, w.size()});
  if (t.ring != RingTag::gm) {
    // Over a disc, tail terms t^{e p^n} with e != 0 leave the precision
    // window once p^n >= P; extend the explicit check that far so the tails
    // only need to agree where they stay visible forever (e = 0).
    i64 P = std::min(t.prec, t2.prec);
    i64 q = 1;
    i64 L = 0;
    while (q < P) {
      q = checked_mul(q, t.p);
      ++L;
    }
    limit = std::max(limit, L);
  }
  for (i64 n = 0; n < limit; ++n) {
    Mat lhs;
    try {
      lhs = w.psi(n) * t.sigma(n) * w.psi(n + 1).inverse();
    } catch (const Error& e) {
      // Over a disc a level can vanish entirely within the window (e.g. a
      // diagonal monomial beyond the precision); its inverse is unknowable
      // and the level check is vacuous, matching window-capped congruence.
      if (e.code() == Errc::depth && t.ring != RingTag::gm) continue;
      throw;
    }
    if (!Mat::congruent(lhs, t2.sigma(n), window)) return false;
  }
  // Beyond the explicit range the witness is the identity, so the infinite
  // tails must agree on the nose: the twist digit streams must coincide from
  // `limit` on (twists may differ by integers, which only perturbs early
  // digits), and the off-diagonal tails must be equal.
  for (i64 i = 0; i < t.rank; ++i) {
    if (digit_tail(t.twist[i], t.p) != digit_tail(t2.twist[i], t.p)) return false;
    i64 m = std::max(digit_preperiod(t.twist[i], t.p), digit_preperiod(t2.twist[i], t.p));
    for (i64 n = limit; n < m; ++n)
      if (padic_digit(t.twist[i], n, t.p) != padic_digit(t2.twist[i], n, t.p)) return false;
  }
  auto norm_tails = [&](const Tower& x) {
    std::map<std::pair<i64, i64>, std::map<i64, i64>> m;
    for (auto& [ij, ts] : x.entry_tails)
      for (auto& tt : ts) {
        // Drop tail terms that leave the precision window past `limit`:
        // over disc0 exponents e p^n with e > 0 grow out of the window,
        // over discinf those with e < 0 do.  The rest stay visible forever.
        if (x.ring == RingTag::disc0 && tt.e > 0) continue;
        if (x.ring == RingTag::discinf && tt.e < 0) continue;
        i64 v = fp::add(m[ij].count(tt.e) ? m[ij][tt.e] : 0, tt.c, x.p);
        if (v == 0)
          m[ij].erase(tt.e);
        else
          m[ij][tt.e] = v;
      }
    for (auto it = m.begin(); it != m.end();)
      it = it->second.empty() ? m.erase(it) : std::next(it);
    return m;
  };
  return norm_tails(t) == norm_tails(t2);
}

Tower twist_transition(const Tower& t, const std::vector<PExp>& gamma) {
  if ((i64)gamma.size() != t.rank) fail(Errc::validation, "gamma length != rank");
  for (auto& g : gamma) check_exponent(g, t.p);
  Tower r = t;
  // Entry tails transform with the eventual digits; make sure the explicit
  // range covers any pre-periodic wobble.
  i64 need = t.depth;
  if (t.has_entry_tails())
    for (auto& g : gamma) need = std::max(need, digit_preperiod(g, t.p));
  if (need > t.depth) {
    r.levels.clear();
    for (i64 n = 0; n < need; ++n) r.levels.push_back(t.sigma(n));
    r.depth = need;
  }
  for (i64 n = 0; n < r.depth; ++n) {
    i64 q = checked_pow(t.p, n);
    for (i64 i = 0; i < t.rank; ++i)
      for (i64 j = 0; j < t.rank; ++j) {
        i64 sh = checked_mul(padic_digit(gamma[j], n, t.p) - padic_digit(gamma[i], n, t.p), q);
        if (sh != 0) r.levels[n].at(i, j) = r.levels[n].at(i, j).shifted(sh);
      }
  }
  std::map<std::pair<i64, i64>, std::vector<TailTerm>> tails;
  for (auto& [ij, ts] : r.entry_tails) {
    i64 sh = digit_tail(gamma[ij.second], t.p) - digit_tail(gamma[ij.first], t.p);
    for (auto& tt : ts) tails[ij].push_back({tt.c, checked_add(tt.e, sh)});
  }
  r.entry_tails = std::move(tails);
  return r;
}

namespace {

Group combine_group(Group a, Group b, bool sum) {
  if (a == Group::D && b == Group::D) return Group::D;
  if (a == Group::U && b == Group::U && sum) return Group::U;
  auto tri = [](Group g) { return g == Group::B || g == Group::D || g == Group::U; };
  if (tri(a) && tri(b)) return a == Group::U && b == Group::U ? Group::U : Group::B;
  return Group::GL;
}

void forbid_tails(const Tower& t, const char* op) {
  if (t.has_entry_tails())
    fail(Errc::validation, std::string(op) + " is not supported for towers with off-diagonal tails");
}

}  // namespace

Tower tensor(const Tower& a, const Tower& b) {
  if (a.p != b.p || a.ring != b.ring) fail(Errc::validation, "tensor of towers over different rings");
  forbid_tails(a, "tensor");
  forbid_tails(b, "tensor");
  Tower r;
  r.p = a.p;
  r.ring = a.ring;
  r.prec = std::min(a.prec, b.prec);
  r.rank = a.rank * b.rank;
  r.depth = std::max(a.depth, b.depth);
  r.group = combine_group(a.group, b.group, false);
  for (i64 n = 0; n < r.depth; ++n) r.levels.push_back(a.sigma(n).kronecker(b.sigma(n)));
  for (auto& x : a.twist)
    for (auto& y : b.twist) r.twist.push_back(x + y);
  return r;
}

Tower direct_sum(const Tower& a, const Tower& b) {
  if (a.p != b.p || a.ring != b.ring) fail(Errc::validation, "direct sum of towers over different rings");
  Tower r;
  r.p = a.p;
  r.ring = a.ring;
  r.prec = std::min(a.prec, b.prec);
  r.rank = a.rank + b.rank;
  r.depth = std::max(a.depth, b.depth);
  r.group = combine_group(a.group, b.group, true);
  if (r.group == Group::GL && (a.group != Group::GL && b.group != Group::GL)) r.group = Group::B;
  for (i64 n = 0; n < r.depth; ++n) {
    Mat m = Mat::zero(r.rank, r.rank, r.ring, r.p, r.prec);
    Mat ma = a.sigma(n), mb = b.sigma(n);
    for (i64 i = 0; i < a.rank; ++i)
      for (i64 j = 0; j < a.rank; ++j) m.at(i, j) = ma.at(i, j);
    for (i64 i = 0; i < b.rank; ++i)
      for (i64 j = 0; j < b.rank; ++j) m.at(a.rank + i, a.rank + j) = mb.at(i, j);
    r.levels.push_back(m);
  }
  r.twist = a.twist;
  r.twist.insert(r.twist.end(), b.twist.begin(), b.twist.end());
  for (auto& [ij, ts] : a.entry_tails) r.entry_tails[ij] = ts;
  for (auto& [ij, ts] : b.entry_tails) r.entry_tails[{ij.first + a.rank, ij.second + a.rank}] = ts;
  return r;
}

Tower dual(const Tower& a) {
  forbid_tails(a, "dual");
  Tower r = a;
  r.twist.clear();
  bool flip = a.group == Group::B || a.group == Group::U;
  for (i64 i = 0; i < a.rank; ++i) r.twist.push_back(-a.twist[flip ? a.rank - 1 - i : i]);
  r.levels.clear();
  for (i64 n = 0; n < a.depth; ++n) {
    Mat m = a.sigma(n).inverse().transpose();
    if (flip) {
      // Conjugate by the reversal permutation to restore upper-triangularity.
      Mat f = Mat::zero(a.rank, a.rank, a.ring, a.p, a.prec);
      for (i64 i = 0; i < a.rank; ++i)
        for (i64 j = 0; j < a.rank; ++j) f.at(i, j) = m.at(a.rank - 1 - i, a.rank - 1 - j);
      m = f;
    }
    r.levels.push_back(m);
  }
  return r;
}

Tower restrict_tower(const Tower& t, RingTag side, i64 prec) {
  if (t.ring != RingTag::gm) fail(Errc::validation, "restrict expects a tower over gm");
  if (side == RingTag::gm) fail(Errc::validation, "restrict target must be a disc");
  Tower r = t;
  r.ring = side;
  r.prec = prec;
  for (auto& m : r.levels)
    for (auto& s : m.e) {
      // Reduction mod the precision ideal: terms beyond the window vanish.
      Series v(side, t.p, prec);
      for (auto& [e, c] : s.terms()) v.set_coeff(e, c);
      s = v;
    }
  return r;
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

bool within_window(const Mat& m, i64 w, i64 terms) {
  for (auto& s : m.e) {
    if ((i64)s.terms().size() > terms) return false;
    for (auto& [e, c] : s.terms())
      if (e < -w || e > w) return false;
  }
  return true;
}

void enumerate_polys(i64 p, i64 w, i64 terms, std::vector<Series>& out) {
  std::vector<i64> exps;
  for (i64 e = -w; e <= w; ++e) exps.push_back(e);
  std::vector<std::pair<i64, i64>> cur;
  std::function<void(size_t)> rec = [&](size_t idx) {
    Series s(RingTag::gm, p);
    for (auto& [e, c] : cur) s.set_coeff(e, c);
    out.push_back(s);
    if ((i64)cur.size() == terms) return;
    for (size_t i = idx; i < exps.size(); ++i)
      for (i64 c = 1; c < p; ++c) {
        cur.push_back({exps[i], c});
        rec(i + 1);
        cur.pop_back();
      }
  };
  rec(0);
}

}  // namespace

std::optional<GaugeWitness> oracle_equivalent(const Tower& a, const Tower& b, const RunConfig& cfg) {
  if (a.ring != RingTag::gm || b.ring != RingTag::gm)
    fail(Errc::validation, "oracle search operates on towers over gm");
  if (a.p != b.p || a.rank != b.rank) return std::nullopt;
  a.validate();
  b.validate();
  const i64 p = a.p, w = cfg.window, terms = cfg.terms;

  std::vector<Mat> candidates;
  std::vector<Series> monos, polys;
  for (i64 e = -w; e <= w; ++e)
    for (i64 c = 1; c < p; ++c) monos.push_back(Series::monomial(RingTag::gm, p, e, c));
  if (a.rank == 1) {
    for (auto& m0 : monos) {
      Mat m(1, 1, m0);
      candidates.push_back(m);
    }
  } else if (a.rank == 2) {
    enumerate_polys(p, w, terms, polys);
    bool diag_free = a.group == Group::B || a.group == Group::D || a.group == Group::GL;
    bool offdiag_free = a.group != Group::D;
    std::vector<Series> dchoices = diag_free ? monos : std::vector<Series>{Series::monomial(RingTag::gm, p, 0, 1)};
    std::vector<Series> fchoices = offdiag_free ? polys : std::vector<Series>{Series(RingTag::gm, p)};
    for (auto& d1 : dchoices)
      for (auto& d2 : dchoices)
        for (auto& f : fchoices) {
          Mat m = Mat::zero(2, 2, RingTag::gm, p);
          m.at(0, 0) = d1;
          m.at(1, 1) = d2;
          m.at(0, 1) = f;
          candidates.push_back(m);
          if (candidates.size() > 4000000) fail(Errc::depth, "oracle search space too large");
        }
  } else {
    fail(Errc::validation, "oracle search supports rank <= 2");
  }

  i64 pre = 0;
  for (auto& t : a.twist) pre = std::max(pre, digit_preperiod(t, p));
  for (auto& t : b.twist) pre = std::max(pre, digit_preperiod(t, p));
  const i64 limit = std::max({a.depth, b.depth, pre}) + 1;

  for (auto& psi0 : candidates) {
    Mat psi = psi0;
    std::vector<Mat> chain{psi};
    bool ok = true;
    for (i64 n = 0; n <= limit && ok; ++n) {
      Mat nxt;
      try {
        nxt = b.sigma(n).inverse() * psi * a.sigma(n);
      } catch (const Error&) {
        ok = false;
        break;
      }
      if (!nxt.level_member(n + 1) || !within_window(nxt, w, terms)) {
        ok = false;
        break;
      }
      chain.push_back(nxt);
      psi = nxt;
    }
    if (!ok) continue;
    // Stabilization: past both depths the propagated witness must be a fixed
    // point (a constant scalar works; divide it out to get a finite witness).
    Mat& last = chain.back();
    Mat& prev = chain[chain.size() - 2];
    if (!Mat::congruent(last, prev)) continue;
    Series c = last.at(0, 0);
    bool scalar = c.terms().size() == 1 && c.coeff(0) != 0;
    for (i64 i = 0; scalar && i < a.rank; ++i)
      for (i64 j = 0; scalar && j < a.rank; ++j) {
        if (i == j && !(last.at(i, j) == c)) scalar = false;
        if (i != j && !last.at(i, j).is_zero()) scalar = false;
      }
    if (!scalar) continue;
    GaugeWitness wtn = GaugeWitness::identity_like(a);
    i64 lam_inv = fp::inv(c.coeff(0), p);
    for (auto& m : chain) {
      Mat scaled = m;
      for (auto& s : scaled.e) s = s.scaled(lam_inv);
      wtn.psis.push_back(scaled);
    }
    // Trim trailing identities.
    while (!wtn.psis.empty() && Mat::congruent(wtn.psis.back(), Mat::identity(a.rank, RingTag::gm, p)))
      wtn.psis.pop_back();
    if (verify_witness(a, b, wtn)) return wtn;
  }
  return std::nullopt;
}

}  // namespace strat
