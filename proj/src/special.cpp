#include "strat/special.hpp"

#include <algorithm>

namespace strat {

namespace {

bool triangular_group(Group g) { return g == Group::B || g == Group::U || g == Group::D; }

void require_normal_twists(const Tower& t) {
  for (auto& a : t.twist)
    if (!a.is_normal_form())
      fail(Errc::validation, "operation requires tower twists in [0,1) normal form");
}

}  // namespace

CanonResult canonical_diagonal(const Tower& t, const RunConfig& cfg) {
  (void)cfg;
  t.validate();
  if (!triangular_group(t.group)) fail(Errc::validation, "canonical diagonal requires a triangular tower");
  require_normal_twists(t);
  const i64 p = t.p;
  i64 K = t.depth;
  for (auto& a : t.twist) K = std::max(K, digit_preperiod(a, p));

  GaugeWitness w = GaugeWitness::identity_like(t);
  if (K > 0) {
    // Per diagonal position: sigma_ii(n) = t^{a_n p^n} lambda_n u_n; the
    // scalar gauge psi_n(ii) = c_n t^{m_n p^n} v_n with
    //   m_n = delta_n - a_n + p m_{n+1},  c_n = prod_{k>=n} lambda_k^{-1},
    //   v_n = prod_{k>=n} u_k^{-1}
    // moves the diagonal onto the digit monomials delta_n = digit(twist_i, n).
    std::vector<Mat> psis(K, Mat::identity(t.rank, t.ring, p, t.prec));
    for (i64 i = 0; i < t.rank; ++i) {
      std::vector<i64> a(K), lam(K);
      std::vector<Series> un(K);
      for (i64 n = 0; n < K; ++n) {
        Series s = t.sigma(n).at(i, i);
        if (t.ring != RingTag::gm && s.is_zero()) {
          // The whole level is beyond the precision window; the digit
          // monomial target is equally invisible, so leave it untouched
          // (the congruence check below keeps this honest).
          a[n] = padic_digit(t.twist[i], n, p);
          lam[n] = 1;
          un[n] = Series::monomial(t.ring, p, 0, 1, t.prec);
          continue;
        }
        auto parts = s.unit_decompose(n);
        a[n] = parts.a;
        lam[n] = parts.lambda;
        un[n] = parts.u;
      }
      i64 m = 0, c = 1;
      Series v = Series::monomial(t.ring, p, 0, 1, t.prec);
      for (i64 n = K - 1; n >= 0; --n) {
        m = padic_digit(t.twist[i], n, p) - a[n] + checked_mul(p, m);
        c = fp::mul(c, fp::inv(lam[n], p), p);
        if (!(un[n] == Series::monomial(t.ring, p, 0, 1, t.prec))) v = v * un[n].inverse();
        psis[n].at(i, i) = v.scaled(c).shifted(checked_mul(m, checked_pow(p, n)));
      }
    }
    w.psis = std::move(psis);
  }

  CanonResult r;
  r.witness = std::move(w);
  r.tower = gauge_apply(t, r.witness);
  // Pin the diagonal to the exact digit monomials (over a disc the gauged
  // entries agree with them only within precision).
  for (i64 n = 0; n < r.tower.depth; ++n) {
    i64 q = checked_pow(p, n);
    for (i64 i = 0; i < t.rank; ++i) {
      Series mono(t.ring, p, t.prec);
      mono.set_coeff(checked_mul(padic_digit(t.twist[i], n, p), q), 1);
      if (!Series::congruent(r.tower.levels[n].at(i, i), mono))
        fail(Errc::internal, "canonical diagonal gauge failed to reach the digit monomial");
      r.tower.levels[n].at(i, i) = mono;
    }
  }
  return r;
}

Series EntryData::tower_entry(const Series& x, i64 n, i64 p) const {
  i64 d = padic_digit(col_twist, n, p);
  return x.shifted(checked_mul(d - u_at(n), checked_pow(p, n)));
}

Series EntryData::gauge_entry(const Series& w, i64 n, i64 p) const {
  return (-w).shifted(checked_mul(-u_at(n), checked_pow(p, n)));
}

EntryData extract_entry(const Tower& t, i64 i, i64 j) {
  if (i < 0 || j < 0 || i >= t.rank || j >= t.rank || i >= j)
    fail(Errc::validation, "extract_entry expects an above-diagonal entry");
  const i64 p = t.p;
  EntryData ed;
  ed.row = i;
  ed.col = j;
  ed.col_twist = t.twist[j];
  PExp tau = (t.twist[i] - t.twist[j]).class_mod_z();
  ed.beta = MultiplierSeq::from_digits(tau, p);
  i64 K = std::max({t.depth, digit_preperiod(t.twist[i], p), digit_preperiod(t.twist[j], p),
                    digit_preperiod(tau, p)});

  // Carry sequence: u_n = d_n - beta^raw_n + p u_{n+1} with u_0 the integer
  // tau - (twist_i - twist_j); it is bounded and eventually constant.
  PExp m0 = tau - t.twist[i] + t.twist[j];
  if (m0.den != 1) fail(Errc::internal, "carry offset is not an integer");
  i64 u = m0.num;
  for (i64 n = 0; n < K; ++n) {
    ed.u.push_back(u);
    i64 step = padic_digit(tau, n, p) - (padic_digit(t.twist[i], n, p) - padic_digit(t.twist[j], n, p));
    if ((u - step) % p != 0) fail(Errc::internal, "carry recursion left the integers");
    u = (u - step) / p;
  }
  i64 bstar = digit_tail(t.twist[i], p) - digit_tail(t.twist[j], p);
  ed.u_tail = (bstar - digit_tail(tau, p)) / (p - 1);
  if (u != ed.u_tail) fail(Errc::internal, "carry sequence did not stabilize at its fixed point");

  ed.cls.p = p;
  ed.cls.twist = tau;
  for (i64 n = 0; n < K; ++n) {
    i64 q = checked_pow(p, n);
    i64 dj = padic_digit(t.twist[j], n, p);
    Series x = t.sigma(n).at(i, j).shifted(checked_mul(ed.u_at(n) - dj, q));
    ed.cls.prefix.push_back(x.exact() ? x : x.to_exact());
  }
  ed.cls.tail.from = K;
  auto it = t.entry_tails.find({i, j});
  if (it != t.entry_tails.end()) {
    i64 sh = ed.u_tail - digit_tail(t.twist[j], p);
    for (auto& tt : it->second) {
      i64 e = checked_add(tt.e, sh);
      i64 v = fp::add(ed.cls.tail.terms.count(e) ? ed.cls.tail.terms[e] : 0, tt.c, p);
      if (v == 0)
        ed.cls.tail.terms.erase(e);
      else
        ed.cls.tail.terms[e] = v;
    }
  }
  ed.cls.validate();
  return ed;
}

namespace {

// Unipotent gauge step with a single off-diagonal entry (i,j).
GaugeWitness entry_step(const Tower& t, const EntryData& ed, const AdditiveWitness& w) {
  GaugeWitness g = GaugeWitness::identity_like(t);
  for (i64 n = 0; n < (i64)w.ys.size(); ++n) {
    Mat m = Mat::identity(t.rank, t.ring, t.p, t.prec);
    // The witness entries are exactly known polynomials; shift them exactly
    // and only then view them inside the working window, so the shift does
    // not pay the generic worst-case precision loss.
    Series ge = ed.gauge_entry(w.y(n, t.p, RingTag::gm, Series::kExact), n, t.p);
    if (t.ring != RingTag::gm) {
      // The entry is exactly known; keep it exact inside the disc so that
      // later composition and exact transfer lose nothing.
      Series v(t.ring, t.p, Series::kExact);
      for (auto& [e, c] : ge.terms()) v.set_coeff(e, c);
      ge = v;
    }
    m.at(ed.row, ed.col) = ge;
    g.psis.push_back(m);
  }
  while (!g.psis.empty() && Mat::congruent(g.psis.back(), Mat::identity(t.rank, t.ring, t.p, t.prec)))
    g.psis.pop_back();
  return g;
}

// After a gauge step the finalized parts of the working tower are known by
// construction: the diagonal digit monomials, the structural zeros, and every
// entry already swept onto its kept class.  Per-element precision tracking of
// the matrix products degrades their windows anyway (exact gauge entries with
// negative exponents shrink every product they touch), so restore those
// entries to full precision after checking congruence with the computed
// values on the shared window.
void repin(Tower& cur, const std::map<std::pair<i64, i64>, std::pair<EntryData, UnipClass>>& kept) {
  const i64 p = cur.p;
  for (i64 n = 0; n < cur.depth; ++n) {
    i64 q = checked_pow(p, n);
    for (i64 i = 0; i < cur.rank; ++i)
      for (i64 j = 0; j < cur.rank; ++j) {
        Series want(cur.ring, p, Series::kExact);
        if (i == j) {
          want.set_coeff(checked_mul(padic_digit(cur.twist[i], n, p), q), 1);
        } else if (i < j) {
          auto it = kept.find({i, j});
          if (it == kept.end()) continue;  // not finalized yet
          Series x = it->second.first.tower_entry(it->second.second.level(n), n, p);
          for (auto& [e, c] : x.terms()) want.set_coeff(e, c);
        }
        if (!Series::congruent(cur.levels[n].at(i, j), want))
          fail(Errc::internal, "gauge step drifted off a finalized entry");
        cur.levels[n].at(i, j) = want;
      }
  }
}

// Filtration sweep order: the leading block first (columns left to right),
// each column bottom-up, so a gauge step only perturbs entries that are
// still to be processed (same column above, or later columns).
std::vector<std::pair<i64, i64>> sweep_order(i64 rank) {
  std::vector<std::pair<i64, i64>> out;
  for (i64 c = 1; c < rank; ++c)
    for (i64 i = c - 1; i >= 0; --i) out.push_back({i, c});
  return out;
}

Tower diagonal_part(const Tower& t) {
  Tower d = t;
  d.entry_tails.clear();
  for (i64 n = 0; n < d.depth; ++n)
    for (i64 i = 0; i < d.rank; ++i)
      for (i64 j = 0; j < d.rank; ++j)
        if (i != j) d.levels[n].at(i, j) = Series(d.ring, d.p, d.prec);
  return d;
}

}  // namespace

SplitResult is_diagonal_split(const Tower& t, const RunConfig& cfg) {
  t.validate();
  if (!triangular_group(t.group)) fail(Errc::validation, "split test requires a triangular tower");
  SplitResult r;
  if (t.group == Group::D) {
    r.split = true;
    r.witness = GaugeWitness::identity_like(t);
    r.diagonal = t;
    return r;
  }
  CanonResult cd = canonical_diagonal(t, cfg);
  Tower cur = cd.tower;
  GaugeWitness total = cd.witness;
  std::map<std::pair<i64, i64>, std::pair<EntryData, UnipClass>> done;
  for (auto [i, j] : sweep_order(t.rank)) {
    EntryData ed = extract_entry(cur, i, j);
    DecideResult dr = decide_trivial(ed.cls, t.ring, ed.beta, cfg);
    if (!dr.trivial) {
      r.split = false;
      r.entry = {i, j};
      r.certificate = dr.normalized;
      r.offending = dr.offending;
      return r;
    }
    GaugeWitness step = entry_step(cur, ed, dr.witness);
    total = step.compose(total);
    cur = gauge_apply(cur, step);
    cur.entry_tails.erase({i, j});
    UnipClass zero;
    zero.p = cur.p;
    zero.twist = ed.cls.twist;
    done[{i, j}] = {ed, zero};
    repin(cur, done);
  }
  r.split = true;
  r.diagonal = diagonal_part(cur);
  r.witness = total;
  if (!verify_witness(t, r.diagonal, r.witness))
    fail(Errc::internal, "split witness failed verification");
  return r;
}

SpecialReport is_special(const Tower& t, RingTag side, const RunConfig& cfg) {
  t.validate();
  SpecialReport rep;
  if (t.ring != RingTag::gm) fail(Errc::validation, "is_special expects a tower over gm");
  if (side == RingTag::gm) fail(Errc::validation, "is_special side must be a disc");
  if (!triangular_group(t.group)) {
    rep.special = false;
    rep.reason = "no triangular filtration: group is " + std::string(group_name(t.group));
    return rep;
  }
  SplitResult sr = is_diagonal_split(restrict_tower(t, side, cfg.precision), cfg);
  rep.special = sr.split;
  rep.reason = sr.split ? "restriction splits into rank-1 summands"
                        : "entry (" + std::to_string(sr.entry.first) + "," +
                              std::to_string(sr.entry.second) + ") restriction is nontrivial";
  return rep;
}

LiftResult lift_triangular(const Tower& local, const RunConfig& cfg) {
  local.validate();
  if (local.ring != RingTag::disc0) fail(Errc::validation, "lift expects a tower over disc0");
  if (!triangular_group(local.group)) fail(Errc::validation, "lift requires a triangular tower");
  const i64 p = local.p;
  CanonResult cd = canonical_diagonal(local, cfg);
  Tower cur = cd.tower;
  GaugeWitness total = cd.witness;

  std::map<std::pair<i64, i64>, std::pair<EntryData, UnipClass>> kept;
  for (auto [i, j] : sweep_order(local.rank)) {
    EntryData ed = extract_entry(cur, i, j);
    NormalizeResult nr = normalize_support(ed.cls, ed.beta, cfg);
    UnipClass target = split_class(nr.normalized).first;  // discinf-trivial part
    DecideResult dd = decide_trivial(ed.cls - target, RingTag::disc0, ed.beta, cfg);
    if (!dd.trivial) fail(Errc::internal, "dropped lift remainder is not trivial at 0");
    GaugeWitness step = entry_step(cur, ed, dd.witness);
    total = step.compose(total);
    cur = gauge_apply(cur, step);
    // The entry now carries the target class; record it and refresh the tail.
    cur.entry_tails.erase({i, j});
    std::vector<TailTerm> ts;
    i64 sh = digit_tail(local.twist[j], p) - ed.u_tail;
    for (auto& [e, c] : target.tail.terms) ts.push_back({c, checked_add(e, sh)});
    if (!ts.empty()) cur.entry_tails[{i, j}] = ts;
    kept[{i, j}] = {ed, target};
    repin(cur, kept);
  }

  LiftResult r;
  Tower& g = r.lifted;
  g.p = p;
  g.ring = RingTag::gm;
  g.group = local.rank == 1 ? Group::D : Group::B;
  g.rank = local.rank;
  g.prec = Series::kExact;
  g.twist = local.twist;
  i64 depth = cur.depth;
  for (auto& [ij, kt] : kept) {
    depth = std::max(depth, (i64)kt.second.prefix.size());
    if (!kt.second.tail.terms.empty()) depth = std::max(depth, kt.second.tail.from);
  }
  g.depth = depth;
  for (i64 n = 0; n < depth; ++n) {
    i64 q = checked_pow(p, n);
    Mat m = Mat::zero(g.rank, g.rank, RingTag::gm, p);
    for (i64 i = 0; i < g.rank; ++i)
      m.at(i, i) = Series::monomial(RingTag::gm, p, checked_mul(padic_digit(g.twist[i], n, p), q), 1);
    for (auto& [ij, kt] : kept) m.at(ij.first, ij.second) = kt.first.tower_entry(kt.second.level(n), n, p);
    g.levels.push_back(m);
  }
  for (auto& [ij, kt] : kept) {
    std::vector<TailTerm> ts;
    i64 sh = digit_tail(g.twist[ij.second], p) - kt.first.u_tail;
    for (auto& [e, c] : kt.second.tail.terms) ts.push_back({c, checked_add(e, sh)});
    if (!ts.empty()) g.entry_tails[ij] = ts;
  }
  g.validate();
  r.witness = total;
  if (!verify_witness(local, restrict_tower(g, RingTag::disc0, cfg.precision), r.witness))
    fail(Errc::internal, "lift witness failed verification at 0");
  return r;
}

GaugeWitness transfer_local_witness(const Tower& a, const Tower& b, const GaugeWitness& w,
                                    const RunConfig& cfg) {
  if (a.ring != RingTag::gm || b.ring != RingTag::gm)
    fail(Errc::validation, "transfer expects towers over gm");
  if (w.ring != RingTag::disc0) fail(Errc::validation, "transfer expects a disc0 witness");
  if (!verify_witness(restrict_tower(a, RingTag::disc0, cfg.precision),
                      restrict_tower(b, RingTag::disc0, cfg.precision), w))
    fail(Errc::validation, "local witness failed verification at 0");
  GaugeWitness g = w;
  g.ring = RingTag::gm;
  g.prec = Series::kExact;
  // A term within one level-width of the precision boundary may have picked up
  // unseen contributions from beyond the window.  That alone is no reason to
  // refuse: reinterpret the witness as exact and let exact verification judge
  // it; blame the boundary only when that verification fails.
  bool boundary_mass = false;
  for (i64 n = 0; n < (i64)g.psis.size(); ++n) {
    i64 band = checked_pow(a.p, n);
    for (auto& s : g.psis[n].e) {
      if (s.ring() != RingTag::gm) {
        for (auto& [e, c] : s.terms())
          if (s.prec() != Series::kExact && e >= s.prec() - band) boundary_mass = true;
        s = s.to_exact();
      }
    }
  }
  if (!verify_witness(a, b, g)) {
    if (boundary_mass)
      fail(Errc::depth, "witness entry has mass at the precision boundary; raise the precision");
    fail(Errc::validation, "transferred witness failed exact verification");
  }
  return g;
}

GlueTowers glue_triangular(const Tower& a, const Tower& b, const RunConfig& cfg) {
  a.validate();
  b.validate();
  if (a.ring != RingTag::disc0 || b.ring != RingTag::discinf)
    fail(Errc::validation, "glue expects towers over disc0 and discinf");
  if (a.p != b.p || a.rank != b.rank) fail(Errc::validation, "glue shape mismatch");
  if (!triangular_group(a.group) || !triangular_group(b.group))
    fail(Errc::validation, "glue requires triangular towers");
  if (a.twist != b.twist) fail(Errc::validation, "glue diagonal class mismatch");
  const i64 p = a.p;
  CanonResult ca = canonical_diagonal(a, cfg);
  CanonResult cb = canonical_diagonal(b, cfg);
  Tower cura = ca.tower, curb = cb.tower;
  GaugeWitness tota = ca.witness, totb = cb.witness;

  std::map<std::pair<i64, i64>, std::pair<EntryData, UnipClass>> kept;
  for (auto [i, j] : sweep_order(a.rank)) {
    EntryData ea = extract_entry(cura, i, j);
    EntryData eb = extract_entry(curb, i, j);
    GlueResult gr = glue_rank2(ea.cls, eb.cls, ea.beta, cfg);
    GaugeWitness stepa = entry_step(cura, ea, gr.witness0);
    GaugeWitness stepb = entry_step(curb, eb, gr.witnessinf);
    // glue_rank2 orients its witnesses from the glued class back to the
    // inputs; the tower steps need the opposite direction, and entry_step
    // already negates, so feed them as-is after flipping the classes:
    // glued - a = w_n - t^d w_{n+1}  =>  gauging a by f = +w lands on glued.
    for (auto& m : stepa.psis) m.at(i, j) = -m.at(i, j);
    for (auto& m : stepb.psis) m.at(i, j) = -m.at(i, j);
    tota = stepa.compose(tota);
    totb = stepb.compose(totb);
    cura = gauge_apply(cura, stepa);
    curb = gauge_apply(curb, stepb);
    auto set_tail = [&](Tower& t, const UnipClass& cls, const EntryData& ed) {
      t.entry_tails.erase({i, j});
      std::vector<TailTerm> ts;
      i64 sh = digit_tail(t.twist[j], p) - ed.u_tail;
      for (auto& [e, c] : cls.tail.terms) ts.push_back({c, checked_add(e, sh)});
      if (!ts.empty()) t.entry_tails[{i, j}] = ts;
    };
    set_tail(cura, gr.glued, ea);
    set_tail(curb, gr.glued, eb);
    kept[{i, j}] = {ea, gr.glued};
    repin(cura, kept);
    repin(curb, kept);
  }

  GlueTowers r;
  Tower& g = r.glued;
  g.p = p;
  g.ring = RingTag::gm;
  g.group = a.rank == 1 ? Group::D : Group::B;
  g.rank = a.rank;
  g.prec = Series::kExact;
  g.twist = a.twist;
  i64 depth = std::max(cura.depth, curb.depth);
  for (auto& [ij, kt] : kept) {
    depth = std::max(depth, (i64)kt.second.prefix.size());
    if (!kt.second.tail.terms.empty()) depth = std::max(depth, kt.second.tail.from);
  }
  g.depth = depth;
  for (i64 n = 0; n < depth; ++n) {
    i64 q = checked_pow(p, n);
    Mat m = Mat::zero(g.rank, g.rank, RingTag::gm, p);
    for (i64 i = 0; i < g.rank; ++i)
      m.at(i, i) = Series::monomial(RingTag::gm, p, checked_mul(padic_digit(g.twist[i], n, p), q), 1);
    for (auto& [ij, kt] : kept) m.at(ij.first, ij.second) = kt.first.tower_entry(kt.second.level(n), n, p);
    g.levels.push_back(m);
  }
  for (auto& [ij, kt] : kept) {
    std::vector<TailTerm> ts;
    i64 sh = digit_tail(g.twist[ij.second], p) - kt.first.u_tail;
    for (auto& [e, c] : kt.second.tail.terms) ts.push_back({c, checked_add(e, sh)});
    if (!ts.empty()) g.entry_tails[ij] = ts;
  }
  g.validate();
  r.witness0 = tota;
  r.witnessinf = totb;
  if (!verify_witness(a, restrict_tower(g, RingTag::disc0, cfg.precision), r.witness0))
    fail(Errc::internal, "glue witness failed verification at 0");
  if (!verify_witness(b, restrict_tower(g, RingTag::discinf, cfg.precision), r.witnessinf))
    fail(Errc::internal, "glue witness failed verification at infinity");
  return r;
}

}  // namespace strat
