#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "strat/unipotent.hpp"

using namespace strat;

namespace {
Series poly(i64 p, std::initializer_list<std::pair<i64, i64>> ts) {
  Series s(RingTag::gm, p);
  for (auto [e, c] : ts) s.set_coeff(e, c);
  return s;
}

UnipClass cls(i64 p, PExp twist, std::vector<Series> prefix,
              std::initializer_list<std::pair<i64, i64>> tail = {}, i64 from = -1) {
  UnipClass c;
  c.p = p;
  c.twist = twist;
  c.prefix = std::move(prefix);
  c.tail.from = from < 0 ? (i64)c.prefix.size() : from;
  for (auto [e, co] : tail) c.tail.terms[e] = co;
  c.validate();
  return c;
}

const PExp z0 = PExp::integer(0);
}  // namespace

TEST_CASE("multiplier sequence from digits") {
  auto m = MultiplierSeq::from_digits(PExp(1, 2), 3);
  CHECK(m.beta(0) == 2);
  CHECK(m.beta(1) == 1);
  CHECK(m.beta(7) == 1);
  CHECK(m.stable_from() == 1);
  auto mz = MultiplierSeq::from_digits(z0, 3);
  CHECK(mz.beta(0) == 0);
  CHECK(mz.beta(5) == 0);
}

TEST_CASE("class levels and tail expansion") {
  auto c = cls(3, z0, {poly(3, {{1, 1}})}, {{-1, 1}, {2, 2}}, 2);
  CHECK(c.level(0) == poly(3, {{1, 1}}));
  CHECK(c.level(1).is_zero());  // gap between prefix and tail.from
  CHECK(c.level(2) == poly(3, {{-9, 1}, {18, 2}}));
  CHECK(c.level(3) == poly(3, {{-27, 1}, {54, 2}}));
}

TEST_CASE("class addition aligns tails") {
  auto a = cls(3, z0, {}, {{-1, 1}}, 0);
  auto b = cls(3, z0, {poly(3, {{1, 1}})}, {{-1, 2}, {1, 1}}, 1);
  auto s = a + b;
  CHECK(s.level(0) == poly(3, {{-1, 1}, {1, 1}}));
  CHECK(s.level(1) == poly(3, {{3, 1}}));  // the t^{-3} coefficients cancel: 1+2=0
  CHECK((a - a).is_zero());
}

TEST_CASE("normalization worked example: one migrating term") {
  // level 0 = t^3 with zero twist at p=3: t^3 sits on the forbidden residue
  // 0 mod 3 and migrates to t^3 at level 1 (exponent 1 * 3^1).
  auto c = cls(3, z0, {poly(3, {{3, 1}})});
  RunConfig cfg;
  auto beta = MultiplierSeq::from_digits(z0, 3);
  auto nr = normalize_support(c, beta, cfg);
  REQUIRE(nr.normalized.prefix.size() == 2);
  CHECK(nr.normalized.prefix[0].is_zero());
  CHECK(nr.normalized.prefix[1] == poly(3, {{3, 1}}));
  CHECK(nr.normalized.tail_zero());
  // witness y = (0, -t^3, 0, ...)
  CHECK(nr.witness.ys[0].is_zero());
  CHECK(nr.witness.ys[1] == poly(3, {{3, 2}}));  // -1 = 2 mod 3
  CHECK(nr.witness.ys[2].is_zero());
  CHECK(verify_additive(c, nr.normalized, beta, nr.witness, 12));

  // insufficient stabilization depth is a loud failure
  RunConfig tight;
  tight.max_depth = 1;
  try {
    normalize_support(c, beta, tight);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::depth);
  }
}

TEST_CASE("normalization fixed point: already clean input is unchanged") {
  auto c = cls(3, z0, {poly(3, {{-1, 1}, {1, 1}})});
  RunConfig cfg;
  auto beta = MultiplierSeq::from_digits(z0, 3);
  auto nr = normalize_support(c, beta, cfg);
  REQUIRE(nr.normalized.prefix.size() == 1);
  CHECK(nr.normalized.prefix[0] == poly(3, {{-1, 1}, {1, 1}}));
  CHECK(nr.normalized.tail_zero());
  for (auto& y : nr.witness.ys) CHECK(y.is_zero());
}

TEST_CASE("self-similar tails migrate with exponent rebasing") {
  // tail term t^{4 p^n} with zero twist: 4 -> (4-0)/3 is not integral, fixed.
  // tail term t^{3 p^n} migrates 3 -> 1.
  auto c = cls(3, z0, {}, {{3, 1}, {4, 2}}, 0);
  RunConfig cfg;
  auto beta = MultiplierSeq::from_digits(z0, 3);
  auto nr = normalize_support(c, beta, cfg);
  CHECK(nr.normalized.tail.terms == std::map<i64, i64>{{1, 1}, {4, 2}});
  CHECK(verify_additive(c, nr.normalized, beta, nr.witness, (i64)nr.witness.ys.size() - 1));
}

TEST_CASE("decider: Artin-Schreier style fixture") {
  // a_n = t^{-p^n} for all n, zero twist
  auto as = cls(3, z0, {}, {{-1, 1}}, 0);
  RunConfig cfg;
  auto beta = MultiplierSeq::from_digits(z0, 3);

  auto dinf = decide_trivial(as, RingTag::discinf, beta, cfg);
  CHECK(dinf.trivial);
  // the witness trivializes the class over discinf within precision
  CHECK(verify_additive(as, UnipClass{3, z0, {}, {0, {}}}, beta, dinf.witness, 3,
                        RingTag::discinf, cfg.precision));

  auto d0 = decide_trivial(as, RingTag::disc0, beta, cfg);
  CHECK_FALSE(d0.trivial);
  CHECK(d0.offending == std::map<i64, i64>{{-1, 1}});

  auto dg = decide_trivial(as, RingTag::gm, beta, cfg);
  CHECK_FALSE(dg.trivial);

  // mirrored fixture: trivial at 0, nontrivial at infinity
  auto mirror = cls(3, z0, {}, {{1, 1}}, 0);
  CHECK(decide_trivial(mirror, RingTag::disc0, beta, cfg).trivial);
  CHECK_FALSE(decide_trivial(mirror, RingTag::discinf, beta, cfg).trivial);
}

TEST_CASE("deciders reject twists outside the normal form") {
  auto beta = MultiplierSeq::from_digits(PExp::integer(-1), 3);
  auto c = cls(3, PExp::integer(-1), {poly(3, {{1, 1}})});
  RunConfig cfg;
  CHECK_THROWS_AS(decide_trivial(c, RingTag::disc0, beta, cfg), Error);
}

TEST_CASE("prefix-only classes are trivial over gm with telescoping witnesses") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 40; ++it) {
    i64 p = it % 2 ? 2 : 3;
    PExp tw = (p == 3 && it % 4 == 1) ? PExp(1, 2) : z0;
    auto beta = MultiplierSeq::from_digits(tw, p);
    UnipClass c;
    c.p = p;
    c.twist = tw;
    i64 len = 1 + rng() % 3;
    for (i64 n = 0; n < len; ++n) {
      Series s(RingTag::gm, p);
      i64 q = checked_pow(p, n);
      for (int k = 0; k < 3; ++k) {
        i64 e = ((i64)(rng() % 19) - 9) * q;
        // keep the level off the forbidden residue so no migration happens
        if (fp::norm(e / q - beta.beta(n), p) == 0) continue;
        s.set_coeff(e, 1 + (i64)(rng() % (p - 1)));
      }
      c.prefix.push_back(s);
    }
    c.tail.from = len;
    c.validate();
    RunConfig cfg;
    auto d = decide_trivial(c, RingTag::gm, beta, cfg);
    REQUIRE(d.trivial);
    CHECK(verify_additive(c, UnipClass{p, tw, {}, {0, {}}}, beta, d.witness, len + 4));
  }
}

TEST_CASE("triviality agrees across rings") {
  // a class trivial over both discs must be trivial over gm
  std::mt19937_64 rng(37);
  RunConfig cfg;
  for (int it = 0; it < 60; ++it) {
    i64 p = it % 2 ? 2 : 3;
    auto beta = MultiplierSeq::from_digits(z0, p);
    UnipClass c;
    c.p = p;
    c.twist = z0;
    c.tail.from = 0;
    for (int k = 0; k < 2; ++k) {
      i64 e = (i64)(rng() % 9) - 4;
      if (e != 0) c.tail.terms[e] = 1;
    }
    c.validate();
    auto dg = decide_trivial(c, RingTag::gm, beta, cfg);
    bool g = dg.trivial;
    bool d0 = decide_trivial(c, RingTag::disc0, beta, cfg).trivial;
    bool di = decide_trivial(c, RingTag::discinf, beta, cfg).trivial;
    CHECK(g == dg.normalized.tail_zero());
    CHECK((d0 && di) == g);
    CHECK((!g) == (!d0 || !di));
  }
}

TEST_CASE("split by sign") {
  auto c = cls(3, z0, {poly(3, {{-1, 1}, {1, 1}})}, {{-2, 1}, {2, 2}}, 1);
  auto [neg, nonneg] = split_class(c);
  CHECK(neg.level(0) == poly(3, {{-1, 1}}));
  CHECK(nonneg.level(0) == poly(3, {{1, 1}}));
  CHECK(neg.tail.terms == std::map<i64, i64>{{-2, 1}});
  CHECK(nonneg.tail.terms == std::map<i64, i64>{{2, 2}});
  // worked example: t^{-1} + t splits into (t^{-1}) and (t)
  auto w = cls(3, z0, {poly(3, {{-1, 1}, {1, 1}})});
  auto [wn, wp] = split_class(w);
  CHECK(wn.level(0) == poly(3, {{-1, 1}}));
  CHECK(wp.level(0) == poly(3, {{1, 1}}));
}

TEST_CASE("gluing the fixture with its mirror") {
  auto as = cls(3, z0, {}, {{-1, 1}}, 0);       // prescribed near 0
  auto mirror = cls(3, z0, {}, {{1, 1}}, 0);    // prescribed near infinity
  RunConfig cfg;
  auto beta = MultiplierSeq::from_digits(z0, 3);
  auto g = glue_rank2(as, mirror, beta, cfg);
  CHECK(g.glued.tail.terms == std::map<i64, i64>{{-1, 1}, {1, 1}});
  CHECK(verify_additive(g.glued, as, beta, g.witness0, 3, RingTag::disc0, cfg.precision));
  CHECK(verify_additive(g.glued, mirror, beta, g.witnessinf, 3, RingTag::discinf, cfg.precision));
}

TEST_CASE("ysum witness matches the telescoping formula over a disc") {
  auto c = cls(3, z0, {}, {{1, 1}}, 0);  // a_n = t^{p^n}
  RunConfig cfg;
  cfg.precision = 30;
  auto beta = MultiplierSeq::from_digits(z0, 3);
  auto w = witness_ysum(c, RingTag::disc0, beta, cfg);
  // y_0 = sum_n t^{3^n} within precision: exponents 1, 3, 9, 27 pass; deeper fails
  CHECK(w.ys[0].coeff(1) == 1);
  CHECK(w.ys[0].coeff(3) == 1);
  CHECK(w.ys[0].coeff(9) == 1);
  CHECK(w.ys[0].coeff(27) == 1);
  CHECK(verify_additive(c, UnipClass{3, z0, {}, {0, {}}}, beta, w, 3, RingTag::disc0, 25));
}
