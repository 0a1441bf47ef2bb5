#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "strat/matrix.hpp"

using namespace strat;

namespace {
Series mono(i64 e, i64 c = 1) { return Series::monomial(RingTag::gm, 3, e, c); }
Series zero() { return Series(RingTag::gm, 3); }
}  // namespace

TEST_CASE("identity and multiplication") {
  Mat id = Mat::identity(2, RingTag::gm, 3);
  Mat a = Mat::zero(2, 2, RingTag::gm, 3);
  a.at(0, 0) = mono(2);
  a.at(0, 1) = mono(-1, 2);
  a.at(1, 1) = mono(0);
  CHECK(Mat::congruent(id * a, a));
  CHECK(Mat::congruent(a * id, a));
  Mat b = Mat::zero(2, 2, RingTag::gm, 3);
  b.at(0, 0) = mono(1);
  b.at(1, 0) = mono(3);
  b.at(1, 1) = mono(0, 2);
  Mat ab = a * b;
  CHECK(ab.at(0, 0) == mono(3) + mono(2, 2));  // t^2*t + 2t^{-1}*t^3
  CHECK(ab.at(0, 1) == mono(-1, 4));           // 2t^{-1}*2
  CHECK(ab.at(1, 0) == mono(3));
  CHECK(ab.at(1, 1) == mono(0, 2));
}

TEST_CASE("shape predicates") {
  Mat a = Mat::identity(3, RingTag::gm, 3);
  CHECK(a.is_diagonal());
  CHECK(a.is_upper());
  CHECK(a.is_unipotent_upper());
  a.at(0, 2) = mono(1);
  CHECK(a.is_upper());
  CHECK_FALSE(a.is_diagonal());
  CHECK(a.is_unipotent_upper());
  a.at(1, 1) = mono(3);
  CHECK_FALSE(a.is_unipotent_upper());
  a.at(2, 0) = mono(0);
  CHECK_FALSE(a.is_upper());
  CHECK(Mat::identity(2, RingTag::gm, 3).is_lower());
}

TEST_CASE("triangular inverse") {
  Mat a = Mat::zero(3, 3, RingTag::gm, 3);
  a.at(0, 0) = mono(2);
  a.at(1, 1) = mono(-1, 2);
  a.at(2, 2) = mono(0);
  a.at(0, 1) = mono(4);
  a.at(0, 2) = mono(1, 2);
  a.at(1, 2) = mono(0, 1);
  Mat inv = a.inverse();
  CHECK(Mat::congruent(a * inv, Mat::identity(3, RingTag::gm, 3)));
  CHECK(Mat::congruent(inv * a, Mat::identity(3, RingTag::gm, 3)));
}

TEST_CASE("general inverse via adjugate") {
  Mat a = Mat::zero(2, 2, RingTag::gm, 3);
  a.at(0, 0) = mono(0);
  a.at(0, 1) = mono(2);
  a.at(1, 0) = mono(-2);
  a.at(1, 1) = mono(0, 2);
  // det = 2 - 1 = 1, a unit
  Mat inv = a.inverse();
  CHECK(Mat::congruent(a * inv, Mat::identity(2, RingTag::gm, 3)));
}

TEST_CASE("level membership of a matrix") {
  Mat a = Mat::identity(2, RingTag::gm, 3);
  a.at(0, 1) = mono(9);
  CHECK(a.level_member(2));
  CHECK_FALSE(a.level_member(3));
}

TEST_CASE("kronecker dimensions and values") {
  Mat a = Mat::zero(2, 2, RingTag::gm, 3);
  a.at(0, 0) = mono(1);
  a.at(1, 1) = mono(2);
  Mat b = Mat::identity(2, RingTag::gm, 3);
  b.at(0, 1) = mono(0, 2);
  Mat k = a.kronecker(b);
  CHECK(k.rows == 4);
  CHECK(k.cols == 4);
  CHECK(k.at(0, 0) == mono(1));
  CHECK(k.at(0, 1) == mono(1, 2));
  CHECK(k.at(2, 2) == mono(2));
  CHECK(k.at(1, 0) == zero());
}

TEST_CASE("congruence over discs uses the common window") {
  Mat a = Mat::identity(2, RingTag::disc0, 3);
  Mat b = Mat::identity(2, RingTag::disc0, 3);
  a.at(0, 1) = Series::monomial(RingTag::disc0, 3, 6, 1, 8);
  b.at(0, 1) = Series(RingTag::disc0, 3, 5);  // zero, known only below t^5
  CHECK(Mat::congruent(a, b));                // t^6 lies outside the shared window
  b.at(0, 1) = Series(RingTag::disc0, 3, 8);
  CHECK_FALSE(Mat::congruent(a, b));
}
