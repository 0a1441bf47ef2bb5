#ifndef STRAT_MATRIX_HPP
#define STRAT_MATRIX_HPP

#include <vector>

#include "strat/series.hpp"

namespace strat {

// Dense square-or-rectangular matrix over Series.
struct Mat {
  i64 rows = 0, cols = 0;
  std::vector<Series> e;

  Mat() = default;
  Mat(i64 r, i64 c, const Series& fill) : rows(r), cols(c), e(r * c, fill) {}
  static Mat identity(i64 n, RingTag ring, i64 p, i64 prec = Series::kExact);
  static Mat zero(i64 r, i64 c, RingTag ring, i64 p, i64 prec = Series::kExact);

  Series& at(i64 i, i64 j) { return e[i * cols + j]; }
  const Series& at(i64 i, i64 j) const { return e[i * cols + j]; }

  Mat operator*(const Mat& o) const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;

  bool is_upper() const;
  bool is_lower() const;
  bool is_diagonal() const;
  bool is_unipotent_upper() const;  // upper with all-1 diagonal

  bool level_member(i64 n) const;

  // Inverse: fast path for triangular matrices, adjugate otherwise.
  Mat inverse() const;

  Mat transpose() const;
  Mat kronecker(const Mat& o) const;

  // Congruence within the common precision window.
  static bool congruent(const Mat& a, const Mat& b, i64 window = Series::kExact);

  RingTag ring() const;
  i64 p() const;
};

}  // namespace strat

#endif
