#include "strat/matrix.hpp"

#include <algorithm>

namespace strat {

Mat Mat::identity(i64 n, RingTag ring, i64 p, i64 prec) {
  // A gauge identity is exactly known whatever the working window is; keep
  // its entries exact so it never erodes the precision of what it multiplies.
  (void)prec;
  Mat m = zero(n, n, ring, p, Series::kExact);
  for (i64 i = 0; i < n; ++i) m.at(i, i) = Series::monomial(ring, p, 0, 1, Series::kExact);
  return m;
}

Mat Mat::zero(i64 r, i64 c, RingTag ring, i64 p, i64 prec) { return Mat(r, c, Series(ring, p, prec)); }

RingTag Mat::ring() const { return e.at(0).ring(); }
i64 Mat::p() const { return e.at(0).p(); }

Mat Mat::operator*(const Mat& o) const {
  if (cols != o.rows) fail(Errc::internal, "matrix shape mismatch");
  Mat r = zero(rows, o.cols, ring(), p(), e.at(0).prec());
  for (i64 i = 0; i < rows; ++i)
    for (i64 j = 0; j < o.cols; ++j) {
      Series s = at(i, 0) * o.at(0, j);
      for (i64 k = 1; k < cols; ++k) s = s + at(i, k) * o.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  Mat r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] + o.e[i];
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  Mat r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] - o.e[i];
  return r;
}

bool Mat::is_upper() const {
  for (i64 i = 0; i < rows; ++i)
    for (i64 j = 0; j < i; ++j)
      if (!at(i, j).is_zero()) return false;
  return true;
}

bool Mat::is_lower() const {
  for (i64 i = 0; i < rows; ++i)
    for (i64 j = i + 1; j < cols; ++j)
      if (!at(i, j).is_zero()) return false;
  return true;
}

bool Mat::is_diagonal() const { return is_upper() && is_lower(); }

bool Mat::is_unipotent_upper() const {
  if (!is_upper()) return false;
  for (i64 i = 0; i < rows; ++i) {
    const Series& d = at(i, i);
    if (d.terms().size() != 1 || d.coeff(0) != 1) return false;
  }
  return true;
}

bool Mat::level_member(i64 n) const {
  for (auto& s : e)
    if (!s.level_member(n)) return false;
  return true;
}

Mat Mat::transpose() const {
  Mat r = zero(cols, rows, ring(), p(), e.at(0).prec());
  for (i64 i = 0; i < rows; ++i)
    for (i64 j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
  return r;
}

Mat Mat::inverse() const {
  if (rows != cols) fail(Errc::internal, "inverse of non-square matrix");
  i64 n = rows;
  if (is_upper()) {
    // Back substitution: X upper with X_ii = D_ii^{-1},
    // X_ij = -D_ii^{-1} sum_{i<k<=j} A_ik X_kj.
    Mat x = zero(n, n, ring(), p(), e.at(0).prec());
    for (i64 i = 0; i < n; ++i) x.at(i, i) = at(i, i).inverse();
    for (i64 d = 1; d < n; ++d)
      for (i64 i = 0; i + d < n; ++i) {
        i64 j = i + d;
        Series s(e.at(0).ring(), p(), e.at(0).prec());
        for (i64 k = i + 1; k <= j; ++k) s = s + at(i, k) * x.at(k, j);
        x.at(i, j) = -(x.at(i, i) * s);
      }
    return x;
  }
  if (is_lower()) return transpose().inverse().transpose();
  if (n > 5) fail(Errc::validation, "general inverse implemented only for rank <= 5");
  // Adjugate over the fraction field: det must be a unit.
  std::vector<i64> perm(n);
  for (i64 i = 0; i < n; ++i) perm[i] = i;
  auto det_of = [&](const std::vector<i64>& rs, const std::vector<i64>& cs) {
    // Laplace-free: permanent-style expansion with signs over given index sets.
    i64 m = rs.size();
    std::vector<i64> idx(m);
    for (i64 i = 0; i < m; ++i) idx[i] = i;
    Series acc(e.at(0).ring(), p(), e.at(0).prec());
    // iterate all permutations of cs
    std::vector<i64> pm = idx;
    bool first = true;
    auto parity = [](std::vector<i64> v) {
      i64 s = 0;
      for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j)
          if (v[i] > v[j]) ++s;
      return s % 2;
    };
    do {
      Series term = Series::monomial(e.at(0).ring(), p(), 0, 1, e.at(0).prec());
      for (i64 i = 0; i < m; ++i) term = term * at(rs[i], cs[pm[i]]);
      if (parity(pm)) term = -term;
      acc = first ? term : acc + term;
      first = false;
    } while (std::next_permutation(pm.begin(), pm.end()));
    return acc;
  };
  std::vector<i64> all(n);
  for (i64 i = 0; i < n; ++i) all[i] = i;
  Series det = det_of(all, all);
  Series dinv = det.inverse();
  Mat r = zero(n, n, ring(), p(), e.at(0).prec());
  for (i64 i = 0; i < n; ++i)
    for (i64 j = 0; j < n; ++j) {
      std::vector<i64> rs, cs;
      for (i64 k = 0; k < n; ++k) {
        if (k != j) rs.push_back(k);
        if (k != i) cs.push_back(k);
      }
      Series m = rs.empty() ? Series::monomial(e.at(0).ring(), p(), 0, 1, e.at(0).prec()) : det_of(rs, cs);
      if ((i + j) % 2) m = -m;
      r.at(i, j) = m * dinv;
    }
  return r;
}

Mat Mat::kronecker(const Mat& o) const {
  Mat r = zero(rows * o.rows, cols * o.cols, ring(), p(), e.at(0).prec());
  for (i64 i1 = 0; i1 < rows; ++i1)
    for (i64 j1 = 0; j1 < cols; ++j1)
      for (i64 i2 = 0; i2 < o.rows; ++i2)
        for (i64 j2 = 0; j2 < o.cols; ++j2)
          r.at(i1 * o.rows + i2, j1 * o.cols + j2) = at(i1, j1) * o.at(i2, j2);
  return r;
}

bool Mat::congruent(const Mat& a, const Mat& b, i64 window) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (size_t i = 0; i < a.e.size(); ++i)
    if (!Series::congruent(a.e[i], b.e[i], window)) return false;
  return true;
}

}  // namespace strat
