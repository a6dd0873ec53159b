#pragma once

#include <span>
#include <utility>
#include <vector>

#include "otkit/errors.hpp"
#include "otkit/point.hpp"

namespace otkit {

// Fraction-free (Bareiss) determinant of a square integer matrix.
// Every intermediate division is exact, so values stay integral and
// bit growth stays polynomial.
inline BigInt det_bareiss(std::vector<std::vector<BigInt>> m) {
  size_t n = m.size();
  if (n == 0) throw dimension_error("det_bareiss: empty matrix");
  for (const auto& row : m) {
    if (row.size() != n) throw dimension_error("det_bareiss: matrix is not square");
  }
  int sign = 1;
  BigInt prev(1);
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return BigInt(0);
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = BigInt(0);
    }
    prev = m[k][k];
  }
  BigInt det = std::move(m[n - 1][n - 1]);
  return sign < 0 ? -det : det;
}

// Exact determinant of a square rational matrix. Denominators are
// cleared row by row, then the integer core runs fraction-free.
inline Rational det_exact(const std::vector<std::vector<Rational>>& m) {
  size_t n = m.size();
  if (n == 0) throw dimension_error("det_exact: empty matrix");
  for (const auto& row : m) {
    if (row.size() != n) throw dimension_error("det_exact: matrix is not square");
  }
  std::vector<std::vector<BigInt>> im(n, std::vector<BigInt>(n));
  BigInt scale(1);
  for (size_t i = 0; i < n; ++i) {
    BigInt l(1);
    for (const Rational& e : m[i]) {
      BigInt g = BigInt::gcd(l, e.den());
      l = l * (e.den() / g);
    }
    for (size_t j = 0; j < n; ++j) {
      im[i][j] = m[i][j].num() * (l / m[i][j].den());
    }
    scale = scale * l;
  }
  return Rational(det_bareiss(std::move(im)), std::move(scale));
}

namespace detail {

// Integer-cleared coordinates: every coordinate row is scaled by the
// common denominator of that row over all points. Row scales are
// positive, so all level-determinant signs and all ratio comparisons
// within one row survive the clearing.
struct ClearedCoords {
  std::vector<std::vector<BigInt>> coord;  // coord[r][i]: coordinate r+1 of point i
  std::vector<BigInt> scale;               // scale[r] > 0

  explicit ClearedCoords(const PointSequence& seq) {
    int d = seq.dim;
    coord.assign(static_cast<size_t>(d), std::vector<BigInt>(seq.size()));
    scale.assign(static_cast<size_t>(d), BigInt(1));
    for (int r = 0; r < d; ++r) {
      BigInt l(1);
      for (size_t i = 0; i < seq.size(); ++i) {
        const BigInt& den = seq[i][static_cast<size_t>(r)].den();
        BigInt g = BigInt::gcd(l, den);
        l = l * (den / g);
      }
      for (size_t i = 0; i < seq.size(); ++i) {
        const Rational& c = seq[i][static_cast<size_t>(r)];
        coord[static_cast<size_t>(r)][i] = c.num() * (l / c.den());
      }
      scale[static_cast<size_t>(r)] = std::move(l);
    }
  }

  // Orientation sign of the points indexed by the tuple (0-based)
  // after projection to the first `level` coordinates; tuple size
  // level+1. The ones row is eliminated by subtracting the first
  // column, leaving a level x level difference determinant; small
  // sizes are expanded directly.
  Sign level_sign(int level, std::span<const int> tuple) const {
    size_t k = static_cast<size_t>(level);
    size_t base = static_cast<size_t>(tuple[0]);
    if (k == 1) {
      return sign_of(coord[0][static_cast<size_t>(tuple[1])] - coord[0][base]);
    }
    std::vector<std::vector<BigInt>> m(k, std::vector<BigInt>(k));
    for (size_t r = 0; r < k; ++r) {
      for (size_t c = 0; c < k; ++c) {
        m[r][c] = coord[r][static_cast<size_t>(tuple[c + 1])] - coord[r][base];
      }
    }
    if (k == 2) {
      return sign_of(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
    }
    if (k == 3) {
      BigInt det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
      return sign_of(det);
    }
    return sign_of(det_bareiss(std::move(m)));
  }
};

// Row indices of the k x k "lifted" matrix: the all-ones row (index 0),
// coordinate rows 1..k-2, and coordinate row j.
inline void check_level_det_args(std::span<const Point> pts, int j) {
  int k = static_cast<int>(pts.size());
  if (k < 1) throw arity_error("level_det: needs at least one point");
  int d = pts[0].dim();
  for (const Point& p : pts) {
    if (p.dim() != d) throw dimension_error("level_det: dimension mismatch");
  }
  if (k > d + 1) throw arity_error("level_det: more than d+1 points");
  if (j < k - 1 || j > d) throw index_error("level_det: index j out of range [k-1, d]");
}

}  // namespace detail

// The level-j determinant of a k-point window: det of the k x k matrix
// whose columns are the points, with rows (1, x_1, ..., x_{k-2}, x_j).
// Its sign for j = k-1 is the orientation of the window projected to
// the first k-1 coordinates.
inline Rational level_det(std::span<const Point> pts, int j) {
  detail::check_level_det_args(pts, j);
  size_t k = pts.size();
  std::vector<int> rows;
  rows.reserve(k);
  for (int r = 0; r + 1 < static_cast<int>(k); ++r) rows.push_back(r);
  rows.push_back(j);
  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k));
  for (size_t r = 0; r < k; ++r) {
    for (size_t c = 0; c < k; ++c) {
      m[r][c] = rows[r] == 0 ? Rational(1) : pts[c][static_cast<size_t>(rows[r] - 1)];
    }
  }
  return det_exact(m);
}

inline Rational level_det(const PointSequence& seq, int j) {
  return level_det(std::span<const Point>(seq.pts), j);
}

// The tail vector (level_det(T, j), ..., level_det(T, d)).
inline std::vector<Rational> level_det_tail(std::span<const Point> pts, int j) {
  detail::check_level_det_args(pts, j);
  int d = pts[0].dim();
  std::vector<Rational> out;
  out.reserve(static_cast<size_t>(d - j + 1));
  for (int jj = j; jj <= d; ++jj) out.push_back(level_det(pts, jj));
  return out;
}

inline std::vector<Rational> level_det_tail(const PointSequence& seq, int j) {
  return level_det_tail(std::span<const Point>(seq.pts), j);
}

// Orientation of d+1 points in R^d: sgn of the determinant whose
// columns are (1, p_1, ..., p_d). Zero iff affinely dependent.
inline Sign orientation(std::span<const Point> pts) {
  if (pts.empty()) throw arity_error("orientation: empty tuple");
  int d = pts[0].dim();
  if (static_cast<int>(pts.size()) != d + 1)
    throw arity_error("orientation: needs exactly d+1 points");
  return sign_of(level_det(pts, d));
}

inline Sign orientation(const PointSequence& seq) {
  return orientation(std::span<const Point>(seq.pts));
}

}  // namespace otkit
