#pragma once

#include <optional>
#include <span>
#include <vector>

#include "otkit/determinant.hpp"
#include "otkit/errors.hpp"
#include "otkit/point.hpp"

namespace otkit {

// The divided-difference map sending two points of R^{d+1} to a point
// of R^d: component i is (x_{i+1} - y_{i+1}) / (x_1 - y_1).
// An empty optional means the map is undefined (equal first
// coordinates); undefinedness is a value, not an error.
inline std::optional<Point> divided_difference(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw dimension_error("divided_difference: dimension mismatch");
  if (x.dim() < 2) throw dimension_error("divided_difference: needs dimension >= 2");
  Rational den = x[0] - y[0];
  if (den.is_zero()) return std::nullopt;
  Point out;
  out.x.reserve(static_cast<size_t>(x.dim() - 1));
  for (int i = 1; i < x.dim(); ++i) out.x.push_back((x[static_cast<size_t>(i)] - y[static_cast<size_t>(i)]) / den);
  return out;
}

// Multivariate extension: one point is itself, and
//   dd(p_1..p_{k+1}) = dd(dd(p_1..p_k), dd(p_2..p_{k+1})).
// Evaluated as a triangle of windows so each pair is computed once.
// k points in R^d land in R^{d-k+1}; k must not exceed d for k >= 2.
inline std::optional<Point> divided_difference(std::span<const Point> pts) {
  size_t k = pts.size();
  if (k == 0) throw arity_error("divided_difference: empty argument list");
  int d = pts[0].dim();
  for (const Point& p : pts) {
    if (p.dim() != d) throw dimension_error("divided_difference: dimension mismatch");
  }
  if (k == 1) return pts[0];
  if (static_cast<int>(k) > d)
    throw arity_error("divided_difference: more points than the dimension allows");
  std::vector<std::optional<Point>> level(pts.begin(), pts.end());
  for (size_t len = 2; len <= k; ++len) {
    std::vector<std::optional<Point>> next(level.size() - 1);
    for (size_t i = 0; i + 1 < level.size(); ++i) {
      if (level[i] && level[i + 1]) next[i] = divided_difference(*level[i], *level[i + 1]);
    }
    level = std::move(next);
  }
  return level[0];
}

inline std::optional<Point> divided_difference(const PointSequence& seq) {
  return divided_difference(std::span<const Point>(seq.pts));
}

// Closed-form evaluation of the same map as a ratio of level
// determinants: (level_det(T, k), ..., level_det(T, d)) over
// level_det(T, k-1). Undefined iff the denominator vanishes.
// This is the default evaluation path; the recursive one above is
// kept for cross-validation.
inline std::optional<Point> divided_difference_det(std::span<const Point> pts) {
  size_t k = pts.size();
  if (k == 0) throw arity_error("divided_difference_det: empty argument list");
  int d = pts[0].dim();
  if (static_cast<int>(k) > d && k != 1)
    throw arity_error("divided_difference_det: more points than the dimension allows");
  Rational den = level_det(pts, static_cast<int>(k) - 1);
  if (den.is_zero()) return std::nullopt;
  std::vector<Rational> tail = level_det_tail(pts, static_cast<int>(k));
  Point out;
  out.x.reserve(tail.size());
  for (Rational& t : tail) out.x.push_back(t / den);
  return out;
}

inline std::optional<Point> divided_difference_det(const PointSequence& seq) {
  return divided_difference_det(std::span<const Point>(seq.pts));
}

// Finds the unique index i (1-based) with |dd(q_a, q_b) - p_i|_inf
// within the given radius. No index, two candidate indices, or an
// undefined divided difference all yield an empty optional.
inline std::optional<int> identify_limit(const Point& q_a, const Point& q_b,
                                         const PointSequence& base, const Rational& radius) {
  if (radius.sign() < 0) throw argument_error("identify_limit: negative radius");
  std::optional<Point> s = divided_difference(q_a, q_b);
  if (!s) return std::nullopt;
  if (s->dim() != base.dim) throw dimension_error("identify_limit: dimension mismatch");
  std::optional<int> found;
  for (size_t i = 0; i < base.size(); ++i) {
    if (!(radius < dist_inf(*s, base[i]))) {
      if (found) return std::nullopt;
      found = static_cast<int>(i) + 1;
    }
  }
  return found;
}

}  // namespace otkit
