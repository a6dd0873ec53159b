#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "otkit/errors.hpp"
#include "otkit/rational.hpp"

namespace otkit {

// Three-valued orientation.
enum class Sign : int { minus = -1, zero = 0, plus = 1 };

inline Sign sign_of(const Rational& x) { return static_cast<Sign>(x.sign()); }
inline Sign sign_of(const BigInt& x) { return static_cast<Sign>(x.sign()); }
inline Sign flip(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

// A point in R^d. Coordinates are 0-based in code; the docs and all
// reported indices follow the 1-based convention, so coordinate j of
// the docs is x[j-1] here.
struct Point {
  std::vector<Rational> x;

  Point() = default;
  explicit Point(std::vector<Rational> coords) : x(std::move(coords)) {}
  Point(std::initializer_list<Rational> coords) : x(coords) {}

  int dim() const { return static_cast<int>(x.size()); }
  const Rational& operator[](size_t i) const { return x[i]; }
  Rational& operator[](size_t i) { return x[i]; }

  friend bool operator==(const Point& a, const Point& b) = default;
};

// An ordered sequence of points sharing one dimension. Order is
// significant everywhere.
struct PointSequence {
  int dim = 0;
  std::vector<Point> pts;

  PointSequence() = default;
  explicit PointSequence(int d) : dim(d) {
    if (d < 1) throw dimension_error("PointSequence: dimension must be >= 1");
  }
  PointSequence(int d, std::vector<Point> points) : dim(d), pts(std::move(points)) {
    for (const Point& p : pts) {
      if (p.dim() != dim) throw dimension_error("PointSequence: point dimension mismatch");
    }
  }

  size_t size() const { return pts.size(); }
  bool empty() const { return pts.empty(); }
  const Point& operator[](size_t i) const { return pts[i]; }

  void push_back(Point p) {
    if (p.dim() != dim) throw dimension_error("PointSequence: point dimension mismatch");
    pts.push_back(std::move(p));
  }

  // Subsequence by 0-based indices (assumed increasing).
  PointSequence subsequence(std::span<const int> idx0) const {
    PointSequence out(dim);
    out.pts.reserve(idx0.size());
    for (int i : idx0) out.pts.push_back(pts[static_cast<size_t>(i)]);
    return out;
  }

  friend bool operator==(const PointSequence& a, const PointSequence& b) = default;
};

// Projection onto the first j coordinates.
inline Point project(const Point& p, int j) {
  if (j < 1 || j > p.dim()) throw index_error("project: coordinate index out of range");
  return Point(std::vector<Rational>(p.x.begin(), p.x.begin() + j));
}

inline PointSequence project(const PointSequence& seq, int j) {
  if (j < 1 || j > seq.dim) throw index_error("project: coordinate index out of range");
  PointSequence out(j);
  out.pts.reserve(seq.size());
  for (const Point& p : seq.pts) out.pts.push_back(project(p, j));
  return out;
}

// Strict order in the first coordinate: p comes before q iff p_1 < q_1.
inline bool first_coord_less(const Point& p, const Point& q) {
  if (p.dim() != q.dim()) throw dimension_error("first_coord_less: dimension mismatch");
  return p.x[0] < q.x[0];
}

inline Rational dist_inf(const Point& p, const Point& q) {
  if (p.dim() != q.dim()) throw dimension_error("dist_inf: dimension mismatch");
  Rational best(0);
  for (int i = 0; i < p.dim(); ++i) {
    Rational d = (p.x[i] - q.x[i]).abs();
    if (best < d) best = std::move(d);
  }
  return best;
}

// Minimum pairwise infinity-distance; zero-point or one-point sequences
// have no pairs and report 0.
inline Rational min_pairwise_dist_inf(const PointSequence& seq) {
  if (seq.size() < 2) return Rational(0);
  Rational best = dist_inf(seq[0], seq[1]);
  for (size_t i = 0; i < seq.size(); ++i) {
    for (size_t j = i + 1; j < seq.size(); ++j) {
      Rational d = dist_inf(seq[i], seq[j]);
      if (d < best) best = std::move(d);
    }
  }
  return best;
}

inline Rational max_abs_coord(const PointSequence& seq) {
  Rational best(0);
  for (const Point& p : seq.pts) {
    for (const Rational& c : p.x) {
      Rational a = c.abs();
      if (best < a) best = std::move(a);
    }
  }
  return best;
}

}  // namespace otkit
