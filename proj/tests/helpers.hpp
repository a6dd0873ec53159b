#pragma once

#include <random>
#include <vector>

#include "otkit/determinant.hpp"
#include "otkit/point.hpp"
#include "otkit/rational.hpp"

namespace testutil {

using otkit::BigInt;
using otkit::Point;
using otkit::PointSequence;
using otkit::Rational;

inline Rational random_rational(std::mt19937_64& rng, int64_t num_range = 9,
                                int64_t den_range = 1) {
  int64_t num = static_cast<int64_t>(rng() % static_cast<uint64_t>(2 * num_range + 1)) - num_range;
  int64_t den = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(den_range));
  return Rational(BigInt(num), BigInt(den));
}

inline Point random_point(std::mt19937_64& rng, int dim, int64_t num_range = 9,
                          int64_t den_range = 1) {
  Point p;
  p.x.reserve(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) p.x.push_back(random_rational(rng, num_range, den_range));
  return p;
}

inline PointSequence random_sequence(std::mt19937_64& rng, int dim, int count,
                                     int64_t num_range = 9, int64_t den_range = 1) {
  PointSequence seq(dim);
  for (int i = 0; i < count; ++i) seq.push_back(random_point(rng, dim, num_range, den_range));
  return seq;
}

// Independent determinant oracle: cofactor expansion along the first row.
inline Rational det_cofactor(const std::vector<std::vector<Rational>>& m) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  Rational acc(0);
  for (size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Rational>> minor;
    minor.reserve(n - 1);
    for (size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      row.reserve(n - 1);
      for (size_t cc = 0; cc < n; ++cc) {
        if (cc != c) row.push_back(m[r][cc]);
      }
      minor.push_back(std::move(row));
    }
    Rational term = m[0][c] * det_cofactor(minor);
    if (c % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

// Points on the moment curve (t, t^2, ..., t^d) at the given parameters.
inline PointSequence moment_curve(int dim, const std::vector<Rational>& ts) {
  PointSequence seq(dim);
  for (const Rational& t : ts) {
    Point p;
    Rational pw(1);
    for (int j = 0; j < dim; ++j) {
      pw *= t;
      p.x.push_back(pw);
    }
    seq.push_back(std::move(p));
  }
  return seq;
}

}  // namespace testutil
