#pragma once

#include <optional>
#include <span>
#include <vector>

#include "otkit/determinant.hpp"
#include "otkit/errors.hpp"
#include "otkit/point.hpp"
#include "otkit/predicates.hpp"
#include "otkit/sigma.hpp"

namespace otkit {

enum class Homogeneity { positive, negative, not_homogeneous };

// Verdict of a homogeneity check. The witness (1-based indices, present
// exactly when not homogeneous) is the lexicographically least tuple
// whose sign is zero or disagrees with the first tuple's sign.
struct HomogeneityVerdict {
  Homogeneity status = Homogeneity::positive;
  std::optional<std::vector<int>> witness;

  bool homogeneous() const { return status != Homogeneity::not_homogeneous; }
};

// Order-type homogeneity: all increasing (d+1)-tuples share one nonzero
// orientation. Fewer than d+1 points is vacuously homogeneous (reported
// positive). Degenerate tuples are classified as not homogeneous with a
// witness rather than raised, since searches need a total verdict.
inline HomogeneityVerdict is_order_type_homogeneous(const PointSequence& seq) {
  int d = seq.dim;
  size_t k = static_cast<size_t>(d) + 1;
  HomogeneityVerdict v;
  if (seq.size() < k) return v;  // vacuous
  std::optional<Sign> ref;
  detail::for_each_combination(seq.size(), k, [&](std::span<const int> idx) {
    std::vector<Point> pts;
    pts.reserve(k);
    for (int i : idx) pts.push_back(seq[static_cast<size_t>(i)]);
    Sign s = orientation(std::span<const Point>(pts));
    bool bad = s == Sign::zero || (ref && s != *ref);
    if (bad) {
      v.status = Homogeneity::not_homogeneous;
      v.witness = std::vector<int>(idx.begin(), idx.end());
      for (int& w : *v.witness) ++w;
      return false;
    }
    if (!ref) ref = s;
    return true;
  });
  if (v.status == Homogeneity::not_homogeneous) return v;
  v.status = (ref && *ref == Sign::minus) ? Homogeneity::negative : Homogeneity::positive;
  return v;
}

// True iff the projection to the first j coordinates is order-type
// homogeneous for every j <= k.
inline bool is_order_type_homogeneous_to_level(const PointSequence& seq, int k) {
  if (k < 1 || k > seq.dim)
    throw index_error("is_order_type_homogeneous_to_level: level out of range");
  for (int j = 1; j <= k; ++j) {
    if (!is_order_type_homogeneous(project(seq, j)).homogeneous()) return false;
  }
  return true;
}

inline bool is_super_order_type_homogeneous(const PointSequence& seq) {
  return is_order_type_homogeneous_to_level(seq, seq.dim);
}

namespace detail {

// 0 = not monotone (or an undefined window), +1 increasing,
// -1 decreasing, +2 vacuous (fewer than two values).
inline int chain_direction(const std::vector<std::optional<Point>>& row) {
  for (const auto& p : row) {
    if (!p) return 0;
  }
  if (row.size() < 2) return 2;
  bool inc = true, dec = true;
  for (size_t i = 0; i + 1 < row.size(); ++i) {
    if (!first_coord_less(*row[i], *row[i + 1])) inc = false;
    if (!first_coord_less(*row[i + 1], *row[i])) dec = false;
  }
  if (inc) return 1;
  if (dec) return -1;
  return 0;
}

}  // namespace detail

// Detail of a monotonicity check; level/window are reported 1-based
// when a violation or undefined window exists.
struct MonotoneReport {
  bool monotone = true;
  std::optional<int> level;
  std::optional<int> window;
};

// True iff for every j <= k the sequence of divided differences over
// all j-point windows is strictly monotone in the first coordinate
// (each level may run in either direction independently). An undefined
// divided difference makes the sequence not monotone.
inline MonotoneReport monotone_to_level_report(const PointSequence& seq, int k) {
  if (k < 1 || k > seq.dim) throw index_error("monotone_to_level: level out of range");
  MonotoneReport rep;
  size_t n = seq.size();
  // Triangle of windows: row j holds dd(p_i..p_{i+j-1}).
  std::vector<std::optional<Point>> row(seq.pts.begin(), seq.pts.end());
  for (int j = 1; j <= k; ++j) {
    if (j > 1) {
      std::vector<std::optional<Point>> next;
      if (!row.empty()) next.reserve(row.size() - 1);
      for (size_t i = 0; i + 1 < row.size(); ++i) {
        if (row[i] && row[i + 1] && (*row[i]).dim() >= 2) {
          next.push_back(divided_difference(*row[i], *row[i + 1]));
        } else {
          next.push_back(std::nullopt);
        }
      }
      row = std::move(next);
    }
    if (n < static_cast<size_t>(j)) break;  // no windows at this level: vacuous
    int dir = detail::chain_direction(row);
    if (dir == 0) {
      rep.monotone = false;
      rep.level = j;
      for (size_t i = 0; i < row.size(); ++i) {
        if (!row[i]) {
          rep.window = static_cast<int>(i) + 1;
          break;
        }
      }
      if (!rep.window) {
        for (size_t i = 0; i + 1 < row.size(); ++i) {
          if (!first_coord_less(*row[i], *row[i + 1]) &&
              !first_coord_less(*row[i + 1], *row[i])) {
            rep.window = static_cast<int>(i) + 1;
            break;
          }
        }
      }
      return rep;
    }
  }
  return rep;
}

inline bool is_monotone_to_level(const PointSequence& seq, int k) {
  return monotone_to_level_report(seq, k).monotone;
}

inline bool is_super_monotone(const PointSequence& seq) {
  return is_monotone_to_level(seq, seq.dim);
}

// Homogeneity of a sequence under an arbitrary predicate: positive when
// it holds on every increasing arity-tuple, negative when on none.
inline HomogeneityVerdict is_phi_homogeneous(const PointSequence& seq, const Predicate& phi) {
  if (phi.dim != 0 && phi.dim != seq.dim)
    throw dimension_error("is_phi_homogeneous: dimension mismatch");
  if (seq.size() < static_cast<size_t>(phi.arity))
    throw arity_error("is_phi_homogeneous: sequence shorter than arity");
  HomogeneityVerdict v;
  std::optional<bool> ref;
  detail::for_each_combination(seq.size(), static_cast<size_t>(phi.arity),
                               [&](std::span<const int> idx) {
                                 std::vector<Point> pts;
                                 pts.reserve(idx.size());
                                 for (int i : idx) pts.push_back(seq[static_cast<size_t>(i)]);
                                 bool val = phi.eval(std::span<const Point>(pts));
                                 if (ref && val != *ref) {
                                   v.status = Homogeneity::not_homogeneous;
                                   v.witness = std::vector<int>(idx.begin(), idx.end());
                                   for (int& w : *v.witness) ++w;
                                   return false;
                                 }
                                 if (!ref) ref = val;
                                 return true;
                               });
  if (v.status == Homogeneity::not_homogeneous) return v;
  v.status = (ref && !*ref) ? Homogeneity::negative : Homogeneity::positive;
  return v;
}

// Discrete Markov system check in the all-positive normalization: every
// projection level must be order-type homogeneous with strictly
// positive orientations. (The variant that allows flipping the sign of
// one coordinate function is intentionally not implemented.)
inline bool is_markov_system(const PointSequence& seq) {
  for (int j = 1; j <= seq.dim; ++j) {
    HomogeneityVerdict v = is_order_type_homogeneous(project(seq, j));
    if (v.status != Homogeneity::positive) return false;
  }
  return true;
}

}  // namespace otkit
