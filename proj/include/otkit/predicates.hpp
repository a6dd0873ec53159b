#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "otkit/determinant.hpp"
#include "otkit/errors.hpp"
#include "otkit/point.hpp"
#include "otkit/sigma.hpp"

namespace otkit {

// A k-ary, d-dimensional semialgebraic predicate. The evaluator is a
// pure total boolean function of k points. When the margin pair is
// present, margin(T) > stability_gap(T, eta) certifies that the truth
// value on T cannot change under any per-point perturbation of
// infinity-norm at most eta; both quantities are exact rationals.
// dim == 0 means the predicate accepts any dimension.
struct Predicate {
  int arity = 0;
  int dim = 0;
  std::string name;
  std::function<bool(std::span<const Point>)> eval;
  std::function<Rational(std::span<const Point>)> margin;
  std::function<Rational(std::span<const Point>, const Rational&)> stability_gap;

  bool has_margin() const { return static_cast<bool>(margin) && static_cast<bool>(stability_gap); }

  bool operator()(std::span<const Point> pts) const { return eval(pts); }
  bool operator()(const Point& a, const Point& b) const {
    const Point arr[2] = {a, b};
    return eval(std::span<const Point>(arr, 2));
  }
};

// A binary predicate read as a strict order test.
struct OrderPredicate {
  Predicate pred;

  explicit OrderPredicate(Predicate p) : pred(std::move(p)) {
    if (pred.arity != 2) throw arity_error("OrderPredicate: arity must be 2");
  }

  bool operator()(const Point& a, const Point& b) const { return pred(a, b); }
};

namespace detail {

inline Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= Rational(i);
  return r;
}

inline Rational pow2_rational(int n) { return Rational(BigInt::pow2(static_cast<uint64_t>(n))); }

inline Rational max_abs_coord(std::span<const Point> pts) {
  Rational best(0);
  for (const Point& p : pts) {
    for (const Rational& c : p.x) {
      Rational a = c.abs();
      if (best < a) best = std::move(a);
    }
  }
  return best;
}

// Visits all increasing k-subsets of {0, ..., n-1} in lexicographic
// order; stops early when f returns false. Returns false iff stopped.
// k == 0 visits the single empty subset.
template <typename F>
bool for_each_combination(size_t n, size_t k, F&& f) {
  if (k > n) return true;
  if (k == 0) return f(std::span<const int>{});
  std::vector<int> idx(k);
  for (size_t i = 0; i < k; ++i) idx[i] = static_cast<int>(i);
  while (true) {
    if (!f(std::span<const int>(idx))) return false;
    bool advanced = false;
    for (size_t i = k; i-- > 0;) {
      if (idx[i] < static_cast<int>(n - k + i)) {
        ++idx[i];
        for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) return true;
  }
}

}  // namespace detail

// Orientation predicate in R^d: true on a (d+1)-tuple iff its
// orientation is +1. Margin is |det|; the stability gap bounds how much
// the determinant can move when every point shifts by at most eta in
// infinity norm: (d+1)! * (2^d - 1) * eta * (B + eta)^{d-1} with B the
// largest coordinate magnitude in the tuple.
inline Predicate orientation_predicate(int d) {
  if (d < 1) throw dimension_error("orientation_predicate: dimension must be >= 1");
  Predicate p;
  p.arity = d + 1;
  p.dim = d;
  p.name = "orientation";
  p.eval = [d](std::span<const Point> pts) { return orientation(pts) == Sign::plus; };
  p.margin = [d](std::span<const Point> pts) { return level_det(pts, d).abs(); };
  p.stability_gap = [d](std::span<const Point> pts, const Rational& eta) {
    Rational b = detail::max_abs_coord(pts);
    return detail::factorial(d + 1) * (detail::pow2_rational(d) - Rational(1)) * eta *
           (b + eta).pow(static_cast<uint64_t>(d - 1));
  };
  return p;
}

// Strict order in the first coordinate. Margin is the first-coordinate
// gap; two eta-perturbations can close it by at most 2*eta.
inline OrderPredicate first_coord_order() {
  Predicate p;
  p.arity = 2;
  p.dim = 0;  // any dimension
  p.name = "first_coord_order";
  p.eval = [](std::span<const Point> pts) { return first_coord_less(pts[0], pts[1]); };
  p.margin = [](std::span<const Point> pts) { return (pts[1][0] - pts[0][0]).abs(); };
  p.stability_gap = [](std::span<const Point>, const Rational& eta) { return Rational(2) * eta; };
  return OrderPredicate(std::move(p));
}

// k-ary predicate on R^1: true iff the k reals, lifted to the moment
// curve (t, t^2, ..., t^{k-1}), form a positively oriented tuple;
// equivalently the product of all pairwise differences is positive.
// For k = 2 this is the orientation predicate of R^1.
inline Predicate moment_curve_orientation(int k) {
  if (k < 2) throw arity_error("moment_curve_orientation: arity must be >= 2");
  Predicate p;
  p.arity = k;
  p.dim = 1;
  p.name = "moment_curve_orientation_" + std::to_string(k);
  auto pairwise = [](std::span<const Point> pts) {
    Rational prod(1);
    for (size_t i = 0; i < pts.size(); ++i) {
      for (size_t j = i + 1; j < pts.size(); ++j) prod *= pts[j][0] - pts[i][0];
    }
    return prod;
  };
  p.eval = [pairwise](std::span<const Point> pts) { return pairwise(pts).sign() > 0; };
  p.margin = [pairwise](std::span<const Point> pts) { return pairwise(pts).abs(); };
  // Each factor moves by at most 2*eta, so the product moves by at most
  // prod(|f| + 2 eta) - prod(|f|).
  p.stability_gap = [](std::span<const Point> pts, const Rational& eta) {
    Rational with(1), without(1);
    Rational two_eta = Rational(2) * eta;
    for (size_t i = 0; i < pts.size(); ++i) {
      for (size_t j = i + 1; j < pts.size(); ++j) {
        Rational f = (pts[j][0] - pts[i][0]).abs();
        with *= f + two_eta;
        without *= f;
      }
    }
    return with - without;
  };
  return p;
}

// The stepped-up predicate: arity k+1 on R^{d+1}. With s_l the
// divided difference of consecutive arguments,
//   phi(s_1..s_k)     if s_1 < ... < s_k under prec,
//   phi(s_k..s_1)     if s_1 > ... > s_k,
//   true              if s_1 < s_2 > s_3,
//   false             otherwise.
// Divisions are exact rationals; the equivalent denominator-cleared
// polynomial form is never materialized.
inline Predicate step_up_predicate(Predicate phi, OrderPredicate prec) {
  if (prec.pred.dim != 0 && phi.dim != prec.pred.dim)
    throw dimension_error("step_up_predicate: phi and prec dimensions differ");
  Predicate p;
  p.arity = phi.arity + 1;
  p.dim = phi.dim + 1;
  p.name = "step_up(" + phi.name + ")";
  auto phi_ptr = std::make_shared<Predicate>(std::move(phi));
  auto prec_ptr = std::make_shared<OrderPredicate>(std::move(prec));
  p.eval = [phi_ptr, prec_ptr](std::span<const Point> pts) {
    int k = static_cast<int>(pts.size()) - 1;
    std::vector<Point> sd;
    sd.reserve(static_cast<size_t>(k));
    for (int l = 0; l < k; ++l) {
      std::optional<Point> v = divided_difference(pts[static_cast<size_t>(l)], pts[static_cast<size_t>(l) + 1]);
      if (!v)
        throw evaluation_error(
            "step_up_predicate: divided difference undefined (equal first coordinates)");
      sd.push_back(std::move(*v));
    }
    bool asc = true, desc = true;
    for (int l = 0; l + 1 < k; ++l) {
      if (!(*prec_ptr)(sd[static_cast<size_t>(l)], sd[static_cast<size_t>(l) + 1])) asc = false;
      if (!(*prec_ptr)(sd[static_cast<size_t>(l) + 1], sd[static_cast<size_t>(l)])) desc = false;
    }
    if (asc) return (*phi_ptr)(std::span<const Point>(sd));
    if (desc) {
      std::vector<Point> rev(sd.rbegin(), sd.rend());
      return (*phi_ptr)(std::span<const Point>(rev));
    }
    if (k >= 3 && (*prec_ptr)(sd[0], sd[1]) && (*prec_ptr)(sd[2], sd[1])) return true;
    return false;
  };
  return p;
}

// A total coloring of increasing arity-tuples over the ground set
// {1, ..., ground_size}. Tuples are 1-based and strictly increasing.
struct Coloring {
  int64_t ground_size = 0;
  int arity = 0;
  std::function<int(std::span<const int64_t>)> color_of;

  int operator()(std::span<const int64_t> tuple) const { return color_of(tuple); }
  int operator()(std::initializer_list<int64_t> tuple) const {
    return color_of(std::span<const int64_t>(tuple.begin(), tuple.size()));
  }
};

// The two-coloring of increasing arity-tuples of indices induced by a
// predicate on a fixed sequence: 1 where it holds, 0 where it does not.
// Evaluation is lazy; the sequence is captured by value.
inline Coloring induced_coloring(const Predicate& phi, const PointSequence& seq) {
  if (phi.dim != 0 && phi.dim != seq.dim)
    throw dimension_error("induced_coloring: predicate/sequence dimension mismatch");
  if (seq.size() < static_cast<size_t>(phi.arity))
    throw arity_error("induced_coloring: sequence shorter than the predicate arity");
  Coloring c;
  c.ground_size = static_cast<int64_t>(seq.size());
  c.arity = phi.arity;
  auto seq_ptr = std::make_shared<const PointSequence>(seq);
  auto phi_ptr = std::make_shared<const Predicate>(phi);
  c.color_of = [seq_ptr, phi_ptr](std::span<const int64_t> tuple) {
    if (static_cast<int>(tuple.size()) != phi_ptr->arity)
      throw arity_error("induced_coloring: tuple arity mismatch");
    std::vector<Point> pts;
    pts.reserve(tuple.size());
    for (int64_t i : tuple) {
      if (i < 1 || i > static_cast<int64_t>(seq_ptr->size()))
        throw index_error("induced_coloring: index out of range");
      pts.push_back((*seq_ptr)[static_cast<size_t>(i - 1)]);
    }
    return phi_ptr->eval(std::span<const Point>(pts)) ? 1 : 0;
  };
  return c;
}

namespace detail {

inline uint64_t colex_rank(std::span<const int64_t> tuple) {
  // Rank of a strictly increasing 1-based tuple among all such tuples.
  unsigned __int128 r = 0;
  for (size_t i = 0; i < tuple.size(); ++i) {
    uint64_t n = static_cast<uint64_t>(tuple[i]) - 1, k = i + 1;
    if (k > n) continue;
    unsigned __int128 b = 1;
    for (uint64_t t = 1; t <= k; ++t) b = b * (n - k + t) / t;
    r += b;
  }
  return static_cast<uint64_t>(r);
}

}  // namespace detail

// Dense copy of a coloring; worthwhile when one coloring is consulted
// many times (certification loops). Grounds too large to tabulate are
// returned as-is.
inline Coloring materialize_coloring(const Coloring& chi, uint64_t max_entries = uint64_t{1} << 22) {
  if (chi.ground_size < 1 || chi.arity < 1) return chi;
  unsigned __int128 total = 1;
  for (int t = 1; t <= chi.arity; ++t) {
    total = total * static_cast<uint64_t>(chi.ground_size - chi.arity + t) / static_cast<uint64_t>(t);
    if (total > max_entries) return chi;
  }
  auto table = std::make_shared<std::vector<int8_t>>(static_cast<uint64_t>(total));
  std::vector<int64_t> tuple(static_cast<size_t>(chi.arity));
  detail::for_each_combination(static_cast<size_t>(chi.ground_size),
                               static_cast<size_t>(chi.arity), [&](std::span<const int> idx) {
                                 for (size_t i = 0; i < idx.size(); ++i) tuple[i] = idx[i] + 1;
                                 (*table)[detail::colex_rank(tuple)] =
                                     static_cast<int8_t>(chi.color_of(tuple));
                                 return true;
                               });
  Coloring out;
  out.ground_size = chi.ground_size;
  out.arity = chi.arity;
  out.color_of = [table](std::span<const int64_t> t) {
    return static_cast<int>((*table)[detail::colex_rank(t)]);
  };
  return out;
}

// Outcome of a robustness certification. margin_based == true means the
// answer is a proof; probing is randomized and only ever refutes with
// certainty (a pass is probabilistic).
struct RobustReport {
  bool robust = false;
  bool margin_based = false;
  std::optional<std::vector<int>> witness;  // 1-based offending tuple

  explicit operator bool() const { return robust; }
};

// Certifies that the predicate's truth values on every increasing
// arity-tuple of the sequence are invariant under per-point
// perturbations of infinity-norm at most eta. With a margin pair this
// is a proof; without one it falls back to randomized probing, which
// is explicitly not a proof.
inline RobustReport certify_robust(const Predicate& phi, const PointSequence& seq,
                                   const Rational& eta, uint64_t probe_rounds = 8,
                                   uint64_t seed = 0xC0FFEE) {
  if (eta.sign() <= 0) throw argument_error("certify_robust: eta must be positive");
  RobustReport rep;
  size_t n = seq.size();
  size_t k = static_cast<size_t>(phi.arity);
  if (phi.has_margin()) {
    rep.margin_based = true;
    rep.robust = true;
    detail::for_each_combination(n, k, [&](std::span<const int> idx) {
      std::vector<Point> pts;
      pts.reserve(k);
      for (int i : idx) pts.push_back(seq[static_cast<size_t>(i)]);
      std::span<const Point> t(pts);
      if (!(phi.stability_gap(t, eta) < phi.margin(t))) {
        rep.robust = false;
        rep.witness = std::vector<int>(idx.begin(), idx.end());
        for (int& w : *rep.witness) ++w;
        return false;
      }
      return true;
    });
    return rep;
  }
  // Probing fallback: deterministic pseudo-random perturbations.
  rep.margin_based = false;
  rep.robust = true;
  std::mt19937_64 rng(seed);
  const int64_t grid = 1 << 20;
  auto jitter = [&](const Rational& e) {
    int64_t t = static_cast<int64_t>(rng() % (2 * grid + 1)) - grid;
    return e * Rational(t) / Rational(grid);
  };
  detail::for_each_combination(n, k, [&](std::span<const int> idx) {
    std::vector<Point> pts;
    pts.reserve(k);
    for (int i : idx) pts.push_back(seq[static_cast<size_t>(i)]);
    bool base = phi.eval(std::span<const Point>(pts));
    for (uint64_t round = 0; round < probe_rounds; ++round) {
      std::vector<Point> moved = pts;
      for (Point& p : moved) {
        for (Rational& c : p.x) c += jitter(eta);
      }
      if (phi.eval(std::span<const Point>(moved)) != base) {
        rep.robust = false;
        rep.witness = std::vector<int>(idx.begin(), idx.end());
        for (int& w : *rep.witness) ++w;
        return false;
      }
    }
    return true;
  });
  return rep;
}

// True iff prec recovers the index order of the sequence exactly:
// prec(p_i, p_j) holds iff i < j, checked over all ordered pairs.
inline bool certify_order_inducing(const OrderPredicate& prec, const PointSequence& seq) {
  for (size_t i = 0; i < seq.size(); ++i) {
    for (size_t j = i + 1; j < seq.size(); ++j) {
      if (!prec(seq[i], seq[j])) return false;
      if (prec(seq[j], seq[i])) return false;
    }
  }
  return true;
}

}  // namespace otkit
