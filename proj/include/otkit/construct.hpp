#pragma once

#include <cstdlib>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "otkit/errors.hpp"
#include "otkit/homogeneity.hpp"
#include "otkit/parallel.hpp"
#include "otkit/point.hpp"
#include "otkit/predicates.hpp"
#include "otkit/sigma.hpp"

namespace otkit {

// Guard limits. Constructions that would exceed them are refused (or
// degrade to sampling) with an explicit report, never silently.
struct Limits {
  uint64_t max_points = uint64_t{1} << 20;          // refuse larger constructions
  uint64_t tuple_budget = 10'000'000;               // exhaustive-check ceiling
  uint64_t sample_size = 20'000;                    // samples when over budget
  uint64_t max_tower_bits = uint64_t{1} << 26;      // refuse larger tower values
  uint64_t max_perturb_points = 4096;               // skip perturbation beyond
  int max_epsilon_iters = 16;
  int threads = 1;
};

inline uint64_t env_u64(const char* name, uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  return std::strtoull(v, nullptr, 10);
}

// Environment overrides: OTKIT_MAX_POINTS, OTKIT_TUPLE_BUDGET,
// OTKIT_SAMPLE_SIZE, OTKIT_MAX_TOWER_BITS, OTKIT_THREADS.
inline Limits limits_from_env() {
  Limits l;
  l.max_points = env_u64("OTKIT_MAX_POINTS", l.max_points);
  l.tuple_budget = env_u64("OTKIT_TUPLE_BUDGET", l.tuple_budget);
  l.sample_size = env_u64("OTKIT_SAMPLE_SIZE", l.sample_size);
  l.max_tower_bits = env_u64("OTKIT_MAX_TOWER_BITS", l.max_tower_bits);
  l.threads = static_cast<int>(env_u64("OTKIT_THREADS", 1));
  return l;
}

// Iterated exponential: tower(1, x) = x, tower(h+1, x) = 2^tower(h, x).
// Guarded: refuses with a required-bits estimate once the next level
// would not fit in memory.
inline BigInt tower(int height, const BigInt& x, const Limits& limits = Limits{}) {
  if (height < 1) throw argument_error("tower: height must be >= 1");
  if (x.sign() < 0) throw argument_error("tower: x must be >= 0");
  BigInt val = x;
  for (int level = 2; level <= height; ++level) {
    if (!val.fits_uint64() || val.to_uint64() > limits.max_tower_bits) {
      throw guard_error("tower: refusing level " + std::to_string(level) + ", would need ~" +
                        val.to_string() + " bits");
    }
    val = BigInt::pow2(val.to_uint64());
  }
  return val;
}

inline BigInt tower(int height, int64_t x, const Limits& limits = Limits{}) {
  return tower(height, BigInt(x), limits);
}

// A fixed-length binary vector, position 1 leftmost. Lexicographic
// order coincides with numeric order of the packed bits.
struct BinaryVector {
  int length = 0;
  uint64_t bits = 0;

  static BinaryVector from_index(int length, uint64_t value) {
    if (length < 1 || length > 63) throw argument_error("BinaryVector: length out of range");
    if (value >> length) throw argument_error("BinaryVector: value too wide");
    return BinaryVector{length, value};
  }

  // 1-based position i.
  int bit(int i) const {
    if (i < 1 || i > length) throw index_error("BinaryVector: position out of range");
    return static_cast<int>((bits >> (length - i)) & 1u);
  }

  std::string to_string() const {
    std::string s;
    for (int i = 1; i <= length; ++i) s += bit(i) ? '1' : '0';
    return s;
  }

  friend bool operator==(const BinaryVector&, const BinaryVector&) = default;
  friend auto operator<=>(const BinaryVector& a, const BinaryVector& b) {
    return a.bits <=> b.bits;  // lexicographic
  }
};

// First differing position (1-based) of two distinct equal-length
// binary vectors.
inline int first_diff_pos(const BinaryVector& a, const BinaryVector& b) {
  if (a.length != b.length) throw dimension_error("first_diff_pos: length mismatch");
  uint64_t x = a.bits ^ b.bits;
  if (x == 0) throw argument_error("first_diff_pos: vectors are equal");
  int highest = static_cast<int>(std::bit_width(x)) - 1;
  return a.length - highest;
}

namespace detail {

// C(n, k) clamped to avoid overflow; anything above the cap reports cap.
inline uint64_t binomial_clamped(uint64_t n, uint64_t k, uint64_t cap) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap;
  }
  return static_cast<uint64_t>(r);
}

}  // namespace detail

// Transfers an arity-k coloring of [N] to an arity-(k+1) coloring of
// the 2^N binary vectors (ground indices are 1-based lexicographic
// ranks). With delta_l the first differing position of consecutive
// vectors of the sorted tuple:
//   chi(delta_1..delta_k)  when the deltas are strictly monotone,
//   1                      when delta_1 < delta_2 > delta_3,
//   0                      otherwise.
// The middle case needs k >= 3 to be expressible; for k = 2 only the
// two monotone cases can occur (consecutive deltas are never equal)
// and the fallthrough yields 0. Unsorted input tuples are sorted first.
inline Coloring step_up_coloring(const Coloring& chi) {
  if (chi.ground_size < 1 || chi.ground_size > 62)
    throw guard_error("step_up_coloring: ground set of 2^N needs N in [1, 62]");
  int n = static_cast<int>(chi.ground_size);
  Coloring out;
  out.ground_size = int64_t{1} << n;
  out.arity = chi.arity + 1;
  auto base = std::make_shared<const Coloring>(chi);
  out.color_of = [base, n](std::span<const int64_t> tuple_in) {
    std::vector<int64_t> tuple(tuple_in.begin(), tuple_in.end());
    std::sort(tuple.begin(), tuple.end());
    if (static_cast<int>(tuple.size()) != base->arity + 1)
      throw arity_error("step_up_coloring: tuple arity mismatch");
    for (size_t i = 0; i + 1 < tuple.size(); ++i) {
      if (tuple[i] == tuple[i + 1]) throw argument_error("step_up_coloring: repeated element");
    }
    int k = base->arity;
    std::vector<int64_t> deltas(static_cast<size_t>(k));
    for (int l = 0; l < k; ++l) {
      auto a = BinaryVector::from_index(n, static_cast<uint64_t>(tuple[static_cast<size_t>(l)] - 1));
      auto b = BinaryVector::from_index(n, static_cast<uint64_t>(tuple[static_cast<size_t>(l) + 1] - 1));
      deltas[static_cast<size_t>(l)] = first_diff_pos(a, b);
    }
    bool asc = true, desc = true;
    for (int l = 0; l + 1 < k; ++l) {
      if (!(deltas[static_cast<size_t>(l)] < deltas[static_cast<size_t>(l) + 1])) asc = false;
      if (!(deltas[static_cast<size_t>(l)] > deltas[static_cast<size_t>(l) + 1])) desc = false;
    }
    if (asc || desc) {
      std::vector<int64_t> sorted = deltas;
      std::sort(sorted.begin(), sorted.end());
      return base->color_of(std::span<const int64_t>(sorted));
    }
    if (k >= 3 && deltas[0] < deltas[1] && deltas[1] > deltas[2]) return 1;
    return 0;
  };
  return out;
}

// The stepped-up sequence: for every binary vector a of length N (in
// lexicographic order) the point
//   q_a = sum_i a_i eps^i (1, p_i1, ..., p_id)  in R^{d+1}.
// Preconditions enforced: prec order-inducing on the base, and both
// predicates margin-positive on it (robust for small enough eta).
inline PointSequence step_up_sequence(const PointSequence& base, const Predicate& phi,
                                      const OrderPredicate& prec, const Rational& epsilon,
                                      const Limits& limits = Limits{}) {
  if (epsilon.sign() <= 0) throw argument_error("step_up_sequence: epsilon must be positive");
  size_t n = base.size();
  if (n == 0) throw arity_error("step_up_sequence: empty base sequence");
  if (n > 62 || (uint64_t{1} << n) > limits.max_points) {
    throw guard_error("step_up_sequence: refusing 2^" + std::to_string(n) + " points (limit " +
                      std::to_string(limits.max_points) + ")");
  }
  if (!certify_order_inducing(prec, base))
    throw argument_error("step_up_sequence: prec is not order-inducing on the base");
  if (phi.has_margin() && base.size() >= static_cast<size_t>(phi.arity)) {
    bool ok = detail::for_each_combination(
        n, static_cast<size_t>(phi.arity), [&](std::span<const int> idx) {
          std::vector<Point> pts;
          for (int i : idx) pts.push_back(base[static_cast<size_t>(i)]);
          return phi.margin(std::span<const Point>(pts)).sign() > 0;
        });
    if (!ok) throw argument_error("step_up_sequence: phi has a zero margin on the base");
  }
  int d = base.dim;
  // Per-position generator vectors eps^i * (1, p_i).
  std::vector<Point> gen(n);
  Rational pw(1);
  for (size_t i = 0; i < n; ++i) {
    pw *= epsilon;
    Point g;
    g.x.reserve(static_cast<size_t>(d) + 1);
    g.x.push_back(pw);
    for (int j = 0; j < d; ++j) g.x.push_back(pw * base[i][static_cast<size_t>(j)]);
    gen[i] = std::move(g);
  }
  uint64_t count = uint64_t{1} << n;
  PointSequence out(d + 1);
  out.pts.resize(count);
  out.pts[0] = Point(std::vector<Rational>(static_cast<size_t>(d) + 1, Rational(0)));
  for (uint64_t a = 1; a < count; ++a) {
    uint64_t low = a & (~a + 1);
    int low_bit = std::countr_zero(low);
    size_t pos = n - 1 - static_cast<size_t>(low_bit);  // numeric bit -> 1-based position - 1
    const Point& prev = out.pts[a ^ low];
    Point q = prev;
    for (int j = 0; j <= d; ++j) q.x[static_cast<size_t>(j)] += gen[pos][static_cast<size_t>(j)];
    out.pts[a] = std::move(q);
  }
  return out;
}

enum class CertifyMode { exhaustive, sampled, auto_by_budget };

// One check of an epsilon certificate. Exhaustive passes are proofs
// for the finite instance; sampled ones never are.
struct CheckRecord {
  bool exhaustive = false;
  uint64_t checked = 0;
  bool pass = false;

  std::string status() const {
    return exhaustive ? "exhaustive" : "sampled(" + std::to_string(checked) + ")";
  }
};

struct EpsilonCertificate {
  Rational epsilon;
  CheckRecord order_agreement;
  CheckRecord limit_identification;
  CheckRecord coloring_fidelity;

  bool all_pass() const {
    return order_agreement.pass && limit_identification.pass && coloring_fidelity.pass;
  }
  bool all_exhaustive() const {
    return order_agreement.exhaustive && limit_identification.exhaustive &&
           coloring_fidelity.exhaustive;
  }
};

struct CertifyOutcome {
  bool ok = false;
  EpsilonCertificate cert;
  std::string failed_check;
  std::string witness;
};

namespace detail {

inline std::vector<uint64_t> sample_distinct_sorted(std::mt19937_64& rng, uint64_t universe,
                                                    size_t k) {
  std::vector<uint64_t> out;
  out.reserve(k);
  while (true) {
    out.clear();
    for (size_t i = 0; i < k; ++i) out.push_back(rng() % universe);
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) == out.end()) return out;
  }
}

// Cross-multiplied form of the limit-identification check, entirely in
// integers over cleared coordinates: with row scales S, the divided
// difference of a pair is componentwise (v_j S_1) / (u S_{j+1}) with
// u the first-coordinate difference, and |dd_j - pn/pd| <= rn/rd
// becomes |A_j pd - B_j pn| rn_den <= rn_num B_j pd. Algebraically
// identical to identify_limit composed with first_diff_pos, without
// divisions or gcd reductions.
class PairIdentifier {
 public:
  PairIdentifier(const ClearedCoords& cleared, const PointSequence& base, Rational radius)
      : cleared_(cleared), base_(base), radius_(std::move(radius)), d_(base.dim) {}

  // 0-based indices a != b; expected is the 1-based base index. True
  // iff the divided difference lies within the radius of exactly the
  // expected base point and no other.
  bool matches(size_t a, size_t b, int expected) const {
    BigInt u = cleared_.coord[0][b] - cleared_.coord[0][a];
    if (u.is_zero()) return false;
    int flip = u.sign() < 0 ? -1 : 1;
    if (flip < 0) u = -u;
    std::vector<BigInt> num(static_cast<size_t>(d_)), den(static_cast<size_t>(d_));
    for (int j = 1; j <= d_; ++j) {
      BigInt v = cleared_.coord[static_cast<size_t>(j)][b] - cleared_.coord[static_cast<size_t>(j)][a];
      if (flip < 0) v = -v;
      num[static_cast<size_t>(j - 1)] = v * cleared_.scale[0];
      den[static_cast<size_t>(j - 1)] = u * cleared_.scale[static_cast<size_t>(j)];
    }
    if (!within(num, den, static_cast<size_t>(expected - 1))) return false;
    for (size_t i = 0; i < base_.size(); ++i) {
      if (i == static_cast<size_t>(expected - 1)) continue;
      if (within(num, den, i)) return false;
    }
    return true;
  }

 private:
  bool within(const std::vector<BigInt>& num, const std::vector<BigInt>& den, size_t i) const {
    for (int j = 0; j < d_; ++j) {
      const Rational& p = base_[i][static_cast<size_t>(j)];
      BigInt lhs = (num[static_cast<size_t>(j)] * p.den() - den[static_cast<size_t>(j)] * p.num()).abs() *
                   radius_.den();
      BigInt rhs = radius_.num() * den[static_cast<size_t>(j)] * p.den();
      if (rhs < lhs) return false;
    }
    return true;
  }

  const ClearedCoords& cleared_;
  const PointSequence& base_;
  Rational radius_;
  int d_;
};

// Denominator-cleared evaluation of the stepped-up predicate's color
// on a tuple of a stepped sequence, valid for the orientation
// predicate under the first-coordinate order (the combination the
// tower construction uses). The divided difference of a consecutive
// pair scales to the integer column (u, v_1, ..., v_d) by positive
// factors, so order comparisons become cross-multiplications and the
// orientation becomes one integer determinant sign. Exactly equal to
// evaluating the rational predicate; tested against it.
class ClearedPsiColor {
 public:
  ClearedPsiColor(const ClearedCoords& cleared, int base_dim)
      : cleared_(cleared), d_(base_dim) {}

  // tuple: 0-based, strictly increasing stepped-sequence indices of
  // size d+2; returns the induced color, or -1 when a first-coordinate
  // difference degenerates (callers fall back to the rational path).
  int color(std::span<const uint64_t> tuple) const {
    int k = d_ + 1;  // arity of the base orientation predicate
    std::vector<std::vector<BigInt>> cols(static_cast<size_t>(k));
    for (int l = 0; l < k; ++l) {
      uint64_t a = tuple[static_cast<size_t>(l)], b = tuple[static_cast<size_t>(l) + 1];
      std::vector<BigInt> col(static_cast<size_t>(d_) + 1);
      col[0] = cleared_.coord[0][b] - cleared_.coord[0][a];
      if (col[0].sign() <= 0) return -1;
      for (int j = 1; j <= d_; ++j) {
        col[static_cast<size_t>(j)] =
            cleared_.coord[static_cast<size_t>(j)][b] - cleared_.coord[static_cast<size_t>(j)][a];
      }
      cols[static_cast<size_t>(l)] = std::move(col);
    }
    // c[l] = sign of (dd_l - dd_{l+1}) in the first coordinate.
    std::vector<int> cmp(static_cast<size_t>(k) - 1);
    for (int l = 0; l + 1 < k; ++l) {
      BigInt lhs = cols[static_cast<size_t>(l)][1] * cols[static_cast<size_t>(l) + 1][0];
      BigInt rhs = cols[static_cast<size_t>(l) + 1][1] * cols[static_cast<size_t>(l)][0];
      cmp[static_cast<size_t>(l)] = lhs == rhs ? 0 : (lhs < rhs ? -1 : 1);
    }
    bool asc = true, desc = true;
    for (int c : cmp) {
      if (c >= 0) asc = false;
      if (c <= 0) desc = false;
    }
    if (asc || desc) {
      std::vector<std::vector<BigInt>> m(static_cast<size_t>(k),
                                         std::vector<BigInt>(static_cast<size_t>(k)));
      for (int l = 0; l < k; ++l) {
        size_t src = asc ? static_cast<size_t>(l) : static_cast<size_t>(k - 1 - l);
        for (int r = 0; r < k; ++r) {
          m[static_cast<size_t>(r)][static_cast<size_t>(l)] = cols[src][static_cast<size_t>(r)];
        }
      }
      return det_bareiss(std::move(m)).sign() > 0 ? 1 : 0;
    }
    if (k >= 3 && cmp[0] < 0 && cmp[1] > 0) return 1;
    return 0;
  }

 private:
  const ClearedCoords& cleared_;
  int d_;
};

inline bool cleared_psi_applicable(const Predicate& phi, const OrderPredicate& prec) {
  return phi.name == "orientation" && prec.pred.name == "first_coord_order";
}

}  // namespace detail

// Certifies a concrete epsilon for an already-built stepped-up sequence
// against its base:
//   (a) the lexicographic order of the binary vectors agrees with the
//       first-coordinate order on Q (consecutive comparisons prove all
//       pairs, so this check is always exhaustive);
//   (b) the divided difference of every pair of Q identifies the base
//       point indexed by the first differing position, within radius
//       half the minimum pairwise distance of the base;
//   (c) the coloring induced on Q by the stepped-up predicate equals
//       the stepped-up coloring of the base coloring, tuple for tuple.
// Checks over the tuple budget degrade to sampling (or refuse in
// exhaustive mode); every record carries its exhaustive/sampled status.
inline CertifyOutcome certify_points(const PointSequence& stepped, const PointSequence& base,
                                     const Predicate& phi, const OrderPredicate& prec,
                                     const Rational& epsilon, CertifyMode mode = CertifyMode::auto_by_budget,
                                     const Limits& limits = Limits{}, uint64_t seed = 0x5EED,
                                     std::optional<Rational> radius_override = std::nullopt) {
  CertifyOutcome out;
  out.cert.epsilon = epsilon;
  size_t n = base.size();
  uint64_t count = stepped.size();

  // (a) order agreement, consecutive pairs.
  out.cert.order_agreement.exhaustive = true;
  out.cert.order_agreement.checked = count ? count - 1 : 0;
  out.cert.order_agreement.pass = true;
  for (uint64_t i = 0; i + 1 < count; ++i) {
    if (!first_coord_less(stepped[i], stepped[i + 1])) {
      out.cert.order_agreement.pass = false;
      out.failed_check = "order_agreement";
      out.witness = "consecutive pair (" + std::to_string(i + 1) + ", " + std::to_string(i + 2) +
                    ") not increasing";
      return out;
    }
  }

  // (b) limit identification, cross-multiplied over cleared integers.
  Rational radius = radius_override
                        ? *radius_override
                        : (n >= 2 ? min_pairwise_dist_inf(base) / Rational(2) : Rational(0));
  uint64_t total_pairs = count < 2 ? 0 : detail::binomial_clamped(count, 2, UINT64_MAX);
  bool b_exhaustive = mode != CertifyMode::sampled && total_pairs <= limits.tuple_budget;
  if (mode == CertifyMode::exhaustive && total_pairs > limits.tuple_budget) {
    throw guard_error("certify: " + std::to_string(total_pairs) +
                      " pairs exceed the exhaustive budget");
  }
  std::mt19937_64 rng(seed);
  detail::ClearedCoords cleared(stepped);
  detail::PairIdentifier identifier(cleared, base, radius);
  struct PairResult {
    bool ok = true;
    uint64_t a = 0, b = 0;
  };
  auto check_pair = [&](uint64_t a, uint64_t b, PairResult& res) {
    auto va = BinaryVector::from_index(static_cast<int>(n), a);
    auto vb = BinaryVector::from_index(static_cast<int>(n), b);
    int expect = first_diff_pos(va, vb);
    if (!identifier.matches(a, b, expect)) {
      res.ok = false;
      res.a = a;
      res.b = b;
      return false;
    }
    return true;
  };
  PairResult pres;
  if (b_exhaustive) {
    pres = parallel_map_reduce<PairResult>(
        count, limits.threads,
        [&](uint64_t lo, uint64_t hi) {
          PairResult r;
          for (uint64_t a = lo; a < hi && r.ok; ++a) {
            for (uint64_t b = a + 1; b < count; ++b) {
              if (!check_pair(a, b, r)) break;
            }
          }
          return r;
        },
        [](PairResult acc, PairResult r) {
          if (!acc.ok) return acc;
          return r;
        },
        PairResult{});
    out.cert.limit_identification.exhaustive = true;
    out.cert.limit_identification.checked = total_pairs;
  } else {
    uint64_t s = std::min<uint64_t>(limits.sample_size, total_pairs);
    for (uint64_t t = 0; t < s && pres.ok; ++t) {
      auto pick = detail::sample_distinct_sorted(rng, count, 2);
      check_pair(pick[0], pick[1], pres);
    }
    out.cert.limit_identification.exhaustive = false;
    out.cert.limit_identification.checked = std::min<uint64_t>(limits.sample_size, total_pairs);
  }
  out.cert.limit_identification.pass = pres.ok;
  if (!pres.ok) {
    out.failed_check = "limit_identification";
    out.witness = "pair of vector ranks (" + std::to_string(pres.a + 1) + ", " +
                  std::to_string(pres.b + 1) + ")";
    return out;
  }

  // (c) coloring fidelity.
  Predicate psi = step_up_predicate(phi, prec);
  uint64_t tuple_k = static_cast<uint64_t>(psi.arity);
  uint64_t total_tuples = detail::binomial_clamped(count, tuple_k, UINT64_MAX);
  bool c_exhaustive = mode != CertifyMode::sampled && total_tuples <= limits.tuple_budget;
  if (mode == CertifyMode::exhaustive && total_tuples > limits.tuple_budget) {
    throw guard_error("certify: " + std::to_string(total_tuples) +
                      " tuples exceed the exhaustive budget");
  }
  std::optional<Coloring> chi_prime;
  if (n >= static_cast<size_t>(phi.arity)) {
    chi_prime = step_up_coloring(materialize_coloring(induced_coloring(phi, base)));
  }
  std::optional<detail::ClearedPsiColor> fast_psi;
  if (detail::cleared_psi_applicable(phi, prec)) fast_psi.emplace(cleared, base.dim);
  auto psi_color = [&](std::span<const int64_t> tuple) {
    if (fast_psi) {
      std::vector<uint64_t> idx0(tuple.size());
      for (size_t i = 0; i < tuple.size(); ++i) idx0[i] = static_cast<uint64_t>(tuple[i]) - 1;
      int c = fast_psi->color(idx0);
      if (c >= 0) return c;
    }
    std::vector<Point> pts;
    pts.reserve(tuple.size());
    for (int64_t i : tuple) pts.push_back(stepped[static_cast<size_t>(i - 1)]);
    return psi.eval(std::span<const Point>(pts)) ? 1 : 0;
  };
  auto check_tuple = [&](std::span<const int64_t> tuple) {
    return !chi_prime || psi_color(tuple) == (*chi_prime)(tuple);
  };
  bool c_pass = true;
  std::string c_witness;
  uint64_t c_checked = 0;
  if (total_tuples == 0 || !chi_prime) {
    out.cert.coloring_fidelity.exhaustive = true;
  } else if (c_exhaustive) {
    detail::for_each_combination(count, tuple_k, [&](std::span<const int> idx) {
      std::vector<int64_t> tuple(idx.begin(), idx.end());
      for (int64_t& v : tuple) ++v;
      ++c_checked;
      if (!check_tuple(tuple)) {
        c_pass = false;
        c_witness = "tuple (";
        for (size_t i = 0; i < tuple.size(); ++i)
          c_witness += (i ? "," : "") + std::to_string(tuple[i]);
        c_witness += ")";
        return false;
      }
      return true;
    });
    out.cert.coloring_fidelity.exhaustive = true;
    c_checked = total_tuples;
  } else {
    uint64_t s = std::min<uint64_t>(limits.sample_size, total_tuples);
    for (uint64_t t = 0; t < s && c_pass; ++t) {
      auto pick = detail::sample_distinct_sorted(rng, count, tuple_k);
      std::vector<int64_t> tuple(pick.begin(), pick.end());
      for (int64_t& v : tuple) ++v;
      ++c_checked;
      if (!check_tuple(tuple)) {
        c_pass = false;
        c_witness = "sampled tuple";
      }
    }
    out.cert.coloring_fidelity.exhaustive = false;
  }
  out.cert.coloring_fidelity.checked = c_checked;
  out.cert.coloring_fidelity.pass = c_pass;
  if (!c_pass) {
    out.failed_check = "coloring_fidelity";
    out.witness = c_witness;
    return out;
  }
  out.ok = true;
  return out;
}

// Builds Q for the given epsilon and certifies it.
inline CertifyOutcome certify_epsilon(const PointSequence& base, const Predicate& phi,
                                      const OrderPredicate& prec, const Rational& epsilon,
                                      CertifyMode mode = CertifyMode::auto_by_budget,
                                      const Limits& limits = Limits{}, uint64_t seed = 0x5EED) {
  PointSequence stepped = step_up_sequence(base, phi, prec, epsilon, limits);
  return certify_points(stepped, base, phi, prec, epsilon, mode, limits, seed);
}

struct ChosenEpsilon {
  Rational epsilon;
  EpsilonCertificate cert;
  PointSequence stepped;
};

// Starts at 1/2 and squares the denominator until certification passes
// in the configured mode. Deterministic; errors out at the iteration
// cap, which indicates a non-robust input.
inline ChosenEpsilon choose_epsilon(const PointSequence& base, const Predicate& phi,
                                    const OrderPredicate& prec,
                                    CertifyMode mode = CertifyMode::auto_by_budget,
                                    const Limits& limits = Limits{}, uint64_t seed = 0x5EED) {
  Rational eps(1, 2);
  for (int iter = 0; iter < limits.max_epsilon_iters; ++iter) {
    PointSequence stepped = step_up_sequence(base, phi, prec, eps, limits);
    CertifyOutcome oc = certify_points(stepped, base, phi, prec, eps, mode, limits, seed);
    if (oc.ok) return ChosenEpsilon{eps, oc.cert, std::move(stepped)};
    eps = eps * eps;
  }
  throw guard_error("choose_epsilon: no certified epsilon after " +
                    std::to_string(limits.max_epsilon_iters) +
                    " iterations; the input does not look robust");
}

// Deterministic general-position perturbation: coordinate (i, j) moves
// by eta * theta^{(i-1)*d + j} with theta = 1/2. eta = 0 is the
// identity.
inline PointSequence perturb_points(const PointSequence& seq, const Rational& eta) {
  if (eta.sign() < 0) throw argument_error("perturb: eta must be >= 0");
  if (eta.is_zero()) return seq;
  const Rational theta(1, 2);
  PointSequence out(seq.dim);
  out.pts.reserve(seq.size());
  Rational power(1);
  for (size_t i = 0; i < seq.size(); ++i) {
    Point p = seq[i];
    for (int j = 0; j < seq.dim; ++j) {
      power *= theta;  // theta^{(i-1)*d + j} in 1-based terms
      p.x[static_cast<size_t>(j)] += eta * power;
    }
    out.pts.push_back(std::move(p));
  }
  return out;
}

// True iff every (d+1)-tuple has nonzero orientation. Refuses when the
// tuple count exceeds the budget. Runs on cleared integer coordinates;
// the row scaling cannot change any zero/nonzero verdict.
inline bool certify_general_position(const PointSequence& seq, const Limits& limits = Limits{}) {
  size_t k = static_cast<size_t>(seq.dim) + 1;
  uint64_t total = detail::binomial_clamped(seq.size(), k, UINT64_MAX);
  if (total > limits.tuple_budget) {
    throw guard_error("certify_general_position: " + std::to_string(total) +
                      " tuples exceed the budget of " + std::to_string(limits.tuple_budget));
  }
  if (seq.size() < k) return true;
  detail::ClearedCoords cleared(seq);
  bool ok = true;
  detail::for_each_combination(seq.size(), k, [&](std::span<const int> idx) {
    if (cleared.level_sign(seq.dim, idx) == Sign::zero) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

struct PerturbOutcome {
  PointSequence points;
  // "certified" | "degenerate" | "uncertified_over_budget"
  std::string status;

  bool certified() const { return status == "certified"; }
};

// Perturbs and then certifies general position when the tuple count is
// within budget; otherwise returns the points with an explicit
// "uncertified" flag.
inline PerturbOutcome perturb_general_position(const PointSequence& seq, const Rational& eta,
                                               const Limits& limits = Limits{}) {
  PerturbOutcome out;
  out.points = perturb_points(seq, eta);
  uint64_t total =
      detail::binomial_clamped(seq.size(), static_cast<size_t>(seq.dim) + 1, UINT64_MAX);
  if (total > limits.tuple_budget) {
    out.status = "uncertified_over_budget";
    return out;
  }
  out.status = certify_general_position(out.points, limits) ? "certified" : "degenerate";
  return out;
}

// A perturbation radius certified against every projection level of
// the sequence: any per-point move of at most the returned value
// preserves the sign of every projected orientation, and with it every
// super-order-type verdict of every subsequence. Starts at `start`
// (clamped by the margins) and halves until every level margin clears
// its stability gap.
inline Rational super_structure_radius(const PointSequence& seq, Rational start,
                                       const Limits& limits = Limits{}) {
  if (start.sign() <= 0) throw argument_error("super_structure_radius: start must be positive");
  uint64_t total = 0;
  for (int j = 1; j <= seq.dim; ++j) {
    total += detail::binomial_clamped(seq.size(), static_cast<size_t>(j) + 1, UINT64_MAX);
  }
  if (total > limits.tuple_budget) {
    throw guard_error("super_structure_radius: " + std::to_string(total) +
                      " tuples exceed the budget");
  }
  std::vector<Predicate> phis;
  std::vector<PointSequence> projs;
  for (int j = 1; j <= seq.dim; ++j) {
    phis.push_back(orientation_predicate(j));
    projs.push_back(project(seq, j));
  }
  for (int halvings = 0; halvings < 4096; ++halvings, start = start / Rational(2)) {
    bool ok = true;
    for (int j = 1; j <= seq.dim && ok; ++j) {
      const Predicate& phi = phis[static_cast<size_t>(j - 1)];
      const PointSequence& proj = projs[static_cast<size_t>(j - 1)];
      ok = detail::for_each_combination(
          proj.size(), static_cast<size_t>(j) + 1, [&](std::span<const int> idx) {
            std::vector<Point> pts;
            pts.reserve(idx.size());
            for (int i : idx) pts.push_back(proj[static_cast<size_t>(i)]);
            std::span<const Point> t(pts);
            return phi.stability_gap(t, start) < phi.margin(t);
          });
    }
    if (ok) return start;
  }
  throw guard_error(
      "super_structure_radius: no positive radius found; a projection level is degenerate");
}

// Per-level record of the tower construction.
struct LevelRecord {
  int dim = 0;
  uint64_t base_size = 0;
  uint64_t size = 0;
  Rational epsilon;
  Rational eta;
  Rational identification_radius;
  bool perturbed = false;
  EpsilonCertificate cert;
  std::string general_position;  // "certified" | "uncertified_over_budget" | "skipped_large"
};

struct BuildResult {
  PointSequence points;
  std::vector<LevelRecord> levels;
};

namespace detail {

inline Rational min_consecutive_first_gap(const PointSequence& seq) {
  Rational best(0);
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    Rational g = seq[i + 1][0] - seq[i][0];
    if (i == 0 || g < best) best = std::move(g);
  }
  return best;
}

// Largest power of two <= x (x > 0). Keeps derived magnitudes like the
// perturbation scale on the dyadic grid, so they do not inflate every
// downstream numerator.
inline Rational pow2_floor(const Rational& x) {
  if (x.sign() <= 0) throw argument_error("pow2_floor: needs a positive value");
  size_t nb = x.num().bit_length(), db = x.den().bit_length();
  // 2^(nb-db-1) <= num/den < 2^(nb-db+1); settle the boundary exactly.
  int64_t e = static_cast<int64_t>(nb) - static_cast<int64_t>(db);
  Rational cand = e >= 0 ? Rational(BigInt::pow2(static_cast<uint64_t>(e)))
                         : Rational(BigInt(1), BigInt::pow2(static_cast<uint64_t>(-e)));
  if (x < cand) cand = cand / Rational(2);
  return cand;
}

// Smallest identification slack (radius minus error) over a sampled
// set of pairs; empty when some sampled pair fails outright. Feeds the
// perturbation magnitude, which the full certificate then re-verifies.
inline std::optional<Rational> sampled_identification_slack(const PointSequence& stepped,
                                                            const PointSequence& base,
                                                            const Rational& radius,
                                                            uint64_t samples, uint64_t seed) {
  size_t n = base.size();
  uint64_t count = stepped.size();
  uint64_t total = count < 2 ? 0 : binomial_clamped(count, 2, UINT64_MAX);
  std::mt19937_64 rng(seed ^ 0x51ACC);
  std::optional<Rational> min_slack;
  uint64_t s = std::min<uint64_t>(samples, total);
  for (uint64_t t = 0; t < s; ++t) {
    auto pick = sample_distinct_sorted(rng, count, 2);
    auto va = BinaryVector::from_index(static_cast<int>(n), pick[0]);
    auto vb = BinaryVector::from_index(static_cast<int>(n), pick[1]);
    int expect = first_diff_pos(va, vb);
    std::optional<int> got = identify_limit(stepped[pick[0]], stepped[pick[1]], base, radius);
    if (!got || *got != expect) return std::nullopt;
    std::optional<Point> dd = divided_difference(stepped[pick[0]], stepped[pick[1]]);
    Rational slack = radius - dist_inf(*dd, base[static_cast<size_t>(expect - 1)]);
    if (!min_slack || slack < *min_slack) min_slack = std::move(slack);
  }
  return min_slack ? min_slack : std::optional<Rational>(radius);
}

}  // namespace detail

// The tower-sized witness sequence in R^d with no long
// super-order-type homogeneous subsequence: exactly tower(d, n-d)
// points, strictly increasing first coordinates. Level 1 is
// (1, 2, ..., n-d); each further level steps the previous one up with
// a freshly certified epsilon (smaller at every level), then perturbs
// into general position where that is affordable.
inline BuildResult tower_witness(int d, int n, CertifyMode mode = CertifyMode::auto_by_budget,
                                 const Limits& limits = Limits{}, uint64_t seed = 0x5EED) {
  if (d < 1) throw argument_error("tower_witness: d must be >= 1");
  if (n < d + 1) throw argument_error("tower_witness: n must be >= d + 1");
  BigInt expected = tower(d, n - d, limits);
  if (!expected.fits_uint64() || expected.to_uint64() > limits.max_points) {
    throw guard_error("tower_witness: refusing to build " + expected.to_string() + " points (limit " +
                      std::to_string(limits.max_points) + ")");
  }
  PointSequence cur(1);
  for (int v = 1; v <= n - d; ++v) cur.push_back(Point{Rational(v)});
  BuildResult result;
  {
    LevelRecord base;
    base.dim = 1;
    base.base_size = 0;
    base.size = cur.size();
    base.general_position = "certified";  // distinct reals
    result.levels.push_back(std::move(base));
  }
  for (int dim = 2; dim <= d; ++dim) {
    Predicate phi = orientation_predicate(cur.dim);
    OrderPredicate prec = first_coord_order();
    LevelRecord rec;
    rec.dim = dim;
    rec.base_size = cur.size();
    // Identification radius for this level: within the base's
    // super-order-type margins, so any point within the radius of a
    // base point carries all of that base point's projected
    // orientation signs, and also at most half of every
    // first-coordinate gap, so identified indices inherit the strict
    // order. This is what makes the level's certificate a proof of the
    // inductive step, not just of the limit relation.
    Rational half_dist = cur.size() >= 2 ? min_pairwise_dist_inf(cur) / Rational(2) : Rational(1);
    Rational half_gap =
        cur.size() >= 2 ? detail::min_consecutive_first_gap(cur) / Rational(2) : Rational(1);
    Rational radius = super_structure_radius(cur, min(half_dist, half_gap), limits);
    rec.identification_radius = radius;
    // Epsilon schedule with a cheap sampled gate per candidate; the one
    // full certificate of the level is issued on the final (perturbed)
    // points, so it describes exactly what the build returns.
    Rational eps(1, 2);
    bool settled = false;
    for (int iter = 0; iter < limits.max_epsilon_iters && !settled; ++iter, eps = eps * eps) {
      PointSequence stepped = step_up_sequence(cur, phi, prec, eps, limits);
      bool ordered = true;
      for (size_t i = 0; i + 1 < stepped.size() && ordered; ++i) {
        ordered = first_coord_less(stepped[i], stepped[i + 1]);
      }
      if (!ordered) continue;
      std::optional<Rational> slack =
          detail::sampled_identification_slack(stepped, cur, radius, 256, seed);
      if (!slack || slack->sign() <= 0) continue;
      bool perturb = stepped.size() <= limits.max_perturb_points;
      Rational gap = detail::min_consecutive_first_gap(stepped);
      Rational bound = Rational(1) + max_abs_coord(cur);
      // Far below the sampled slack and the first-coordinate gaps; the
      // certificate below is the actual proof, this only sizes the
      // move. Rounded to a power of two to keep coordinates lean.
      Rational eta =
          detail::pow2_floor(min(gap / Rational(8), *slack * gap / (Rational(16) * bound)));
      for (int attempt = 0; attempt < 6 && !settled; ++attempt) {
        PointSequence moved = perturb ? perturb_points(stepped, eta) : stepped;
        CertifyOutcome oc = certify_points(moved, cur, phi, prec, eps, mode, limits, seed, radius);
        if (!oc.ok) {
          if (!perturb) break;  // perturbation is not the cause; shrink eps
          eta = eta * eps;
          continue;
        }
        if (!perturb) {
          rec.general_position = "skipped_large";
        } else {
          uint64_t gp_tuples = detail::binomial_clamped(
              moved.size(), static_cast<size_t>(moved.dim) + 1, UINT64_MAX);
          if (gp_tuples > limits.tuple_budget) {
            rec.general_position = "uncertified_over_budget";
          } else if (certify_general_position(moved, limits)) {
            rec.general_position = "certified";
          } else {
            eta = eta / Rational(2);
            continue;
          }
        }
        rec.cert = oc.cert;
        rec.eta = perturb ? eta : Rational(0);
        rec.perturbed = perturb;
        rec.epsilon = eps;
        rec.size = moved.size();
        cur = std::move(moved);
        settled = true;
      }
    }
    if (!settled) {
      throw guard_error("tower_witness: no certified epsilon at level " + std::to_string(dim) +
                        " after " + std::to_string(limits.max_epsilon_iters) + " iterations");
    }
    result.levels.push_back(std::move(rec));
  }
  if (BigInt::from_uint64(cur.size()) != expected) {
    throw error("tower_witness: internal size mismatch");
  }
  result.points = std::move(cur);
  return result;
}

}  // namespace otkit
