#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "otkit/determinant.hpp"
#include "otkit/errors.hpp"
#include "otkit/homogeneity.hpp"
#include "otkit/point.hpp"
#include "otkit/predicates.hpp"

namespace otkit {

// Result of an exact search. Absence claims are proofs only when
// exhaustive is true; a tripped node budget reports exhaustive = false
// explicitly. Witnesses are 1-based increasing index lists and are
// re-verified by the matching checker before being returned.
struct SearchResult {
  bool found = false;
  std::vector<int> witness;
  uint64_t nodes = 0;
  bool exhaustive = true;
};

struct SearchOptions {
  uint64_t node_budget = 100'000'000;
};

// Longest strictly increasing or nonincreasing subsequence (the
// classical asymmetric pair), via patience dynamic programming run in
// both directions. The witness is a longest subsequence; ties prefer
// the increasing direction.
inline SearchResult longest_monotone_subsequence(std::span<const Rational> xs) {
  SearchResult res;
  size_t n = xs.size();
  if (n == 0) {
    res.found = false;
    return res;
  }
  // less(i, j): x_i may be followed by x_j in the chain.
  auto run = [&](auto&& chain_ok) {
    std::vector<size_t> tails;       // index of the chain end per length
    std::vector<size_t> prev(n, n);  // back-pointers
    for (size_t i = 0; i < n; ++i) {
      // First position whose tail cannot precede x_i.
      size_t lo = 0, hi = tails.size();
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (chain_ok(tails[mid], i)) {
          lo = mid + 1;
        } else {
          hi = mid;
        }
      }
      if (lo > 0) prev[i] = tails[lo - 1];
      if (lo == tails.size()) {
        tails.push_back(i);
      } else {
        tails[lo] = i;
      }
    }
    std::vector<int> out;
    if (!tails.empty()) {
      for (size_t cur = tails.back(); cur != n; cur = prev[cur]) {
        out.push_back(static_cast<int>(cur) + 1);
        if (prev[cur] == n) break;
      }
      std::reverse(out.begin(), out.end());
    }
    return out;
  };
  std::vector<int> inc = run([&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<int> dec = run([&](size_t a, size_t b) { return !(xs[a] < xs[b]); });
  res.found = true;
  res.witness = inc.size() >= dec.size() ? std::move(inc) : std::move(dec);
  res.nodes = 2 * n;
  return res;
}

namespace detail {

// Flat sign cache keyed by the colex rank of the index tuple; only
// levels whose full tuple count fits the cap get one. Ranks come from
// a precomputed binomial table, so a lookup is a few array reads.
class SignCache {
 public:
  SignCache(size_t n, size_t k, uint64_t cap) : k_(k) {
    if (k > n) return;
    unsigned __int128 total = 1;
    for (uint64_t i = 1; i <= k; ++i) {
      total = total * (n - k + i) / i;
      if (total > cap) return;  // over the cap: cache stays off
    }
    binom_.assign((n + 1) * k, 0);
    for (size_t nn = 0; nn <= n; ++nn) {
      for (size_t kk = 1; kk <= k; ++kk) {
        unsigned __int128 r = 1;
        if (kk <= nn) {
          for (uint64_t i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
        } else {
          r = 0;
        }
        binom_[nn * k + (kk - 1)] = static_cast<uint64_t>(r);
      }
    }
    table_.assign(static_cast<uint64_t>(total), 2);  // 2 = unknown
  }

  bool active() const { return !table_.empty(); }

  uint64_t rank(std::span<const int> tuple) const {
    uint64_t r = 0;
    for (size_t i = 0; i < tuple.size(); ++i) {
      r += binom_[static_cast<size_t>(tuple[i]) * k_ + i];
    }
    return r;
  }

  std::optional<Sign> get(uint64_t rank) const {
    int8_t v = table_[rank];
    if (v == 2) return std::nullopt;
    return static_cast<Sign>(v);
  }

  void put(uint64_t rank, Sign s) { table_[rank] = static_cast<int8_t>(s); }

 private:
  size_t k_;
  std::vector<uint64_t> binom_;
  std::vector<int8_t> table_;
};

}  // namespace detail

// Depth-first search for a length-n subsequence on which phi is
// homogeneous (constantly true or constantly false; both polarities
// are tracked through one tree, so the returned witness is the
// lexicographically least over both). Extending a partial sequence by
// an index only evaluates the new tuples that contain it.
inline SearchResult find_homogeneous_subsequence(const PointSequence& seq, const Predicate& phi,
                                                 int n, const SearchOptions& opts = SearchOptions{}) {
  if (n < phi.arity) throw argument_error("find_homogeneous_subsequence: n below the arity");
  if (phi.dim != 0 && phi.dim != seq.dim)
    throw dimension_error("find_homogeneous_subsequence: dimension mismatch");
  SearchResult res;
  int total = static_cast<int>(seq.size());
  if (n > total) return res;  // exhaustively absent
  size_t k = static_cast<size_t>(phi.arity);
  std::vector<int> chosen;
  chosen.reserve(static_cast<size_t>(n));
  bool budget_hit = false;

  auto eval_tuple = [&](std::span<const int> idx) {
    std::vector<Point> pts;
    pts.reserve(k);
    for (int i : idx) pts.push_back(seq[static_cast<size_t>(i)]);
    return phi.eval(std::span<const Point>(pts));
  };

  // Evaluates all new tuples formed by idx joined with k-1 smaller
  // chosen indices; turns off the polarities they contradict.
  auto scan_new_tuples = [&](int idx, bool& can_true, bool& can_false) {
    if (chosen.size() + 1 < k) return;
    std::vector<int> tuple(k);
    tuple[k - 1] = idx;
    detail::for_each_combination(chosen.size(), k - 1, [&](std::span<const int> sub) {
      for (size_t t = 0; t < k - 1; ++t) tuple[t] = chosen[static_cast<size_t>(sub[t])];
      if (eval_tuple(tuple)) {
        can_false = false;
      } else {
        can_true = false;
      }
      return can_true || can_false;
    });
  };

  auto dfs = [&](auto&& self, bool can_true, bool can_false) -> bool {
    if (chosen.size() == static_cast<size_t>(n)) {
      res.found = true;
      res.witness.assign(chosen.begin(), chosen.end());
      for (int& w : res.witness) ++w;
      return true;
    }
    int last = chosen.empty() ? -1 : chosen.back();
    int remain = n - static_cast<int>(chosen.size());
    for (int idx = last + 1; idx <= total - remain; ++idx) {
      if (res.nodes >= opts.node_budget) {
        budget_hit = true;
        return false;
      }
      ++res.nodes;
      bool t = can_true, f = can_false;
      scan_new_tuples(idx, t, f);
      if (!t && !f) continue;
      chosen.push_back(idx);
      if (self(self, t, f)) return true;
      chosen.pop_back();
      if (budget_hit) return false;
    }
    return false;
  };
  dfs(dfs, true, true);
  res.exhaustive = !budget_hit;
  if (res.found) {
    // A witness must re-verify under the homogeneity checker.
    std::vector<int> idx0(res.witness.begin(), res.witness.end());
    for (int& v : idx0) --v;
    if (!is_phi_homogeneous(seq.subsequence(idx0), phi).homogeneous())
      throw error("find_homogeneous_subsequence: witness failed re-verification");
  }
  return res;
}

// Depth-first search for a length-n super-order-type homogeneous
// subsequence: all projection levels are tracked simultaneously and a
// partial sequence is abandoned the moment any projected tuple sign
// conflicts (degenerate tuples count as conflicts). The witness is the
// lexicographically least such index list; nodes count the extensions
// actually explored. On sequences up to a few hundred points the
// level-2 constraints are precomputed as per-pair successor bitsets,
// so extensions that would die on a triple sign are never enumerated;
// the explored tree is the same.
inline SearchResult find_super_homogeneous_subsequence(const PointSequence& seq, int n,
                                                       const SearchOptions& opts = SearchOptions{},
                                                       uint64_t cache_cap = uint64_t{1} << 28) {
  if (n < 2) throw argument_error("find_super_homogeneous_subsequence: n must be >= 2");
  SearchResult res;
  int total = static_cast<int>(seq.size());
  if (n > total) return res;
  int d = seq.dim;
  detail::ClearedCoords cleared(seq);
  std::vector<detail::SignCache> caches;
  caches.reserve(static_cast<size_t>(d));
  for (int j = 1; j <= d; ++j) {
    caches.emplace_back(seq.size(), static_cast<size_t>(j) + 1, cache_cap);
  }
  auto level_sign = [&](int j, std::span<const int> tuple) {
    if (j == 1) {
      int c = cleared.coord[0][static_cast<size_t>(tuple[0])] <
                      cleared.coord[0][static_cast<size_t>(tuple[1])]
                  ? 1
                  : (cleared.coord[0][static_cast<size_t>(tuple[1])] <
                             cleared.coord[0][static_cast<size_t>(tuple[0])]
                         ? -1
                         : 0);
      return static_cast<Sign>(c);
    }
    detail::SignCache& cache = caches[static_cast<size_t>(j - 1)];
    if (!cache.active()) return cleared.level_sign(j, tuple);
    uint64_t r = cache.rank(tuple);
    if (auto hit = cache.get(r)) return *hit;
    Sign s = cleared.level_sign(j, tuple);
    cache.put(r, s);
    return s;
  };

  // Level-2 successor bitsets: for a pair (a, b) and a sign, the set of
  // c > b whose triple carries that sign.
  const bool use_masks = d >= 2 && total >= 3 && total <= 320;
  const size_t words = use_masks ? (static_cast<size_t>(total) + 63) / 64 : 0;
  std::vector<uint64_t> mask_plus, mask_minus;
  if (use_masks) {
    size_t rows = static_cast<size_t>(total) * static_cast<size_t>(total);
    mask_plus.assign(rows * words, 0);
    mask_minus.assign(rows * words, 0);
    int tuple3[3];
    for (int a = 0; a < total; ++a) {
      for (int b = a + 1; b < total; ++b) {
        uint64_t* plus = &mask_plus[(static_cast<size_t>(a) * total + b) * words];
        uint64_t* minus = &mask_minus[(static_cast<size_t>(a) * total + b) * words];
        for (int c = b + 1; c < total; ++c) {
          tuple3[0] = a;
          tuple3[1] = b;
          tuple3[2] = c;
          Sign s = level_sign(2, std::span<const int>(tuple3, 3));
          if (s == Sign::plus) plus[c / 64] |= uint64_t{1} << (c % 64);
          if (s == Sign::minus) minus[c / 64] |= uint64_t{1} << (c % 64);
        }
      }
    }
  }
  auto pair_row = [&](int a, int b, Sign s) {
    const std::vector<uint64_t>& tbl = s == Sign::plus ? mask_plus : mask_minus;
    return &tbl[(static_cast<size_t>(a) * total + b) * words];
  };

  std::vector<int> chosen;
  chosen.reserve(static_cast<size_t>(n));
  std::vector<Sign> expected(static_cast<size_t>(d) + 1, Sign::zero);  // zero = unset
  // cand_stack[m]: the level-2-consistent successors of the first m
  // chosen points; maintained once the level-2 sign is committed.
  std::vector<uint64_t> cand_stack(static_cast<size_t>(n + 1) * words, 0);
  bool budget_hit = false;

  // Checks the new tuples through every level (optionally skipping
  // level 2, which the bitsets pre-filtered); returns the committed
  // levels for rollback, or nullopt on conflict.
  auto try_extend = [&](int idx, bool skip_level2) -> std::optional<std::vector<int>> {
    std::vector<int> committed;
    std::vector<int> tuple;
    for (int j = 1; j <= d; ++j) {
      if (j == 2 && skip_level2) continue;
      size_t need = static_cast<size_t>(j);  // j smaller indices + idx
      if (chosen.size() < need) break;
      bool ok = true;
      detail::for_each_combination(chosen.size(), need, [&](std::span<const int> sub) {
        tuple.assign(need + 1, 0);
        for (size_t t = 0; t < need; ++t) tuple[t] = chosen[static_cast<size_t>(sub[t])];
        tuple[need] = idx;
        Sign s = level_sign(j, tuple);
        if (s == Sign::zero) {
          ok = false;
          return false;
        }
        Sign& exp = expected[static_cast<size_t>(j)];
        if (exp == Sign::zero) {
          exp = s;
          committed.push_back(j);
        } else if (exp != s) {
          ok = false;
          return false;
        }
        return true;
      });
      if (!ok) {
        for (int j2 : committed) expected[static_cast<size_t>(j2)] = Sign::zero;
        return std::nullopt;
      }
    }
    return committed;
  };

  // One extension step: bookkeeping shared by both enumeration paths.
  // Returns true when a full witness was completed below.
  auto step = [&](auto&& self, int idx, bool skip_level2) -> bool {
    ++res.nodes;
    auto committed = try_extend(idx, skip_level2);
    if (!committed) return false;
    bool fresh_level2 = false;
    for (int j : *committed) fresh_level2 |= j == 2;
    chosen.push_back(idx);
    if (use_masks && expected[2] != Sign::zero) {
      size_t m = chosen.size();
      uint64_t* cand = &cand_stack[m * words];
      if (fresh_level2) {
        // First triple: intersect the rows of every chosen pair.
        for (size_t w = 0; w < words; ++w) cand[w] = ~uint64_t{0};
        for (size_t x = 0; x < m; ++x) {
          for (size_t y = x + 1; y < m; ++y) {
            const uint64_t* row = pair_row(chosen[x], chosen[y], expected[2]);
            for (size_t w = 0; w < words; ++w) cand[w] &= row[w];
          }
        }
      } else {
        const uint64_t* prev = &cand_stack[(m - 1) * words];
        for (size_t w = 0; w < words; ++w) cand[w] = prev[w];
        for (size_t x = 0; x + 1 < m; ++x) {
          const uint64_t* row = pair_row(chosen[x], idx, expected[2]);
          for (size_t w = 0; w < words; ++w) cand[w] &= row[w];
        }
      }
    }
    bool done = self(self);
    chosen.pop_back();
    for (int j : *committed) expected[static_cast<size_t>(j)] = Sign::zero;
    return done;
  };

  auto dfs = [&](auto&& self) -> bool {
    if (chosen.size() == static_cast<size_t>(n)) {
      res.found = true;
      res.witness.assign(chosen.begin(), chosen.end());
      for (int& w : res.witness) ++w;
      return true;
    }
    int last = chosen.empty() ? -1 : chosen.back();
    int remain = n - static_cast<int>(chosen.size());
    int limit = total - remain;  // last admissible start for this slot
    if (use_masks && expected[2] != Sign::zero) {
      const uint64_t* cand = &cand_stack[chosen.size() * words];
      for (size_t w = static_cast<size_t>(last + 1) / 64; w < words; ++w) {
        uint64_t bits = cand[w];
        if (w == static_cast<size_t>(last + 1) / 64) {
          bits &= ~uint64_t{0} << ((last + 1) % 64);
        }
        while (bits) {
          int idx = static_cast<int>(w * 64 + static_cast<size_t>(std::countr_zero(bits)));
          bits &= bits - 1;
          if (idx > limit) return false;
          if (res.nodes >= opts.node_budget) {
            budget_hit = true;
            return false;
          }
          if (step(self, idx, true)) return true;
          if (budget_hit) return false;
        }
      }
      return false;
    }
    for (int idx = last + 1; idx <= limit; ++idx) {
      if (res.nodes >= opts.node_budget) {
        budget_hit = true;
        return false;
      }
      if (step(self, idx, false)) return true;
      if (budget_hit) return false;
    }
    return false;
  };
  dfs(dfs);
  res.exhaustive = !budget_hit;
  if (res.found) {
    std::vector<int> idx0(res.witness.begin(), res.witness.end());
    for (int& v : idx0) --v;
    if (!is_super_order_type_homogeneous(seq.subsequence(idx0)))
      throw error("find_super_homogeneous_subsequence: witness failed re-verification");
  }
  return res;
}

// Depth-first search for an n-element subset of the coloring's ground
// set whose arity-tuples all carry one color. Works for any finite
// color set; the class is fixed by the first committed tuple per
// branch.
inline SearchResult find_homogeneous_subset(const Coloring& chi, int n,
                                            const SearchOptions& opts = SearchOptions{}) {
  if (n < chi.arity) throw argument_error("find_homogeneous_subset: n below the arity");
  SearchResult res;
  int64_t total = chi.ground_size;
  if (n > total) return res;
  size_t k = static_cast<size_t>(chi.arity);
  std::vector<int64_t> chosen;
  chosen.reserve(static_cast<size_t>(n));
  bool budget_hit = false;

  auto check_new = [&](int64_t idx, std::optional<int>& color) {
    if (chosen.size() + 1 < k) return true;
    std::vector<int64_t> tuple(k);
    tuple[k - 1] = idx;
    bool ok = true;
    detail::for_each_combination(chosen.size(), k - 1, [&](std::span<const int> sub) {
      for (size_t t = 0; t < k - 1; ++t) tuple[t] = chosen[static_cast<size_t>(sub[t])];
      int c = chi.color_of(tuple);
      if (!color) {
        color = c;
      } else if (*color != c) {
        ok = false;
        return false;
      }
      return true;
    });
    return ok;
  };

  auto dfs = [&](auto&& self, std::optional<int> color) -> bool {
    if (chosen.size() == static_cast<size_t>(n)) {
      res.found = true;
      res.witness.reserve(chosen.size());
      res.witness.clear();
      for (int64_t v : chosen) res.witness.push_back(static_cast<int>(v));
      return true;
    }
    int64_t last = chosen.empty() ? 0 : chosen.back();
    int64_t remain = n - static_cast<int64_t>(chosen.size());
    for (int64_t idx = last + 1; idx <= total - remain + 1; ++idx) {
      if (res.nodes >= opts.node_budget) {
        budget_hit = true;
        return false;
      }
      ++res.nodes;
      std::optional<int> next_color = color;
      if (!check_new(idx, next_color)) continue;
      chosen.push_back(idx);
      if (self(self, next_color)) return true;
      chosen.pop_back();
      if (budget_hit) return false;
    }
    return false;
  };
  dfs(dfs, std::nullopt);
  res.exhaustive = !budget_hit;
  return res;
}

}  // namespace otkit
