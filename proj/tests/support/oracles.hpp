// SPDX-License-Identifier: MIT
// Test-only reference implementations and generators. Nothing here calls the code under test.
#pragma once

#include "pcw/distribution.hpp"
#include "pcw/pccs.hpp"
#include "pcw/ppi.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace pcw::testing {

// A coupling of d and t inside `related` exists iff masses agree and every subset A of
// supp(d) satisfies d(A) <= t(R(A)). All subsets are enumerated.
template <class T, class Rel>
bool hall_lift(Rel&& related, const Distribution<T>& d, const Distribution<T>& t) {
  std::vector<std::pair<T, Prob>> left(d.begin(), d.end());
  std::vector<std::pair<T, Prob>> right(t.begin(), t.end());
  Prob dm = 0, tm = 0;
  for (const auto& [x, p] : left) dm += p;
  for (const auto& [y, q] : right) tm += q;
  if (dm != tm) return false;
  const std::size_t n = left.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    Prob a = 0, image = 0;
    std::vector<bool> hit(right.size(), false);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      a += left[i].second;
      for (std::size_t j = 0; j < right.size(); ++j)
        if (related(left[i].first, right[j].first)) hit[j] = true;
    }
    for (std::size_t j = 0; j < right.size(); ++j)
      if (hit[j]) image += right[j].second;
    if (a > image) return false;
  }
  return true;
}

// Row and column sums of a weight table, recomputed from scratch.
template <class T, class Rel>
bool marginals_match(Rel&& related, const std::map<std::pair<T, T>, Prob>& c, const Distribution<T>& d,
                     const Distribution<T>& t) {
  std::map<T, Prob> rows, cols;
  for (const auto& [xy, w] : c) {
    if (w <= 0) return false;
    if (!related(xy.first, xy.second)) return false;
    rows[xy.first] += w;
    cols[xy.second] += w;
  }
  for (const auto& [x, p] : d)
    if (rows[x] != p) return false;
  for (const auto& [y, q] : t)
    if (cols[y] != q) return false;
  return rows.size() == d.size() && cols.size() == t.size();
}

// k positive parts of 1 over a denominator in [k, max_den].
inline std::vector<Prob> random_partition(std::mt19937& rng, std::size_t k, int max_den) {
  int lo = static_cast<int>(k);
  int den = std::uniform_int_distribution<int>(lo, max_den)(rng);
  std::vector<int> cuts;
  std::vector<int> all;
  for (int i = 1; i < den; ++i) all.push_back(i);
  std::shuffle(all.begin(), all.end(), rng);
  cuts.assign(all.begin(), all.begin() + static_cast<long>(k - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Prob> out;
  int prev = 0;
  for (int c : cuts) {
    out.push_back(Prob(c - prev, den));
    prev = c;
  }
  out.push_back(Prob(den - prev, den));
  return out;
}

// Distribution over distinct points drawn from [0, universe), support in [1, max_support].
inline Distribution<int> random_int_dist(std::mt19937& rng, int universe, std::size_t max_support, int max_den) {
  std::size_t k = std::uniform_int_distribution<std::size_t>(
      1, std::min<std::size_t>(max_support, static_cast<std::size_t>(std::min(universe, max_den))))(rng);
  std::vector<int> pts(static_cast<std::size_t>(universe));
  for (int i = 0; i < universe; ++i) pts[static_cast<std::size_t>(i)] = i;
  std::shuffle(pts.begin(), pts.end(), rng);
  auto ps = random_partition(rng, k, max_den);
  std::vector<std::pair<int, Prob>> e;
  for (std::size_t i = 0; i < k; ++i) e.emplace_back(pts[i], ps[i]);
  return Distribution<int>(e);
}

// Reflexive-transitive closure by repeated composition until nothing changes.
inline std::set<std::pair<int, int>> closure_by_iteration(std::set<std::pair<int, int>> r, int universe) {
  for (int i = 0; i < universe; ++i) r.insert({i, i});
  for (bool grew = true; grew;) {
    grew = false;
    auto copy = r;
    for (const auto& [a, b] : copy)
      for (const auto& [c, d] : copy)
        if (b == c && r.insert({a, d}).second) grew = true;
  }
  return r;
}

// Moves every unit of mass of d along some edge of r; the result is related to d by
// construction.
inline Distribution<int> push_along(std::mt19937& rng, const Distribution<int>& d,
                                    const std::set<std::pair<int, int>>& r) {
  std::map<int, Prob> out;
  for (const auto& [x, p] : d) {
    std::vector<int> succ;
    for (const auto& [a, b] : r)
      if (a == x) succ.push_back(b);
    std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(2, succ.size()))(rng);
    std::shuffle(succ.begin(), succ.end(), rng);
    if (k == 1) {
      out[succ[0]] += p;
    } else {
      out[succ[0]] += p / 3;
      out[succ[1]] += p - p / 3;
    }
  }
  return Distribution<int>::from_map(out);
}

// Random source terms over a small alphabet; every choice has positive weights summing to 1.
class PccsGen {
 public:
  explicit PccsGen(unsigned seed) : rng_(seed) {}

  Pccs term(int depth) {
    int pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 2 : 8)(rng_);
    switch (pick) {
      case 0: return pccs_inert();
      case 1: return pccs_success();
      case 2: return choice(depth, GuardKind::output);
      case 3: return choice(depth, GuardKind::input);
      case 4: return choice(depth, GuardKind::tau);
      case 5: return pccs_par(term(depth - 1), term(depth - 1));
      case 6: return pccs_restrict(term(depth - 1), {name()});
      case 7: return pccs_relabel(term(depth - 1), {{name(), name()}});
      default: return pccs_par(choice(depth, GuardKind::input), choice(depth, GuardKind::output));
    }
  }

  std::string name() { return std::string(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 2)(rng_))); }

 private:
  Pccs choice(int depth, GuardKind k) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng_);
    auto ps = random_partition(rng_, n, 6);
    std::vector<PccsBranch> bs;
    for (const auto& p : ps) bs.push_back({p, depth <= 0 ? pccs_inert() : term(depth - 1)});
    return pccs_choice({k, k == GuardKind::tau ? "" : name()}, bs);
  }

  std::mt19937 rng_;
};

// Random target terms covering every constructor.
class PpiGen {
 public:
  explicit PpiGen(unsigned seed) : rng_(seed) {}

  Ppi term(int depth) {
    int pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 2 : 9)(rng_);
    switch (pick) {
      case 0: return ppi_nil();
      case 1: return ppi_success();
      case 2: return ppi_output(name(), {name()}, ppi_nil());
      case 3: return ppi_par(term(depth - 1), term(depth - 1));
      case 4: return ppi_restrict(name(), term(depth - 1));
      case 5: return ppi_input(name(), {"y"}, term(depth - 1));
      case 6: return ppi_rep_in(name(), {}, term(depth - 1));
      case 7: return ppi_output(name(), {name()}, term(depth - 1));
      case 8: {
        auto ps = random_partition(rng_, 2, 5);
        return ppi_select_out(name(), {{1, ps[0], {}, term(depth - 1)}, {2, ps[1], {"z"}, term(depth - 1)}});
      }
      default:
        return ppi_branch_in(name(), {{1, 1, {"y"}, term(depth - 1)}, {3, 1, {}, term(depth - 1)}});
    }
  }

  std::string name() { return std::string(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 3)(rng_))); }

 private:
  std::mt19937 rng_;
};

}  // namespace pcw::testing
