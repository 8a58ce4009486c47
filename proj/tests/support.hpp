// Copyright 2026 The nbstab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared fixtures and test-only oracles. Nothing here calls into the solver
// paths the tests check.

#ifndef NBSTAB_TESTS_SUPPORT_HPP
#define NBSTAB_TESTS_SUPPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbstab/graph.hpp"
#include "nbstab/rational.hpp"

namespace nbstab::testing {

inline Graph make_graph(const std::vector<std::pair<std::string, std::string>>& edges,
                        const std::vector<std::string>& extra = {}) {
  std::vector<EdgeKey> keys;
  for (const auto& [a, b] : edges) keys.push_back(make_edge_key(a, b));
  return Graph::from_edges(extra, keys);
}

inline std::string vname(int i) {
  std::string s(1, static_cast<char>('a' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

inline Graph complete(int n) {
  std::vector<std::pair<std::string, std::string>> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.emplace_back(vname(i), vname(j));
  return make_graph(es);
}

inline Graph path(int n) {
  std::vector<std::pair<std::string, std::string>> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(vname(i), vname(i + 1));
  return make_graph(es, n == 1 ? std::vector<std::string>{"a"} : std::vector<std::string>{});
}

inline Graph cycle(int n) {
  std::vector<std::pair<std::string, std::string>> es;
  for (int i = 0; i < n; ++i) es.emplace_back(vname(i), vname((i + 1) % n));
  return make_graph(es);
}

inline Graph petersen() {
  std::vector<std::pair<std::string, std::string>> es;
  for (int i = 0; i < 5; ++i) {
    es.emplace_back("o" + std::to_string(i), "o" + std::to_string((i + 1) % 5));
    es.emplace_back("i" + std::to_string(i), "i" + std::to_string((i + 2) % 5));
    es.emplace_back("o" + std::to_string(i), "i" + std::to_string(i));
  }
  return make_graph(es);
}

inline Graph star(int leaves) {
  std::vector<std::pair<std::string, std::string>> es;
  for (int i = 1; i <= leaves; ++i) es.emplace_back("c", "l" + std::to_string(i));
  return make_graph(es);
}

/// Small deterministic generator for property tests (splitmix64).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  int uniform(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t s_;
};

inline Graph random_graph(Rng& rng, int n, int m) {
  std::vector<std::pair<std::string, std::string>> es;
  std::vector<std::string> vs;
  for (int i = 0; i < n; ++i) vs.push_back(vname(i));
  for (int k = 0; k < m; ++k) {
    int a = rng.uniform(0, n - 1), b = rng.uniform(0, n - 1);
    if (a != b) es.emplace_back(vname(a), vname(b));
  }
  return make_graph(es, vs);
}

/// Gaussian elimination over the rationals. Returns the unique solution of
/// A x = b when A has full column rank and the system is consistent.
inline std::optional<std::vector<Rational>> solve_unique(std::vector<std::vector<Rational>> a,
                                                         std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t n = rows == 0 ? 0 : a[0].size();
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < n && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) return std::nullopt;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (r < n) return std::nullopt;
  for (std::size_t i = r; i < rows; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
  return x;
}

/// Rank of a rational matrix.
inline std::size_t rank_of(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t n = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < n && rank < a.size(); ++c) {
    std::size_t p = rank;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[rank][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Maximum matching size by exhaustive search over edges.
inline int brute_matching(const Graph& g) {
  const auto& es = g.edges();
  std::vector<bool> used(g.num_vertices(), false);
  int best = 0;
  auto rec = [&](auto&& self, std::size_t i, int size) -> void {
    if (size + static_cast<int>(es.size() - i) <= best) return;
    if (i == es.size()) {
      best = std::max(best, size);
      return;
    }
    const Edge& e = es[i];
    if (!used[static_cast<std::size_t>(e.u)] && !used[static_cast<std::size_t>(e.v)]) {
      used[static_cast<std::size_t>(e.u)] = used[static_cast<std::size_t>(e.v)] = true;
      self(self, i + 1, size + 1);
      used[static_cast<std::size_t>(e.u)] = used[static_cast<std::size_t>(e.v)] = false;
    }
    self(self, i + 1, size);
  };
  rec(rec, 0, 0);
  return best;
}

inline Rational R(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace nbstab::testing

#endif  // NBSTAB_TESTS_SUPPORT_HPP
