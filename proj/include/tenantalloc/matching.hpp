#pragma once

// Maximum-weight perfect matching on balanced bipartite graphs.
//
// The solver is the O(V^3) shortest-augmenting-path Hungarian method on the
// square cost matrix. Missing edges get a cost strictly above any feasible
// total, so an optimum that uses one proves there is no perfect matching.
// The optimal dual then defines the equality subgraph, which contains exactly
// the optimal perfect matchings; the lexicographically smallest of those is
// extracted in a second O(V^3) pass.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "tenantalloc/error.hpp"

namespace tenantalloc {

template <std::integral Weight>
class BasicBipartiteGraph {
 public:
  using weight_type = Weight;

  BasicBipartiteGraph() = default;
  BasicBipartiteGraph(std::size_t left, std::size_t right)
      : left_(left), right_(right), weight_(left * right, Weight{}), present_(left * right, 0) {}

  std::size_t left_count() const noexcept { return left_; }
  std::size_t right_count() const noexcept { return right_; }
  bool balanced() const noexcept { return left_ == right_; }

  /// Inserts or overwrites the edge; at most one edge per vertex pair.
  void set_edge(std::size_t l, std::size_t r, Weight w) {
    check(l, r);
    weight_[l * right_ + r] = w;
    present_[l * right_ + r] = 1;
  }

  void remove_edge(std::size_t l, std::size_t r) {
    check(l, r);
    present_[l * right_ + r] = 0;
    weight_[l * right_ + r] = Weight{};
  }

  bool has_edge(std::size_t l, std::size_t r) const {
    check(l, r);
    return present_[l * right_ + r] != 0;
  }

  std::optional<Weight> edge(std::size_t l, std::size_t r) const {
    if (!has_edge(l, r)) return std::nullopt;
    return weight_[l * right_ + r];
  }

  /// (right vertex, weight) for every edge at l, in right-index order.
  std::vector<std::pair<std::size_t, Weight>> edges_of(std::size_t l) const {
    std::vector<std::pair<std::size_t, Weight>> out;
    for (std::size_t r = 0; r < right_; ++r) {
      if (present_[l * right_ + r]) out.emplace_back(r, weight_[l * right_ + r]);
    }
    return out;
  }

  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), 1));
  }

  bool operator==(const BasicBipartiteGraph&) const = default;

 private:
  void check(std::size_t l, std::size_t r) const {
    if (l >= left_ || r >= right_) {
      throw Error(ErrorCode::unknown_vertex,
                  "edge (" + std::to_string(l) + "," + std::to_string(r) + ") outside graph");
    }
  }

  std::size_t left_ = 0;
  std::size_t right_ = 0;
  std::vector<Weight> weight_;
  std::vector<std::uint8_t> present_;
};

using WeightedBipartiteGraph = BasicBipartiteGraph<int>;

template <std::integral Weight>
struct BasicMatching {
  /// mate[l] is the right vertex matched to left vertex l.
  std::vector<std::size_t> mate;
  Weight weight{};

  bool operator==(const BasicMatching&) const = default;
};

using Matching = BasicMatching<int>;

/// Edges taken out of a graph, restorable in one call.
template <std::integral Weight>
struct BasicEdgeDelta {
  std::size_t left = 0;
  std::vector<std::pair<std::size_t, Weight>> removed;

  bool empty() const noexcept { return removed.empty(); }

  void restore(BasicBipartiteGraph<Weight>& g) const {
    for (const auto& [r, w] : removed) g.set_edge(left, r, w);
  }
};

using EdgeDelta = BasicEdgeDelta<int>;

/// Removes every weight-0 edge at left vertex `l`.
template <std::integral Weight>
BasicEdgeDelta<Weight> remove_zero_edges(BasicBipartiteGraph<Weight>& g, std::size_t l) {
  if (l >= g.left_count()) {
    throw Error(ErrorCode::unknown_vertex, "left vertex " + std::to_string(l) + " not in graph");
  }
  BasicEdgeDelta<Weight> delta;
  delta.left = l;
  for (const auto& [r, w] : g.edges_of(l)) {
    if (w == Weight{0}) {
      delta.removed.emplace_back(r, w);
      g.remove_edge(l, r);
    }
  }
  return delta;
}

namespace detail {

template <std::integral Weight>
void require_balanced(const BasicBipartiteGraph<Weight>& g) {
  if (!g.balanced()) {
    throw Error(ErrorCode::unbalanced_graph, std::to_string(g.left_count()) + " left vs " +
                                                 std::to_string(g.right_count()) + " right");
  }
}

// Kuhn's augmenting-path search, weights ignored.
template <std::integral Weight>
bool try_augment(const BasicBipartiteGraph<Weight>& g, std::size_t l, std::vector<char>& seen,
                 std::vector<std::size_t>& mate_r) {
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  for (std::size_t r = 0; r < g.right_count(); ++r) {
    if (!g.has_edge(l, r) || seen[r]) continue;
    seen[r] = 1;
    if (mate_r[r] == none || try_augment(g, mate_r[r], seen, mate_r)) {
      mate_r[r] = l;
      return true;
    }
  }
  return false;
}

// Rewrites a perfect matching of the equality subgraph into the
// lexicographically smallest one (by mate[0], mate[1], ...). For each left
// vertex in turn, the smallest right vertex it can take is one from which an
// alternating path leads back to its current partner.
inline void lexicographic_minimum(const std::vector<std::vector<char>>& tight,
                                  std::vector<std::size_t>& mate_l) {
  const std::size_t n = mate_l.size();
  std::vector<std::size_t> mate_r(n);
  for (std::size_t l = 0; l < n; ++l) mate_r[mate_l[l]] = l;
  std::vector<char> fixed_l(n, 0), fixed_r(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t target = mate_l[i];
    // reaches[r]: the occupant of r can be displaced along a chain that ends
    // by someone moving into `target`.
    std::vector<char> reaches(n, 0);
    std::vector<std::size_t> next(n, n);
    std::queue<std::size_t> q;
    reaches[target] = 1;
    q.push(target);
    while (!q.empty()) {
      const std::size_t r2 = q.front();
      q.pop();
      for (std::size_t l = 0; l < n; ++l) {
        if (fixed_l[l] || l == i || !tight[l][r2]) continue;
        const std::size_t r = mate_l[l];
        if (r == target || reaches[r]) continue;
        reaches[r] = 1;
        next[r] = r2;
        q.push(r);
      }
    }
    std::size_t pick = n;
    for (std::size_t r = 0; r < n; ++r) {
      if (!fixed_r[r] && tight[i][r] && reaches[r]) {
        pick = r;
        break;
      }
    }
    if (pick != target) {
      // Shift occupants along pick -> ... -> target.
      std::vector<std::pair<std::size_t, std::size_t>> moves;
      for (std::size_t r = pick; r != target; r = next[r]) moves.emplace_back(mate_r[r], next[r]);
      for (const auto& [l, r] : moves) {
        mate_l[l] = r;
        mate_r[r] = l;
      }
      mate_l[i] = pick;
      mate_r[pick] = i;
    }
    fixed_l[i] = 1;
    fixed_r[pick] = 1;
  }
}

}  // namespace detail

/// True iff the graph has a perfect matching. Weights are ignored.
template <std::integral Weight>
bool has_perfect_matching(const BasicBipartiteGraph<Weight>& g) {
  detail::require_balanced(g);
  const std::size_t n = g.left_count();
  std::vector<std::size_t> mate_r(n, std::numeric_limits<std::size_t>::max());
  std::vector<char> seen(n);
  for (std::size_t l = 0; l < n; ++l) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!detail::try_augment(g, l, seen, mate_r)) return false;
  }
  return true;
}

/// Maximum-weight perfect matching, or nullopt if none exists. Among optimal
/// matchings returns the lexicographically smallest mate sequence.
template <std::integral Weight>
std::optional<BasicMatching<Weight>> max_weight_perfect_matching(
    const BasicBipartiteGraph<Weight>& g) {
  detail::require_balanced(g);
  const std::size_t n = g.left_count();
  if (n == 0) return BasicMatching<Weight>{};

  using Cost = std::int64_t;
  Cost max_abs = 0;
  for (std::size_t l = 0; l < n; ++l) {
    for (const auto& [r, w] : g.edges_of(l)) {
      max_abs = std::max<Cost>(max_abs, w < 0 ? -static_cast<Cost>(w) : static_cast<Cost>(w));
    }
  }
  // Any matching through a missing edge costs more than any real one.
  const Cost forbidden = 2 * static_cast<Cost>(n) * max_abs + 1;

  std::vector<std::vector<Cost>> cost(n + 1, std::vector<Cost>(n + 1, 0));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t r = 0; r < n; ++r) {
      const auto w = g.edge(l, r);
      cost[l + 1][r + 1] = w ? -static_cast<Cost>(*w) : forbidden;
    }
  }

  // Hungarian method, 1-based with column 0 as the virtual root.
  constexpr Cost inf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      Cost delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Cost cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> mate(n);
  for (std::size_t j = 1; j <= n; ++j) mate[p[j] - 1] = j - 1;
  for (std::size_t l = 0; l < n; ++l) {
    if (!g.has_edge(l, mate[l])) return std::nullopt;
  }

  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t r = 0; r < n; ++r) {
      tight[l][r] = g.has_edge(l, r) && u[l + 1] + v[r + 1] == cost[l + 1][r + 1];
    }
  }
  detail::lexicographic_minimum(tight, mate);

  BasicMatching<Weight> result;
  result.mate = std::move(mate);
  for (std::size_t l = 0; l < n; ++l) result.weight += *g.edge(l, result.mate[l]);
  return result;
}

}  // namespace tenantalloc
