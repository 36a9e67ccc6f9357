#include "cpi/kb/dependency_path.h"

#include <algorithm>
#include <deque>
#include <limits>

namespace cpi::kb {

std::vector<std::size_t> shortest_dependency_path(
    std::span<const std::pair<std::size_t, std::size_t>> edges, std::size_t start,
    std::size_t end) {
  if (start == end) return {start};
  std::size_t n = std::max(start, end) + 1;
  for (const auto& [a, b] : edges) n = std::max({n, a + 1, b + 1});
  std::vector<std::vector<std::size_t>> adjacent(n);
  for (const auto& [a, b] : edges) {
    if (a == b) continue;
    adjacent[a].push_back(b);
    adjacent[b].push_back(a);
  }
  for (auto& list : adjacent) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  // Distances to `end`; walking forward from `start` through the smallest
  // neighbour one step closer yields the lexicographically smallest path.
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, kUnreached);
  std::deque<std::size_t> queue{end};
  dist[end] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : adjacent[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  if (dist[start] == kUnreached) return {};

  std::vector<std::size_t> path{start};
  for (std::size_t u = start; u != end;) {
    for (std::size_t v : adjacent[u]) {
      if (dist[v] + 1 == dist[u]) {
        u = v;
        break;
      }
    }
    path.push_back(u);
  }
  return path;
}

}  // namespace cpi::kb
