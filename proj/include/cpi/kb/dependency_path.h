#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cpi::kb {

// Shortest path between two token indices of an undirected graph given as
// (head, dependent) edges, inclusive of both endpoints. Among equally short
// paths the lexicographically smallest index sequence wins. Returns [start]
// when start == end and an empty path when the endpoints are disconnected.
std::vector<std::size_t> shortest_dependency_path(
    std::span<const std::pair<std::size_t, std::size_t>> edges, std::size_t start,
    std::size_t end);

}  // namespace cpi::kb
