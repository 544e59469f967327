#pragma once

#include <vector>

#include "gfactor/multigraph.hpp"

namespace testing {

using gfactor::Edge;
using gfactor::MultiGraph;
using gfactor::Weight;

inline MultiGraph make_graph(int n, std::vector<Edge> edges, std::vector<int> f) {
  return MultiGraph(n, std::move(edges), std::move(f));
}

// Triangle 0-1-2 with edges (0,1), (1,2), (2,0).
inline MultiGraph triangle(Weight a = 1, Weight b = 1, Weight c = 1, std::vector<int> f = {1, 1, 1}) {
  return make_graph(3, {{0, 1, a}, {1, 2, b}, {2, 0, c}}, std::move(f));
}

inline MultiGraph path3(std::vector<int> f = {1, 1, 1}) {
  return make_graph(3, {{0, 1, 1}, {1, 2, 1}}, std::move(f));
}

}  // namespace testing
