#pragma once

#include <string>

#include "mrnet/Graph.hpp"

namespace mrnet {

// Graphviz digraph. Undirected edges render as arrows with dir=none (a bare
// "--" is not valid inside a digraph); conflicted edges additionally dash.
// Coefficients become edge labels where present.
std::string toDot(const CausalGraph& g);

// GraphML with per-edge `directed` attributes and status/coefficient keys.
std::string toGraphml(const CausalGraph& g);

}  // namespace mrnet
