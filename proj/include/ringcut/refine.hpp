#pragma once

#include "ringcut/graph.hpp"

namespace ringcut {

// Replaces every block by its connected components (induced subgraph
// connectivity). Block count can only grow; provenance is dropped.
Partition split_components(const PlanarGraph& g, const Partition& p);

// Repeatedly merges the block with the highest cut/volume (PaperEq2) into
// the adjacent block sharing the most edge weight until k_target blocks
// remain. Ties resolve to the lower block index.
Partition greedy_merge(const PlanarGraph& g, const Partition& p_split,
                       int k_target);

// split_components followed by greedy_merge back to k; the result is kept
// only when its NC does not exceed the input's.
Partition post_refine(const PlanarGraph& g, const Partition& p, int k);

}  // namespace ringcut
