#pragma once

#include <optional>
#include <string>

#include "ringcut/graph.hpp"

namespace ringcut {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

// Graph text format, one record per line:
//   node <id> <x> <y>
//   edge <u> <v> <w>
//   center <cx> <cy>     (optional; centroid applied when missing)
// with '#' comments. Parse errors cite the line number.
PlanarGraph load_graph(const std::string& path);
void save_graph(const std::string& path, const PlanarGraph& g);

// Partition file: "k <k>", then "block <node> <idx>" lines, then
// "nc <value>" when known.
void save_partition(const std::string& path, const Partition& p,
                    std::optional<double> nc = std::nullopt);
struct LoadedPartition {
    Partition partition;
    std::optional<double> nc;
};
LoadedPartition load_partition(const std::string& path);

// Plant sidecar: "block <node> <idx>" lines only.
void save_plant(const std::string& path, const Partition& p);
Partition load_plant(const std::string& path);

}  // namespace ringcut
