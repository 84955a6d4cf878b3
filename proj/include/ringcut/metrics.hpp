#pragma once

#include <vector>

#include "ringcut/graph.hpp"

namespace ringcut {

struct MetricProfile {
    std::vector<double> radii;
    std::vector<double> values;
};

struct RingnessResult {
    MetricProfile profile;    // blocks covering each sampled radius
    double literal = 0.0;     // 2*pi / max coverage
    double normalized = 0.0;  // 1 / max coverage, in (0, 1]
};

struct WedgenessResult {
    MetricProfile profile;  // summed angular extent of covering blocks
    double score = 0.0;
};

// Radial coverage count per sampled radius. Blocks covering a radius are
// those whose radial range contains it; ranges come from the ring-wedge
// provenance when present, otherwise from the [min, max] node radii.
RingnessResult ringness_profile(const PlanarGraph& g, const Partition& p,
                                int samples = 512);

// Summed angular extent of the blocks covering each sampled radius, and
// its scalar quantification (split-point scan, trapezoid integration,
// normalized by 0.5 * max radius * max profile value).
WedgenessResult wedgeness_profile(const PlanarGraph& g, const Partition& p,
                                  int samples = 512);

}  // namespace ringcut
