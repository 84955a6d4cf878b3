#include "ringcut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ringcut {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BlockRange {
    double r_lo = 0.0;
    double r_hi = 0.0;
    bool hi_closed = true;
    double extent = 0.0;  // angular extent

    bool covers(double r) const {
        return r >= r_lo && (hi_closed ? r <= r_hi : r < r_hi);
    }
};

// Radial range and angular extent per block. Provenance partitions use the
// region geometry (rings tile [0, max] with full 2*pi extent, wedges share
// the outer radial range and split 2*pi by the boundary angles); otherwise
// ranges come from realized node radii and the minimal covering arc of the
// node angles.
std::vector<BlockRange> block_ranges(const PlanarGraph& g, const Partition& p) {
    const double max_r = g.max_radius();

    if (p.provenance.has_value()) {
        const auto& prov = *p.provenance;
        const int k_r = static_cast<int>(prov.radii.size()) + 1;
        const int k_w =
            std::max<int>(1, static_cast<int>(prov.angles.size()));
        if (k_r + k_w - 1 == p.k) {
            std::vector<BlockRange> ranges;
            double prev = 0.0;
            for (int i = 0; i + 1 < k_r; ++i) {
                ranges.push_back({prev, prov.radii[i], false, kTwoPi});
                prev = prov.radii[i];
            }
            for (int j = 0; j < k_w; ++j) {
                double extent = k_w == 1 ? kTwoPi
                                : j + 1 < k_w
                                    ? prov.angles[j + 1] - prov.angles[j]
                                    : prov.angles[0] + kTwoPi -
                                          prov.angles[k_w - 1];
                ranges.push_back({prev, max_r, true, extent});
            }
            return ranges;
        }
    }

    std::vector<std::vector<double>> angles(p.k);
    std::vector<BlockRange> ranges(
        p.k, {std::numeric_limits<double>::infinity(), 0.0, true, 0.0});
    for (int v = 0; v < g.node_count(); ++v) {
        int b = p.assignment[v];
        ranges[b].r_lo = std::min(ranges[b].r_lo, g.radius_of(v));
        ranges[b].r_hi = std::max(ranges[b].r_hi, g.radius_of(v));
        angles[b].push_back(g.angle_of(v));
    }
    for (int b = 0; b < p.k; ++b) {
        std::sort(angles[b].begin(), angles[b].end());
        // minimal covering arc = full circle minus the largest angular gap
        double max_gap = angles[b].front() + kTwoPi - angles[b].back();
        for (std::size_t i = 1; i < angles[b].size(); ++i)
            max_gap = std::max(max_gap, angles[b][i] - angles[b][i - 1]);
        ranges[b].extent = kTwoPi - max_gap;
    }
    return ranges;
}

MetricProfile sample_profile(const PlanarGraph& g,
                             const std::vector<BlockRange>& ranges,
                             int samples, bool sum_extent) {
    const double max_r = g.max_radius();
    MetricProfile prof;
    prof.radii.resize(samples);
    prof.values.resize(samples);
    for (int t = 0; t < samples; ++t) {
        double r = samples > 1 ? max_r * t / (samples - 1) : 0.0;
        double v = 0.0;
        for (const BlockRange& br : ranges) {
            if (br.covers(r)) v += sum_extent ? br.extent : 1.0;
        }
        prof.radii[t] = r;
        prof.values[t] = v;
    }
    return prof;
}

}  // namespace

RingnessResult ringness_profile(const PlanarGraph& g, const Partition& p,
                                int samples) {
    p.validate(g.node_count());
    RingnessResult res;
    res.profile = sample_profile(g, block_ranges(g, p), samples, false);
    double max_cov = 0.0;
    for (double v : res.profile.values) max_cov = std::max(max_cov, v);
    if (max_cov <= 0.0) max_cov = 1.0;
    res.literal = kTwoPi / max_cov;
    res.normalized = 1.0 / max_cov;
    return res;
}

WedgenessResult wedgeness_profile(const PlanarGraph& g, const Partition& p,
                                  int samples) {
    p.validate(g.node_count());
    WedgenessResult res;
    res.profile = sample_profile(g, block_ranges(g, p), samples, true);

    const auto& r = res.profile.radii;
    const auto& w = res.profile.values;
    const int s = static_cast<int>(r.size());
    const double max_r = r.back();
    double max_w = 0.0;
    for (double v : w) max_w = std::max(max_w, v);
    if (max_r <= 0.0 || max_w <= 0.0) return res;

    // cumulative trapezoid of W over [0, r_t]
    std::vector<double> cum(s, 0.0);
    for (int t = 1; t < s; ++t)
        cum[t] = cum[t - 1] + 0.5 * (w[t] + w[t - 1]) * (r[t] - r[t - 1]);
    const double total = cum[s - 1];

    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < s; ++t) {
        double low = cum[t];                                // integral of W
        double high = max_w * (max_r - r[t]) - (total - cum[t]);
        best = std::min(best, low + high);
    }
    const double z = 0.5 * max_r * max_w;
    res.score = (z - best) / z;
    return res;
}

}  // namespace ringcut
