#include "ringcut/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ringcut/rng.hpp"

namespace ringcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double comb_count(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 0; i < k; ++i) {
        c *= static_cast<double>(n - i) / (i + 1);
        if (c > 1e18) return kInf;
    }
    return c;
}

bool next_combination(std::vector<int>& combo, int n) {
    const int k = static_cast<int>(combo.size());
    for (int i = k - 1; i >= 0; --i) {
        if (combo[i] < n - (k - i)) {
            ++combo[i];
            for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<RingWedgeConfig> enumerate_configs(int k) {
    if (k < 2) throw GraphError("need k >= 2");
    std::vector<RingWedgeConfig> configs;
    for (int k_r = 1; k_r <= k; ++k_r) configs.push_back({k_r, k - k_r + 1});
    return configs;
}

DpResult dp_ring_partition_range(const std::vector<double>& cut,
                                 const Eigen::MatrixXd& volume, int k,
                                 int last) {
    if (last < 0 || last >= static_cast<int>(cut.size()))
        throw GraphError("dp range out of bounds");
    if (k < 1) throw GraphError("need k >= 1");
    if (k > last + 1) throw GraphError("k exceeds the number of nodes");

    auto sector_nc = [&](int a, int b) {
        double s = (a < 0 ? 0.0 : cut[a]) + cut[b];
        double vol = volume(a + 1, b) + s;
        return vol > 0.0 ? s / vol : kInf;  // zero-volume segment: infeasible
    };

    if (k == 1) {
        double v = sector_nc(-1, last);
        if (!std::isfinite(v)) throw GraphError("no feasible segmentation");
        return {v, {}};
    }

    // dp(j, b): best minimax over ranks [0..b] split into j segments with
    // the j-th boundary at b.
    Eigen::MatrixXd dp = Eigen::MatrixXd::Constant(k, last, kInf);
    Eigen::MatrixXi pre = Eigen::MatrixXi::Constant(k, last, -1);
    for (int b = 0; b < last; ++b) dp(1, b) = sector_nc(-1, b);
    for (int j = 2; j < k; ++j) {
        for (int b = j - 1; b < last; ++b) {
            for (int p = j - 2; p < b; ++p) {
                if (!std::isfinite(dp(j - 1, p))) continue;
                double agg = std::max(dp(j - 1, p), sector_nc(p, b));
                if (agg < dp(j, b)) {
                    dp(j, b) = agg;
                    pre(j, b) = p;
                }
            }
        }
    }

    double best = kInf;
    int best_b = -1;
    for (int b = k - 2; b < last; ++b) {
        if (!std::isfinite(dp(k - 1, b))) continue;
        double total = std::max(dp(k - 1, b), sector_nc(b, last));
        if (total < best) {
            best = total;
            best_b = b;
        }
    }
    if (best_b < 0) throw GraphError("no feasible segmentation");

    std::vector<int> boundaries;
    int b = best_b;
    for (int j = k - 1; j >= 1; --j) {
        boundaries.push_back(b);
        b = pre(j, b);
    }
    std::reverse(boundaries.begin(), boundaries.end());
    return {best, std::move(boundaries)};
}

DpResult dp_ring_partition(const std::vector<double>& cut,
                           const Eigen::MatrixXd& volume, int k) {
    return dp_ring_partition_range(cut, volume, k,
                                   static_cast<int>(cut.size()) - 1);
}

RingWedgePlanner::RingWedgePlanner(const PlanarGraph& g)
    : graph_(std::make_shared<PlanarGraph>(g)), line_(ring_transform(g)) {}

const RankRegion& RingWedgePlanner::wedge_region(int interface) const {
    auto it = regions_.find(interface);
    if (it != regions_.end()) return it->second;
    std::vector<NodeId> members(line_.order().begin() + (interface + 1),
                                line_.order().end());
    auto [pos, inserted] = regions_.emplace(
        interface, RankRegion::circle_of_subset(*graph_, members));
    return pos->second;
}

double RingWedgePlanner::ring_blocks_nc(
    const std::vector<int>& ring_bounds) const {
    const RankRegion& reg = line_.region;
    double nc = 0.0;
    int prev = -1;
    for (int b : ring_bounds) {
        double cut = reg.block_cut(prev, b);
        double vol = reg.block_intra(prev, b) + cut;
        if (vol <= 0.0) return kInf;
        nc = std::max(nc, cut / vol);
        prev = b;
    }
    return nc;
}

double RingWedgePlanner::wedge_blocks_nc(
    int interface, const std::vector<int>& wedge_bounds) const {
    const RankRegion& reg = wedge_region(interface);
    if (wedge_bounds.empty()) {
        double cut = reg.total_wsum() - 2.0 * reg.total_intra();
        double vol = reg.total_intra() + cut;
        if (vol <= 0.0) return kInf;
        return cut / vol;
    }
    const int q = static_cast<int>(wedge_bounds.size());
    double nc = 0.0;
    for (int j = 0; j < q; ++j) {
        int a = wedge_bounds[j];
        int b = wedge_bounds[(j + 1) % q];
        double cut = reg.block_cut(a, b);
        double vol = reg.block_intra(a, b) + cut;
        if (vol <= 0.0) return kInf;
        nc = std::max(nc, cut / vol);
    }
    return nc;
}

double RingWedgePlanner::candidate_nc(
    const std::vector<int>& ring_bounds,
    const std::vector<int>& wedge_bounds) const {
    int interface = ring_bounds.empty() ? -1 : ring_bounds.back();
    return std::max(ring_blocks_nc(ring_bounds),
                    wedge_blocks_nc(interface, wedge_bounds));
}

Partition RingWedgePlanner::materialize(
    const std::vector<int>& ring_bounds,
    const std::vector<int>& wedge_bounds) const {
    const int n = size();
    int interface = ring_bounds.empty() ? -1 : ring_bounds.back();
    const RankRegion& reg = wedge_region(interface);
    const int m = reg.size();
    const int k_r = static_cast<int>(ring_bounds.size()) + 1;
    const int k_w = wedge_bounds.empty()
                        ? 1
                        : static_cast<int>(wedge_bounds.size());

    Partition p;
    p.k = k_r + k_w - 1;
    p.assignment.assign(n, 0);
    {
        int block = 0;
        std::size_t next = 0;
        for (int r = 0; r <= interface; ++r) {
            p.assignment[line_.order()[r]] = block;
            if (next < ring_bounds.size() &&
                ring_bounds[next] == r)
                ++block, ++next;
        }
    }
    if (wedge_bounds.empty()) {
        for (int r = 0; r < m; ++r)
            p.assignment[reg.order()[r]] = k_r - 1;
    } else {
        const int q = static_cast<int>(wedge_bounds.size());
        for (int j = 0; j < q; ++j) {
            int a = wedge_bounds[j];
            int b = wedge_bounds[(j + 1) % q];
            for (int r = (a + 1) % m;; r = (r + 1) % m) {
                p.assignment[reg.order()[r]] = k_r - 1 + j;
                if (r == b) break;
            }
        }
    }
    p.validate(n);

    // Ring-wedge provenance when every boundary sits on a strict
    // radius/angle gap.
    const auto& rgaps = line_.region.distinct_gaps();
    const auto& agaps = reg.distinct_gaps();
    bool clean = true;
    for (int b : ring_bounds)
        if (!std::binary_search(rgaps.begin(), rgaps.end(), b)) clean = false;
    for (int b : wedge_bounds)
        if (!std::binary_search(agaps.begin(), agaps.end(), b)) clean = false;
    if (clean) {
        const PlanarGraph& g = *graph_;
        RingWedgeProvenance prov;
        for (int b : ring_bounds)
            prov.radii.push_back(0.5 * (g.radius_of(line_.order()[b]) +
                                        g.radius_of(line_.order()[b + 1])));
        constexpr double two_pi = 2.0 * std::numbers::pi;
        for (int b : wedge_bounds) {
            double a0 = g.angle_of(reg.order()[b]);
            double a1 = b + 1 < m ? g.angle_of(reg.order()[b + 1])
                                  : g.angle_of(reg.order()[0]) + two_pi;
            double mid = std::fmod(0.5 * (a0 + a1), two_pi);
            prov.angles.push_back(mid);
        }
        std::sort(prov.angles.begin(), prov.angles.end());
        p.provenance = std::move(prov);
    }
    return p;
}

int RingWedgePlanner::distinct_radius_count() const {
    return static_cast<int>(line_.region.distinct_gaps().size()) + 1;
}

int RingWedgePlanner::distinct_angle_count() const {
    return static_cast<int>(wedge_region(-1).distinct_gaps().size());
}

SolveResult brute_force(const PlanarGraph& g, const RingWedgeConfig& cfg,
                        std::int64_t budget) {
    if (cfg.k() < 2) throw GraphError("need k >= 2");
    RingWedgePlanner planner(g);
    const int n = planner.size();
    if (cfg.k() > n) throw GraphError("more blocks than nodes");
    if (cfg.k_r > planner.distinct_radius_count())
        throw GraphError("infeasible config: more rings than radius gaps");
    if (cfg.k_w > planner.distinct_angle_count())
        throw GraphError("infeasible config: more wedges than angle gaps");

    const int k_r = cfg.k_r, k_w = cfg.k_w;

    double work = 0.0;
    if (k_r == 1) {
        work = comb_count(n, k_w);
    } else {
        for (int R = std::max(0, k_r - 2); R <= n - 1 - k_w; ++R) {
            work += comb_count(R, k_r - 2);
            work += k_w == 1 ? 1.0 : comb_count(n - 1 - R, k_w);
        }
    }
    if (!(work <= static_cast<double>(budget)))
        throw GraphError("combinatorial budget exceeded");

    double best = kInf;
    std::vector<int> best_ring, best_wedge;

    auto scan_wedge = [&](int interface, double ring_nc,
                          const std::vector<int>& ring_bounds) {
        if (k_w == 1) {
            double nc = std::max(ring_nc, planner.wedge_blocks_nc(interface, {}));
            if (nc < best) {
                best = nc;
                best_ring = ring_bounds;
                best_wedge.clear();
            }
            return;
        }
        const int m = planner.wedge_region(interface).size();
        std::vector<int> combo(k_w);
        for (int i = 0; i < k_w; ++i) combo[i] = i;
        do {
            double nc = std::max(ring_nc,
                                 planner.wedge_blocks_nc(interface, combo));
            if (nc < best) {
                best = nc;
                best_ring = ring_bounds;
                best_wedge = combo;
            }
        } while (next_combination(combo, m));
    };

    if (k_r == 1) {
        scan_wedge(-1, 0.0, {});
    } else {
        for (int R = std::max(0, k_r - 2); R <= n - 1 - k_w; ++R) {
            // min over pairs of max(ring, wedge) factorizes per interface:
            // take the best ring set and the best wedge set independently.
            double ring_best = kInf;
            std::vector<int> ring_arg;
            if (k_r == 2) {
                ring_best = planner.ring_blocks_nc({R});
                ring_arg = {R};
            } else {
                std::vector<int> combo(k_r - 2);
                for (int i = 0; i < k_r - 2; ++i) combo[i] = i;
                do {
                    std::vector<int> bounds = combo;
                    bounds.push_back(R);
                    double nc = planner.ring_blocks_nc(bounds);
                    if (nc < ring_best) {
                        ring_best = nc;
                        ring_arg = std::move(bounds);
                    }
                } while (next_combination(combo, R));
            }
            if (!std::isfinite(ring_best)) continue;
            scan_wedge(R, ring_best, ring_arg);
        }
    }

    if (!std::isfinite(best)) throw GraphError("no feasible candidate");
    Partition part = planner.materialize(best_ring, best_wedge);
    return {std::move(part), best};
}

SolveResult random_search(const PlanarGraph& g, const RingWedgeConfig& cfg,
                          int samples, std::uint64_t seed) {
    if (cfg.k() < 2) throw GraphError("need k >= 2");
    if (samples < 1) throw GraphError("need samples >= 1");
    RingWedgePlanner planner(g);
    const int n = planner.size();
    if (cfg.k() > n) throw GraphError("more blocks than nodes");

    Rng rng(seed);
    double best = kInf;
    std::vector<int> best_ring, best_wedge;

    for (int s = 0; s < samples; ++s) {
        std::vector<int> ring_bounds;
        int interface = -1;
        if (cfg.k_r >= 2) {
            do {
                ring_bounds = rng.sorted_subset(n - 1, cfg.k_r - 1);
            } while (n - 1 - ring_bounds.back() < cfg.k_w);
            interface = ring_bounds.back();
        }
        std::vector<int> wedge_bounds;
        if (cfg.k_w >= 2) {
            const int m = planner.wedge_region(interface).size();
            wedge_bounds = rng.sorted_subset(m, cfg.k_w);
        }
        double nc = planner.candidate_nc(ring_bounds, wedge_bounds);
        if (nc < best) {
            best = nc;
            best_ring = std::move(ring_bounds);
            best_wedge = std::move(wedge_bounds);
        }
    }
    if (!std::isfinite(best)) throw GraphError("no feasible candidate");
    Partition part = planner.materialize(best_ring, best_wedge);
    return {std::move(part), best};
}

SolveResult random_search_all_configs(const PlanarGraph& g, int k,
                                      int total_samples, std::uint64_t seed) {
    auto configs = enumerate_configs(k);
    int per = std::max(1, total_samples / static_cast<int>(configs.size()));
    SolveResult best;
    best.nc = kInf;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        SolveResult r;
        try {
            r = random_search(g, configs[i], per, seed + i);
        } catch (const GraphError&) {
            continue;  // config infeasible at this size
        }
        if (r.nc < best.nc) best = std::move(r);
    }
    if (!std::isfinite(best.nc)) throw GraphError("no feasible config");
    return best;
}

}  // namespace ringcut
