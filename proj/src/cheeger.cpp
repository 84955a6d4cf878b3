#include "ringcut/cheeger.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ringcut/graph.hpp"
#include "ringcut/synth.hpp"

namespace ringcut {

namespace {

constexpr double kTol = 1e-12;

double comb_count(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= static_cast<double>(n - i) / (i + 1);
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

double circle_eigenvalue(int n_nodes, int k) {
    if (k < 1 || k > n_nodes) throw GraphError("eigenvalue index out of range");
    return 1.0 - std::cos(2.0 * std::numbers::pi * (k / 2) / n_nodes);
}

double path_eigenvalue(int r_nodes, int k) {
    if (r_nodes < 2) throw GraphError("path needs at least 2 nodes");
    if (k < 1 || k > r_nodes) throw GraphError("eigenvalue index out of range");
    return 1.0 - std::cos(std::numbers::pi * (k - 1) / (r_nodes - 1));
}

double wedge_cheeger(int nodes_per_ring, int rings, int k, long long budget) {
    if (k < 2 || k > nodes_per_ring)
        throw GraphError("need 2 <= k <= nodes per ring");
    if (comb_count(nodes_per_ring, k) > static_cast<double>(budget))
        throw GraphError("combinatorial budget exceeded");

    PlanarGraph web = gen_spider_web({nodes_per_ring, rings});
    const int m = nodes_per_ring;

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> combo(k);
    for (int i = 0; i < k; ++i) combo[i] = i;
    do {
        // combo[j] is a boundary between spokes combo[j] and combo[j]+1;
        // wedge j holds spokes (combo[j], combo[j+1]].
        Partition p;
        p.k = k;
        p.assignment.assign(web.node_count(), 0);
        for (int v = 0; v < web.node_count(); ++v) {
            int spoke = v % m;
            int block = 0;
            for (int j = 0; j < k; ++j) {
                int lo = combo[j], hi = combo[(j + 1) % k];
                bool inside = lo < hi ? (spoke > lo && spoke <= hi)
                                      : (spoke > lo || spoke <= hi);
                if (inside) {
                    block = j;
                    break;
                }
            }
            p.assignment[v] = block;
        }
        best = std::min(
            best, normalized_cut(web, p, VolumeConvention::DegreeVolume));
    } while (next_combination(combo, m));
    return best;
}

double ring_cheeger(int nodes_per_ring, int rings, int k, long long budget) {
    if (k < 2 || k > rings) throw GraphError("need 2 <= k <= rings");
    if (comb_count(rings - 1, k - 1) > static_cast<double>(budget))
        throw GraphError("combinatorial budget exceeded");

    PlanarGraph web = gen_spider_web({nodes_per_ring, rings});
    const int m = nodes_per_ring;

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> combo(k - 1);
    for (int i = 0; i < k - 1; ++i) combo[i] = i;
    do {
        // combo[j] is a boundary between rings combo[j] and combo[j]+1.
        Partition p;
        p.k = k;
        p.assignment.assign(web.node_count(), 0);
        for (int v = 0; v < web.node_count(); ++v) {
            int ring = v / m;
            int block = 0;
            for (int b : combo)
                if (ring > b) ++block;
            p.assignment[v] = block;
        }
        best = std::min(
            best, normalized_cut(web, p, VolumeConvention::DegreeVolume));
    } while (next_combination(combo, rings - 1));
    return best;
}

CheegerReport check_cheeger_bounds(int nodes_per_ring, int rings, int k) {
    if (k < 2 || k > std::min(nodes_per_ring, rings))
        throw GraphError("need 2 <= k <= min(nodes per ring, rings)");

    CheegerReport rep;
    rep.n = nodes_per_ring;
    rep.r = rings;
    rep.k = k;
    rep.phi = wedge_cheeger(nodes_per_ring, rings, k);
    rep.psi = ring_cheeger(nodes_per_ring, rings, k);
    rep.lambda_c = circle_eigenvalue(nodes_per_ring, k);
    rep.lambda_p = path_eigenvalue(rings, k);

    const double r = rings;
    rep.bound_phi_lemma = r / ((nodes_per_ring / k) * (2.0 * r - 1.0));
    rep.bound_psi_lemma = 1.0 / (2.0 * (rings / k));
    rep.bound_phi_prop = 2.0 * r / (2.0 * r - 1.0) * std::sqrt(2.0 * rep.lambda_c);
    rep.bound_psi_prop = std::sqrt(2.0 * rep.lambda_p);

    rep.holds_phi_lemma = rep.phi <= rep.bound_phi_lemma + kTol;
    rep.holds_psi_lemma = rep.psi <= rep.bound_psi_lemma + kTol;
    rep.holds_phi_prop = rep.phi <= rep.bound_phi_prop + kTol;
    rep.holds_psi_prop = rep.psi <= rep.bound_psi_prop + kTol;
    return rep;
}

std::string CheegerReport::csv_header() {
    return "n,r,k,phi,psi,lambda_c,lambda_p,bound_phi_lemma,bound_psi_lemma,"
           "bound_phi_prop,bound_psi_prop,holds_phi_lemma,holds_psi_lemma,"
           "holds_phi_prop,holds_psi_prop";
}

std::string CheegerReport::csv_row() const {
    std::ostringstream out;
    out.precision(12);
    out << n << ',' << r << ',' << k << ',' << phi << ',' << psi << ','
        << lambda_c << ',' << lambda_p << ',' << bound_phi_lemma << ','
        << bound_psi_lemma << ',' << bound_phi_prop << ',' << bound_psi_prop
        << ',' << holds_phi_lemma << ',' << holds_psi_lemma << ','
        << holds_phi_prop << ',' << holds_psi_prop;
    return out.str();
}

}  // namespace ringcut
