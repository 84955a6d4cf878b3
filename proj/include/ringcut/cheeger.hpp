#pragma once

#include <string>
#include <vector>

namespace ringcut {

// Closed-form normalized Laplacian eigenvalues, ascending (1-based k).
double circle_eigenvalue(int n_nodes, int k);
double path_eigenvalue(int r_nodes, int k);

// Exhaustive structured Cheeger constants of the unweighted spider web
// with `rings` rings and `nodes_per_ring` nodes per ring: minimum over all
// wedge (resp. ring) partitions into k blocks of the worst block
// conductance, degree volume.
double wedge_cheeger(int nodes_per_ring, int rings, int k,
                     long long budget = 10'000'000);
double ring_cheeger(int nodes_per_ring, int rings, int k,
                    long long budget = 10'000'000);

struct CheegerReport {
    int n = 0;  // nodes per ring
    int r = 0;  // rings
    int k = 0;
    double phi = 0.0;
    double psi = 0.0;
    double lambda_c = 0.0;
    double lambda_p = 0.0;
    double bound_phi_lemma = 0.0;
    double bound_psi_lemma = 0.0;
    double bound_phi_prop = 0.0;
    double bound_psi_prop = 0.0;
    bool holds_phi_lemma = false;
    bool holds_psi_lemma = false;
    bool holds_phi_prop = false;
    bool holds_psi_prop = false;

    bool all_hold() const {
        return holds_phi_lemma && holds_psi_lemma && holds_phi_prop &&
               holds_psi_prop;
    }
    static std::string csv_header();
    std::string csv_row() const;
};

// Evaluates the two structural bounds and the two eigenvalue bounds for
// (nodes_per_ring, rings, k). Requires 2 <= k <= min(nodes_per_ring, rings).
CheegerReport check_cheeger_bounds(int nodes_per_ring, int rings, int k);

}  // namespace ringcut
