#include "ringcut/refine.hpp"

#include <algorithm>
#include <vector>

namespace ringcut {

Partition split_components(const PlanarGraph& g, const Partition& p) {
    p.validate(g.node_count());
    const int n = g.node_count();
    std::vector<int> label(n, -1);
    int next = 0;
    for (int start = 0; start < n; ++start) {
        if (label[start] >= 0) continue;
        int block = p.assignment[start];
        std::vector<NodeId> stack{start};
        label[start] = next;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (auto [u, w] : g.adjacency()[v]) {
                if (label[u] < 0 && p.assignment[u] == block) {
                    label[u] = next;
                    stack.push_back(u);
                }
            }
        }
        ++next;
    }
    Partition out;
    out.assignment = std::move(label);
    out.k = next;
    return out;
}

Partition greedy_merge(const PlanarGraph& g, const Partition& p_split,
                       int k_target) {
    p_split.validate(g.node_count());
    if (k_target < 1) throw GraphError("need k_target >= 1");
    if (p_split.k < k_target)
        throw GraphError("cannot merge below the current block count");

    Partition cur = p_split;
    cur.provenance.reset();
    while (cur.k > k_target) {
        std::vector<double> intra(cur.k, 0.0), cut(cur.k, 0.0);
        std::vector<std::vector<double>> link(cur.k,
                                              std::vector<double>(cur.k, 0.0));
        for (const Edge& e : g.edges()) {
            int a = cur.assignment[e.u], b = cur.assignment[e.v];
            if (a == b) {
                intra[a] += e.w;
            } else {
                cut[a] += e.w;
                cut[b] += e.w;
                link[a][b] += e.w;
                link[b][a] += e.w;
            }
        }
        int worst = 0;
        double worst_nc = -1.0;
        for (int b = 0; b < cur.k; ++b) {
            double vol = intra[b] + cut[b];
            double nc = vol > 0.0 ? cut[b] / vol : 0.0;
            if (nc > worst_nc) {
                worst_nc = nc;
                worst = b;
            }
        }
        int target = -1;
        double best_link = -1.0;
        for (int b = 0; b < cur.k; ++b) {
            if (b == worst) continue;
            if (link[worst][b] > best_link) {
                best_link = link[worst][b];
                target = b;
            }
        }
        if (target < 0 || best_link <= 0.0)
            throw GraphError("block has no adjacent block to merge into");

        for (int v = 0; v < g.node_count(); ++v)
            if (cur.assignment[v] == worst) cur.assignment[v] = target;
        cur = Partition::from_assignment(std::move(cur.assignment));
    }
    return cur;
}

Partition post_refine(const PlanarGraph& g, const Partition& p, int k) {
    p.validate(g.node_count());
    Partition split = split_components(g, p);
    if (split.k < k) return p;
    if (split.k == p.k && split.same_blocks_as(p)) return p;  // all connected

    Partition merged = greedy_merge(g, split, k);
    double before = normalized_cut(g, p, VolumeConvention::PaperEq2);
    double after = normalized_cut(g, merged, VolumeConvention::PaperEq2);
    return after <= before ? merged : p;
}

}  // namespace ringcut
