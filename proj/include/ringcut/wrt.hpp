#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ringcut/graph.hpp"
#include "ringcut/transform.hpp"

namespace ringcut::wrt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Hyper {
    int hidden = 64;
    int layers = 3;
};

// Number of sinusoid bands encoding the line rank fraction.
inline constexpr int kPosBands = 32;
// Additive mask value for cross-segment pairs and illegal actions; large
// enough that exp() underflows to exactly zero.
inline constexpr double kMaskNegInf = -1e30;

struct LayerParams {
    Matrix att_w, att_b;    // 3h x h, 3h x 1 (query/key/value stacked)
    Matrix ln1_g, ln1_b;    // h x 1
    Matrix ffn_w1, ffn_b1;  // 4h x h, 4h x 1
    Matrix ffn_w2, ffn_b2;  // h x 4h, h x 1
    Matrix ln2_g, ln2_b;    // h x 1
};

// One transformer component (the line and circle components share this
// structure but never weights).
struct ComponentParams {
    Matrix cw_w, cw_b;    // h x 2, h x 1: projects (cut_i, ps_i)
    Matrix pos_w, pos_b;  // h x pos_dim, h x 1
    std::vector<LayerParams> layers;
    Matrix vmask_a, vmask_b;  // 1 x 1 each: elementwise affine volume mask
    Matrix actor_w1, actor_b1, actor_w2, actor_b2;  // h x h, h, 1 x h, 1
    Matrix pool_w, pool_b;                          // h x 1, 1 x 1
    Matrix critic_w1, critic_b1, critic_w2, critic_b2;

    int hidden() const { return static_cast<int>(cw_w.rows()); }
    int pos_dim() const { return static_cast<int>(pos_w.cols()); }
};

struct NamedTensor {
    std::string name;
    Matrix* tensor;
};

struct WrtParams {
    Hyper hyper;
    ComponentParams ring;   // line component, banded positional features
    ComponentParams wedge;  // circle component, 2-d positional features

    static WrtParams init(const Hyper& hyper, std::uint64_t seed);
    static WrtParams zeros_like(const WrtParams& other);

    // Stable-ordered view over every parameter tensor.
    std::vector<NamedTensor> named_tensors();
    std::vector<NamedTensor> named_tensors_const() const;

    void set_zero();
    void save(const std::string& path) const;
    static WrtParams load(const std::string& path);

    // Fresh small-uniform critic heads (pooling + projection) for both
    // components; used when the reward definition changes between stages.
    void reinit_critic_heads(std::uint64_t seed);
};

// Model input built from the rank-space view of the current phase.
struct ModelInput {
    LineKind kind = LineKind::Line;
    Vector cut;                       // n
    Matrix volume;                    // n x n
    Eigen::VectorXi ps;               // n, 0/1 selection status
    Matrix positions;                 // n x 1 fraction or n x 2 (sin, cos)
    Eigen::VectorXi segment_id;       // n
    std::vector<std::uint8_t> legal;  // n, legal boundary actions
};

// Sinusoid features of a line rank fraction, 2*kPosBands wide.
Vector line_position_features(double fraction);

Matrix build_embedding(const ComponentParams& params, const ModelInput& input);

// (volume mask, segment mask): the first is the elementwise affine image of
// the volume matrix, the second is 0 within a segment and -inf across.
std::pair<Matrix, Matrix> pamha_masks(const ComponentParams& params,
                                      const ModelInput& input);

// Node embeddings after all masked-attention layers.
Matrix wrt_forward(const ComponentParams& params, const ModelInput& input);

struct HeadsOut {
    Vector logits;  // masked: illegal actions at -inf
    Vector prob;    // softmax over legal actions
    double value = 0.0;
};

HeadsOut ppo_heads(const ComponentParams& params, const Matrix& embeddings,
                   const std::vector<std::uint8_t>& legal);

// Forward pass retaining everything the backward pass needs.
struct LayerCache {
    Matrix h_in, q, k, v;
    Matrix att_logits, att_prob, att_out;
    Matrix res1, norm1_hat, y;
    Vector norm1_inv_std;
    Matrix ffn_pre, ffn_act, res2, norm2_hat;
    Vector norm2_inv_std;
};

struct ForwardCache {
    Matrix input_features;  // n x 2 (cut, ps)
    Matrix pos_features;    // n x pos_dim
    Matrix x0;
    std::vector<LayerCache> layers;
    Matrix embeddings;
    // heads
    Matrix actor_pre, actor_act;
    Vector logits_raw;
    Vector logits_masked;
    Vector prob;
    Vector pool_scores, pool_alpha;
    Vector pooled, critic_pre, critic_act;
    double value = 0.0;
};

struct PolicyOut {
    Vector logits;
    Vector prob;
    double value = 0.0;
};

PolicyOut policy_forward(const ComponentParams& params,
                         const ModelInput& input, ForwardCache* cache);

// Accumulates d(loss)/d(theta) into `grads` given upstream gradients at the
// masked logits and the value output.
void policy_backward(const ComponentParams& params, const ModelInput& input,
                     const ForwardCache& cache, const Vector& dlogits,
                     double dvalue, ComponentParams& grads);

}  // namespace ringcut::wrt
