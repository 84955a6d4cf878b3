#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ringcut/solver.hpp"
#include "ringcut/wrt.hpp"

namespace ringcut::rl {

enum class Phase { RingMaxRadius, WedgeSplits, Done };
enum class RewardMode { FullNc, WedgeOnly };
enum class ActionMode { Sample, Greedy };

struct EnvOptions {
    RingWedgeConfig cfg;
    RewardMode reward = RewardMode::FullNc;
    // Preset ring interface (wedge training stage); -1 makes the whole
    // graph the wedge region.
    std::optional<int> forced_interface;
};

// One ring-wedge partitioning episode. The first decision fixes the
// outermost ring boundary (the remaining inner boundaries are filled by
// dp_ring_partition on the inside region); each further decision adds one
// circle boundary on the wedge region.
class Env {
public:
    Env(std::shared_ptr<const RingWedgePlanner> planner, EnvOptions opts);

    Phase phase() const { return phase_; }
    bool done() const { return phase_ == Phase::Done; }
    LineKind current_kind() const;
    wrt::ModelInput observation() const;

    // Applies an action; returns the reward (0 until terminal).
    double step(int action);

    double terminal_reward() const { return terminal_reward_; }
    const std::vector<int>& ring_bounds() const { return ring_bounds_; }
    const std::vector<int>& wedge_bounds() const { return wedge_bounds_; }
    // Assembled partition; only available in FullNc mode after the episode.
    const Partition& final_partition() const;

private:
    std::shared_ptr<const RingWedgePlanner> planner_;
    EnvOptions opts_;
    Phase phase_ = Phase::RingMaxRadius;
    int interface_ = -1;
    std::vector<int> ring_bounds_;
    std::vector<int> wedge_bounds_;
    double terminal_reward_ = 0.0;
    std::optional<Partition> final_partition_;

    void start_wedge_phase(int interface);
    void finish();
};

struct TrajectoryStep {
    wrt::ModelInput obs;
    LineKind kind = LineKind::Line;
    int action = 0;
    double log_prob = 0.0;
    double value = 0.0;
    double reward = 0.0;
    bool done = false;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    double terminal_reward = 0.0;
    std::optional<Partition> final_partition;
};

Trajectory rollout(const wrt::WrtParams& params,
                   std::shared_ptr<const RingWedgePlanner> planner,
                   const EnvOptions& opts, std::uint64_t seed,
                   ActionMode mode);

struct TrainHyper {
    wrt::Hyper model;
    int k = 4;
    double lr = 1e-3;
    double gamma = 0.9;
    double clip_eps = 0.2;
    double w_p = 1.0;
    double w_v = 0.5;
    double w_ent = 0.01;
    int batch_transitions = 256;
    int ppo_epochs = 4;
    int stage1_episodes = 6000;
    int stage2_episodes = 6000;
    std::uint64_t seed = 0;
    int log_every = 200;          // episodes per learning-curve row
    std::string curve_path;      // optional CSV log (step,mean_reward,nc_eval)
};

struct AdamState {
    wrt::WrtParams m;
    wrt::WrtParams v;
    long long t = 0;
    static AdamState zeros_like(const wrt::WrtParams& params);
};

// Tensor names that must not be updated.
using FreezeFilter = std::vector<std::string>;
bool is_frozen(const FreezeFilter& prefixes, const std::string& name);

struct PpoStats {
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
};

// min(rho * adv, clip(rho, 1-eps, 1+eps) * adv)
double clipped_objective(double rho, double adv, double eps);

// Clipped-surrogate update over a batch of trajectories: one-step TD
// advantages, semi-gradient value loss, entropy bonus; one gradient step
// per epoch over the whole batch.
PpoStats ppo_update(wrt::WrtParams& params, AdamState& adam,
                    const std::vector<Trajectory>& batch,
                    const TrainHyper& hyper, const FreezeFilter& freeze);

struct TrainItem {
    PlanarGraph graph;
    std::optional<RingWedgeConfig> planted;
};
using Dataset = std::vector<TrainItem>;

// Stage 1: wedge policy under randomized ring radii (uniform in
// (0, 0.8*max radius]); reward covers wedge blocks only; ring tensors
// stay untouched.
wrt::WrtParams train_stage_wedge(const Dataset& dataset,
                                 const TrainHyper& hyper);

// Stage 2: ring policy with the wedge component frozen except its
// re-initialized critic head; full-NC reward.
wrt::WrtParams train_stage_ring(const wrt::WrtParams& stage1,
                                const Dataset& dataset,
                                const TrainHyper& hyper);

// For each (k_r,k_w) config: one greedy and n sampled rollouts, each
// post-refined; returns the NC minimum.
SolveResult infer_best_of_n(const wrt::WrtParams& params, const PlanarGraph& g,
                            int k, int n, std::uint64_t seed);

// Key=value training configuration file (see docs in cli.cpp).
TrainHyper parse_train_config(const std::string& path);

}  // namespace ringcut::rl
