#include "ringcut/rl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "ringcut/refine.hpp"
#include "ringcut/rng.hpp"

namespace ringcut::rl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int segment_of(const std::vector<int>& sorted_bounds, int rank) {
    if (sorted_bounds.empty()) return 0;
    int below = static_cast<int>(
        std::lower_bound(sorted_bounds.begin(), sorted_bounds.end(), rank) -
        sorted_bounds.begin());
    return below % static_cast<int>(sorted_bounds.size());
}

}  // namespace

Env::Env(std::shared_ptr<const RingWedgePlanner> planner, EnvOptions opts)
    : planner_(std::move(planner)), opts_(opts) {
    if (opts_.cfg.k() < 2) throw GraphError("need k >= 2");
    const int n = planner_->size();
    if (opts_.cfg.k() > n) throw GraphError("more blocks than nodes");
    if (opts_.forced_interface.has_value()) {
        start_wedge_phase(*opts_.forced_interface);
    } else if (opts_.cfg.k_r == 1) {
        start_wedge_phase(-1);
    } else {
        phase_ = Phase::RingMaxRadius;
    }
}

void Env::start_wedge_phase(int interface) {
    const int n = planner_->size();
    if (interface < -1 || interface > n - 2)
        throw GraphError("ring interface out of range");
    if (n - 1 - interface < opts_.cfg.k_w)
        throw GraphError("wedge region too small");
    interface_ = interface;
    phase_ = Phase::WedgeSplits;
}

LineKind Env::current_kind() const {
    return phase_ == Phase::RingMaxRadius ? LineKind::Line : LineKind::Circle;
}

wrt::ModelInput Env::observation() const {
    if (done()) throw GraphError("episode is over");
    const double scale = std::max(planner_->graph().total_weight(), 1e-12);
    wrt::ModelInput input;

    if (phase_ == Phase::RingMaxRadius) {
        const RankRegion& reg = planner_->line().region;
        const int n = reg.size();
        input.kind = LineKind::Line;
        input.cut.resize(n);
        for (int i = 0; i < n; ++i) input.cut(i) = reg.cut()[i] / scale;
        input.volume = reg.volume() / scale;
        input.ps = Eigen::VectorXi::Zero(n);
        input.positions.resize(n, 1);
        for (int i = 0; i < n; ++i)
            input.positions(i, 0) = static_cast<double>(i) / n;
        input.segment_id = Eigen::VectorXi::Zero(n);
        input.legal.assign(n, 0);
        const int lo = std::max(0, opts_.cfg.k_r - 2);
        const int hi = n - 1 - opts_.cfg.k_w;
        for (int r = lo; r <= std::min(hi, n - 2); ++r) input.legal[r] = 1;
        return input;
    }

    const RankRegion& reg = planner_->wedge_region(interface_);
    const int m = reg.size();
    input.kind = LineKind::Circle;
    input.cut.resize(m);
    for (int i = 0; i < m; ++i) input.cut(i) = reg.cut()[i] / scale;
    input.volume = reg.volume() / scale;
    input.ps = Eigen::VectorXi::Zero(m);
    for (int b : wedge_bounds_) input.ps(b) = 1;
    input.positions.resize(m, 2);
    for (int i = 0; i < m; ++i) {
        double a = kTwoPi * (i + 1) / m;
        input.positions(i, 0) = std::sin(a);
        input.positions(i, 1) = std::cos(a);
    }
    input.segment_id.resize(m);
    for (int i = 0; i < m; ++i) input.segment_id(i) = segment_of(wedge_bounds_, i);
    input.legal.assign(m, 1);
    for (int b : wedge_bounds_) input.legal[b] = 0;
    return input;
}

double Env::step(int action) {
    if (done()) throw GraphError("episode is over");

    if (phase_ == Phase::RingMaxRadius) {
        const int n = planner_->size();
        const int lo = std::max(0, opts_.cfg.k_r - 2);
        if (action < lo || action > n - 1 - opts_.cfg.k_w || action > n - 2)
            throw GraphError("illegal ring action");
        if (opts_.cfg.k_r >= 3) {
            const RankRegion& reg = planner_->line().region;
            DpResult dp = dp_ring_partition_range(
                reg.cut(), reg.volume(), opts_.cfg.k_r - 1, action);
            ring_bounds_ = dp.boundaries;
        } else {
            ring_bounds_.clear();
        }
        ring_bounds_.push_back(action);
        start_wedge_phase(action);
        return 0.0;
    }

    const int m = planner_->wedge_region(interface_).size();
    if (action < 0 || action >= m) throw GraphError("illegal wedge action");
    for (int b : wedge_bounds_)
        if (b == action) throw GraphError("boundary already chosen");
    wedge_bounds_.insert(
        std::upper_bound(wedge_bounds_.begin(), wedge_bounds_.end(), action),
        action);
    if (static_cast<int>(wedge_bounds_.size()) < opts_.cfg.k_w) return 0.0;

    finish();
    return terminal_reward_;
}

void Env::finish() {
    phase_ = Phase::Done;
    if (opts_.reward == RewardMode::WedgeOnly) {
        terminal_reward_ = -planner_->wedge_blocks_nc(interface_, wedge_bounds_);
        return;
    }
    Partition part = planner_->materialize(ring_bounds_, wedge_bounds_);
    terminal_reward_ = -normalized_cut(planner_->graph(), part,
                                       VolumeConvention::PaperEq2);
    final_partition_ = std::move(part);
}

const Partition& Env::final_partition() const {
    if (!final_partition_.has_value())
        throw GraphError("no final partition available");
    return *final_partition_;
}

Trajectory rollout(const wrt::WrtParams& params,
                   std::shared_ptr<const RingWedgePlanner> planner,
                   const EnvOptions& opts, std::uint64_t seed,
                   ActionMode mode) {
    Env env(std::move(planner), opts);
    Rng rng(seed);
    Trajectory traj;

    while (!env.done()) {
        TrajectoryStep step;
        step.obs = env.observation();
        step.kind = env.current_kind();
        const wrt::ComponentParams& comp =
            step.kind == LineKind::Line ? params.ring : params.wedge;
        wrt::PolicyOut out = wrt::policy_forward(comp, step.obs, nullptr);

        int action = -1;
        if (mode == ActionMode::Greedy) {
            double best = -1.0;
            for (int i = 0; i < out.prob.size(); ++i) {
                if (step.obs.legal[i] && out.prob(i) > best) {
                    best = out.prob(i);
                    action = i;
                }
            }
        } else {
            double u = rng.uniform01();
            double cum = 0.0;
            for (int i = 0; i < out.prob.size(); ++i) {
                if (!step.obs.legal[i]) continue;
                cum += out.prob(i);
                if (u <= cum) {
                    action = i;
                    break;
                }
            }
            if (action < 0) {  // numeric tail: last legal action
                for (int i = static_cast<int>(out.prob.size()) - 1; i >= 0; --i)
                    if (step.obs.legal[i]) {
                        action = i;
                        break;
                    }
            }
        }
        if (action < 0) throw GraphError("no legal action");

        step.action = action;
        step.log_prob = std::log(std::max(out.prob(action), 1e-300));
        step.value = out.value;
        step.reward = env.step(action);
        step.done = env.done();
        traj.steps.push_back(std::move(step));
    }
    traj.terminal_reward = env.terminal_reward();
    if (opts.reward == RewardMode::FullNc)
        traj.final_partition = env.final_partition();
    return traj;
}

AdamState AdamState::zeros_like(const wrt::WrtParams& params) {
    AdamState s{wrt::WrtParams::zeros_like(params),
                wrt::WrtParams::zeros_like(params), 0};
    return s;
}

bool is_frozen(const FreezeFilter& prefixes, const std::string& name) {
    for (const std::string& p : prefixes)
        if (name.rfind(p, 0) == 0) return true;
    return false;
}

double clipped_objective(double rho, double adv, double eps) {
    return std::min(rho * adv,
                    std::clamp(rho, 1.0 - eps, 1.0 + eps) * adv);
}

namespace {

void adam_step(wrt::WrtParams& params, wrt::WrtParams& grads, AdamState& adam,
               double lr, const FreezeFilter& freeze) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++adam.t;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(adam.t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(adam.t));
    auto ps = params.named_tensors();
    auto gs = grads.named_tensors();
    auto ms = adam.m.named_tensors();
    auto vs = adam.v.named_tensors();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (is_frozen(freeze, ps[i].name)) continue;
        Eigen::MatrixXd& g = *gs[i].tensor;
        Eigen::MatrixXd& m = *ms[i].tensor;
        Eigen::MatrixXd& v = *vs[i].tensor;
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v.array().matrix() + (1.0 - b2) * g.cwiseProduct(g);
        Eigen::ArrayXXd mhat = m.array() / c1;
        Eigen::ArrayXXd vhat = v.array() / c2;
        ps[i].tensor->array() -= lr * mhat / (vhat.sqrt() + eps);
    }
}

}  // namespace

PpoStats ppo_update(wrt::WrtParams& params, AdamState& adam,
                    const std::vector<Trajectory>& batch,
                    const TrainHyper& hyper, const FreezeFilter& freeze) {
    if (batch.empty()) throw GraphError("empty batch");
    std::size_t total = 0;
    for (const Trajectory& t : batch) total += t.steps.size();
    const double inv_b = 1.0 / static_cast<double>(total);

    PpoStats stats;
    wrt::WrtParams grads = wrt::WrtParams::zeros_like(params);

    for (int epoch = 0; epoch < hyper.ppo_epochs; ++epoch) {
        grads.set_zero();
        double loss_p = 0.0, loss_v = 0.0, ent_sum = 0.0;

        for (const Trajectory& traj : batch) {
            double value_next = 0.0;
            for (int t = static_cast<int>(traj.steps.size()) - 1; t >= 0; --t) {
                const TrajectoryStep& step = traj.steps[t];
                const wrt::ComponentParams& comp =
                    step.kind == LineKind::Line ? params.ring : params.wedge;
                wrt::ComponentParams& comp_grads =
                    step.kind == LineKind::Line ? grads.ring : grads.wedge;

                wrt::ForwardCache cache;
                wrt::PolicyOut out =
                    wrt::policy_forward(comp, step.obs, &cache);

                const double v_next = step.done ? 0.0 : value_next;
                const double delta =
                    step.reward + hyper.gamma * v_next - out.value;
                const double adv = delta;

                const double logp_new =
                    std::log(std::max(out.prob(step.action), 1e-300));
                const double rho = std::exp(logp_new - step.log_prob);
                const double unclipped = rho * adv;
                const double clipped =
                    std::clamp(rho, 1.0 - hyper.clip_eps,
                               1.0 + hyper.clip_eps) *
                    adv;
                const double objective =
                    clipped_objective(rho, adv, hyper.clip_eps);

                double entropy = 0.0;
                for (int i = 0; i < out.prob.size(); ++i)
                    if (out.prob(i) > 0.0)
                        entropy -= out.prob(i) * std::log(out.prob(i));

                // d(-min(u, c))/dlogits through the selected branch
                wrt::Vector dlogits =
                    wrt::Vector::Zero(out.prob.size());
                if (unclipped <= clipped) {
                    wrt::Vector indicator = -out.prob;
                    indicator(step.action) += 1.0;
                    dlogits += (-hyper.w_p * rho * adv * inv_b) * indicator;
                }
                // entropy bonus: subtracts w_ent * H from the loss
                for (int i = 0; i < out.prob.size(); ++i) {
                    if (out.prob(i) > 0.0) {
                        double dh = -out.prob(i) *
                                    (std::log(out.prob(i)) + entropy);
                        dlogits(i) += -hyper.w_ent * inv_b * dh;
                    }
                }
                // value loss (r + gamma v' - v)^2, target held constant
                const double dvalue = hyper.w_v * inv_b * (-2.0) * delta;

                wrt::policy_backward(comp, step.obs, cache, dlogits, dvalue,
                                     comp_grads);

                loss_p += -objective * inv_b;
                loss_v += delta * delta * inv_b;
                ent_sum += entropy * inv_b;
                value_next = out.value;
            }
        }
        adam_step(params, grads, adam, hyper.lr, freeze);
        stats.policy_loss = loss_p;
        stats.value_loss = loss_v;
        stats.entropy = ent_sum;
    }
    return stats;
}

namespace {

struct CurveLogger {
    std::ofstream out;
    explicit CurveLogger(const std::string& path) {
        if (!path.empty()) {
            out.open(path);
            out << "step,mean_reward,nc_eval\n";
        }
    }
    void log(long long step, double mean_reward, double nc_eval) {
        if (out.is_open()) {
            out << step << ',' << mean_reward << ',' << nc_eval << '\n';
            out.flush();
        }
    }
};

std::vector<std::shared_ptr<const RingWedgePlanner>> build_planners(
    const Dataset& dataset) {
    std::vector<std::shared_ptr<const RingWedgePlanner>> planners;
    planners.reserve(dataset.size());
    for (const TrainItem& item : dataset)
        planners.push_back(std::make_shared<RingWedgePlanner>(item.graph));
    return planners;
}

RingWedgeConfig pick_config(const TrainItem& item, int k, Rng& rng) {
    if (item.planted.has_value()) return *item.planted;
    auto configs = enumerate_configs(k);
    return configs[rng.index(configs.size())];
}

// Maps a radius draw to the last line boundary whose node radius is at or
// below it; -1 when the draw undercuts every node.
int interface_for_radius(const RingWedgePlanner& planner, double radius) {
    const auto& order = planner.line().order();
    const PlanarGraph& g = planner.graph();
    int iface = -1;
    for (std::size_t r = 0; r < order.size(); ++r) {
        if (g.radius_of(order[r]) <= radius)
            iface = static_cast<int>(r);
        else
            break;
    }
    return std::min(iface, planner.size() - 2);
}

}  // namespace

wrt::WrtParams train_stage_wedge(const Dataset& dataset,
                                 const TrainHyper& hyper) {
    if (dataset.empty()) throw GraphError("empty dataset");
    wrt::WrtParams params = wrt::WrtParams::init(hyper.model, hyper.seed);
    AdamState adam = AdamState::zeros_like(params);
    FreezeFilter freeze{"ring."};
    auto planners = build_planners(dataset);
    Rng rng(hyper.seed ^ 0x9e3779b97f4a7c15ull);
    CurveLogger curve(hyper.curve_path);

    std::vector<Trajectory> batch;
    std::size_t batch_transitions = 0;
    double window_sum = 0.0;
    int window_count = 0;

    for (int episode = 0; episode < hyper.stage1_episodes; ++episode) {
        std::size_t gi = rng.index(dataset.size());
        RingWedgeConfig cfg = pick_config(dataset[gi], hyper.k, rng);
        const RingWedgePlanner& planner = *planners[gi];

        int iface = -1;
        if (cfg.k_r >= 2) {
            const double max_r = planner.graph().max_radius();
            bool ok = false;
            for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
                double u = (1.0 - rng.uniform01()) * 0.8 * max_r;
                iface = interface_for_radius(planner, u);
                ok = planner.size() - 1 - iface >= cfg.k_w;
            }
            if (!ok) continue;  // no usable radius at this size
        }

        EnvOptions opts{cfg, RewardMode::WedgeOnly, iface};
        Trajectory traj = rollout(params, planners[gi], opts, rng.next_u64(),
                                  ActionMode::Sample);
        window_sum += traj.terminal_reward;
        ++window_count;
        batch_transitions += traj.steps.size();
        batch.push_back(std::move(traj));

        if (batch_transitions >= static_cast<std::size_t>(hyper.batch_transitions)) {
            ppo_update(params, adam, batch, hyper, freeze);
            batch.clear();
            batch_transitions = 0;
        }
        if ((episode + 1) % hyper.log_every == 0) {
            curve.log(episode + 1, window_sum / std::max(1, window_count),
                      -window_sum / std::max(1, window_count));
            window_sum = 0.0;
            window_count = 0;
        }
    }
    return params;
}

wrt::WrtParams train_stage_ring(const wrt::WrtParams& stage1,
                                const Dataset& dataset,
                                const TrainHyper& hyper) {
    if (dataset.empty()) throw GraphError("empty dataset");
    wrt::WrtParams params = stage1;
    params.reinit_critic_heads(hyper.seed ^ 0xc2b2ae3d27d4eb4full);
    AdamState adam = AdamState::zeros_like(params);
    // wedge component frozen except its (re-initialized) critic head
    FreezeFilter freeze{"wedge.cw", "wedge.pos", "wedge.layer", "wedge.vmask",
                        "wedge.actor"};
    auto planners = build_planners(dataset);
    Rng rng(hyper.seed ^ 0x165667b19e3779f9ull);
    CurveLogger curve(hyper.curve_path);

    std::vector<Trajectory> batch;
    std::size_t batch_transitions = 0;
    double window_sum = 0.0;
    int window_count = 0;

    for (int episode = 0; episode < hyper.stage2_episodes; ++episode) {
        std::size_t gi = rng.index(dataset.size());
        RingWedgeConfig cfg = pick_config(dataset[gi], hyper.k, rng);

        EnvOptions opts{cfg, RewardMode::FullNc, std::nullopt};
        Trajectory traj = rollout(params, planners[gi], opts, rng.next_u64(),
                                  ActionMode::Sample);
        window_sum += traj.terminal_reward;
        ++window_count;
        batch_transitions += traj.steps.size();
        batch.push_back(std::move(traj));

        if (batch_transitions >= static_cast<std::size_t>(hyper.batch_transitions)) {
            ppo_update(params, adam, batch, hyper, freeze);
            batch.clear();
            batch_transitions = 0;
        }
        if ((episode + 1) % hyper.log_every == 0) {
            curve.log(episode + 1, window_sum / std::max(1, window_count),
                      -window_sum / std::max(1, window_count));
            window_sum = 0.0;
            window_count = 0;
        }
    }
    return params;
}

SolveResult infer_best_of_n(const wrt::WrtParams& params, const PlanarGraph& g,
                            int k, int n, std::uint64_t seed) {
    auto planner = std::make_shared<const RingWedgePlanner>(g);
    Rng rng(seed);
    SolveResult best;
    best.nc = std::numeric_limits<double>::infinity();

    for (const RingWedgeConfig& cfg : enumerate_configs(k)) {
        for (int s = 0; s <= n; ++s) {
            std::uint64_t rollout_seed = rng.next_u64();
            Trajectory traj;
            try {
                traj = rollout(params, planner,
                               EnvOptions{cfg, RewardMode::FullNc, std::nullopt},
                               rollout_seed,
                               s == 0 ? ActionMode::Greedy : ActionMode::Sample);
            } catch (const GraphError&) {
                break;  // config infeasible on this graph
            }
            Partition refined = post_refine(g, *traj.final_partition, k);
            double nc = normalized_cut(g, refined, VolumeConvention::PaperEq2);
            if (nc < best.nc) {
                best.nc = nc;
                best.partition = std::move(refined);
            }
        }
    }
    if (!std::isfinite(best.nc)) throw GraphError("no feasible config");
    return best;
}

TrainHyper parse_train_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open " + path);
    TrainHyper hyper;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line.substr(0, line.find('#'));
        auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
        while (!trimmed.empty() && is_space(trimmed.back())) trimmed.pop_back();
        std::size_t start = 0;
        while (start < trimmed.size() && is_space(trimmed[start])) ++start;
        trimmed = trimmed.substr(start);
        if (trimmed.empty()) continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw GraphError(path + ":" + std::to_string(line_no) +
                             ": expected key=value");
        std::string key = trimmed.substr(0, eq);
        std::string value = trimmed.substr(eq + 1);
        try {
            if (key == "hidden") hyper.model.hidden = std::stoi(value);
            else if (key == "layers") hyper.model.layers = std::stoi(value);
            else if (key == "k") hyper.k = std::stoi(value);
            else if (key == "lr") hyper.lr = std::stod(value);
            else if (key == "gamma") hyper.gamma = std::stod(value);
            else if (key == "clip_eps") hyper.clip_eps = std::stod(value);
            else if (key == "w_p") hyper.w_p = std::stod(value);
            else if (key == "w_v") hyper.w_v = std::stod(value);
            else if (key == "w_ent") hyper.w_ent = std::stod(value);
            else if (key == "batch") hyper.batch_transitions = std::stoi(value);
            else if (key == "ppo_epochs") hyper.ppo_epochs = std::stoi(value);
            else if (key == "stage1_episodes") hyper.stage1_episodes = std::stoi(value);
            else if (key == "stage2_episodes") hyper.stage2_episodes = std::stoi(value);
            else if (key == "seed") hyper.seed = std::stoull(value);
            else if (key == "log_every") hyper.log_every = std::stoi(value);
            else if (key == "curve") hyper.curve_path = value;
            else if (key == "dataset" || key == "synth" || key == "graphs" ||
                     key == "out") {
                // consumed by the CLI layer
            } else {
                throw GraphError("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw GraphError(path + ":" + std::to_string(line_no) +
                             ": bad value for " + key);
        }
    }
    return hyper;
}

}  // namespace ringcut::rl
