#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "ringcut/rng.hpp"
#include "ringcut/wrt.hpp"

using namespace ringcut;
using namespace ringcut::wrt;

namespace {

ModelInput random_input(int n, LineKind kind, std::uint64_t seed,
                        int segments = 1) {
    Rng rng(seed);
    ModelInput input;
    input.kind = kind;
    input.cut.resize(n);
    for (int i = 0; i < n; ++i) input.cut(i) = rng.uniform(0.0, 1.0);
    input.volume.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) input.volume(i, j) = rng.uniform(0.0, 1.0);
    input.ps.resize(n);
    for (int i = 0; i < n; ++i) input.ps(i) = rng.index(2) ? 1 : 0;
    if (kind == LineKind::Line) {
        input.positions.resize(n, 1);
        for (int i = 0; i < n; ++i)
            input.positions(i, 0) = static_cast<double>(i) / n;
    } else {
        input.positions.resize(n, 2);
        for (int i = 0; i < n; ++i) {
            double a = 2.0 * std::numbers::pi * (i + 1) / n;
            input.positions(i, 0) = std::sin(a);
            input.positions(i, 1) = std::cos(a);
        }
    }
    input.segment_id.resize(n);
    for (int i = 0; i < n; ++i)
        input.segment_id(i) = segments > 1 ? i % segments : 0;
    input.legal.assign(n, 1);
    return input;
}

// Scalar functional exercising both heads: sum_i u_i log p_i + 0.5 * value.
double functional(const ComponentParams& comp, const ModelInput& input,
                  const Vector& u) {
    PolicyOut out = policy_forward(comp, input, nullptr);
    double loss = 0.5 * out.value;
    for (int i = 0; i < out.prob.size(); ++i)
        if (input.legal[i]) loss += u(i) * std::log(out.prob(i));
    return loss;
}

}  // namespace

TEST_CASE("build_embedding reduces to positions under zero inputs") {
    WrtParams params = WrtParams::init({16, 2}, 1);
    ModelInput input = random_input(5, LineKind::Circle, 2);
    input.cut.setZero();
    for (int i = 0; i < 5; ++i) input.ps(i) = 0;

    Matrix h0 = build_embedding(params.wedge, input);
    Matrix pos_only = input.positions * params.wedge.pos_w.transpose();
    pos_only.rowwise() += params.wedge.pos_b.col(0).transpose();
    pos_only.rowwise() += params.wedge.cw_b.col(0).transpose();
    CHECK((h0 - pos_only).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("build_embedding is a per-row map") {
    WrtParams params = WrtParams::init({16, 2}, 3);
    ModelInput input = random_input(6, LineKind::Circle, 4);
    Matrix h0 = build_embedding(params.wedge, input);

    // swap rows 1 and 4 of every per-node field
    ModelInput perm = input;
    std::swap(perm.cut(1), perm.cut(4));
    std::swap(perm.ps(1), perm.ps(4));
    perm.positions.row(1).swap(perm.positions.row(4));
    Matrix h0p = build_embedding(params.wedge, perm);
    CHECK((h0.row(1) - h0p.row(4)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((h0.row(4) - h0p.row(1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pamha masks") {
    WrtParams params = WrtParams::init({16, 2}, 5);
    ModelInput input = random_input(6, LineKind::Circle, 6, 2);
    auto [mv, mp] = pamha_masks(params.wedge, input);
    // identity-initialized volume projection passes V through
    CHECK((mv - input.volume).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            if (input.segment_id(i) == input.segment_id(j))
                CHECK(mp(i, j) == 0.0);
            else
                CHECK(mp(i, j) == kMaskNegInf);
        }

    ModelInput one = random_input(6, LineKind::Circle, 6, 1);
    auto [mv1, mp1] = pamha_masks(params.wedge, one);
    CHECK(mp1.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cross-segment attention is exactly zero after softmax") {
    WrtParams params = WrtParams::init({32, 3}, 7);
    ModelInput input = random_input(8, LineKind::Circle, 8, 2);
    auto [mv, mp] = pamha_masks(params.wedge, input);
    Matrix mask = mv + mp;
    Matrix h = build_embedding(params.wedge, input);
    Matrix qkv = h * params.wedge.layers[0].att_w.transpose();
    qkv.rowwise() += params.wedge.layers[0].att_b.col(0).transpose();
    Matrix q = qkv.leftCols(32), k = qkv.middleCols(32, 32);
    Matrix logits = q * k.transpose() + mask;
    for (int i = 0; i < 8; ++i) {
        double mx = logits.row(i).maxCoeff();
        Eigen::ArrayXd e = (logits.row(i).array() - mx).exp();
        Eigen::ArrayXd p = e / e.sum();
        for (int j = 0; j < 8; ++j)
            if (input.segment_id(i) != input.segment_id(j))
                CHECK(p(j) == 0.0);
    }
}

TEST_CASE("forward handles a single node") {
    WrtParams params = WrtParams::init({16, 2}, 9);
    ModelInput input = random_input(1, LineKind::Line, 10);
    Matrix e = wrt_forward(params.ring, input);
    CHECK(e.rows() == 1);
    CHECK(e.allFinite());
    HeadsOut heads = ppo_heads(params.ring, e, input.legal);
    CHECK(heads.prob(0) == doctest::Approx(1.0));
    CHECK(std::isfinite(heads.value));
}

TEST_CASE("forward is deterministic") {
    WrtParams params = WrtParams::init({64, 3}, 11);
    ModelInput input = random_input(10, LineKind::Circle, 12, 2);
    PolicyOut a = policy_forward(params.wedge, input, nullptr);
    PolicyOut b = policy_forward(params.wedge, input, nullptr);
    CHECK((a.prob - b.prob).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.value == b.value);
}

TEST_CASE("probabilities: normalization, legality, uniform-embedding case") {
    WrtParams params = WrtParams::init({16, 2}, 13);
    ModelInput input = random_input(7, LineKind::Line, 14);
    input.legal = {1, 0, 1, 1, 0, 1, 1};
    PolicyOut out = policy_forward(params.ring, input, nullptr);
    CHECK(out.prob.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.prob(1) == 0.0);
    CHECK(out.prob(4) == 0.0);

    // identical embedding rows spread probability uniformly
    Matrix uniform = Matrix::Ones(5, 16);
    std::vector<std::uint8_t> legal(5, 1);
    legal[2] = 0;
    HeadsOut heads = ppo_heads(params.ring, uniform, legal);
    for (int i : {0, 1, 3, 4})
        CHECK(heads.prob(i) == doctest::Approx(0.25).epsilon(1e-12));

    std::vector<std::uint8_t> none(5, 0);
    CHECK_THROWS_AS(ppo_heads(params.ring, uniform, none), GraphError);
}

TEST_CASE("gradients match central finite differences") {
    WrtParams params = WrtParams::init({12, 2}, 15);
    const double fd_eps = 1e-4;

    for (LineKind kind : {LineKind::Line, LineKind::Circle}) {
        ComponentParams& comp =
            kind == LineKind::Line ? params.ring : params.wedge;
        ModelInput input = random_input(6, kind, 16, 2);
        input.legal[3] = 0;
        Rng rng(17);
        Vector u(6);
        for (int i = 0; i < 6; ++i) u(i) = rng.uniform(-1.0, 1.0);

        // analytic gradient
        ForwardCache cache;
        PolicyOut out = policy_forward(comp, input, &cache);
        Vector dlogits = Vector::Zero(6);
        double usum = 0.0;
        for (int i = 0; i < 6; ++i)
            if (input.legal[i]) usum += u(i);
        for (int j = 0; j < 6; ++j) {
            if (!input.legal[j]) continue;
            dlogits(j) = u(j) - usum * out.prob(j);
        }
        WrtParams grads = WrtParams::zeros_like(params);
        ComponentParams& comp_grads =
            kind == LineKind::Line ? grads.ring : grads.wedge;
        policy_backward(comp, input, cache, dlogits, 0.5, comp_grads);

        auto param_view = params.named_tensors();
        auto grad_view = grads.named_tensors();
        const std::string prefix =
            kind == LineKind::Line ? "ring." : "wedge.";

        Rng pick(18);
        int checked = 0;
        for (std::size_t t = 0; t < param_view.size(); ++t) {
            if (param_view[t].name.rfind(prefix, 0) != 0) continue;
            Matrix& tensor = *param_view[t].tensor;
            const Matrix& grad = *grad_view[t].tensor;
            // a handful of entries per tensor keeps this fast; the
            // acceptance suite sweeps every entry
            const int probes =
                std::min<int>(6, static_cast<int>(tensor.size()));
            for (int s = 0; s < probes; ++s) {
                int idx = static_cast<int>(pick.index(tensor.size()));
                int r = idx % static_cast<int>(tensor.rows());
                int c = idx / static_cast<int>(tensor.rows());
                double saved = tensor(r, c);
                tensor(r, c) = saved + fd_eps;
                double hi = functional(comp, input, u);
                tensor(r, c) = saved - fd_eps;
                double lo = functional(comp, input, u);
                tensor(r, c) = saved;
                double fd = (hi - lo) / (2.0 * fd_eps);
                double an = grad(r, c);
                double rel =
                    std::abs(fd - an) / std::max(std::abs(fd) + std::abs(an),
                                                 1e-3);
                INFO(param_view[t].name << " entry " << r << "," << c);
                CHECK(rel < 1e-4);
                ++checked;
            }
        }
        CHECK(checked > 100);
    }
}

TEST_CASE("checkpoint round-trip is exact") {
    WrtParams params = WrtParams::init({24, 2}, 19);
    std::string path =
        (std::filesystem::temp_directory_path() / "wrt_test.ckpt").string();
    params.save(path);
    WrtParams loaded = WrtParams::load(path);
    auto a = params.named_tensors_const();
    auto b = loaded.named_tensors_const();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK((*a[i].tensor - *b[i].tensor).cwiseAbs().maxCoeff() == 0.0);
    }
    std::remove(path.c_str());
}
