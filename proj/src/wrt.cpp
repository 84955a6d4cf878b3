#include "ringcut/wrt.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "ringcut/rng.hpp"

namespace ringcut::wrt {

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kInitScale = 0.1;

Matrix uniform_matrix(Rng& rng, int rows, int cols, double scale) {
    Matrix m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = rng.uniform(-scale, scale);
    return m;
}

LayerParams init_layer(Rng& rng, int h) {
    LayerParams layer;
    layer.att_w = uniform_matrix(rng, 3 * h, h, kInitScale);
    layer.att_b = Matrix::Zero(3 * h, 1);
    layer.ln1_g = Matrix::Ones(h, 1);
    layer.ln1_b = Matrix::Zero(h, 1);
    layer.ffn_w1 = uniform_matrix(rng, 4 * h, h, kInitScale);
    layer.ffn_b1 = Matrix::Zero(4 * h, 1);
    layer.ffn_w2 = uniform_matrix(rng, h, 4 * h, kInitScale);
    layer.ffn_b2 = Matrix::Zero(h, 1);
    layer.ln2_g = Matrix::Ones(h, 1);
    layer.ln2_b = Matrix::Zero(h, 1);
    return layer;
}

void init_critic_head(Rng& rng, ComponentParams& c, int h) {
    c.pool_w = uniform_matrix(rng, h, 1, kInitScale);
    c.pool_b = Matrix::Zero(1, 1);
    c.critic_w1 = uniform_matrix(rng, h, h, kInitScale);
    c.critic_b1 = Matrix::Zero(h, 1);
    c.critic_w2 = uniform_matrix(rng, 1, h, kInitScale);
    c.critic_b2 = Matrix::Zero(1, 1);
}

ComponentParams init_component(Rng& rng, int h, int layers, int pos_dim) {
    ComponentParams c;
    c.cw_w = uniform_matrix(rng, h, 2, kInitScale);
    c.cw_b = Matrix::Zero(h, 1);
    c.pos_w = uniform_matrix(rng, h, pos_dim, kInitScale);
    c.pos_b = Matrix::Zero(h, 1);
    for (int l = 0; l < layers; ++l) c.layers.push_back(init_layer(rng, h));
    c.vmask_a = Matrix::Ones(1, 1);
    c.vmask_b = Matrix::Zero(1, 1);
    c.actor_w1 = uniform_matrix(rng, h, h, kInitScale);
    c.actor_b1 = Matrix::Zero(h, 1);
    c.actor_w2 = uniform_matrix(rng, 1, h, kInitScale);
    c.actor_b2 = Matrix::Zero(1, 1);
    init_critic_head(rng, c, h);
    return c;
}

void collect_component(const std::string& prefix, ComponentParams& c,
                       std::vector<NamedTensor>& out) {
    auto add = [&](const std::string& name, Matrix& t) {
        out.push_back({prefix + name, &t});
    };
    add("cw_w", c.cw_w);
    add("cw_b", c.cw_b);
    add("pos_w", c.pos_w);
    add("pos_b", c.pos_b);
    for (std::size_t l = 0; l < c.layers.size(); ++l) {
        const std::string lp = "layer" + std::to_string(l) + ".";
        LayerParams& layer = c.layers[l];
        add(lp + "att_w", layer.att_w);
        add(lp + "att_b", layer.att_b);
        add(lp + "ln1_g", layer.ln1_g);
        add(lp + "ln1_b", layer.ln1_b);
        add(lp + "ffn_w1", layer.ffn_w1);
        add(lp + "ffn_b1", layer.ffn_b1);
        add(lp + "ffn_w2", layer.ffn_w2);
        add(lp + "ffn_b2", layer.ffn_b2);
        add(lp + "ln2_g", layer.ln2_g);
        add(lp + "ln2_b", layer.ln2_b);
    }
    add("vmask_a", c.vmask_a);
    add("vmask_b", c.vmask_b);
    add("actor_w1", c.actor_w1);
    add("actor_b1", c.actor_b1);
    add("actor_w2", c.actor_w2);
    add("actor_b2", c.actor_b2);
    add("pool_w", c.pool_w);
    add("pool_b", c.pool_b);
    add("critic_w1", c.critic_w1);
    add("critic_b1", c.critic_b1);
    add("critic_w2", c.critic_w2);
    add("critic_b2", c.critic_b2);
}

// Row-wise layer norm. Returns the normalized rows; x_hat and inv_std are
// retained for the backward pass.
Matrix layer_norm(const Matrix& x, const Matrix& gamma, const Matrix& beta,
                  Matrix& x_hat, Vector& inv_std) {
    const int n = static_cast<int>(x.rows());
    const int h = static_cast<int>(x.cols());
    x_hat.resize(n, h);
    inv_std.resize(n);
    Matrix out(n, h);
    for (int i = 0; i < n; ++i) {
        double mean = x.row(i).mean();
        double var = (x.row(i).array() - mean).square().mean();
        double is = 1.0 / std::sqrt(var + kLnEps);
        inv_std(i) = is;
        x_hat.row(i) = (x.row(i).array() - mean) * is;
        out.row(i) = x_hat.row(i).array() * gamma.col(0).transpose().array() +
                     beta.col(0).transpose().array();
    }
    return out;
}

// Backward through row-wise layer norm; accumulates parameter grads.
Matrix layer_norm_backward(const Matrix& dout, const Matrix& x_hat,
                           const Vector& inv_std, const Matrix& gamma,
                           Matrix& dgamma, Matrix& dbeta) {
    const int n = static_cast<int>(dout.rows());
    const int h = static_cast<int>(dout.cols());
    Matrix dx(n, h);
    for (int i = 0; i < n; ++i) {
        Eigen::RowVectorXd dy = dout.row(i);
        dbeta.col(0) += dy.transpose();
        dgamma.col(0) +=
            (dy.array() * x_hat.row(i).array()).matrix().transpose();
        Eigen::RowVectorXd g =
            (dy.array() * gamma.col(0).transpose().array()).matrix();
        double g_mean = g.mean();
        double gx_mean = (g.array() * x_hat.row(i).array()).mean();
        dx.row(i) = ((g.array() - g_mean) - x_hat.row(i).array() * gx_mean) *
                    inv_std(i);
    }
    return dx;
}

// Scalar exp keeps fully masked entries at exactly zero (vectorized exp
// underflows to denormals instead).
Vector softmax(const Vector& logits) {
    double mx = logits.maxCoeff();
    Vector e(logits.size());
    double sum = 0.0;
    for (int i = 0; i < logits.size(); ++i) {
        double d = logits(i) - mx;
        e(i) = d < -708.0 ? 0.0 : std::exp(d);
        sum += e(i);
    }
    return e / sum;
}

}  // namespace

WrtParams WrtParams::init(const Hyper& hyper, std::uint64_t seed) {
    Rng rng(seed);
    WrtParams p;
    p.hyper = hyper;
    p.ring = init_component(rng, hyper.hidden, hyper.layers, 2 * kPosBands);
    p.wedge = init_component(rng, hyper.hidden, hyper.layers, 2);
    return p;
}

WrtParams WrtParams::zeros_like(const WrtParams& other) {
    WrtParams p = other;
    p.set_zero();
    return p;
}

void WrtParams::set_zero() {
    for (auto& nt : named_tensors()) nt.tensor->setZero();
}

std::vector<NamedTensor> WrtParams::named_tensors() {
    std::vector<NamedTensor> out;
    collect_component("ring.", ring, out);
    collect_component("wedge.", wedge, out);
    return out;
}

std::vector<NamedTensor> WrtParams::named_tensors_const() const {
    return const_cast<WrtParams*>(this)->named_tensors();
}

void WrtParams::reinit_critic_heads(std::uint64_t seed) {
    Rng rng(seed);
    init_critic_head(rng, ring, hyper.hidden);
    init_critic_head(rng, wedge, hyper.hidden);
}

void WrtParams::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GraphError("cannot open " + path + " for writing");
    out.write("WRT1", 4);
    auto write_u32 = [&](std::uint32_t v) {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
        out.write(reinterpret_cast<char*>(b), 4);
    };
    auto write_f64 = [&](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = (bits >> (8 * i)) & 0xff;
        out.write(reinterpret_cast<char*>(b), 8);
    };
    write_u32(static_cast<std::uint32_t>(hyper.hidden));
    write_u32(static_cast<std::uint32_t>(hyper.layers));
    auto tensors = named_tensors_const();
    write_u32(static_cast<std::uint32_t>(tensors.size()));
    for (const auto& nt : tensors) {
        write_u32(static_cast<std::uint32_t>(nt.name.size()));
        out.write(nt.name.data(), static_cast<std::streamsize>(nt.name.size()));
        write_u32(static_cast<std::uint32_t>(nt.tensor->rows()));
        write_u32(static_cast<std::uint32_t>(nt.tensor->cols()));
        for (int r = 0; r < nt.tensor->rows(); ++r)
            for (int c = 0; c < nt.tensor->cols(); ++c)
                write_f64((*nt.tensor)(r, c));
    }
    if (!out) throw GraphError("failed writing " + path);
}

WrtParams WrtParams::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GraphError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "WRT1", 4) != 0)
        throw GraphError(path + ": not a WRT1 checkpoint");
    auto read_u32 = [&]() {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
        return v;
    };
    auto read_f64 = [&]() {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    };
    Hyper hyper;
    hyper.hidden = static_cast<int>(read_u32());
    hyper.layers = static_cast<int>(read_u32());
    WrtParams p = WrtParams::init(hyper, 0);
    auto tensors = p.named_tensors();
    std::uint32_t count = read_u32();
    if (count != tensors.size())
        throw GraphError(path + ": tensor count mismatch");
    for (std::uint32_t t = 0; t < count; ++t) {
        std::uint32_t name_len = read_u32();
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        std::uint32_t rows = read_u32(), cols = read_u32();
        if (name != tensors[t].name ||
            rows != static_cast<std::uint32_t>(tensors[t].tensor->rows()) ||
            cols != static_cast<std::uint32_t>(tensors[t].tensor->cols()))
            throw GraphError(path + ": tensor layout mismatch at " + name);
        for (std::uint32_t r = 0; r < rows; ++r)
            for (std::uint32_t c = 0; c < cols; ++c)
                (*tensors[t].tensor)(r, c) = read_f64();
    }
    if (!in) throw GraphError(path + ": truncated checkpoint");
    return p;
}

Vector line_position_features(double fraction) {
    Vector f(2 * kPosBands);
    for (int b = 0; b < kPosBands; ++b) {
        double arg = std::numbers::pi * (b + 1) * fraction;
        f(2 * b) = std::sin(arg);
        f(2 * b + 1) = std::cos(arg);
    }
    return f;
}

namespace {

Matrix position_features(const ComponentParams& params,
                         const ModelInput& input) {
    const int n = static_cast<int>(input.cut.size());
    Matrix feats(n, params.pos_dim());
    if (input.kind == LineKind::Line) {
        for (int i = 0; i < n; ++i)
            feats.row(i) = line_position_features(input.positions(i, 0));
    } else {
        feats = input.positions;
    }
    return feats;
}

}  // namespace

Matrix build_embedding(const ComponentParams& params, const ModelInput& input) {
    const int n = static_cast<int>(input.cut.size());
    Matrix feats(n, 2);
    for (int i = 0; i < n; ++i) {
        feats(i, 0) = input.cut(i);
        feats(i, 1) = static_cast<double>(input.ps(i));
    }
    Matrix pos = position_features(params, input);
    Matrix x = feats * params.cw_w.transpose();
    x.rowwise() += params.cw_b.col(0).transpose();
    x += pos * params.pos_w.transpose();
    x.rowwise() += params.pos_b.col(0).transpose();
    return x;
}

std::pair<Matrix, Matrix> pamha_masks(const ComponentParams& params,
                                      const ModelInput& input) {
    const int n = static_cast<int>(input.cut.size());
    Matrix mv = params.vmask_a(0, 0) * input.volume;
    mv.array() += params.vmask_b(0, 0);
    Matrix mp = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (input.segment_id(i) != input.segment_id(j))
                mp(i, j) = kMaskNegInf;
    return {std::move(mv), std::move(mp)};
}

namespace {

// One transformer layer; fills the cache when given.
Matrix run_layer(const LayerParams& layer, const Matrix& h_in,
                 const Matrix& mask, double inv_sqrt_d, LayerCache* cache) {
    const int n = static_cast<int>(h_in.rows());
    const int h = static_cast<int>(h_in.cols());

    Matrix qkv = h_in * layer.att_w.transpose();
    qkv.rowwise() += layer.att_b.col(0).transpose();
    Matrix q = qkv.leftCols(h);
    Matrix k = qkv.middleCols(h, h);
    Matrix v = qkv.rightCols(h);

    Matrix logits = q * k.transpose() + mask;
    Matrix prob(n, n);
    for (int i = 0; i < n; ++i) {
        double mx = logits.row(i).maxCoeff();
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            double d = logits(i, j) - mx;
            prob(i, j) = d < -708.0 ? 0.0 : std::exp(d);
            sum += prob(i, j);
        }
        prob.row(i) /= sum;
    }
    Matrix att_out = prob * v * inv_sqrt_d;

    Matrix res1 = att_out + h_in;
    Matrix norm1_hat;
    Vector norm1_inv_std;
    Matrix y = layer_norm(res1, layer.ln1_g, layer.ln1_b, norm1_hat,
                          norm1_inv_std);

    Matrix ffn_pre = y * layer.ffn_w1.transpose();
    ffn_pre.rowwise() += layer.ffn_b1.col(0).transpose();
    Matrix ffn_act = ffn_pre.cwiseMax(0.0);
    Matrix ffn_out = ffn_act * layer.ffn_w2.transpose();
    ffn_out.rowwise() += layer.ffn_b2.col(0).transpose();

    Matrix res2 = y + ffn_out;
    Matrix norm2_hat;
    Vector norm2_inv_std;
    Matrix h_out = layer_norm(res2, layer.ln2_g, layer.ln2_b, norm2_hat,
                              norm2_inv_std);

    if (cache) {
        cache->h_in = h_in;
        cache->q = std::move(q);
        cache->k = std::move(k);
        cache->v = std::move(v);
        cache->att_logits = std::move(logits);
        cache->att_prob = std::move(prob);
        cache->att_out = std::move(att_out);
        cache->res1 = std::move(res1);
        cache->norm1_hat = std::move(norm1_hat);
        cache->norm1_inv_std = std::move(norm1_inv_std);
        cache->y = y;
        cache->ffn_pre = std::move(ffn_pre);
        cache->ffn_act = std::move(ffn_act);
        cache->res2 = std::move(res2);
        cache->norm2_hat = std::move(norm2_hat);
        cache->norm2_inv_std = std::move(norm2_inv_std);
    }
    return h_out;
}

}  // namespace

Matrix wrt_forward(const ComponentParams& params, const ModelInput& input) {
    auto [mv, mp] = pamha_masks(params, input);
    Matrix mask = mv + mp;
    Matrix h = build_embedding(params, input);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(params.hidden()));
    for (const LayerParams& layer : params.layers)
        h = run_layer(layer, h, mask, inv_sqrt_d, nullptr);
    if (!h.allFinite()) throw GraphError("non-finite activations");
    return h;
}

HeadsOut ppo_heads(const ComponentParams& params, const Matrix& embeddings,
                   const std::vector<std::uint8_t>& legal) {
    const int n = static_cast<int>(embeddings.rows());
    bool any_legal = false;
    for (std::uint8_t l : legal)
        if (l) any_legal = true;
    if (!any_legal) throw GraphError("all actions illegal");

    Matrix pre = embeddings * params.actor_w1.transpose();
    pre.rowwise() += params.actor_b1.col(0).transpose();
    Matrix act = pre.cwiseMax(0.0);
    Vector raw = act * params.actor_w2.transpose().col(0);
    raw.array() += params.actor_b2(0, 0);

    HeadsOut out;
    out.logits = raw;
    for (int i = 0; i < n; ++i)
        if (!legal[i]) out.logits(i) = kMaskNegInf;
    out.prob = softmax(out.logits);

    Vector scores = embeddings * params.pool_w.col(0);
    scores.array() += params.pool_b(0, 0);
    Vector alpha = softmax(scores);
    Vector pooled = embeddings.transpose() * alpha;
    Vector cpre = params.critic_w1 * pooled + params.critic_b1.col(0);
    Vector cact = cpre.cwiseMax(0.0);
    out.value = params.critic_w2.row(0).dot(cact) + params.critic_b2(0, 0);
    return out;
}

PolicyOut policy_forward(const ComponentParams& params,
                         const ModelInput& input, ForwardCache* cache) {
    auto [mv, mp] = pamha_masks(params, input);
    Matrix mask = mv + mp;

    const int n = static_cast<int>(input.cut.size());
    Matrix feats(n, 2);
    for (int i = 0; i < n; ++i) {
        feats(i, 0) = input.cut(i);
        feats(i, 1) = static_cast<double>(input.ps(i));
    }
    Matrix pos = position_features(params, input);
    Matrix x = feats * params.cw_w.transpose();
    x.rowwise() += params.cw_b.col(0).transpose();
    x += pos * params.pos_w.transpose();
    x.rowwise() += params.pos_b.col(0).transpose();

    const double inv_sqrt_d =
        1.0 / std::sqrt(static_cast<double>(params.hidden()));
    if (cache) {
        cache->input_features = feats;
        cache->pos_features = pos;
        cache->x0 = x;
        cache->layers.resize(params.layers.size());
    }
    Matrix h = x;
    for (std::size_t l = 0; l < params.layers.size(); ++l)
        h = run_layer(params.layers[l], h, mask, inv_sqrt_d,
                      cache ? &cache->layers[l] : nullptr);
    if (!h.allFinite()) throw GraphError("non-finite activations");

    // actor head
    Matrix apre = h * params.actor_w1.transpose();
    apre.rowwise() += params.actor_b1.col(0).transpose();
    Matrix aact = apre.cwiseMax(0.0);
    Vector raw = aact * params.actor_w2.transpose().col(0);
    raw.array() += params.actor_b2(0, 0);
    Vector masked = raw;
    bool any_legal = false;
    for (int i = 0; i < n; ++i) {
        if (!input.legal[i])
            masked(i) = kMaskNegInf;
        else
            any_legal = true;
    }
    if (!any_legal) throw GraphError("all actions illegal");
    Vector prob = softmax(masked);

    // critic head: learned attention pooling, then a two-layer projection
    Vector scores = h * params.pool_w.col(0);
    scores.array() += params.pool_b(0, 0);
    Vector alpha = softmax(scores);
    Vector pooled = h.transpose() * alpha;
    Vector cpre = params.critic_w1 * pooled + params.critic_b1.col(0);
    Vector cact = cpre.cwiseMax(0.0);
    double value = params.critic_w2.row(0).dot(cact) + params.critic_b2(0, 0);

    if (cache) {
        cache->embeddings = h;
        cache->actor_pre = std::move(apre);
        cache->actor_act = std::move(aact);
        cache->logits_raw = raw;
        cache->logits_masked = masked;
        cache->prob = prob;
        cache->pool_scores = std::move(scores);
        cache->pool_alpha = alpha;
        cache->pooled = pooled;
        cache->critic_pre = std::move(cpre);
        cache->critic_act = cact;
        cache->value = value;
    }
    return {std::move(masked), std::move(prob), value};
}

void policy_backward(const ComponentParams& params, const ModelInput& input,
                     const ForwardCache& cache, const Vector& dlogits,
                     double dvalue, ComponentParams& grads) {
    const int n = static_cast<int>(input.cut.size());
    const int h = params.hidden();
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(h));

    Matrix d_emb = Matrix::Zero(n, h);

    // actor head
    {
        Vector dl = dlogits;
        for (int i = 0; i < n; ++i)
            if (!input.legal[i]) dl(i) = 0.0;
        grads.actor_w2.row(0) += dl.transpose() * cache.actor_act;
        grads.actor_b2(0, 0) += dl.sum();
        Matrix dact = dl * params.actor_w2.row(0);
        Matrix dpre =
            (cache.actor_pre.array() > 0.0).cast<double>() * dact.array();
        grads.actor_w1 += dpre.transpose() * cache.embeddings;
        grads.actor_b1.col(0) += dpre.colwise().sum().transpose();
        d_emb += dpre * params.actor_w1;
    }

    // critic head
    if (dvalue != 0.0) {
        grads.critic_w2.row(0) += dvalue * cache.critic_act.transpose();
        grads.critic_b2(0, 0) += dvalue;
        Vector dcact = params.critic_w2.row(0).transpose() * dvalue;
        Vector dcpre =
            (cache.critic_pre.array() > 0.0).cast<double>() * dcact.array();
        grads.critic_w1 += dcpre * cache.pooled.transpose();
        grads.critic_b1.col(0) += dcpre;
        Vector dpooled = params.critic_w1.transpose() * dcpre;
        Vector dalpha = cache.embeddings * dpooled;
        d_emb += cache.pool_alpha * dpooled.transpose();
        double dot = dalpha.dot(cache.pool_alpha);
        Vector dscores =
            cache.pool_alpha.array() * (dalpha.array() - dot);
        grads.pool_w.col(0) += cache.embeddings.transpose() * dscores;
        grads.pool_b(0, 0) += dscores.sum();
        d_emb += dscores * params.pool_w.col(0).transpose();
    }

    // transformer layers in reverse
    Matrix dh = d_emb;
    for (int l = static_cast<int>(params.layers.size()) - 1; l >= 0; --l) {
        const LayerParams& layer = params.layers[l];
        const LayerCache& lc = cache.layers[l];
        LayerParams& g = grads.layers[l];

        Matrix dres2 = layer_norm_backward(dh, lc.norm2_hat, lc.norm2_inv_std,
                                           layer.ln2_g, g.ln2_g, g.ln2_b);
        // FFN
        Matrix dffn_out = dres2;
        Matrix dffn_act = dffn_out * layer.ffn_w2;
        g.ffn_w2 += dffn_out.transpose() * lc.ffn_act;
        g.ffn_b2.col(0) += dffn_out.colwise().sum().transpose();
        Matrix dffn_pre =
            (lc.ffn_pre.array() > 0.0).cast<double>() * dffn_act.array();
        g.ffn_w1 += dffn_pre.transpose() * lc.y;
        g.ffn_b1.col(0) += dffn_pre.colwise().sum().transpose();
        Matrix dy = dres2 + dffn_pre * layer.ffn_w1;

        Matrix dres1 = layer_norm_backward(dy, lc.norm1_hat, lc.norm1_inv_std,
                                           layer.ln1_g, g.ln1_g, g.ln1_b);
        Matrix dh_in = dres1;  // residual branch

        Matrix datt_out = dres1;
        Matrix dprob = datt_out * lc.v.transpose() * inv_sqrt_d;
        Matrix dv = lc.att_prob.transpose() * datt_out * inv_sqrt_d;

        // softmax rows
        Matrix dlogits_att(n, n);
        for (int i = 0; i < n; ++i) {
            double dot = dprob.row(i).dot(lc.att_prob.row(i));
            dlogits_att.row(i) =
                lc.att_prob.row(i).array() * (dprob.row(i).array() - dot);
        }

        // additive mask: volume part is a*V + b
        grads.vmask_a(0, 0) +=
            (dlogits_att.array() * input.volume.array()).sum();
        grads.vmask_b(0, 0) += dlogits_att.sum();

        Matrix dq = dlogits_att * lc.k;
        Matrix dk = dlogits_att.transpose() * lc.q;

        Matrix dqkv(n, 3 * h);
        dqkv.leftCols(h) = dq;
        dqkv.middleCols(h, h) = dk;
        dqkv.rightCols(h) = dv;
        g.att_w += dqkv.transpose() * lc.h_in;
        g.att_b.col(0) += dqkv.colwise().sum().transpose();
        dh_in += dqkv * layer.att_w;

        dh = std::move(dh_in);
    }

    // embedding layer
    grads.cw_w += dh.transpose() * cache.input_features;
    grads.cw_b.col(0) += dh.colwise().sum().transpose();
    grads.pos_w += dh.transpose() * cache.pos_features;
    grads.pos_b.col(0) += dh.colwise().sum().transpose();
}

}  // namespace ringcut::wrt
