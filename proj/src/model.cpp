#include "dragonnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "dragonnet/errors.hpp"

namespace dragonnet {

namespace {

double clip_propensity(double g) {
    return std::clamp(g, kPropensityClip, 1.0 - kPropensityClip);
}

// splitmix64, used to derive independent sub-seeds from the config seed
std::uint64_t mix_seed(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

NeighborAverages slice_neighbors(const NeighborAverages& nbrs,
                                 const std::vector<Eigen::Index>& idx) {
    NeighborAverages out;
    out.k = nbrs.k;
    out.metric = nbrs.metric;
    out.ybar0.resize(static_cast<Eigen::Index>(idx.size()));
    out.ybar1.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.ybar0[static_cast<Eigen::Index>(i)] = nbrs.ybar0[idx[i]];
        out.ybar1[static_cast<Eigen::Index>(i)] = nbrs.ybar1[idx[i]];
    }
    return out;
}

Matrix head_input(const DragonnetModel& model, const Matrix& z,
                  const Vector& ybar) {
    if (model.variant == Variant::Baseline) return z;
    if (ybar.size() != z.rows())
        throw ValidationError("model: neighbor averages do not match sample count");
    Matrix in(z.rows(), z.cols() + 1);
    in.leftCols(z.cols()) = z;
    in.col(z.cols()) = ybar;
    return in;
}

}  // namespace

std::string variant_name(Variant v) {
    return v == Variant::Modified ? "modified" : "baseline";
}

void TrainConfig::validate() const {
    if (alpha <= 0.0) throw ValidationError("config: alpha must be positive");
    if (beta < 0.0) throw ValidationError("config: beta must be nonnegative");
    if (k <= 0) throw ValidationError("config: k must be positive");
    if (validation_fraction <= 0.0 || validation_fraction >= 1.0)
        throw ValidationError("config: validation_fraction must be in (0,1)");
    if (epochs <= 0 || batch_size <= 0 || patience <= 0)
        throw ValidationError("config: epochs, batch_size, patience must be positive");
    if (learning_rate <= 0.0) throw ValidationError("config: learning_rate must be positive");
    if (momentum < 0.0 || momentum >= 1.0)
        throw ValidationError("config: momentum must be in [0,1)");
    if (rep_width <= 0 || rep_depth <= 0 || head_width <= 0 || head_depth < 0)
        throw ValidationError("config: network widths/depths must be positive");
}

Eigen::Index DragonnetModel::param_count() const {
    return representation.param_count() + head0.param_count() +
           head1.param_count() + propensity.param_count() + 1;
}

Vector DragonnetModel::pack() const {
    Vector flat(param_count());
    Eigen::Index off = 0;
    for (const Network* net : {&representation, &head0, &head1, &propensity}) {
        flat.segment(off, net->param_count()) = pack_params(*net);
        off += net->param_count();
    }
    flat[off] = epsilon;
    return flat;
}

void DragonnetModel::unpack(const Vector& flat) {
    if (flat.size() != param_count())
        throw ShapeError("model unpack: flat parameter size mismatch");
    Eigen::Index off = 0;
    for (Network* net : {&representation, &head0, &head1, &propensity}) {
        unpack_params(*net, flat, off);
        off += net->param_count();
    }
    epsilon = flat[off];
}

DragonnetModel init_model(Eigen::Index input_dim, const TrainConfig& cfg) {
    cfg.validate();
    if (input_dim <= 0) throw ValidationError("init_model: input_dim must be positive");

    DragonnetModel m;
    m.variant = cfg.variant;
    m.k = cfg.k;
    m.metric = cfg.metric;
    m.alpha = cfg.alpha;
    m.beta = cfg.beta;
    m.standardize_covariates = cfg.standardize_covariates;

    std::uint64_t state = cfg.seed;

    std::vector<LayerSpec> rep_spec;
    Eigen::Index in = input_dim;
    for (int i = 0; i < cfg.rep_depth; ++i) {
        rep_spec.push_back({in, cfg.rep_width, Activation::Elu, 0.0});
        in = cfg.rep_width;
    }
    m.representation = init_network(rep_spec, mix_seed(state));

    const Eigen::Index head_in =
        cfg.rep_width + (cfg.variant == Variant::Modified ? 1 : 0);
    std::vector<LayerSpec> head_spec;
    in = head_in;
    for (int i = 0; i < cfg.head_depth; ++i) {
        head_spec.push_back({in, cfg.head_width, Activation::Elu, cfg.head_l2});
        in = cfg.head_width;
    }
    head_spec.push_back({in, 1, Activation::Linear, 0.0});
    m.head0 = init_network(head_spec, mix_seed(state));
    m.head1 = init_network(head_spec, mix_seed(state));

    m.propensity = init_network({{cfg.rep_width, 1, Activation::Sigmoid, 0.0}},
                                mix_seed(state));
    m.epsilon = 0.0;
    return m;
}

ModelOutputs predict_std(const DragonnetModel& model, const Matrix& x,
                         const NeighborAverages& nbrs) {
    if (x.cols() != model.representation.input_dim())
        throw ValidationError("predict: covariate dimension mismatch");
    const Matrix z = forward(model.representation, x);
    ModelOutputs out;
    out.q0 = forward(model.head0, head_input(model, z, nbrs.ybar0)).col(0);
    out.q1 = forward(model.head1, head_input(model, z, nbrs.ybar1)).col(0);
    out.g = forward(model.propensity, z).col(0).unaryExpr(&clip_propensity);
    return out;
}

ModelOutputs predict(const DragonnetModel& model, const Matrix& x_raw,
                     bool self_exclusion) {
    if (!model.trained)
        throw ContractError("predict: model has not been trained");
    const Matrix x = model.standardize_covariates
                         ? model.x_transform.apply(x_raw)
                         : x_raw;
    NeighborAverages nbrs;
    if (model.variant == Variant::Modified)
        nbrs = neighbor_averages(x, model.ref_x, model.ref_t, model.ref_y,
                                 model.k, model.metric, self_exclusion);
    ModelOutputs out = predict_std(model, x, nbrs);
    out.q0 = (out.q0.array() * model.y_std + model.y_mean).matrix();
    out.q1 = (out.q1.array() * model.y_std + model.y_mean).matrix();
    return out;
}

double base_loss(const ModelOutputs& out, const Vector& t, const Vector& y,
                 double alpha) {
    const Eigen::Index n = t.size();
    if (out.q0.size() != n || out.q1.size() != n || out.g.size() != n ||
        y.size() != n)
        throw ValidationError("base_loss: length mismatch");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double g = out.g[i];
        if (g <= 0.0 || g >= 1.0)
            throw ValidationError("base_loss: propensity outside (0,1)");
        const double q = t[i] == 1.0 ? out.q1[i] : out.q0[i];
        const double ce = -t[i] * std::log(g) - (1.0 - t[i]) * std::log(1.0 - g);
        acc += (q - y[i]) * (q - y[i]) + alpha * ce;
    }
    return acc / static_cast<double>(n);
}

TregTerm targeted_regularizer(const ModelOutputs& out, const Vector& t,
                              const Vector& y, double epsilon) {
    const Eigen::Index n = t.size();
    TregTerm res;
    res.q_tilde.resize(n);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double g = out.g[i];
        const double q = t[i] == 1.0 ? out.q1[i] : out.q0[i];
        const double h = t[i] / g - (1.0 - t[i]) / (1.0 - g);
        res.q_tilde[i] = q + epsilon * h;
        const double r = y[i] - res.q_tilde[i];
        acc += r * r;
    }
    res.value = acc / static_cast<double>(n);
    return res;
}

double full_loss(const DragonnetModel& model, const Matrix& x,
                 const NeighborAverages& nbrs, const Vector& t, const Vector& y) {
    const ModelOutputs out = predict_std(model, x, nbrs);
    double loss = base_loss(out, t, y, model.alpha);
    if (model.beta > 0.0)
        loss += model.beta * targeted_regularizer(out, t, y, model.epsilon).value;
    loss += model.representation.l2_penalty() + model.head0.l2_penalty() +
            model.head1.l2_penalty() + model.propensity.l2_penalty();
    return loss;
}

double loss_and_gradients(const DragonnetModel& model, const Matrix& x,
                          const NeighborAverages& nbrs, const Vector& t,
                          const Vector& y, Vector& grad) {
    const Eigen::Index n = x.rows();
    if (t.size() != n || y.size() != n)
        throw ValidationError("loss_and_gradients: length mismatch");
    const double inv_n = 1.0 / static_cast<double>(n);

    ForwardCache rep_cache, h0_cache, h1_cache, prop_cache;
    const Matrix z = forward(model.representation, x, &rep_cache);
    const Matrix in0 = head_input(model, z, nbrs.ybar0);
    const Matrix in1 = head_input(model, z, nbrs.ybar1);
    const Vector q0 = forward(model.head0, in0, &h0_cache).col(0);
    const Vector q1 = forward(model.head1, in1, &h1_cache).col(0);
    const Vector g_raw = forward(model.propensity, z, &prop_cache).col(0);

    ModelOutputs out;
    out.q0 = q0;
    out.q1 = q1;
    out.g = g_raw.unaryExpr(&clip_propensity);

    double loss = base_loss(out, t, y, model.alpha);
    const TregTerm treg = targeted_regularizer(out, t, y, model.epsilon);
    if (model.beta > 0.0) loss += model.beta * treg.value;
    loss += model.representation.l2_penalty() + model.head0.l2_penalty() +
            model.head1.l2_penalty() + model.propensity.l2_penalty();

    Matrix dq0 = Matrix::Zero(n, 1);
    Matrix dq1 = Matrix::Zero(n, 1);
    Matrix dg = Matrix::Zero(n, 1);
    double deps = 0.0;

    for (Eigen::Index i = 0; i < n; ++i) {
        const double g = out.g[i];
        const bool clipped = g_raw[i] < kPropensityClip ||
                             g_raw[i] > 1.0 - kPropensityClip;
        const double q = t[i] == 1.0 ? q1[i] : q0[i];
        const double resid_treg = y[i] - treg.q_tilde[i];
        const double h = t[i] / g - (1.0 - t[i]) / (1.0 - g);

        double dq = 2.0 * (q - y[i]) * inv_n;
        if (model.beta > 0.0) dq += -2.0 * model.beta * resid_treg * inv_n;
        (t[i] == 1.0 ? dq1 : dq0)(i, 0) = dq;

        if (!clipped) {
            double d = model.alpha * (-t[i] / g + (1.0 - t[i]) / (1.0 - g)) * inv_n;
            if (model.beta > 0.0) {
                const double dh_dg =
                    -t[i] / (g * g) - (1.0 - t[i]) / ((1.0 - g) * (1.0 - g));
                d += -2.0 * model.beta * resid_treg * model.epsilon * dh_dg * inv_n;
            }
            dg(i, 0) = d;
        }
        if (model.beta > 0.0) deps += -2.0 * model.beta * resid_treg * h * inv_n;
    }

    NetworkGrads g_rep = NetworkGrads::zeros_like(model.representation);
    NetworkGrads g_h0 = NetworkGrads::zeros_like(model.head0);
    NetworkGrads g_h1 = NetworkGrads::zeros_like(model.head1);
    NetworkGrads g_prop = NetworkGrads::zeros_like(model.propensity);

    const Eigen::Index p = z.cols();
    Matrix dz = Matrix::Zero(n, p);
    dz += backward(model.head0, h0_cache, dq0, g_h0).leftCols(p);
    dz += backward(model.head1, h1_cache, dq1, g_h1).leftCols(p);
    dz += backward(model.propensity, prop_cache, dg, g_prop);
    backward(model.representation, rep_cache, dz, g_rep);

    grad.resize(model.param_count());
    Eigen::Index off = 0;
    for (const NetworkGrads* ng : {&g_rep, &g_h0, &g_h1, &g_prop}) {
        const Vector flat = pack_grads(*ng);
        grad.segment(off, flat.size()) = flat;
        off += flat.size();
    }
    grad[off] = deps;
    return loss;
}

DragonnetModel train(const Dataset& data, const TrainConfig& cfg, TrainLog* log) {
    cfg.validate();
    data.validate();

    if (cfg.variant == Variant::Modified) {
        const Eigen::Index treated = data.count_treated();
        const Eigen::Index control = data.n() - treated;
        if (treated < cfg.k + 1) throw GroupTooSmallError(1, treated, cfg.k + 1);
        if (control < cfg.k + 1) throw GroupTooSmallError(0, control, cfg.k + 1);
    }

    std::uint64_t seed_state = cfg.seed;
    const std::uint64_t split_seed = mix_seed(seed_state);
    const std::uint64_t init_seed = mix_seed(seed_state);
    const std::uint64_t shuffle_seed = mix_seed(seed_state);

    const Split split = split_dataset(data, cfg.validation_fraction, 0.0, split_seed);
    const Dataset tr = data.subset(split.train_idx);
    const Dataset va = data.subset(split.val_idx);

    TrainConfig init_cfg = cfg;
    init_cfg.seed = init_seed;
    DragonnetModel model = init_model(data.d(), init_cfg);

    if (cfg.standardize_covariates)
        model.x_transform = Standardizer::fit(tr.X);
    const Matrix xtr = cfg.standardize_covariates ? model.x_transform.apply(tr.X) : tr.X;
    const Matrix xva = cfg.standardize_covariates ? model.x_transform.apply(va.X) : va.X;

    model.y_mean = tr.y.mean();
    {
        const double var = (tr.y.array() - model.y_mean).square().sum() /
                           static_cast<double>(tr.y.size());
        model.y_std = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    const Vector ytr = (tr.y.array() - model.y_mean) / model.y_std;
    const Vector yva = (va.y.array() - model.y_mean) / model.y_std;

    NeighborAverages nbrs_tr, nbrs_va;
    if (cfg.variant == Variant::Modified) {
        nbrs_tr = neighbor_averages(xtr, xtr, tr.t, ytr, cfg.k, cfg.metric, true);
        nbrs_va = neighbor_averages(xva, xtr, tr.t, ytr, cfg.k, cfg.metric, false);
    }

    Vector params = model.pack();
    SgdMomentum opt;
    opt.learning_rate = cfg.learning_rate;
    opt.momentum = cfg.momentum;

    double best_val = full_loss(model, xva, nbrs_va, va.t, yva);
    Vector best_params = params;
    int best_epoch = 0;
    int stall = 0;

    std::mt19937_64 shuffle_rng(shuffle_seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(tr.n()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    Vector grad;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            std::vector<Eigen::Index> batch(order.begin() + static_cast<long>(start),
                                            order.begin() + static_cast<long>(stop));
            Matrix xb(static_cast<Eigen::Index>(batch.size()), xtr.cols());
            Vector tb(static_cast<Eigen::Index>(batch.size()));
            Vector yb(static_cast<Eigen::Index>(batch.size()));
            for (std::size_t i = 0; i < batch.size(); ++i) {
                xb.row(static_cast<Eigen::Index>(i)) = xtr.row(batch[i]);
                tb[static_cast<Eigen::Index>(i)] = tr.t[batch[i]];
                yb[static_cast<Eigen::Index>(i)] = ytr[batch[i]];
            }
            const NeighborAverages nb = cfg.variant == Variant::Modified
                                            ? slice_neighbors(nbrs_tr, batch)
                                            : NeighborAverages{};
            const double loss = loss_and_gradients(model, xb, nb, tb, yb, grad);
            if (!std::isfinite(loss))
                throw DivergenceError(epoch, cfg.learning_rate);
            opt.step(params, grad);
            model.unpack(params);
        }

        const double train_loss = full_loss(model, xtr, nbrs_tr, tr.t, ytr);
        const double val_loss = full_loss(model, xva, nbrs_va, va.t, yva);
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw DivergenceError(epoch, cfg.learning_rate);
        if (log) {
            log->train_loss.push_back(train_loss);
            log->val_loss.push_back(val_loss);
        }
        if (val_loss < best_val) {
            best_val = val_loss;
            best_params = params;
            best_epoch = epoch;
            stall = 0;
        } else if (++stall >= cfg.patience) {
            break;
        }
    }

    model.unpack(best_params);
    model.ref_x = xtr;
    model.ref_t = tr.t;
    model.ref_y = ytr;
    model.trained = true;
    if (log) {
        log->best_epoch = best_epoch;
        log->best_val_loss = best_val;
    }
    return model;
}

// ---------------------------------------------------------------------------
// snapshot serialization (hexfloat text, bit-exact round trip)

namespace {

void put_hex(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    os << buf;
}

double read_hex(std::istream& is, const std::string& path) {
    std::string tok;
    if (!(is >> tok)) throw ParseError(path, 0, "unexpected end of snapshot");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError(path, 0, "bad numeric token '" + tok + "'");
    return v;
}

std::string expect_token(std::istream& is, const std::string& path) {
    std::string tok;
    if (!(is >> tok)) throw ParseError(path, 0, "unexpected end of snapshot");
    return tok;
}

const char* activation_token(Activation a) {
    switch (a) {
        case Activation::Elu: return "elu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Linear: return "linear";
    }
    return "?";
}

Activation parse_activation(const std::string& s, const std::string& path) {
    if (s == "elu") return Activation::Elu;
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "linear") return Activation::Linear;
    throw ParseError(path, 0, "unknown activation '" + s + "'");
}

void write_network(std::ostream& os, const std::string& name, const Network& net) {
    os << "net " << name << " " << net.layers.size() << "\n";
    for (const auto& l : net.layers) {
        os << "layer " << l.out_dim() << " " << l.in_dim() << " "
           << activation_token(l.activation) << " ";
        put_hex(os, l.l2);
        os << "\n";
        for (Eigen::Index r = 0; r < l.out_dim(); ++r) {
            for (Eigen::Index c = 0; c < l.in_dim(); ++c) {
                put_hex(os, l.weights(r, c));
                os << (c + 1 == l.in_dim() ? '\n' : ' ');
            }
        }
        for (Eigen::Index r = 0; r < l.out_dim(); ++r) {
            put_hex(os, l.bias[r]);
            os << (r + 1 == l.out_dim() ? '\n' : ' ');
        }
    }
}

Network read_network(std::istream& is, const std::string& name,
                     const std::string& path) {
    if (expect_token(is, path) != "net" || expect_token(is, path) != name)
        throw ParseError(path, 0, "expected network '" + name + "'");
    const std::size_t nlayers = std::stoul(expect_token(is, path));
    Network net;
    for (std::size_t li = 0; li < nlayers; ++li) {
        if (expect_token(is, path) != "layer")
            throw ParseError(path, 0, "expected layer record");
        const Eigen::Index out = std::stol(expect_token(is, path));
        const Eigen::Index in = std::stol(expect_token(is, path));
        DenseLayer l;
        l.activation = parse_activation(expect_token(is, path), path);
        l.l2 = read_hex(is, path);
        l.weights.resize(out, in);
        for (Eigen::Index r = 0; r < out; ++r)
            for (Eigen::Index c = 0; c < in; ++c)
                l.weights(r, c) = read_hex(is, path);
        l.bias.resize(out);
        for (Eigen::Index r = 0; r < out; ++r) l.bias[r] = read_hex(is, path);
        net.layers.push_back(std::move(l));
    }
    return net;
}

}  // namespace

void save_model(const DragonnetModel& model, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    os << "dragonnet-snapshot 1\n";
    os << "variant " << variant_name(model.variant) << "\n";
    os << "metric " << metric_name(model.metric) << "\n";
    os << "k " << model.k << "\n";
    for (auto [name, v] : {std::pair<const char*, double>{"alpha", model.alpha},
                           {"beta", model.beta},
                           {"epsilon", model.epsilon},
                           {"y_mean", model.y_mean},
                           {"y_std", model.y_std}}) {
        os << name << " ";
        put_hex(os, v);
        os << "\n";
    }
    os << "standardize_x " << (model.standardize_covariates ? 1 : 0) << "\n";
    const Eigen::Index d = model.standardize_covariates ? model.x_transform.mean.size() : 0;
    os << "x_transform " << d << "\n";
    for (Eigen::Index j = 0; j < d; ++j) {
        put_hex(os, model.x_transform.mean[j]);
        os << " ";
        put_hex(os, model.x_transform.std[j]);
        os << "\n";
    }
    write_network(os, "representation", model.representation);
    write_network(os, "head0", model.head0);
    write_network(os, "head1", model.head1);
    write_network(os, "propensity", model.propensity);
    os << "ref " << model.ref_x.rows() << " " << model.ref_x.cols() << "\n";
    for (Eigen::Index i = 0; i < model.ref_x.rows(); ++i) {
        for (Eigen::Index j = 0; j < model.ref_x.cols(); ++j) {
            put_hex(os, model.ref_x(i, j));
            os << " ";
        }
        put_hex(os, model.ref_t[i]);
        os << " ";
        put_hex(os, model.ref_y[i]);
        os << "\n";
    }
    os << "trained " << (model.trained ? 1 : 0) << "\n";
    if (!os) throw IoError("write failed for " + path);
}

DragonnetModel load_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    if (expect_token(is, path) != "dragonnet-snapshot" ||
        expect_token(is, path) != "1")
        throw ParseError(path, 0, "not a dragonnet snapshot");

    DragonnetModel m;
    auto expect_key = [&](const char* key) {
        if (expect_token(is, path) != key)
            throw ParseError(path, 0, std::string("expected key '") + key + "'");
    };
    expect_key("variant");
    {
        const std::string v = expect_token(is, path);
        if (v == "modified") m.variant = Variant::Modified;
        else if (v == "baseline") m.variant = Variant::Baseline;
        else throw ParseError(path, 0, "unknown variant '" + v + "'");
    }
    expect_key("metric");
    {
        const std::string v = expect_token(is, path);
        if (v == "manhattan") m.metric = DistanceMetric::Manhattan;
        else if (v == "euclidean") m.metric = DistanceMetric::Euclidean;
        else if (v == "chebyshev") m.metric = DistanceMetric::Chebyshev;
        else throw ParseError(path, 0, "unknown metric '" + v + "'");
    }
    expect_key("k");
    m.k = std::stoi(expect_token(is, path));
    expect_key("alpha");
    m.alpha = read_hex(is, path);
    expect_key("beta");
    m.beta = read_hex(is, path);
    expect_key("epsilon");
    m.epsilon = read_hex(is, path);
    expect_key("y_mean");
    m.y_mean = read_hex(is, path);
    expect_key("y_std");
    m.y_std = read_hex(is, path);
    expect_key("standardize_x");
    m.standardize_covariates = std::stoi(expect_token(is, path)) != 0;
    expect_key("x_transform");
    const Eigen::Index d = std::stol(expect_token(is, path));
    m.x_transform.mean.resize(d);
    m.x_transform.std.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        m.x_transform.mean[j] = read_hex(is, path);
        m.x_transform.std[j] = read_hex(is, path);
    }
    m.representation = read_network(is, "representation", path);
    m.head0 = read_network(is, "head0", path);
    m.head1 = read_network(is, "head1", path);
    m.propensity = read_network(is, "propensity", path);
    expect_key("ref");
    const Eigen::Index n = std::stol(expect_token(is, path));
    const Eigen::Index rd = std::stol(expect_token(is, path));
    m.ref_x.resize(n, rd);
    m.ref_t.resize(n);
    m.ref_y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < rd; ++j) m.ref_x(i, j) = read_hex(is, path);
        m.ref_t[i] = read_hex(is, path);
        m.ref_y[i] = read_hex(is, path);
    }
    expect_key("trained");
    m.trained = std::stoi(expect_token(is, path)) != 0;
    return m;
}

}  // namespace dragonnet
