#include "dragonnet/nn.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "dragonnet/errors.hpp"

namespace dragonnet {

double apply_activation(Activation act, double x) {
    switch (act) {
        case Activation::Elu: return x > 0.0 ? x : std::expm1(x);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Activation::Linear: return x;
    }
    return x;
}

double activation_derivative(Activation act, double pre) {
    switch (act) {
        case Activation::Elu: return pre > 0.0 ? 1.0 : std::exp(pre);
        case Activation::Sigmoid: {
            const double s = 1.0 / (1.0 + std::exp(-pre));
            return s * (1.0 - s);
        }
        case Activation::Linear: return 1.0;
    }
    return 1.0;
}

Eigen::Index Network::input_dim() const {
    return layers.empty() ? 0 : layers.front().in_dim();
}

Eigen::Index Network::output_dim() const {
    return layers.empty() ? 0 : layers.back().out_dim();
}

double Network::l2_penalty() const {
    double p = 0.0;
    for (const auto& l : layers)
        if (l.l2 > 0.0) p += l.l2 * l.weights.squaredNorm();
    return p;
}

Eigen::Index Network::param_count() const {
    Eigen::Index n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
}

Network init_network(const std::vector<LayerSpec>& spec, std::uint64_t seed) {
    Network net;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto& s = spec[i];
        if (s.in_dim <= 0 || s.out_dim <= 0) {
            std::ostringstream os;
            os << "layer " << i << ": dimensions must be positive, got "
               << s.in_dim << " -> " << s.out_dim;
            throw ValidationError(os.str());
        }
        if (s.l2 < 0.0)
            throw ValidationError("l2 coefficient must be nonnegative");
        if (i > 0 && spec[i - 1].out_dim != s.in_dim) {
            std::ostringstream os;
            os << "layer " << i << ": in_dim " << s.in_dim
               << " does not match previous out_dim " << spec[i - 1].out_dim;
            throw ShapeError(os.str());
        }
        DenseLayer layer;
        const double bound = std::sqrt(6.0 / static_cast<double>(s.in_dim + s.out_dim));
        std::uniform_real_distribution<double> dist(-bound, bound);
        layer.weights.resize(s.out_dim, s.in_dim);
        for (Eigen::Index r = 0; r < s.out_dim; ++r)
            for (Eigen::Index c = 0; c < s.in_dim; ++c)
                layer.weights(r, c) = dist(rng);
        layer.bias = Vector::Zero(s.out_dim);
        layer.activation = s.activation;
        layer.l2 = s.l2;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

NetworkGrads NetworkGrads::zeros_like(const Network& net) {
    NetworkGrads g;
    g.weights.reserve(net.layers.size());
    g.bias.reserve(net.layers.size());
    for (const auto& l : net.layers) {
        g.weights.push_back(Matrix::Zero(l.out_dim(), l.in_dim()));
        g.bias.push_back(Vector::Zero(l.out_dim()));
    }
    return g;
}

void NetworkGrads::add_scaled(const NetworkGrads& other, double scale) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] += scale * other.weights[i];
        bias[i] += scale * other.bias[i];
    }
}

Matrix forward(const Network& net, const Matrix& input, ForwardCache* cache) {
    if (net.layers.empty())
        throw ValidationError("forward: network has no layers");
    if (input.cols() != net.input_dim()) {
        std::ostringstream os;
        os << "forward: input has " << input.cols() << " columns, layer 0 expects "
           << net.input_dim();
        throw ShapeError(os.str());
    }
    if (cache) {
        cache->input = input;
        cache->pre.clear();
        cache->post.clear();
        cache->net = &net;
    }
    Matrix act = input;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        const auto& l = net.layers[li];
        if (act.cols() != l.in_dim()) {
            std::ostringstream os;
            os << "forward: layer " << li << " expects " << l.in_dim()
               << " inputs, got " << act.cols();
            throw ShapeError(os.str());
        }
        Matrix pre = (act * l.weights.transpose()).rowwise() + l.bias.transpose();
        Matrix post = pre.unaryExpr([&l](double x) { return apply_activation(l.activation, x); });
        if (cache) {
            cache->pre.push_back(pre);
            cache->post.push_back(post);
        }
        act = std::move(post);
    }
    return act;
}

Matrix backward(const Network& net, const ForwardCache& cache,
                const Matrix& output_grad, NetworkGrads& grads,
                bool include_l2) {
    if (cache.net != &net || cache.pre.size() != net.layers.size())
        throw ContractError("backward: cache does not match this network/forward call");
    if (output_grad.rows() != cache.input.rows() ||
        output_grad.cols() != net.output_dim())
        throw ShapeError("backward: output_grad shape does not match forward output");
    if (grads.weights.size() != net.layers.size())
        throw ContractError("backward: grads not sized for this network");

    Matrix delta = output_grad;
    for (std::size_t li = net.layers.size(); li-- > 0;) {
        const auto& l = net.layers[li];
        // d loss / d pre-activation
        Matrix dpre = delta.array() *
                      cache.pre[li].unaryExpr([&l](double x) {
                          return activation_derivative(l.activation, x);
                      }).array();
        const Matrix& layer_in = (li == 0) ? cache.input : cache.post[li - 1];
        grads.weights[li] += dpre.transpose() * layer_in;
        grads.bias[li] += dpre.colwise().sum().transpose();
        if (include_l2 && l.l2 > 0.0)
            grads.weights[li] += 2.0 * l.l2 * l.weights;
        delta = dpre * l.weights;
    }
    return delta;
}

Vector pack_params(const Network& net) {
    Vector flat(net.param_count());
    Eigen::Index off = 0;
    for (const auto& l : net.layers) {
        flat.segment(off, l.weights.size()) =
            Eigen::Map<const Vector>(l.weights.data(), l.weights.size());
        off += l.weights.size();
        flat.segment(off, l.bias.size()) = l.bias;
        off += l.bias.size();
    }
    return flat;
}

void unpack_params(Network& net, const Vector& flat, Eigen::Index offset) {
    Eigen::Index off = offset;
    if (flat.size() - offset < net.param_count())
        throw ShapeError("unpack_params: flat vector too short");
    for (auto& l : net.layers) {
        Eigen::Map<Vector>(l.weights.data(), l.weights.size()) =
            flat.segment(off, l.weights.size());
        off += l.weights.size();
        l.bias = flat.segment(off, l.bias.size());
        off += l.bias.size();
    }
}

Vector pack_grads(const NetworkGrads& grads) {
    Eigen::Index total = 0;
    for (std::size_t i = 0; i < grads.weights.size(); ++i)
        total += grads.weights[i].size() + grads.bias[i].size();
    Vector flat(total);
    Eigen::Index off = 0;
    for (std::size_t i = 0; i < grads.weights.size(); ++i) {
        flat.segment(off, grads.weights[i].size()) =
            Eigen::Map<const Vector>(grads.weights[i].data(), grads.weights[i].size());
        off += grads.weights[i].size();
        flat.segment(off, grads.bias[i].size()) = grads.bias[i];
        off += grads.bias[i].size();
    }
    return flat;
}

void SgdMomentum::step(Vector& params, const Vector& grads) {
    if (params.size() != grads.size())
        throw ShapeError("sgd step: params and grads differ in size");
    if (!grads.allFinite())
        throw ValidationError("sgd step: non-finite gradient");
    if (velocity.size() == 0)
        velocity = Vector::Zero(params.size());
    else if (velocity.size() != params.size())
        throw ShapeError("sgd step: velocity shape does not mirror params");
    velocity = momentum * velocity - learning_rate * grads;
    params += velocity;
}

}  // namespace dragonnet
