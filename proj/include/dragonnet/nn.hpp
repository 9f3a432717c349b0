#ifndef DRAGONNET_NN_HPP
#define DRAGONNET_NN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace dragonnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation { Elu, Sigmoid, Linear };

double apply_activation(Activation act, double x);
double activation_derivative(Activation act, double pre);

// One fully connected layer. Weights are (out_dim x in_dim); a batch of
// inputs is stored row-per-sample, so the layer maps (n x in) -> (n x out).
struct DenseLayer {
    Matrix weights;
    Vector bias;
    Activation activation = Activation::Linear;
    double l2 = 0.0;  // kernel regularizer coefficient, >= 0

    Eigen::Index in_dim() const { return weights.cols(); }
    Eigen::Index out_dim() const { return weights.rows(); }
};

struct Network {
    std::vector<DenseLayer> layers;

    Eigen::Index input_dim() const;
    Eigen::Index output_dim() const;
    // sum_layers l2 * ||W||^2 (biases are not penalized)
    double l2_penalty() const;
    Eigen::Index param_count() const;
};

struct LayerSpec {
    Eigen::Index in_dim;
    Eigen::Index out_dim;
    Activation activation;
    double l2 = 0.0;
};

// Fan-based uniform init: W ~ U(-b, b) with b = sqrt(6/(in+out)), biases zero.
// Deterministic for a given seed.
Network init_network(const std::vector<LayerSpec>& spec, std::uint64_t seed);

// Per-layer pre-activations and activations kept for backward().
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;
    std::vector<Matrix> post;
    const Network* net = nullptr;
};

struct NetworkGrads {
    std::vector<Matrix> weights;
    std::vector<Vector> bias;

    static NetworkGrads zeros_like(const Network& net);
    void add_scaled(const NetworkGrads& other, double scale);
};

// Batch forward pass, rows are samples. When cache is non-null it is filled
// for a later backward() call.
Matrix forward(const Network& net, const Matrix& input, ForwardCache* cache = nullptr);

// Backpropagates output_grad (n x out_dim, d loss / d output) through the
// cached pass. Accumulates parameter gradients into grads and returns the
// input gradient. The L2 penalty contributes 2*l2*W, added once per call.
Matrix backward(const Network& net, const ForwardCache& cache,
                const Matrix& output_grad, NetworkGrads& grads,
                bool include_l2 = true);

// Flat parameter views, used by the optimizer and by gradient checks.
Vector pack_params(const Network& net);
void unpack_params(Network& net, const Vector& flat, Eigen::Index offset = 0);
Vector pack_grads(const NetworkGrads& grads);

// Classical (heavy-ball) momentum: v <- momentum*v - lr*g; p <- p + v.
struct SgdMomentum {
    double learning_rate = 1e-5;
    double momentum = 0.9;
    Vector velocity;  // sized lazily on the first step

    void step(Vector& params, const Vector& grads);
};

}  // namespace dragonnet

#endif
