#include "mff/net.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "mff/errors.hpp"

namespace mff {

namespace {

double activate(Activation act, double z) {
    return act == Activation::Tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

// Derivative expressed through the cached pre-activation z and output a:
// tanh'(z) = 1 - a^2, relu'(z) = [z > 0].
double activate_grad(Activation act, double z, double a) {
    return act == Activation::Tanh ? 1.0 - a * a : (z > 0.0 ? 1.0 : 0.0);
}

// y = W x + b for a row-major (rows x cols) matrix.
std::vector<double> affine(const std::vector<double>& w, const std::vector<double>& b,
                           std::span<const double> x, std::size_t rows, std::size_t cols) {
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* row = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

// Uniform in [0, 1) built from the top 53 bits of the generator output, so the
// stream is identical across platforms for a given seed.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    throw Error("UnknownActivation", "unknown activation '" + name + "' (expected tanh or relu)");
}

std::string activation_name(Activation act) {
    return act == Activation::Tanh ? "tanh" : "relu";
}

void Gradients::add(const Gradients& other) {
    auto add_vec = [](std::vector<double>& dst, const std::vector<double>& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    };
    add_vec(w1, other.w1);
    add_vec(b1, other.b1);
    add_vec(w2, other.w2);
    add_vec(b2, other.b2);
    add_vec(w3, other.w3);
    add_vec(b3, other.b3);
}

void Gradients::scale(double factor) {
    for (auto* vec : {&w1, &b1, &w2, &b2, &w3, &b3}) {
        for (double& v : *vec) v *= factor;
    }
}

std::vector<double> Gradients::flatten() const {
    std::vector<double> flat;
    flat.reserve(w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size());
    for (const auto* vec : {&w1, &b1, &w2, &b2, &w3, &b3}) {
        flat.insert(flat.end(), vec->begin(), vec->end());
    }
    return flat;
}

MlpModel::MlpModel(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
                   Activation activation)
    : input_dim_(input_dim), hidden1_(hidden1), hidden2_(hidden2), activation_(activation) {
    if (input_dim == 0 || hidden1 == 0 || hidden2 == 0) {
        throw Error("ShapeMismatch", "all layer sizes must be at least 1");
    }
    w1_.assign(hidden1_ * input_dim_, 0.0);
    b1_.assign(hidden1_, 0.0);
    w2_.assign(hidden2_ * hidden1_, 0.0);
    b2_.assign(hidden2_, 0.0);
    w3_.assign(hidden2_, 0.0);
    b3_.assign(1, 0.0);
}

MlpModel MlpModel::random_init(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
                               Activation activation, std::uint64_t seed) {
    MlpModel model(input_dim, hidden1, hidden2, activation);
    std::mt19937_64 rng(seed);
    auto fill = [&rng](std::vector<double>& w, std::size_t fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : w) v = (2.0 * next_uniform(rng) - 1.0) * bound;
    };
    fill(model.w1_, input_dim);
    fill(model.w2_, hidden1);
    fill(model.w3_, hidden2);
    return model;
}

double MlpModel::forward(std::span<const double> x, ForwardCache* cache) const {
    if (x.size() != input_dim_) {
        throw Error("ShapeMismatch", "input has " + std::to_string(x.size()) +
                                         " components, model expects " + std::to_string(input_dim_));
    }

    std::vector<double> z1 = affine(w1_, b1_, x, hidden1_, input_dim_);
    std::vector<double> a1(hidden1_);
    for (std::size_t i = 0; i < hidden1_; ++i) a1[i] = activate(activation_, z1[i]);

    std::vector<double> z2 = affine(w2_, b2_, a1, hidden2_, hidden1_);
    std::vector<double> a2(hidden2_);
    for (std::size_t i = 0; i < hidden2_; ++i) a2[i] = activate(activation_, z2[i]);

    double out = b3_[0];
    for (std::size_t i = 0; i < hidden2_; ++i) out += w3_[i] * a2[i];

    if (cache) {
        cache->input.assign(x.begin(), x.end());
        cache->z1 = std::move(z1);
        cache->a1 = std::move(a1);
        cache->z2 = std::move(z2);
        cache->a2 = std::move(a2);
        cache->output = out;
    }
    return out;
}

Gradients MlpModel::backward(const ForwardCache& cache, double target) const {
    if (cache.input.size() != input_dim_ || cache.a1.size() != hidden1_ ||
        cache.a2.size() != hidden2_) {
        throw Error("ShapeMismatch", "forward cache does not match the model shape");
    }

    Gradients g = zero_gradients();
    const double d_out = 2.0 * (cache.output - target);

    g.b3[0] = d_out;
    std::vector<double> d_z2(hidden2_);
    for (std::size_t i = 0; i < hidden2_; ++i) {
        g.w3[i] = d_out * cache.a2[i];
        d_z2[i] = d_out * w3_[i] * activate_grad(activation_, cache.z2[i], cache.a2[i]);
    }

    std::vector<double> d_z1(hidden1_, 0.0);
    for (std::size_t i = 0; i < hidden2_; ++i) {
        g.b2[i] = d_z2[i];
        for (std::size_t j = 0; j < hidden1_; ++j) {
            g.w2[i * hidden1_ + j] = d_z2[i] * cache.a1[j];
            d_z1[j] += d_z2[i] * w2_[i * hidden1_ + j];
        }
    }
    for (std::size_t j = 0; j < hidden1_; ++j) {
        d_z1[j] *= activate_grad(activation_, cache.z1[j], cache.a1[j]);
    }

    for (std::size_t j = 0; j < hidden1_; ++j) {
        g.b1[j] = d_z1[j];
        for (std::size_t k = 0; k < input_dim_; ++k) {
            g.w1[j * input_dim_ + k] = d_z1[j] * cache.input[k];
        }
    }
    return g;
}

Gradients MlpModel::zero_gradients() const {
    Gradients g;
    g.w1.assign(w1_.size(), 0.0);
    g.b1.assign(b1_.size(), 0.0);
    g.w2.assign(w2_.size(), 0.0);
    g.b2.assign(b2_.size(), 0.0);
    g.w3.assign(w3_.size(), 0.0);
    g.b3.assign(b3_.size(), 0.0);
    return g;
}

std::size_t MlpModel::parameter_count() const noexcept {
    return w1_.size() + b1_.size() + w2_.size() + b2_.size() + w3_.size() + b3_.size();
}

std::vector<double> MlpModel::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto* vec : {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_}) {
        flat.insert(flat.end(), vec->begin(), vec->end());
    }
    return flat;
}

void MlpModel::unflatten(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw Error("ShapeMismatch", "flat parameter vector has " + std::to_string(flat.size()) +
                                         " entries, model needs " +
                                         std::to_string(parameter_count()));
    }
    std::size_t offset = 0;
    for (auto* vec : {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_}) {
        for (double& v : *vec) v = flat[offset++];
    }
}

bool MlpModel::same_parameters(const MlpModel& other) const {
    return input_dim_ == other.input_dim_ && hidden1_ == other.hidden1_ &&
           hidden2_ == other.hidden2_ && activation_ == other.activation_ && w1_ == other.w1_ &&
           b1_ == other.b1_ && w2_ == other.w2_ && b2_ == other.b2_ && w3_ == other.w3_ &&
           b3_ == other.b3_;
}

void MlpModel::set_parameters(std::vector<double> w1, std::vector<double> b1,
                              std::vector<double> w2, std::vector<double> b2,
                              std::vector<double> w3, std::vector<double> b3) {
    if (w1.size() != w1_.size() || b1.size() != b1_.size() || w2.size() != w2_.size() ||
        b2.size() != b2_.size() || w3.size() != w3_.size() || b3.size() != b3_.size()) {
        throw Error("ShapeMismatch", "parameter arrays do not match the declared layer sizes");
    }
    w1_ = std::move(w1);
    b1_ = std::move(b1);
    w2_ = std::move(w2);
    b2_ = std::move(b2);
    w3_ = std::move(w3);
    b3_ = std::move(b3);
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.empty()) throw Error("EmptyInput", "MSE of zero predictions is undefined");
    if (predictions.size() != targets.size()) {
        throw Error("LengthMismatch", "prediction count " + std::to_string(predictions.size()) +
                                          " does not match target count " +
                                          std::to_string(targets.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - targets[i];
        sum += d * d;
    }
    return sum / static_cast<double>(predictions.size());
}

}  // namespace mff
