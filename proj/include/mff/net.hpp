#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mff {

enum class Activation { Tanh, Relu };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation act);

/// Parameter-shaped gradients of an MLP (same layout as MlpModel).
struct Gradients {
    std::vector<double> w1, b1, w2, b2, w3, b3;

    void add(const Gradients& other);
    void scale(double factor);
    std::vector<double> flatten() const;
};

/// Layer outputs cached by a forward pass, sufficient to run backward.
struct ForwardCache {
    std::vector<double> input;
    std::vector<double> z1, a1;  // hidden layer 1 pre/post activation
    std::vector<double> z2, a2;  // hidden layer 2 pre/post activation
    double output = 0.0;
};

/**
 * @brief Feed-forward perceptron input -> hidden1 -> hidden2 -> scalar output.
 *
 * Hidden layers use the configured activation; the output layer is linear
 * (unbounded regression target). Weight matrices are stored row-major.
 */
class MlpModel {
public:
    MlpModel(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
             Activation activation);

    /**
     * Zero biases, weights uniform in (-1/sqrt(fan_in), 1/sqrt(fan_in)),
     * fully determined by the seed.
     */
    static MlpModel random_init(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
                                Activation activation, std::uint64_t seed);

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t hidden1() const noexcept { return hidden1_; }
    std::size_t hidden2() const noexcept { return hidden2_; }
    Activation activation() const noexcept { return activation_; }

    const std::vector<double>& w1() const noexcept { return w1_; }  // hidden1 x input
    const std::vector<double>& b1() const noexcept { return b1_; }
    const std::vector<double>& w2() const noexcept { return w2_; }  // hidden2 x hidden1
    const std::vector<double>& b2() const noexcept { return b2_; }
    const std::vector<double>& w3() const noexcept { return w3_; }  // 1 x hidden2
    const std::vector<double>& b3() const noexcept { return b3_; }

    /// prediction = W3 * act(W2 * act(W1 x + b1) + b2) + b3
    double forward(std::span<const double> x, ForwardCache* cache = nullptr) const;

    /// Exact gradient of the single-example squared error (prediction - target)^2.
    Gradients backward(const ForwardCache& cache, double target) const;

    Gradients zero_gradients() const;

    std::size_t parameter_count() const noexcept;
    /// Parameters in order w1, b1, w2, b2, w3, b3, matrices row-major.
    std::vector<double> flatten() const;
    void unflatten(std::span<const double> flat);

    bool same_parameters(const MlpModel& other) const;

    /// Direct parameter access for deserialization.
    void set_parameters(std::vector<double> w1, std::vector<double> b1, std::vector<double> w2,
                        std::vector<double> b2, std::vector<double> w3, std::vector<double> b3);

private:
    std::size_t input_dim_, hidden1_, hidden2_;
    Activation activation_;
    std::vector<double> w1_, b1_, w2_, b2_, w3_, b3_;
};

/// Mean over i of (predictions[i] - targets[i])^2.
double mse_loss(std::span<const double> predictions, std::span<const double> targets);

}  // namespace mff
