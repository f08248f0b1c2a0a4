#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mff {

/// Adam hyperparameters (defaults: the standard "good settings").
struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/**
 * @brief Adam optimizer state over a flat parameter vector.
 *
 * Per step: t <- t+1; m <- b1 m + (1-b1) g; v <- b2 v + (1-b2) g^2;
 * bias-corrected m^ = m/(1-b1^t), v^ = v/(1-b2^t);
 * theta <- theta - lr * m^ / (sqrt(v^) + eps).
 */
class AdamState {
public:
    AdamState(std::size_t parameter_count, AdamConfig config = {});

    /// One update in place. Throws ShapeMismatch / NonFiniteGradient.
    void step(std::span<double> params, std::span<const double> grads, double lr);

    std::size_t timestep() const noexcept { return t_; }
    const AdamConfig& config() const noexcept { return config_; }
    const std::vector<double>& first_moment() const noexcept { return m_; }
    const std::vector<double>& second_moment() const noexcept { return v_; }

private:
    AdamConfig config_;
    std::vector<double> m_, v_;
    std::size_t t_ = 0;
    double beta1_pow_ = 1.0;  // beta1^t, kept incrementally
    double beta2_pow_ = 1.0;
};

/**
 * @brief Triangular cyclical learning-rate schedule.
 *
 * lr climbs linearly from base_lr to max_lr over step_size_up iterations,
 * then back down over step_size_down, repeating forever.
 */
class ClrSchedule {
public:
    ClrSchedule(double base_lr, double max_lr, std::size_t step_size_up,
                std::size_t step_size_down);

    double lr_at(std::size_t iteration) const;

    double base_lr() const noexcept { return base_lr_; }
    double max_lr() const noexcept { return max_lr_; }
    std::size_t step_size_up() const noexcept { return step_size_up_; }
    std::size_t step_size_down() const noexcept { return step_size_down_; }
    std::size_t period() const noexcept { return step_size_up_ + step_size_down_; }

private:
    double base_lr_, max_lr_;
    std::size_t step_size_up_, step_size_down_;
};

}  // namespace mff
