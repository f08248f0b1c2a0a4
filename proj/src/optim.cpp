#include "mff/optim.hpp"

#include <cmath>
#include <string>

#include "mff/errors.hpp"

namespace mff {

AdamState::AdamState(std::size_t parameter_count, AdamConfig config) : config_(config) {
    if (!(config_.beta1 >= 0.0 && config_.beta1 < 1.0) ||
        !(config_.beta2 >= 0.0 && config_.beta2 < 1.0)) {
        throw Error("InvalidArgument", "Adam decay rates must lie in [0, 1)");
    }
    if (!(config_.epsilon > 0.0)) {
        throw Error("InvalidArgument", "Adam epsilon must be positive");
    }
    m_.assign(parameter_count, 0.0);
    v_.assign(parameter_count, 0.0);
}

void AdamState::step(std::span<double> params, std::span<const double> grads, double lr) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw Error("ShapeMismatch", "Adam state holds " + std::to_string(m_.size()) +
                                         " parameters, got " + std::to_string(params.size()) +
                                         " params / " + std::to_string(grads.size()) + " grads");
    }
    if (!(lr > 0.0)) throw Error("InvalidArgument", "learning rate must be positive");
    for (double g : grads) {
        if (!std::isfinite(g)) {
            throw Error("NonFiniteGradient", "gradient contains a non-finite component");
        }
    }

    ++t_;
    beta1_pow_ *= config_.beta1;
    beta2_pow_ *= config_.beta2;
    const double m_correction = 1.0 - beta1_pow_;
    const double v_correction = 1.0 - beta2_pow_;

    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
        v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g * g;
        const double m_hat = m_[i] / m_correction;
        const double v_hat = v_[i] / v_correction;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
}

ClrSchedule::ClrSchedule(double base_lr, double max_lr, std::size_t step_size_up,
                         std::size_t step_size_down)
    : base_lr_(base_lr), max_lr_(max_lr), step_size_up_(step_size_up),
      step_size_down_(step_size_down) {
    if (!(base_lr_ > 0.0)) throw Error("InvalidArgument", "base learning rate must be positive");
    if (max_lr_ < base_lr_) {
        throw Error("InvalidArgument", "max learning rate must be at least the base rate");
    }
    if (step_size_up_ == 0 || step_size_down_ == 0) {
        throw Error("InvalidArgument", "CLR step sizes must be positive");
    }
}

double ClrSchedule::lr_at(std::size_t iteration) const {
    const std::size_t p = iteration % period();
    const double span = max_lr_ - base_lr_;
    if (p < step_size_up_) {
        return base_lr_ + span * static_cast<double>(p) / static_cast<double>(step_size_up_);
    }
    return max_lr_ - span * static_cast<double>(p - step_size_up_) /
                         static_cast<double>(step_size_down_);
}

}  // namespace mff
