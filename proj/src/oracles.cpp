#include "spikerate/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "spikerate/errors.hpp"
#include "spikerate/numerics.hpp"

namespace spikerate::oracle {

ExpRefractoryModel::ExpRefractoryModel(double rate, double refractory, double alpha)
    : rate_(rate), refractory_(refractory), alpha_(alpha) {
    if (!(rate_ > 0.0)) throw RejectedInput("ExpRefractoryModel: rate must be > 0");
    if (!(refractory_ >= 0.0))
        throw RejectedInput("ExpRefractoryModel: refractory must be >= 0");
    if (!(std::abs(alpha_) <= 1.0))
        throw RejectedInput("ExpRefractoryModel: alpha must lie in [-1, 1]");
}

double ExpRefractoryModel::cdf(double t) const {
    if (t <= refractory_) return 0.0;
    return -std::expm1(-rate_ * (t - refractory_));
}

double ExpRefractoryModel::density(double t) const {
    if (t <= refractory_) return 0.0;
    return rate_ * std::exp(-rate_ * (t - refractory_));
}

double ExpRefractoryModel::survival(double t) const {
    if (t <= refractory_) return 1.0;
    return std::exp(-rate_ * (t - refractory_));
}

double ExpRefractoryModel::unconditional_rate(double t) const {
    return t < refractory_ ? 0.0 : rate_;
}

double ExpRefractoryModel::conditional_density(double t, double tau) const {
    if (t <= refractory_) return 0.0;
    const double u = cdf(tau); // 0 for tau <= delta: conditioning clamped to the support edge
    const double v = cdf(t);
    return density(t) * (1.0 + alpha_ * (1.0 - 2.0 * u) * (1.0 - 2.0 * v));
}

double ExpRefractoryModel::conditional_survival(double t, double tau) const {
    if (t <= refractory_) return 1.0;
    const double u = cdf(tau);
    const double v = cdf(t);
    return (1.0 - v) * (1.0 - alpha_ * (1.0 - 2.0 * u) * v);
}

double ExpRefractoryModel::conditional_hazard(double t, double tau) const {
    if (t <= refractory_) return 0.0;
    const double u = cdf(tau);
    const double v = cdf(t);
    const double a = alpha_ * (1.0 - 2.0 * u);
    const double num = density(t) * (1.0 + a * (1.0 - 2.0 * v));
    const double den = (1.0 - v) * (1.0 - a * v);
    return num / den;
}

double ExpRefractoryModel::conditional_intensity(double t,
                                                 const core::SpikeTrain& spikes) const {
    if (!(t > 0.0) || t > spikes.horizon())
        throw RejectedInput("conditional_intensity: t outside (0, horizon]");
    const auto& e = spikes.epochs();
    if (e.empty() || t <= e.front()) return unconditional_rate(t);
    // t lies in (l_j, l_{j+1}] (or past the last spike): condition on the ISI ending at l_j
    const auto it = std::lower_bound(e.begin(), e.end(), t); // first epoch >= t
    const std::size_t j = static_cast<std::size_t>(it - e.begin()) - 1;
    const double l_prev = e[j];
    const double prev_isi = j == 0 ? e[0] : e[j] - e[j - 1];
    return conditional_hazard(t - l_prev, prev_isi);
}

std::pair<double, double> ExpRefractoryModel::example1_rates() const {
    const double firing_rate = rate_ / (rate_ * refractory_ + 1.0);
    if (refractory_ == 0.0)
        throw DivergentQuantity(
            "example1_rates: instantaneous mean rate diverges at refractory = 0");
    const double inst = rate_ * num::expint_e1_scaled(rate_ * refractory_);
    return {firing_rate, inst};
}

} // namespace spikerate::oracle
