#pragma once

#include "spikerate/spike_train.hpp"

namespace spikerate::oracle {

// Shifted-exponential ISI model with refractory period δ and FGM dependence α:
// F(t) = 1 − e^{−λ(t−δ)} for t ≥ δ, joint law of adjacent ISIs given by the
// FGM copula C_α(u, v) = uv(1 + α(1−u)(1−v)). Closed-form ground truth for the
// kernel estimators.
class ExpRefractoryModel {
  public:
    ExpRefractoryModel(double rate, double refractory, double alpha);

    double rate() const { return rate_; }
    double refractory() const { return refractory_; }
    double alpha() const { return alpha_; }

    // Marginal CDF / density / survival of one ISI.
    double cdf(double t) const;
    double density(double t) const;
    double survival(double t) const;

    // Unconditional hazard: 0 for t < δ, λ for t ≥ δ.
    double unconditional_rate(double t) const;

    // f(t|τ) = f(t)·[1 + α(1−2F(τ))(1−2F(t))]; 0 for t ≤ δ.
    // The conditioning value is clamped to the support (τ ≤ δ acts as F(τ) = 0).
    double conditional_density(double t, double tau) const;

    // S(t|τ) = (1−v)(1 − α(1−2u)v) with u = F(τ), v = F(t); 1 for t ≤ δ.
    double conditional_survival(double t, double tau) const;

    // h(t|τ) = f(t|τ)/S(t|τ) in closed form; 0 for t ≤ δ.
    double conditional_hazard(double t, double tau) const;

    // Piecewise conditional intensity λ*(t) along a spike train: the
    // unconditional hazard on the first ISI, then h(t − l_{i−1} | T_{i−1}).
    // Requires 0 < t ≤ horizon.
    double conditional_intensity(double t, const core::SpikeTrain& spikes) const;

    // (λ/(λδ+1), λ e^{λδ} E1(λδ)): the closed-form mean firing rate and the
    // instantaneous mean rate E[1/T]. The second diverges at δ = 0.
    std::pair<double, double> example1_rates() const;

  private:
    double rate_, refractory_, alpha_;
};

} // namespace spikerate::oracle
