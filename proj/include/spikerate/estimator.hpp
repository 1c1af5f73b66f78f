#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "spikerate/parallel.hpp"
#include "spikerate/spike_train.hpp"

namespace spikerate::est {

// Kernel estimator configuration. The Gaussian kernels K1, K2 have standard
// deviation kernel_scale and are evaluated at (x − T_i)/c_n with c_n = n^{−β},
// so the effective smoothing scale is kernel_scale · c_n.
struct EstimatorConfig {
    double kernel_scale = 0.2;       // s > 0
    double bandwidth_exponent = 0.2; // β in (0, 0.25), strict
    double survival_floor = 1e-6;    // ε in (0, 1e-3]
    double eval_step = 0.01;         // trapezoid step for survival integrals
    std::optional<double> domain_cap; // M; defaults to the sample 99th percentile at fit

    void validate() const; // throws RejectedInput naming the violated constraint
};

// One conditional-hazard segment of the estimated intensity path: the curve
// λ̂*(t) = ĥ(t − start | prev_isi) for t in (start, end]. Nodes sit at
// start + k·step plus the exact right endpoint; the k = 0 node carries the
// right-limit value at the segment start (used by trapezoidal rescaling).
struct PathSegment {
    double start = 0.0;
    double end = 0.0;
    double prev_isi = 0.0;
    double step = 0.0;
    std::vector<double> offsets; // 0 = segment start … end − start exactly
    std::vector<double> values;  // λ̂*(start + offset) ≥ 0
};

class IntensityPath {
  public:
    explicit IntensityPath(std::vector<PathSegment> segments);

    const std::vector<PathSegment>& segments() const { return segments_; }
    std::size_t segment_count() const { return segments_.size(); }

    // Trapezoidal integral of one segment (the rescaled ISI for that segment).
    double segment_integral(std::size_t i) const;

    // Flattened (t, λ̂*(t)) rows with t in (l_1, l_n]; segment-start nodes skipped.
    std::vector<std::pair<double, double>> flattened() const;

  private:
    std::vector<PathSegment> segments_;
};

// Immutable fitted kernel estimator over an ISI sample (n ≥ 2).
class FittedEstimator {
  public:
    static FittedEstimator fit(const core::IsiSequence& sample, EstimatorConfig config);

    std::size_t size() const { return sample_.size(); }
    double bandwidth() const { return c_; } // c_n = n^{−β}
    double domain_cap() const { return cap_; }
    const EstimatorConfig& config() const { return config_; }
    const std::vector<double>& sample() const { return sample_; }

    // f̂_n(t) = (1/(n c_n)) Σ K1((t − T_i)/c_n); no domain gate.
    double marginal_density(double t) const;

    // f̂_n(τ, t) = (1/((n−1) c_n²)) Σ K1((τ − T_i)/c_n) K2((t − T_{i+1})/c_n)
    // over the n−1 adjacent pairs; no domain gate.
    double joint_density(double tau, double t) const;

    // f̂_n(τ, t)/f̂_n(τ); denominator underflow-guarded.
    double conditional_density(double tau, double t) const;

    // Ŝ_n(t) = 1 − ∫_0^t f̂_n, trapezoid with eval_step, clamped to [ε, 1].
    // Requires 0 ≤ t ≤ M.
    double survival(double t) const;
    double conditional_survival(double tau, double t) const; // additionally τ ≥ 0

    // ĥ_n = f̂_n / max(Ŝ_n, ε); requires 0 ≤ t ≤ M.
    double hazard(double t) const;
    double conditional_hazard(double tau, double t) const; // additionally τ ≥ 0

    // ĥ(·|τ) on nodes {0, step, 2·step, …, t_max} (exact t_max node appended).
    // Fast batch evaluator shared with path construction; not domain-capped.
    std::pair<std::vector<double>, std::vector<double>>
    conditional_hazard_curve(double tau, double t_max, double report_step) const;

    // λ̂*(t) = ĥ(t − l_{i−1} | T_{i−1}) per ISI segment, i = 2..n (first ISI
    // excluded). Segments are independent and evaluated per the exec policy;
    // values are identical across policies.
    IntensityPath conditional_intensity_path(const core::SpikeTrain& train,
                                             double grid_step,
                                             Exec exec = Exec::parallel) const;

  private:
    FittedEstimator(std::vector<double> sample, EstimatorConfig config, double cap);

    double k1(double distance) const; // Gaussian of sd kernel_scale·c_n, normalized in raw units
    double marginal_full(double t) const;
    // conditional density f̂(·|τ) and survival prefix on the eval grid up to t;
    // returns (density at t, survival at t) with partial last trapezoid.
    std::pair<double, double> cond_density_survival(double tau, double t) const;
    std::pair<double, double> marg_density_survival(double t) const;

    std::vector<double> sample_;
    std::vector<double> sorted_;      // sample, ascending (marginal window lookups)
    std::vector<double> pair_first_;  // T_i ordered by the paired T_{i+1}
    std::vector<double> pair_second_; // T_{i+1}, ascending
    EstimatorConfig config_;
    double c_ = 0.0;
    double sigma_eff_ = 0.0;
    double cap_ = 0.0;
};

// Path sampled from an arbitrary intensity model (closed-form oracles, constant
// paths). The callable receives (local offset x, previous ISI τ, absolute time t)
// and must return λ*(l_{i−1} + x) for the segment conditioned on τ.
IntensityPath
make_sampled_path(const core::SpikeTrain& train, double grid_step,
                  const std::function<double(double, double, double)>& intensity);

} // namespace spikerate::est
