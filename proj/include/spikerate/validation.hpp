#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spikerate/estimator.hpp"
#include "spikerate/parallel.hpp"
#include "spikerate/spike_train.hpp"

namespace spikerate::val {

// Rescaled ISIs T̃_i = ∫_{l_{i−1}}^{l_i} λ̂*(u) du (first ISI excluded).
struct RescaledIsis {
    std::vector<double> values;
};

// Z_i = 1 − e^{−T̃_i} in [0, 1).
struct UniformizedIsis {
    std::vector<double> values;
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

struct KendallResult {
    double tau = 0.0;
    double p_value = 1.0;
};

// Trapezoidal integral of the path over each covered ISI; the path must align
// with the train's ISI segments (a gap raises RejectedInput naming it).
RescaledIsis rescale(const core::SpikeTrain& train, const est::IntensityPath& path);

UniformizedIsis uniformize(const RescaledIsis& rescaled);

// One-sample KS against Uniform[0,1]; requires ≥ 10 values.
// P-value from the asymptotic Kolmogorov distribution at √m·D.
TestResult ks_uniformity_test(const UniformizedIsis& z);

// The KS statistic alone (no sample-size gate); sorts a copy.
double ks_statistic(std::vector<double> values);

// Kendall tau-b on paired samples via Knight's O(m log m) algorithm (average-rank
// tie handling); two-sided p from the normal approximation with
// Var(τ) = 2(2m+5)/(9m(m−1)). Requires ≥ 10 pairs.
KendallResult kendall_tau_test(std::span<const double> x, std::span<const double> y);

// Kendall on the adjacent pairs (v_i, v_{i+1}) of one sequence.
KendallResult kendall_adjacent(std::span<const double> values);

// Pseudo-observations rank/(m+1) with average ranks for ties.
std::vector<std::pair<double, double>>
pseudo_observations(std::span<const std::pair<double, double>> pairs);

// Empirical copula of the pseudo-observations at (u, v).
double empirical_copula(std::span<const std::pair<double, double>> pairs, double u,
                        double v);

// Null model used when bootstrapping the independence test: fresh i.i.d.
// uniform pairs, or adjacent pairs of a fresh i.i.d. uniform chain (matching
// how the validation pipeline forms its pairs).
enum class PairStructure { iid_pairs, adjacent_chain };

// Cramér–von Mises statistic S = Σ_i (C_m(U_i, V_i) − U_i V_i)² over
// pseudo-observations (Fenwick-tree dominance counting).
double copula_cvm_statistic(std::span<const std::pair<double, double>> pseudo);

// Independence GoF: parametric bootstrap p-value, deterministic given seed;
// replicate streams are derived by index so the result is independent of
// execution order. Requires ≥ 30 pairs and ≥ 100 replicates.
TestResult copula_gof_independence(std::span<const std::pair<double, double>> pairs,
                                   int n_bootstrap, std::uint64_t seed,
                                   PairStructure structure = PairStructure::iid_pairs,
                                   Exec exec = Exec::parallel);

struct ValidationConfig {
    double level = 0.05;
    int n_bootstrap = 1000;
    std::uint64_t seed = 0;
    double grid_step = 0.01; // path sampling step
    Exec exec = Exec::parallel;
};

struct ValidationReport {
    std::size_t n_rescaled = 0;
    double rescaled_mean = 0.0;
    TestResult uniformity;
    KendallResult kendall;
    TestResult copula;
    bool uniformity_pass = false;
    bool kendall_pass = false;
    bool copula_pass = false;
    double level = 0.05;
    int n_bootstrap = 0;
    std::uint64_t seed = 0;
    std::vector<double> rescaled;
    std::vector<double> uniformized;
};

// Full pipeline: estimated intensity path → rescale → uniformize → the three
// tests. The copula bootstrap simulates uniform chains (adjacent_chain), the
// same pair structure the pipeline tests.
ValidationReport validate(const core::SpikeTrain& train,
                          const est::FittedEstimator& fit,
                          const ValidationConfig& config);

// Same pipeline with a caller-provided path (e.g. a closed-form oracle).
ValidationReport validate_with_path(const core::SpikeTrain& train,
                                    const est::IntensityPath& path,
                                    const ValidationConfig& config);

} // namespace spikerate::val
