#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spikerate/spike_train.hpp"

namespace spikerate::gen {

// FGM-copula Markov chain of shifted-exponential ISIs.
struct FgmExpParams {
    double rate = 1.0;       // λ > 0
    double refractory = 0.0; // δ ≥ 0
    double alpha = 0.0;      // copula dependence, |α| ≤ 1
    std::uint64_t seed = 0;
};

// Two-compartment stochastic neuron (dendritic X1, somatic X2 with threshold/reset).
struct TwoCompartmentParams {
    double leak = 0.05;     // α > 0
    double coupling = 0.5;  // α_r > 0
    double drift = 4.0;     // μ
    double noise = 1.0;     // σ > 0
    double threshold = 10.0; // S > 0
    double dt = 0.01;       // requires dt ≤ 0.1/(α + 2α_r) for Euler stability
    std::uint64_t burn_in = 100; // leading ISIs discarded
    std::uint64_t max_steps = 100000000ull; // total step budget per call
    std::uint64_t seed = 0;
};

struct Trajectory {
    std::vector<double> time;
    std::vector<double> x1;
    std::vector<double> x2; // reset value recorded at spike rows, so x2 < S throughout
    std::vector<double> spike_epochs;
};

// n i.i.d. exponential(rate) ISIs, deterministic given seed.
core::IsiSequence gen_poisson(std::size_t n, double rate, std::uint64_t seed);

// T_1 from the shifted-exponential marginal; T_i | T_{i−1} by analytic inversion
// of the FGM conditional CDF. Every ISI > δ.
core::IsiSequence gen_fgm_exponential(std::size_t n, const FgmExpParams& params);

// Euler–Maruyama simulation until burn_in + n_spikes ISIs are produced;
// returns the last n_spikes. Trajectory recorded only when requested.
std::pair<core::IsiSequence, std::optional<Trajectory>>
gen_two_compartment(const TwoCompartmentParams& params, std::size_t n_spikes,
                    bool record_trajectory = false);

// Fixed-length simulation that never requires a spike (e.g. sub-threshold runs).
Trajectory simulate_trajectory(const TwoCompartmentParams& params, std::uint64_t n_steps);

} // namespace spikerate::gen
