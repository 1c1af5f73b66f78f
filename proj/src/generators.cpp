#include "spikerate/generators.hpp"

#include <cmath>
#include <string>

#include "spikerate/errors.hpp"
#include "spikerate/rng.hpp"

namespace spikerate::gen {

namespace {

void check_fgm(const FgmExpParams& p) {
    if (!(p.rate > 0.0)) throw RejectedInput("gen_fgm_exponential: rate must be > 0");
    if (!(p.refractory >= 0.0))
        throw RejectedInput("gen_fgm_exponential: refractory must be >= 0");
    if (!(std::abs(p.alpha) <= 1.0))
        throw RejectedInput("gen_fgm_exponential: alpha must lie in [-1, 1]");
}

void check_two_compartment(const TwoCompartmentParams& p) {
    if (!(p.leak > 0.0)) throw RejectedInput("gen_two_compartment: leak must be > 0");
    if (!(p.coupling > 0.0))
        throw RejectedInput("gen_two_compartment: coupling must be > 0");
    if (!(p.noise > 0.0)) throw RejectedInput("gen_two_compartment: noise must be > 0");
    if (!(p.threshold > 0.0))
        throw RejectedInput("gen_two_compartment: threshold must be > 0");
    if (!(p.dt > 0.0)) throw RejectedInput("gen_two_compartment: dt must be > 0");
    const double guard = 0.1 / (p.leak + 2.0 * p.coupling);
    if (p.dt > guard)
        throw RejectedInput("gen_two_compartment: dt too large for stability; require dt <= 0.1/(leak + 2*coupling) = " +
                            std::to_string(guard));
    if (p.max_steps == 0)
        throw RejectedInput("gen_two_compartment: max_steps must be >= 1");
}

// Inverse of the FGM conditional CDF F(v | u) = v + a·v(1−v), a = α(1−2u):
// v solves a·v² − (1+a)·v + p = 0, taking the root continuous in a at 0.
double fgm_conditional_inverse(double p, double u, double alpha) {
    const double a = alpha * (1.0 - 2.0 * u);
    if (std::abs(a) <= 1e-12) return p;
    const double b = 1.0 + a;
    return (b - std::sqrt(b * b - 4.0 * a * p)) / (2.0 * a);
}

} // namespace

core::IsiSequence gen_poisson(std::size_t n, double rate, std::uint64_t seed) {
    if (n == 0) throw RejectedInput("gen_poisson: n must be >= 1");
    if (!(rate > 0.0)) throw RejectedInput("gen_poisson: rate must be > 0");
    rng::Xoshiro256pp gen(seed);
    std::vector<double> isis(n);
    for (auto& t : isis) t = gen.exponential(rate);
    return core::IsiSequence(std::move(isis));
}

core::IsiSequence gen_fgm_exponential(std::size_t n, const FgmExpParams& params) {
    if (n == 0) throw RejectedInput("gen_fgm_exponential: n must be >= 1");
    check_fgm(params);
    rng::Xoshiro256pp gen(params.seed);
    std::vector<double> isis(n);
    double u_prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = gen.uniform_open01();
        const double v = (i == 0) ? p : fgm_conditional_inverse(p, u_prev, params.alpha);
        isis[i] = params.refractory - std::log1p(-v) / params.rate;
        u_prev = v;
    }
    return core::IsiSequence(std::move(isis));
}

std::pair<core::IsiSequence, std::optional<Trajectory>>
gen_two_compartment(const TwoCompartmentParams& params, std::size_t n_spikes,
                    bool record_trajectory) {
    if (n_spikes == 0) throw RejectedInput("gen_two_compartment: n_spikes must be >= 1");
    check_two_compartment(params);

    rng::Xoshiro256pp gen(params.seed);
    const double sqrt_dt = std::sqrt(params.dt);
    // burn_in + n_spikes ISIs need burn_in + n_spikes + 1 spikes
    const std::uint64_t spikes_needed = params.burn_in + n_spikes + 1;

    Trajectory traj;
    std::vector<double> spike_epochs;
    spike_epochs.reserve(spikes_needed);

    double x1 = 0.0, x2 = 0.0, t = 0.0;
    for (std::uint64_t step = 0; step < params.max_steps; ++step) {
        const double d1 = (-params.leak * x1 + params.coupling * (x2 - x1) + params.drift) * params.dt +
                          params.noise * sqrt_dt * gen.normal();
        const double d2 = (-params.leak * x2 + params.coupling * (x1 - x2)) * params.dt;
        x1 += d1;
        x2 += d2;
        t += params.dt;
        if (x2 >= params.threshold) {
            spike_epochs.push_back(t);
            x2 = 0.0; // somatic reset; the dendritic compartment continues
        }
        if (record_trajectory) {
            traj.time.push_back(t);
            traj.x1.push_back(x1);
            traj.x2.push_back(x2);
        }
        if (spike_epochs.size() >= spikes_needed) break;
    }
    if (spike_epochs.size() < spikes_needed)
        throw NonFiringRegime("gen_two_compartment: step budget exhausted before " +
                                  std::to_string(spikes_needed) + " spikes",
                              params.max_steps);

    std::vector<double> isis(n_spikes);
    const std::size_t first = params.burn_in + 1; // ISIs start at the second spike
    for (std::size_t i = 0; i < n_spikes; ++i)
        isis[i] = spike_epochs[first + i] - spike_epochs[first + i - 1];

    std::optional<Trajectory> out_traj;
    if (record_trajectory) {
        traj.spike_epochs = spike_epochs;
        out_traj = std::move(traj);
    }
    return {core::IsiSequence(std::move(isis)), std::move(out_traj)};
}

Trajectory simulate_trajectory(const TwoCompartmentParams& params, std::uint64_t n_steps) {
    check_two_compartment(params);
    rng::Xoshiro256pp gen(params.seed);
    const double sqrt_dt = std::sqrt(params.dt);
    Trajectory traj;
    traj.time.reserve(n_steps);
    traj.x1.reserve(n_steps);
    traj.x2.reserve(n_steps);
    double x1 = 0.0, x2 = 0.0, t = 0.0;
    for (std::uint64_t step = 0; step < n_steps; ++step) {
        const double d1 = (-params.leak * x1 + params.coupling * (x2 - x1) + params.drift) * params.dt +
                          params.noise * sqrt_dt * gen.normal();
        const double d2 = (-params.leak * x2 + params.coupling * (x1 - x2)) * params.dt;
        x1 += d1;
        x2 += d2;
        t += params.dt;
        if (x2 >= params.threshold) {
            traj.spike_epochs.push_back(t);
            x2 = 0.0;
        }
        traj.time.push_back(t);
        traj.x1.push_back(x1);
        traj.x2.push_back(x2);
    }
    return traj;
}

} // namespace spikerate::gen
