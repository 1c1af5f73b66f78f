// Serial-vs-parallel benchmark for the two OpenMP-parallel stages: intensity
// path evaluation and the copula bootstrap. Also asserts the bitwise-equality
// contract between the two execution policies.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <utility>
#include <vector>

#include "spikerate/estimator.hpp"
#include "spikerate/generators.hpp"
#include "spikerate/parallel.hpp"
#include "spikerate/rng.hpp"
#include "spikerate/spike_train.hpp"
#include "spikerate/validation.hpp"

using namespace spikerate;

namespace {

template <class F>
double best_seconds(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

void report(const char* label, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s\n",
                label, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                identical ? "bitwise-identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000;
    std::printf("threads available: %d, ISI sample size: %zu\n", max_threads(), n);

    gen::FgmExpParams p;
    p.rate = 1.0;
    p.refractory = 0.5;
    p.alpha = 1.0;
    p.seed = 12;
    const auto isis = gen::gen_fgm_exponential(n, p);
    const auto train = core::to_spike_train(isis);
    const auto fit = est::FittedEstimator::fit(isis, {});

    // Intensity path: one conditional-hazard curve per ISI segment.
    std::optional<est::IntensityPath> serial_path, parallel_path;
    const double t_serial = best_seconds(3, [&] {
        serial_path = fit.conditional_intensity_path(train, 0.01, Exec::serial);
    });
    const double t_parallel = best_seconds(3, [&] {
        parallel_path = fit.conditional_intensity_path(train, 0.01, Exec::parallel);
    });
    bool same = serial_path->segment_count() == parallel_path->segment_count();
    for (std::size_t i = 0; same && i < serial_path->segment_count(); ++i) {
        same = serial_path->segments()[i].values == parallel_path->segments()[i].values &&
               serial_path->segments()[i].offsets == parallel_path->segments()[i].offsets;
    }
    report("intensity path", t_serial, t_parallel, same);

    // Copula bootstrap: one CvM replicate per derived stream.
    auto g = rng::derive_stream(99, 1);
    std::vector<double> chain(n);
    for (auto& x : chain) x = g.uniform_open01();
    std::vector<std::pair<double, double>> pairs(chain.size() - 1);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) pairs[i] = {chain[i], chain[i + 1]};

    val::TestResult serial_res, parallel_res;
    const double b_serial = best_seconds(3, [&] {
        serial_res = val::copula_gof_independence(
            pairs, 2000, 7, val::PairStructure::adjacent_chain, Exec::serial);
    });
    const double b_parallel = best_seconds(3, [&] {
        parallel_res = val::copula_gof_independence(
            pairs, 2000, 7, val::PairStructure::adjacent_chain, Exec::parallel);
    });
    report("copula bootstrap (B=2000)", b_serial, b_parallel,
           serial_res.statistic == parallel_res.statistic &&
               serial_res.p_value == parallel_res.p_value);
    return 0;
}
