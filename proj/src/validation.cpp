#include "spikerate/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "spikerate/errors.hpp"
#include "spikerate/numerics.hpp"
#include "spikerate/rng.hpp"

namespace spikerate::val {

namespace {

// Average ranks (1-based; ties share the mean rank).
std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t m = values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(m);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && values[order[j + 1]] == values[order[i]]) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

// Merge-sort inversion count (strictly decreasing pairs).
std::uint64_t count_inversions(std::vector<double>& a, std::vector<double>& buf,
                               std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(a, buf, lo, mid) + count_inversions(a, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (a[j] < a[i]) {
            inv += mid - i;
            buf[k++] = a[j++];
        } else {
            buf[k++] = a[i++];
        }
    }
    while (i < mid) buf[k++] = a[i++];
    while (j < hi) buf[k++] = a[j++];
    std::copy(buf.begin() + static_cast<long>(lo), buf.begin() + static_cast<long>(hi),
              a.begin() + static_cast<long>(lo));
    return inv;
}

std::uint64_t tie_pair_count(std::vector<double> sorted_values) {
    std::uint64_t total = 0;
    std::size_t i = 0;
    while (i < sorted_values.size()) {
        std::size_t j = i;
        while (j + 1 < sorted_values.size() && sorted_values[j + 1] == sorted_values[i]) ++j;
        const std::uint64_t c = j - i + 1;
        total += c * (c - 1) / 2;
        i = j + 1;
    }
    return total;
}

struct Fenwick {
    explicit Fenwick(std::size_t n) : tree(n + 1, 0) {}
    void add(std::size_t i) { // 1-based
        for (; i < tree.size(); i += i & (~i + 1)) ++tree[i];
    }
    std::uint64_t prefix(std::size_t i) const { // count of inserted positions <= i
        std::uint64_t s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += tree[i];
        return s;
    }
    std::vector<std::uint64_t> tree;
};

} // namespace

RescaledIsis rescale(const core::SpikeTrain& train, const est::IntensityPath& path) {
    const auto& e = train.epochs();
    if (e.size() < 2)
        throw InsufficientData("rescale: need at least 2 spikes");
    const auto& segs = path.segments();
    if (segs.size() != e.size() - 1)
        throw RejectedInput("rescale: path covers " + std::to_string(segs.size()) +
                            " ISI segments, train has " + std::to_string(e.size() - 1));
    RescaledIsis out;
    out.values.reserve(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].start != e[i] || segs[i].end != e[i + 1])
            throw RejectedInput("rescale: path gap at ISI segment " + std::to_string(i) +
                                " (expected [" + std::to_string(e[i]) + ", " +
                                std::to_string(e[i + 1]) + "])");
        out.values.push_back(path.segment_integral(i));
    }
    return out;
}

UniformizedIsis uniformize(const RescaledIsis& rescaled) {
    UniformizedIsis out;
    out.values.reserve(rescaled.values.size());
    for (double t : rescaled.values) out.values.push_back(-std::expm1(-t));
    return out;
}

double ks_statistic(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto m = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / m - values[i];
        const double lo = values[i] - static_cast<double>(i) / m;
        d = std::max({d, hi, lo});
    }
    return d;
}

TestResult ks_uniformity_test(const UniformizedIsis& z) {
    if (z.values.size() < 10)
        throw InsufficientData("ks_uniformity_test: need at least 10 values");
    const double d = ks_statistic(z.values);
    const double x = std::sqrt(static_cast<double>(z.values.size())) * d;
    return {d, num::kolmogorov_sf(x)};
}

KendallResult kendall_tau_test(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw RejectedInput("kendall_tau_test: mismatched sample sizes");
    const std::size_t m = x.size();
    if (m < 10) throw InsufficientData("kendall_tau_test: need at least 10 pairs");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    std::uint64_t xtie = 0, ntie = 0;
    {
        std::size_t i = 0;
        while (i < m) {
            std::size_t j = i;
            while (j + 1 < m && x[order[j + 1]] == x[order[i]]) ++j;
            const std::uint64_t c = j - i + 1;
            xtie += c * (c - 1) / 2;
            // joint ties within the equal-x run
            std::size_t a = i;
            while (a <= j) {
                std::size_t b = a;
                while (b + 1 <= j && y[order[b + 1]] == y[order[a]]) ++b;
                const std::uint64_t cj = b - a + 1;
                ntie += cj * (cj - 1) / 2;
                a = b + 1;
            }
            i = j + 1;
        }
    }

    std::vector<double> yseq(m), ysorted(m);
    for (std::size_t i = 0; i < m; ++i) yseq[i] = y[order[i]];
    ysorted = yseq;
    std::vector<double> buf(m);
    const std::uint64_t dis = count_inversions(yseq, buf, 0, m);
    std::sort(ysorted.begin(), ysorted.end());
    const std::uint64_t ytie = tie_pair_count(std::move(ysorted));

    const std::uint64_t tot = static_cast<std::uint64_t>(m) * (m - 1) / 2;
    const double con_minus_dis = static_cast<double>(tot) - static_cast<double>(xtie) -
                                 static_cast<double>(ytie) + static_cast<double>(ntie) -
                                 2.0 * static_cast<double>(dis);
    const double den = std::sqrt(static_cast<double>(tot - xtie)) *
                       std::sqrt(static_cast<double>(tot - ytie));
    if (!(den > 0.0)) return {0.0, 1.0}; // a degenerate margin carries no evidence

    const double tau = std::clamp(con_minus_dis / den, -1.0, 1.0);
    const double md = static_cast<double>(m);
    const double var = 2.0 * (2.0 * md + 5.0) / (9.0 * md * (md - 1.0));
    const double zstat = tau / std::sqrt(var);
    const double p = std::clamp(std::erfc(std::abs(zstat) / std::numbers::sqrt2), 0.0, 1.0);
    return {tau, p};
}

KendallResult kendall_adjacent(std::span<const double> values) {
    if (values.size() < 2)
        throw InsufficientData("kendall_adjacent: need at least 2 values");
    return kendall_tau_test(values.first(values.size() - 1),
                            values.subspan(1));
}

std::vector<std::pair<double, double>>
pseudo_observations(std::span<const std::pair<double, double>> pairs) {
    const std::size_t m = pairs.size();
    std::vector<double> u(m), v(m);
    for (std::size_t i = 0; i < m; ++i) {
        u[i] = pairs[i].first;
        v[i] = pairs[i].second;
    }
    const auto ru = average_ranks(u);
    const auto rv = average_ranks(v);
    std::vector<std::pair<double, double>> out(m);
    const double scale = 1.0 / (static_cast<double>(m) + 1.0);
    for (std::size_t i = 0; i < m; ++i) out[i] = {ru[i] * scale, rv[i] * scale};
    return out;
}

double empirical_copula(std::span<const std::pair<double, double>> pairs, double u,
                        double v) {
    if (pairs.empty()) throw InsufficientData("empirical_copula: no pairs");
    const auto pseudo = pseudo_observations(pairs);
    std::size_t count = 0;
    for (const auto& [pu, pv] : pseudo)
        if (pu <= u && pv <= v) ++count;
    return static_cast<double>(count) / static_cast<double>(pseudo.size());
}

double copula_cvm_statistic(std::span<const std::pair<double, double>> pseudo) {
    const std::size_t m = pseudo.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pseudo[a].first < pseudo[b].first;
    });
    // compress V values to 1-based ordinals (equal values share an ordinal)
    std::vector<double> vs(m);
    for (std::size_t i = 0; i < m; ++i) vs[i] = pseudo[i].second;
    std::vector<double> vsorted = vs;
    std::sort(vsorted.begin(), vsorted.end());
    vsorted.erase(std::unique(vsorted.begin(), vsorted.end()), vsorted.end());
    auto v_ordinal = [&](double value) {
        return static_cast<std::size_t>(std::lower_bound(vsorted.begin(), vsorted.end(),
                                                         value) -
                                        vsorted.begin()) +
               1;
    };

    Fenwick bit(vsorted.size());
    double stat = 0.0;
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i; // [i, j]: run of equal U (ties count as <=)
        while (j + 1 < m && pseudo[order[j + 1]].first == pseudo[order[i]].first) ++j;
        for (std::size_t k = i; k <= j; ++k) bit.add(v_ordinal(pseudo[order[k]].second));
        for (std::size_t k = i; k <= j; ++k) {
            const auto& p = pseudo[order[k]];
            const double cn = static_cast<double>(bit.prefix(v_ordinal(p.second))) /
                              static_cast<double>(m);
            const double diff = cn - p.first * p.second;
            stat += diff * diff;
        }
        i = j + 1;
    }
    return stat;
}

TestResult copula_gof_independence(std::span<const std::pair<double, double>> pairs,
                                   int n_bootstrap, std::uint64_t seed,
                                   PairStructure structure, Exec exec) {
    if (pairs.size() < 30)
        throw InsufficientData("copula_gof_independence: need at least 30 pairs");
    if (n_bootstrap < 100)
        throw InsufficientData("copula_gof_independence: need at least 100 replicates");

    const auto pseudo = pseudo_observations(pairs);
    const double observed = copula_cvm_statistic(pseudo);
    const std::size_t m = pairs.size();

    std::vector<unsigned char> exceeds(static_cast<std::size_t>(n_bootstrap), 0);
    parallel_for(exec, n_bootstrap, [&](std::int64_t k) {
        auto gen = rng::derive_stream(seed, static_cast<std::uint64_t>(k));
        std::vector<std::pair<double, double>> sim(m);
        if (structure == PairStructure::iid_pairs) {
            for (auto& p : sim) {
                p.first = gen.uniform_open01();
                p.second = gen.uniform_open01();
            }
        } else {
            double prev = gen.uniform_open01();
            for (auto& p : sim) {
                const double next = gen.uniform_open01();
                p = {prev, next};
                prev = next;
            }
        }
        const double stat = copula_cvm_statistic(pseudo_observations(sim));
        exceeds[static_cast<std::size_t>(k)] = stat >= observed ? 1 : 0;
    });
    std::uint64_t count = 0;
    for (unsigned char f : exceeds) count += f;
    return {observed, static_cast<double>(count) / static_cast<double>(n_bootstrap)};
}

ValidationReport validate_with_path(const core::SpikeTrain& train,
                                    const est::IntensityPath& path,
                                    const ValidationConfig& config) {
    ValidationReport report;
    report.level = config.level;
    report.n_bootstrap = config.n_bootstrap;
    report.seed = config.seed;

    const auto rescaled = rescale(train, path);
    const auto z = uniformize(rescaled);
    report.rescaled = rescaled.values;
    report.uniformized = z.values;
    report.n_rescaled = rescaled.values.size();
    double sum = 0.0;
    for (double t : rescaled.values) sum += t;
    report.rescaled_mean = rescaled.values.empty()
                               ? 0.0
                               : sum / static_cast<double>(rescaled.values.size());

    report.uniformity = ks_uniformity_test(z);
    report.kendall = kendall_adjacent(z.values);

    std::vector<std::pair<double, double>> adj(z.values.size() - 1);
    for (std::size_t i = 0; i + 1 < z.values.size(); ++i)
        adj[i] = {z.values[i], z.values[i + 1]};
    report.copula = copula_gof_independence(adj, config.n_bootstrap, config.seed,
                                            PairStructure::adjacent_chain, config.exec);

    report.uniformity_pass = report.uniformity.p_value > config.level;
    report.kendall_pass = report.kendall.p_value > config.level;
    report.copula_pass = report.copula.p_value > config.level;
    return report;
}

ValidationReport validate(const core::SpikeTrain& train, const est::FittedEstimator& fit,
                          const ValidationConfig& config) {
    const auto path = fit.conditional_intensity_path(train, config.grid_step, config.exec);
    return validate_with_path(train, path, config);
}

} // namespace spikerate::val
