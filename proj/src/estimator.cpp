#include "spikerate/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spikerate/errors.hpp"
#include "spikerate/numerics.hpp"

namespace spikerate::est {

namespace {

constexpr double kWindowSigmas = 10.0; // kernel tails beyond this are < 2e-22 relative
constexpr double kDenomGuard = 1e-300;

// Grid {0, step, 2·step, …} up to and including an exact t_max node.
std::vector<double> grid_nodes(double t_max, double step) {
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(t_max / step) + 2);
    long k = static_cast<long>(std::floor(t_max / step));
    while (k > 0 && static_cast<double>(k) * step > t_max) --k;
    for (long i = 0; i <= k; ++i) nodes.push_back(static_cast<double>(i) * step);
    if (nodes.back() < t_max) nodes.push_back(t_max);
    return nodes;
}

} // namespace

void EstimatorConfig::validate() const {
    if (!(kernel_scale > 0.0))
        throw RejectedInput("EstimatorConfig: kernel_scale must be > 0");
    if (!(bandwidth_exponent > 0.0 && bandwidth_exponent < 0.25))
        throw RejectedInput(
            "EstimatorConfig: bandwidth_exponent must lie in (0, 0.25)");
    if (!(survival_floor > 0.0 && survival_floor <= 1e-3))
        throw RejectedInput("EstimatorConfig: survival_floor must lie in (0, 1e-3]");
    if (!(eval_step > 0.0)) throw RejectedInput("EstimatorConfig: eval_step must be > 0");
    if (domain_cap && !(*domain_cap > 0.0))
        throw RejectedInput("EstimatorConfig: domain_cap must be > 0");
}

FittedEstimator::FittedEstimator(std::vector<double> sample, EstimatorConfig config,
                                 double cap)
    : sample_(std::move(sample)), config_(config), cap_(cap) {
    const auto n = sample_.size();
    c_ = std::pow(static_cast<double>(n), -config_.bandwidth_exponent);
    sigma_eff_ = config_.kernel_scale * c_;

    sorted_ = sample_;
    std::sort(sorted_.begin(), sorted_.end());

    std::vector<std::size_t> order(n - 1);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sample_[a + 1] < sample_[b + 1]; });
    pair_first_.reserve(n - 1);
    pair_second_.reserve(n - 1);
    for (std::size_t idx : order) {
        pair_first_.push_back(sample_[idx]);
        pair_second_.push_back(sample_[idx + 1]);
    }
}

FittedEstimator FittedEstimator::fit(const core::IsiSequence& sample,
                                     EstimatorConfig config) {
    config.validate();
    if (sample.size() < 2)
        throw InsufficientData("FittedEstimator::fit: need at least 2 ISIs");
    double cap = config.domain_cap ? *config.domain_cap
                                   : num::quantile(sample.isis(), 0.99);
    return FittedEstimator(sample.isis(), config, cap);
}

double FittedEstimator::k1(double distance) const {
    return num::gauss_pdf(distance / sigma_eff_) / sigma_eff_;
}

double FittedEstimator::marginal_density(double t) const { return marginal_full(t); }

double FittedEstimator::marginal_full(double t) const {
    double sum = 0.0;
    for (double x : sample_) sum += k1(t - x);
    return sum / static_cast<double>(sample_.size());
}

double FittedEstimator::joint_density(double tau, double t) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < pair_second_.size(); ++j)
        sum += k1(tau - pair_first_[j]) * k1(t - pair_second_[j]);
    return sum / static_cast<double>(pair_second_.size());
}

double FittedEstimator::conditional_density(double tau, double t) const {
    return joint_density(tau, t) / std::max(marginal_full(tau), kDenomGuard);
}

std::pair<double, double> FittedEstimator::marg_density_survival(double t) const {
    const double w = kWindowSigmas * sigma_eff_;
    auto dens = [&](double x) {
        const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), x - w);
        const auto hi = std::upper_bound(lo, sorted_.end(), x + w);
        double sum = 0.0;
        for (auto it = lo; it != hi; ++it) sum += k1(x - *it);
        return sum / static_cast<double>(sorted_.size());
    };
    const auto nodes = grid_nodes(t, config_.eval_step);
    double cum = 0.0, prev = dens(nodes[0]);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double cur = dens(nodes[i]);
        cum += 0.5 * (prev + cur) * (nodes[i] - nodes[i - 1]);
        prev = cur;
    }
    const double surv = std::clamp(1.0 - cum, config_.survival_floor, 1.0);
    return {prev, surv};
}

std::pair<double, double> FittedEstimator::cond_density_survival(double tau,
                                                                 double t) const {
    const double w = kWindowSigmas * sigma_eff_;
    std::vector<double> weights(pair_second_.size());
    for (std::size_t j = 0; j < pair_second_.size(); ++j)
        weights[j] = k1(tau - pair_first_[j]);
    const double marg = std::max(marginal_full(tau), kDenomGuard);
    auto dens = [&](double x) {
        const auto lo =
            std::lower_bound(pair_second_.begin(), pair_second_.end(), x - w);
        const auto hi = std::upper_bound(lo, pair_second_.end(), x + w);
        double sum = 0.0;
        for (auto it = lo; it != hi; ++it)
            sum += weights[static_cast<std::size_t>(it - pair_second_.begin())] *
                   k1(x - *it);
        return sum / static_cast<double>(pair_second_.size()) / marg;
    };
    const auto nodes = grid_nodes(t, config_.eval_step);
    double cum = 0.0, prev = dens(nodes[0]);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double cur = dens(nodes[i]);
        cum += 0.5 * (prev + cur) * (nodes[i] - nodes[i - 1]);
        prev = cur;
    }
    const double surv = std::clamp(1.0 - cum, config_.survival_floor, 1.0);
    return {prev, surv};
}

double FittedEstimator::survival(double t) const {
    if (!(t >= 0.0) || t > cap_)
        throw RejectedInput("survival: t outside [0, domain_cap]");
    if (t == 0.0) return 1.0;
    return marg_density_survival(t).second;
}

double FittedEstimator::conditional_survival(double tau, double t) const {
    if (!(t >= 0.0) || t > cap_)
        throw RejectedInput("conditional_survival: t outside [0, domain_cap]");
    if (!(tau >= 0.0)) throw RejectedInput("conditional_survival: tau must be >= 0");
    if (t == 0.0) return 1.0;
    return cond_density_survival(tau, t).second;
}

double FittedEstimator::hazard(double t) const {
    if (!(t >= 0.0) || t > cap_)
        throw RejectedInput("hazard: t outside [0, domain_cap]");
    const auto [dens, surv] = marg_density_survival(t);
    return dens / std::max(surv, config_.survival_floor);
}

double FittedEstimator::conditional_hazard(double tau, double t) const {
    if (!(t >= 0.0) || t > cap_)
        throw RejectedInput("conditional_hazard: t outside [0, domain_cap]");
    if (!(tau >= 0.0)) throw RejectedInput("conditional_hazard: tau must be >= 0");
    const auto [dens, surv] = cond_density_survival(tau, t);
    return dens / std::max(surv, config_.survival_floor);
}

std::pair<std::vector<double>, std::vector<double>>
FittedEstimator::conditional_hazard_curve(double tau, double t_max,
                                          double report_step) const {
    if (!(t_max > 0.0))
        throw RejectedInput("conditional_hazard_curve: t_max must be > 0");
    if (!(report_step > 0.0))
        throw RejectedInput("conditional_hazard_curve: report_step must be > 0");

    const double w = kWindowSigmas * sigma_eff_;
    std::vector<double> weights(pair_second_.size());
    for (std::size_t j = 0; j < pair_second_.size(); ++j)
        weights[j] = k1(tau - pair_first_[j]);
    const double marg = std::max(marginal_full(tau), kDenomGuard);
    auto dens = [&](double x) {
        const auto lo =
            std::lower_bound(pair_second_.begin(), pair_second_.end(), x - w);
        const auto hi = std::upper_bound(lo, pair_second_.end(), x + w);
        double sum = 0.0;
        for (auto it = lo; it != hi; ++it)
            sum += weights[static_cast<std::size_t>(it - pair_second_.begin())] *
                   k1(x - *it);
        return sum / static_cast<double>(pair_second_.size()) / marg;
    };

    const double h = config_.eval_step;
    const auto fine = grid_nodes(t_max, h);
    std::vector<double> fdens(fine.size()), cum(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) fdens[i] = dens(fine[i]);
    cum[0] = 0.0;
    for (std::size_t i = 1; i < fine.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (fdens[i - 1] + fdens[i]) * (fine[i] - fine[i - 1]);

    const auto report = grid_nodes(t_max, report_step);
    std::vector<double> values(report.size());
    for (std::size_t r = 0; r < report.size(); ++r) {
        const double x = report[r];
        long k = static_cast<long>(std::floor(x / h));
        while (k > 0 && static_cast<double>(k) * h > x) --k;
        const auto ki = std::min(static_cast<std::size_t>(k), fine.size() - 1);
        double fx, integral;
        if (fine[ki] == x) {
            fx = fdens[ki];
            integral = cum[ki];
        } else {
            fx = (x == fine.back()) ? fdens.back() : dens(x);
            integral = cum[ki] + 0.5 * (fdens[ki] + fx) * (x - fine[ki]);
        }
        const double surv = std::clamp(1.0 - integral, config_.survival_floor, 1.0);
        values[r] = fx / std::max(surv, config_.survival_floor);
    }
    return {report, std::move(values)};
}

IntensityPath
FittedEstimator::conditional_intensity_path(const core::SpikeTrain& train,
                                            double grid_step, Exec exec) const {
    if (!(grid_step > 0.0))
        throw RejectedInput("conditional_intensity_path: grid_step must be > 0");
    if (train.size() < 2)
        throw InsufficientData(
            "conditional_intensity_path: need at least 2 spikes (first ISI excluded)");
    const auto isis = core::from_spike_times(train);
    const auto& e = train.epochs();
    const auto& t = isis.isis();

    std::vector<PathSegment> segments(e.size() - 1);
    parallel_for(exec, static_cast<std::int64_t>(segments.size()), [&](std::int64_t s) {
        const auto j = static_cast<std::size_t>(s) + 1; // spike closing the segment
        PathSegment seg;
        seg.start = e[j - 1];
        seg.end = e[j];
        seg.prev_isi = t[j - 1];
        seg.step = grid_step;
        auto [offsets, values] = conditional_hazard_curve(seg.prev_isi, t[j], grid_step);
        seg.offsets = std::move(offsets);
        seg.values = std::move(values);
        segments[static_cast<std::size_t>(s)] = std::move(seg);
    });
    return IntensityPath(std::move(segments));
}

IntensityPath::IntensityPath(std::vector<PathSegment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) throw RejectedInput("IntensityPath: no segments");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (!(s.end > s.start))
            throw RejectedInput("IntensityPath: segment end must exceed start");
        if (s.offsets.size() != s.values.size() || s.offsets.size() < 2)
            throw RejectedInput("IntensityPath: malformed segment grid");
        if (i > 0 && segments_[i - 1].end != s.start)
            throw RejectedInput("IntensityPath: gap between segments");
        for (double v : s.values)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw RejectedInput("IntensityPath: intensity values must be >= 0");
    }
}

double IntensityPath::segment_integral(std::size_t i) const {
    const auto& s = segments_.at(i);
    double acc = 0.0;
    for (std::size_t k = 1; k < s.offsets.size(); ++k)
        acc += 0.5 * (s.values[k - 1] + s.values[k]) * (s.offsets[k] - s.offsets[k - 1]);
    return acc;
}

std::vector<std::pair<double, double>> IntensityPath::flattened() const {
    std::vector<std::pair<double, double>> rows;
    for (const auto& s : segments_)
        for (std::size_t k = 1; k < s.offsets.size(); ++k)
            rows.emplace_back(s.start + s.offsets[k], s.values[k]);
    return rows;
}

IntensityPath
make_sampled_path(const core::SpikeTrain& train, double grid_step,
                  const std::function<double(double, double, double)>& intensity) {
    if (!(grid_step > 0.0))
        throw RejectedInput("make_sampled_path: grid_step must be > 0");
    if (train.size() < 2)
        throw InsufficientData("make_sampled_path: need at least 2 spikes");
    const auto isis = core::from_spike_times(train);
    const auto& e = train.epochs();
    const auto& t = isis.isis();

    std::vector<PathSegment> segments;
    segments.reserve(e.size() - 1);
    for (std::size_t j = 1; j < e.size(); ++j) {
        PathSegment seg;
        seg.start = e[j - 1];
        seg.end = e[j];
        seg.prev_isi = t[j - 1];
        seg.step = grid_step;
        seg.offsets = grid_nodes(t[j], grid_step);
        seg.values.reserve(seg.offsets.size());
        for (double x : seg.offsets)
            seg.values.push_back(intensity(x, seg.prev_isi, seg.start + x));
        segments.push_back(std::move(seg));
    }
    return IntensityPath(std::move(segments));
}

} // namespace spikerate::est
