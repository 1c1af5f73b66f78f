#include "spikerate/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spikerate::num {

double gauss_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 2000; ++k) {
        const double term = 2.0 * std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

namespace {

double simpson_step(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_step(a, m, fa, flm, fm);
    const double right = simpson_step(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth >= 60 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson_step(a, b, fa, fm, fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

namespace {

// Continued fraction e^x E1(x) = 1 / (x + 1 − 1/(x + 3 − 4/(x + 5 − …)))
// evaluated by the modified Lentz method; accurate for x > 1.
double e1_cf_scaled(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 200; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h;
}

// E1(x) = −γ − ln x + Σ (−1)^{k+1} x^k / (k · k!), accurate for x ≤ 1.
double e1_series(double x) {
    double sum = -std::numbers::egamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k <= 60; ++k) {
        term *= -x / k;
        const double add = -term / k;
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace

double expint_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1: requires x > 0");
    if (x <= 1.0) return e1_series(x);
    return e1_cf_scaled(x) * std::exp(-x);
}

double expint_e1_scaled(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1_scaled: requires x > 0");
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return e1_cf_scaled(x);
}

double quantile(std::span<const double> sample, double p) {
    if (sample.empty()) throw std::domain_error("quantile: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double trapezoid(std::span<const double> xs, std::span<const double> values) {
    if (xs.size() != values.size() || xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i)
        acc += 0.5 * (values[i] + values[i - 1]) * (xs[i] - xs[i - 1]);
    return acc;
}

} // namespace spikerate::num
