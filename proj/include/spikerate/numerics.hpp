#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spikerate::num {

// Standard normal density at x.
double gauss_pdf(double x);

// Standard normal CDF via erfc.
double normal_cdf(double x);

// P(K > x) for the asymptotic Kolmogorov distribution,
// 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²x²}, truncated when |term| < 1e−12.
double kolmogorov_sf(double x);

// Adaptive Simpson quadrature of f over [a, b] with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

// Exponential integral E1(x) = ∫_x^∞ e^{−t}/t dt = Γ(0, x), x > 0.
// Series for x ≤ 1, continued fraction (modified Lentz) for x > 1.
double expint_e1(double x);

// Scaled variant e^x E1(x); stays finite (≈ 1/x) where e^x alone overflows.
double expint_e1_scaled(double x);

// Linear-interpolation quantile of a sample, p in [0, 1].
double quantile(std::span<const double> sample, double p);

// Trapezoidal integral of equally tabulated values (step h), last interval may
// be shorter: xs must be increasing; values aligned with xs.
double trapezoid(std::span<const double> xs, std::span<const double> values);

} // namespace spikerate::num
