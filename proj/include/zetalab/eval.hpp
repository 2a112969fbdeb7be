#pragma once

// Evaluation of zeta(s), zeta'(s), zeta'/zeta(s), the Riemann-Siegel theta
// function and the Hardy Z function in the rectangle -1 <= sigma <= 6,
// 0 <= t <= t_max.
//
// The workhorse is Euler-Maclaurin summation
//
//   zeta(s) = sum_{n<M} n^{-s} + M^{1-s}/(s-1) + M^{-s}/2
//           + M^{-s} * sum_{k>=1} B_{2k}/(2k)! * s(s+1)...(s+2k-2) * M^{1-2k}
//
// with M and the correction depth chosen from (sigma, t, target accuracy),
// and the classical remainder bound |R_K| <= |term_{K+1}| * |s+2K+1|/(sigma+2K+1).
// zeta'(s) comes from the term-wise derivative of the same formula.  For
// sigma >= 2 a plain truncated Dirichlet series is used whenever its tail
// bound makes it cheaper than Euler-Maclaurin.
//
// All functions are pure; the only shared state is an immutable table of
// log n / n^{-1/2} values and Bernoulli coefficients built on first use.

#include <complex>
#include <cstdint>

#include "zetalab/errors.hpp"

namespace zetalab {

using Complex = std::complex<double>;

// ── Domain types ─────────────────────────────────────────────────────────────

// A point s = sigma + it of the complex plane.
struct ComplexPoint {
    double sigma = 0.0;
    double t     = 0.0;

    Complex value() const { return {sigma, t}; }
};

inline ComplexPoint to_point(Complex s) { return {s.real(), s.imag()}; }

// Value plus a truncation-error budget.  abs_error_bound covers series
// truncation rigorously and floating-point accumulation heuristically.
struct EvalResult {
    Complex value{};
    double abs_error_bound = 0.0;
    int terms_used = 0;
};

// Evaluation limits.  t_max bounds the height the evaluator accepts;
// tolerances below refer to absolute error of the returned value.
struct EvalLimits {
    double t_max = 1e5;
    double sigma_min = -1.0;
    double sigma_max = 6.5;
};

const EvalLimits& eval_limits();
void set_eval_limits(const EvalLimits& limits);

inline constexpr double kDefaultAccuracy = 1e-10;

// ── Operations ───────────────────────────────────────────────────────────────

// zeta(s) with |error| <= abs_error_bound <= target_accuracy.
// Throws pole_error near s = 1, accuracy_error if the configured maximum
// term count cannot meet the target, domain_error outside the rectangle.
EvalResult zeta(ComplexPoint s, double target_accuracy = kDefaultAccuracy);

// zeta'(s) by term-wise differentiated Euler-Maclaurin (same domain rules).
EvalResult zeta_deriv(ComplexPoint s, double target_accuracy = kDefaultAccuracy);

// Riemann-Siegel theta(t) = arg Gamma(1/4 + it/2) - (t/2) log pi via the
// asymptotic series; remainder below 1e-10 for t >= 10 (domain_error below).
double riemann_siegel_theta(double t);

// First derivative theta'(t) = (1/2) log(t/2pi) + O(1/t^2); same domain.
double riemann_siegel_theta_deriv(double t);

// Hardy Z(t) = e^{i theta(t)} zeta(1/2 + it).  The imaginary part of the
// product is checked against 1e-8 and the real part returned.
double hardy_Z(double t, double target_accuracy = kDefaultAccuracy);

// Z(t) together with the evaluation error budget (useful to gate sign tests).
struct ZResult {
    double value = 0.0;
    double abs_error_bound = 0.0;
};
ZResult hardy_Z_result(double t, double target_accuracy = kDefaultAccuracy);

// Riemann-Siegel main-sum approximation of Z(t): sqrt(t/2pi) terms plus the
// first two saddle corrections.  Fast path for scanning on the line; the
// returned bound is the classical remainder envelope ~ t^{-5/4}.
ZResult hardy_Z_fast(double t);

// zeta'/zeta(s).  The distance to the nearest zero is estimated first-order
// as |zeta/zeta'|; proximity_error when that estimate (or |s-1|) is below
// exclusion_radius, signalling the caller to use a zero-subtracted form.
EvalResult log_deriv(ComplexPoint s, double exclusion_radius,
                     double target_accuracy = kDefaultAccuracy);

// Digamma psi(z) for Re z > 0 by upward recurrence + Stirling; used by the
// archimedean side of the explicit formula.
Complex digamma(Complex z);

namespace detail {

// Cumulative zeta_core call count (relaxed; diagnostics and perf tests).
long eval_count();

// Shared Euler-Maclaurin core: value and (optionally) derivative.
struct EmEval {
    Complex value{};
    Complex deriv{};
    double err_value = 0.0;
    double err_deriv = 0.0;
    int terms = 0;
};
EmEval zeta_core(Complex s, double target, bool want_deriv);

// log n for 1 <= n < kLogTableSize, built once.
double log_n(std::uint32_t n);

}  // namespace detail

}  // namespace zetalab
