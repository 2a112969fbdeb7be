#pragma once

// Smoothed Dirichlet polynomials over prime powers, short-window zero counts,
// the Selberg approximation error for zeta'/zeta, the Fejer kernel pair, and
// the explicit-formula identity connecting zeros to prime powers:
//
//   A_N(s) = sum_{n<=N} Lambda(n) W_N(n) n^{-s},   W_N = 1 on [1, sqrt(N)],
//                                                  log(N/n)/log N beyond
//   B_N(s) = sum_{n<=N} Lambda(n) (1 - log n/log N) n^{-s}
//   D_N(s) = sum_{n<=N} Lambda(n) n^{-s}
//
//   F_Delta(v) = (sin(pi Delta v)/(pi Delta v))^2, hat supported on |x|<Delta
//
//   sum_gamma F_Delta(gamma - t)  =  (1/2pi) int F_Delta(u-t) Re psi(1/4+iu/2) du
//                                  - (1/2pi) sum_n Lambda(n)/sqrt(n) *
//                                       2 cos(t log n) F_hat(log n / 2pi)
//                                  + (error within the stated budget)
//
// The two sides of the last identity flow through disjoint code paths (zero
// list vs prime sieve), which makes the comparison the module's primary
// correctness oracle.

#include <cstdint>
#include <span>
#include <vector>

#include "zetalab/eval.hpp"
#include "zetalab/zeros.hpp"

namespace zetalab {

// ── von Mangoldt table ───────────────────────────────────────────────────────

class VonMangoldtTable {
  public:
    explicit VonMangoldtTable(std::uint32_t n_max);

    std::uint32_t n_max() const { return n_max_; }
    double lambda(std::uint32_t n) const { return values_[n]; }
    // prime powers n <= n_max with Lambda(n) = log p, sorted by n
    std::span<const std::pair<std::uint32_t, double>> prime_powers() const {
        return prime_powers_;
    }
    // sum_{n<=x} Lambda(n); the Chebyshev psi function
    double psi_sum(std::uint32_t x) const;

  private:
    std::uint32_t n_max_;
    std::vector<double> values_;
    std::vector<std::pair<std::uint32_t, double>> prime_powers_;
};

// Process-wide table of the default size (one million), built on first use.
const VonMangoldtTable& von_mangoldt();

// ── Polynomials ──────────────────────────────────────────────────────────────

enum class PolyKind { A, B, D };

struct PolySpec {
    PolyKind kind = PolyKind::B;
    std::uint32_t N = 2;
    double sigma_offset = 0.0;  // evaluation at s = 1/2 + sigma_offset + it
};

// W_N(n): 1 up to sqrt(N), log(N/n)/log(N) beyond; domain_error for n > N.
double smoothing_w(std::uint32_t n, std::uint32_t N);

Complex eval_poly(const PolySpec& spec, double t, const VonMangoldtTable& table);

// sum of |coefficient| * n^{-1/2}: the coefficientwise domination comparand
double poly_abs_bound(const PolySpec& spec, const VonMangoldtTable& table);

// ── Window counts ────────────────────────────────────────────────────────────

// Number of ordinates in (t - pi/log N, t + pi/log N]; the list must cover
// one mean gap beyond both window ends.
long window_count(double t, std::uint32_t N, std::span<const ZetaZero> zeros);

// ── Selberg approximation ────────────────────────────────────────────────────

struct SelbergError {
    Complex lhs;           // zeta'/zeta(s) - sum_{|s-rho|<c/log T} 1/(s-rho)
    double error_budget;   // (log T / c) * E_{T,N}(s)
    double script_e;       // E_{T,N}(s) itself
};

// T is the window anchor entering log T; c in (0,1).
SelbergError selberg_error(ComplexPoint s, std::uint32_t N, double c, double T,
                           std::span<const ZetaZero> zeros,
                           const VonMangoldtTable& table);

// ── Fejer kernel ─────────────────────────────────────────────────────────────

struct FejerParams {
    double delta_cap = 1.0;  // frequency cap Delta > 0
};

double fejer(double v, const FejerParams& params);
double fejer_hat(double x, const FejerParams& params);

// ── Explicit formula ─────────────────────────────────────────────────────────

struct ExplicitFormulaSides {
    double zero_side = 0.0;
    double arithmetic_side = 0.0;
    double truncation_bound = 0.0;
};

// Both sides at center t; zeros must cover (t - W, t + W) for a usable W
// (coverage_error otherwise); 2 pi Delta must stay below log(n_max of table).
ExplicitFormulaSides explicit_formula_sides(double t, const FejerParams& params,
                                            std::span<const ZetaZero> zeros,
                                            const VonMangoldtTable& table);

// ── Moments ──────────────────────────────────────────────────────────────────

struct MomentResult {
    double sum = 0.0;    // sum |P(1/2 + offset + i gamma)|^{2k}
    double ratio = 0.0;  // sum / (T log T (log N)^{2k} k^k)
};

// Requires N^k <= sqrt(T) (constraint_error otherwise), k >= 1.
MomentResult moment(const PolySpec& spec, std::span<const double> ordinates, int k,
                    double T, const VonMangoldtTable& table);

}  // namespace zetalab
