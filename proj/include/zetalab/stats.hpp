#pragma once

// Empirical distribution functions of normalized gaps and of normalized
// distances of zeta' zeros to the half-line, the pair-correlation histogram,
// and the per-identity verification suites.
//
// Window convention is (T, cT] with the normalization 2pi/(T log T) of the
// underlying counting functions; curves therefore top out below one at desk
// heights (the window holds ~ (T/2pi)(log T - 1.45) zeros, not T log T/2pi).

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zetalab/zeros.hpp"

namespace zetalab {

// ── Curve and histogram types ────────────────────────────────────────────────

struct DistributionCurve {
    Eigen::ArrayXd epsilon_grid;            // strictly increasing
    Eigen::ArrayXd values;                  // (2pi/(T log T)) * counts
    Eigen::Array<long, Eigen::Dynamic, 1> counts;
    double window_T = 0.0;
    long population = 0;  // zeros inside the window
};

struct PairCorrelationHistogram {
    Eigen::ArrayXd bin_edges;  // size bins+1 over (0, u_max]
    std::vector<long> counts;  // ordered pairs per bin
    Eigen::ArrayXd expected_density;  // bin mean of 1 - (sin pi u / pi u)^2
    Eigen::ArrayXd empirical_density; // counts / (population * width)
    double window_T = 0.0;
    long population = 0;
};

enum class LemmaId { L6, L7, L10, L11, P2, C3, EF };
const char* lemma_name(LemmaId id);

struct Witness {
    double location = 0.0;  // ordinate (or epsilon) attaining the worst margin
    double value = 0.0;
    std::string note;
};

struct VerificationReport {
    LemmaId lemma_id{};
    long checked = 0;
    long violations = 0;
    double worst_margin = 0.0;  // minimum slack; negative iff violations
    std::optional<Witness> witness;
};

Eigen::ArrayXd geometric_grid(double eps_min, double eps_max, int points);

// ── Distribution curves ──────────────────────────────────────────────────────

// Gap statistic (gamma^+ - gamma) log T against the grid; the zero list must
// cover (T, cT] plus one successor beyond.
DistributionCurve empirical_m(std::span<const ZetaZero> zeros, double T,
                              const Eigen::ArrayXd& grid, double c = 2.0);

// Distance statistic (beta' - 1/2) log T; line-coincident zeros enter with
// statistic zero.
DistributionCurve empirical_m_prime(std::span<const ZPrimeZero> zprimes, double T,
                                    const Eigen::ArrayXd& grid, double c = 2.0);

// ── Pair correlation ─────────────────────────────────────────────────────────

PairCorrelationHistogram pair_correlation(std::span<const ZetaZero> zeros, double T,
                                          double u_max, int bins, double c = 2.0);

// ── Verification suites ──────────────────────────────────────────────────────

// Residual of (1/2) log gamma' against the zero sum over beta'-centred
// Lorentzians, truncated at radius_gaps mean gaps with an integral tail.
// The radius clips to the available coverage (at least ten mean gaps).
VerificationReport verify_lemma6(std::span<const PairingRecord> pairings,
                                 std::span<const ZetaZero> zeros,
                                 double radius_gaps = 50.0);

struct Lemma6Report {
    VerificationReport report;
    Eigen::ArrayXd residuals;  // aligned with the pairing input order
};
Lemma6Report verify_lemma6_detailed(std::span<const PairingRecord> pairings,
                                    std::span<const ZetaZero> zeros,
                                    double radius_gaps = 50.0);

// At most one zero of zeta' with beta' < 1/2 + 1/log T between consecutive
// ordinates.
VerificationReport verify_lemma7(std::span<const ZPrimeZero> zprimes,
                                 std::span<const ZetaZero> zeros, double T);

// Every gap with (gamma^+ - gamma) log gamma < eps_max owns a zeta' zero
// within 2 eps / log gamma of its left endpoint.
VerificationReport verify_lemma10(std::span<const ZetaZero> zeros,
                                  std::span<const ZPrimeZero> zprimes, double T,
                                  double eps_max = 1.0, double c = 2.0);

// dist^2 >= 2 (beta' - 1/2)/log gamma' with slack 1e-12.
VerificationReport verify_lemma11(std::span<const PairingRecord> pairings);

struct EnvelopeReport {
    VerificationReport lower;          // R >= sqrt(2) - 1e-6
    Eigen::ArrayXd ratios;             // R per selected record, sorted
    double upper_threshold = 0.0;      // sqrt(A log(eps kappa delta)^{-1})
    double upper_tail_fraction = 0.0;  // fraction with R above the threshold
};

// R = dist / sqrt((beta' - 1/2)/log T) for records with (beta' - 1/2) log T
// below eps; informational upper tail, theorem-backed lower envelope.
EnvelopeReport check_prop2_envelope(std::span<const PairingRecord> pairings,
                                    double eps, double A, double kappa,
                                    double delta_spacing = 0.5);

// Fraction of window ordinates whose interval of width 4pi/log T around them
// holds more than `threshold` zeros.
double window_tail(std::span<const ZetaZero> zeros, double T, double threshold,
                   double c = 2.0);

// ── Fits and sums ────────────────────────────────────────────────────────────

struct ScalingFit {
    double exponent = 0.0;
    double r_squared = 0.0;
    double fit_lo = 0.0, fit_hi = 0.0;
    int points_used = 0;
};

// Least-squares slope of log(value) against log(epsilon) inside fit_range;
// insufficient-data error below five positive points.
ScalingFit scaling_fit(const DistributionCurve& curve, double fit_lo, double fit_hi);

// Central decade of the grid where 0 < value < 1/2.
std::pair<double, double> default_fit_range(const DistributionCurve& curve);

// sum over supplied ordinates of (a/b)^{i gamma}; informational.
Complex gonek_sum(long a, long b, std::span<const ZetaZero> zeros);

}  // namespace zetalab
