#pragma once

// Zero location for zeta and zeta' plus the closest-zero pairing.
//
//  * Critical-line zeros: dense sampling of Z(t) at a fraction of the local
//    mean gap, bisection of each sign change to an interval of 1e-11, and a
//    Turing-style completeness check N(t_hi) - N(t_lo) against the
//    argument-principle count; mismatches trigger rescans at halved step.
//  * N(T) = theta(T)/pi + 1 + S(T), with S(T) read off the argument of zeta
//    along 2 -> 2+iT -> 1/2+iT.  On the vertical leg |arg zeta(2+it)| is
//    bounded by log zeta(2) < pi/2, so only the horizontal leg is tracked.
//  * zeta' zeros: Newton iteration (derivative by central differences of
//    zeta') seeded inside each consecutive-ordinate gap, every accepted root
//    certified by a small-circle winding count of one, and per-strip
//    completeness enforced by rectangle winding counts with adaptive
//    subdivision of deficit regions.
//  * Pairing: for each rho' the closest zero rho_c (ties toward the origin)
//    together with the neighbor gaps of gamma_c.

#include <span>
#include <vector>

#include "zetalab/eval.hpp"

namespace zetalab {

// ── Record types ─────────────────────────────────────────────────────────────

struct ZetaZero {
    double gamma = 0.0;
    long index = 0;                    // 1-based global index
    double refinement_residual = 0.0;  // |Z(gamma)| after polishing
};

struct ZPrimeZero {
    double beta_prime = 0.0;
    double gamma_prime = 0.0;
    double newton_residual = 0.0;  // |zeta'(rho')|
    long box_id = 0;               // global index of the gap holding gamma'
    bool on_line_coincident = false;
};

struct PairingRecord {
    ZPrimeZero zprime;
    double rho_c_gamma = 0.0;  // ordinate of the closest zeta zero
    double dist = 0.0;         // |rho' - rho_c|
    double gap_up = 0.0;       // gamma_c^+ - gamma_c
    double gap_down = 0.0;     // gamma_c - gamma_c^-
    double gap_nearest = 0.0;  // |gamma_c - gamma_c^{+-}|
    double log_T = 0.0;        // log of the window anchor
};

// Mean gap between consecutive ordinates near height t: 2pi / log(t/2pi).
double mean_gap(double t);

// ── Critical line ────────────────────────────────────────────────────────────

struct ScanOptions {
    double accuracy = 1e-10;
    bool fast_line_scan = true;  // Riemann-Siegel main sum for bracketing
    int max_rescans = 6;
    int threads = 1;
};

// Every zero ordinate in (t_lo, t_hi], sorted, indices global.
// Throws completeness_error when sign changes keep missing zeros.
std::vector<ZetaZero> find_zeta_zeros(double t_lo, double t_hi,
                                      const ScanOptions& opts = {});

// Exact N(T).  T must not lie within 1e-6 of an ordinate (proximity_error).
long count_zeros(double T, double accuracy = 1e-10);

// ── Zeros of zeta' ───────────────────────────────────────────────────────────

struct ZPrimeOptions {
    double sigma_max = 6.0;
    double accuracy = 1e-10;
    double residual_target = 5e-10;
    int max_subdivisions = 40;
    int threads = 1;
    int gaps_per_strip = 32;
};

// Evaluation budget by stage; meaningful for single-threaded runs.
struct ZPrimeStats {
    long seed_newton_evals = 0;
    long strip_winding_evals = 0;
    long hunt_evals = 0;
    long cert_evals = 0;
    long seeds_missed = 0;
    long hunts = 0;
};

// All zeros of zeta' in (1/2, sigma_max] x (t_lo, t_hi], certified and sorted
// by ordinate.  The overload without a zero list computes the needed
// critical-line zeros itself (with guard coverage).
std::vector<ZPrimeZero> find_zprime_zeros(double t_lo, double t_hi,
                                          std::span<const ZetaZero> zeros,
                                          const ZPrimeOptions& opts = {},
                                          ZPrimeStats* stats = nullptr);
std::vector<ZPrimeZero> find_zprime_zeros(double t_lo, double t_hi,
                                          const ZPrimeOptions& opts = {});

// Largest sigma that could still carry a zero of zeta': beyond it the n = 2
// term of -zeta'(s) = sum log n * n^{-s} dominates the rest of the series.
// The returned margin check runs once per process.
double zprime_sigma_bound();

// ── Pairing ──────────────────────────────────────────────────────────────────

// rho_c minimizing |rho' - rho| over the supplied zeros, ties (within 1e-12)
// toward the smaller ordinate.  The list must cover gamma' by ten mean gaps
// on both sides (coverage_error otherwise).  window_T anchors log_T.
PairingRecord pair_with_closest(const ZPrimeZero& zp,
                                std::span<const ZetaZero> zeros,
                                double window_T);

std::vector<PairingRecord> pair_all(std::span<const ZPrimeZero> zprimes,
                                    std::span<const ZetaZero> zeros,
                                    double window_T);

}  // namespace zetalab
