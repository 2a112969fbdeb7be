#include "zetalab/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace zetalab {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// window membership under the global (lo, hi] convention
inline bool in_window(double g, double T, double c) { return g > T && g <= c * T; }

double sinc_sq(double u) {
    if (std::abs(u) < 1e-9) return 1.0;
    double s = std::sin(kPi * u) / (kPi * u);
    return s * s;
}
}  // namespace

const char* lemma_name(LemmaId id) {
    switch (id) {
        case LemmaId::L6: return "L6";
        case LemmaId::L7: return "L7";
        case LemmaId::L10: return "L10";
        case LemmaId::L11: return "L11";
        case LemmaId::P2: return "P2";
        case LemmaId::C3: return "C3";
        case LemmaId::EF: return "EF";
    }
    return "?";
}

Eigen::ArrayXd geometric_grid(double eps_min, double eps_max, int points) {
    if (points < 2 || eps_min <= 0.0 || eps_max <= eps_min)
        throw domain_error("geometric_grid: need 0 < eps_min < eps_max, points >= 2");
    Eigen::ArrayXd g(points);
    const double r = std::log(eps_max / eps_min) / (points - 1);
    for (int i = 0; i < points; ++i) g[i] = eps_min * std::exp(r * i);
    return g;
}

// ── Distribution curves ──────────────────────────────────────────────────────

namespace {

DistributionCurve curve_from_statistics(std::vector<double>&& stats, double T,
                                        const Eigen::ArrayXd& grid) {
    for (int i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw domain_error("distribution curve: grid must be strictly increasing");
    std::sort(stats.begin(), stats.end());
    DistributionCurve out;
    out.epsilon_grid = grid;
    out.window_T = T;
    out.population = static_cast<long>(stats.size());
    out.counts.resize(grid.size());
    out.values.resize(grid.size());
    const double norm = kTwoPi / (T * std::log(T));
    for (int i = 0; i < grid.size(); ++i) {
        // w = indicator of [0, 1] closed at 1: statistic <= eps counts
        auto it = std::upper_bound(stats.begin(), stats.end(), grid[i]);
        out.counts[i] = static_cast<long>(std::distance(stats.begin(), it));
        out.values[i] = norm * static_cast<double>(out.counts[i]);
    }
    return out;
}

}  // namespace

DistributionCurve empirical_m(std::span<const ZetaZero> zeros, double T,
                              const Eigen::ArrayXd& grid, double c) {
    const double logT = std::log(T);
    std::vector<double> stats;
    for (size_t i = 0; i + 1 < zeros.size(); ++i) {
        if (!in_window(zeros[i].gamma, T, c)) continue;
        stats.push_back((zeros[i + 1].gamma - zeros[i].gamma) * logT);
    }
    if (!zeros.empty() && in_window(zeros.back().gamma, T, c))
        throw coverage_error("empirical_m: successor of the last window zero missing");
    return curve_from_statistics(std::move(stats), T, grid);
}

DistributionCurve empirical_m_prime(std::span<const ZPrimeZero> zprimes, double T,
                                    const Eigen::ArrayXd& grid, double c) {
    const double logT = std::log(T);
    std::vector<double> stats;
    for (const auto& z : zprimes) {
        if (!in_window(z.gamma_prime, T, c)) continue;
        stats.push_back(z.on_line_coincident ? 0.0 : (z.beta_prime - 0.5) * logT);
    }
    return curve_from_statistics(std::move(stats), T, grid);
}

// ── Pair correlation ─────────────────────────────────────────────────────────

PairCorrelationHistogram pair_correlation(std::span<const ZetaZero> zeros, double T,
                                          double u_max, int bins, double c) {
    if (u_max <= 0.0 || u_max > 4.0)
        throw domain_error("pair_correlation: u_max outside (0, 4]");
    if (bins < 8) throw domain_error("pair_correlation: need at least 8 bins");
    const double logT = std::log(T);

    std::vector<double> g;
    for (const auto& z : zeros)
        if (in_window(z.gamma, T, c)) g.push_back(z.gamma);

    PairCorrelationHistogram out;
    out.window_T = T;
    out.population = static_cast<long>(g.size());
    out.bin_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i)
        out.bin_edges[i] = u_max * static_cast<double>(i) / bins;
    out.counts.assign(static_cast<size_t>(bins), 0);

    // ordered pairs gamma_1 > gamma_2 with normalized difference in (0, u_max]
    const double reach = u_max * kTwoPi / logT;
    for (size_t i = 0; i < g.size(); ++i) {
        for (size_t j = i; j-- > 0;) {
            const double d = g[i] - g[j];
            if (d > reach) break;
            const double u = d * logT / kTwoPi;
            if (u <= 0.0 || u > u_max) continue;
            int b = static_cast<int>(std::ceil(u / u_max * bins)) - 1;
            b = std::clamp(b, 0, bins - 1);
            // (lo, hi] bins: move down when u sits exactly on the lower edge
            if (u <= out.bin_edges[b] && b > 0) --b;
            ++out.counts[static_cast<size_t>(b)];
        }
    }

    out.expected_density.resize(bins);
    out.empirical_density.resize(bins);
    for (int b = 0; b < bins; ++b) {
        const double a = out.bin_edges[b], bb = out.bin_edges[b + 1];
        // bin mean of 1 - sinc^2 by Simpson on a fine uniform refinement
        const int m = 32;
        double acc = 0.0;
        for (int k = 0; k < m; ++k) {
            double x0 = a + (bb - a) * k / m;
            double x1 = a + (bb - a) * (k + 1) / m;
            double xm = 0.5 * (x0 + x1);
            acc += (x1 - x0) / 6.0 *
                   ((1.0 - sinc_sq(x0)) + 4.0 * (1.0 - sinc_sq(xm)) + (1.0 - sinc_sq(x1)));
        }
        out.expected_density[b] = acc / (bb - a);
        out.empirical_density[b] =
            (out.population > 0)
                ? static_cast<double>(out.counts[static_cast<size_t>(b)]) /
                      (static_cast<double>(out.population) * (bb - a))
                : 0.0;
    }
    return out;
}

// ── Verification suites ──────────────────────────────────────────────────────

VerificationReport verify_lemma6(std::span<const PairingRecord> pairings,
                                 std::span<const ZetaZero> zeros, double radius_gaps) {
    return verify_lemma6_detailed(pairings, zeros, radius_gaps).report;
}

Lemma6Report verify_lemma6_detailed(std::span<const PairingRecord> pairings,
                                    std::span<const ZetaZero> zeros,
                                    double radius_gaps) {
    Lemma6Report out;
    VerificationReport& rep = out.report;
    rep.lemma_id = LemmaId::L6;
    if (zeros.empty()) return out;
    out.residuals.resize(static_cast<Eigen::Index>(pairings.size()));
    double worst = 0.0;
    for (const auto& p : pairings) {
        const double gp = p.zprime.gamma_prime;
        const double b = p.zprime.beta_prime - 0.5;
        const double mg = mean_gap(gp);
        // truncation radius, clipped to the list coverage; the integral tail
        // absorbs the clipped part
        const double avail =
            std::min(gp - zeros.front().gamma, zeros.back().gamma - gp) - mg;
        const double R = std::min(radius_gaps * mg, avail);
        if (R < 10.0 * mg)
            throw coverage_error("verify_lemma6: gamma' too close to the list boundary");

        double sum = 0.0;
        auto lo = std::lower_bound(zeros.begin(), zeros.end(), gp - R,
                                   [](const ZetaZero& z, double v) { return z.gamma < v; });
        for (auto it = lo; it != zeros.end() && it->gamma <= gp + R; ++it) {
            const double dg = gp - it->gamma;
            sum += b / (b * b + dg * dg);
        }
        // integral tail: density log(t/2pi)/2pi against the Lorentzian
        const double dens = std::log(gp / kTwoPi) / kTwoPi;
        const double tail = 2.0 * dens * (kPi / 2.0 - std::atan(R / b));
        const double resid = 0.5 * std::log(gp) - sum - tail;
        out.residuals[rep.checked] = resid;
        ++rep.checked;
        if (std::abs(resid) > std::abs(worst)) {
            worst = resid;
            rep.witness = Witness{gp, resid, "largest |residual|"};
        }
    }
    rep.worst_margin = worst;
    return out;
}

VerificationReport verify_lemma7(std::span<const ZPrimeZero> zprimes,
                                 std::span<const ZetaZero> zeros, double T) {
    VerificationReport rep;
    rep.lemma_id = LemmaId::L7;
    const double thr = 0.5 + 1.0 / std::log(T);
    if (zeros.size() < 2) return rep;
    std::vector<long> bucket(zeros.size() - 1, 0);
    for (const auto& z : zprimes) {
        if (z.beta_prime >= thr) continue;
        auto it = std::upper_bound(zeros.begin(), zeros.end(), z.gamma_prime,
                                   [](double v, const ZetaZero& zz) { return v < zz.gamma; });
        size_t k = static_cast<size_t>(std::distance(zeros.begin(), it));
        if (k == 0 || k >= zeros.size()) continue;  // outside the covered range
        ++bucket[k - 1];
    }
    double worst = 1.0;
    for (size_t k = 0; k < bucket.size(); ++k) {
        ++rep.checked;
        const double slack = 1.0 - static_cast<double>(bucket[k]);
        if (slack < worst) {
            worst = slack;
            if (slack < 0.0)
                rep.witness = Witness{zeros[k].gamma, static_cast<double>(bucket[k]),
                                      "box holds more than one zero of zeta'"};
        }
        if (bucket[k] > 1) ++rep.violations;
    }
    rep.worst_margin = worst;
    return rep;
}

VerificationReport verify_lemma10(std::span<const ZetaZero> zeros,
                                  std::span<const ZPrimeZero> zprimes, double T,
                                  double eps_max, double c) {
    VerificationReport rep;
    rep.lemma_id = LemmaId::L10;
    if (eps_max > 1.0) throw domain_error("verify_lemma10: eps_max must stay below 1");
    double worst = 1e30;
    for (size_t i = 0; i + 1 < zeros.size(); ++i) {
        const double g = zeros[i].gamma;
        if (!in_window(g, T, c)) continue;
        const double eps = (zeros[i + 1].gamma - g) * std::log(g);
        if (eps >= eps_max) continue;
        ++rep.checked;
        const double radius = 2.0 * eps / std::log(g);
        double best = 1e30;
        for (const auto& z : zprimes) {
            const double d = std::hypot(z.beta_prime - 0.5, z.gamma_prime - g);
            best = std::min(best, d);
        }
        const double slack = radius - best;
        if (slack < worst) {
            worst = slack;
            rep.witness = Witness{g, best, "distance of nearest zeta' zero"};
        }
        if (slack < 0.0) ++rep.violations;
    }
    rep.worst_margin = (rep.checked > 0) ? worst : 0.0;
    return rep;
}

VerificationReport verify_lemma11(std::span<const PairingRecord> pairings) {
    VerificationReport rep;
    rep.lemma_id = LemmaId::L11;
    double worst = 1e30;
    for (const auto& p : pairings) {
        const double b = std::max(p.zprime.beta_prime - 0.5, 0.0);
        const double margin =
            p.dist * p.dist - 2.0 * b / std::log(p.zprime.gamma_prime);
        ++rep.checked;
        if (margin < worst) {
            worst = margin;
            rep.witness = Witness{p.zprime.gamma_prime, margin, "smallest margin"};
        }
        if (margin < -1e-12) ++rep.violations;
    }
    rep.worst_margin = (rep.checked > 0) ? worst : 0.0;
    return rep;
}

EnvelopeReport check_prop2_envelope(std::span<const PairingRecord> pairings, double eps,
                                    double A, double kappa, double delta_spacing) {
    EnvelopeReport out;
    out.lower.lemma_id = LemmaId::P2;
    std::vector<double> ratios;
    const double sqrt2 = std::sqrt(2.0);
    double worst = 1e30;
    for (const auto& p : pairings) {
        const double b = p.zprime.beta_prime - 0.5;
        if (b <= 1e-10) continue;
        if (b * p.log_T > eps) continue;
        const double R = p.dist / std::sqrt(b / p.log_T);
        ratios.push_back(R);
        ++out.lower.checked;
        const double margin = R - (sqrt2 - 1e-6);
        if (margin < worst) {
            worst = margin;
            out.lower.witness = Witness{p.zprime.gamma_prime, R, "smallest ratio R"};
        }
        if (margin < 0.0) ++out.lower.violations;
    }
    out.lower.worst_margin = (out.lower.checked > 0) ? worst : 0.0;
    std::sort(ratios.begin(), ratios.end());
    out.ratios = Eigen::Map<Eigen::ArrayXd>(ratios.data(),
                                            static_cast<Eigen::Index>(ratios.size()));
    const double arg = 1.0 / (eps * kappa * delta_spacing);
    out.upper_threshold = std::sqrt(std::max(A * std::log(arg), 0.0));
    if (!ratios.empty()) {
        auto it = std::upper_bound(ratios.begin(), ratios.end(), out.upper_threshold);
        out.upper_tail_fraction = static_cast<double>(std::distance(it, ratios.end())) /
                                  static_cast<double>(ratios.size());
    }
    return out;
}

double window_tail(std::span<const ZetaZero> zeros, double T, double threshold,
                   double c) {
    const double w = kTwoPi / std::log(T);
    long total = 0, above = 0;
    for (const auto& z : zeros) {
        if (!in_window(z.gamma, T, c)) continue;
        ++total;
        auto lo = std::upper_bound(zeros.begin(), zeros.end(), z.gamma - w,
                                   [](double v, const ZetaZero& zz) { return v < zz.gamma; });
        auto hi = std::upper_bound(zeros.begin(), zeros.end(), z.gamma + w,
                                   [](double v, const ZetaZero& zz) { return v < zz.gamma; });
        if (static_cast<double>(std::distance(lo, hi)) > threshold) ++above;
    }
    return (total > 0) ? static_cast<double>(above) / static_cast<double>(total) : 0.0;
}

// ── Fits and sums ────────────────────────────────────────────────────────────

ScalingFit scaling_fit(const DistributionCurve& curve, double fit_lo, double fit_hi) {
    std::vector<double> xs, ys;
    for (int i = 0; i < curve.epsilon_grid.size(); ++i) {
        const double e = curve.epsilon_grid[i], v = curve.values[i];
        if (e < fit_lo || e > fit_hi || v <= 0.0) continue;
        xs.push_back(std::log(e));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 5)
        throw domain_error("scaling_fit: fewer than five positive points in range");
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = xs[static_cast<size_t>(i)];
        y(i) = ys[static_cast<size_t>(i)];
    }
    Eigen::Vector2d beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    const Eigen::VectorXd resid = y - X * beta;
    const double ss_res = resid.squaredNorm();
    const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
    ScalingFit out;
    out.exponent = beta(1);
    out.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    out.fit_lo = fit_lo;
    out.fit_hi = fit_hi;
    out.points_used = static_cast<int>(n);
    return out;
}

std::pair<double, double> default_fit_range(const DistributionCurve& curve) {
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < curve.epsilon_grid.size(); ++i) {
        const double v = curve.values[i];
        if (v > 0.0 && v < 0.5) {
            if (lo == 0.0) lo = curve.epsilon_grid[i];
            hi = curve.epsilon_grid[i];
        }
    }
    if (lo == 0.0 || hi <= lo)
        throw domain_error("default_fit_range: no usable stretch with 0 < value < 1/2");
    // restrict to the central decade in log scale
    if (hi / lo > 10.0) {
        const double mid = std::sqrt(lo * hi);
        lo = mid / std::sqrt(10.0);
        hi = mid * std::sqrt(10.0);
    }
    return {lo, hi};
}

Complex gonek_sum(long a, long b, std::span<const ZetaZero> zeros) {
    if (a <= 0 || b <= 0) throw domain_error("gonek_sum: a, b must be positive");
    const double lx = std::log(static_cast<double>(a) / static_cast<double>(b));
    Complex sum{};
    for (const auto& z : zeros)
        sum += Complex(std::cos(z.gamma * lx), std::sin(z.gamma * lx));
    return sum;
}

}  // namespace zetalab
