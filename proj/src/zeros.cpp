#include "zetalab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>

#include "zetalab/parallel.hpp"

namespace zetalab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// Z(t) sign probe: Riemann-Siegel when its remainder clearly cannot flip the
// sign, Euler-Maclaurin otherwise.
struct ZProbe {
    bool fast = true;
    double accuracy = 1e-10;

    double value(double t) const {
        if (fast && t >= 30.0) {
            ZResult r = hardy_Z_fast(t);
            if (std::abs(r.value) > 6.0 * r.abs_error_bound) return r.value;
        }
        return hardy_Z(t, accuracy);
    }
};

}  // namespace

double mean_gap(double t) { return kTwoPi / std::log(t / kTwoPi); }

// ── N(T) ─────────────────────────────────────────────────────────────────────

long count_zeros(double T, double accuracy) {
    if (T < 10.0) throw domain_error("count_zeros: T below 10");

    // reject T too close to an ordinate: first-order distance |zeta/zeta'|
    {
        detail::EmEval probe = detail::zeta_core(Complex(0.5, T), accuracy, true);
        double dist = std::abs(probe.value) / std::max(std::abs(probe.deriv), 1e-30);
        if (dist < 1e-6)
            throw proximity_error("count_zeros: T within 1e-6 of an ordinate");
    }

    // S(T) from the argument of zeta along sigma: 2 -> 1/2 at height T.  The
    // vertical leg needs no continuation: |arg zeta(2+it)| <= log zeta(2) < pi/2.
    Complex prev = detail::zeta_core(Complex(2.0, T), accuracy, false).value;
    double arg_total = std::arg(prev);
    double sigma_prev = 2.0;
    std::vector<std::pair<double, Complex>> stack;  // pending left endpoints
    stack.emplace_back(0.5, detail::zeta_core(Complex(0.5, T), accuracy, false).value);
    int guard = 0;
    while (!stack.empty()) {
        if (++guard > 200000)
            throw accuracy_error("count_zeros: argument tracking did not converge");
        auto [sig, val] = stack.back();
        double dphi = std::arg(val / prev);
        if (std::abs(dphi) <= kPi / 2.0 || sigma_prev - sig < 1e-9) {
            arg_total += dphi;
            prev = val;
            sigma_prev = sig;
            stack.pop_back();
        } else {
            double mid = 0.5 * (sigma_prev + sig);
            stack.emplace_back(mid,
                               detail::zeta_core(Complex(mid, T), accuracy, false).value);
        }
    }

    double n_float = riemann_siegel_theta(T) / kPi + 1.0 + arg_total / kPi;
    long n = std::lround(n_float);
    if (std::abs(n_float - static_cast<double>(n)) > 0.05)
        throw accuracy_error("count_zeros: N(T) not close to an integer");
    return n;
}

// ── Critical-line zeros ──────────────────────────────────────────────────────

namespace {

// Bisect a sign change of Z to an interval of width <= 1e-11, then polish
// with one Newton step and record |Z| as the residual.
ZetaZero refine_zero(double a, double b, int sa, const ZProbe& probe) {
    for (int iter = 0; iter < 80 && (b - a) > 1e-11; ++iter) {
        double m = 0.5 * (a + b);
        int sm = sign_of(probe.value(m));
        if (sm == 0) sm = 1;
        if (sm == sa)
            a = m;
        else
            b = m;
    }
    double g = 0.5 * (a + b);
    const double acc = 1e-12;
    double z0 = hardy_Z(g, acc);
    double h = 1e-6;
    double slope = (hardy_Z(g + h, acc) - hardy_Z(g - h, acc)) / (2.0 * h);
    if (std::abs(slope) > 1e-8) {
        double step = z0 / slope;
        if (std::abs(step) < 4.0 * (b - a) + 1e-9) {
            g -= step;
            z0 = hardy_Z(g, acc);
        }
    }
    return {g, 0, std::abs(z0)};
}

std::vector<ZetaZero> scan_window(double t_lo, double t_hi, double step,
                                  const ScanOptions& opts) {
    const long n_samples = static_cast<long>(std::ceil((t_hi - t_lo) / step));
    const long chunk = 512;
    const int n_chunks = static_cast<int>((n_samples + chunk - 1) / chunk);
    std::vector<std::vector<ZetaZero>> found(static_cast<size_t>(n_chunks));

    ZProbe probe{opts.fast_line_scan, opts.accuracy};
    auto sample_at = [&](long j) {
        return std::min(t_lo + static_cast<double>(j) * step, t_hi);
    };

    parallel_chunks(n_chunks, opts.threads, [&](int c) {
        long j0 = static_cast<long>(c) * chunk;
        long j1 = std::min(j0 + chunk, n_samples);
        double prev_t = sample_at(j0);
        int prev_s = sign_of(probe.value(prev_t));
        auto& out = found[static_cast<size_t>(c)];
        for (long j = j0 + 1; j <= j1; ++j) {
            double t = sample_at(j);
            if (t <= prev_t) break;
            int s = sign_of(probe.value(t));
            if (s != 0 && prev_s != 0 && s != prev_s)
                out.push_back(refine_zero(prev_t, t, prev_s, probe));
            prev_t = t;
            prev_s = s;
        }
    });

    std::vector<ZetaZero> zeros;
    for (auto& part : found) zeros.insert(zeros.end(), part.begin(), part.end());
    std::sort(zeros.begin(), zeros.end(),
              [](const ZetaZero& x, const ZetaZero& y) { return x.gamma < y.gamma; });
    return zeros;
}

}  // namespace

std::vector<ZetaZero> find_zeta_zeros(double t_lo, double t_hi, const ScanOptions& opts) {
    if (t_lo >= t_hi) return {};
    if (t_lo < 10.0) throw domain_error("find_zeta_zeros: t_lo below 10");

    const long n_lo = count_zeros(t_lo, opts.accuracy);
    const long n_hi = count_zeros(t_hi, opts.accuracy);
    const long expected = n_hi - n_lo;

    double step = kPi / (4.0 * std::log(t_hi / kTwoPi));
    for (int attempt = 0; attempt <= opts.max_rescans; ++attempt) {
        std::vector<ZetaZero> zeros = scan_window(t_lo, t_hi, step, opts);
        if (static_cast<long>(zeros.size()) == expected) {
            for (size_t i = 0; i < zeros.size(); ++i) {
                zeros[i].index = n_lo + static_cast<long>(i) + 1;
                if (i > 0 && zeros[i].gamma - zeros[i - 1].gamma <= 1e-9)
                    throw completeness_error(
                        "find_zeta_zeros: ordinates closer than 1e-9, beyond resolution");
            }
            return zeros;
        }
        step *= 0.5;
    }
    throw completeness_error(
        "find_zeta_zeros: sign-change count never matched N(T) difference");
}

// ── Winding machinery ────────────────────────────────────────────────────────

namespace {

struct WindingLimits {
    double accuracy = 1e-9;
    double min_sep = 1e-9;  // below this node spacing a boundary zero is declared
};

// zeta' along a parametrized path; phase increments accumulated with adaptive
// halving until each step turns by at most pi/2.  Segments are pre-split to a
// fraction of the local mean gap so the smooth phase drift between nodes stays
// far below 2*pi -- uniform halving alone can alias a fast monotone rotation.
class ArgTracker {
  public:
    ArgTracker(std::function<Complex(double)> position, double max_param_step,
               const WindingLimits& lim)
        : pos_(std::move(position)), u_cap_(max_param_step), lim_(lim) {}

    double total_arg(double u0, double u1) {
        Complex f0 = eval(u0), f1 = eval(u1);
        return walk(u0, f0, u1, f1, 0);
    }

  private:
    Complex eval(double u) {
        Complex s = pos_(u);
        detail::EmEval r = detail::zeta_core(s, lim_.accuracy, true);
        Complex f = r.deriv;
        if (std::abs(f) < std::max(1e-12, 4.0 * r.err_deriv))
            throw winding_error("winding: boundary passes through a zero of zeta'");
        return f;
    }

    double walk(double u0, Complex f0, double u1, Complex f1, int depth) {
        double dphi = std::arg(f1 / f0);
        if (std::abs(dphi) <= kPi / 2.0 && u1 - u0 <= u_cap_) return dphi;
        if (depth > 52 || std::abs(pos_(u1) - pos_(u0)) < lim_.min_sep) {
            if (std::abs(dphi) <= kPi / 2.0) return dphi;
            throw winding_error("winding: boundary within 1e-9 of a zero of zeta'");
        }
        double um = 0.5 * (u0 + u1);
        Complex fm = eval(um);
        return walk(u0, f0, um, fm, depth + 1) + walk(um, fm, u1, f1, depth + 1);
    }

    std::function<Complex(double)> pos_;
    double u_cap_;
    WindingLimits lim_;
};

// Smooth drift rate of arg zeta' along a vertical line: theta'-like near the
// half-line, log 2 (the n = 2 term) far to the right.
double drift_rate(double sigma, double t) {
    if (sigma >= 2.0) return 1.4;
    return 0.5 * std::log(std::max(t, 10.0) / kTwoPi) + 1.0;
}

// Counterclockwise winding number of zeta' around a rectangle.
int winding_rectangle(double sig_lo, double sig_hi, double t_lo, double t_hi,
                      const WindingLimits& lim) {
    auto segment = [&](Complex a, Complex b, double h_max) {
        double len = std::abs(b - a);
        double cap = (len > 0.0) ? std::min(1.0, h_max / len) : 1.0;
        ArgTracker tr([a, b](double u) { return a + u * (b - a); }, cap, lim);
        return tr.total_arg(0.0, 1.0);
    };
    // node spacing keeps the smooth drift well below 2*pi per segment; the
    // pi/2 halving rule resolves zero-adjacent wiggles on top of it
    const double h_near = 1.6 / drift_rate(sig_lo, t_hi);
    const double h_far = 1.6 / drift_rate(sig_hi, t_hi);
    Complex c0(sig_lo, t_lo), c1(sig_hi, t_lo), c2(sig_hi, t_hi), c3(sig_lo, t_hi);
    double total = segment(c0, c1, h_near) + segment(c1, c2, h_far) +
                   segment(c2, c3, h_near) + segment(c3, c0, h_near);
    double w = total / kTwoPi;
    long n = std::lround(w);
    if (std::abs(w - static_cast<double>(n)) > 0.25)
        throw winding_error("winding: rectangle argument sum far from 2*pi multiple");
    return static_cast<int>(n);
}

// winding with deterministic jitter retries when the boundary grazes a zero
int winding_rectangle_jitter(double sig_lo, double sig_hi, double t_lo, double t_hi,
                             const WindingLimits& lim) {
    constexpr double jit[] = {0.0, 1e-7, -1e-7, 3.1e-7};
    for (size_t i = 0; i < 4; ++i) {
        try {
            return winding_rectangle(sig_lo, sig_hi, t_lo + jit[i], t_hi + jit[i], lim);
        } catch (const winding_error&) {
            if (i == 3) throw;
        }
    }
    throw winding_error("winding: unreachable");
}

// Winding of zeta' around a circle (certification of a single root).
int winding_circle(Complex center, double radius, const WindingLimits& lim) {
    ArgTracker tr(
        [center, radius](double u) {
            return center + radius * Complex(std::cos(kTwoPi * u), std::sin(kTwoPi * u));
        },
        0.125, lim);
    double total = 0.0;
    for (int k = 0; k < 4; ++k) total += tr.total_arg(0.25 * k, 0.25 * (k + 1));
    long n = std::lround(total / kTwoPi);
    if (std::abs(total / kTwoPi - static_cast<double>(n)) > 0.25)
        throw winding_error("winding: circle argument sum far from 2*pi multiple");
    return static_cast<int>(n);
}

// ── Newton on zeta' ──────────────────────────────────────────────────────────

struct NewtonResult {
    Complex root;
    double residual = 0.0;
    bool converged = false;
};

// Newton with a central-difference derivative on the first step, secant
// updates afterwards; the derivative is refreshed whenever a step misbehaves.
NewtonResult newton_zprime(Complex s0, double residual_target, double step_cap,
                           double accuracy) {
    constexpr double h = 1e-5;
    Complex s = s0;
    NewtonResult out;
    auto fd_deriv = [&](Complex at) {
        detail::EmEval fp = detail::zeta_core(at + Complex(h, 0.0), accuracy, true);
        detail::EmEval fm = detail::zeta_core(at - Complex(h, 0.0), accuracy, true);
        return (fp.deriv - fm.deriv) / (2.0 * h);
    };
    Complex f_prev{}, s_prev{};
    bool have_prev = false;
    for (int iter = 0; iter < 48; ++iter) {
        Complex f = detail::zeta_core(s, accuracy, true).deriv;
        double az = std::abs(f);
        if (az <= residual_target) {
            out.root = s;
            out.residual = az;
            out.converged = true;
            return out;
        }
        Complex d;
        if (have_prev && std::abs(s - s_prev) > 1e-13) {
            d = (f - f_prev) / (s - s_prev);
            if (std::abs(d) < 1e-12) d = fd_deriv(s);
        } else {
            d = fd_deriv(s);
        }
        if (std::abs(d) < 1e-14) break;
        Complex step = f / d;
        if (std::abs(step) > step_cap) step *= step_cap / std::abs(step);
        s_prev = s;
        f_prev = f;
        have_prev = true;
        s -= step;
        if (s.real() < 0.45 || s.real() > 6.2) break;  // left the plausible region
    }
    return out;
}

// Deficit search: quadri-subdivide until each box winds 0 or 1, then Newton
// from the box center, shrinking further when Newton escapes the box.
void search_box(double sig_lo, double sig_hi, double t_lo, double t_hi, int winding,
                int depth, const ZPrimeOptions& opts, const WindingLimits& lim,
                std::vector<NewtonResult>& out) {
    if (winding <= 0) return;
    if (depth > opts.max_subdivisions) {
        char msg[256];
        std::snprintf(msg, sizeof(msg),
                      "zprime: subdivision limit at box [%.9f, %.9f] x (%.9f, %.9f] w=%d",
                      sig_lo, sig_hi, t_lo, t_hi, winding);
        throw winding_error(msg);
    }
    if (winding == 1) {
        Complex center(0.5 * (sig_lo + sig_hi), 0.5 * (t_lo + t_hi));
        const double diag = std::hypot(sig_hi - sig_lo, t_hi - t_lo);
        double cap = std::max(diag, 2e-6);
        NewtonResult r = newton_zprime(center, opts.residual_target, cap, opts.accuracy);
        bool inside = r.converged && r.root.real() > sig_lo && r.root.real() <= sig_hi &&
                      r.root.imag() > t_lo && r.root.imag() <= t_hi;
        // tiny boxes carry jittered boundaries; a root a hair outside is the
        // one the winding saw
        if (!inside && r.converged && diag < 1e-5) {
        bool near = r.root.real() > sig_lo - 3.0 * diag &&
                        r.root.real() <= sig_hi + 3.0 * diag &&
                        r.root.imag() > t_lo - 3.0 * diag &&
                        r.root.imag() <= t_hi + 3.0 * diag;
            inside = near;
        }
        if (inside) {
            out.push_back(r);
            return;
        }
        // fall through: halve the box around the unique zero and retry
    }
    // split with independently computed child windings; a zero close to the
    // cut makes the children disagree with the parent, so move the cut
    const bool split_t = (t_hi - t_lo) >= (sig_hi - sig_lo);
    constexpr double fracs[] = {0.5, 0.58, 0.37};
    for (double frac : fracs) {
        int w1, w2;
        double cut;
        try {
            if (split_t) {
                cut = t_lo + frac * (t_hi - t_lo);
                w1 = winding_rectangle_jitter(sig_lo, sig_hi, t_lo, cut, lim);
                w2 = winding_rectangle_jitter(sig_lo, sig_hi, cut, t_hi, lim);
            } else {
                cut = sig_lo + frac * (sig_hi - sig_lo);
                w1 = winding_rectangle_jitter(sig_lo, cut, t_lo, t_hi, lim);
                w2 = winding_rectangle_jitter(cut, sig_hi, t_lo, t_hi, lim);
            }
        } catch (const winding_error&) {
            continue;
        }
        if (w1 + w2 != winding) continue;
        if (split_t) {
            search_box(sig_lo, sig_hi, t_lo, cut, w1, depth + 1, opts, lim, out);
            search_box(sig_lo, sig_hi, cut, t_hi, w2, depth + 1, opts, lim, out);
        } else {
            search_box(sig_lo, cut, t_lo, t_hi, w1, depth + 1, opts, lim, out);
            search_box(cut, sig_hi, t_lo, t_hi, w2, depth + 1, opts, lim, out);
        }
        return;
    }
    throw winding_error("zprime: no consistent cut found while subdividing");
}

}  // namespace

// ── Zero-free right abscissa for zeta' ───────────────────────────────────────

// -zeta'(s) = sum_{n>=2} log n * n^{-s}.  At sigma0 the n = 2 term dominates
// the rest of the series, and each ratio (log n/log 2)(2/n)^sigma only shrinks
// to the right of sigma0; so no zeros exist with sigma >= sigma0.
double zprime_sigma_bound() {
    static const double bound = [] {
        const double sigma0 = 3.5;
        double rest = 0.0;
        for (int n = 3; n <= 4096; ++n)
            rest += std::log(static_cast<double>(n)) *
                    std::pow(static_cast<double>(n), -sigma0);
        double b = sigma0 - 1.0;  // integral tail beyond 4096
        rest += std::pow(4096.0, -b) * (std::log(4096.0) / b + 1.0 / (b * b));
        double lead = std::log(2.0) * std::pow(2.0, -sigma0);
        if (lead <= rest) throw error("zprime_sigma_bound: domination check failed");
        return sigma0;
    }();
    return bound;
}

// ── Zeros of zeta' ───────────────────────────────────────────────────────────

namespace {

// Seed abscissa: the balance of the two nearest Lorentzians against the
// (1/2) log t background puts the saddle near beta' - 1/2 = log(t) gap^2/16.
double seed_sigma(double gap, double t) {
    return 0.5 + std::clamp(std::log(t) * gap * gap / 16.0, 0.02, 1.15);
}

}  // namespace

std::vector<ZPrimeZero> find_zprime_zeros(double t_lo, double t_hi,
                                          std::span<const ZetaZero> zeros,
                                          const ZPrimeOptions& opts, ZPrimeStats* stats) {
    if (t_lo >= t_hi) return {};
    if (t_lo < 10.0) throw domain_error("find_zprime_zeros: t_lo below 10");
    if (opts.sigma_max <= 0.5 || opts.sigma_max > 6.0)
        throw domain_error("find_zprime_zeros: sigma_max outside (1/2, 6]");
    // the list must reach t_hi and extend below t_lo unless it starts at the
    // very first zero (ordinates below 14.13 do not exist)
    if (zeros.empty() || zeros.back().gamma < t_hi ||
        (zeros.front().gamma > t_lo && zeros.front().index != 1))
        throw coverage_error("find_zprime_zeros: zero list does not cover the window");

    const double sig_hi = std::min(opts.sigma_max, zprime_sigma_bound());
    const double sig_lo = 0.5;
    WindingLimits lim{std::min(opts.accuracy, 1e-9), 1e-9};

    // cells: the window cut at every interior ordinate
    std::vector<std::pair<double, double>> cells;
    {
        double lo = t_lo;
        for (const auto& z : zeros) {
            if (z.gamma <= t_lo) continue;
            if (z.gamma >= t_hi) break;
            cells.emplace_back(lo, z.gamma);
            lo = z.gamma;
        }
        cells.emplace_back(lo, t_hi);
    }

    const size_t per = static_cast<size_t>(std::max(4, opts.gaps_per_strip));
    const int n_strips = static_cast<int>((cells.size() + per - 1) / per);
    std::vector<std::vector<ZPrimeZero>> results(static_cast<size_t>(n_strips));

    parallel_chunks(n_strips, opts.threads, [&](int si) {
        size_t g0 = static_cast<size_t>(si) * per;
        size_t g1 = std::min(g0 + per, cells.size());
        double lo = cells[g0].first;
        double hi = cells[g1 - 1].second;

        // 1. Newton from a seed inside each cell
        std::vector<NewtonResult> roots;
        long mark = detail::eval_count();
        for (size_t gi = g0; gi < g1; ++gi) {
            auto [ga, gb] = cells[gi];
            double gap = gb - ga;
            Complex s0(seed_sigma(gap, ga), 0.5 * (ga + gb));
            NewtonResult r =
                newton_zprime(s0, opts.residual_target, 1.5 * gap + 0.5, opts.accuracy);
            if (r.converged && r.root.real() > sig_lo && r.root.real() <= sig_hi &&
                r.root.imag() > lo && r.root.imag() <= hi)
                roots.push_back(r);
            else if (stats)
                ++stats->seeds_missed;
        }
        if (stats) {
            stats->seed_newton_evals += detail::eval_count() - mark;
            mark = detail::eval_count();
        }

        // 2. dedupe: different seeds can slide to the same root
        auto dedupe = [](std::vector<NewtonResult>& v) {
            std::sort(v.begin(), v.end(), [](const NewtonResult& x, const NewtonResult& y) {
                return x.root.imag() < y.root.imag();
            });
            std::vector<NewtonResult> u;
            for (const auto& r : v) {
                bool dup = false;
                for (auto it = u.rbegin(); it != u.rend(); ++it) {
                    if (r.root.imag() - it->root.imag() > 1e-8) break;
                    if (std::abs(r.root - it->root) < 1e-8) dup = true;
                }
                if (!dup) u.push_back(r);
            }
            v = std::move(u);
        };
        dedupe(roots);
        std::vector<NewtonResult> unique = std::move(roots);

        // 2b. cells that did not retain a root get alternative seeds; most of
        //     the remaining gaps hold either no zero or one with an atypical
        //     abscissa, so vary the seed height and abscissa
        {
            auto cell_owned = [&](size_t gi) {
                auto [ga, gb] = cells[gi];
                for (const auto& r : unique)
                    if (r.root.imag() > ga && r.root.imag() <= gb) return true;
                return false;
            };
            std::vector<NewtonResult> retried;
            for (size_t gi = g0; gi < g1; ++gi) {
                if (cell_owned(gi)) continue;
                auto [ga, gb] = cells[gi];
                const double gap = gb - ga;
                const double base = seed_sigma(gap, ga) - 0.5;
                const Complex alts[] = {
                    Complex(0.5 + 0.45 * base, ga + 0.5 * gap),
                    Complex(0.5 + 2.2 * base, ga + 0.5 * gap),
                    Complex(0.5 + base, ga + 0.3 * gap),
                    Complex(0.5 + base, ga + 0.7 * gap)};
                for (const Complex& s0 : alts) {
                    NewtonResult r = newton_zprime(s0, opts.residual_target,
                                                   1.5 * gap + 0.5, opts.accuracy);
                    if (!(r.converged && r.root.real() > sig_lo &&
                          r.root.real() <= sig_hi && r.root.imag() > lo &&
                          r.root.imag() <= hi))
                        continue;
                    if (r.root.imag() > ga && r.root.imag() <= gb) {
                        retried.push_back(r);
                        break;
                    }
                    retried.push_back(r);
                }
            }
            if (!retried.empty()) {
                unique.insert(unique.end(), retried.begin(), retried.end());
                dedupe(unique);
            }
        }

        // 3. completeness: strip winding must equal the root count
        int want = winding_rectangle_jitter(sig_lo, sig_hi, lo, hi, lim);
        if (stats) {
            stats->strip_winding_evals += detail::eval_count() - mark;
            mark = detail::eval_count();
        }
        if (want < static_cast<int>(unique.size()))
            throw certification_error("zprime: more roots than the strip winding");

        // 3a. a gap occasionally carries a second zero well to the right of
        //     the line; probe upper seeds before paying for a full hunt
        if (want > static_cast<int>(unique.size())) {
            std::vector<NewtonResult> probes;
            for (double probe_sigma : {1.7, 1.2, 2.3}) {
                for (size_t gi = g0; gi < g1; ++gi) {
                    auto [ga, gb] = cells[gi];
                    NewtonResult r =
                        newton_zprime(Complex(probe_sigma, 0.5 * (ga + gb)),
                                      opts.residual_target, 1.0, opts.accuracy);
                    if (r.converged && r.root.real() > sig_lo &&
                        r.root.real() <= sig_hi && r.root.imag() > lo &&
                        r.root.imag() <= hi)
                        probes.push_back(r);
                }
                std::vector<NewtonResult> merged = unique;
                merged.insert(merged.end(), probes.begin(), probes.end());
                dedupe(merged);
                if (static_cast<int>(merged.size()) >= want) {
                    unique = std::move(merged);
                    break;
                }
            }
            if (static_cast<int>(unique.size()) < want) {
                std::vector<NewtonResult> merged = unique;
                merged.insert(merged.end(), probes.begin(), probes.end());
                dedupe(merged);
                unique = std::move(merged);
            }
            if (want < static_cast<int>(unique.size()))
                throw certification_error("zprime: more roots than the strip winding");
        }

        // 3b. bisect toward the deficit ranges when seeds still miss
        if (want > static_cast<int>(unique.size())) {
            std::vector<NewtonResult> extra;
            auto count_in = [&](double a, double b) {
                int n = 0;
                for (const auto& r : unique)
                    if (r.root.imag() > a && r.root.imag() <= b) ++n;
                return n;
            };
            std::function<void(size_t, size_t, int)> hunt = [&](size_t c_lo, size_t c_hi,
                                                                int want_range) {
                const double a = std::max(lo, cells[c_lo].first);
                const double b = std::min(hi, cells[c_hi - 1].second);
                const int have = count_in(a, b);
                if (have == want_range) return;
                if (have > want_range)
                    throw certification_error("zprime: more roots than a range winding");
                if (c_hi - c_lo <= 2) {
                    std::vector<NewtonResult> sub;
                    search_box(sig_lo, sig_hi, a, b, want_range, 0, opts, lim, sub);
                    for (const auto& r : sub) {
                        bool dup = false;
                        for (const auto& u : unique)
                            if (std::abs(r.root - u.root) < 1e-8) dup = true;
                        for (const auto& u : extra)
                            if (std::abs(r.root - u.root) < 1e-8) dup = true;
                        if (!dup) extra.push_back(r);
                    }
                    return;
                }
                // cut at a cell boundary, verified against the parent count
                for (size_t shift : {0u, 1u, 2u}) {
                    const size_t mid = (c_lo + c_hi) / 2 + shift;
                    if (mid <= c_lo || mid >= c_hi) continue;
                    const double cut = cells[mid - 1].second;
                    const int w1 = winding_rectangle_jitter(sig_lo, sig_hi, a, cut, lim);
                    const int w2 = winding_rectangle_jitter(sig_lo, sig_hi, cut, b, lim);
                    if (w1 + w2 != want_range) continue;
                    hunt(c_lo, mid, w1);
                    hunt(mid, c_hi, w2);
                    return;
                }
                throw winding_error("zprime: no consistent cut in deficit hunt");
            };
            if (stats) ++stats->hunts;
            hunt(g0, g1, want);
            unique.insert(unique.end(), extra.begin(), extra.end());
            std::sort(unique.begin(), unique.end(),
                      [](const NewtonResult& x, const NewtonResult& y) {
                          return x.root.imag() < y.root.imag();
                      });
            if (want != static_cast<int>(unique.size()))
                throw completeness_error(
                    "zprime: strip winding still disagrees after subdivision search");
        }

        if (stats) {
            stats->hunt_evals += detail::eval_count() - mark;
            mark = detail::eval_count();
        }

        // 4. certification: small-circle winding of one around every root
        auto& out = results[static_cast<size_t>(si)];
        for (size_t i = 0; i < unique.size(); ++i) {
            const auto& r = unique[i];
            double radius = 1e-3;
            if (i > 0)
                radius = std::min(radius, 0.45 * std::abs(r.root - unique[i - 1].root));
            if (i + 1 < unique.size())
                radius = std::min(radius, 0.45 * std::abs(r.root - unique[i + 1].root));
            radius = std::max(radius, 2e-7);
            int w = winding_circle(r.root, radius, lim);
            if (w != 1) {
                radius *= 0.1;
                w = winding_circle(r.root, radius, lim);
            }
            if (w != 1)
                throw certification_error("zprime: closing circle does not wind once");

            ZPrimeZero z;
            z.beta_prime = r.root.real();
            z.gamma_prime = r.root.imag();
            z.newton_residual = r.residual;
            auto it = std::upper_bound(
                zeros.begin(), zeros.end(), z.gamma_prime,
                [](double v, const ZetaZero& zz) { return v < zz.gamma; });
            size_t k = static_cast<size_t>(std::distance(zeros.begin(), it));
            z.box_id = (k > 0) ? zeros[k - 1].index : 0;
            double dline = 1e30;
            if (k > 0) dline = std::min(dline, z.gamma_prime - zeros[k - 1].gamma);
            if (k < zeros.size()) dline = std::min(dline, zeros[k].gamma - z.gamma_prime);
            z.on_line_coincident = (z.beta_prime - 0.5 < 1e-8) && (dline < 1e-8);
            out.push_back(z);
        }
        if (stats) stats->cert_evals += detail::eval_count() - mark;
    });

    std::vector<ZPrimeZero> all;
    for (auto& part : results) all.insert(all.end(), part.begin(), part.end());
    std::sort(all.begin(), all.end(), [](const ZPrimeZero& x, const ZPrimeZero& y) {
        return x.gamma_prime < y.gamma_prime;
    });
    for (const auto& z : all)
        if (z.beta_prime < 0.5 - 1e-8)
            throw certification_error("zprime: certified zero left of the half-line");
    return all;
}

std::vector<ZPrimeZero> find_zprime_zeros(double t_lo, double t_hi,
                                          const ZPrimeOptions& opts) {
    double guard = 2.0 * mean_gap(t_lo);
    ScanOptions scan;
    scan.accuracy = opts.accuracy;
    scan.threads = opts.threads;
    std::vector<ZetaZero> zeros =
        find_zeta_zeros(std::max(10.0, t_lo - guard), t_hi + guard, scan);
    return find_zprime_zeros(t_lo, t_hi, zeros, opts, nullptr);
}

// ── Pairing ──────────────────────────────────────────────────────────────────

PairingRecord pair_with_closest(const ZPrimeZero& zp, std::span<const ZetaZero> zeros,
                                double window_T) {
    if (zeros.empty()) throw coverage_error("pair_with_closest: empty zero list");
    const double gp = zp.gamma_prime;
    const double G = 10.0 * mean_gap(gp);
    if (gp - zeros.front().gamma < G || zeros.back().gamma - gp < G)
        throw coverage_error("pair_with_closest: gamma' within guard margin of list edge");

    const double b = zp.beta_prime - 0.5;
    auto it = std::lower_bound(zeros.begin(), zeros.end(), gp,
                               [](const ZetaZero& z, double v) { return z.gamma < v; });
    size_t lo = static_cast<size_t>(std::distance(zeros.begin(), it));
    if (lo > 0) --lo;

    size_t best = lo;
    double best_d = std::hypot(b, gp - zeros[lo].gamma);
    auto consider = [&](size_t k) {
        double d = std::hypot(b, gp - zeros[k].gamma);
        if (d < best_d - 1e-12 ||
            (std::abs(d - best_d) <= 1e-12 && zeros[k].gamma < zeros[best].gamma)) {
            best = k;
            best_d = d;
        }
    };
    for (size_t k = lo + 1; k < zeros.size(); ++k) {
        if (zeros[k].gamma - gp > best_d + 1e-12) break;
        consider(k);
    }
    for (size_t k = lo; k-- > 0;) {
        if (gp - zeros[k].gamma > best_d + 1e-12) break;
        consider(k);
    }

    if (best == 0 || best + 1 >= zeros.size())
        throw coverage_error("pair_with_closest: closest zero lacks neighbors in the list");

    PairingRecord rec;
    rec.zprime = zp;
    rec.rho_c_gamma = zeros[best].gamma;
    rec.dist = best_d;
    rec.gap_up = zeros[best + 1].gamma - zeros[best].gamma;
    rec.gap_down = zeros[best].gamma - zeros[best - 1].gamma;
    rec.gap_nearest = std::min(rec.gap_up, rec.gap_down);
    rec.log_T = std::log(window_T);
    return rec;
}

std::vector<PairingRecord> pair_all(std::span<const ZPrimeZero> zprimes,
                                    std::span<const ZetaZero> zeros, double window_T) {
    std::vector<PairingRecord> out;
    out.reserve(zprimes.size());
    for (const auto& zp : zprimes) {
        if (zp.on_line_coincident) continue;  // excluded from pairing statistics
        out.push_back(pair_with_closest(zp, zeros, window_T));
    }
    return out;
}

}  // namespace zetalab
