#include "zetalab/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace zetalab {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

// ── von Mangoldt table ───────────────────────────────────────────────────────

VonMangoldtTable::VonMangoldtTable(std::uint32_t n_max) : n_max_(n_max) {
    if (n_max < 2) throw domain_error("VonMangoldtTable: n_max below 2");
    values_.assign(static_cast<size_t>(n_max) + 1, 0.0);
    std::vector<bool> composite(static_cast<size_t>(n_max) + 1, false);
    for (std::uint32_t p = 2; p <= n_max; ++p) {
        if (composite[p]) continue;
        const double lp = std::log(static_cast<double>(p));
        if (static_cast<std::uint64_t>(p) * p <= n_max)
            for (std::uint64_t q = static_cast<std::uint64_t>(p) * p; q <= n_max; q += p)
                composite[static_cast<size_t>(q)] = true;
        for (std::uint64_t q = p; q <= n_max; q *= p) {
            values_[static_cast<size_t>(q)] = lp;
            if (q > n_max / p) break;
        }
    }
    for (std::uint32_t n = 2; n <= n_max; ++n)
        if (values_[n] != 0.0) prime_powers_.emplace_back(n, values_[n]);
}

double VonMangoldtTable::psi_sum(std::uint32_t x) const {
    if (x > n_max_) throw domain_error("psi_sum: x beyond table");
    double s = 0.0;
    for (const auto& [n, lam] : prime_powers_) {
        if (n > x) break;
        s += lam;
    }
    return s;
}

const VonMangoldtTable& von_mangoldt() {
    static const VonMangoldtTable table(1'000'000);
    return table;
}

// ── Polynomials ──────────────────────────────────────────────────────────────

double smoothing_w(std::uint32_t n, std::uint32_t N) {
    if (n < 1 || n > N) throw domain_error("smoothing_w: n outside [1, N]");
    const double nn = static_cast<double>(n), NN = static_cast<double>(N);
    if (nn * nn <= NN) return 1.0;
    return std::log(NN / nn) / std::log(NN);
}

namespace {

double poly_weight(const PolySpec& spec, std::uint32_t n) {
    switch (spec.kind) {
        case PolyKind::A:
            return smoothing_w(n, spec.N);
        case PolyKind::B:
            return 1.0 -
                   std::log(static_cast<double>(n)) / std::log(static_cast<double>(spec.N));
        case PolyKind::D:
            return 1.0;
    }
    return 0.0;
}

}  // namespace

Complex eval_poly(const PolySpec& spec, double t, const VonMangoldtTable& table) {
    if (spec.N < 2 || spec.N > table.n_max())
        throw domain_error("eval_poly: N outside [2, n_max]");
    const double sigma = 0.5 + spec.sigma_offset;
    Complex sum{};
    for (const auto& [n, lam] : table.prime_powers()) {
        if (n > spec.N) break;
        const double ln = std::log(static_cast<double>(n));
        const double coef = lam * poly_weight(spec, n) * std::exp(-sigma * ln);
        const double ph = -t * ln;
        sum += coef * Complex(std::cos(ph), std::sin(ph));
    }
    return sum;
}

double poly_abs_bound(const PolySpec& spec, const VonMangoldtTable& table) {
    if (spec.N < 2 || spec.N > table.n_max())
        throw domain_error("poly_abs_bound: N outside [2, n_max]");
    const double sigma = 0.5 + spec.sigma_offset;
    double sum = 0.0;
    for (const auto& [n, lam] : table.prime_powers()) {
        if (n > spec.N) break;
        sum += std::abs(lam * poly_weight(spec, n)) *
               std::exp(-sigma * std::log(static_cast<double>(n)));
    }
    return sum;
}

// ── Window counts ────────────────────────────────────────────────────────────

long window_count(double t, std::uint32_t N, std::span<const ZetaZero> zeros) {
    if (N < 2) throw domain_error("window_count: N below 2");
    const double w = kPi / std::log(static_cast<double>(N));
    const double guard = mean_gap(std::max(t, 10.1));
    if (zeros.empty() || zeros.front().gamma > t - w - guard ||
        zeros.back().gamma < t + w + guard)
        throw coverage_error("window_count: zero list does not cover the window");
    auto lo = std::upper_bound(zeros.begin(), zeros.end(), t - w,
                               [](double v, const ZetaZero& z) { return v < z.gamma; });
    auto hi = std::upper_bound(zeros.begin(), zeros.end(), t + w,
                               [](double v, const ZetaZero& z) { return v < z.gamma; });
    return static_cast<long>(std::distance(lo, hi));
}

// ── Selberg approximation ────────────────────────────────────────────────────

SelbergError selberg_error(ComplexPoint s, std::uint32_t N, double c, double T,
                           std::span<const ZetaZero> zeros,
                           const VonMangoldtTable& table) {
    if (c <= 0.0 || c >= 1.0) throw domain_error("selberg_error: c outside (0,1)");
    if (T < 10.0) throw domain_error("selberg_error: T below 10");
    const double logT = std::log(T);
    const double logN = std::log(static_cast<double>(N));
    const double radius = c / logT;

    const double guard = mean_gap(std::max(s.t, 10.1));
    if (zeros.empty() || zeros.front().gamma > s.t - radius - guard ||
        zeros.back().gamma < s.t + radius + guard)
        throw coverage_error("selberg_error: zero list does not cover the disc");

    EvalResult ld = log_deriv(s, 1e-6);

    Complex zero_sum{};
    const Complex sv = s.value();
    auto lo = std::lower_bound(zeros.begin(), zeros.end(), s.t - radius,
                               [](const ZetaZero& z, double v) { return z.gamma < v; });
    for (auto it = lo; it != zeros.end() && it->gamma <= s.t + radius; ++it) {
        Complex rho(0.5, it->gamma);
        if (std::abs(sv - rho) < radius) zero_sum += 1.0 / (sv - rho);
    }

    PolySpec a{PolyKind::A, N, s.sigma - 0.5};
    PolySpec b{PolyKind::B, N, 0.0};
    const double script_e =
        (std::abs(eval_poly(a, s.t, table)) + std::abs(eval_poly(b, s.t, table))) / logN +
        logT / logN;

    SelbergError out;
    out.lhs = ld.value - zero_sum;
    out.script_e = script_e;
    out.error_budget = logT / c * script_e;
    return out;
}

// ── Fejer kernel ─────────────────────────────────────────────────────────────

double fejer(double v, const FejerParams& params) {
    if (params.delta_cap <= 0.0) throw domain_error("fejer: Delta must be positive");
    const double x = kPi * params.delta_cap * v;
    if (std::abs(x) < 1e-6) {
        const double s = 1.0 - x * x / 6.0;  // sin(x)/x near the removable point
        return s * s;
    }
    const double s = std::sin(x) / x;
    return s * s;
}

double fejer_hat(double x, const FejerParams& params) {
    const double d = params.delta_cap;
    if (d <= 0.0) throw domain_error("fejer_hat: Delta must be positive");
    const double ax = std::abs(x);
    if (ax >= d) return 0.0;
    return (1.0 - ax / d) / d;
}

// ── Explicit formula ─────────────────────────────────────────────────────────

namespace {

double simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double h = b - a;
    const double whole = h / 6.0 * (fa + 4.0 * fm + fb);
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (depth > 24 || std::abs(err) < tol) return left + right + err;
    return simpson_adaptive(f, a, m, fa, flm, fm, 0.5 * tol, depth + 1) +
           simpson_adaptive(f, m, b, fm, frm, fb, 0.5 * tol, depth + 1);
}

double integrate_cell(const std::function<double(double)>& f, double a, double b,
                      double tol) {
    const double m = 0.5 * (a + b);
    return simpson_adaptive(f, a, b, f(a), f(m), f(b), tol, 0);
}

}  // namespace

ExplicitFormulaSides explicit_formula_sides(double t, const FejerParams& params,
                                            std::span<const ZetaZero> zeros,
                                            const VonMangoldtTable& table) {
    const double delta = params.delta_cap;
    if (delta <= 0.0)
        throw domain_error("explicit_formula_sides: Delta must be positive");
    if (kTwoPi * delta > std::log(static_cast<double>(table.n_max())))
        throw constraint_error("explicit_formula_sides: 2 pi Delta beyond log n_max");
    if (zeros.empty()) throw coverage_error("explicit_formula_sides: empty zero list");

    const double w_avail = std::min(t - zeros.front().gamma, zeros.back().gamma - t);
    const double W = w_avail - mean_gap(std::max(t, 10.1));
    if (W < std::max(10.0, 6.0 / delta))
        throw coverage_error("explicit_formula_sides: zero coverage around t too thin");

    // zero side: truncated kernel sum over |gamma - t| <= W
    double zero_side = 0.0;
    auto lo = std::lower_bound(zeros.begin(), zeros.end(), t - W,
                               [](const ZetaZero& z, double v) { return z.gamma < v; });
    for (auto it = lo; it != zeros.end() && it->gamma <= t + W; ++it)
        zero_side += fejer(it->gamma - t, params);

    // tail beyond W: kernel envelope (pi Delta v)^{-2} against the counting
    // density log(u/2pi)/2pi, plus the reflected (gamma < 0) branch
    const double dens = std::log((t + W) / kTwoPi) / kTwoPi;
    const double env = 1.0 / (kPi * kPi * delta * delta);
    const double tail_zeros = 2.0 * env * dens / W +
                              2.0 * env * (std::log(t / kPi) + 2.0) / (kPi * t);

    // archimedean side: (1/2pi) int F(u-t) Re psi(1/4 + iu/2) du; adaptive
    // Simpson per cell between consecutive kernel zeros
    const double quad_tol = 1e-8;
    auto integrand = [&](double u) {
        return fejer(u - t, params) * digamma(Complex(0.25, 0.5 * u)).real();
    };
    double gamma_int = 0.0;
    const long cells = static_cast<long>(std::ceil(W * delta));
    const double cell_tol = quad_tol / (2.0 * static_cast<double>(cells) + 2.0);
    for (long k = -cells; k < cells; ++k) {
        double a = std::max(t + static_cast<double>(k) / delta, t - W);
        double b = std::min(t + static_cast<double>(k + 1) / delta, t + W);
        if (a >= b) continue;
        gamma_int += integrate_cell(integrand, a, b, cell_tol);
    }
    gamma_int /= kTwoPi;
    const double tail_gamma = env * (std::log(0.5 * (t + W)) + 2.0) / (kPi * W);

    // prime-power side: hat support ends at n = e^{2 pi Delta}
    double prime_sum = 0.0;
    const double n_cap = std::exp(kTwoPi * delta);
    for (const auto& [n, lam] : table.prime_powers()) {
        if (static_cast<double>(n) >= n_cap) break;
        const double ln = std::log(static_cast<double>(n));
        prime_sum += lam / std::sqrt(static_cast<double>(n)) *
                     fejer_hat(ln / kTwoPi, params) * 2.0 * std::cos(t * ln);
    }
    prime_sum /= kTwoPi;

    ExplicitFormulaSides out;
    out.zero_side = zero_side;
    out.arithmetic_side = gamma_int - prime_sum;
    // stated remainder with headroom constant 10, plus our own truncations
    out.truncation_bound =
        10.0 * (std::exp(kPi * delta / 2.0) / (t * t) + 1.0 / delta) + tail_zeros +
        tail_gamma + quad_tol;
    return out;
}

// ── Moments ──────────────────────────────────────────────────────────────────

MomentResult moment(const PolySpec& spec, std::span<const double> ordinates, int k,
                    double T, const VonMangoldtTable& table) {
    if (k < 1) throw domain_error("moment: k must be at least 1");
    if (std::pow(static_cast<double>(spec.N), k) > std::sqrt(T))
        throw constraint_error("moment: N^k exceeds sqrt(T)");
    double sum = 0.0;
    for (double g : ordinates) {
        const double a = std::abs(eval_poly(spec, g, table));
        sum += std::pow(a * a, k);
    }
    MomentResult out;
    out.sum = sum;
    const double logN = std::log(static_cast<double>(spec.N));
    out.ratio = sum / (T * std::log(T) * std::pow(logN, 2 * k) *
                       std::pow(static_cast<double>(k), k));
    return out;
}

}  // namespace zetalab
