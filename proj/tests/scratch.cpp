#include "zetalab/zeros.hpp"
#include <cstdio>
#include <chrono>
#include <cmath>
using namespace zetalab;
using Clock = std::chrono::steady_clock;
static double secs(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}
int main() {
    setvbuf(stdout, nullptr, _IONBF, 0);
    auto t0 = Clock::now();
    // T = 1000 window with guards
    double T = 1000.0, c = 2.0;
    double guard = 12.0 * mean_gap(T);
    auto zs = find_zeta_zeros(T - guard, c * T + guard);
    auto t1 = Clock::now();
    std::printf("zeros in (%g, %g]: %zu, took %.2fs\n", T - guard, c * T + guard, zs.size(), secs(t0, t1));
    long nlo = count_zeros(T), nhi = count_zeros(c * T);
    std::printf("count_zeros: N(%g)=%ld N(%g)=%ld diff=%ld\n", T, nlo, c * T, nhi, nhi - nlo);

    auto zp = find_zprime_zeros(T, c * T, zs, {});
    auto t2 = Clock::now();
    std::printf("zeta' zeros in (T,2T]: %zu, took %.2fs\n", zp.size(), secs(t1, t2));
    double expected = (double)(nhi - nlo) - T * std::log(2.0) / (2 * 3.14159265358979323846);
    std::printf("  parity: found %zu, N-diff %ld, corrected expectation %.1f (ratio %.4f)\n",
                zp.size(), nhi - nlo, expected, zp.size() / expected);
    double bmax = 0; double resmax = 0;
    for (auto& z : zp) { bmax = std::max(bmax, z.beta_prime); resmax = std::max(resmax, z.newton_residual); }
    std::printf("  max beta' = %.4f, max residual = %.2e\n", bmax, resmax);

    auto pr = pair_all(zp, zs, T);
    auto t3 = Clock::now();
    std::printf("pairings: %zu, took %.3fs\n", pr.size(), secs(t2, t3));
    int l11bad = 0; double worst = 1e30;
    for (auto& p : pr) {
        double margin = p.dist * p.dist - 2.0 * std::max(0.0, p.zprime.beta_prime - 0.5) / std::log(p.zprime.gamma_prime);
        worst = std::min(worst, margin);
        if (margin < -1e-12) ++l11bad;
    }
    std::printf("  lemma11 violations: %d (worst margin %.3e)\n", l11bad, worst);
    // lemma 7: bucket zeros of zeta' with beta' < 1/2 + 1/log T by gap
    {
        double thr = 0.5 + 1.0 / std::log(T);
        int multi = 0; size_t zi = 0;
        for (size_t k = 0; k + 1 < zs.size(); ++k) {
            int cnt = 0;
            for (auto& z : zp)
                if (z.beta_prime < thr && z.gamma_prime > zs[k].gamma && z.gamma_prime <= zs[k+1].gamma) ++cnt;
            if (cnt > 1) ++multi;
        }
        (void)zi;
        std::printf("  lemma7 multi-occupied boxes: %d\n", multi);
    }
    // seed diagnostics: distribution of (beta'-1/2) vs gap
    double su = 0, su2 = 0; int n = 0;
    for (auto& p : pr) {
        double gap = p.gap_up + 0.0;
        double u = (p.zprime.beta_prime - 0.5) / (gap * gap) ;
        su += u; su2 += u * u; ++n;
    }
    std::printf("  (beta'-.5)/gap^2: mean %.4f rms %.4f\n", su / n, std::sqrt(su2 / n));
    return 0;
}
