// Command-line front end: compute zero archives, derive statistics, run the
// verification suites, and cross-check against external ordinate tables.
//
// Subcommands
//   zeros       compute zeta zeros on the configured window -> zeros.csv
//   zprime      compute zeta' zeros and pairings             -> zprime.csv, pairings.csv
//   stats       distribution curves, pair correlation, fits  -> CSV + stats.json
//   verify      identity/inequality suites                   -> verify.json
//   crosscheck  compare local zeros against an external list -> crosscheck.json
//
// Every flag can also be set through the environment as ZETALAB_<NAME>.
// Exit codes: 0 success, 1 usage error, 2 verification violation,
// 3 computation failure.  Outputs are deterministic for a given config and
// archive set; the thread count never changes any emitted number.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <string>

#include "zetalab/dirichlet.hpp"
#include "zetalab/stats.hpp"
#include "zetalab/store.hpp"
#include "zetalab/zeros.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace zetalab;

namespace {

constexpr int kFormatVersion = 1;
constexpr double kPcUMax = 4.0;
constexpr int kPcBins = 64;
constexpr int kEfPoints = 100;

struct RunConfig {
    double T = 1000.0;
    double mult = 2.0;
    double sigma_max = 6.0;
    double eps_min = 0.05;
    double eps_max = 32.0;
    int eps_points = 48;
    int threads = 1;
    double accuracy = 1e-10;
    std::string out_dir = "out";
    std::string external_path;

    void validate() const {
        if (T < 100.0) throw domain_error("config: T must be at least 100");
        if (mult <= 1.0 || mult > 4.0)
            throw domain_error("config: mult must lie in (1, 4]");
        if (sigma_max <= 0.5 || sigma_max > 6.0)
            throw domain_error("config: sigma-max must lie in (1/2, 6]");
        if (eps_points < 8) throw domain_error("config: eps-points must be at least 8");
        if (eps_min <= 0.0 || eps_max <= eps_min)
            throw domain_error("config: need 0 < eps-min < eps-max");
        if (threads < 1) throw domain_error("config: threads must be positive");
        if (accuracy <= 0.0 || accuracy > 1e-6)
            throw domain_error("config: accuracy must lie in (0, 1e-6]");
    }

    // guard margin so pairing and gap statistics near the window edges are
    // covered (ten mean gaps plus slack)
    double guard() const { return 12.0 * mean_gap(T); }
    double lo() const { return std::max(10.0, T - guard()); }
    double hi() const { return mult * T + guard(); }

    json to_json() const {
        return json{{"T", T},
                    {"mult", mult},
                    {"sigma_max", sigma_max},
                    {"eps_min", eps_min},
                    {"eps_max", eps_max},
                    {"eps_points", eps_points},
                    {"threads", threads},
                    {"accuracy", accuracy},
                    {"out", out_dir}};
    }
};

std::string path_in(const RunConfig& cfg, const char* name) {
    return (fs::path(cfg.out_dir) / name).string();
}

ZeroArchive load_required(const RunConfig& cfg, const char* name) {
    const std::string p = path_in(cfg, name);
    if (!fs::exists(p))
        throw error(std::string("missing archive ") + p + " (run the producing step first)");
    return load_archive(p);
}

void write_text(const std::string& path, const std::string& body) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open " + path);
    out << body;
}

void write_json(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

// ── subcommands ──────────────────────────────────────────────────────────────

int cmd_zeros(const RunConfig& cfg) {
    ScanOptions opts;
    opts.accuracy = cfg.accuracy;
    opts.threads = cfg.threads;
    auto zeros = find_zeta_zeros(cfg.lo(), cfg.hi(), opts);
    fs::create_directories(cfg.out_dir);
    save_archive(make_zeta_archive(cfg.lo(), cfg.hi(), std::move(zeros)),
                 path_in(cfg, "zeros.csv"));
    std::fprintf(stderr, "zeros: window (%.3f, %.3f] written to %s\n", cfg.lo(), cfg.hi(),
                 path_in(cfg, "zeros.csv").c_str());
    return 0;
}

int cmd_zprime(const RunConfig& cfg) {
    ZeroArchive za = load_required(cfg, "zeros.csv");
    ZPrimeOptions opts;
    opts.sigma_max = cfg.sigma_max;
    opts.accuracy = cfg.accuracy;
    opts.threads = cfg.threads;
    auto zprimes = find_zprime_zeros(cfg.T, cfg.mult * cfg.T, za.zeta_records, opts);
    auto pairings = pair_all(zprimes, za.zeta_records, cfg.T);
    save_archive(make_zprime_archive(cfg.T, cfg.mult * cfg.T, std::move(zprimes)),
                 path_in(cfg, "zprime.csv"));
    save_archive(make_pairing_archive(cfg.T, cfg.mult * cfg.T, std::move(pairings)),
                 path_in(cfg, "pairings.csv"));
    std::fprintf(stderr, "zprime: window (%.1f, %.1f] written to %s\n", cfg.T,
                 cfg.mult * cfg.T, cfg.out_dir.c_str());
    return 0;
}

std::string curve_csv(const DistributionCurve& c) {
    std::string out = "epsilon,value,count\n";
    char buf[96];
    for (int i = 0; i < c.epsilon_grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%ld\n", c.epsilon_grid[i],
                      c.values[i], static_cast<long>(c.counts[i]));
        out += buf;
    }
    return out;
}

int cmd_stats(const RunConfig& cfg) {
    ZeroArchive za = load_required(cfg, "zeros.csv");
    ZeroArchive zp = load_required(cfg, "zprime.csv");
    const auto grid = geometric_grid(cfg.eps_min, cfg.eps_max, cfg.eps_points);

    json j;
    j["format_version"] = kFormatVersion;
    j["config"] = cfg.to_json();
    j["window_T"] = cfg.T;
    j["window_kind"] = "fixed-window estimate (liminf not computable at finite height)";

    DistributionCurve m = empirical_m(za.zeta_records, cfg.T, grid, cfg.mult);
    DistributionCurve mp = empirical_m_prime(zp.zprime_records, cfg.T, grid, cfg.mult);
    write_text(path_in(cfg, "m_curve.csv"), curve_csv(m));
    write_text(path_in(cfg, "m_prime_curve.csv"), curve_csv(mp));

    auto emit_curve = [&](const DistributionCurve& c, const char* file,
                          const char* statistic) {
        json b;
        b["file"] = file;
        b["population"] = c.population;
        b["statistic"] = statistic;
        b["top_value"] = (c.values.size() > 0) ? c.values[c.values.size() - 1] : 0.0;
        try {
            auto [lo, hi] = default_fit_range(c);
            ScalingFit f = scaling_fit(c, lo, hi);
            b["fit"] = json{{"exponent", f.exponent},
                            {"r_squared", f.r_squared},
                            {"range", json::array({f.fit_lo, f.fit_hi})},
                            {"points", f.points_used}};
        } catch (const domain_error& e) {
            b["fit"] = json{{"error", e.what()}};
        }
        return b;
    };
    j["m_curve"] = emit_curve(m, "m_curve.csv", "(gamma^+ - gamma) log T");
    j["m_prime_curve"] =
        emit_curve(mp, "m_prime_curve.csv", "(beta' - 1/2) log T");

    PairCorrelationHistogram pc =
        pair_correlation(za.zeta_records, cfg.T, kPcUMax, kPcBins, cfg.mult);
    {
        std::string csv = "u_lo,u_hi,count,empirical_density,gue_density\n";
        char buf[160];
        for (int b = 0; b < kPcBins; ++b) {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%ld,%.12g,%.12g\n",
                          pc.bin_edges[b], pc.bin_edges[b + 1],
                          pc.counts[static_cast<size_t>(b)], pc.empirical_density[b],
                          pc.expected_density[b]);
            csv += buf;
        }
        write_text(path_in(cfg, "pair_correlation.csv"), csv);
    }
    j["pair_correlation"] = json{{"file", "pair_correlation.csv"},
                                 {"u_max", kPcUMax},
                                 {"bins", kPcBins},
                                 {"population", pc.population}};

    write_json(path_in(cfg, "stats.json"), j);
    std::fprintf(stderr, "stats: written to %s\n", cfg.out_dir.c_str());
    return 0;
}

json report_json(const VerificationReport& r) {
    json j;
    j["lemma_id"] = lemma_name(r.lemma_id);
    j["checked"] = r.checked;
    j["violations"] = r.violations;
    j["worst_margin"] = r.worst_margin;
    if (r.witness)
        j["witness"] = json{{"location", r.witness->location},
                            {"value", r.witness->value},
                            {"note", r.witness->note}};
    return j;
}

int cmd_verify(const RunConfig& cfg) {
    ZeroArchive za = load_required(cfg, "zeros.csv");
    ZeroArchive zp = load_required(cfg, "zprime.csv");
    ZeroArchive pa = load_required(cfg, "pairings.csv");
    const auto& zeros = za.zeta_records;
    const auto& zprimes = zp.zprime_records;
    const auto& pairings = pa.pairing_records;

    json j;
    j["format_version"] = kFormatVersion;
    j["config"] = cfg.to_json();

    VerificationReport l7 = verify_lemma7(zprimes, zeros, cfg.T);
    VerificationReport l10 = verify_lemma10(zeros, zprimes, cfg.T, 1.0, cfg.mult);
    VerificationReport l11 = verify_lemma11(pairings);
    EnvelopeReport p2 = check_prop2_envelope(pairings, 1.0, 1.0, 0.1);

    // L6 with residual stability under a doubled truncation radius
    Lemma6Report l6d = verify_lemma6_detailed(pairings, zeros, 50.0);
    Lemma6Report l6w = verify_lemma6_detailed(pairings, zeros, 100.0);
    const VerificationReport& l6 = l6d.report;
    const double l6_shift =
        (l6d.residuals.size() > 0)
            ? (l6d.residuals - l6w.residuals).abs().maxCoeff()
            : 0.0;

    // C3 tail fractions
    json c3 = json::array();
    for (double thr : {4.0, 6.0, 8.0}) {
        c3.push_back(json{{"threshold", thr},
                          {"fraction", window_tail(zeros, cfg.T, thr, cfg.mult)}});
    }

    // explicit-formula grid at deterministic pseudo-random centers
    json ef = json::array();
    long ef_viol = 0;
    double ef_max_ratio = 0.0;
    {
        const auto& lam = von_mangoldt();
        std::mt19937_64 rng(0x5eeded + static_cast<std::uint64_t>(cfg.T));
        const double margin = 40.0;
        const double lo = cfg.T + margin, hi = cfg.mult * cfg.T - margin;
        for (int i = 0; i < kEfPoints; ++i) {
            const double u =
                static_cast<double>(rng() >> 11) * 0x1.0p-53;  // uniform in [0,1)
            const double t = lo + (hi - lo) * u;
            const double delta = (i % 2) ? 2.0 : 1.0;
            ExplicitFormulaSides s =
                explicit_formula_sides(t, FejerParams{delta}, zeros, lam);
            const double diff = std::abs(s.zero_side - s.arithmetic_side);
            const double ratio = diff / s.truncation_bound;
            ef_max_ratio = std::max(ef_max_ratio, ratio);
            if (diff > s.truncation_bound) ++ef_viol;
            if (i < 4)
                ef.push_back(json{{"t", t},
                                  {"delta", delta},
                                  {"zero_side", s.zero_side},
                                  {"arithmetic_side", s.arithmetic_side},
                                  {"bound", s.truncation_bound}});
        }
    }

    j["reports"] = json::array({report_json(l6), report_json(l7), report_json(l10),
                                report_json(l11), report_json(p2.lower)});
    j["L6_radius_doubling_shift"] = l6_shift;
    j["P2_upper"] = json{{"threshold", p2.upper_threshold},
                         {"tail_fraction", p2.upper_tail_fraction}};
    j["C3_window_tail"] = c3;
    j["EF"] = json{{"lemma_id", "EF"},
                   {"points", kEfPoints},
                   {"violations", ef_viol},
                   {"max_ratio", ef_max_ratio},
                   {"sample", ef}};

    const bool bad = l7.violations > 0 || l10.violations > 0 || l11.violations > 0 ||
                     p2.lower.violations > 0;
    j["theorem_backed_violations"] = bad;
    write_json(path_in(cfg, "verify.json"), j);
    std::fprintf(stderr, "verify: written to %s (%s)\n", cfg.out_dir.c_str(),
                 bad ? "VIOLATIONS" : "clean");
    return bad ? 2 : 0;
}

int cmd_crosscheck(const RunConfig& cfg) {
    if (cfg.external_path.empty())
        throw domain_error("crosscheck: --external path is required");
    ZeroArchive za = load_required(cfg, "zeros.csv");
    ZeroArchive ext = ingest_external(cfg.external_path);
    CrossCheck cc = cross_check(za, ext);
    json j;
    j["format_version"] = kFormatVersion;
    j["config"] = cfg.to_json();
    j["external"] = cfg.external_path;
    j["overlap_count"] = cc.overlap_count;
    j["max_deviation"] = cc.max_deviation;
    j["at_gamma"] = cc.at_gamma;
    write_json(path_in(cfg, "crosscheck.json"), j);
    std::fprintf(stderr, "crosscheck: max deviation %.3e over %ld shared ordinates\n",
                 cc.max_deviation, cc.overlap_count);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zeta zero laboratory"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--T", cfg.T, "window anchor T")->envname("ZETALAB_T");
        sub->add_option("--mult", cfg.mult, "window is (T, mult*T]")
            ->envname("ZETALAB_MULT");
        sub->add_option("--sigma-max", cfg.sigma_max, "right edge for zeta' search")
            ->envname("ZETALAB_SIGMA_MAX");
        sub->add_option("--eps-min", cfg.eps_min, "epsilon grid start")
            ->envname("ZETALAB_EPS_MIN");
        sub->add_option("--eps-max", cfg.eps_max, "epsilon grid end")
            ->envname("ZETALAB_EPS_MAX");
        sub->add_option("--eps-points", cfg.eps_points, "epsilon grid size")
            ->envname("ZETALAB_EPS_POINTS");
        sub->add_option("--threads", cfg.threads, "worker threads")
            ->envname("ZETALAB_THREADS");
        sub->add_option("--accuracy", cfg.accuracy, "evaluation accuracy target")
            ->envname("ZETALAB_ACCURACY");
        sub->add_option("--out", cfg.out_dir, "output directory")
            ->envname("ZETALAB_OUT");
    };

    CLI::App* c_zeros = app.add_subcommand("zeros", "compute zeta zeros");
    CLI::App* c_zprime = app.add_subcommand("zprime", "compute zeta' zeros and pairings");
    CLI::App* c_stats = app.add_subcommand("stats", "distribution curves and fits");
    CLI::App* c_verify = app.add_subcommand("verify", "run verification suites");
    CLI::App* c_cross = app.add_subcommand("crosscheck", "compare with external table");
    for (auto* sub : {c_zeros, c_zprime, c_stats, c_verify, c_cross}) add_common(sub);
    c_cross->add_option("--external", cfg.external_path, "path to ordinate list")
        ->envname("ZETALAB_EXTERNAL");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.validate();
        if (c_zeros->parsed()) return cmd_zeros(cfg);
        if (c_zprime->parsed()) return cmd_zprime(cfg);
        if (c_stats->parsed()) return cmd_stats(cfg);
        if (c_verify->parsed()) return cmd_verify(cfg);
        if (c_cross->parsed()) return cmd_crosscheck(cfg);
    } catch (const domain_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "computation failed: %s\n", e.what());
        return 3;
    }
    return 1;
}
