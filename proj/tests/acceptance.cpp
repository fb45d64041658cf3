// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "canoma/engine.hpp"
#include "canoma/oracle.hpp"
#include "../tools/cli.hpp"

using namespace canoma;

namespace {

constexpr std::uint64_t kTrials = 1'000'000;
const std::vector<double> kSnrGrid{0, 5, 10, 15, 20};
const std::vector<Scheme> kSchemes{Scheme::canoma, Scheme::noma, Scheme::oma_cache, Scheme::oma};

struct Report {
    std::vector<std::string> failures;
    std::size_t checks = 0;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 20) failures.push_back(what);
        if (!ok && failures.size() == 20) failures.push_back("...");
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

TrialConfig base_config(const ModelParams& m) {
    TrialConfig c;
    c.model = m;
    c.trials = kTrials;
    c.seed = 1;
    c.workers = 0;
    return c;
}

// Outcome-level dominance along a grid of models sharing seed 1: outcome[k+1] >= outcome[k]
// per vehicle (or <= when `decreasing`).
void check_per_trial(Report& r, const std::vector<ModelParams>& grid, Scheme scheme, bool decreasing,
                     const std::string& label) {
    std::vector<PreparedModel> models(grid.begin(), grid.end());
    std::size_t violations = 0;
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        Outcome prev;
        for (std::size_t k = 0; k < models.size(); ++k) {
            const Outcome cur = decode_trial(models[k], draw_trial(models[k], 1, t), scheme);
            if (k > 0)
                for (std::size_t v = 0; v < cur.ok.size(); ++v)
                    violations += decreasing ? cur.ok[v] > prev.ok[v] : cur.ok[v] < prev.ok[v];
            prev = cur;
        }
    }
    r.expect(violations == 0, fmt("%s: %zu per-trial violations", label.c_str(), violations));
}

void check_estimates(Report& r, const std::vector<ModelParams>& grid, Scheme scheme, bool decreasing,
                     const std::string& label) {
    std::vector<Estimate> est;
    for (const auto& m : grid) {
        auto c = base_config(m);
        c.scheme = scheme;
        est.push_back(run_point(c));
    }
    for (std::size_t k = 1; k < est.size(); ++k)
        for (auto metric : {Metric::joint, Metric::marg_product}) {
            const double a = est[k - 1].value(metric), b = est[k].value(metric);
            r.expect(decreasing ? b <= a : b >= a,
                     fmt("%s: %s step %zu goes %.9g -> %.9g", label.c_str(), std::string(to_string(metric)).c_str(),
                         k, a, b));
        }
}

// Quantile of the link gain at ccdf level q, by bisection on the oracle ccdf.
double ccdf_quantile(const LinkSpec& spec, double q) {
    double lo = 0.0, hi = 1.0;
    while (product_gain_ccdf(spec, hi) > q) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (product_gain_ccdf(spec, mid) > q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Report sampler_correctness() {
    Report r;
    const auto start = std::chrono::steady_clock::now();
    const LinkSpec spec = LinkSpec::vehicular_default();

    std::vector<double> xs, levels;
    for (int k = 1; k <= 20; ++k) {
        levels.push_back(k / 21.0);
        xs.push_back(ccdf_quantile(spec, k / 21.0));
    }
    std::vector<std::uint64_t> above(xs.size(), 0);
    Rng rng(trial_stream(1, 0, 0));
    for (std::uint64_t i = 0; i < kTrials; ++i) {
        const double g = sample_link_gain(spec, rng).value;
        for (std::size_t k = 0; k < xs.size(); ++k) above[k] += g > xs[k];
    }
    double ks = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
        ks = std::max(ks, std::abs(double(above[k]) / kTrials - product_gain_ccdf(spec, xs[k])));
    r.expect(ks < 0.005, fmt("KS distance %.3g at 20 quantiles", ks));

    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double closed = 2.0 * x * std::cyl_bessel_k(2.0, 2.0 * std::sqrt(x));
        const double got = product_gain_ccdf(spec, x);
        r.expect(std::abs(got - closed) <= 1e-6, fmt("ccdf(%g) = %.12g vs closed form %.12g", x, got, closed));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.expect(secs < 60.0, fmt("runtime %.1f s", secs));
    return r;
}

Report dual_method_agreement() {
    Report r;
    struct TC { std::size_t t, c; };
    double worst = 0.0;
    for (double zeta : {0.4, 0.8, 1.6})
        for (const TC tc : {TC{10, 0}, TC{10, 2}, TC{10, 5}, TC{50, 2}})
            for (double snr : kSnrGrid) {
                ModelParams m;
                m.zeta = zeta;
                m.files = tc.t;
                m.set_capacity(tc.c);
                m.snr_db = snr;
                const auto est = run_point_schemes(base_config(m), kSchemes);
                for (std::size_t s = 0; s < kSchemes.size(); ++s) {
                    const auto o = success_prob(kSchemes[s], m);
                    for (auto metric : {Metric::joint, Metric::marg_product}) {
                        const double d = std::abs(est[s].value(metric) - o.value(metric));
                        const double se = est[s].std_err_of(metric);
                        if (se > 0) worst = std::max(worst, d / se);
                        r.expect(d <= 4.0 * se + 1e-8,
                                 fmt("zeta=%g T=%zu C=%zu snr=%g %s %s: mc %.6f oracle %.6f (%.2f se)", zeta, tc.t,
                                     tc.c, snr, std::string(to_string(kSchemes[s])).c_str(),
                                     std::string(to_string(metric)).c_str(), est[s].value(metric), o.value(metric),
                                     se > 0 ? d / se : 0.0));
                    }
                }
            }
    std::printf("       worst |z| over the grid: %.2f\n", worst);
    return r;
}

Report zero_cache_equivalence() {
    Report r;
    for (std::size_t files : {10u, 50u})
        for (double snr : kSnrGrid) {
            ModelParams m;
            m.files = files;
            m.set_capacity(0);
            m.snr_db = snr;
            const PreparedModel pm(m);
            std::size_t diff = 0;
            for (std::uint64_t t = 0; t < kTrials; ++t) {
                const auto d = draw_trial(pm, 1, t);
                diff += !(decode_trial(pm, d, Scheme::canoma) == decode_trial(pm, d, Scheme::noma));
            }
            r.expect(diff == 0, fmt("T=%zu snr=%g: %zu trials differ", files, snr, diff));
            auto c = base_config(m);
            c.scheme = Scheme::canoma;
            const auto a = run_point(c);
            c.scheme = Scheme::noma;
            r.expect(a == run_point(c), fmt("T=%zu snr=%g: estimates differ", files, snr));
        }
    return r;
}

Report cache_and_catalog_trends() {
    Report r;
    for (std::size_t files : {10u, 50u}) {
        std::vector<ModelParams> grid;
        for (std::size_t c = 0; c <= 10; ++c) {
            ModelParams m;
            m.files = files;
            m.set_capacity(c);
            grid.push_back(m);
        }
        const auto label = fmt("C grid at T=%zu", files);
        check_per_trial(r, grid, Scheme::canoma, false, label);
        check_estimates(r, grid, Scheme::canoma, false, label);
    }
    for (std::size_t c = 0; c <= 10; ++c) {
        std::vector<ModelParams> grid;
        for (std::size_t files : {10u, 50u}) {
            ModelParams m;
            m.files = files;
            m.set_capacity(c);
            grid.push_back(m);
        }
        const auto label = fmt("T grid at C=%zu", c);
        check_per_trial(r, grid, Scheme::canoma, true, label);
        check_estimates(r, grid, Scheme::canoma, true, label);
    }
    return r;
}

Report zeta_and_snr_trends() {
    Report r;
    std::vector<ModelParams> zetas;
    for (double zeta : {0.2, 0.4, 0.8, 1.6, 3.2}) {
        ModelParams m;
        m.zeta = zeta;
        zetas.push_back(m);
    }
    check_per_trial(r, zetas, Scheme::canoma, true, "zeta grid");
    check_estimates(r, zetas, Scheme::canoma, true, "zeta grid");

    std::vector<ModelParams> snrs;
    for (double snr : kSnrGrid) {
        ModelParams m;
        m.snr_db = snr;
        snrs.push_back(m);
    }
    for (auto s : kSchemes) {
        const auto label = "SNR grid " + std::string(to_string(s));
        check_per_trial(r, snrs, s, false, label);
        check_estimates(r, snrs, s, false, label);
    }
    return r;
}

Report infeasibility_boundary() {
    Report r;
    for (double snr : kSnrGrid) {
        ModelParams m;
        m.alpha = 0.5;
        m.theta = 1.0;
        m.set_capacity(0);
        m.snr_db = snr;
        for (auto s : {Scheme::canoma, Scheme::noma}) {
            auto c = base_config(m);
            c.scheme = s;
            const auto e = run_point(c);
            const auto o = success_prob(s, m);
            const auto name = std::string(to_string(s));
            r.expect(e.weak == 0.0, fmt("snr=%g %s: MC weak marginal %.9g", snr, name.c_str(), e.weak));
            r.expect(o.weak == 0.0, fmt("snr=%g %s: oracle weak marginal %.9g", snr, name.c_str(), o.weak));
        }
    }
    return r;
}

Report saturation() {
    Report r;
    for (std::size_t files : {10u, 50u})
        for (double snr : kSnrGrid) {
            ModelParams m;
            m.files = files;
            m.set_capacity(files);
            m.snr_db = snr;
            const auto est = run_point_schemes(base_config(m), kSchemes);
            for (std::size_t s = 0; s < kSchemes.size(); ++s) {
                const auto name = std::string(to_string(kSchemes[s]));
                r.expect(est[s].joint == 1.0 && est[s].marg_product == 1.0,
                         fmt("T=C=%zu snr=%g %s: p_joint %.9g p_marg %.9g", files, snr, name.c_str(), est[s].joint,
                             est[s].marg_product));
            }
        }
    return r;
}

Report reproducibility() {
    Report r;
    const std::vector<std::vector<std::string>> commands{
        {"sweep", "--sweep", "snr_db", "--grid", "0,5,10,15,20", "--schemes", "canoma,noma,oma-cache,oma",
         "--trials", "200001", "--seed", "7"},
        {"sweep", "--sweep", "cache", "--grid", "0,2,4,6,8", "--schemes", "canoma,noma", "--trials", "100000",
         "--metric", "joint", "--seed", "3"},
        {"sweep", "--sweep", "zeta", "--grid", "0.2,3.2,0.8", "--trials", "99999", "--ordering", "fixed"},
        {"sweep", "--sweep", "files", "--grid", "10,50", "--scheme", "oma-cache", "--trials", "50000", "--vehicles",
         "3", "--alpha", "0.1", "--cache", "1"},
    };
    for (const auto& args : commands) {
        std::string reference;
        for (const char* workers : {"1", "1", "2", "3", "8"}) {
            auto full = args;
            full.insert(full.end(), {"--workers", workers});
            std::ostringstream out, err;
            const int code = cli::run(full, out, err);
            r.expect(code == 0, fmt("%s exited %d: %s", args[2].c_str(), code, err.str().c_str()));
            const auto rows = cli::data_rows(out.str());
            if (reference.empty()) reference = rows;
            r.expect(rows == reference && !rows.empty(),
                     fmt("sweep %s: data rows differ with --workers %s", args[2].c_str(), workers));
        }
    }
    return r;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Report()> run;
    };
    const std::vector<Criterion> criteria{
        {"1 sampler correctness", sampler_correctness},
        {"2 dual-method agreement", dual_method_agreement},
        {"3 zero-cache equivalence", zero_cache_equivalence},
        {"4 cache-size and catalog trends", cache_and_catalog_trends},
        {"5 popularity and SNR trends", zeta_and_snr_trends},
        {"6 infeasibility boundary", infeasibility_boundary},
        {"7 saturation", saturation},
        {"8 reproducibility", reproducibility},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Report r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = r.failures.empty();
        failed += !ok;
        std::printf("[%s] criterion %s (%zu checks, %.1f s)\n", ok ? "PASS" : "FAIL", c.name, r.checks, secs);
        for (const auto& f : r.failures) std::printf("       %s\n", f.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
