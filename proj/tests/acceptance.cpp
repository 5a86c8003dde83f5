// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria. Heavier criteria report their runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "cohortdiff/combine.hpp"
#include "cohortdiff/curves.hpp"
#include "cohortdiff/io.hpp"
#include "cohortdiff/resampling.hpp"
#include "cohortdiff/rng.hpp"
#include "cohortdiff/stats.hpp"
#include "cohortdiff/synthgen.hpp"
#include "support/testutil.hpp"

namespace fs = std::filesystem;
using namespace cohortdiff;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, double seconds) {
    if (!pass) ++failures;
    std::printf("%s  criterion %2d: %s  [%.1fs]\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), seconds);
    std::fflush(stdout);
}

template <typename F>
void criterion(int number, F&& body) {
    const auto t0 = Clock::now();
    std::string what;
    bool pass = false;
    try {
        pass = body(what);
    } catch (const std::exception& e) {
        what += std::string(" [exception: ") + e.what() + "]";
    }
    report(number, pass, what, std::chrono::duration<double>(Clock::now() - t0).count());
}

// Extended-precision reference for the even-dof chi-square survival series.
long double chi2_sf_ld(long double x, int dof) {
    const long double h = x / 2.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < dof / 2; ++k) {
        term *= h / static_cast<long double>(k);
        sum += term;
    }
    return expl(-h) * sum;
}

long double fisher_ld(const std::vector<double>& ps, bool one_minus) {
    long double t = 0.0L;
    for (double p : ps) t += -2.0L * logl(one_minus ? 1.0L - static_cast<long double>(p)
                                                    : static_cast<long double>(p));
    return chi2_sf_ld(t, 2 * static_cast<int>(ps.size()));
}

const std::vector<double> kShuffleRow{0.01312, 0.02543, 0.10505, 0.06394,
                                      0.10809, 0.03104, 0.00233};
const std::vector<double> kBackgroundRow{0.00862, 0.06071, 0.44336, 0.45604,
                                         0.07581, 0.15288, 0.21411};
const std::vector<double> kSpikeWeeks{0.99988, 0.8216, 0.89666, 0.9994, 0.99502};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(COHORTDIFF_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

} // namespace

int main() {
    std::printf("cohortdiff acceptance suite\n");

    criterion(1, [](std::string& what) {
        const auto r = fisher_combine(kShuffleRow, Transform::direct, Tail::upper);
        const long double oracle = fisher_ld(kShuffleRow, false);
        const double rel = std::abs(r.p_combined - static_cast<double>(oracle)) /
                           static_cast<double>(oracle);
        what = "shuffle-row combination (direct/upper) = " + fmt("%.3e", r.p_combined) +
               " < 1e-5, oracle agreement to 3 significant digits";
        return r.p_combined < 1e-5 && rel < 5e-3;
    });

    criterion(2, [](std::string& what) {
        const auto r = fisher_combine(kBackgroundRow, Transform::one_minus, Tail::lower);
        what = "background-row combination (one_minus/lower) = " + fmt("%.4e", r.p_combined) +
               " in [0.0019, 0.0029]";
        return r.p_combined >= 0.0019 && r.p_combined <= 0.0029;
    });

    criterion(3, [](std::string& what) {
        const auto r = fisher_combine(kSpikeWeeks, Transform::direct, Tail::lower);
        what = "five-week spike combination (direct/lower) = " + fmt("%.3e", r.p_combined) +
               " in [1.7e-5, 2.1e-5]";
        return r.p_combined >= 1.7e-5 && r.p_combined <= 2.1e-5;
    });

    criterion(4, [](std::string& what) {
        double worst = 0.0;
        for (int dof = 2; dof <= 64; dof += 2) {
            for (double x : {0.1, 1.0, 10.0, 30.0, 100.0}) {
                const long double oracle = chi2_sf_ld(x, dof);
                const double rel = std::abs(chi2_sf(x, dof) - static_cast<double>(oracle)) /
                                   static_cast<double>(oracle);
                worst = std::max(worst, rel);
            }
        }
        what = "chi2_sf vs extended-precision series, even dof 2..64, x in {0.1..100}: "
               "worst relative error " + fmt("%.2e", worst) + " < 1e-10";
        return worst < 1e-10;
    });

    criterion(5, [](std::string& what) {
        SplitMix64 rng(501);
        double worst = 0.0, worst_triangle = 0.0;
        bool exact = true;
        for (int trial = 0; trial < 1000; ++trial) {
            const auto x = testutil::random_curve(rng, 24.0, 500);
            const auto y = testutil::random_curve(rng, 24.0, 500);
            const auto z = testutil::random_curve(rng, 24.0, 500);
            const double dxy = delta_area(x, y);
            worst = std::max(worst, std::abs(dxy - testutil::riemann_delta(x, y, 1e-4)));
            if (delta_area(x, x) != 0.0 || delta_area(y, x) != dxy) exact = false;
            worst_triangle = std::max(
                worst_triangle, delta_area(x, z) - (dxy + delta_area(y, z)));
        }
        what = "1000 random curve pairs: |sweep - Riemann(1e-4 h)| max " + fmt("%.2e", worst) +
               " < 1e-3 h; identity/symmetry exact; triangle slack " +
               fmt("%.1e", worst_triangle) + " <= 1e-12";
        return worst < 1e-3 && exact && worst_triangle <= 1e-12;
    });

    criterion(6, [](std::string& what) {
        SyntheticSpec spec;
        spec.n_a = 200;
        spec.n_b = 200;
        spec.base_rate = 25.0;
        spec.heterogeneity = 0.4;
        spec.seed = 20260810;
        NullBatteryConfig cfg;
        cfg.replicates = 2000;
        cfg.threads = 2;
        const auto ps = null_battery(spec, 200, cfg);
        const double d = ks_statistic_uniform(ps);
        const double pv = ks_pvalue(d, ps.size());
        what = "shuffle-null uniformity, 200 null datasets (n=200/cohort, R=2000): KS p = " +
               fmt("%.3f", pv) + " >= 0.01";
        return pv >= 0.01;
    });

    criterion(7, [](std::string& what) {
        SyntheticSpec spec;
        spec.n_a = 500;
        spec.n_b = 500;
        spec.base_rate = 20.0;
        spec.heterogeneity = 0.4;
        ResponseKernel k;
        k.onset_h = 10.0;
        k.amplitude_a = 3.0;
        k.amplitude_b = 1.0;
        k.decay_a_h = 2.0;
        k.decay_b_h = 2.0;
        spec.response = k;
        spec.seed = 777;
        NullBatteryConfig cfg;
        cfg.replicates = 10000;
        cfg.threads = 2;
        const auto ps = null_battery(spec, 100, cfg);
        const int detected = static_cast<int>(std::count_if(
            ps.begin(), ps.end(), [](double p) { return p < 0.01; }));
        what = "power, injected response (A amp 3.0 vs B 1.0, decay 2 h, n=500, R=1e4): p < "
               "0.01 in " + std::to_string(detected) + "/100 seeds (need >= 90)";
        return detected >= 90;
    });

    criterion(8, [](std::string& what) {
        // (a) the same response in both cohorts: every week flags the day.
        SyntheticSpec spec;
        spec.n_a = 500;
        spec.n_b = 500;
        spec.base_rate = 20.0;
        spec.heterogeneity = 0.4;
        ResponseKernel k;
        k.onset_h = 10.0;
        k.amplitude_a = 3.0;
        k.amplitude_b = 3.0;
        k.decay_a_h = 2.0;
        k.decay_b_h = 2.0;
        spec.response = k;
        spec.seed = 808;
        const auto ds = generate(spec, 8);
        std::vector<double> inputs;
        double max_raw = 0.0;
        for (int w = 1; w <= 8; ++w) {
            const auto null = spike_null(ds, "A", w, 10000, derive_stream(909, w), 2);
            const auto raw = empirical_p(null, false);
            max_raw = std::max(max_raw, raw.p);
            inputs.push_back(raw.p > 0.0 ? raw.p : empirical_p(null, true).p);
        }
        const auto combined = fisher_combine(inputs, Transform::direct, Tail::upper);

        // (b) no injection: per-week p-values are uniform across datasets.
        std::vector<double> ps;
        for (int d = 0; d < 25; ++d) {
            SyntheticSpec null_spec;
            null_spec.n_a = 60;
            null_spec.n_b = 5;
            null_spec.base_rate = 15.0;
            null_spec.heterogeneity = 0.4;
            null_spec.seed = derive_stream(42, static_cast<std::uint64_t>(d));
            const auto nds = generate(null_spec, 8);
            for (int w = 1; w <= 8; ++w) {
                const auto null = spike_null(nds, "A", w, 500,
                                             derive_stream(1000 + d, static_cast<std::uint64_t>(w)), 2);
                ps.push_back(empirical_p(null, false).p);
            }
        }
        const double pv = ks_pvalue(ks_statistic_uniform(ps), ps.size());
        what = "spike test: injected day, per-week raw p max " + fmt("%.4f", max_raw) +
               ", combined " + fmt("%.1e", combined.p_combined) +
               " < 1e-3; no injection, 200 per-week p-values KS p = " + fmt("%.3f", pv) +
               " >= 0.01";
        return combined.p_combined < 1e-3 && max_raw < 0.05 && pv >= 0.01;
    });

    criterion(9, [](std::string& what) {
        const fs::path dir = fs::temp_directory_path() / "cohortdiff-acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        const std::string data = (dir / "data").string();
        if (run_tool("synth --out-dir " + data +
                     " --n-a 150 --n-b 150 --base-rate 20 --weeks 2 --seed 99 "
                     "--anchor 1491523200") != 0) {
            what = "pipeline determinism: synth failed";
            return false;
        }
        if (run_tool("ingest --events " + data + "/events.csv --cohorts " + data +
                     "/cohorts.csv --anchor 1491523200 --weeks 2 --output " +
                     (dir / "ds.json").string()) != 0) {
            what = "pipeline determinism: ingest failed";
            return false;
        }
        std::vector<std::string> reports;
        for (int threads : {1, 4, 8}) {
            const std::string out = (dir / ("report" + std::to_string(threads) + ".json")).string();
            if (run_tool("test --dataset " + (dir / "ds.json").string() +
                         " --model shuffle -R 20000 --seed 5 --threads " +
                         std::to_string(threads) + " --output " + out) != 0) {
                what = "pipeline determinism: test failed";
                return false;
            }
            reports.push_back(read_text_file(out));
        }
        what = "synth -> ingest -> test reports byte-identical across 1, 4, 8 worker threads";
        return reports[0] == reports[1] && reports[0] == reports[2];
    });

    criterion(10, [](std::string& what) {
        SyntheticSpec spec;
        spec.n_a = 10000;
        spec.n_b = 10000;
        spec.base_rate = 40.0;
        spec.activity_ratio = 1.18;
        spec.heterogeneity = 0.3;
        spec.seed = 1010;
        const auto ds = generate(spec, 2);
        std::vector<IndividualLog> a, b;
        for (int w = 1; w <= ds.weeks(); ++w)
            for (const auto& log : ds.window_logs[static_cast<std::size_t>(w)])
                (log.cohort == "A" ? a : b).push_back(log);
        const double ratio = activity_ratio(a, b);
        what = "calibration: generated activity ratio " + fmt("%.4f", ratio) +
               " within 1.18 +/- 0.02 at n = 1e4/cohort";
        return std::abs(ratio - 1.18) <= 0.02;
    });

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures;
}
