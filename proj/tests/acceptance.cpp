// Acceptance gate: one PASS/FAIL line per criterion, exit code = number of
// failing criteria. Tolerances are pinned here, next to each check.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "segrowth/compare.hpp"
#include "segrowth/inference.hpp"
#include "segrowth/model.hpp"
#include "segrowth/oracle.hpp"
#include "segrowth/series.hpp"
#include "segrowth/solver.hpp"

#include "helpers.hpp"

using namespace segrowth;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("%s criterion %d (%s): %s [%.2fs]\n", pass ? "PASS" : "FAIL", index,
                name, detail.c_str(), seconds);
    if (!pass) ++g_failures;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------
// Criterion 1: derived-quantity consistency for every published slope row.
//
// Printed growth rates and doubling times come from a slope that was itself
// rounded for print. The check therefore allows, on top of the base tolerance
// (0.1 percentage points for growth, 0.3 years for doubling), the amount by
// which rounding the slope by half an ulp of its printed precision can move
// the derived value:
//   growth   tolerance = 0.1 + |d g/d b|  * h_b = 0.1 + 100*exp(b)*h_b
//   doubling tolerance = 0.3 + |d T/d b|  * h_b = 0.3 + (ln2/b^2)*h_b
// where h_b = 0.5 * 10^-decimals(b).
//
// A cell that still misses that tolerance may be inconsistent with its own
// printed slope beyond any rounding of either number: the slope implied by
// the cell, widened by the cell's own half-ulp, misses the slope's rounding
// interval entirely.  Such cells cannot be reproduced from the printed slope
// by any correct implementation; only after failing the tolerance check are
// they skipped, with a printed proof, instead of failing the criterion.
// ---------------------------------------------------------------------------

struct SlopeRow {
    const char* table;
    const char* name;
    double b;            // printed slope
    int b_decimals;      // printed precision of the slope
    double growth_pct;   // printed % growth rate (2 decimals)
    std::optional<double> doubling;  // printed doubling time (1 decimal); "-" = none
};

bool criterion1(std::string& detail) {
    const SlopeRow rows[] = {
        {"publications 1980-2012", "b1", 0.029, 3, 2.96, 23.7},
        {"references, citing 1980-2012", "b1", 0.005, 3, 0.45, 155.8},
        {"references, citing 1980-2012", "b2", 0.023, 3, 2.35, 29.9},
        {"references, citing 1980-2012", "b3", 0.078, 3, 8.13, 8.9},
        {"references, citing 1980-2012", "b4", -0.22, 2, -19.62, std::nullopt},
        {"references, citing 2012", "b1", 0.003, 3, 0.27, 253.9},
        {"references, citing 2012", "b2", 0.022, 3, 2.19, 31.9},
        {"references, citing 2012", "b3", 0.088, 3, 9.20, 7.9},
        {"references, citing 2012", "b4", -1.310, 3, -73.01, std::nullopt},
        {"natural sciences", "b1", 0.003, 3, 0.29, 231.1},
        {"natural sciences", "b2", 0.029, 3, 2.94, 23.9},
        {"natural sciences", "b3", 0.081, 3, 8.37, 8.7},
        {"natural sciences", "b4", -0.189, 3, -14.20, std::nullopt},
        {"medical and health sciences", "b1", 0.003, 3, 0.28, 250.2},
        {"medical and health sciences", "b2", 0.031, 3, 3.10, 22.3},
        {"medical and health sciences", "b3", 0.089, 3, 9.35, 7.8},
        {"medical and health sciences", "b4", -0.297, 3, -25.67, std::nullopt},
    };

    int checked = 0, skipped = 0, failed = 0;
    for (const auto& row : rows) {
        const double h_b = 0.5 * std::pow(10.0, -row.b_decimals);

        // growth cell (printed to 2 decimals -> half-ulp 0.005)
        {
            const double computed = growth_rate_pct(row.b);
            const double tol = 0.1 + 100.0 * std::exp(row.b) * h_b;
            if (std::abs(computed - row.growth_pct) <= tol) {
                ++checked;
            } else {
                // slope implied by the printed growth, with both cells' rounding
                const double h_g = 0.005;
                const double implied = std::log1p(row.growth_pct / 100.0);
                const double implied_slack =
                    h_b + 0.01 / (1.0 + row.growth_pct / 100.0) * h_g;
                if (std::abs(implied - row.b) > implied_slack) {
                    std::printf(
                        "  note: %s %s growth cell skipped as internally inconsistent: "
                        "printed %.2f%% implies slope %.6f, but the printed slope is %.*f "
                        "(gap %.6f > rounding budget %.6f)\n",
                        row.table, row.name, row.growth_pct, implied, row.b_decimals,
                        row.b, std::abs(implied - row.b), implied_slack);
                    ++skipped;
                } else {
                    ++checked;
                    std::printf("  FAIL cell: %s %s growth %.4f vs printed %.2f (tol %.4f)\n",
                                row.table, row.name, computed, row.growth_pct, tol);
                    ++failed;
                }
            }
        }

        // doubling cell
        if (row.doubling) {
            const auto computed = doubling_time_years(row.b);
            if (!computed) {
                std::printf("  FAIL cell: %s %s doubling expected %.1f but slope %.3f "
                            "gives none\n",
                            row.table, row.name, *row.doubling, row.b);
                ++failed;
                ++checked;
            } else {
                const double tol = 0.3 + std::numbers::ln2 / (row.b * row.b) * h_b;
                if (std::abs(*computed - *row.doubling) <= tol) {
                    ++checked;
                } else {
                    const double h_t = 0.05;
                    const double implied = std::numbers::ln2 / *row.doubling;
                    const double implied_slack =
                        h_b + std::numbers::ln2 / (*row.doubling * *row.doubling) * h_t;
                    if (std::abs(implied - row.b) > implied_slack) {
                        std::printf(
                            "  note: %s %s doubling cell skipped as internally "
                            "inconsistent: printed %.1fy implies slope %.6f, but the "
                            "printed slope is %.*f (gap %.6f > rounding budget %.6f)\n",
                            row.table, row.name, *row.doubling, implied, row.b_decimals,
                            row.b, std::abs(implied - row.b), implied_slack);
                        ++skipped;
                    } else {
                        ++checked;
                        std::printf(
                            "  FAIL cell: %s %s doubling %.3f vs printed %.1f (tol %.3f)\n",
                            row.table, row.name, *computed, *row.doubling, tol);
                        ++failed;
                    }
                }
            }
        } else {
            // "-" rows: a non-positive slope has no doubling time.
            ++checked;
            if (doubling_time_years(row.b).has_value()) {
                std::printf("  FAIL cell: %s %s should have no doubling time\n",
                            row.table, row.name);
                ++failed;
            }
        }
    }

    detail = std::to_string(checked) + " cells checked, " + std::to_string(skipped) +
             " provably inconsistent cells skipped with proof, " +
             std::to_string(failed) + " failed";
    return failed == 0;
}

// ---------------------------------------------------------------------------
// Criterion 2: noiseless recovery of 20 random feasible 3-/4-segment models.
// ---------------------------------------------------------------------------

bool criterion2(std::string& detail) {
    std::mt19937_64 rng(220820261);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double worst_slope = 0.0, worst_break = 0.0, worst_sse = 0.0;
    int recovered = 0;
    const int kModels = 20;
    for (int i = 0; i < kModels; ++i) {
        const int segments = (i % 2 == 0) ? 3 : 4;
        SegmentedModel truth;
        truth.year_min = 1650;
        truth.year_max = 2012;
        // Breakpoints with generous separation inside the feasible band.
        double lo = 1690.0;
        for (int k = 0; k < segments - 1; ++k) {
            const double hi = 1970.0 - 50.0 * (segments - 2 - k);
            truth.breakpoints.push_back(lo + unit(rng) * (hi - lo));
            lo = truth.breakpoints.back() + 50.0;
        }
        // Slopes with clear kinks at every boundary.
        truth.slopes.push_back(0.002 + 0.008 * unit(rng));
        for (int s = 1; s < segments; ++s) {
            const double step = 0.03 + 0.05 * unit(rng);
            const double sign = (s == segments - 1 && i % 3 == 0) ? -1.0 : 1.0;
            truth.slopes.push_back(truth.slopes.back() + sign * step);
        }
        validate(truth);

        GeneratorSpec spec;
        spec.model = truth;
        spec.year_start = 1650;
        spec.year_end = 2012;
        auto data = log_transform(generate(spec));

        FitConfig config;
        config.n_segments = segments;
        config.grid_points_per_breakpoint = 10;
        auto fit = multistart_fit(data, config);

        double slope_err = 0.0, break_err = 0.0;
        for (int s = 0; s < segments; ++s) {
            slope_err = std::max(slope_err,
                                 std::abs(fit.model.slopes[s] - truth.slopes[s]));
        }
        for (int k = 0; k < segments - 1; ++k) {
            break_err = std::max(
                break_err, std::abs(fit.model.breakpoints[k] - truth.breakpoints[k]));
        }
        worst_slope = std::max(worst_slope, slope_err);
        worst_break = std::max(worst_break, break_err);
        worst_sse = std::max(worst_sse, fit.sse);
        if (slope_err <= 1e-6 && break_err <= 1e-4 && fit.sse <= 1e-15) ++recovered;
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d/%d exact; worst slope err %.2g (<=1e-6), breakpoint err %.2g "
                  "(<=1e-4), sse %.2g (<=1e-15)",
                  recovered, kModels, worst_slope, worst_break, worst_sse);
    detail = buf;
    return recovered == kModels;
}

// ---------------------------------------------------------------------------
// Criterion 3: noisy recovery at the published four-phase parameter set.
// ---------------------------------------------------------------------------

bool criterion3(std::string& detail) {
    const auto truth = testutil::four_phase_model();
    std::vector<double> break_errors, slope_rel_errors;
    int high_r2 = 0;
    const int kSeeds = 100;
    for (int s = 0; s < kSeeds; ++s) {
        auto data = testutil::logs(testutil::four_phase_series(0.05, 5000 + s));
        FitConfig config;
        config.n_segments = 4;
        auto fit = multistart_fit(data, config);
        for (int k = 0; k < 3; ++k) {
            break_errors.push_back(
                std::abs(fit.model.breakpoints[k] - truth.breakpoints[k]));
        }
        for (int k = 0; k < 4; ++k) {
            slope_rel_errors.push_back(std::abs(fit.model.slopes[k] - truth.slopes[k]) /
                                       std::abs(truth.slopes[k]));
        }
        if (r_squared(fit, data).first >= 0.99) ++high_r2;
    }
    const double med_break = median(break_errors);
    const double med_slope = median(slope_rel_errors);

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "median |breakpoint err| %.3fy (<=3), median rel slope err %.2f%% "
                  "(<=10%%), r2>=0.99 in %d/100 (>=90)",
                  med_break, 100.0 * med_slope, high_r2);
    detail = buf;
    return med_break <= 3.0 && med_slope <= 0.10 && high_r2 >= 90;
}

// ---------------------------------------------------------------------------
// Criterion 4: multistart never loses to the integer-grid oracle.
// ---------------------------------------------------------------------------

bool criterion4(std::string& detail) {
    std::mt19937_64 rng(220820264);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> n_points(40, 80);

    int ok = 0;
    double worst_gap = 0.0;
    const int kInstances = 50;
    for (int i = 0; i < kInstances; ++i) {
        const int segments = 2 + (i % 2); // 1 or 2 breakpoints
        const int n = n_points(rng);

        SegmentedModel truth;
        truth.year_min = 1950;
        truth.year_max = 1950 + n - 1;
        double lo = truth.year_min + 8.0;
        for (int k = 0; k < segments - 1; ++k) {
            const double hi = truth.year_max - 8.0 - 12.0 * (segments - 2 - k);
            truth.breakpoints.push_back(lo + unit(rng) * (hi - lo));
            lo = truth.breakpoints.back() + 12.0;
        }
        truth.slopes.push_back(-0.05 + 0.1 * unit(rng));
        for (int s = 1; s < segments; ++s) {
            const double step = (0.02 + 0.08 * unit(rng)) * (unit(rng) < 0.5 ? -1 : 1);
            truth.slopes.push_back(truth.slopes.back() + step);
        }
        validate(truth);

        GeneratorSpec spec;
        spec.model = truth;
        spec.year_start = static_cast<int>(truth.year_min);
        spec.year_end = static_cast<int>(truth.year_max);
        spec.noise_sigma = 0.02 + 0.08 * unit(rng);
        spec.seed = 7000 + static_cast<std::uint64_t>(i);
        auto data = log_transform(generate(spec));

        FitConfig config;
        config.n_segments = segments;
        // With the default bounds (first+3, last-3) and n-8 grid points, the
        // evenly spaced grid lands exactly on the integer years the oracle
        // scans, so every oracle candidate is also a multistart start.
        config.grid_points_per_breakpoint = n - 8;
        auto ms = multistart_fit(data, config);
        auto bf = brute_force_fit(data, segments, false);

        const double gap = ms.sse - bf.sse;
        worst_gap = std::max(worst_gap, gap);
        if (gap <= 1e-9) ++ok;
    }

    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d instances; worst sse gap %.3g (<=1e-9)",
                  ok, kInstances, worst_gap);
    detail = buf;
    return ok == kInstances;
}

// ---------------------------------------------------------------------------
// Criterion 5: segment-count selection.
// ---------------------------------------------------------------------------

bool criterion5(std::string& detail) {
    FitConfig base; // intercept stays erased across the scan
    int chose4 = 0;
    for (int s = 0; s < 100; ++s) {
        auto data = testutil::logs(testutil::four_phase_series(0.05, 11000 + s));
        auto sel = select_segments(data, 6, 0.005, base, 1);
        if (sel.chosen_segments == 4) ++chose4;
    }

    SegmentedModel flat;
    flat.slopes = {0.01};
    flat.year_min = 1650;
    flat.year_max = 2012;
    int chose1 = 0;
    for (int s = 0; s < 100; ++s) {
        GeneratorSpec spec;
        spec.model = flat;
        spec.year_start = 1650;
        spec.year_end = 2012;
        spec.noise_sigma = 0.05;
        spec.seed = 12000 + static_cast<std::uint64_t>(s);
        auto data = log_transform(generate(spec));
        auto sel = select_segments(data, 6, 0.005, base, 1);
        if (sel.chosen_segments == 1) ++chose1;
    }

    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "four-phase data -> 4 segments in %d/100 (>=90); single-phase -> 1 in "
                  "%d/100 (>=99)",
                  chose4, chose1);
    detail = buf;
    return chose4 >= 90 && chose1 >= 99;
}

// ---------------------------------------------------------------------------
// Criterion 6: anchored single-exponential fit at publication scale.
// ---------------------------------------------------------------------------

bool criterion6(std::string& detail) {
    SegmentedModel truth;
    truth.intercept = std::log(702880.0);
    truth.slopes = {0.029};
    truth.year_min = 0;
    truth.year_max = 32;

    GeneratorSpec spec;
    spec.model = truth;
    spec.year_start = 0; // years measured from 1980
    spec.year_end = 32;
    spec.noise_sigma = 0.03;
    spec.seed = 1980;
    auto data = log_transform(generate(spec));

    FitConfig config;
    config.n_segments = 1;
    config.intercept = true;
    auto fit = multistart_fit(data, config);

    const double b1 = fit.model.slopes[0];
    const auto doubling = doubling_time_years(b1);

    char buf[120];
    std::snprintf(buf, sizeof buf, "b1=%.4f (0.029+-0.003), doubling %.1fy (24+-3)",
                  b1, doubling ? *doubling : -1.0);
    detail = buf;
    return std::abs(b1 - 0.029) <= 0.003 && doubling &&
           std::abs(*doubling - 24.0) <= 3.0;
}

// ---------------------------------------------------------------------------
// Criterion 7: statistical machinery vs closed-form simple regression.
// ---------------------------------------------------------------------------

bool criterion7(std::string& detail) {
    std::mt19937_64 rng(220820267);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> n_points(5, 30);

    int ok = 0;
    double worst = 0.0;
    const int kInstances = 100;
    for (int i = 0; i < kInstances; ++i) {
        const int n = n_points(rng);
        SegmentedModel truth;
        truth.intercept = -2.0 + 4.0 * unit(rng);
        truth.slopes = {-0.2 + 0.4 * unit(rng)};
        truth.year_min = 0;
        truth.year_max = n - 1;

        GeneratorSpec spec;
        spec.model = truth;
        spec.year_start = 0;
        spec.year_end = n - 1;
        spec.noise_sigma = 0.01 + 0.2 * unit(rng);
        spec.seed = 8000 + static_cast<std::uint64_t>(i);
        auto data = log_transform(generate(spec));

        FitConfig config;
        config.n_segments = 1;
        config.intercept = true;
        auto fit = multistart_fit(data, config);
        auto inf = analyze(fit, data);

        std::vector<double> x, y;
        for (const auto& p : data.points) {
            x.push_back(static_cast<double>(p.year));
            y.push_back(p.log_count);
        }
        auto ref = testutil::simple_regression(x, y);

        const auto& slope = inf.parameters[1];
        const double err =
            std::max({std::abs(slope.estimate - ref.slope),
                      std::abs(slope.se - ref.se_slope),
                      std::abs(inf.r_squared - ref.r2_centered)});
        worst = std::max(worst, err);
        if (err <= 1e-9) ++ok;
    }

    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d instances agree; worst deviation %.2g (<=1e-9)",
                  ok, kInstances, worst);
    detail = buf;
    return ok == kInstances;
}

// ---------------------------------------------------------------------------
// Criterion 8: property bundle.
// ---------------------------------------------------------------------------

bool criterion8(std::string& detail) {
    std::vector<std::string> broken;

    // (a) Jacobian vs central finite differences.
    {
        auto m = testutil::four_phase_model();
        m.intercept = 0.7;
        bool ok = true;
        for (double year : {1700.0, 1800.0, 1960.0, 2006.0}) {
            auto row = jacobian_row(m, year);
            for (std::size_t p = 0; p < m.parameter_count(); ++p) {
                SegmentedModel up = m, dn = m;
                const bool is_break = p >= 1 + m.slopes.size();
                const double h = is_break ? 1e-4 : 1e-6;
                auto bump = [&](SegmentedModel& mm, double d) {
                    if (p == 0) {
                        mm.intercept = *mm.intercept + d;
                    } else if (p <= m.slopes.size()) {
                        mm.slopes[p - 1] += d;
                    } else {
                        mm.breakpoints[p - 1 - m.slopes.size()] += d;
                    }
                };
                bump(up, h);
                bump(dn, -h);
                const double fd =
                    (predict_log(up, year, true) - predict_log(dn, year, true)) /
                    (2.0 * h);
                if (std::abs(row(static_cast<Eigen::Index>(p)) - fd) > 1e-6) ok = false;
            }
        }
        if (!ok) broken.push_back("jacobian-fd");
    }

    // (b) Continuity at breakpoints (exact equality of one-sided limits'
    // closed forms via the chained offsets).
    {
        auto m = testutil::four_phase_model();
        bool ok = true;
        for (double a : m.breakpoints) {
            const double left = predict_log(m, a);
            const double right = predict_log(m, std::nextafter(a, 1e9));
            if (std::abs(left - right) > 1e-12 * std::max(1.0, std::abs(left))) ok = false;
        }
        if (!ok) broken.push_back("continuity");
    }

    // (c) Monotone SSE descent.
    {
        auto data = testutil::logs(testutil::four_phase_series(0.05, 314));
        FitConfig config;
        config.n_segments = 4;
        auto fit = multistart_fit(data, config);
        bool ok = !fit.sse_history.empty();
        for (std::size_t i = 1; i < fit.sse_history.size(); ++i) {
            if (!(fit.sse_history[i] < fit.sse_history[i - 1])) ok = false;
        }
        if (!ok) broken.push_back("monotone-descent");
    }

    // (d) Label-swap antisymmetry of interaction deltas.
    {
        auto s0 = testutil::four_phase_series(0.04, 315);
        s0.label = "g0";
        auto s1 = testutil::four_phase_series(0.04, 316);
        s1.label = "g1";
        FitConfig config;
        config.n_segments = 4;
        auto ab = fit_interaction(s0, s1, config);
        auto ba = fit_interaction(s1, s0, config);
        bool ok = std::abs(ab.sse - ba.sse) <= 1e-9 * std::max(1.0, ab.sse);
        for (std::size_t k = 0; k < ab.deltas.size(); ++k) {
            if (std::abs(ab.deltas[k] + ba.deltas[k]) > 1e-9) ok = false;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            if (std::abs(ab.base_model.breakpoints[k] - ba.base_model.breakpoints[k]) >
                1e-9) {
                ok = false;
            }
        }
        if (!ok) broken.push_back("label-swap");
    }

    // (e) Covariance positive semidefinite.
    {
        auto data = testutil::logs(testutil::four_phase_series(0.05, 317));
        FitConfig config;
        config.n_segments = 4;
        auto fit = multistart_fit(data, config);
        auto cov = covariance_matrix(fit, data);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        bool ok = es.info() == Eigen::Success;
        const double floor = -1e-9 * cov.trace();
        for (Eigen::Index i = 0; ok && i < es.eigenvalues().size(); ++i) {
            if (es.eigenvalues()(i) < floor) ok = false;
        }
        if (!ok) broken.push_back("covariance-psd");
    }

    // (f) CI widths scale with the confidence level.
    {
        auto data = testutil::logs(testutil::four_phase_series(0.05, 318));
        FitConfig config;
        config.n_segments = 4;
        auto fit = multistart_fit(data, config);
        auto i90 = analyze(fit, data, 0.90);
        auto i95 = analyze(fit, data, 0.95);
        auto i99 = analyze(fit, data, 0.99);
        bool ok = true;
        for (std::size_t p = 0; p < i95.parameters.size(); ++p) {
            const double w90 = i90.parameters[p].ci_high - i90.parameters[p].ci_low;
            const double w95 = i95.parameters[p].ci_high - i95.parameters[p].ci_low;
            const double w99 = i99.parameters[p].ci_high - i99.parameters[p].ci_low;
            if (i95.parameters[p].se == 0.0) continue;
            if (!(w90 < w95 && w95 < w99)) ok = false;
            // Width ratios are the same for every parameter (same quantiles).
            const double r0 = (i99.parameters[0].ci_high - i99.parameters[0].ci_low) /
                              (i95.parameters[0].ci_high - i95.parameters[0].ci_low);
            if (std::abs(w99 / w95 - r0) > 1e-9) ok = false;
        }
        if (!ok) broken.push_back("ci-scaling");
    }

    if (broken.empty()) {
        detail = "jacobian-fd, continuity, monotone-descent, label-swap, "
                 "covariance-psd, ci-scaling all hold";
        return true;
    }
    detail = "broken: ";
    for (const auto& b : broken) detail += b + " ";
    return false;
}

} // namespace

int main(int argc, char** argv) {
    struct Entry {
        int index;
        const char* name;
        bool (*run)(std::string&);
    };
    const Entry entries[] = {
        {1, "derived-quantity consistency", criterion1},
        {2, "noiseless recovery", criterion2},
        {3, "noisy recovery at paper scale", criterion3},
        {4, "oracle equivalence", criterion4},
        {5, "segment selection", criterion5},
        {6, "single-exponential model", criterion6},
        {7, "statistical machinery oracle", criterion7},
        {8, "property suites", criterion8},
    };

    for (const auto& e : entries) {
        if (argc > 1) {
            bool wanted = false;
            for (int i = 1; i < argc; ++i) {
                if (std::atoi(argv[i]) == e.index) wanted = true;
            }
            if (!wanted) continue;
        }
        std::string detail;
        const auto t0 = Clock::now();
        bool pass = false;
        try {
            pass = e.run(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        const double seconds =
            std::chrono::duration<double>(Clock::now() - t0).count();
        report(e.index, e.name, pass, detail, seconds);
    }
    return g_failures;
}
