#include "segrowth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "segrowth/errors.hpp"

namespace segrowth {

namespace {

std::uint64_t combination_count(std::uint64_t m, std::uint64_t k, std::uint64_t cap) {
    if (k > m) return 0;
    // C(m, k), clamped at cap to avoid overflow
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (result > cap) return cap + 1;
        result = result * (m - k + i) / i;
    }
    return result;
}

} // namespace

AnnualSeries generate(const GeneratorSpec& spec) {
    validate(spec.model);
    if (spec.year_start > spec.year_end) {
        throw DataError("generator year range is empty");
    }
    if (spec.noise_sigma < 0.0 || !std::isfinite(spec.noise_sigma)) {
        throw DataError("noise_sigma must be finite and non-negative");
    }
    NormalSampler normal(spec.seed);
    AnnualSeries series;
    series.label = spec.label;
    series.observations.reserve(
        static_cast<std::size_t>(spec.year_end - spec.year_start + 1));
    for (int year = spec.year_start; year <= spec.year_end; ++year) {
        double log_mean = predict_log(spec.model, year, /*extrapolate=*/true);
        double noise = spec.noise_sigma > 0.0 ? spec.noise_sigma * normal() : 0.0;
        series.observations.push_back({year, std::exp(log_mean + noise)});
    }
    return series;
}

FitResult brute_force_fit(const LogSeries& data, int n_segments, bool intercept,
                          std::optional<std::pair<double, double>> bounds,
                          int min_points_per_segment, std::uint64_t max_tuples) {
    if (data.points.size() < 2) throw DataError("log series has fewer than 2 points");
    if (n_segments < 1) throw DataError("n_segments must be >= 1");

    FitConfig probe_config;
    probe_config.n_segments = n_segments;
    probe_config.intercept = intercept;
    probe_config.breakpoint_bounds = bounds;
    probe_config.min_points_per_segment = min_points_per_segment;
    const auto eff = effective_breakpoint_bounds(data, probe_config);

    const int k = n_segments - 1;
    const double year_min = data.points.front().year;
    const double year_max = data.points.back().year;

    auto finish = [&](const std::vector<double>& breakpoints, const OlsSolution& ols,
                      std::uint64_t tried) {
        SegmentedModel model;
        model.intercept = ols.intercept;
        model.slopes = ols.slopes;
        model.breakpoints = breakpoints;
        model.year_min = year_min;
        model.year_max = year_max;

        FitResult result;
        result.model = model;
        result.sse = ols.sse;
        result.n_obs = static_cast<int>(data.points.size());
        result.n_params = (intercept ? 1 : 0) + 2 * n_segments - 1;
        result.converged = true;
        result.termination = Termination::ToleranceMet;
        result.iterations = 0;
        result.starts_tried = static_cast<int>(std::min<std::uint64_t>(
            tried, static_cast<std::uint64_t>(std::numeric_limits<int>::max())));
        result.best_start = pack_parameters(model);
        result.sse_history = {ols.sse};

        result.residuals.reserve(data.points.size());
        for (const auto& p : data.points) {
            result.residuals.push_back(p.log_count - predict_log(model, p.year));
        }
        return result;
    };

    if (k == 0) {
        OlsSolution ols =
            ols_given_breakpoints(data, {}, intercept, min_points_per_segment);
        return finish({}, ols, 1);
    }

    // integer candidate years strictly inside the bounds
    const int lo = static_cast<int>(std::floor(eff.first)) + 1;
    const int hi = static_cast<int>(std::ceil(eff.second)) - 1;
    if (lo > hi) throw FitError("no integer year lies strictly inside the bounds");
    const std::uint64_t m = static_cast<std::uint64_t>(hi - lo + 1);

    const std::uint64_t total = combination_count(m, static_cast<std::uint64_t>(k),
                                                  max_tuples);
    if (total > max_tuples) {
        throw FitError("brute force would enumerate more than " +
                       std::to_string(max_tuples) + " breakpoint tuples");
    }

    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;

    bool found = false;
    double best_sse = std::numeric_limits<double>::infinity();
    std::vector<double> best_breakpoints;
    OlsSolution best_ols;
    std::uint64_t evaluated = 0;

    while (true) {
        std::vector<double> tuple(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            tuple[static_cast<std::size_t>(i)] =
                static_cast<double>(lo + idx[static_cast<std::size_t>(i)]);
        }
        if (feasible_breakpoints(data, tuple, eff, min_points_per_segment)) {
            ++evaluated;
            OlsSolution ols =
                ols_given_breakpoints(data, tuple, intercept, min_points_per_segment);
            // ties resolve to the lexicographically smallest tuple, which this
            // enumeration order visits first
            if (!found || ols.sse < best_sse) {
                found = true;
                best_sse = ols.sse;
                best_breakpoints = tuple;
                best_ols = std::move(ols);
            }
        }
        int pos = k - 1;
        while (pos >= 0 &&
               idx[static_cast<std::size_t>(pos)] == static_cast<int>(m) - k + pos) {
            --pos;
        }
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i)
            idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }

    if (!found) {
        throw FitError("no integer breakpoint tuple satisfies the per-segment minimum");
    }
    return finish(best_breakpoints, best_ols, evaluated);
}

} // namespace segrowth
