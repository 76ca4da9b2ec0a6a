#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "segrowth/oracle.hpp"
#include "segrowth/series.hpp"
#include "segrowth/solver.hpp"

namespace testutil {

/// Four-phase reference model used throughout the tests: slow colonial-era
/// growth, two acceleration phases, and a sharp recent decline.
inline segrowth::SegmentedModel four_phase_model() {
    segrowth::SegmentedModel m;
    m.slopes = {0.005, 0.023, 0.078, -0.22};
    m.breakpoints = {1753.3, 1926.1, 2000.6};
    m.year_min = 1650.0;
    m.year_max = 2012.0;
    return m;
}

inline segrowth::AnnualSeries four_phase_series(double sigma, std::uint64_t seed) {
    segrowth::GeneratorSpec spec;
    spec.model = four_phase_model();
    spec.year_start = 1650;
    spec.year_end = 2012;
    spec.noise_sigma = sigma;
    spec.seed = seed;
    spec.label = "four-phase";
    return segrowth::generate(spec);
}

inline segrowth::LogSeries logs(const segrowth::AnnualSeries& series) {
    return segrowth::log_transform(series);
}

/// Textbook simple linear regression y = a + b x with closed-form statistics.
struct SimpleRegression {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
    double se_slope = 0.0;
    double r2_centered = 0.0;
};

inline SimpleRegression simple_regression(const std::vector<double>& x,
                                          const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    SimpleRegression r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - r.intercept - r.slope * x[i];
        r.sse += e * e;
    }
    const double sigma2 = r.sse / static_cast<double>(n - 2);
    r.se_slope = std::sqrt(sigma2 / sxx);
    r.r2_centered = syy > 0.0 ? 1.0 - r.sse / syy : 1.0;
    return r;
}

} // namespace testutil
