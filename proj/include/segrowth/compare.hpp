#pragma once

#include <optional>
#include <string>
#include <vector>

#include "segrowth/inference.hpp"
#include "segrowth/series.hpp"
#include "segrowth/solver.hpp"

namespace segrowth {

/// Joint two-group fit: shared breakpoints, per-segment slope b_k + d_k * D
/// where D is 0 for the first group and 1 for the second, optional shared
/// intercept. Parameter order: (b0 if intercept, b1..bS, d1..dS, a1..a_{S-1}).
struct ComparisonResult {
    std::string label0;
    std::string label1;
    SegmentedModel base_model;        ///< group D=0; carries shared breakpoints
    std::vector<double> deltas;       ///< slope differences d1..dS (group 1 - group 0)

    double sse = 0.0;
    int n_obs = 0;
    int n_params = 0;
    bool converged = false;
    Termination termination = Termination::IterationCap;
    int iterations = 0;
    int starts_tried = 0;
    bool ridge_fallback_used = false;
    std::vector<double> residuals;    ///< group-0 rows then group-1 rows

    InferenceReport inference;        ///< stats for the full stacked parameter vector

    int dof() const { return n_obs - n_params; }
    /// Group D=1 model: slopes b_k + d_k, same breakpoints and intercept.
    SegmentedModel group1_model() const;
};

/// Slopes and slope differences for fixed shared breakpoints, by joint OLS
/// over the stacked series (the prediction is linear in b, d, and b0).
struct StackedOls {
    std::optional<double> intercept;
    std::vector<double> slopes;
    std::vector<double> deltas;
    double sse = 0.0;
};
StackedOls stacked_ols_given_breakpoints(const LogSeries& group0, const LogSeries& group1,
                                         const std::vector<double>& breakpoints,
                                         bool intercept, int min_points_per_segment = 3);

/// Joint interaction fit of two annual series by multistart Gauss-Newton.
/// `config.n_segments` is the shared segment count; zero counts follow
/// `zero_policy`. Both series must overlap in years.
ComparisonResult fit_interaction(const AnnualSeries& series0, const AnnualSeries& series1,
                                 const FitConfig& config, int threads = 1,
                                 double ci_level = 0.95,
                                 ZeroPolicy zero_policy = ZeroPolicy::DropWithWarning);

/// Same fit for series that are already log-transformed.
ComparisonResult fit_interaction_logs(const LogSeries& group0, const LogSeries& group1,
                                      const FitConfig& config, int threads = 1,
                                      double ci_level = 0.95);

/// Two-sided t test of each slope difference against zero.
struct InteractionTest {
    std::string name;      ///< d1..dS
    double delta = 0.0;
    double se = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    bool significant = false;  ///< p < alpha
};
std::vector<InteractionTest> test_interactions(const ComparisonResult& result,
                                               double alpha = 0.05);

} // namespace segrowth
