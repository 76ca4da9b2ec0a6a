#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "segrowth/solver.hpp"

namespace segrowth {

/// Estimate, uncertainty, and test statistics for one model parameter.
struct ParameterStats {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
};

struct InferenceReport {
    double r_squared = 0.0;             ///< centered (about the mean of log counts)
    double r_squared_uncentered = 0.0;  ///< about zero
    double sigma2_hat = 0.0;
    int dof = 0;
    double ci_level = 0.95;
    std::vector<ParameterStats> parameters;
    bool pseudo_inverse_used = false;
};

/// sigma2_hat * (J'J)^-1 at the fitted parameters. Falls back to the
/// Moore-Penrose pseudo-inverse when J'J is singular; `pseudo_inverse_used`
/// reports which path was taken.
Eigen::MatrixXd covariance_matrix(const FitResult& fit, const LogSeries& data,
                                  bool* pseudo_inverse_used = nullptr);

/// (centered, uncentered) coefficient of determination on the log scale.
std::pair<double, double> r_squared(const FitResult& fit, const LogSeries& data);

/// Standard errors, CIs (Student t, `level` two-sided), and H0: param = 0 tests.
InferenceReport analyze(const FitResult& fit, const LogSeries& data, double level = 0.95);

/// One candidate model in a segment-count scan.
struct SelectionCandidate {
    int n_segments = 0;
    double r_squared = 0.0;   ///< centered
    double sse = 0.0;
    bool fit_ok = false;
    std::string failure;
    FitResult fit;            ///< valid only when fit_ok
};

struct SelectionResult {
    int chosen_segments = 0;
    FitResult best_fit;  ///< the fit for chosen_segments
    std::vector<SelectionCandidate> trace;
};

/// Scan segment counts 1..max_segments and keep the smallest count whose
/// successor improves centered r-squared by less than `min_r2_gain`.
SelectionResult select_segments(const LogSeries& data, int max_segments,
                                double min_r2_gain, const FitConfig& base_config,
                                int threads = 1);

namespace detail {

/// Inference for any least-squares fit linearized at its solution: SEs from
/// sigma2 * (J'J)^-1, Student-t CIs and zero tests, r-squared against `y`.
InferenceReport analyze_linearized(const Eigen::MatrixXd& jacobian,
                                   const Eigen::VectorXd& theta,
                                   const std::vector<std::string>& names, double sse,
                                   const Eigen::VectorXd& y, double level);

} // namespace detail

} // namespace segrowth
