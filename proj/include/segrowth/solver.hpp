#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "segrowth/model.hpp"
#include "segrowth/series.hpp"

namespace segrowth {

struct FitConfig {
    int n_segments = 1;
    bool intercept = false;
    /// Open interval the breakpoints must stay inside. Defaults to the data
    /// year range shrunk by min_points_per_segment years on each side.
    std::optional<std::pair<double, double>> breakpoint_bounds;
    int min_points_per_segment = 3;
    int grid_points_per_breakpoint = 8;
    int max_iterations = 200;
    double tolerance = 1e-12;  ///< relative SSE improvement that counts as converged
    int step_halving_max = 30;
};

enum class Termination {
    ToleranceMet,  ///< relative SSE improvement fell below tolerance
    Stalled,       ///< step halving exhausted without an acceptable step
    IterationCap   ///< max_iterations reached while still improving
};

const char* to_string(Termination t);

struct FitResult {
    SegmentedModel model;
    double sse = 0.0;
    std::vector<double> residuals;  ///< observed minus predicted, in data order
    int n_obs = 0;
    int n_params = 0;
    bool converged = false;
    Termination termination = Termination::ToleranceMet;
    int iterations = 0;
    int starts_tried = 0;
    Eigen::VectorXd best_start;       ///< initial parameter vector of the winning start
    std::vector<double> sse_history;  ///< accepted SSE per iteration, non-increasing
    bool ridge_fallback_used = false;

    int dof() const { return n_obs - n_params; }
};

struct OlsSolution {
    std::vector<double> slopes;
    std::optional<double> intercept;
    double sse = 0.0;
};

/// Exact least squares over (b0, b1..bS) for fixed breakpoints; the chained
/// prediction is linear in those parameters, so this is a single QR solve.
OlsSolution ols_given_breakpoints(const LogSeries& data,
                                  const std::vector<double>& breakpoints,
                                  bool intercept, int min_points_per_segment = 3);

/// Parameter vector layout used throughout: (b0 if intercept, b1..bS, a1..a_{S-1}).
Eigen::VectorXd pack_parameters(const SegmentedModel& model);
SegmentedModel unpack_parameters(const Eigen::VectorXd& theta, int n_segments,
                                 bool intercept, double year_min, double year_max);
std::vector<std::string> parameter_names(int n_segments, bool intercept);

std::pair<double, double> effective_breakpoint_bounds(const LogSeries& data,
                                                      const FitConfig& config);

/// True when the breakpoints are strictly ordered, inside the bounds, and
/// every segment holds at least min_points_per_segment observations.
bool feasible_breakpoints(const LogSeries& data, const std::vector<double>& breakpoints,
                          const std::pair<double, double>& bounds,
                          int min_points_per_segment);

/// Gauss-Newton with step halving. Trial steps that leave the feasible set or
/// fail to reduce the SSE are halved; accepted SSE is non-increasing.
FitResult gauss_newton(const LogSeries& data, const Eigen::VectorXd& init,
                       const FitConfig& config);

/// All feasible breakpoint tuples drawn from an evenly spaced grid inside the
/// bounds, in deterministic lexicographic order.
std::vector<std::vector<double>> grid_breakpoint_starts(const LogSeries& data,
                                                        const FitConfig& config);

/// Runs gauss_newton from every feasible grid start (slopes initialized by
/// OLS at the start's breakpoints) and returns the best result by SSE, ties
/// broken by lexicographic parameter order. Deterministic for a fixed config
/// regardless of thread count.
FitResult multistart_fit(const LogSeries& data, const FitConfig& config, int threads = 1);

} // namespace segrowth
