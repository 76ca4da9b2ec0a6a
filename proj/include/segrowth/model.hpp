#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "segrowth/errors.hpp"

namespace segrowth {

/// Piecewise log-linear growth model. S segments are separated by S-1
/// strictly increasing breakpoint years; each segment has its own per-year
/// growth constant. The pieces chain continuously, with the first segment
/// anchored at year 0: log y = b0 + b1*year on the first segment, then
/// log y = b0 + sum b_k*(a_k - a_{k-1}) + b_j*(year - a_{j-1}) beyond.
/// An absent intercept means b0 is fixed at zero ("erased").
struct SegmentedModel {
    std::optional<double> intercept;  ///< b0; nullopt = erased (fixed at 0)
    std::vector<double> slopes;       ///< b1..bS
    std::vector<double> breakpoints;  ///< a1..a_{S-1}
    double year_min = 0.0;
    double year_max = 0.0;

    std::size_t segment_count() const { return slopes.size(); }
    std::size_t parameter_count() const {
        return (intercept ? 1u : 0u) + slopes.size() + breakpoints.size();
    }
};

void validate(const SegmentedModel& model);

/// 0-based segment index for a year; a year equal to a breakpoint belongs to
/// the left segment.
std::size_t segment_index(const SegmentedModel& model, double year);

/// Chained offsets c_0..c_S: c_0 = b0 (or 0), c_j = c_{j-1} + b_j*(a_j - a_{j-1})
/// with a_0 = 0 and a_S = year_max. c_{j-1} is the predicted log count at the
/// left edge of segment j; reusing these sums makes the prediction exactly
/// continuous at every breakpoint.
std::vector<double> segment_offsets(const SegmentedModel& model);

double predict_log(const SegmentedModel& model, double year, bool extrapolate = false);
double predict_count(const SegmentedModel& model, double year, bool extrapolate = false);

/// Batch form of predict_log; shares the chained offsets across all years.
void predict_log_batch(const SegmentedModel& model, std::span<const double> years,
                       std::span<double> out, bool extrapolate = false);

/// Partials of predict_log at one year, ordered (b0 if present, b1..bS,
/// a1..a_{S-1}).
Eigen::RowVectorXd jacobian_row(const SegmentedModel& model, double year,
                                bool extrapolate = false);

/// Fills one Jacobian row per year into a preallocated years.size() x
/// parameter_count() matrix.
void fill_jacobian(const SegmentedModel& model, std::span<const double> years,
                   Eigen::Ref<Eigen::MatrixXd> out, bool extrapolate = false);

/// Percentage annual increase implied by a growth constant: 100*(exp(b)-1).
double growth_rate_pct(double slope);

/// Years until the outcome doubles: ln(2)/b for b > 0, otherwise nothing.
std::optional<double> doubling_time_years(double slope);

struct SegmentSummary {
    int index = 0;  ///< 1-based
    double start_year = 0.0;
    double end_year = 0.0;
    double slope = 0.0;
    double growth_rate_pct = 0.0;
    std::optional<double> doubling_time_years;
};

std::vector<SegmentSummary> summarize(const SegmentedModel& model);

} // namespace segrowth
