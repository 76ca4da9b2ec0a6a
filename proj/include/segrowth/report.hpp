#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "segrowth/compare.hpp"
#include "segrowth/inference.hpp"
#include "segrowth/series.hpp"
#include "segrowth/solver.hpp"

namespace segrowth {

/// End-to-end fit options. `config.intercept` and `config.n_segments` are
/// resolved by the pipeline: `intercept` unset means ON for a single segment
/// and OFF (erased) otherwise; with `select` set the segment count is chosen
/// by the r-squared plateau rule and the scan holds the intercept fixed.
struct PipelineOptions {
    FitConfig config;
    std::optional<bool> intercept;
    int offset_year = 0;  ///< subtracted from every year before fitting
    bool select = false;
    int max_segments = 6;
    double min_r2_gain = 0.005;
    int threads = 1;
    ZeroPolicy zero_policy = ZeroPolicy::DropWithWarning;
    double ci_level = 0.95;
};

/// Everything a fit produced, sufficient to reproduce it: the validated
/// input, the shifted log series actually fitted, the effective config, the
/// fit, its statistics, and the selection trace when selection ran.
struct FitReport {
    std::string label;
    AnnualSeries raw;      ///< validated and sorted, original years
    LogSeries data;        ///< fitted points, shifted years
    int offset_year = 0;
    FitConfig config;      ///< effective values (resolved segments/intercept)
    int threads = 1;
    double min_r2_gain = 0.005;
    FitResult fit;
    InferenceReport inference;
    std::optional<SelectionResult> selection;
};

FitReport run_fit_pipeline(const AnnualSeries& series, const PipelineOptions& options);

/// Joint comparison plus the two independent single-series fits.
struct CompareReport {
    int offset_year = 0;
    FitConfig config;
    int threads = 1;
    ComparisonResult comparison;
    FitReport fit0;
    FitReport fit1;
};

CompareReport run_compare_pipeline(const AnnualSeries& series0,
                                   const AnnualSeries& series1,
                                   const PipelineOptions& options);

/// {"intercept": number|null, "slopes": [...], "breakpoints": [...],
///  "domain": [year_min, year_max]}
nlohmann::ordered_json model_to_json(const SegmentedModel& model);
SegmentedModel model_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const FitReport& report);
nlohmann::ordered_json to_json(const CompareReport& report);

/// Human-readable table in the classic layout: breakpoint rows, then the
/// intercept, then slope rows with growth rate (2 decimals) and doubling
/// time (1 decimal, "-" when the slope is not positive).
std::string render_text(const FitReport& report);
std::string render_text(const CompareReport& report);

/// year, observed_count, predicted_count, log_observed, log_predicted,
/// segment_index — tab-separated, one row per fitted observation.
std::string render_plot_tsv(const FitReport& report);

/// Self-contained SVG: observed dots and fitted curve on a log-scale count
/// axis, dashed verticals at the breakpoints.
std::string render_svg(const FitReport& report);

} // namespace segrowth
