#include "segrowth/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "segrowth/model.hpp"

namespace segrowth {

namespace {

std::string strf(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    char buf[512];
    const int n = std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    if (n < 0) return {};
    return std::string(buf, buf + std::min(n, static_cast<int>(sizeof buf) - 1));
}

AnnualSeries sorted_validated(const AnnualSeries& series) {
    AnnualSeries copy = series;
    std::stable_sort(copy.observations.begin(), copy.observations.end(),
                     [](const Observation& a, const Observation& b) {
                         return a.year < b.year;
                     });
    validate(copy);
    return copy;
}

AnnualSeries shift_years(const AnnualSeries& series, int offset) {
    AnnualSeries shifted = series;
    for (auto& o : shifted.observations) o.year -= offset;
    return shifted;
}

nlohmann::ordered_json config_to_json(const FitConfig& config, int threads) {
    nlohmann::ordered_json j;
    j["segments"] = config.n_segments;
    j["intercept"] = config.intercept;
    if (config.breakpoint_bounds) {
        j["breakpoint_bounds"] = {config.breakpoint_bounds->first,
                                  config.breakpoint_bounds->second};
    } else {
        j["breakpoint_bounds"] = nullptr;
    }
    j["min_points_per_segment"] = config.min_points_per_segment;
    j["grid_points_per_breakpoint"] = config.grid_points_per_breakpoint;
    j["max_iterations"] = config.max_iterations;
    j["tolerance"] = config.tolerance;
    j["step_halving_max"] = config.step_halving_max;
    j["threads"] = threads;
    return j;
}

nlohmann::ordered_json fit_block_to_json(const FitResult& fit) {
    nlohmann::ordered_json j;
    j["sse"] = fit.sse;
    j["converged"] = fit.converged;
    j["termination"] = to_string(fit.termination);
    j["iterations"] = fit.iterations;
    j["starts_tried"] = fit.starts_tried;
    j["ridge_fallback_used"] = fit.ridge_fallback_used;
    j["degrees_of_freedom"] = fit.dof();
    return j;
}

nlohmann::ordered_json inference_to_json(const InferenceReport& inf) {
    nlohmann::ordered_json j;
    j["r_squared"] = inf.r_squared;
    j["r_squared_uncentered"] = inf.r_squared_uncentered;
    j["sigma2_hat"] = inf.sigma2_hat;
    j["degrees_of_freedom"] = inf.dof;
    j["ci_level"] = inf.ci_level;
    j["pseudo_inverse_used"] = inf.pseudo_inverse_used;
    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (const auto& ps : inf.parameters) {
        nlohmann::ordered_json row;
        row["name"] = ps.name;
        row["estimate"] = ps.estimate;
        row["se"] = ps.se;
        row["ci_low"] = ps.ci_low;
        row["ci_high"] = ps.ci_high;
        row["t"] = ps.t_stat;
        row["p"] = ps.p_value;
        params.push_back(std::move(row));
    }
    j["parameters"] = std::move(params);
    return j;
}

nlohmann::ordered_json segments_to_json(const SegmentedModel& model, int offset) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : summarize(model)) {
        nlohmann::ordered_json row;
        row["index"] = s.index;
        row["start_year"] = s.start_year + offset;
        row["end_year"] = s.end_year + offset;
        row["slope"] = s.slope;
        row["growth_rate_pct"] = s.growth_rate_pct;
        if (s.doubling_time_years) {
            row["doubling_time_years"] = *s.doubling_time_years;
        } else {
            row["doubling_time_years"] = nullptr;
        }
        arr.push_back(std::move(row));
    }
    return arr;
}

// -------- text-table helper --------

struct TextTable {
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    std::string str(int indent = 2) const {
        std::vector<std::size_t> width;
        for (const auto& row : rows) {
            if (width.size() < row.size()) width.resize(row.size(), 0);
            for (std::size_t c = 0; c < row.size(); ++c) {
                width[c] = std::max(width[c], row[c].size());
            }
        }
        std::string out;
        for (const auto& row : rows) {
            out.append(static_cast<std::size_t>(indent), ' ');
            for (std::size_t c = 0; c < row.size(); ++c) {
                out += row[c];
                if (c + 1 < row.size()) {
                    out.append(width[c] - row[c].size() + 2, ' ');
                }
            }
            out += '\n';
        }
        return out;
    }
};

std::string format_p(double p) {
    return p < 0.001 ? "<.001" : strf("%.3f", p);
}

/// Parameter table in the classic layout: a-rows, then b0, then slope rows
/// with growth/doubling columns.
std::string parameter_table(const std::vector<ParameterStats>& params,
                            const std::vector<double>& slopes, int offset,
                            double ci_level) {
    auto row_of = [&](const ParameterStats& ps, bool is_breakpoint,
                      const double* slope) {
        std::vector<std::string> row;
        row.push_back(ps.name);
        if (is_breakpoint) {
            row.push_back(strf("%.1f", ps.estimate + offset));
            row.push_back(strf("%.2f", ps.se));
            row.push_back(strf("[%.1f, %.1f]", ps.ci_low + offset, ps.ci_high + offset));
        } else {
            row.push_back(strf("%.3f", ps.estimate));
            row.push_back(strf("%.3f", ps.se));
            row.push_back(strf("[%.3f, %.3f]", ps.ci_low, ps.ci_high));
        }
        if (slope != nullptr) {
            row.push_back(strf("%.2f", growth_rate_pct(*slope)));
            const auto doubling = doubling_time_years(*slope);
            row.push_back(doubling ? strf("%.1f", *doubling) : "-");
        } else {
            row.push_back("-");
            row.push_back("-");
        }
        row.push_back(strf("%.2f", ps.t_stat));
        row.push_back(format_p(ps.p_value));
        return row;
    };

    TextTable table;
    table.add({"Parameter", "Estimate", "SE", strf("%.0f%% CI", ci_level * 100),
               "Growth %/yr", "Doubling yr", "t", "p"});
    for (const auto& ps : params) {  // breakpoints first, matching the table layout
        if (ps.name[0] == 'a') table.add(row_of(ps, true, nullptr));
    }
    for (const auto& ps : params) {
        if (ps.name == "b0") table.add(row_of(ps, false, nullptr));
    }
    for (const auto& ps : params) {
        if (ps.name[0] == 'b' && ps.name != "b0") {
            const std::size_t k = static_cast<std::size_t>(std::stoi(ps.name.substr(1)));
            table.add(row_of(ps, false, &slopes[k - 1]));
        }
    }
    for (const auto& ps : params) {
        if (ps.name[0] == 'd') {
            table.add(row_of(ps, false, nullptr));
        }
    }
    return table.str();
}

} // namespace

// -------- model (de)serialization --------

nlohmann::ordered_json model_to_json(const SegmentedModel& model) {
    nlohmann::ordered_json j;
    if (model.intercept) {
        j["intercept"] = *model.intercept;
    } else {
        j["intercept"] = nullptr;
    }
    j["slopes"] = model.slopes;
    j["breakpoints"] = model.breakpoints;
    j["domain"] = {model.year_min, model.year_max};
    return j;
}

SegmentedModel model_from_json(const nlohmann::json& j) {
    SegmentedModel model;
    try {
        if (j.contains("intercept") && !j.at("intercept").is_null()) {
            model.intercept = j.at("intercept").get<double>();
        }
        model.slopes = j.at("slopes").get<std::vector<double>>();
        if (j.contains("breakpoints") && !j.at("breakpoints").is_null()) {
            model.breakpoints = j.at("breakpoints").get<std::vector<double>>();
        }
        const auto& domain = j.at("domain");
        model.year_min = domain.at(0).get<double>();
        model.year_max = domain.at(1).get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model JSON is malformed: ") + e.what());
    }
    validate(model);
    return model;
}

// -------- pipelines --------

FitReport run_fit_pipeline(const AnnualSeries& series, const PipelineOptions& options) {
    FitReport report;
    report.raw = sorted_validated(series);
    report.label = series.label;
    report.offset_year = options.offset_year;
    report.threads = options.threads;
    report.min_r2_gain = options.min_r2_gain;

    report.data = log_transform(shift_years(report.raw, options.offset_year),
                                options.zero_policy);

    FitConfig config = options.config;
    if (options.select) {
        config.intercept = options.intercept.value_or(false);
        SelectionResult sel = select_segments(report.data, options.max_segments,
                                              options.min_r2_gain, config,
                                              options.threads);
        config.n_segments = sel.chosen_segments;
        report.fit = sel.best_fit;
        report.selection = std::move(sel);
    } else {
        config.intercept = options.intercept.value_or(config.n_segments == 1);
        report.fit = multistart_fit(report.data, config, options.threads);
    }
    report.config = config;
    report.inference = analyze(report.fit, report.data, options.ci_level);
    return report;
}

CompareReport run_compare_pipeline(const AnnualSeries& series0,
                                   const AnnualSeries& series1,
                                   const PipelineOptions& options) {
    CompareReport report;
    report.offset_year = options.offset_year;
    report.threads = options.threads;

    FitConfig config = options.config;
    config.intercept = options.intercept.value_or(false);  // erased by default
    report.config = config;

    PipelineOptions separate = options;
    separate.select = false;
    separate.config = config;
    separate.intercept = config.intercept;
    report.fit0 = run_fit_pipeline(series0, separate);
    report.fit1 = run_fit_pipeline(series1, separate);

    const AnnualSeries shifted0 =
        shift_years(sorted_validated(series0), options.offset_year);
    const AnnualSeries shifted1 =
        shift_years(sorted_validated(series1), options.offset_year);
    report.comparison = fit_interaction(shifted0, shifted1, config, options.threads,
                                        options.ci_level, options.zero_policy);
    return report;
}

// -------- JSON reports --------

nlohmann::ordered_json to_json(const FitReport& report) {
    nlohmann::ordered_json j;
    j["report_type"] = "fit";

    nlohmann::ordered_json input;
    input["label"] = report.label;
    input["n_observations"] = report.raw.observations.size();
    input["year_start"] = report.raw.observations.front().year;
    input["year_end"] = report.raw.observations.back().year;
    input["fitted_points"] = report.data.points.size();
    input["dropped_zero_years"] = report.data.dropped_years;
    input["offset_year"] = report.offset_year;
    j["input"] = std::move(input);

    j["config"] = config_to_json(report.config, report.threads);
    j["model"] = model_to_json(report.fit.model);
    j["fit"] = fit_block_to_json(report.fit);
    j["inference"] = inference_to_json(report.inference);
    j["segments"] = segments_to_json(report.fit.model, report.offset_year);

    if (report.selection) {
        nlohmann::ordered_json sel;
        sel["chosen_segments"] = report.selection->chosen_segments;
        sel["min_r2_gain"] = report.min_r2_gain;
        nlohmann::ordered_json trace = nlohmann::ordered_json::array();
        for (const auto& c : report.selection->trace) {
            nlohmann::ordered_json row;
            row["segments"] = c.n_segments;
            row["ok"] = c.fit_ok;
            if (c.fit_ok) {
                row["r_squared"] = c.r_squared;
                row["sse"] = c.sse;
                row["failure"] = nullptr;
            } else {
                row["r_squared"] = nullptr;
                row["sse"] = nullptr;
                row["failure"] = c.failure;
            }
            trace.push_back(std::move(row));
        }
        sel["trace"] = std::move(trace);
        j["selection"] = std::move(sel);
    } else {
        j["selection"] = nullptr;
    }

    std::map<int, double> count_by_year;
    for (const auto& o : report.raw.observations) count_by_year[o.year] = o.count;

    nlohmann::ordered_json predictions = nlohmann::ordered_json::array();
    for (const auto& p : report.data.points) {
        const double predicted_log = predict_log(report.fit.model, p.year);
        nlohmann::ordered_json row;
        row["year"] = p.year + report.offset_year;
        row["count"] = count_by_year.at(p.year + report.offset_year);
        row["log_count"] = p.log_count;
        row["predicted_count"] = std::exp(predicted_log);
        row["predicted_log"] = predicted_log;
        row["segment"] = segment_index(report.fit.model, p.year) + 1;
        predictions.push_back(std::move(row));
    }
    j["predictions"] = std::move(predictions);
    return j;
}

nlohmann::ordered_json to_json(const CompareReport& report) {
    nlohmann::ordered_json j;
    j["report_type"] = "compare";

    nlohmann::ordered_json groups = nlohmann::ordered_json::array();
    for (const FitReport* fr : {&report.fit0, &report.fit1}) {
        nlohmann::ordered_json g;
        g["label"] = fr->label;
        g["n_observations"] = fr->raw.observations.size();
        g["year_start"] = fr->raw.observations.front().year;
        g["year_end"] = fr->raw.observations.back().year;
        g["dropped_zero_years"] = fr->data.dropped_years;
        groups.push_back(std::move(g));
    }
    j["groups"] = std::move(groups);
    j["config"] = config_to_json(report.config, report.threads);
    j["offset_year"] = report.offset_year;

    const ComparisonResult& cmp = report.comparison;
    nlohmann::ordered_json joint;
    joint["base_model"] = model_to_json(cmp.base_model);
    joint["deltas"] = cmp.deltas;
    joint["group1_model"] = model_to_json(cmp.group1_model());

    nlohmann::ordered_json fitj;
    fitj["sse"] = cmp.sse;
    fitj["converged"] = cmp.converged;
    fitj["termination"] = to_string(cmp.termination);
    fitj["iterations"] = cmp.iterations;
    fitj["starts_tried"] = cmp.starts_tried;
    fitj["ridge_fallback_used"] = cmp.ridge_fallback_used;
    fitj["degrees_of_freedom"] = cmp.dof();
    joint["fit"] = std::move(fitj);
    joint["inference"] = inference_to_json(cmp.inference);

    nlohmann::ordered_json inter = nlohmann::ordered_json::array();
    for (const auto& t : test_interactions(cmp)) {
        nlohmann::ordered_json row;
        row["name"] = t.name;
        row["delta"] = t.delta;
        row["se"] = t.se;
        row["t"] = t.t_stat;
        row["p"] = t.p_value;
        row["significant"] = t.significant;
        inter.push_back(std::move(row));
    }
    joint["interactions"] = std::move(inter);
    j["joint"] = std::move(joint);

    j["separate"] = nlohmann::ordered_json::array({to_json(report.fit0),
                                                   to_json(report.fit1)});
    return j;
}

// -------- text reports --------

std::string render_text(const FitReport& report) {
    std::string out;
    out += "Segmented growth fit: " + report.label + "\n";
    out += strf("  observations : %zu (%d-%d)", report.raw.observations.size(),
                report.raw.observations.front().year,
                report.raw.observations.back().year);
    if (!report.data.dropped_years.empty()) {
        out += strf(", %zu zero-count year(s) dropped", report.data.dropped_years.size());
    }
    out += "\n";
    if (report.offset_year != 0) {
        out += strf("  year offset  : %d (model years are calendar year - %d)\n",
                    report.offset_year, report.offset_year);
    }
    out += strf("  segments     : %d (%s)\n", report.config.n_segments,
                report.config.intercept ? "with intercept" : "intercept erased");
    out += strf("  convergence  : %s after %d iterations, %d start(s)\n",
                to_string(report.fit.termination), report.fit.iterations,
                report.fit.starts_tried);
    out += strf("  SSE          : %.6g   sigma^2: %.6g\n", report.fit.sse,
                report.inference.sigma2_hat);
    out += strf("  R-squared    : %.4f (centered)   %.4f (uncentered)\n\n",
                report.inference.r_squared, report.inference.r_squared_uncentered);

    out += parameter_table(report.inference.parameters, report.fit.model.slopes,
                           report.offset_year, report.inference.ci_level);

    out += "\n";
    TextTable spans;
    spans.add({"Segment", "Years", "Slope", "Growth %/yr", "Doubling yr"});
    for (const auto& s : summarize(report.fit.model)) {
        const auto doubling = s.doubling_time_years;
        spans.add({strf("%d", s.index),
                   strf("%.1f-%.1f", s.start_year + report.offset_year,
                        s.end_year + report.offset_year),
                   strf("%.3f", s.slope), strf("%.2f", s.growth_rate_pct),
                   doubling ? strf("%.1f", *doubling) : "-"});
    }
    out += spans.str();

    if (report.selection) {
        out += strf("\nSegment-count scan (gain threshold %g):\n", report.min_r2_gain);
        for (const auto& c : report.selection->trace) {
            if (c.fit_ok) {
                out += strf("  S=%d  r2=%.6f  sse=%.6g%s\n", c.n_segments, c.r_squared,
                            c.sse,
                            c.n_segments == report.selection->chosen_segments
                                ? "  <- chosen"
                                : "");
            } else {
                out += strf("  S=%d  not fitted: %s\n", c.n_segments, c.failure.c_str());
            }
        }
    }
    return out;
}

std::string render_text(const CompareReport& report) {
    const ComparisonResult& cmp = report.comparison;
    std::string out;
    out += "Two-series comparison: " + cmp.label0 + " (D=0) vs " + cmp.label1 +
           " (D=1)\n";
    out += strf("  segments     : %d shared, slope differences per segment (%s)\n",
                report.config.n_segments,
                report.config.intercept ? "with intercept" : "intercept erased");
    out += strf("  convergence  : %s after %d iterations, %d start(s)\n",
                to_string(cmp.termination), cmp.iterations, cmp.starts_tried);
    out += strf("  joint SSE    : %.6g   R-squared: %.4f (centered)\n\n", cmp.sse,
                cmp.inference.r_squared);

    out += parameter_table(cmp.inference.parameters, cmp.base_model.slopes,
                           report.offset_year, cmp.inference.ci_level);

    out += "\nSlope differences (group 1 minus group 0):\n";
    TextTable table;
    table.add({"Name", "Delta", "SE", "t", "p", "Significant"});
    for (const auto& t : test_interactions(cmp)) {
        table.add({t.name, strf("%.4f", t.delta), strf("%.4f", t.se),
                   strf("%.2f", t.t_stat), format_p(t.p_value),
                   t.significant ? "yes" : "no"});
    }
    out += table.str();

    out += "\n--- separate fit, group 0 ---\n";
    out += render_text(report.fit0);
    out += "\n--- separate fit, group 1 ---\n";
    out += render_text(report.fit1);
    return out;
}

// -------- plot outputs --------

std::string render_plot_tsv(const FitReport& report) {
    std::string out =
        "year\tobserved_count\tpredicted_count\tlog_observed\tlog_predicted\t"
        "segment_index\n";
    std::map<int, double> count_by_year;
    for (const auto& o : report.raw.observations) count_by_year[o.year] = o.count;
    for (const auto& p : report.data.points) {
        const double predicted_log = predict_log(report.fit.model, p.year);
        out += strf("%d\t%.17g\t%.17g\t%.17g\t%.17g\t%zu\n", p.year + report.offset_year,
                    count_by_year.at(p.year + report.offset_year),
                    std::exp(predicted_log), p.log_count, predicted_log,
                    segment_index(report.fit.model, p.year) + 1);
    }
    return out;
}

std::string render_svg(const FitReport& report) {
    const double width = 880, height = 560;
    const double left = 70, right = 30, top = 44, bottom = 52;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    const SegmentedModel& model = report.fit.model;
    const int offset = report.offset_year;

    double x_min = report.data.points.front().year + offset;
    double x_max = report.data.points.back().year + offset;
    double ly_min = std::numeric_limits<double>::infinity();
    double ly_max = -std::numeric_limits<double>::infinity();
    for (const auto& p : report.data.points) {
        const double pl = predict_log(model, p.year);
        ly_min = std::min({ly_min, p.log_count, pl});
        ly_max = std::max({ly_max, p.log_count, pl});
    }
    // display axis in log10 units
    double y_min = ly_min / std::numbers::ln10;
    double y_max = ly_max / std::numbers::ln10;
    const double pad = std::max(0.05 * (y_max - y_min), 1e-6);
    y_min -= pad;
    y_max += pad;
    if (!(x_max > x_min)) x_max = x_min + 1;

    auto px = [&](double year) { return left + (year - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double log10v) {
        return top + (y_max - log10v) / (y_max - y_min) * plot_h;
    };

    std::string svg = strf(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
        "viewBox=\"0 0 %.0f %.0f\">\n",
        width, height, width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += strf("<text x=\"%.0f\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
                "text-anchor=\"middle\">%s</text>\n",
                left + plot_w / 2, report.label.c_str());

    // frame
    svg += strf("<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                "fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n",
                left, top, plot_w, plot_h);

    // y ticks at integer powers of ten
    const int k_lo = static_cast<int>(std::ceil(y_min));
    const int k_hi = static_cast<int>(std::floor(y_max));
    int k_step = 1;
    if (k_hi - k_lo > 8) k_step = (k_hi - k_lo + 7) / 8;
    for (int k = k_lo; k <= k_hi; k += k_step) {
        const double y = py(k);
        svg += strf("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                    "stroke=\"#ddd\" stroke-width=\"1\"/>\n",
                    left, y, left + plot_w, y);
        svg += strf("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                    "font-size=\"11\" text-anchor=\"end\">1e%d</text>\n",
                    left - 6, y + 4, k);
    }

    // x ticks: ~6 round-year gridlines
    const double span = x_max - x_min;
    double x_step = std::pow(10.0, std::floor(std::log10(span / 6.0)));
    if (span / x_step > 12) x_step *= 5;
    else if (span / x_step > 6) x_step *= 2;
    for (double year = std::ceil(x_min / x_step) * x_step; year <= x_max;
         year += x_step) {
        const double x = px(year);
        svg += strf("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                    "stroke=\"#ddd\" stroke-width=\"1\"/>\n",
                    x, top, x, top + plot_h);
        svg += strf("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                    "font-size=\"11\" text-anchor=\"middle\">%.0f</text>\n",
                    x, top + plot_h + 16, year);
    }

    // breakpoint verticals
    for (double a : model.breakpoints) {
        const double x = px(a + offset);
        svg += strf("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                    "stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n",
                    x, top, x, top + plot_h);
        svg += strf("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                    "font-size=\"11\" text-anchor=\"middle\" fill=\"#555\">%.1f</text>\n",
                    x, top - 6, a + offset);
    }

    // fitted curve: vertices at every fitted year plus the exact breakpoints
    std::vector<double> curve_years;
    for (const auto& p : report.data.points) curve_years.push_back(p.year);
    for (double a : model.breakpoints) curve_years.push_back(a);
    std::sort(curve_years.begin(), curve_years.end());
    std::string path;
    for (std::size_t i = 0; i < curve_years.size(); ++i) {
        const double log10v = predict_log(model, curve_years[i]) / std::numbers::ln10;
        path += strf("%s%.2f,%.2f", i == 0 ? "M" : " L", px(curve_years[i] + offset),
                     py(log10v));
    }
    svg += "<path d=\"" + path +
           "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.8\"/>\n";

    // observed points
    for (const auto& p : report.data.points) {
        svg += strf("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.4\" fill=\"#2c6fad\" "
                    "fill-opacity=\"0.8\"/>\n",
                    px(p.year + offset), py(p.log_count / std::numbers::ln10));
    }

    // axis captions
    svg += strf("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                "font-size=\"12\" text-anchor=\"middle\">year</text>\n",
                left + plot_w / 2, height - 14);
    svg += strf("<text x=\"18\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"middle\" transform=\"rotate(-90 18 %.1f)\">annual count "
                "(log scale)</text>\n",
                top + plot_h / 2, top + plot_h / 2);
    svg += "</svg>\n";
    return svg;
}

} // namespace segrowth
