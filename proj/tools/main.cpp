#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "segrowth/oracle.hpp"
#include "segrowth/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitNoFit = 2;
constexpr int kExitUsage = 64;

std::pair<double, double> parse_range(const std::string& text, const char* what) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError(std::string(what) + " must look like LO:HI");
    }
    try {
        const double lo = std::stod(text.substr(0, colon));
        const double hi = std::stod(text.substr(colon + 1));
        return {lo, hi};
    } catch (const std::exception&) {
        throw CLI::ValidationError(std::string(what) + " must look like LO:HI");
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw segrowth::DataError("cannot open for writing: " + path);
    out << content;
    if (!out) throw segrowth::DataError("write failed: " + path);
}

void warn_dropped(const segrowth::LogSeries& data, const std::string& label) {
    if (data.dropped_years.empty()) return;
    std::cerr << "warning: " << label << ": dropped " << data.dropped_years.size()
              << " zero-count year(s):";
    for (int y : data.dropped_years) std::cerr << ' ' << y;
    std::cerr << '\n';
}

struct CommonFlags {
    int segments = 1;
    bool select = false;
    int max_segments = 6;
    bool intercept_on = false;
    bool intercept_off = false;
    std::string bounds;
    int min_points = 3;
    int grid = 8;
    double delta_r2 = 0.005;
    int offset_year = 0;
    int threads = 1;
    bool strict_zeros = false;
    std::string out_prefix;
    std::string format = "text";
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool allow_select) {
    auto* segments =
        cmd->add_option("--segments", flags.segments, "Number of growth segments")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    if (allow_select) {
        auto* select = cmd->add_flag("--select", flags.select,
                                     "Choose the segment count by the r-squared "
                                     "plateau rule");
        select->excludes(segments);
        cmd->add_option("--max-segments", flags.max_segments,
                        "Largest segment count the selection scan tries")
            ->needs(select)
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--delta-r2", flags.delta_r2,
                        "Minimum centered r-squared gain that justifies one more "
                        "segment")
            ->needs(select)
            ->capture_default_str();
    }
    auto* on = cmd->add_flag("--intercept", flags.intercept_on,
                             "Estimate the constant b0 (default for 1 segment)");
    cmd->add_flag("--no-intercept", flags.intercept_off,
                  "Fix b0 = 0 (default for 2+ segments)")
        ->excludes(on);
    cmd->add_option("--bounds", flags.bounds,
                    "Breakpoint bounds as LO:HI in input years");
    cmd->add_option("--min-points", flags.min_points,
                    "Minimum observations per segment")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    cmd->add_option("--grid", flags.grid, "Starting values per breakpoint")
        ->check(CLI::Range(2, 10000))
        ->capture_default_str();
    cmd->add_option("--offset-year", flags.offset_year,
                    "Subtract this year before fitting (e.g. 1980)")
        ->capture_default_str();
    cmd->add_option("--threads", flags.threads, "Worker threads for the multistart")
        ->envname("SEGROWTH_THREADS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--strict-zeros", flags.strict_zeros,
                  "Treat zero-count years as an error instead of dropping them");
    cmd->add_option("--out", flags.out_prefix,
                    "Write PREFIX.json/.txt/.tsv (and .svg with --format svg) "
                    "instead of printing to stdout");
}

segrowth::PipelineOptions make_options(const CommonFlags& flags) {
    segrowth::PipelineOptions options;
    options.config.n_segments = flags.segments;
    if (!flags.bounds.empty()) {
        options.config.breakpoint_bounds = parse_range(flags.bounds, "--bounds");
        // bounds are given in input years; fitting happens on shifted years
        options.config.breakpoint_bounds->first -= flags.offset_year;
        options.config.breakpoint_bounds->second -= flags.offset_year;
    }
    options.config.min_points_per_segment = flags.min_points;
    options.config.grid_points_per_breakpoint = flags.grid;
    if (flags.intercept_on) options.intercept = true;
    if (flags.intercept_off) options.intercept = false;
    options.offset_year = flags.offset_year;
    options.select = flags.select;
    options.max_segments = flags.max_segments;
    options.min_r2_gain = flags.delta_r2;
    options.threads = flags.threads;
    options.zero_policy = flags.strict_zeros ? segrowth::ZeroPolicy::Error
                                             : segrowth::ZeroPolicy::DropWithWarning;
    return options;
}

int emit_fit_report(const segrowth::FitReport& report, const CommonFlags& flags) {
    warn_dropped(report.data, report.label);
    if (flags.out_prefix.empty()) {
        if (flags.format == "json") {
            std::cout << segrowth::to_json(report).dump(2) << '\n';
        } else if (flags.format == "tsv") {
            std::cout << segrowth::render_plot_tsv(report);
        } else if (flags.format == "svg") {
            std::cout << segrowth::render_svg(report);
        } else {
            std::cout << segrowth::render_text(report);
        }
    } else {
        write_file(flags.out_prefix + ".json",
                   segrowth::to_json(report).dump(2) + "\n");
        write_file(flags.out_prefix + ".txt", segrowth::render_text(report));
        write_file(flags.out_prefix + ".tsv", segrowth::render_plot_tsv(report));
        if (flags.format == "svg") {
            write_file(flags.out_prefix + ".svg", segrowth::render_svg(report));
        }
        std::cout << "wrote " << flags.out_prefix << ".{json,txt,tsv"
                  << (flags.format == "svg" ? ",svg" : "") << "}\n";
    }
    if (!report.fit.converged) {
        std::cerr << "fit did not converge: " << to_string(report.fit.termination)
                  << " after " << report.fit.iterations << " iterations\n";
        return kExitNoFit;
    }
    return kExitOk;
}

int run_fit(const std::string& csv_path, const CommonFlags& flags) {
    // Flag validation (e.g. a malformed --bounds) must fail as a usage error
    // before any file is touched.
    const segrowth::PipelineOptions options = make_options(flags);
    const segrowth::AnnualSeries series = segrowth::load_csv_file(csv_path);
    const segrowth::FitReport report = segrowth::run_fit_pipeline(series, options);
    return emit_fit_report(report, flags);
}

int run_compare(const std::string& csv0, const std::string& csv1,
                const CommonFlags& flags) {
    const segrowth::PipelineOptions options = make_options(flags);
    const segrowth::AnnualSeries series0 = segrowth::load_csv_file(csv0);
    const segrowth::AnnualSeries series1 = segrowth::load_csv_file(csv1);
    const segrowth::CompareReport report =
        segrowth::run_compare_pipeline(series0, series1, options);
    warn_dropped(report.fit0.data, report.fit0.label);
    warn_dropped(report.fit1.data, report.fit1.label);

    if (flags.out_prefix.empty()) {
        if (flags.format == "json") {
            std::cout << segrowth::to_json(report).dump(2) << '\n';
        } else {
            std::cout << segrowth::render_text(report);
        }
    } else {
        write_file(flags.out_prefix + ".json",
                   segrowth::to_json(report).dump(2) + "\n");
        write_file(flags.out_prefix + ".txt", segrowth::render_text(report));
        std::cout << "wrote " << flags.out_prefix << ".{json,txt}\n";
    }
    const bool ok = report.comparison.converged && report.fit0.fit.converged &&
                    report.fit1.fit.converged;
    if (!ok) {
        std::cerr << "comparison fit did not converge\n";
        return kExitNoFit;
    }
    return kExitOk;
}

struct SimulateFlags {
    std::string model_path;
    std::vector<double> slopes;
    std::vector<double> breakpoints;
    std::optional<double> b0;
    std::string domain;
    std::string years;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string label = "synthetic";
    std::string out_path;
};

int run_simulate(const SimulateFlags& flags) {
    segrowth::GeneratorSpec spec;
    const auto years = parse_range(flags.years, "--years");
    spec.year_start = static_cast<int>(years.first);
    spec.year_end = static_cast<int>(years.second);

    if (!flags.model_path.empty()) {
        std::ifstream in(flags.model_path);
        if (!in) throw segrowth::DataError("cannot open model file: " + flags.model_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw segrowth::DataError(std::string("model JSON is malformed: ") + e.what());
        }
        spec.model = segrowth::model_from_json(j);
    } else {
        if (flags.slopes.empty()) {
            throw CLI::ValidationError("either --model or --slopes is required");
        }
        spec.model.slopes = flags.slopes;
        spec.model.breakpoints = flags.breakpoints;
        spec.model.intercept = flags.b0;
        if (!flags.domain.empty()) {
            const auto domain = parse_range(flags.domain, "--domain");
            spec.model.year_min = domain.first;
            spec.model.year_max = domain.second;
        } else {
            spec.model.year_min = spec.year_start;
            spec.model.year_max = spec.year_end;
        }
        segrowth::validate(spec.model);
    }
    spec.noise_sigma = flags.sigma;
    spec.seed = flags.seed;
    spec.label = flags.label;

    const segrowth::AnnualSeries series = segrowth::generate(spec);
    if (flags.out_path.empty()) {
        segrowth::write_csv(std::cout, series);
    } else {
        std::ostringstream buffer;
        segrowth::write_csv(buffer, series);
        write_file(flags.out_path, buffer.str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segmented exponential growth fitting for annual count series"};
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit one CSV series");
    std::string fit_csv;
    CommonFlags fit_flags;
    fit->add_option("csv", fit_csv, "Input CSV (year,count)")->required();
    add_common_flags(fit, fit_flags, /*allow_select=*/true);
    fit->add_option("--format", fit_flags.format, "Output when printing to stdout")
        ->check(CLI::IsMember({"json", "text", "tsv", "svg"}))
        ->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare", "Joint two-series slope comparison");
    std::string cmp_csv0, cmp_csv1;
    CommonFlags cmp_flags;
    compare->add_option("csv0", cmp_csv0, "Group D=0 CSV")->required();
    compare->add_option("csv1", cmp_csv1, "Group D=1 CSV")->required();
    add_common_flags(compare, cmp_flags, /*allow_select=*/false);
    compare->add_option("--format", cmp_flags.format, "Output when printing to stdout")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate",
                                        "Generate a synthetic series from a model");
    SimulateFlags sim_flags;
    auto* model_opt = simulate->add_option("--model", sim_flags.model_path,
                                           "Model JSON file "
                                           "({intercept, slopes, breakpoints, domain})");
    simulate->add_option("--years", sim_flags.years, "Year range LO:HI (inclusive)")
        ->required();
    simulate->add_option("--slopes", sim_flags.slopes, "Per-segment slopes")
        ->delimiter(',')
        ->excludes(model_opt);
    simulate->add_option("--breakpoints", sim_flags.breakpoints, "Breakpoint years")
        ->delimiter(',');
    double b0_value = 0.0;
    auto* b0_opt = simulate->add_option("--b0", b0_value, "Intercept (log scale)");
    simulate->add_option("--domain", sim_flags.domain, "Model domain LO:HI");
    simulate->add_option("--sigma", sim_flags.sigma, "Noise std-dev on the log scale")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate->add_option("--seed", sim_flags.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--label", sim_flags.label, "Series label")
        ->capture_default_str();
    simulate->add_option("--out", sim_flags.out_path, "Output CSV path");

    try {
        app.parse(argc, argv);
        if (*b0_opt) sim_flags.b0 = b0_value;
        if (*fit) return run_fit(fit_csv, fit_flags);
        if (*compare) return run_compare(cmp_csv0, cmp_csv1, cmp_flags);
        if (*simulate) return run_simulate(sim_flags);
        return kExitUsage;
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const segrowth::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const segrowth::FitError& e) {
        std::cerr << "fit failed: " << e.what() << '\n';
        return kExitNoFit;
    }
}
