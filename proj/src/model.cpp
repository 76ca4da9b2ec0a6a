#include "segrowth/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace segrowth {

void validate(const SegmentedModel& model) {
    if (model.slopes.empty()) throw DataError("model has no segments");
    if (model.slopes.size() != model.breakpoints.size() + 1) {
        throw DataError("model needs exactly one more slope than breakpoints");
    }
    if (!(model.year_min < model.year_max)) {
        throw DataError("model domain is empty");
    }
    double prev = model.year_min;
    for (double a : model.breakpoints) {
        if (!(prev < a)) {
            std::ostringstream msg;
            msg << "breakpoints must satisfy year_min < a1 < ... < year_max; got " << a
                << " after " << prev;
            throw DataError(msg.str());
        }
        prev = a;
    }
    if (!(prev < model.year_max)) {
        throw DataError("last breakpoint must lie strictly before year_max");
    }
}

std::size_t segment_index(const SegmentedModel& model, double year) {
    std::size_t j = 0;
    while (j < model.breakpoints.size() && year > model.breakpoints[j]) ++j;
    return j;
}

std::vector<double> segment_offsets(const SegmentedModel& model) {
    const std::size_t s = model.slopes.size();
    std::vector<double> offsets(s + 1);
    offsets[0] = model.intercept.value_or(0.0);
    double prev_break = 0.0;  // a_0 = 0, as the first branch anchors at year 0
    for (std::size_t j = 0; j < s; ++j) {
        double right = (j < model.breakpoints.size()) ? model.breakpoints[j] : model.year_max;
        offsets[j + 1] = offsets[j] + model.slopes[j] * (right - prev_break);
        prev_break = right;
    }
    return offsets;
}

namespace {

void check_domain(const SegmentedModel& model, double year, bool extrapolate) {
    if (extrapolate) return;
    if (year < model.year_min || year > model.year_max) {
        std::ostringstream msg;
        msg << "year " << year << " outside model domain [" << model.year_min << ", "
            << model.year_max << "]; pass extrapolate to override";
        throw DataError(msg.str());
    }
}

} // namespace

double predict_log(const SegmentedModel& model, double year, bool extrapolate) {
    check_domain(model, year, extrapolate);
    const std::size_t j = segment_index(model, year);
    const double left = (j == 0) ? 0.0 : model.breakpoints[j - 1];
    const std::vector<double> offsets = segment_offsets(model);
    return offsets[j] + model.slopes[j] * (year - left);
}

double predict_count(const SegmentedModel& model, double year, bool extrapolate) {
    return std::exp(predict_log(model, year, extrapolate));
}

void predict_log_batch(const SegmentedModel& model, std::span<const double> years,
                       std::span<double> out, bool extrapolate) {
    const std::vector<double> offsets = segment_offsets(model);
    for (std::size_t i = 0; i < years.size(); ++i) {
        check_domain(model, years[i], extrapolate);
        const std::size_t j = segment_index(model, years[i]);
        const double left = (j == 0) ? 0.0 : model.breakpoints[j - 1];
        out[i] = offsets[j] + model.slopes[j] * (years[i] - left);
    }
}

namespace {

void jacobian_row_into(const SegmentedModel& model, double year,
                       Eigen::Ref<Eigen::MatrixXd> out, Eigen::Index row) {
    const std::size_t s = model.slopes.size();
    const std::size_t n_bp = model.breakpoints.size();
    const std::size_t j = segment_index(model, year);

    Eigen::Index col = 0;
    if (model.intercept) out(row, col++) = 1.0;

    // slopes: chained spans for segments left of j, partial span inside j
    double prev_break = 0.0;
    for (std::size_t k = 0; k < s; ++k, ++col) {
        if (k < j) {
            out(row, col) = model.breakpoints[k] - prev_break;
            prev_break = model.breakpoints[k];
        } else if (k == j) {
            out(row, col) = year - prev_break;
        } else {
            out(row, col) = 0.0;
        }
    }
    // breakpoints: a_k enters with +b_k and leaves with -b_{k+1} while k < j
    for (std::size_t k = 0; k < n_bp; ++k, ++col) {
        out(row, col) = (k < j) ? model.slopes[k] - model.slopes[k + 1] : 0.0;
    }
}

} // namespace

Eigen::RowVectorXd jacobian_row(const SegmentedModel& model, double year, bool extrapolate) {
    check_domain(model, year, extrapolate);
    Eigen::MatrixXd out(1, model.parameter_count());
    jacobian_row_into(model, year, out, 0);
    return out.row(0);
}

void fill_jacobian(const SegmentedModel& model, std::span<const double> years,
                   Eigen::Ref<Eigen::MatrixXd> out, bool extrapolate) {
    for (std::size_t i = 0; i < years.size(); ++i) {
        check_domain(model, years[i], extrapolate);
        jacobian_row_into(model, years[i], out, static_cast<Eigen::Index>(i));
    }
}

double growth_rate_pct(double slope) {
    return 100.0 * std::expm1(slope);
}

std::optional<double> doubling_time_years(double slope) {
    if (slope > 0.0) return std::numbers::ln2_v<double> / slope;
    return std::nullopt;
}

std::vector<SegmentSummary> summarize(const SegmentedModel& model) {
    validate(model);
    std::vector<SegmentSummary> out;
    out.reserve(model.slopes.size());
    double start = model.year_min;
    for (std::size_t j = 0; j < model.slopes.size(); ++j) {
        double end = (j < model.breakpoints.size()) ? model.breakpoints[j] : model.year_max;
        SegmentSummary s;
        s.index = static_cast<int>(j) + 1;
        s.start_year = start;
        s.end_year = end;
        s.slope = model.slopes[j];
        s.growth_rate_pct = growth_rate_pct(model.slopes[j]);
        s.doubling_time_years = doubling_time_years(model.slopes[j]);
        out.push_back(s);
        start = end;
    }
    return out;
}

} // namespace segrowth
