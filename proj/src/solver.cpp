#include "segrowth/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "gn_driver.hpp"

namespace segrowth {

namespace {

std::vector<double> data_years(const LogSeries& data) {
    std::vector<double> t;
    t.reserve(data.points.size());
    for (const auto& p : data.points) t.push_back(static_cast<double>(p.year));
    return t;
}

Eigen::VectorXd data_logs(const LogSeries& data) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.points.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] = data.points[static_cast<std::size_t>(i)].log_count;
    return y;
}

void check_data(const LogSeries& data) {
    if (data.points.size() < 2) throw DataError("log series has fewer than 2 points");
    for (std::size_t i = 1; i < data.points.size(); ++i) {
        if (data.points[i].year <= data.points[i - 1].year) {
            throw DataError("log series years must be strictly increasing");
        }
    }
}

void check_config(const LogSeries& data, const FitConfig& config) {
    if (config.n_segments < 1) throw DataError("n_segments must be >= 1");
    if (config.grid_points_per_breakpoint < 2)
        throw DataError("grid_points_per_breakpoint must be >= 2");
    if (config.min_points_per_segment < 2)
        throw DataError("min_points_per_segment must be >= 2");
    if (config.max_iterations < 1) throw DataError("max_iterations must be >= 1");
    if (config.step_halving_max < 1) throw DataError("step_halving_max must be >= 1");
    const std::size_t needed =
        static_cast<std::size_t>(config.n_segments) *
        static_cast<std::size_t>(config.min_points_per_segment);
    if (data.points.size() < needed) {
        throw DataError("need at least " + std::to_string(needed) + " points for " +
                        std::to_string(config.n_segments) + " segments; have " +
                        std::to_string(data.points.size()));
    }
    if (config.breakpoint_bounds) {
        auto [lo, hi] = *config.breakpoint_bounds;
        double first = data.points.front().year;
        double last = data.points.back().year;
        if (!(lo < hi) || lo < first || hi > last) {
            std::ostringstream msg;
            msg << "breakpoint bounds (" << lo << ", " << hi
                << ") must lie inside the data year range [" << first << ", " << last << "]";
            throw DataError(msg.str());
        }
    }
}

/// Observations per segment: segment j spans (a_{j-1}, a_j] with a_0 = -inf,
/// a_S = +inf.
std::vector<std::size_t> segment_counts(const std::vector<double>& years,
                                        const std::vector<double>& breakpoints) {
    std::vector<std::size_t> counts;
    counts.reserve(breakpoints.size() + 1);
    std::size_t prev = 0;
    for (double a : breakpoints) {
        auto it = std::upper_bound(years.begin(), years.end(), a);
        std::size_t upto = static_cast<std::size_t>(it - years.begin());
        counts.push_back(upto - prev);
        prev = upto;
    }
    counts.push_back(years.size() - prev);
    return counts;
}

struct BestComparator {
    // Smaller SSE wins; exact ties fall back to lexicographic parameter order
    // so the multistart reduction is associative and thread-count invariant.
    bool operator()(double sse_a, const Eigen::VectorXd& theta_a, double sse_b,
                    const Eigen::VectorXd& theta_b) const {
        if (sse_a != sse_b) return sse_a < sse_b;
        for (Eigen::Index i = 0; i < std::min(theta_a.size(), theta_b.size()); ++i) {
            if (theta_a[i] != theta_b[i]) return theta_a[i] < theta_b[i];
        }
        return false;
    }
};

} // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ToleranceMet: return "tolerance_met";
        case Termination::Stalled: return "stalled";
        case Termination::IterationCap: return "iteration_cap";
    }
    return "unknown";
}

Eigen::VectorXd pack_parameters(const SegmentedModel& model) {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(model.parameter_count()));
    Eigen::Index i = 0;
    if (model.intercept) theta[i++] = *model.intercept;
    for (double b : model.slopes) theta[i++] = b;
    for (double a : model.breakpoints) theta[i++] = a;
    return theta;
}

SegmentedModel unpack_parameters(const Eigen::VectorXd& theta, int n_segments,
                                 bool intercept, double year_min, double year_max) {
    const Eigen::Index expected = (intercept ? 1 : 0) + 2 * n_segments - 1;
    if (theta.size() != expected) {
        throw FitError("parameter vector has " + std::to_string(theta.size()) +
                       " entries; expected " + std::to_string(expected));
    }
    SegmentedModel model;
    Eigen::Index i = 0;
    if (intercept) model.intercept = theta[i++];
    model.slopes.assign(theta.data() + i, theta.data() + i + n_segments);
    i += n_segments;
    model.breakpoints.assign(theta.data() + i, theta.data() + theta.size());
    model.year_min = year_min;
    model.year_max = year_max;
    return model;
}

std::vector<std::string> parameter_names(int n_segments, bool intercept) {
    std::vector<std::string> names;
    if (intercept) names.push_back("b0");
    for (int k = 1; k <= n_segments; ++k) names.push_back("b" + std::to_string(k));
    for (int k = 1; k < n_segments; ++k) names.push_back("a" + std::to_string(k));
    return names;
}

std::pair<double, double> effective_breakpoint_bounds(const LogSeries& data,
                                                      const FitConfig& config) {
    const double first = data.points.front().year;
    const double last = data.points.back().year;
    if (config.breakpoint_bounds) {
        const auto [lo, hi] = *config.breakpoint_bounds;
        if (!(lo < hi) || lo < first || hi > last) {
            std::ostringstream msg;
            msg << "breakpoint bounds (" << lo << ", " << hi
                << ") must lie inside the data year range [" << first << ", " << last
                << "]";
            throw DataError(msg.str());
        }
        return *config.breakpoint_bounds;
    }
    const double span = config.min_points_per_segment;
    return {first + span, last - span};
}

bool feasible_breakpoints(const LogSeries& data, const std::vector<double>& breakpoints,
                          const std::pair<double, double>& bounds,
                          int min_points_per_segment) {
    double prev = bounds.first;
    for (double a : breakpoints) {
        if (!(prev < a)) return false;
        prev = a;
    }
    if (!breakpoints.empty() && !(prev < bounds.second)) return false;

    const auto years = data_years(data);
    for (std::size_t c : segment_counts(years, breakpoints)) {
        if (c < static_cast<std::size_t>(min_points_per_segment)) return false;
    }
    return true;
}

OlsSolution ols_given_breakpoints(const LogSeries& data,
                                  const std::vector<double>& breakpoints, bool intercept,
                                  int min_points_per_segment) {
    check_data(data);
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i - 1] < breakpoints[i])) {
            throw DataError("breakpoints must be strictly increasing");
        }
    }
    const auto years = data_years(data);
    const auto counts = segment_counts(years, breakpoints);
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] < static_cast<std::size_t>(min_points_per_segment)) {
            throw DataError("segment " + std::to_string(j + 1) + " holds " +
                            std::to_string(counts[j]) + " observations; need at least " +
                            std::to_string(min_points_per_segment));
        }
    }

    const int s = static_cast<int>(breakpoints.size()) + 1;
    const Eigen::Index n = static_cast<Eigen::Index>(years.size());
    const Eigen::Index p = (intercept ? 1 : 0) + s;

    // The chained prediction is linear in (b0, b1..bS); its design equals the
    // Jacobian slope block, which does not depend on the slope values.
    SegmentedModel probe;
    probe.intercept = intercept ? std::optional<double>(0.0) : std::nullopt;
    probe.slopes.assign(static_cast<std::size_t>(s), 0.0);
    probe.breakpoints = breakpoints;
    probe.year_min = years.front();
    probe.year_max = years.back();

    Eigen::MatrixXd full(n, probe.parameter_count());
    fill_jacobian(probe, years, full);
    Eigen::MatrixXd design = full.leftCols(p);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p) {
        throw DataError("rank-deficient design for the given breakpoints");
    }
    const Eigen::VectorXd y = data_logs(data);
    const Eigen::VectorXd beta = qr.solve(y);

    OlsSolution sol;
    Eigen::Index i = 0;
    if (intercept) sol.intercept = beta[i++];
    sol.slopes.assign(beta.data() + i, beta.data() + beta.size());
    sol.sse = (y - design * beta).squaredNorm();
    return sol;
}

namespace {

struct Objective {
    const std::vector<double> years;
    const Eigen::VectorXd y;
    int n_segments;
    bool intercept;
    std::pair<double, double> bounds;
    int min_points;
    double year_min;
    double year_max;

    Objective(const LogSeries& data, const FitConfig& config)
        : years(data_years(data)),
          y(data_logs(data)),
          n_segments(config.n_segments),
          intercept(config.intercept),
          bounds(effective_breakpoint_bounds(data, config)),
          min_points(config.min_points_per_segment),
          year_min(years.front()),
          year_max(years.back()) {}

    SegmentedModel model_of(const Eigen::VectorXd& theta) const {
        return unpack_parameters(theta, n_segments, intercept, year_min, year_max);
    }

    bool feasible(const Eigen::VectorXd& theta) const {
        const SegmentedModel m = model_of(theta);
        for (double b : m.slopes) {
            if (!std::isfinite(b)) return false;
        }
        if (m.intercept && !std::isfinite(*m.intercept)) return false;
        for (double a : m.breakpoints) {
            if (!std::isfinite(a)) return false;
        }
        double prev = bounds.first;
        for (double a : m.breakpoints) {
            if (!(prev < a)) return false;
            prev = a;
        }
        if (!m.breakpoints.empty() && !(prev < bounds.second)) return false;
        for (std::size_t c : segment_counts(years, m.breakpoints)) {
            if (c < static_cast<std::size_t>(min_points)) return false;
        }
        return true;
    }

    Eigen::VectorXd residuals(const Eigen::VectorXd& theta) const {
        const SegmentedModel m = model_of(theta);
        Eigen::VectorXd pred(y.size());
        predict_log_batch(m, years, {pred.data(), static_cast<std::size_t>(pred.size())});
        return y - pred;
    }

    double sse(const Eigen::VectorXd& theta) const { return residuals(theta).squaredNorm(); }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta) const {
        const SegmentedModel m = model_of(theta);
        Eigen::MatrixXd jac(y.size(), theta.size());
        fill_jacobian(m, years, jac);
        return jac;
    }
};

} // namespace

FitResult gauss_newton(const LogSeries& data, const Eigen::VectorXd& init,
                       const FitConfig& config) {
    check_data(data);
    check_config(data, config);
    const Objective obj(data, config);

    if (init.size() != (config.intercept ? 1 : 0) + 2 * config.n_segments - 1) {
        throw FitError("initial parameter vector has the wrong size");
    }

    detail::GnOutcome out = detail::gn_minimize(obj, init, config);

    FitResult result;
    result.n_obs = static_cast<int>(data.points.size());
    result.n_params = static_cast<int>(out.theta.size());
    result.starts_tried = 1;
    result.best_start = init;
    result.sse_history = std::move(out.sse_history);
    result.termination = out.termination;
    result.iterations = out.iterations;
    result.ridge_fallback_used = out.ridge_fallback_used;
    result.converged = out.termination == Termination::ToleranceMet;
    result.model = obj.model_of(out.theta);
    const Eigen::VectorXd r = obj.residuals(out.theta);
    result.residuals.assign(r.data(), r.data() + r.size());
    result.sse = r.squaredNorm();
    return result;
}

std::vector<std::vector<double>> grid_breakpoint_starts(const LogSeries& data,
                                                        const FitConfig& config) {
    check_data(data);
    check_config(data, config);
    const int k = config.n_segments - 1;
    if (k == 0) return {{}};

    const auto bounds = effective_breakpoint_bounds(data, config);
    if (!(bounds.first < bounds.second)) {
        throw FitError("breakpoint bounds are empty; no feasible grid start");
    }
    const int g = config.grid_points_per_breakpoint;
    std::vector<double> values(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
        values[static_cast<std::size_t>(i)] =
            bounds.first + (i + 1) * (bounds.second - bounds.first) / (g + 1);
    }

    std::vector<std::vector<double>> starts;
    if (k > g) throw FitError("grid too coarse for the requested breakpoint count");

    // lexicographic enumeration of index combinations i1 < i2 < ... < ik
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::vector<double> tuple(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) tuple[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        if (feasible_breakpoints(data, tuple, bounds, config.min_points_per_segment)) {
            starts.push_back(std::move(tuple));
        }
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == g - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }

    if (starts.empty()) {
        throw FitError("no feasible grid start inside the breakpoint bounds; "
                       "widen the bounds or reduce segments");
    }
    return starts;
}

FitResult multistart_fit(const LogSeries& data, const FitConfig& config, int threads) {
    const auto starts = grid_breakpoint_starts(data, config);

    struct Outcome {
        bool ok = false;
        FitResult fit;
        Eigen::VectorXd theta;
        Eigen::VectorXd start;
    };
    std::vector<Outcome> outcomes(starts.size());

    detail::run_parallel(starts.size(), threads, [&](std::size_t i) {
        try {
            const auto& bps = starts[i];
            OlsSolution ols = ols_given_breakpoints(data, bps, config.intercept,
                                                    config.min_points_per_segment);
            SegmentedModel m0;
            m0.intercept = ols.intercept;
            m0.slopes = ols.slopes;
            m0.breakpoints = bps;
            m0.year_min = data.points.front().year;
            m0.year_max = data.points.back().year;

            Eigen::VectorXd theta0 = pack_parameters(m0);
            FitResult fit = gauss_newton(data, theta0, config);
            outcomes[i].fit = std::move(fit);
            outcomes[i].theta = pack_parameters(outcomes[i].fit.model);
            outcomes[i].start = std::move(theta0);
            outcomes[i].ok = true;
        } catch (const FitError&) {
            // a start may fail without dooming the multistart
        } catch (const DataError&) {
        }
    });

    BestComparator better;
    int tried = 0;
    const Outcome* best = nullptr;
    for (const auto& o : outcomes) {
        if (!o.ok) continue;
        ++tried;
        if (best == nullptr ||
            better(o.fit.sse, o.theta, best->fit.sse, best->theta)) {
            best = &o;
        }
    }
    if (best == nullptr) {
        throw FitError("every grid start failed; no fit available");
    }
    FitResult result = best->fit;
    result.starts_tried = tried;
    result.best_start = best->start;
    return result;
}

} // namespace segrowth
