#include "segrowth/compare.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "gn_driver.hpp"

namespace segrowth {

namespace {

std::vector<double> years_of(const LogSeries& data) {
    std::vector<double> years;
    years.reserve(data.points.size());
    for (const auto& p : data.points) years.push_back(static_cast<double>(p.year));
    return years;
}

void check_group(const LogSeries& data, int which) {
    if (data.points.size() < 2) {
        throw DataError("group " + std::to_string(which) + " has fewer than 2 points");
    }
    for (std::size_t i = 1; i < data.points.size(); ++i) {
        if (data.points[i].year <= data.points[i - 1].year) {
            throw DataError("group " + std::to_string(which) +
                            " years must be strictly increasing");
        }
    }
}

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

void require_group_min_points(const std::vector<double>& years,
                              const std::vector<double>& breakpoints, int min_points,
                              int which) {
    const auto counts = segment_counts(years, breakpoints);
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] < static_cast<std::size_t>(min_points)) {
            throw DataError("group " + std::to_string(which) + " segment " +
                            std::to_string(j + 1) + " holds " +
                            std::to_string(counts[j]) + " observations; need at least " +
                            std::to_string(min_points));
        }
    }
}

std::vector<std::string> stacked_parameter_names(int n_segments, bool intercept) {
    std::vector<std::string> names;
    if (intercept) names.push_back("b0");
    for (int k = 1; k <= n_segments; ++k) names.push_back("b" + std::to_string(k));
    for (int k = 1; k <= n_segments; ++k) names.push_back("d" + std::to_string(k));
    for (int k = 1; k < n_segments; ++k) names.push_back("a" + std::to_string(k));
    return names;
}

/// Least-squares problem for the stacked dummy-coded model.
struct StackedProblem {
    std::vector<double> years0, years1;
    Eigen::VectorXd y;  // group 0 rows then group 1 rows
    int n_segments;
    bool intercept;
    std::pair<double, double> bounds;
    int min_points;
    double year_min, year_max;  // union of the two groups

    Eigen::Index n0() const { return static_cast<Eigen::Index>(years0.size()); }
    Eigen::Index n1() const { return static_cast<Eigen::Index>(years1.size()); }
    Eigen::Index icols() const { return intercept ? 1 : 0; }
    Eigen::Index pcols() const { return icols() + 3 * n_segments - 1; }

    std::pair<SegmentedModel, SegmentedModel> models_of(const Eigen::VectorXd& theta) const {
        const Eigen::Index i = icols();
        SegmentedModel m0;
        if (intercept) m0.intercept = theta[0];
        m0.slopes.assign(theta.data() + i, theta.data() + i + n_segments);
        m0.breakpoints.assign(theta.data() + i + 2 * n_segments, theta.data() + theta.size());
        m0.year_min = year_min;
        m0.year_max = year_max;

        SegmentedModel m1 = m0;
        for (int k = 0; k < n_segments; ++k) {
            m1.slopes[static_cast<std::size_t>(k)] += theta[i + n_segments + k];
        }
        return {std::move(m0), std::move(m1)};
    }

    bool feasible(const Eigen::VectorXd& theta) const {
        if (!theta.allFinite()) return false;
        const Eigen::Index i = icols();
        std::vector<double> breakpoints(theta.data() + i + 2 * n_segments,
                                        theta.data() + theta.size());
        double prev = bounds.first;
        for (double a : breakpoints) {
            if (!(prev < a)) return false;
            prev = a;
        }
        if (!breakpoints.empty() && !(prev < bounds.second)) return false;
        for (const auto* years : {&years0, &years1}) {
            for (std::size_t c : segment_counts(*years, breakpoints)) {
                if (c < static_cast<std::size_t>(min_points)) return false;
            }
        }
        return true;
    }

    Eigen::VectorXd residuals(const Eigen::VectorXd& theta) const {
        const auto [m0, m1] = models_of(theta);
        Eigen::VectorXd pred(n0() + n1());
        predict_log_batch(m0, years0, {pred.data(), static_cast<std::size_t>(n0())});
        predict_log_batch(m1, years1,
                          {pred.data() + n0(), static_cast<std::size_t>(n1())});
        return y - pred;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta) const {
        const auto [m0, m1] = models_of(theta);
        const Eigen::Index i = icols();
        const Eigen::Index s = n_segments;
        const Eigen::Index group_cols = i + 2 * s - 1;  // per-group jacobian width

        Eigen::MatrixXd full0(n0(), group_cols), full1(n1(), group_cols);
        fill_jacobian(m0, years0, full0);
        fill_jacobian(m1, years1, full1);

        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n0() + n1(), pcols());
        if (intercept) {
            jac.col(0).head(n0()) = full0.col(0);
            jac.col(0).tail(n1()) = full1.col(0);
        }
        // base slopes: both groups; deltas: group 1 only (effective slope b+d)
        jac.block(0, i, n0(), s) = full0.block(0, i, n0(), s);
        jac.block(n0(), i, n1(), s) = full1.block(0, i, n1(), s);
        jac.block(n0(), i + s, n1(), s) = full1.block(0, i, n1(), s);
        if (s > 1) {
            jac.block(0, i + 2 * s, n0(), s - 1) = full0.block(0, i + s, n0(), s - 1);
            jac.block(n0(), i + 2 * s, n1(), s - 1) = full1.block(0, i + s, n1(), s - 1);
        }
        return jac;
    }
};

StackedProblem make_problem(const LogSeries& group0, const LogSeries& group1,
                            const FitConfig& config) {
    check_group(group0, 0);
    check_group(group1, 1);
    if (config.n_segments < 1) throw DataError("n_segments must be >= 1");
    if (config.min_points_per_segment < 2)
        throw DataError("min_points_per_segment must be >= 2");

    StackedProblem prob;
    prob.years0 = years_of(group0);
    prob.years1 = years_of(group1);
    prob.n_segments = config.n_segments;
    prob.intercept = config.intercept;
    prob.min_points = config.min_points_per_segment;
    prob.year_min = std::min(prob.years0.front(), prob.years1.front());
    prob.year_max = std::max(prob.years0.back(), prob.years1.back());

    const double overlap_lo = std::max(prob.years0.front(), prob.years1.front());
    const double overlap_hi = std::min(prob.years0.back(), prob.years1.back());
    if (!(overlap_lo < overlap_hi)) {
        throw DataError("the two series' year ranges do not overlap");
    }

    const std::size_t needed = static_cast<std::size_t>(config.n_segments) *
                               static_cast<std::size_t>(config.min_points_per_segment);
    if (prob.years0.size() < needed || prob.years1.size() < needed) {
        throw DataError("each group needs at least " + std::to_string(needed) +
                        " points for " + std::to_string(config.n_segments) + " segments");
    }

    if (config.breakpoint_bounds) {
        auto [lo, hi] = *config.breakpoint_bounds;
        if (!(lo < hi) || lo < prob.year_min || hi > prob.year_max) {
            std::ostringstream msg;
            msg << "breakpoint bounds (" << lo << ", " << hi
                << ") must lie inside the combined year range [" << prob.year_min << ", "
                << prob.year_max << "]";
            throw DataError(msg.str());
        }
        prob.bounds = *config.breakpoint_bounds;
    } else {
        prob.bounds = {overlap_lo + config.min_points_per_segment,
                       overlap_hi - config.min_points_per_segment};
    }

    Eigen::VectorXd y(prob.n0() + prob.n1());
    Eigen::Index r = 0;
    for (const auto& p : group0.points) y[r++] = p.log_count;
    for (const auto& p : group1.points) y[r++] = p.log_count;
    prob.y = std::move(y);
    return prob;
}

} // namespace

SegmentedModel ComparisonResult::group1_model() const {
    SegmentedModel m = base_model;
    for (std::size_t k = 0; k < m.slopes.size(); ++k) m.slopes[k] += deltas[k];
    return m;
}

StackedOls stacked_ols_given_breakpoints(const LogSeries& group0, const LogSeries& group1,
                                         const std::vector<double>& breakpoints,
                                         bool intercept, int min_points_per_segment) {
    check_group(group0, 0);
    check_group(group1, 1);
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i - 1] < breakpoints[i])) {
            throw DataError("breakpoints must be strictly increasing");
        }
    }
    const auto years0 = years_of(group0);
    const auto years1 = years_of(group1);
    require_group_min_points(years0, breakpoints, min_points_per_segment, 0);
    require_group_min_points(years1, breakpoints, min_points_per_segment, 1);

    const int s = static_cast<int>(breakpoints.size()) + 1;
    const Eigen::Index i = intercept ? 1 : 0;
    const Eigen::Index n0 = static_cast<Eigen::Index>(years0.size());
    const Eigen::Index n1 = static_cast<Eigen::Index>(years1.size());
    const Eigen::Index p = i + 2 * s;

    const double year_min = std::min(years0.front(), years1.front());
    const double year_max = std::max(years0.back(), years1.back());

    SegmentedModel probe;
    probe.intercept = intercept ? std::optional<double>(0.0) : std::nullopt;
    probe.slopes.assign(static_cast<std::size_t>(s), 0.0);
    probe.breakpoints = breakpoints;
    probe.year_min = year_min;
    probe.year_max = year_max;

    Eigen::MatrixXd full0(n0, probe.parameter_count()), full1(n1, probe.parameter_count());
    fill_jacobian(probe, years0, full0);
    fill_jacobian(probe, years1, full1);

    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n0 + n1, p);
    if (intercept) {
        design.col(0).head(n0) = full0.col(0);
        design.col(0).tail(n1) = full1.col(0);
    }
    design.block(0, i, n0, s) = full0.block(0, i, n0, s);
    design.block(n0, i, n1, s) = full1.block(0, i, n1, s);
    design.block(n0, i + s, n1, s) = full1.block(0, i, n1, s);

    Eigen::VectorXd y(n0 + n1);
    Eigen::Index r = 0;
    for (const auto& pt : group0.points) y[r++] = pt.log_count;
    for (const auto& pt : group1.points) y[r++] = pt.log_count;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p) {
        throw DataError("rank-deficient stacked design for the given breakpoints");
    }
    const Eigen::VectorXd beta = qr.solve(y);

    StackedOls sol;
    Eigen::Index at = 0;
    if (intercept) sol.intercept = beta[at++];
    sol.slopes.assign(beta.data() + at, beta.data() + at + s);
    at += s;
    sol.deltas.assign(beta.data() + at, beta.data() + at + s);
    sol.sse = (y - design * beta).squaredNorm();
    return sol;
}

/// The joint fit in the argument order given; used internally with a fixed,
/// input-order-independent orientation (see fit_interaction_logs).
static ComparisonResult fit_interaction_oriented(const LogSeries& group0,
                                                 const LogSeries& group1,
                                                 const FitConfig& config, int threads,
                                                 double ci_level) {
    const StackedProblem prob = make_problem(group0, group1, config);

    // Grid of shared-breakpoint starting tuples, exactly as the single-series
    // multistart builds them, filtered by two-group feasibility.
    const int k = config.n_segments - 1;
    std::vector<std::vector<double>> starts;
    if (k == 0) {
        starts.push_back({});
    } else {
        if (!(prob.bounds.first < prob.bounds.second)) {
            throw FitError("breakpoint bounds are empty; no feasible grid start");
        }
        const int g = config.grid_points_per_breakpoint;
        if (g < 2) throw DataError("grid_points_per_breakpoint must be >= 2");
        if (k > g) throw FitError("grid too coarse for the requested breakpoint count");
        std::vector<double> values(static_cast<std::size_t>(g));
        for (int i = 0; i < g; ++i) {
            values[static_cast<std::size_t>(i)] =
                prob.bounds.first +
                (i + 1) * (prob.bounds.second - prob.bounds.first) / (g + 1);
        }
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            std::vector<double> tuple(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i)
                tuple[static_cast<std::size_t>(i)] =
                    values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
            bool ok = true;
            for (const auto* years : {&prob.years0, &prob.years1}) {
                for (std::size_t c : segment_counts(*years, tuple)) {
                    if (c < static_cast<std::size_t>(prob.min_points)) ok = false;
                }
            }
            if (ok) starts.push_back(std::move(tuple));
            int pos = k - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == g - k + pos) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < k; ++i)
                idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
        }
        if (starts.empty()) {
            throw FitError("no feasible grid start inside the breakpoint bounds for "
                           "both groups; widen the bounds or reduce segments");
        }
    }

    struct Outcome {
        bool ok = false;
        detail::GnOutcome gn;
    };
    std::vector<Outcome> outcomes(starts.size());

    detail::run_parallel(starts.size(), threads, [&](std::size_t i) {
        try {
            const auto& bps = starts[i];
            StackedOls ols = stacked_ols_given_breakpoints(group0, group1, bps,
                                                           config.intercept,
                                                           config.min_points_per_segment);
            Eigen::VectorXd theta0(prob.pcols());
            Eigen::Index at = 0;
            if (config.intercept) theta0[at++] = *ols.intercept;
            for (double b : ols.slopes) theta0[at++] = b;
            for (double d : ols.deltas) theta0[at++] = d;
            for (double a : bps) theta0[at++] = a;

            outcomes[i].gn = detail::gn_minimize(prob, theta0, config);
            outcomes[i].ok = true;
        } catch (const FitError&) {
        } catch (const DataError&) {
        }
    });

    int tried = 0;
    const Outcome* best = nullptr;
    for (const auto& o : outcomes) {
        if (!o.ok) continue;
        ++tried;
        if (best == nullptr) {
            best = &o;
            continue;
        }
        if (o.gn.sse != best->gn.sse) {
            if (o.gn.sse < best->gn.sse) best = &o;
            continue;
        }
        for (Eigen::Index j = 0; j < o.gn.theta.size(); ++j) {
            if (o.gn.theta[j] != best->gn.theta[j]) {
                if (o.gn.theta[j] < best->gn.theta[j]) best = &o;
                break;
            }
        }
    }
    if (best == nullptr) {
        throw FitError("every grid start failed; no comparison fit available");
    }

    const Eigen::VectorXd& theta = best->gn.theta;
    const Eigen::Index i = prob.icols();

    ComparisonResult result;
    result.label0 = group0.source_label;
    result.label1 = group1.source_label;
    auto [m0, m1] = prob.models_of(theta);
    (void)m1;
    result.base_model = std::move(m0);
    result.deltas.assign(theta.data() + i + prob.n_segments,
                         theta.data() + i + 2 * prob.n_segments);
    result.sse = best->gn.sse;
    result.n_obs = static_cast<int>(prob.n0() + prob.n1());
    result.n_params = static_cast<int>(prob.pcols());
    result.converged = best->gn.termination == Termination::ToleranceMet;
    result.termination = best->gn.termination;
    result.iterations = best->gn.iterations;
    result.starts_tried = tried;
    result.ridge_fallback_used = best->gn.ridge_fallback_used;

    const Eigen::VectorXd r = prob.residuals(theta);
    result.residuals.assign(r.data(), r.data() + r.size());
    result.sse = r.squaredNorm();

    result.inference = detail::analyze_linearized(
        prob.jacobian(theta), theta,
        stacked_parameter_names(prob.n_segments, prob.intercept), result.sse, prob.y,
        ci_level);
    return result;
}

ComparisonResult fit_interaction_logs(const LogSeries& group0, const LogSeries& group1,
                                      const FitConfig& config, int threads,
                                      double ci_level) {
    check_group(group0, 0);
    check_group(group1, 1);

    // Both argument orders describe the same least-squares problem in two
    // parametrizations, so the optimizer always runs in one canonical
    // orientation (sorted by label, then year range and length). Swapping the
    // arguments then negates every slope difference and reproduces the same
    // SSE and breakpoints exactly, instead of only up to solver noise.
    const auto orientation_key = [](const LogSeries& g) {
        return std::make_tuple(g.source_label, g.points.front().year,
                               g.points.back().year, g.points.size());
    };
    if (!(orientation_key(group1) < orientation_key(group0))) {
        return fit_interaction_oriented(group0, group1, config, threads, ci_level);
    }

    const ComparisonResult c =
        fit_interaction_oriented(group1, group0, config, threads, ci_level);

    ComparisonResult out;
    out.label0 = group0.source_label;
    out.label1 = group1.source_label;
    out.base_model = c.group1_model();  // the caller's group 0 is canonical group 1
    out.deltas.resize(c.deltas.size());
    for (std::size_t k = 0; k < c.deltas.size(); ++k) out.deltas[k] = -c.deltas[k];
    out.sse = c.sse;
    out.n_obs = c.n_obs;
    out.n_params = c.n_params;
    out.converged = c.converged;
    out.termination = c.termination;
    out.iterations = c.iterations;
    out.starts_tried = c.starts_tried;
    out.ridge_fallback_used = c.ridge_fallback_used;

    // Residuals and parameter statistics are reported in the caller's
    // orientation: rebuild the stacked problem as given and evaluate it at the
    // mapped optimum.
    const StackedProblem prob = make_problem(group0, group1, config);
    Eigen::VectorXd theta(prob.pcols());
    Eigen::Index at = 0;
    if (out.base_model.intercept) theta[at++] = *out.base_model.intercept;
    for (double b : out.base_model.slopes) theta[at++] = b;
    for (double d : out.deltas) theta[at++] = d;
    for (double a : out.base_model.breakpoints) theta[at++] = a;

    const Eigen::VectorXd r = prob.residuals(theta);
    out.residuals.assign(r.data(), r.data() + r.size());
    out.inference = detail::analyze_linearized(
        prob.jacobian(theta), theta,
        stacked_parameter_names(prob.n_segments, prob.intercept), out.sse, prob.y,
        ci_level);
    return out;
}

ComparisonResult fit_interaction(const AnnualSeries& series0, const AnnualSeries& series1,
                                 const FitConfig& config, int threads, double ci_level,
                                 ZeroPolicy zero_policy) {
    const LogSeries g0 = log_transform(series0, zero_policy);
    const LogSeries g1 = log_transform(series1, zero_policy);
    return fit_interaction_logs(g0, g1, config, threads, ci_level);
}

std::vector<InteractionTest> test_interactions(const ComparisonResult& result,
                                               double alpha) {
    std::vector<InteractionTest> tests;
    tests.reserve(result.deltas.size());
    for (const auto& ps : result.inference.parameters) {
        if (ps.name.size() < 2 || ps.name[0] != 'd') continue;
        InteractionTest t;
        t.name = ps.name;
        t.delta = ps.estimate;
        t.se = ps.se;
        t.t_stat = ps.t_stat;
        t.p_value = ps.p_value;
        t.significant = ps.p_value < alpha;
        tests.push_back(std::move(t));
    }
    return tests;
}

} // namespace segrowth
