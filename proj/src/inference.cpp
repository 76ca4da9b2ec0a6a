#include "segrowth/inference.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "segrowth/errors.hpp"

namespace segrowth {

namespace {

std::vector<double> years_of(const LogSeries& data) {
    std::vector<double> years;
    years.reserve(data.points.size());
    for (const auto& p : data.points) years.push_back(static_cast<double>(p.year));
    return years;
}

Eigen::MatrixXd jacobian_at_fit(const FitResult& fit, const LogSeries& data) {
    const auto years = years_of(data);
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(years.size()),
                        static_cast<Eigen::Index>(fit.n_params));
    fill_jacobian(fit.model, years, jac);
    return jac;
}

Eigen::VectorXd logs_of(const LogSeries& data) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.points.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] = data.points[static_cast<std::size_t>(i)].log_count;
    return y;
}

/// sigma2 * inverse(J'J); pseudo-inverse when singular.
Eigen::MatrixXd covariance_from_jacobian(const Eigen::MatrixXd& jac, double sigma2,
                                         bool* pseudo_inverse_used) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(jtj);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(jtj.rows(), jtj.cols()));
        const double resid =
            (jtj * inv - Eigen::MatrixXd::Identity(jtj.rows(), jtj.cols()))
                .cwiseAbs()
                .maxCoeff();
        if (resid < 1e-6) {
            if (pseudo_inverse_used) *pseudo_inverse_used = false;
            return sigma2 * inv;
        }
    }
    if (pseudo_inverse_used) *pseudo_inverse_used = true;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jtj);
    return sigma2 * cod.pseudoInverse();
}

std::pair<double, double> r_squared_of(double sse, const Eigen::VectorXd& y) {
    const double mean = y.mean();
    const double tss_centered = (y.array() - mean).square().sum();
    const double tss_uncentered = y.squaredNorm();
    auto ratio = [&](double tss) {
        if (tss <= 0.0) return sse <= 0.0 ? 1.0 : 0.0;
        return 1.0 - sse / tss;
    };
    return {ratio(tss_centered), ratio(tss_uncentered)};
}

} // namespace

namespace detail {

InferenceReport analyze_linearized(const Eigen::MatrixXd& jacobian,
                                   const Eigen::VectorXd& theta,
                                   const std::vector<std::string>& names, double sse,
                                   const Eigen::VectorXd& y, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw DataError("confidence level must be strictly between 0 and 1");
    }
    if (jacobian.cols() != theta.size() ||
        names.size() != static_cast<std::size_t>(theta.size()) ||
        jacobian.rows() != y.size()) {
        throw DataError("inference inputs have mismatched shapes");
    }
    InferenceReport report;
    report.ci_level = level;
    report.dof = static_cast<int>(y.size() - theta.size());
    if (report.dof <= 0) {
        throw DataError("no residual degrees of freedom; cannot estimate uncertainty");
    }
    report.sigma2_hat = sse / report.dof;
    std::tie(report.r_squared, report.r_squared_uncentered) = r_squared_of(sse, y);

    const Eigen::MatrixXd cov =
        covariance_from_jacobian(jacobian, report.sigma2_hat, &report.pseudo_inverse_used);

    const boost::math::students_t dist(report.dof);
    const double tcrit = boost::math::quantile(dist, 0.5 + level / 2.0);

    report.parameters.reserve(names.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        ParameterStats ps;
        ps.name = names[static_cast<std::size_t>(i)];
        ps.estimate = theta[i];
        ps.se = std::sqrt(std::max(cov(i, i), 0.0));
        ps.ci_low = ps.estimate - tcrit * ps.se;
        ps.ci_high = ps.estimate + tcrit * ps.se;
        if (ps.se > 0.0) {
            ps.t_stat = ps.estimate / ps.se;
            ps.p_value = 2.0 * boost::math::cdf(dist, -std::abs(ps.t_stat));
        } else {
            ps.t_stat = ps.estimate == 0.0
                            ? 0.0
                            : std::copysign(std::numeric_limits<double>::infinity(),
                                            ps.estimate);
            ps.p_value = ps.estimate == 0.0 ? 1.0 : 0.0;
        }
        report.parameters.push_back(std::move(ps));
    }
    return report;
}

} // namespace detail

Eigen::MatrixXd covariance_matrix(const FitResult& fit, const LogSeries& data,
                                  bool* pseudo_inverse_used) {
    if (static_cast<int>(data.points.size()) != fit.n_obs) {
        throw DataError("fit and data disagree on the number of observations");
    }
    if (fit.dof() <= 0) {
        throw DataError("no residual degrees of freedom; cannot estimate uncertainty");
    }
    const double sigma2 = fit.sse / fit.dof();
    return covariance_from_jacobian(jacobian_at_fit(fit, data), sigma2,
                                    pseudo_inverse_used);
}

std::pair<double, double> r_squared(const FitResult& fit, const LogSeries& data) {
    if (static_cast<int>(data.points.size()) != fit.n_obs) {
        throw DataError("fit and data disagree on the number of observations");
    }
    return r_squared_of(fit.sse, logs_of(data));
}

InferenceReport analyze(const FitResult& fit, const LogSeries& data, double level) {
    if (static_cast<int>(data.points.size()) != fit.n_obs) {
        throw DataError("fit and data disagree on the number of observations");
    }
    return detail::analyze_linearized(
        jacobian_at_fit(fit, data), pack_parameters(fit.model),
        parameter_names(static_cast<int>(fit.model.segment_count()),
                        fit.model.intercept.has_value()),
        fit.sse, logs_of(data), level);
}

SelectionResult select_segments(const LogSeries& data, int max_segments,
                                double min_r2_gain, const FitConfig& base_config,
                                int threads) {
    if (max_segments < 1) throw DataError("max_segments must be >= 1");
    SelectionResult result;
    result.trace.reserve(static_cast<std::size_t>(max_segments));

    for (int s = 1; s <= max_segments; ++s) {
        SelectionCandidate cand;
        cand.n_segments = s;
        FitConfig config = base_config;
        config.n_segments = s;
        try {
            cand.fit = multistart_fit(data, config, threads);
            cand.sse = cand.fit.sse;
            cand.r_squared = r_squared(cand.fit, data).first;
            cand.fit_ok = true;
        } catch (const std::runtime_error& e) {
            cand.failure = e.what();  // skipped, noted, scan continues
        }
        result.trace.push_back(std::move(cand));
    }

    bool any_ok = false;
    for (const auto& c : result.trace) any_ok = any_ok || c.fit_ok;
    if (!any_ok) throw FitError("no candidate segment count could be fitted");

    // Smallest fitted count whose successor adds less than min_r2_gain; an
    // unfittable successor counts as "no gain". Fallback: largest fitted count.
    int chosen = 0;
    for (const auto& c : result.trace) {
        if (c.fit_ok) chosen = c.n_segments;
    }
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        if (!result.trace[i].fit_ok) continue;
        if (i + 1 >= result.trace.size()) break;
        const auto& next = result.trace[i + 1];
        if (!next.fit_ok) {
            chosen = result.trace[i].n_segments;
            break;
        }
        if (next.r_squared - result.trace[i].r_squared < min_r2_gain) {
            chosen = result.trace[i].n_segments;
            break;
        }
    }
    result.chosen_segments = chosen;
    for (const auto& c : result.trace) {
        if (c.n_segments == chosen) result.best_fit = c.fit;
    }
    return result;
}

} // namespace segrowth
