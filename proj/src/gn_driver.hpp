#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "segrowth/errors.hpp"
#include "segrowth/solver.hpp"

namespace segrowth::detail {

struct GnOutcome {
    Eigen::VectorXd theta;
    double sse = 0.0;
    int iterations = 0;
    Termination termination = Termination::IterationCap;
    std::vector<double> sse_history;
    bool ridge_fallback_used = false;
};

/// Damped Gauss-Newton over a least-squares problem. `Problem` supplies
/// residuals(theta), jacobian(theta), and feasible(theta); steps are halved
/// until they are feasible and strictly decrease the SSE.
template <class Problem>
GnOutcome gn_minimize(const Problem& prob, Eigen::VectorXd theta, const FitConfig& config) {
    if (!prob.feasible(theta)) {
        throw FitError("initial parameters are infeasible (breakpoint ordering, bounds, "
                       "or per-segment point minimum violated)");
    }
    GnOutcome out;
    double sse = prob.residuals(theta).squaredNorm();
    out.sse_history.push_back(sse);

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        const Eigen::VectorXd r = prob.residuals(theta);
        const Eigen::MatrixXd jac = prob.jacobian(theta);

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
        Eigen::VectorXd step;
        if (qr.rank() == jac.cols()) {
            step = qr.solve(r);
        } else {
            // Rank-deficient Jacobian: retry the normal equations with a ridge.
            out.ridge_fallback_used = true;
            Eigen::MatrixXd jtj = jac.transpose() * jac;
            jtj.diagonal().array() += 1e-10;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(jtj);
            if (ldlt.info() != Eigen::Success) {
                throw FitError("normal equations remain singular after ridge fallback");
            }
            step = ldlt.solve(jac.transpose() * r);
        }
        out.iterations = iter + 1;
        if (!step.allFinite()) {
            out.termination = Termination::Stalled;
            break;
        }

        // A vanishing step means the normal equations are already satisfied.
        const double step_scale = step.cwiseAbs().maxCoeff();
        if (step_scale <= 1e-15 * (1.0 + theta.cwiseAbs().maxCoeff())) {
            out.termination = Termination::ToleranceMet;
            break;
        }

        double alpha = 1.0;
        bool accepted = false;
        bool tolerance_hit = false;
        for (int h = 0; h <= config.step_halving_max; ++h, alpha *= 0.5) {
            const Eigen::VectorXd trial = theta + alpha * step;
            if (!prob.feasible(trial)) continue;
            const double trial_sse = prob.residuals(trial).squaredNorm();
            if (!(trial_sse < sse)) {
                // No improvement; a change below tolerance is convergence,
                // not a rejected step.
                if (std::abs(trial_sse - sse) <= config.tolerance * std::max(sse, 1e-300)) {
                    tolerance_hit = true;
                    break;
                }
                continue;
            }
            const double improvement = sse - trial_sse;
            const double reference = std::max(sse, 1e-300);
            theta = trial;
            sse = trial_sse;
            accepted = true;
            out.sse_history.push_back(sse);
            if (improvement <= config.tolerance * reference || sse == 0.0) {
                tolerance_hit = true;
            }
            break;
        }

        if (tolerance_hit) {
            out.termination = Termination::ToleranceMet;
            break;
        }
        if (!accepted) {
            out.termination = Termination::Stalled;
            break;
        }
    }

    out.theta = std::move(theta);
    out.sse = sse;
    return out;
}

/// Shared work queue used by multistart and by the comparison fit. Runs
/// body(i) for i in [0, n); thread count <= 1 runs inline.
template <class Body>
void run_parallel(std::size_t n, int threads, Body&& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    const int use = std::min<int>(threads, static_cast<int>(n));
    pool.reserve(static_cast<std::size_t>(use));
    for (int k = 0; k < use; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace segrowth::detail
