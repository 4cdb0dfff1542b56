#include "csid/recovery.hpp"

#include <cmath>
#include <stdexcept>

#include "csid/errors.hpp"
#include "csid/rng.hpp"

namespace csid {

double objective(const RecoveryProblem& problem, const Signal& s) {
    if (problem.op == nullptr) throw std::invalid_argument("objective: missing operator");
    if (s.size() != problem.op->cols())
        throw std::invalid_argument("objective: candidate length must equal N");
    if (problem.y.size() != problem.op->rows())
        throw std::invalid_argument("objective: y length must equal M");
    const double fit = 0.5 * (problem.y - problem.op->apply(s)).squaredNorm();
    return fit + problem.lambda * s.lpNorm<1>();
}

Signal soft_threshold(const Signal& v, double tau) {
    if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau must be >= 0");
    return v.unaryExpr([tau](double x) {
        const double mag = std::abs(x) - tau;
        return mag > 0.0 ? (x > 0.0 ? mag : -mag) : 0.0;
    });
}

double lipschitz_bound(const MeasurementOperator& op, int max_iterations, double tolerance) {
    // Rayleigh quotients of Phi^T Phi converge to the top eigenvalue from
    // below, so pad the estimate, then cap it with exact norm bounds
    // (||Phi||_1 ||Phi||_inf and ||Phi||_F^2). For orthogonal operators the
    // norm product equals the eigenvalue itself, which keeps the shrinkage
    // step exact there.
    SeededRng rng(0x9e3779b97f4a7c15ULL);
    Signal v = gaussian_vector(rng, op.cols(), 0.0, 1.0);
    v.normalize();
    double eigenvalue = 0.0;
    for (int i = 0; i < max_iterations; ++i) {
        const Signal w = op.apply_adjoint(op.apply(v));
        const double next = v.dot(w);
        const double norm = w.norm();
        if (norm == 0.0) return 1.0;  // zero operator; any positive step works
        v = w / norm;
        if (i > 0 && std::abs(next - eigenvalue) <= tolerance * std::abs(next)) {
            eigenvalue = next;
            break;
        }
        eigenvalue = next;
    }
    const auto& m = op.matrix();
    const double norm_inf = m.cwiseAbs().rowwise().sum().maxCoeff();
    const double norm_one = m.cwiseAbs().colwise().sum().maxCoeff();
    const double frobenius_sq = m.squaredNorm();
    return std::min({1.02 * eigenvalue, norm_one * norm_inf, frobenius_sq});
}

namespace {

struct ObjectiveParts {
    double value;
    Signal residual;  // Phi s - y
};

ObjectiveParts eval_objective(const RecoveryProblem& p, const Signal& s) {
    ObjectiveParts parts;
    parts.residual = p.op->apply(s) - p.y;
    parts.value = 0.5 * parts.residual.squaredNorm() + p.lambda * s.lpNorm<1>();
    return parts;
}

}  // namespace

RecoveryResult solve_l1(const RecoveryProblem& problem, const SolveConfig& config) {
    if (problem.op == nullptr) throw std::invalid_argument("solve_l1: missing operator");
    if (problem.lambda <= 0.0) throw std::invalid_argument("solve_l1: lambda must be positive");
    if (config.max_iterations < 1)
        throw std::invalid_argument("solve_l1: max_iterations must be >= 1");
    if (problem.y.size() != problem.op->rows())
        throw std::invalid_argument("solve_l1: y length must equal M");

    const MeasurementOperator& op = *problem.op;
    double L = lipschitz_bound(op);

    Signal s = Signal::Zero(op.cols());
    ObjectiveParts cur = eval_objective(problem, s);

    RecoveryResult result;
    result.objective_trajectory.reserve(static_cast<std::size_t>(config.max_iterations) + 1);
    result.objective_trajectory.push_back(cur.value);

    Signal z = s;  // momentum point (accelerated mode)
    double t = 1.0;
    const bool accelerated = config.acceleration == Acceleration::accelerated;

    // A plain shrinkage step from s. If the objective still rises (the
    // eigenvalue estimate was low), double L until it descends.
    auto descent_step = [&](Signal& s_next, ObjectiveParts& next) {
        for (int tries = 0; tries < 64; ++tries) {
            const Signal grad = op.apply_adjoint(cur.residual);
            s_next = soft_threshold(s - (1.0 / L) * grad, problem.lambda / L);
            next = eval_objective(problem, s_next);
            if (next.value <= cur.value) return;
            L *= 2.0;
        }
        throw NumericalError("solve_l1: no descent step found");
    };

    // Consecutive small relative changes required before declaring
    // convergence; a single tiny step can be a momentum plateau.
    int small_changes = 0;
    constexpr int kSmallChangesNeeded = 3;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        Signal s_next;
        ObjectiveParts next;
        if (accelerated) {
            const Signal grad = op.apply_adjoint(op.apply(z) - problem.y);
            s_next = soft_threshold(z - (1.0 / L) * grad, problem.lambda / L);
            next = eval_objective(problem, s_next);
            if (next.value > cur.value) {
                // Momentum overshot: restart from the current iterate.
                descent_step(s_next, next);
                t = 1.0;
                z = s_next;
            } else {
                const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                z = s_next + ((t - 1.0) / t_next) * (s_next - s);
                t = t_next;
            }
        } else {
            descent_step(s_next, next);
        }

        if (!std::isfinite(next.value))
            throw NumericalError("solve_l1: objective became non-finite");

        const double change = cur.value - next.value;
        const double rel = change / std::max(cur.value, 1e-300);
        s = std::move(s_next);
        cur = std::move(next);
        result.objective_trajectory.push_back(cur.value);
        result.iterations = iter;
        small_changes = rel < config.tolerance ? small_changes + 1 : 0;
        if (small_changes >= kSmallChangesNeeded) {
            result.converged = true;
            break;
        }
    }

    result.s_hat = std::move(s);
    return result;
}

Signal recover_system(const Signal& w_hat, const MeasurementOperator& op,
                      const LambdaRule& rule, const SolveConfig& config, bool refit) {
    if (w_hat.size() != op.rows())
        throw std::invalid_argument("recover_system: w_hat length must equal M");

    double lambda = rule.value;
    if (rule.kind == LambdaRule::Kind::scaled) {
        const double scale = op.apply_adjoint(w_hat).lpNorm<Eigen::Infinity>();
        if (scale == 0.0) return Signal::Zero(op.cols());  // zero input: zero minimizer
        lambda = rule.value * scale;
    }
    if (lambda <= 0.0) throw std::invalid_argument("recover_system: lambda must be positive");

    RecoveryProblem problem{w_hat, &op, lambda};
    Signal s_hat = solve_l1(problem, config).s_hat;
    if (!refit) return s_hat;

    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < s_hat.size(); ++i) {
        if (s_hat[i] != 0.0) support.push_back(i);
    }
    if (support.empty()) return s_hat;
    Eigen::MatrixXd cols(op.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j)
        cols.col(static_cast<Eigen::Index>(j)) = op.matrix().col(support[j]);
    const Eigen::VectorXd coef = cols.colPivHouseholderQr().solve(w_hat);
    Signal out = Signal::Zero(op.cols());
    for (std::size_t j = 0; j < support.size(); ++j) out[support[j]] = coef[static_cast<Eigen::Index>(j)];
    return out;
}

}  // namespace csid
