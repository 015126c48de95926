#include "trigsvm/svr.hpp"

#include <algorithm>
#include <cmath>

#include "trigsvm/gram_audit.hpp"

namespace trigsvm {

SvrModel fit_svr(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                 const Eigen::Ref<const Eigen::VectorXd>& targets, const KernelSpec& spec,
                 double epsilon, const SolverConfig& config) {
    config.validate();
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorKind::invalid_parameter, "epsilon must be non-negative");
    }
    if (samples.rows() != targets.size()) {
        throw Error(ErrorKind::shape, "sample and target counts differ");
    }
    if (samples.rows() < 2) throw Error(ErrorKind::degenerate_data, "need at least two samples");
    if (samples.cols() < 1) throw Error(ErrorKind::shape, "samples need at least one feature");
    if (!samples.allFinite() || !targets.allFinite()) {
        throw Error(ErrorKind::data, "samples or targets contain non-finite values");
    }

    const Index n = samples.rows();
    SmoProblem problem;
    problem.linear.resize(2 * n);
    problem.signs.resize(2 * n);
    problem.point.resize(static_cast<std::size_t>(2 * n));
    for (Index i = 0; i < n; ++i) {
        problem.linear(i) = epsilon - targets(i);
        problem.linear(n + i) = epsilon + targets(i);
        problem.signs(i) = 1.0;
        problem.signs(n + i) = -1.0;
        problem.point[static_cast<std::size_t>(i)] = i;
        problem.point[static_cast<std::size_t>(n + i)] = i;
    }
    problem.upper = config.C;

    const long max_iter = config.effective_max_iter(2 * n);
    KernelRows rows(spec, samples, config);
    SmoResult result;
    double jitter = 0.0;
    try {
        result = solve_smo(problem, rows, config.kkt_tol, max_iter);
    } catch (const ConvergenceError&) {
        if (!rows.is_precomputed()) throw;
        auto regularized = jitter_regularize(rows.precomputed());
        if (regularized.lambda == 0.0) throw;
        jitter = regularized.lambda;
        KernelRows shifted(std::move(regularized.matrix));
        result = solve_smo(problem, shifted, config.kkt_tol, max_iter);
    }

    SvrModel model;
    model.spec = spec;
    model.epsilon = epsilon;
    model.C = config.C;
    model.bias = result.bias;
    model.jitter = jitter;
    model.iterations = result.iterations;

    std::vector<double> coef;
    for (Index i = 0; i < n; ++i) {
        // Netting alpha and alpha* leaves f unchanged and can only lower the
        // epsilon term of the objective.
        const double overlap = std::min(result.alpha(i), result.alpha(n + i));
        const double up = result.alpha(i) - overlap;
        const double down = result.alpha(n + i) - overlap;
        const double beta = up - down;
        if (beta != 0.0) {
            model.support_indices.push_back(i);
            coef.push_back(beta);
        }
    }
    const auto count = static_cast<Index>(coef.size());
    model.support_vectors.resize(count, samples.cols());
    model.dual_coef = Eigen::Map<const Eigen::VectorXd>(coef.data(), count);
    for (Index k = 0; k < count; ++k) {
        model.support_vectors.row(k) = samples.row(model.support_indices[static_cast<std::size_t>(k)]);
    }
    return model;
}

double predict_svr(const SvrModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != model.dimension()) {
        throw Error(ErrorKind::shape, "expected " + std::to_string(model.dimension()) +
                                          " features, got " + std::to_string(x.size()));
    }
    const Eigen::VectorXd z = model.scaling ? model.scaling->apply(x) : Eigen::VectorXd(x);
    double sum = 0.0;
    for (Index k = 0; k < model.sv_count(); ++k) {
        sum += model.dual_coef(k) * eval_kernel(model.spec, model.support_vectors.row(k), z.transpose());
    }
    return sum + model.bias;
}

Eigen::VectorXd predict_svr_rows(const SvrModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows) {
    Eigen::VectorXd out(rows.rows());
    for (Index i = 0; i < rows.rows(); ++i) out(i) = predict_svr(model, rows.row(i).transpose());
    return out;
}

double svr_rmse(const SvrModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows,
                const Eigen::Ref<const Eigen::VectorXd>& reference) {
    if (rows.rows() == 0) throw Error(ErrorKind::empty_input, "rmse over no samples");
    if (rows.rows() != reference.size()) {
        throw Error(ErrorKind::shape, "rmse inputs differ in length");
    }
    const Eigen::VectorXd residual = predict_svr_rows(model, rows) - reference;
    return std::sqrt(residual.squaredNorm() / static_cast<double>(residual.size()));
}

double svr_dual_objective(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                          const Eigen::Ref<const Eigen::VectorXd>& alpha_star,
                          const Eigen::Ref<const Eigen::VectorXd>& targets, double epsilon,
                          const Eigen::Ref<const Eigen::MatrixXd>& gram_values) {
    const Index n = alpha.size();
    if (alpha_star.size() != n || targets.size() != n || gram_values.rows() != n ||
        gram_values.cols() != n) {
        throw Error(ErrorKind::shape, "svr_dual_objective arguments disagree in length");
    }
    const Eigen::VectorXd beta = alpha - alpha_star;
    return 0.5 * beta.dot(gram_values * beta) + epsilon * (alpha + alpha_star).sum() -
           targets.dot(beta);
}

}  // namespace trigsvm
