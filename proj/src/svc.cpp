#include "trigsvm/svc.hpp"

#include <algorithm>
#include <cmath>

#include "trigsvm/gram_audit.hpp"

namespace trigsvm {

Eigen::VectorXd SvcModel::full_alpha(Index n_train) const {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n_train);
    for (std::size_t k = 0; k < support_indices.size(); ++k) {
        const Index i = support_indices[k];
        if (i < 0 || i >= n_train) throw Error(ErrorKind::shape, "support index outside training set");
        alpha(i) = std::abs(dual_coef(static_cast<Index>(k)));
    }
    return alpha;
}

namespace {

void check_training_input(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                          const Eigen::Ref<const Eigen::VectorXd>& labels) {
    if (samples.rows() != labels.size()) {
        throw Error(ErrorKind::shape, "sample and label counts differ");
    }
    if (samples.rows() < 2) throw Error(ErrorKind::degenerate_data, "need at least two samples");
    if (samples.cols() < 1) throw Error(ErrorKind::shape, "samples need at least one feature");
    if (!samples.allFinite()) throw Error(ErrorKind::data, "samples contain non-finite values");
    bool pos = false;
    bool neg = false;
    for (Index i = 0; i < labels.size(); ++i) {
        if (labels(i) == 1.0) {
            pos = true;
        } else if (labels(i) == -1.0) {
            neg = true;
        } else {
            throw Error(ErrorKind::label, "labels must be -1 or +1");
        }
    }
    if (!pos || !neg) throw Error(ErrorKind::degenerate_data, "both classes must be present");
}

SvcModel fit_with_rows(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                       const Eigen::Ref<const Eigen::VectorXd>& labels, const KernelSpec& spec,
                       KernelRows& rows, const SolverConfig& config) {
    const Index n = samples.rows();

    SmoProblem problem;
    problem.linear = Eigen::VectorXd::Constant(n, -1.0);
    problem.signs = labels;
    problem.point.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) problem.point[static_cast<std::size_t>(i)] = i;
    problem.upper = config.C;

    const long max_iter = config.effective_max_iter(n);
    SmoResult result;
    double jitter = 0.0;
    try {
        result = solve_smo(problem, rows, config.kkt_tol, max_iter);
    } catch (const ConvergenceError&) {
        // Indefinite Grams are the usual cause; regularize once and retry.
        if (!rows.is_precomputed()) throw;
        auto regularized = jitter_regularize(rows.precomputed());
        if (regularized.lambda == 0.0) throw;
        jitter = regularized.lambda;
        KernelRows shifted(std::move(regularized.matrix));
        result = solve_smo(problem, shifted, config.kkt_tol, max_iter);
    }

    SvcModel model;
    model.spec = spec;
    model.C = config.C;
    model.bias = result.bias;
    model.jitter = jitter;
    model.iterations = result.iterations;
    for (Index i = 0; i < n; ++i) {
        if (result.alpha(i) > 0.0) model.support_indices.push_back(i);
    }
    const auto count = static_cast<Index>(model.support_indices.size());
    model.support_vectors.resize(count, samples.cols());
    model.dual_coef.resize(count);
    for (Index k = 0; k < count; ++k) {
        const Index i = model.support_indices[static_cast<std::size_t>(k)];
        model.support_vectors.row(k) = samples.row(i);
        model.dual_coef(k) = result.alpha(i) * labels(i);
    }
    return model;
}

}  // namespace

SvcModel fit_svc(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                 const Eigen::Ref<const Eigen::VectorXd>& labels, const KernelSpec& spec,
                 const SolverConfig& config) {
    config.validate();
    check_training_input(samples, labels);
    KernelRows rows(spec, samples, config);
    return fit_with_rows(samples, labels, spec, rows, config);
}

SvcModel fit_svc_precomputed(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                             const Eigen::Ref<const Eigen::VectorXd>& labels,
                             const KernelSpec& spec, Eigen::MatrixXd gram_values,
                             const SolverConfig& config) {
    config.validate();
    check_training_input(samples, labels);
    if (gram_values.rows() != samples.rows() || gram_values.cols() != samples.rows()) {
        throw Error(ErrorKind::shape, "precomputed Gram does not match the sample count");
    }
    KernelRows rows(std::move(gram_values));
    return fit_with_rows(samples, labels, spec, rows, config);
}

double decision_function(const SvcModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
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

Eigen::VectorXd decision_values(const SvcModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows) {
    Eigen::VectorXd out(rows.rows());
    for (Index i = 0; i < rows.rows(); ++i) out(i) = decision_function(model, rows.row(i).transpose());
    return out;
}

int predict(const SvcModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    return label_of(decision_function(model, x));
}

Eigen::VectorXd predict_rows(const SvcModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows) {
    return decision_values(model, rows).unaryExpr([](double f) { return double(label_of(f)); });
}

double dual_objective(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                      const Eigen::Ref<const Eigen::VectorXd>& labels,
                      const Eigen::Ref<const Eigen::MatrixXd>& gram_values) {
    const Index n = alpha.size();
    if (labels.size() != n || gram_values.rows() != n || gram_values.cols() != n) {
        throw Error(ErrorKind::shape, "dual_objective arguments disagree in length");
    }
    const Eigen::VectorXd w = alpha.cwiseProduct(labels);
    return 0.5 * w.dot(gram_values * w) - alpha.sum();
}

double kkt_violation(const SvcModel& model, const Eigen::Ref<const Eigen::MatrixXd>& samples,
                     const Eigen::Ref<const Eigen::VectorXd>& labels,
                     const Eigen::Ref<const Eigen::MatrixXd>& gram_values) {
    const Index n = samples.rows();
    if (labels.size() != n || gram_values.rows() != n || gram_values.cols() != n) {
        throw Error(ErrorKind::shape, "kkt_violation arguments disagree in length");
    }
    const Eigen::VectorXd alpha = model.full_alpha(n);
    const Eigen::VectorXd f = gram_values * alpha.cwiseProduct(labels) +
                              Eigen::VectorXd::Constant(n, model.bias);
    const double at_upper = model.C * (1.0 - 1e-12);
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double margin = labels(i) * f(i);
        double v;
        if (alpha(i) <= 0.0) {
            v = std::max(0.0, 1.0 - margin);
        } else if (alpha(i) >= at_upper) {
            v = std::max(0.0, margin - 1.0);
        } else {
            v = std::abs(margin - 1.0);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

CountStats count_stats(const SvcModel& model, const Dataset& train, const Dataset& test) {
    const auto errors = [&](const Dataset& data) {
        Index wrong = 0;
        for (Index i = 0; i < data.size(); ++i) {
            if (predict(model, data.features.row(i).transpose()) != static_cast<int>(data.target(i))) {
                ++wrong;
            }
        }
        return wrong;
    };
    return {model.sv_count(), errors(train), errors(test)};
}

}  // namespace trigsvm
