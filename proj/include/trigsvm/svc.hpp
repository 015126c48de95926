#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "trigsvm/dataset.hpp"
#include "trigsvm/kernel.hpp"
#include "trigsvm/smo.hpp"

namespace trigsvm {

/// Trained C-SVC: f(x) = sum_k dual_coef_k K(sv_k, x) + bias with
/// dual_coef_k = alpha_k y_k. Only samples with alpha > 0 are kept.
struct SvcModel {
    KernelSpec spec = KernelSpec::trig(1.0);
    Eigen::MatrixXd support_vectors;
    Eigen::VectorXd dual_coef;
    std::vector<Index> support_indices;
    double bias = 0.0;
    double C = 1.0;
    /// Diagonal shift applied after a failed raw solve; 0 when none was needed.
    double jitter = 0.0;
    long iterations = 0;
    std::optional<ScalingStats> scaling;

    Index dimension() const noexcept { return support_vectors.cols(); }
    Index sv_count() const noexcept { return static_cast<Index>(support_indices.size()); }
    /// alpha_i for every training sample (zero off the support set).
    Eigen::VectorXd full_alpha(Index n_train) const;
};

/// Solves the dual min 1/2 sum a_i a_j y_i y_j K_ij - sum a_i, y'a = 0,
/// 0 <= a <= C. On a convergence failure the Gram is jittered and the solve
/// retried once.
SvcModel fit_svc(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                 const Eigen::Ref<const Eigen::VectorXd>& labels, const KernelSpec& spec,
                 const SolverConfig& config);

/// Same solve with the training Gram supplied by the caller (e.g. a block
/// of a Gram shared across CV folds). The kernel is only recorded in the model.
SvcModel fit_svc_precomputed(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                             const Eigen::Ref<const Eigen::VectorXd>& labels,
                             const KernelSpec& spec, Eigen::MatrixXd gram_values,
                             const SolverConfig& config);

double decision_function(const SvcModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd decision_values(const SvcModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows);

/// Sign of the decision value; exactly zero maps to +1.
int predict(const SvcModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
inline int label_of(double decision) { return decision >= 0.0 ? 1 : -1; }
Eigen::VectorXd predict_rows(const SvcModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows);

double dual_objective(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                      const Eigen::Ref<const Eigen::VectorXd>& labels,
                      const Eigen::Ref<const Eigen::MatrixXd>& gram_values);

/// Largest KKT violation over the training set: max(0, 1 - y f) at alpha = 0,
/// max(0, y f - 1) at alpha = C and |y f - 1| in between. `gram_values` is
/// the training Gram in the space the model was fitted in.
double kkt_violation(const SvcModel& model, const Eigen::Ref<const Eigen::MatrixXd>& samples,
                     const Eigen::Ref<const Eigen::VectorXd>& labels,
                     const Eigen::Ref<const Eigen::MatrixXd>& gram_values);

struct CountStats {
    Index sv_count = 0;
    Index train_errors = 0;
    Index test_errors = 0;
};

CountStats count_stats(const SvcModel& model, const Dataset& train, const Dataset& test);

}  // namespace trigsvm
