#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "trigsvm/dataset.hpp"
#include "trigsvm/kernel.hpp"
#include "trigsvm/smo.hpp"

namespace trigsvm {

/// Trained epsilon-SVR: f(x) = sum_k dual_coef_k K(sv_k, x) + bias with
/// dual_coef_k = alpha_k - alpha*_k.
struct SvrModel {
    KernelSpec spec = KernelSpec::trig(1.0);
    Eigen::MatrixXd support_vectors;
    Eigen::VectorXd dual_coef;
    std::vector<Index> support_indices;
    double bias = 0.0;
    double epsilon = 0.1;
    double C = 1.0;
    double jitter = 0.0;
    long iterations = 0;
    std::optional<ScalingStats> scaling;

    Index dimension() const noexcept { return support_vectors.cols(); }
    Index sv_count() const noexcept { return static_cast<Index>(support_indices.size()); }
};

inline constexpr double default_svr_epsilon = 0.1;

/// Standard epsilon-SVR dual over (alpha, alpha*) in [0, C]^2n with
/// sum(alpha - alpha*) = 0; C comes from the config. Paired multipliers are
/// netted afterwards so no sample has both sides active.
SvrModel fit_svr(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                 const Eigen::Ref<const Eigen::VectorXd>& targets, const KernelSpec& spec,
                 double epsilon, const SolverConfig& config);

double predict_svr(const SvrModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd predict_svr_rows(const SvrModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows);

double svr_rmse(const SvrModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows,
                const Eigen::Ref<const Eigen::VectorXd>& reference);

/// Dual objective 1/2 b'Kb + eps sum(alpha + alpha*) - y'b with b = alpha - alpha*.
double svr_dual_objective(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                          const Eigen::Ref<const Eigen::VectorXd>& alpha_star,
                          const Eigen::Ref<const Eigen::VectorXd>& targets, double epsilon,
                          const Eigen::Ref<const Eigen::MatrixXd>& gram_values);

}  // namespace trigsvm
