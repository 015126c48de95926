#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "trigsvm/kernel.hpp"

namespace trigsvm {

enum class Definiteness { positive_definite, semidefinite_boundary, indefinite };

std::string_view to_string(Definiteness d) noexcept;

/// 1-based index of the leading principal minor that decided the verdict.
struct MinorWitness {
    Index order;
    double determinant;
};

struct EigenWitness {
    double eigenvalue;
};

struct PsdVerdict {
    Definiteness classification = Definiteness::positive_definite;
    std::optional<std::variant<MinorWitness, EigenWitness>> witness;
    /// Populated by eigen_audit only.
    std::optional<double> min_eigenvalue;
    /// Populated by leading_minor_audit only: det of the k x k leading block at [k-1].
    std::vector<double> leading_minors;

    bool is_positive_definite() const noexcept {
        return classification == Definiteness::positive_definite;
    }
};

/// Entrywise symmetry tolerance accepted by the audits.
inline constexpr double symmetry_tolerance = 1e-10;

/// Leading principal minors by column elimination against each pivot
/// (K'_jk = K_jk - K_ik K_ji / K_ii), so det of the k-th leading block is
/// the running product of pivots. A vanishing pivot switches the remaining
/// minors to a pivoted determinant of each leading block.
///
/// positive-definite if every minor > tol, indefinite if any minor < -tol,
/// semidefinite-boundary otherwise.
PsdVerdict leading_minor_audit(const Eigen::Ref<const Eigen::MatrixXd>& matrix, double tol);

/// Symmetric eigenvalues by cyclic Jacobi rotations, ascending.
/// Throws numerical_failure if the off-diagonal mass does not vanish within
/// the sweep limit.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                                      int max_sweeps = 100);

/// Classifies by the smallest eigenvalue against tol * n * max|G|.
PsdVerdict eigen_audit(const Eigen::Ref<const Eigen::MatrixXd>& matrix, double tol);

struct JitterPolicy {
    /// Multiples of trace(G)/n tried in order.
    std::vector<double> schedule{0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
    /// Tolerance handed to eigen_audit.
    double tol = 1e-12;
};

struct JitterResult {
    Eigen::MatrixXd matrix;
    double lambda;
};

/// Smallest scheduled lambda for which G + lambda I audits as positive definite.
JitterResult jitter_regularize(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                               const JitterPolicy& policy = {});

struct SurveyOptions {
    std::size_t trials = 1000;
    Index n_max = 15;
    Index d_max = 4;
    std::uint64_t seed = 42;
    /// When non-empty each trial draws its width from this list instead of
    /// using the kernel's own.
    std::vector<double> width_grid;
    /// Points are drawn uniformly from [-box, box]^d.
    double box = 1.0;
    /// Eigenvalues below this count as violations.
    double violation_threshold = -1e-6;
};

/// One regenerated survey configuration.
struct SurveyTrial {
    std::size_t index;
    KernelSpec spec;
    Eigen::MatrixXd points;
};

struct SurveyViolation {
    std::size_t seed_offset;
    Index n;
    Index d;
    double sigma;
    double min_eig;
    Eigen::MatrixXd points;
};

struct SurveyReport {
    KernelSpec spec;
    SurveyOptions options;
    double min_eigenvalue;
    std::vector<double> trial_min_eigenvalues;
    std::vector<SurveyViolation> violations;

    std::string to_json() const;
};

/// Rebuilds the configuration of trial `index`; each trial has its own PRNG stream.
SurveyTrial survey_trial(const KernelSpec& spec, const SurveyOptions& options, std::size_t index);

/// Stress-tests definiteness on random point clouds; reports rather than asserts.
SurveyReport randomized_psd_survey(const KernelSpec& spec, const SurveyOptions& options);

}  // namespace trigsvm
