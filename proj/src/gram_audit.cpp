#include "trigsvm/gram_audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "trigsvm/json_codec.hpp"
#include "trigsvm/random.hpp"

namespace trigsvm {

std::string_view to_string(Definiteness d) noexcept {
    switch (d) {
        case Definiteness::positive_definite: return "positive-definite";
        case Definiteness::semidefinite_boundary: return "positive-semidefinite-boundary";
        case Definiteness::indefinite: return "indefinite";
    }
    return "unknown";
}

namespace {

void require_square_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::shape, "matrix is not square");
    }
    if (m.rows() == 0) {
        throw Error(ErrorKind::empty_input, "matrix is empty");
    }
    if (!m.allFinite()) {
        throw Error(ErrorKind::data, "matrix contains non-finite entries");
    }
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > symmetry_tolerance) {
        throw Error(ErrorKind::shape, "matrix is not symmetric (max |G - G^T| = " +
                                          std::to_string(asym) + ")");
    }
}

// Determinant of a small dense block with partial pivoting; only used once
// the unpivoted elimination has run into a zero pivot.
double pivoted_determinant(Eigen::MatrixXd a) {
    const Index n = a.rows();
    double det = 1.0;
    for (Index k = 0; k < n; ++k) {
        Index p = k;
        for (Index r = k + 1; r < n; ++r) {
            if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
        }
        if (a(p, k) == 0.0) return 0.0;
        if (p != k) {
            a.row(p).swap(a.row(k));
            det = -det;
        }
        det *= a(k, k);
        for (Index r = k + 1; r < n; ++r) {
            const double factor = a(r, k) / a(k, k);
            a.row(r).tail(n - k - 1) -= factor * a.row(k).tail(n - k - 1);
        }
    }
    return det;
}

Definiteness classify(double value, double threshold) {
    if (value > threshold) return Definiteness::positive_definite;
    if (value < -threshold) return Definiteness::indefinite;
    return Definiteness::semidefinite_boundary;
}

}  // namespace

PsdVerdict leading_minor_audit(const Eigen::Ref<const Eigen::MatrixXd>& matrix, double tol) {
    require_square_symmetric(matrix);
    if (!(tol >= 0.0)) throw Error(ErrorKind::invalid_parameter, "tolerance must be non-negative");

    const Index n = matrix.rows();
    const double scale = matrix.cwiseAbs().maxCoeff();
    Eigen::MatrixXd work = matrix;

    PsdVerdict verdict;
    verdict.leading_minors.reserve(static_cast<std::size_t>(n));

    double det = 1.0;
    bool eliminating = true;
    for (Index k = 0; k < n; ++k) {
        if (eliminating) {
            const double pivot = work(k, k);
            det *= pivot;
            verdict.leading_minors.push_back(det);
            if (std::abs(pivot) <= std::numeric_limits<double>::epsilon() * scale) {
                eliminating = false;
                continue;
            }
            for (Index col = k + 1; col < n; ++col) {
                const double factor = work(k, col) / pivot;
                work.col(col).tail(n - k - 1) -= factor * work.col(k).tail(n - k - 1);
            }
        } else {
            verdict.leading_minors.push_back(pivoted_determinant(matrix.topLeftCorner(k + 1, k + 1)));
        }
    }

    bool boundary = false;
    for (std::size_t k = 0; k < verdict.leading_minors.size(); ++k) {
        const double minor = verdict.leading_minors[k];
        const auto c = classify(minor, tol);
        if (c == Definiteness::indefinite) {
            verdict.classification = Definiteness::indefinite;
            verdict.witness = MinorWitness{static_cast<Index>(k + 1), minor};
            return verdict;
        }
        if (c == Definiteness::semidefinite_boundary && !boundary) {
            boundary = true;
            verdict.witness = MinorWitness{static_cast<Index>(k + 1), minor};
        }
    }
    verdict.classification =
        boundary ? Definiteness::semidefinite_boundary : Definiteness::positive_definite;
    return verdict;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                                      int max_sweeps) {
    require_square_symmetric(matrix);
    const Index n = matrix.rows();
    Eigen::MatrixXd a = 0.5 * (matrix + matrix.transpose());

    const double frobenius = a.norm();
    const double target = std::numeric_limits<double>::epsilon() * frobenius;

    auto off_diagonal = [&] {
        double sum = 0.0;
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < j; ++i) sum += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(sum);
    };

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_diagonal() <= target) break;
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    if (sweep == max_sweeps && off_diagonal() > target) {
        throw Error(ErrorKind::numerical_failure,
                    "Jacobi eigenvalue iteration did not converge in " +
                        std::to_string(max_sweeps) + " sweeps");
    }
    Eigen::VectorXd values = a.diagonal();
    std::sort(values.begin(), values.end());
    return values;
}

PsdVerdict eigen_audit(const Eigen::Ref<const Eigen::MatrixXd>& matrix, double tol) {
    if (!(tol >= 0.0)) throw Error(ErrorKind::invalid_parameter, "tolerance must be non-negative");
    const Eigen::VectorXd values = symmetric_eigenvalues(matrix);
    const double threshold =
        tol * static_cast<double>(matrix.rows()) * matrix.cwiseAbs().maxCoeff();

    PsdVerdict verdict;
    verdict.min_eigenvalue = values(0);
    verdict.classification = classify(values(0), threshold);
    if (verdict.classification != Definiteness::positive_definite) {
        verdict.witness = EigenWitness{values(0)};
    }
    return verdict;
}

JitterResult jitter_regularize(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                               const JitterPolicy& policy) {
    require_square_symmetric(matrix);
    const double unit = matrix.trace() / static_cast<double>(matrix.rows());
    double last_min = std::numeric_limits<double>::quiet_NaN();
    for (const double step : policy.schedule) {
        const double lambda = step * unit;
        Eigen::MatrixXd shifted = matrix;
        shifted.diagonal().array() += lambda;
        const auto verdict = eigen_audit(shifted, policy.tol);
        if (verdict.is_positive_definite()) {
            return {std::move(shifted), lambda};
        }
        last_min = *verdict.min_eigenvalue;
    }
    throw Error(ErrorKind::regularization_failure,
                "no scheduled jitter makes the matrix positive definite (min eigenvalue at "
                "largest shift: " +
                    std::to_string(last_min) + ")");
}

namespace {

double width_of(const KernelSpec& spec) {
    return std::visit(
        [](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, kernels::Polynomial>) {
                return static_cast<double>(k.degree);
            } else if constexpr (std::is_same_v<K, kernels::Rbf>) {
                return k.gamma;
            } else if constexpr (std::is_same_v<K, kernels::Sigmoid>) {
                return k.beta;
            } else {
                return k.sigma;
            }
        },
        spec.variant());
}

}  // namespace

SurveyTrial survey_trial(const KernelSpec& spec, const SurveyOptions& options, std::size_t index) {
    if (options.n_max < 1 || options.d_max < 1) {
        throw Error(ErrorKind::invalid_parameter, "survey needs n_max >= 1 and d_max >= 1");
    }
    auto rng = SplitMix64::for_stream(options.seed, index);
    const Index n = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(options.n_max)));
    const Index d = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(options.d_max)));
    KernelSpec trial_spec = spec;
    if (!options.width_grid.empty()) {
        trial_spec = spec.with_width(options.width_grid[rng.below(options.width_grid.size())]);
    }
    Eigen::MatrixXd points(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) points(i, j) = rng.uniform(-options.box, options.box);
    return {index, trial_spec, std::move(points)};
}

SurveyReport randomized_psd_survey(const KernelSpec& spec, const SurveyOptions& options) {
    if (options.trials < 1) throw Error(ErrorKind::invalid_parameter, "survey needs trials >= 1");
    SurveyReport report{spec, options, std::numeric_limits<double>::infinity(), {}, {}};
    report.trial_min_eigenvalues.reserve(options.trials);
    for (std::size_t t = 0; t < options.trials; ++t) {
        auto trial = survey_trial(spec, options, t);
        const auto g = gram(trial.spec, trial.points);
        const double min_eig = symmetric_eigenvalues(g.values())(0);
        report.trial_min_eigenvalues.push_back(min_eig);
        report.min_eigenvalue = std::min(report.min_eigenvalue, min_eig);
        if (min_eig < options.violation_threshold) {
            report.violations.push_back({t, trial.points.rows(), trial.points.cols(),
                                         width_of(trial.spec), min_eig, std::move(trial.points)});
        }
    }
    return report;
}

std::string SurveyReport::to_json() const {
    nlohmann::ordered_json j;
    j["kernel"] = kernel_to_json(spec);
    j["trials"] = options.trials;
    j["seed"] = options.seed;
    j["n_max"] = options.n_max;
    j["d_max"] = options.d_max;
    j["box"] = options.box;
    j["width_grid"] = options.width_grid;
    j["violation_threshold"] = options.violation_threshold;
    j["min_eigenvalue"] = min_eigenvalue;
    auto violations_json = nlohmann::ordered_json::array();
    for (const auto& v : violations) {
        nlohmann::ordered_json entry;
        entry["seed_offset"] = v.seed_offset;
        entry["n"] = v.n;
        entry["d"] = v.d;
        entry["sigma"] = v.sigma;
        entry["min_eig"] = v.min_eig;
        entry["points"] = matrix_to_json(v.points);
        violations_json.push_back(std::move(entry));
    }
    j["violations"] = std::move(violations_json);
    j["trial_min_eigenvalues"] = trial_min_eigenvalues;
    return j.dump(2);
}

}  // namespace trigsvm
