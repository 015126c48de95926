#include "trigsvm/kernel.hpp"

#include <sstream>

namespace trigsvm {

std::string_view to_string(KernelFamily family) noexcept {
    switch (family) {
        case KernelFamily::polynomial: return "polynomial";
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::rbf: return "rbf";
        case KernelFamily::sigmoid: return "sigmoid";
        case KernelFamily::trig: return "trig";
        case KernelFamily::mixed: return "mixed";
    }
    return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "poly" || name == "polynomial") return KernelFamily::polynomial;
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "rbf") return KernelFamily::rbf;
    if (name == "sigmoid") return KernelFamily::sigmoid;
    if (name == "trig") return KernelFamily::trig;
    if (name == "mixed") return KernelFamily::mixed;
    throw Error(ErrorKind::invalid_parameter, "unknown kernel '" + std::string(name) + "'");
}

KernelSpec KernelSpec::polynomial(int degree) {
    if (degree < 1) throw Error(ErrorKind::invalid_parameter, "polynomial degree must be >= 1");
    return KernelSpec(kernels::Polynomial{degree});
}

KernelSpec KernelSpec::gaussian(double sigma) {
    detail::require_positive_sigma(sigma);
    return KernelSpec(kernels::Gaussian{sigma});
}

KernelSpec KernelSpec::rbf(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error(ErrorKind::invalid_parameter, "gamma must be positive and finite");
    }
    return KernelSpec(kernels::Rbf{gamma});
}

KernelSpec KernelSpec::sigmoid(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw Error(ErrorKind::invalid_parameter, "sigmoid parameters must be finite");
    }
    return KernelSpec(kernels::Sigmoid{alpha, beta});
}

KernelSpec KernelSpec::trig(double sigma) {
    detail::require_positive_sigma(sigma);
    return KernelSpec(kernels::Trig{sigma});
}

KernelSpec KernelSpec::mixed(double sigma, double beta) {
    detail::require_positive_sigma(sigma);
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw Error(ErrorKind::invalid_parameter, "mixed kernel weight beta must lie in [0, 1]");
    }
    return KernelSpec(kernels::Mixed{sigma, beta});
}

bool KernelSpec::is_radial() const noexcept {
    switch (family()) {
        case KernelFamily::gaussian:
        case KernelFamily::rbf:
        case KernelFamily::trig:
        case KernelFamily::mixed: return true;
        default: return false;
    }
}

KernelSpec KernelSpec::with_width(double width) const {
    return std::visit(
        [&](const auto& k) -> KernelSpec {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, kernels::Polynomial>) {
                return *this;
            } else if constexpr (std::is_same_v<K, kernels::Gaussian>) {
                return gaussian(width);
            } else if constexpr (std::is_same_v<K, kernels::Rbf>) {
                return rbf(width);
            } else if constexpr (std::is_same_v<K, kernels::Sigmoid>) {
                return sigmoid(k.alpha, width);
            } else if constexpr (std::is_same_v<K, kernels::Trig>) {
                return trig(width);
            } else {
                return mixed(width, k.beta);
            }
        },
        variant_);
}

std::string KernelSpec::describe() const {
    std::ostringstream os;
    os << to_string(family()) << '(';
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, kernels::Polynomial>) {
                os << "p=" << k.degree;
            } else if constexpr (std::is_same_v<K, kernels::Rbf>) {
                os << "gamma=" << k.gamma;
            } else if constexpr (std::is_same_v<K, kernels::Sigmoid>) {
                os << "alpha=" << k.alpha << ", beta=" << k.beta;
            } else if constexpr (std::is_same_v<K, kernels::Mixed>) {
                os << "sigma=" << k.sigma << ", beta=" << k.beta;
            } else {
                os << "sigma=" << k.sigma;
            }
        },
        variant_);
    os << ')';
    return os.str();
}

namespace {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& samples, const char* what) {
    if (!samples.allFinite()) {
        throw Error(ErrorKind::data, std::string(what) + " contains non-finite entries");
    }
}

}  // namespace

GramMatrix gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& samples) {
    if (samples.rows() == 0) throw Error(ErrorKind::empty_input, "gram of an empty sample set");
    require_finite(samples, "sample matrix");
    const Index n = samples.rows();
    Eigen::MatrixXd values(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i <= j; ++i) {
            values(i, j) = eval_kernel(spec, samples.row(i), samples.row(j));
            values(j, i) = values(i, j);
        }
    }
    return GramMatrix(spec, std::move(values));
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& left,
                           const Eigen::Ref<const Eigen::MatrixXd>& right) {
    if (left.cols() != right.cols()) {
        throw Error(ErrorKind::shape, "cross_gram inputs differ in dimension (" +
                                          std::to_string(left.cols()) + " vs " +
                                          std::to_string(right.cols()) + ")");
    }
    Eigen::MatrixXd values(left.rows(), right.rows());
    for (Index j = 0; j < right.rows(); ++j) {
        for (Index i = 0; i < left.rows(); ++i) {
            values(i, j) = eval_kernel(spec, left.row(i), right.row(j));
        }
    }
    return values;
}

}  // namespace trigsvm
