#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include <Eigen/Dense>

#include "trigsvm/error.hpp"

namespace trigsvm {

using Index = Eigen::Index;

namespace kernels {

/// (1 + x.y)^degree
struct Polynomial {
    int degree;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};
/// exp(-|x-y|^2 / (2 sigma^2))
struct Gaussian {
    double sigma;

    friend bool operator==(const Gaussian&, const Gaussian&) = default;
};
/// exp(-gamma |x-y|^2); same family as Gaussian with gamma = 1/(2 sigma^2), kept separate.
struct Rbf {
    double gamma;

    friend bool operator==(const Rbf&, const Rbf&) = default;
};
/// tanh(alpha + beta x.y)
struct Sigmoid {
    double alpha;
    double beta;

    friend bool operator==(const Sigmoid&, const Sigmoid&) = default;
};
/// sin(pi / (2 + sigma |x-y|^2))
struct Trig {
    double sigma;

    friend bool operator==(const Trig&, const Trig&) = default;
};
/// beta * Trig(sigma) + (1 - beta) * Gaussian(sigma)
struct Mixed {
    double sigma;
    double beta;

    friend bool operator==(const Mixed&, const Mixed&) = default;
};

}  // namespace kernels

enum class KernelFamily { polynomial, gaussian, rbf, sigmoid, trig, mixed };

std::string_view to_string(KernelFamily family) noexcept;
/// Accepts the long names and the short CLI spellings ("poly").
KernelFamily parse_kernel_family(std::string_view name);

/// Immutable description of one kernel and its parameters. Construction
/// validates the parameters, so a live KernelSpec is always evaluable.
class KernelSpec {
public:
    using Variant = std::variant<kernels::Polynomial, kernels::Gaussian, kernels::Rbf,
                                 kernels::Sigmoid, kernels::Trig, kernels::Mixed>;

    static KernelSpec polynomial(int degree);
    static KernelSpec gaussian(double sigma);
    static KernelSpec rbf(double gamma);
    static KernelSpec sigmoid(double alpha, double beta);
    static KernelSpec trig(double sigma);
    static KernelSpec mixed(double sigma, double beta);

    const Variant& variant() const noexcept { return variant_; }
    KernelFamily family() const noexcept { return static_cast<KernelFamily>(variant_.index()); }

    /// True for kernels that only depend on x - y (and so have a unit diagonal).
    bool is_radial() const noexcept;

    /// Copy with the width-like parameter replaced: sigma for
    /// gaussian/trig/mixed, gamma for rbf, the slope for sigmoid. Polynomial
    /// specs are returned unchanged.
    KernelSpec with_width(double width) const;

    /// Human-readable form, e.g. "trig(sigma=1)".
    std::string describe() const;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

private:
    explicit KernelSpec(Variant v) : variant_(v) {}
    Variant variant_;
};

namespace detail {

inline void require_positive_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorKind::invalid_parameter, "sigma must be positive and finite");
    }
}

template <typename Scalar>
Scalar trig_of_squared_distance(Scalar squared_distance, Scalar sigma) {
    return std::sin(std::numbers::pi_v<Scalar> / (Scalar(2) + sigma * squared_distance));
}

}  // namespace detail

/// pi / (2 + sigma x^2). Lies in (0, pi/2] and peaks at x = 0.
template <typename Scalar>
Scalar eval_h(Scalar x, Scalar sigma) {
    static_assert(std::is_floating_point_v<Scalar>);
    detail::require_positive_sigma(static_cast<double>(sigma));
    return std::numbers::pi_v<Scalar> / (Scalar(2) + sigma * x * x);
}

/// sin(h(x)). Even, bounded by psi(0) = 1, positive and non-increasing on x >= 0.
template <typename Scalar>
Scalar eval_psi(Scalar x, Scalar sigma) {
    return std::sin(eval_h(x, sigma));
}

/// Evaluates the kernel on two vectors. Symmetric bit-for-bit: the distance
/// is accumulated over elementwise differences and the dot product over
/// elementwise products, both invariant under swapping arguments.
template <typename DerivedX, typename DerivedY>
double eval_kernel(const KernelSpec& spec, const Eigen::MatrixBase<DerivedX>& x,
                   const Eigen::MatrixBase<DerivedY>& y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::shape, "kernel arguments differ in dimension (" +
                                          std::to_string(x.size()) + " vs " +
                                          std::to_string(y.size()) + ")");
    }
    if (x.size() == 0) {
        throw Error(ErrorKind::shape, "kernel arguments must have dimension >= 1");
    }
    const auto squared_distance = [&] { return (x.derived() - y.derived()).squaredNorm(); };
    const auto dot = [&] { return x.derived().dot(y.derived()); };

    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, kernels::Polynomial>) {
                return std::pow(1.0 + dot(), k.degree);
            } else if constexpr (std::is_same_v<K, kernels::Gaussian>) {
                return std::exp(-squared_distance() / (2.0 * k.sigma * k.sigma));
            } else if constexpr (std::is_same_v<K, kernels::Rbf>) {
                return std::exp(-k.gamma * squared_distance());
            } else if constexpr (std::is_same_v<K, kernels::Sigmoid>) {
                return std::tanh(k.alpha + k.beta * dot());
            } else if constexpr (std::is_same_v<K, kernels::Trig>) {
                return detail::trig_of_squared_distance(squared_distance(), k.sigma);
            } else {
                const double d2 = squared_distance();
                const double trig = detail::trig_of_squared_distance(d2, k.sigma);
                const double gauss = std::exp(-d2 / (2.0 * k.sigma * k.sigma));
                // beta + (1 - beta) rounds to exactly 1, so the diagonal stays 1.
                return k.beta * trig + (1.0 - k.beta) * gauss;
            }
        },
        spec.variant());
}

/// Symmetric Gram matrix over the rows of a sample matrix.
class GramMatrix {
public:
    GramMatrix(KernelSpec spec, Eigen::MatrixXd values) : spec_(spec), values_(std::move(values)) {}

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const KernelSpec& spec() const noexcept { return spec_; }
    Index size() const noexcept { return values_.rows(); }
    double operator()(Index i, Index j) const { return values_(i, j); }

private:
    KernelSpec spec_;
    Eigen::MatrixXd values_;
};

/// Gram over the rows of `samples`; the upper triangle is computed and mirrored.
GramMatrix gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& samples);

/// Kernel values between every row of `left` and every row of `right`.
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& left,
                           const Eigen::Ref<const Eigen::MatrixXd>& right);

}  // namespace trigsvm
