#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trigsvm/dataset.hpp"
#include "trigsvm/random.hpp"
#include "trigsvm/smo.hpp"
#include "trigsvm/svr.hpp"

using namespace trigsvm;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

SolverConfig config(double C, double tol = 1e-3) {
    SolverConfig c;
    c.C = C;
    c.kkt_tol = tol;
    return c;
}

SmoProblem svr_problem(const VectorXd& y, double eps, double C) {
    const Index n = y.size();
    SmoProblem p;
    p.linear.resize(2 * n);
    p.signs.resize(2 * n);
    p.point.resize(static_cast<std::size_t>(2 * n));
    for (Index i = 0; i < n; ++i) {
        p.linear(i) = eps - y(i);
        p.linear(n + i) = eps + y(i);
        p.signs(i) = 1.0;
        p.signs(n + i) = -1.0;
        p.point[static_cast<std::size_t>(i)] = i;
        p.point[static_cast<std::size_t>(n + i)] = i;
    }
    p.upper = C;
    return p;
}

VectorXd full_beta(const SvrModel& m, Index n) {
    VectorXd beta = VectorXd::Zero(n);
    for (Index k = 0; k < m.sv_count(); ++k) beta(m.support_indices[static_cast<std::size_t>(k)]) = m.dual_coef(k);
    return beta;
}

}  // namespace

TEST_CASE("constant targets give a flat model") {
    MatrixXd X(6, 1);
    X << 0, 1, 2, 3, 4, 5;
    const VectorXd y = VectorXd::Constant(6, 2.5);
    const auto model = fit_svr(X, y, KernelSpec::trig(1.0), 0.1, config(10.0));
    CHECK(model.sv_count() == 0);
    CHECK(model.dual_coef.size() == 0);
    CHECK(std::abs(model.bias - 2.5) <= 0.1);
    for (Index i = 0; i < 6; ++i) CHECK(std::abs(predict_svr(model, X.row(i).transpose()) - 2.5) <= 0.1);
    VectorXd probe(1);
    probe << 17.0;
    CHECK(predict_svr(model, probe) == model.bias);
}

TEST_CASE("two points with zero epsilon are interpolated") {
    MatrixXd X(2, 1);
    X << 0.0, 1.0;
    VectorXd y(2);
    y << 0.0, 1.0;
    const auto model = fit_svr(X, y, KernelSpec::trig(1.0), 0.0, config(1e6, 1e-10));
    CHECK(std::abs(predict_svr(model, X.row(0).transpose())) <= 1e-6);
    CHECK(std::abs(predict_svr(model, X.row(1).transpose()) - 1.0) <= 1e-6);

    // 2x2 system with sum(beta) = 0: beta = (-t, t), t = 1 / (2 (1 - K12)), b = 0.5
    const double k12 = std::sin(std::numbers::pi / 3);
    const double t = 1.0 / (2.0 * (1.0 - k12));
    const VectorXd beta = full_beta(model, 2);
    CHECK(std::abs(beta(0) + t) <= 1e-6);
    CHECK(std::abs(beta(1) - t) <= 1e-6);
    CHECK(std::abs(model.bias - 0.5) <= 1e-6);
}

TEST_CASE("small noiseless problems approach interpolation") {
    SplitMix64 rng(41);
    for (int t = 0; t < 20; ++t) {
        const Index n = 2 + static_cast<Index>(rng.below(4));
        MatrixXd X(n, 2);
        for (Index i = 0; i < X.size(); ++i) X(i) = rng.uniform(-1.0, 1.0);
        VectorXd y(n);
        for (Index i = 0; i < n; ++i) y(i) = std::sin(3.0 * X(i, 0)) + X(i, 1);
        const auto spec = KernelSpec::gaussian(0.5);
        const auto model = fit_svr(X, y, spec, 0.0, config(1e6, 1e-9));
        CHECK((predict_svr_rows(model, X) - y).cwiseAbs().maxCoeff() <= 1e-4);
    }
}

TEST_CASE("SVR matches the exhaustive oracle and keeps tube structure") {
    SplitMix64 rng(42);
    int checked = 0;
    while (checked < 25) {
        const Index n = 2 + static_cast<Index>(rng.below(4));
        MatrixXd X(n, 1);
        VectorXd y(n);
        for (Index i = 0; i < n; ++i) {
            X(i, 0) = rng.uniform(0.0, 3.0);
            y(i) = std::sin(X(i, 0)) + 0.2 * rng.normal();
        }
        const double eps = 0.05 + 0.1 * rng.uniform();
        const double C = rng.below(2) == 0 ? 1.0 : 10.0;
        const auto spec = rng.below(2) == 0 ? KernelSpec::trig(2.0) : KernelSpec::gaussian(0.8);
        const auto model = fit_svr(X, y, spec, eps, config(C, 1e-9));
        MatrixXd G = gram(spec, X).values();
        G.diagonal().array() += model.jitter;

        const VectorXd beta = full_beta(model, n);
        const VectorXd a = beta.cwiseMax(0.0);
        const VectorXd a_star = (-beta).cwiseMax(0.0);
        CAPTURE(checked);
        // Global optimality is only claimed for PSD Grams.
        if (oracle::reference_eigenvalues(G)(0) >= -1e-12) {
            const auto best = oracle::svr_dual(G, y, eps, C);
            CHECK(std::abs(svr_dual_objective(a, a_star, y, eps, G) - best.objective) <= 1e-6);
            ++checked;
        }
        CHECK(std::abs(beta.sum()) <= 1e-8);
        CHECK(beta.cwiseAbs().maxCoeff() <= C);

        const VectorXd f = G * beta + VectorXd::Constant(n, model.bias);
        for (Index i = 0; i < n; ++i) {
            const double r = std::abs(y(i) - f(i));
            if (beta(i) == 0.0) CHECK(r <= eps + 1e-6);
            else if (std::abs(beta(i)) < C) CHECK(std::abs(r - eps) <= 1e-6);
            else CHECK(r >= eps - 1e-6);
        }

        // Raw solver output: never both multipliers of one point active.
        KernelRows rows(gram(spec, X).values() + model.jitter * MatrixXd::Identity(n, n));
        const auto raw = solve_smo(svr_problem(y, eps, C), rows, 1e-9, 1000000);
        for (Index i = 0; i < n; ++i) CHECK(raw.alpha(i) * raw.alpha(n + i) <= 1e-10);
    }
}

TEST_CASE("mirrored data gives mirrored predictions") {
    MatrixXd X(7, 1);
    VectorXd y(7);
    for (Index i = 0; i < 7; ++i) {
        X(i, 0) = 0.5 * static_cast<double>(i) + 0.1;
        y(i) = std::cos(X(i, 0));
    }
    const auto spec = KernelSpec::mixed(1.0, 0.5);
    const auto a = fit_svr(X, y, spec, 0.05, config(10.0, 1e-10));
    const auto b = fit_svr(-X, y, spec, 0.05, config(10.0, 1e-10));
    for (int k = 0; k <= 40; ++k) {
        VectorXd p(1);
        p << 0.1 * k;
        CHECK(std::abs(predict_svr(a, p) - predict_svr(b, -p)) <= 1e-6);
    }
}

TEST_CASE("rmse and validation") {
    SvrModel flat;
    flat.support_vectors.resize(0, 1);
    flat.dual_coef.resize(0);
    flat.bias = 0.0;
    MatrixXd X(2, 1);
    X << 0.0, 1.0;
    VectorXd ref(2);
    ref << 1.0, -1.0;
    CHECK(svr_rmse(flat, X, ref) == 1.0);
    CHECK(svr_rmse(flat, X, VectorXd::Zero(2)) == 0.0);
    try {
        svr_rmse(flat, MatrixXd(0, 1), VectorXd(0));
        FAIL("expected empty input");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::empty_input);
    }
    CHECK_THROWS_AS(fit_svr(X, ref, KernelSpec::trig(1.0), -0.1, config(1.0)), Error);
    CHECK_THROWS_AS(fit_svr(X, VectorXd::Zero(3), KernelSpec::trig(1.0), 0.1, config(1.0)), Error);
    VectorXd nan_target = ref;
    nan_target(0) = std::nan("");
    CHECK_THROWS_AS(fit_svr(X, nan_target, KernelSpec::trig(1.0), 0.1, config(1.0)), Error);
    CHECK_THROWS_AS(predict_svr(flat, VectorXd::Zero(2)), Error);
}

TEST_CASE("damped sine demo reaches the error target") {
    const auto sample = gen_svr_sine(200, 42, 0.1);
    const auto data = sample.as_dataset();
    const auto model = fit_svr(data.features, data.target, KernelSpec::mixed(0.5, 0.5), 0.1, config(10.0));
    CHECK(svr_rmse(model, data.features, sample.y_true) <= 0.15);
}
