#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "trigsvm/model_selection.hpp"
#include "trigsvm/gram_audit.hpp"
#include "trigsvm/random.hpp"
#include "trigsvm/svc.hpp"

using namespace trigsvm;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double sin_pi_3 = 0.866025403784438647;
constexpr double two_point_alpha = 7.46410161513775459;  // 1 / (1 - sin(pi/3))

struct Problem {
    MatrixXd X;
    VectorXd y;
};

Problem two_point() {
    Problem p{MatrixXd(2, 1), VectorXd(2)};
    p.X << 0.0, 1.0;
    p.y << 1.0, -1.0;
    return p;
}

SolverConfig with_C(double C, double tol = 1e-3) {
    SolverConfig c;
    c.C = C;
    c.kkt_tol = tol;
    return c;
}

Problem random_problem(SplitMix64& rng, Index n, Index d) {
    Problem p{MatrixXd(n, d), VectorXd(n)};
    for (Index i = 0; i < p.X.size(); ++i) p.X(i) = rng.uniform(-1.0, 1.0);
    for (Index i = 0; i < n; ++i) p.y(i) = rng.uniform() < 0.5 ? 1.0 : -1.0;
    p.y(0) = 1.0;
    p.y(1) = -1.0;
    return p;
}

Dataset as_dataset(const Problem& p) {
    Dataset d;
    d.features = p.X;
    d.target = p.y;
    return d;
}

}  // namespace

TEST_CASE("two-point analytic solution") {
    const auto p = two_point();
    const auto spec = KernelSpec::trig(1.0);
    const auto model = fit_svc(p.X, p.y, spec, with_C(10.0, 1e-10));
    REQUIRE(model.sv_count() == 2);
    const VectorXd alpha = model.full_alpha(2);
    CHECK(std::abs(alpha(0) - two_point_alpha) < 1e-6);
    CHECK(std::abs(alpha(1) - two_point_alpha) < 1e-6);
    CHECK(std::abs(model.bias) < 1e-8);
    CHECK(model.jitter == 0.0);

    const MatrixXd G = gram(spec, p.X).values();
    CHECK(std::abs(dual_objective(alpha, p.y, G) + two_point_alpha) < 1e-6);
    CHECK(std::abs(decision_function(model, p.X.row(0).transpose()) - 1.0) < 1e-6);
    CHECK(std::abs(decision_function(model, p.X.row(1).transpose()) + 1.0) < 1e-6);
    VectorXd mid(1);
    mid << 0.5;
    CHECK(std::abs(decision_function(model, mid)) < 1e-8);
    CHECK(kkt_violation(model, p.X, p.y, G) < 1e-6);

    const auto stats = count_stats(model, as_dataset(p), as_dataset(p));
    CHECK(stats.sv_count == 2);
    CHECK(stats.train_errors == 0);
    CHECK(stats.test_errors == 0);
    Dataset empty;
    empty.features = MatrixXd(0, 1);
    empty.target = VectorXd(0);
    CHECK(count_stats(model, as_dataset(p), empty).test_errors == 0);
}

TEST_CASE("two-point problem with a binding box") {
    const auto p = two_point();
    const auto spec = KernelSpec::trig(1.0);
    const auto model = fit_svc(p.X, p.y, spec, with_C(1.0));
    const VectorXd alpha = model.full_alpha(2);
    CHECK(alpha(0) == 1.0);
    CHECK(alpha(1) == 1.0);
    CHECK(std::abs(model.bias) < 1e-12);
    const double f1 = decision_function(model, p.X.row(0).transpose());
    CHECK(std::abs(f1 - (1.0 - sin_pi_3)) < 1e-12);
    // Both multipliers sit at C with margin below one: slack, not a violation.
    const MatrixXd G = gram(spec, p.X).values();
    CHECK(kkt_violation(model, p.X, p.y, G) == 0.0);
    CHECK(std::abs((1.0 - p.y(0) * f1) - sin_pi_3) < 1e-12);

    SvcModel zero = model;
    zero.support_indices.clear();
    zero.support_vectors.resize(0, 1);
    zero.dual_coef.resize(0);
    zero.bias = 0.0;
    CHECK(kkt_violation(zero, p.X, p.y, G) == 1.0);
    zero.bias = -0.25;
    CHECK(decision_function(zero, p.X.row(0).transpose()) == -0.25);
}

TEST_CASE("dual objective and prediction rules") {
    MatrixXd G(2, 2);
    G << 1.0, 0.3, 0.3, 1.0;
    VectorXd y(2);
    y << 1.0, -1.0;
    CHECK(dual_objective(VectorXd::Zero(2), y, G) == 0.0);
    VectorXd e1(2);
    e1 << 1.0, 0.0;
    CHECK(dual_objective(e1, y, G) == -0.5);
    CHECK_THROWS_AS(dual_objective(VectorXd::Zero(3), y, G), Error);

    CHECK(label_of(2.5) == 1);
    CHECK(label_of(-0.1) == -1);
    CHECK(label_of(0.0) == 1);
    CHECK(label_of(-0.0) == 1);

    const auto p = two_point();
    const auto model = fit_svc(p.X, p.y, KernelSpec::trig(1.0), with_C(10.0));
    CHECK_THROWS_AS(decision_function(model, VectorXd::Zero(2)), Error);
    CHECK(predict_rows(model, p.X) == p.y);
}

TEST_CASE("input validation") {
    MatrixXd X(3, 1);
    X << 0, 1, 2;
    VectorXd same(3);
    same << 1, 1, 1;
    try {
        fit_svc(X, same, KernelSpec::trig(1.0), {});
        FAIL("expected degenerate data");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_data);
    }
    VectorXd bad(3);
    bad << 1, -1, 0;
    CHECK_THROWS_AS(fit_svc(X, bad, KernelSpec::trig(1.0), {}), Error);
    CHECK_THROWS_AS(fit_svc(X, VectorXd::Ones(2), KernelSpec::trig(1.0), {}), Error);
    SolverConfig negative;
    negative.C = -1.0;
    CHECK_THROWS_AS(fit_svc(X, bad, KernelSpec::trig(1.0), negative), Error);
    SolverConfig tol;
    tol.kkt_tol = 0.0;
    CHECK_THROWS_AS(SolverConfig(tol).validate(), Error);
    CHECK(SolverConfig{}.effective_max_iter(10) == 10L * 10 * 1000);
    CHECK(SolverConfig{}.effective_max_iter(2000) == 10L * 2000 * 2000);
}

TEST_CASE("iteration cap raises a convergence error with the current gap") {
    SplitMix64 rng(31);
    const auto p = random_problem(rng, 40, 2);
    SolverConfig config = with_C(10.0, 1e-9);
    config.max_iter = 2;
    try {
        fit_svc(p.X, p.y, KernelSpec::gaussian(0.5), config);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(e.kind() == ErrorKind::convergence);
        CHECK(e.violation() > 1e-9);
        CHECK(e.iterations() == 2);
    }
}

TEST_CASE("XOR is separated by the trig kernel") {
    MatrixXd X(4, 2);
    X << 0, 0, 1, 1, 0, 1, 1, 0;
    VectorXd y(4);
    y << 1, 1, -1, -1;
    const auto spec = KernelSpec::trig(4.0);
    const auto model = fit_svc(X, y, spec, with_C(100.0));
    CHECK(predict_rows(model, X) == y);
    const MatrixXd G = gram(spec, X).values();
    CHECK(oracle::reference_eigenvalues(G)(0) > 0.0);
    const auto best = oracle::svc_dual(G, y, 100.0);
    CHECK(std::abs(dual_objective(model.full_alpha(4), y, G) - best.objective) < 1e-3);
}

TEST_CASE("XOR Gram at unit width is indefinite") {
    MatrixXd X(4, 2);
    X << 0, 0, 1, 1, 0, 1, 1, 0;
    const MatrixXd G = gram(KernelSpec::trig(1.0), X).values();
    // The label vector (1, 1, -1, -1) is an eigenvector.
    const double expected = 1.0 + std::sin(std::numbers::pi / 4) - 2.0 * std::sin(std::numbers::pi / 3);
    CHECK(expected < 0.0);
    CHECK(oracle::reference_eigenvalues(G)(0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(*eigen_audit(G, 1e-10).min_eigenvalue < 0.0);
}

TEST_CASE("SMO matches an exhaustive active-set oracle") {
    // A global optimum is only guaranteed for PSD Grams; indefinite draws
    // are checked for feasibility and redrawn.
    SplitMix64 rng(32);
    int checked = 0;
    int indefinite = 0;
    while (checked < 50) {
        const Index n = 2 + static_cast<Index>(rng.below(7));
        const Index d = 1 + static_cast<Index>(rng.below(3));
        const auto p = random_problem(rng, n, d);
        const double C = rng.below(2) == 0 ? 1.0 : 10.0;
        const double w = std::exp2(rng.uniform(-1.0, 2.0));
        const KernelSpec spec = rng.below(2) == 0 ? KernelSpec::trig(w) : KernelSpec::gaussian(w);
        auto config = with_C(C, 1e-9);
        config.max_iter = 10'000'000;
        const auto model = fit_svc(p.X, p.y, spec, config);
        MatrixXd G = gram(spec, p.X).values();
        G.diagonal().array() += model.jitter;

        const VectorXd alpha = model.full_alpha(n);
        CAPTURE(checked);
        CHECK(kkt_violation(model, p.X, p.y, G) <= 1e-3);
        CHECK(std::abs(alpha.dot(p.y)) <= 1e-8);
        CHECK(alpha.minCoeff() >= 0.0);
        CHECK(alpha.maxCoeff() <= C);
        for (Index k = 0; k < model.sv_count(); ++k) CHECK(std::abs(model.dual_coef(k)) > 0.0);
        if (oracle::reference_eigenvalues(G)(0) < -1e-12) {
            ++indefinite;
            continue;
        }
        const auto best = oracle::svc_dual(G, p.y, C);
        CHECK(std::abs(dual_objective(alpha, p.y, G) - best.objective) <= 1e-6);
        ++checked;
    }
    MESSAGE("indefinite draws skipped: " << indefinite);
}

TEST_CASE("default tolerance keeps the equality constraint and free-vector margins") {
    SplitMix64 rng(33);
    for (int t = 0; t < 30; ++t) {
        const auto p = random_problem(rng, 30, 2);
        const auto spec = KernelSpec::trig(2.0);
        const auto model = fit_svc(p.X, p.y, spec, with_C(5.0));
        const VectorXd alpha = model.full_alpha(30);
        CHECK(std::abs(alpha.dot(p.y)) <= 1e-8);
        MatrixXd G = gram(spec, p.X).values();
        G.diagonal().array() += model.jitter;
        CHECK(kkt_violation(model, p.X, p.y, G) <= 1e-3);
        for (Index i = 0; i < 30; ++i) {
            if (alpha(i) > 0.0 && alpha(i) < 5.0) {
                const double margin = p.y(i) * (G.row(i).dot(alpha.cwiseProduct(p.y)) + model.bias);
                CHECK(std::abs(margin - 1.0) <= 1e-3);
            }
        }
    }
}

TEST_CASE("flipping labels negates the decision function") {
    SplitMix64 rng(34);
    for (int t = 0; t < 10; ++t) {
        const auto p = random_problem(rng, 25, 2);
        const auto spec = KernelSpec::mixed(1.0, 0.5);
        const auto a = fit_svc(p.X, p.y, spec, with_C(4.0, 1e-10));
        const auto b = fit_svc(p.X, -p.y, spec, with_C(4.0, 1e-10));
        CHECK(a.support_indices == b.support_indices);
        for (int k = 0; k < 50; ++k) {
            VectorXd probe(2);
            probe << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
            CHECK(std::abs(decision_function(a, probe) + decision_function(b, probe)) <= 1e-9);
        }
    }
}

TEST_CASE("duplicating every point with C halved leaves predictions unchanged") {
    SplitMix64 rng(35);
    for (int t = 0; t < 5; ++t) {
        const auto p = random_problem(rng, 16, 2);
        const auto spec = KernelSpec::gaussian(0.7);
        const double C = 2.0;
        const auto single = fit_svc(p.X, p.y, spec, with_C(C, 1e-10));
        MatrixXd X2(32, 2);
        X2 << p.X, p.X;
        VectorXd y2(32);
        y2 << p.y, p.y;
        const auto doubled = fit_svc(X2, y2, spec, with_C(C / 2.0, 1e-10));
        for (int k = 0; k < 100; ++k) {
            VectorXd probe(2);
            probe << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
            CHECK(std::abs(decision_function(single, probe) - decision_function(doubled, probe)) <= 1e-6);
        }
    }
}

TEST_CASE("row-cache mode reproduces the precomputed solution") {
    SplitMix64 rng(36);
    const auto p = random_problem(rng, 60, 3);
    const auto spec = KernelSpec::trig(1.5);
    SolverConfig full = with_C(3.0, 1e-8);
    SolverConfig cached = full;
    cached.full_gram_limit = 0;
    cached.cache_rows = 4;
    const auto a = fit_svc(p.X, p.y, spec, full);
    const auto b = fit_svc(p.X, p.y, spec, cached);
    CHECK(a.support_indices == b.support_indices);
    CHECK((a.dual_coef - b.dual_coef).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(a.bias - b.bias) <= 1e-12);
}

TEST_CASE("indefinite trig Grams still give feasible KKT points") {
    SurveyOptions options;
    options.trials = 300;
    options.width_grid = {64.0, 128.0, 256.0, 512.0, 1024.0};
    const auto survey = randomized_psd_survey(KernelSpec::trig(1.0), options);
    int fitted = 0;
    for (const auto& v : survey.violations) {
        if (v.n < 4) continue;
        VectorXd y(v.n);
        for (Index i = 0; i < v.n; ++i) y(i) = i % 2 == 0 ? 1.0 : -1.0;
        const auto spec = KernelSpec::trig(v.sigma);
        const auto model = fit_svc(v.points, y, spec, with_C(10.0));
        MatrixXd G = gram(spec, v.points).values();
        G.diagonal().array() += model.jitter;
        const VectorXd alpha = model.full_alpha(v.n);
        CHECK(std::abs(alpha.dot(y)) <= 1e-8);
        CHECK(alpha.maxCoeff() <= 10.0);
        CHECK(kkt_violation(model, v.points, y, G) <= 1e-3);
        if (++fitted == 20) break;
    }
    CHECK(fitted > 0);
    MatrixXd X(2, 1);
    X << 0.0, 1.0;
    VectorXd y(2);
    y << 1.0, -1.0;
    CHECK_THROWS_AS(fit_svc_precomputed(X, y, KernelSpec::trig(1.0), MatrixXd::Identity(3, 3), {}), Error);
}
