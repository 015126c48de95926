// Independent reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Exhaustive active-set search for
//   min 0.5 a'Qa + p'a   s.t.  s'a = 0,  0 <= a <= C
// Every variable is tried at 0, at C, and free; free variables solve the
// equality-constrained stationarity system. Returns the best feasible value
// found, which is the global minimum for small problems (3^m patterns).
struct QpSolution {
    double objective = std::numeric_limits<double>::infinity();
    Eigen::VectorXd alpha;
};

inline QpSolution exhaustive_box_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& s, double C) {
    const int m = static_cast<int>(p.size());
    long patterns = 1;
    for (int i = 0; i < m; ++i) patterns *= 3;
    QpSolution best;
    std::vector<int> state(static_cast<std::size_t>(m));
    for (long code = 0; code < patterns; ++code) {
        long c = code;
        std::vector<int> free;
        Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < m; ++i) {
            state[static_cast<std::size_t>(i)] = static_cast<int>(c % 3);
            c /= 3;
            if (state[static_cast<std::size_t>(i)] == 1) a(i) = C;
            if (state[static_cast<std::size_t>(i)] == 2) free.push_back(i);
        }
        const int f = static_cast<int>(free.size());
        if (f == 0) {
            if (std::abs(s.dot(a)) > 1e-9 * std::max(1.0, C)) continue;
        } else {
            Eigen::MatrixXd K = Eigen::MatrixXd::Zero(f + 1, f + 1);
            Eigen::VectorXd rhs(f + 1);
            for (int r = 0; r < f; ++r) {
                const int i = free[static_cast<std::size_t>(r)];
                for (int q = 0; q < f; ++q) K(r, q) = Q(i, free[static_cast<std::size_t>(q)]);
                K(r, f) = s(i);
                K(f, r) = s(i);
                rhs(r) = -p(i) - Q.row(i).dot(a);
            }
            rhs(f) = -s.dot(a);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
            if (lu.rank() < f + 1) continue;
            const Eigen::VectorXd sol = lu.solve(rhs);
            bool feasible = true;
            for (int r = 0; r < f; ++r) {
                const double v = sol(r);
                if (v < -1e-10 || v > C + 1e-10) feasible = false;
                a(free[static_cast<std::size_t>(r)]) = std::clamp(v, 0.0, C);
            }
            if (!feasible) continue;
        }
        const double obj = 0.5 * a.dot(Q * a) + p.dot(a);
        if (obj < best.objective) {
            best.objective = obj;
            best.alpha = a;
        }
    }
    return best;
}

// Dual of the C-SVC in the generic form above.
inline QpSolution svc_dual(const Eigen::MatrixXd& G, const Eigen::VectorXd& y, double C) {
    const Eigen::MatrixXd Q = y.asDiagonal() * G * y.asDiagonal();
    return exhaustive_box_qp(Q, Eigen::VectorXd::Constant(y.size(), -1.0), y, C);
}

// Dual of the epsilon-SVR over the stacked (alpha, alpha*) variables.
inline QpSolution svr_dual(const Eigen::MatrixXd& G, const Eigen::VectorXd& y, double eps,
                           double C) {
    const Eigen::Index n = y.size();
    Eigen::MatrixXd Q(2 * n, 2 * n);
    Q << G, -G, -G, G;
    Eigen::VectorXd p(2 * n);
    p << Eigen::VectorXd::Constant(n, eps) - y, Eigen::VectorXd::Constant(n, eps) + y;
    Eigen::VectorXd s(2 * n);
    s << Eigen::VectorXd::Ones(n), -Eigen::VectorXd::Ones(n);
    return exhaustive_box_qp(Q, p, s, C);
}

// Reference spectrum from Eigen's LAPACK-style solver.
inline Eigen::VectorXd reference_eigenvalues(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

// Leading minors by direct LU determinant of each top-left block.
inline std::vector<double> reference_minors(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    for (Eigen::Index k = 1; k <= m.rows(); ++k) out.push_back(m.topLeftCorner(k, k).determinant());
    return out;
}

}  // namespace oracle
