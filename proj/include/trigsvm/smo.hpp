#pragma once

#include <cstdint>
#include <list>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "trigsvm/kernel.hpp"

namespace trigsvm {

struct SolverConfig {
    double C = 1.0;
    double kkt_tol = 1e-3;
    /// Pair updates before giving up; 0 selects 10 * n * max(n, 1000).
    long max_iter = 0;
    std::uint64_t seed = 42;
    /// Above this many samples kernel rows are computed on demand.
    Index full_gram_limit = 10000;
    /// Rows kept by the on-demand cache (at least 2 are always kept).
    Index cache_rows = 512;

    void validate() const;
    long effective_max_iter(Index variables) const;
};

/// Source of kernel rows for the solver: either a precomputed Gram or an
/// LRU cache over on-demand rows. A reference returned by row() stays valid
/// across the next call to row().
class KernelRows {
public:
    KernelRows(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& samples,
               const SolverConfig& config);
    /// Uses an already built (possibly regularized) Gram.
    explicit KernelRows(Eigen::MatrixXd full_gram);

    Index size() const noexcept { return diagonal_.size(); }
    bool is_precomputed() const noexcept { return precomputed_; }
    const Eigen::MatrixXd& precomputed() const noexcept { return full_; }
    double diagonal(Index i) const { return diagonal_(i); }

    Eigen::Ref<const Eigen::VectorXd> row(Index i);

private:
    bool precomputed_ = true;
    Eigen::MatrixXd full_;
    Eigen::VectorXd diagonal_;

    // on-demand mode
    KernelSpec spec_ = KernelSpec::trig(1.0);
    Eigen::MatrixXd samples_;
    Index capacity_ = 2;
    std::list<std::pair<Index, Eigen::VectorXd>> lru_;
    std::unordered_map<Index, std::list<std::pair<Index, Eigen::VectorXd>>::iterator> lookup_;
};

/// min 1/2 a'Qa + p'a  s.t.  s'a = 0, 0 <= a <= C,  with Q_tu = s_t s_u K(point_t, point_u).
/// C-SVC uses one variable per sample (s = labels, p = -1); epsilon-SVR uses
/// two per sample (s = +1/-1, p = eps -/+ target).
struct SmoProblem {
    Eigen::VectorXd linear;
    Eigen::VectorXd signs;
    std::vector<Index> point;
    double upper = 1.0;
};

struct SmoResult {
    Eigen::VectorXd alpha;
    Eigen::VectorXd gradient;
    /// b in f(x) = sum_t s_t a_t K(x_t, x) + b.
    double bias = 0.0;
    long iterations = 0;
    /// Final maximal-violating-pair gap.
    double gap = 0.0;
};

/// SMO with maximal-violating-pair selection, lowest index on ties.
SmoResult solve_smo(const SmoProblem& problem, KernelRows& rows, double tol, long max_iter);

}  // namespace trigsvm
