#include "trigsvm/smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trigsvm {

void SolverConfig::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) {
        throw Error(ErrorKind::invalid_parameter, "C must be positive and finite");
    }
    if (!(kkt_tol > 0.0)) throw Error(ErrorKind::invalid_parameter, "kkt_tol must be positive");
    if (max_iter < 0) throw Error(ErrorKind::invalid_parameter, "max_iter must be positive");
}

long SolverConfig::effective_max_iter(Index variables) const {
    if (max_iter > 0) return max_iter;
    const long n = static_cast<long>(variables);
    return 10 * n * std::max(n, 1000L);
}

KernelRows::KernelRows(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& samples,
                       const SolverConfig& config)
    : spec_(spec) {
    const Index n = samples.rows();
    if (n <= config.full_gram_limit) {
        full_ = gram(spec, samples).values();
        diagonal_ = full_.diagonal();
        return;
    }
    precomputed_ = false;
    samples_ = samples;
    capacity_ = std::max<Index>(2, config.cache_rows);
    diagonal_.resize(n);
    for (Index i = 0; i < n; ++i) diagonal_(i) = eval_kernel(spec, samples.row(i), samples.row(i));
}

KernelRows::KernelRows(Eigen::MatrixXd full_gram) : full_(std::move(full_gram)) {
    diagonal_ = full_.diagonal();
}

Eigen::Ref<const Eigen::VectorXd> KernelRows::row(Index i) {
    if (precomputed_) return full_.col(i);
    if (auto it = lookup_.find(i); it != lookup_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second);
        return lru_.front().second;
    }
    if (static_cast<Index>(lru_.size()) >= capacity_) {
        lookup_.erase(lru_.back().first);
        lru_.pop_back();
    }
    Eigen::VectorXd values(samples_.rows());
    for (Index k = 0; k < samples_.rows(); ++k) {
        values(k) = eval_kernel(spec_, samples_.row(i), samples_.row(k));
    }
    lru_.emplace_front(i, std::move(values));
    lookup_[i] = lru_.begin();
    return lru_.front().second;
}

namespace {

constexpr double curvature_floor = 1e-12;

struct PairChoice {
    Index up = -1;
    Index low = -1;
    double gap = -std::numeric_limits<double>::infinity();
};

}  // namespace

SmoResult solve_smo(const SmoProblem& problem, KernelRows& rows, double tol, long max_iter) {
    const Index m = problem.signs.size();
    if (problem.linear.size() != m || static_cast<Index>(problem.point.size()) != m) {
        throw Error(ErrorKind::shape, "SMO problem arrays disagree in length");
    }
    const double C = problem.upper;
    const Eigen::VectorXd& s = problem.signs;

    SmoResult result;
    result.alpha = Eigen::VectorXd::Zero(m);
    result.gradient = problem.linear;
    Eigen::VectorXd& a = result.alpha;
    Eigen::VectorXd& g = result.gradient;

    const auto in_up = [&](Index t) { return s(t) > 0 ? a(t) < C : a(t) > 0.0; };
    const auto in_low = [&](Index t) { return s(t) > 0 ? a(t) > 0.0 : a(t) < C; };

    const auto select = [&] {
        PairChoice choice;
        double best_up = -std::numeric_limits<double>::infinity();
        double best_low = std::numeric_limits<double>::infinity();
        for (Index t = 0; t < m; ++t) {
            const double v = -s(t) * g(t);
            if (in_up(t) && v > best_up) {
                best_up = v;
                choice.up = t;
            }
            if (in_low(t) && v < best_low) {
                best_low = v;
                choice.low = t;
            }
        }
        if (choice.up >= 0 && choice.low >= 0) choice.gap = best_up - best_low;
        return choice;
    };

    long iter = 0;
    for (;;) {
        const PairChoice pair = select();
        result.gap = std::max(pair.gap, 0.0);
        if (pair.up < 0 || pair.low < 0 || pair.gap <= tol) break;
        if (iter >= max_iter) {
            throw ConvergenceError("SMO did not reach tolerance within " +
                                       std::to_string(max_iter) + " pair updates (gap " +
                                       std::to_string(pair.gap) + ")",
                                   pair.gap, iter);
        }
        ++iter;

        const Index i = pair.up;
        const Index j = pair.low;
        const Index pi = problem.point[static_cast<std::size_t>(i)];
        const Index pj = problem.point[static_cast<std::size_t>(j)];
        const auto row_i = rows.row(pi);
        const auto row_j = rows.row(pj);

        // Move a_i by +s_i t and a_j by -s_j t; this keeps s'a fixed and the
        // objective along t is -gap t + eta t^2 / 2.
        const double eta = rows.diagonal(pi) + rows.diagonal(pj) - 2.0 * row_i(pj);
        const double room_i = s(i) > 0 ? C - a(i) : a(i);
        const double room_j = s(j) > 0 ? a(j) : C - a(j);
        const double t_max = std::min(room_i, room_j);

        double t;
        if (eta > curvature_floor) {
            t = std::min(pair.gap / eta, t_max);
        } else {
            // Non-convex direction: the minimum sits on a box endpoint.
            const double at_max = -pair.gap * t_max + 0.5 * eta * t_max * t_max;
            t = at_max < 0.0 ? t_max : 0.0;
        }

        const double old_i = a(i);
        const double old_j = a(j);
        double new_i = old_i + s(i) * t;
        double new_j = old_j - s(j) * t;
        if (t == t_max) {
            if (room_i <= room_j) new_i = s(i) > 0 ? C : 0.0;
            if (room_j <= room_i) new_j = s(j) > 0 ? 0.0 : C;
        }
        new_i = std::clamp(new_i, 0.0, C);
        new_j = std::clamp(new_j, 0.0, C);
        const double delta_i = new_i - old_i;
        const double delta_j = new_j - old_j;
        if (delta_i == 0.0 && delta_j == 0.0) {
            throw ConvergenceError("SMO step stalled on pair (" + std::to_string(i) + ", " +
                                       std::to_string(j) + ")",
                                   pair.gap, iter);
        }
        a(i) = new_i;
        a(j) = new_j;

        const double wi = s(i) * delta_i;
        const double wj = s(j) * delta_j;
        for (Index t2 = 0; t2 < m; ++t2) {
            const Index p = problem.point[static_cast<std::size_t>(t2)];
            g(t2) += s(t2) * (wi * row_i(p) + wj * row_j(p));
        }
    }
    result.iterations = iter;

    // Bias: average over free variables, else the midpoint of the KKT interval.
    double free_sum = 0.0;
    Index free_count = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (Index t = 0; t < m; ++t) {
        const double v = -s(t) * g(t);
        if (a(t) > 0.0 && a(t) < C) {
            free_sum += v;
            ++free_count;
        } else if ((a(t) == 0.0) == (s(t) > 0)) {
            lower = std::max(lower, v);
        } else {
            upper = std::min(upper, v);
        }
    }
    if (free_count > 0) {
        result.bias = free_sum / static_cast<double>(free_count);
    } else if (std::isfinite(lower) && std::isfinite(upper)) {
        result.bias = 0.5 * (lower + upper);
    } else if (std::isfinite(lower)) {
        result.bias = lower;
    } else if (std::isfinite(upper)) {
        result.bias = upper;
    }
    return result;
}

}  // namespace trigsvm
