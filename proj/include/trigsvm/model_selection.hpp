#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trigsvm/dataset.hpp"
#include "trigsvm/kernel.hpp"
#include "trigsvm/smo.hpp"

namespace trigsvm {

/// {2^-5, 2^-4, ..., 2^10}, ascending.
std::vector<double> log2_grid();

struct ClassDistance {
    double label;
    double min_pairwise_distance;
    double max_pairwise_distance;
    Index sample_count;
};

/// Per class, ascending by label.
struct DistanceStats {
    std::vector<ClassDistance> classes;

    double max_distance() const;
};

/// Exact pairwise extremes per class; classes larger than `exact_limit` are
/// subsampled (seeded) down to that many points. A singleton class reports (0, 0).
DistanceStats class_distance_stats(const Dataset& data, Index exact_limit = 20000,
                                   std::uint64_t seed = 42);

enum class DataRegime { compact, sparse };
std::string_view to_string(DataRegime regime) noexcept;

struct SigmaRecommendation {
    DataRegime regime;
    std::vector<double> sigma_subgrid;
};

inline constexpr double default_compact_threshold = 10.0;

/// Compact (max class diameter <= threshold) favours large widths, so the
/// upper half of the log2 grid; sparse data gets the lower half.
SigmaRecommendation recommend_sigma_range(const DistanceStats& stats,
                                          double threshold = default_compact_threshold);

struct GridCell {
    double C;
    double sigma;
    double mean_cv_accuracy;
    double fold_std;
    double sv_count_mean;
    /// False when some fold failed to converge; such cells never win.
    bool converged = true;
};

struct GridProtocol {
    int folds;
    std::uint64_t seed;
    KernelSpec family;
};

struct GridReport {
    std::vector<GridCell> cells;
    std::size_t best = 0;
    GridProtocol protocol;

    const GridCell& best_cell() const { return cells.at(best); }
    std::string to_json() const;
    std::string to_csv() const;
};

/// Stratified k-fold CV over every (C, width) cell, C-major. The best cell
/// maximises mean accuracy; ties go to smaller C, then smaller width.
/// `family` supplies the kernel family and any non-width parameters.
GridReport grid_search(const Dataset& data, const KernelSpec& family,
                       const std::vector<double>& C_grid, const std::vector<double>& sigma_grid,
                       int folds, std::uint64_t seed, const SolverConfig& base_config = {});

struct SvrWidthScore {
    double width;
    double cv_rmse;
};

struct SvrWidthSelection {
    std::vector<SvrWidthScore> scores;
    double best_width;
};

/// Picks the kernel width minimising k-fold CV RMSE of an epsilon-SVR on
/// real-valued data (random folds; ties go to the smaller width).
SvrWidthSelection tune_svr_width(const Dataset& data, const KernelSpec& family,
                                 const std::vector<double>& width_grid, double epsilon,
                                 int folds, std::uint64_t seed, const SolverConfig& config);

/// fold id (0..k-1) per sample, stratified by label.
std::vector<int> stratified_folds(const Dataset& data, int folds, std::uint64_t seed);

struct HoldoutSplit {
    Dataset train;
    Dataset test;
    std::vector<Index> train_indices;
    std::vector<Index> test_indices;
};

/// |train| = round(fraction * n), stratified for label data (largest
/// remainder across classes). Index lists are sorted ascending.
HoldoutSplit holdout_split(const Dataset& data, double train_fraction, std::uint64_t seed);

double accuracy(const Eigen::Ref<const Eigen::VectorXd>& predictions,
                const Eigen::Ref<const Eigen::VectorXd>& labels);

}  // namespace trigsvm
