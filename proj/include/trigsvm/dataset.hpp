#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trigsvm/kernel.hpp"

namespace trigsvm {

enum class TargetKind { labels, real };

/// Feature matrix plus either +/-1 labels or real targets.
struct Dataset {
    Eigen::MatrixXd features;
    Eigen::VectorXd target;
    TargetKind kind = TargetKind::labels;
    std::vector<std::string> feature_names;
    std::string provenance;
    /// Raw label text mapped to -1 and +1, when loaded from a file.
    std::optional<std::pair<std::string, std::string>> label_names;

    Index size() const noexcept { return features.rows(); }
    Index dimension() const noexcept { return features.cols(); }

    /// Rows in the given order; metadata is carried over.
    Dataset subset(std::span<const Index> rows) const;
    /// Throws if the shape or the label values break the dataset invariants.
    void validate() const;
};

/// Per-feature z-score statistics from training data. Constant features
/// are flagged and passed through unscaled.
struct ScalingStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;
    std::vector<bool> constant;

    Index dimension() const noexcept { return mean.size(); }
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    Eigen::MatrixXd apply_rows(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
};

ScalingStats fit_scaling(const Eigen::Ref<const Eigen::MatrixXd>& features);

struct StandardizedPair {
    Dataset train;
    Dataset test;
    ScalingStats stats;
};

StandardizedPair standardize(const Dataset& train, const Dataset& test);

struct CsvOptions {
    /// Empty selects the last column.
    std::string label_column;
    bool has_header = false;
    TargetKind kind = TargetKind::labels;
    /// Load features only; every column is a feature.
    bool no_target = false;
};

/// Comma-delimited, decimal floats. Two distinct raw labels are mapped to
/// -1 / +1 by ascending order (numeric when both parse as numbers, else
/// lexicographic).
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
/// True when the first line has a non-numeric cell.
bool csv_has_header(const std::filesystem::path& path);
/// Writes features then the target column with a header row; numbers use
/// shortest round-trip formatting.
void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::string& target_name = "label");

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Two noisy concentric circles: n/2 points labelled +1 on radius 1 and n/2
/// labelled -1 on radius 3, uniform angles, radial Gaussian noise of 0.2.
Dataset gen_circles(Index n, std::uint64_t seed, double inner_radius = 1.0,
                    double outer_radius = 3.0, double noise = 0.2);

struct SineSample {
    Eigen::VectorXd x;
    Eigen::VectorXd y_noisy;
    Eigen::VectorXd y_true;

    Dataset as_dataset() const;
};

/// sin(x) exp(-0.2 x) on n equally spaced points of [0, 10] plus Gaussian noise.
SineSample gen_svr_sine(Index n, std::uint64_t seed, double noise_scale = 0.1);

double damped_sine(double x);

}  // namespace trigsvm
