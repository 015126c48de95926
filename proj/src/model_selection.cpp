#include "trigsvm/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "trigsvm/json_codec.hpp"
#include "trigsvm/random.hpp"
#include "trigsvm/svc.hpp"
#include "trigsvm/svr.hpp"

namespace trigsvm {

std::vector<double> log2_grid() {
    std::vector<double> grid;
    for (int e = -5; e <= 10; ++e) grid.push_back(std::ldexp(1.0, e));
    return grid;
}

double DistanceStats::max_distance() const {
    double m = 0.0;
    for (const auto& c : classes) m = std::max(m, c.max_pairwise_distance);
    return m;
}

std::string_view to_string(DataRegime regime) noexcept {
    return regime == DataRegime::compact ? "compact" : "sparse";
}

namespace {

std::map<double, std::vector<Index>> rows_by_label(const Dataset& data) {
    if (data.kind != TargetKind::labels) {
        throw Error(ErrorKind::invalid_parameter, "operation needs a labelled dataset");
    }
    std::map<double, std::vector<Index>> groups;
    for (Index i = 0; i < data.size(); ++i) groups[data.target(i)].push_back(i);
    return groups;
}

}  // namespace

DistanceStats class_distance_stats(const Dataset& data, Index exact_limit, std::uint64_t seed) {
    if (data.size() == 0) throw Error(ErrorKind::empty_input, "distance stats of an empty dataset");
    DistanceStats stats;
    std::uint64_t stream = 0;
    for (auto& [label, rows] : rows_by_label(data)) {
        if (static_cast<Index>(rows.size()) > exact_limit) {
            auto rng = SplitMix64::for_stream(seed, stream);
            rng.shuffle(std::span<Index>(rows));
            rows.resize(static_cast<std::size_t>(exact_limit));
        }
        ++stream;
        ClassDistance c{label, 0.0, 0.0, static_cast<Index>(rows.size())};
        if (rows.size() > 1) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = 0.0;
            for (std::size_t a = 0; a < rows.size(); ++a) {
                for (std::size_t b = a + 1; b < rows.size(); ++b) {
                    const double d = (data.features.row(rows[a]) - data.features.row(rows[b])).norm();
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
            }
            c.min_pairwise_distance = lo;
            c.max_pairwise_distance = hi;
        }
        stats.classes.push_back(c);
    }
    return stats;
}

SigmaRecommendation recommend_sigma_range(const DistanceStats& stats, double threshold) {
    const auto grid = log2_grid();
    const auto half = grid.begin() + static_cast<std::ptrdiff_t>(grid.size() / 2);
    if (stats.max_distance() <= threshold) {
        return {DataRegime::compact, std::vector<double>(half, grid.end())};
    }
    return {DataRegime::sparse, std::vector<double>(grid.begin(), half)};
}

std::vector<int> stratified_folds(const Dataset& data, int folds, std::uint64_t seed) {
    if (folds < 2) throw Error(ErrorKind::invalid_parameter, "need at least two folds");
    std::vector<int> assignment(static_cast<std::size_t>(data.size()), -1);
    std::uint64_t stream = 0;
    for (auto& [label, rows] : rows_by_label(data)) {
        if (static_cast<int>(rows.size()) < folds) {
            throw Error(ErrorKind::protocol, "class " + format_double(label) + " has " +
                                                 std::to_string(rows.size()) +
                                                 " samples, fewer than " + std::to_string(folds) +
                                                 " folds");
        }
        auto rng = SplitMix64::for_stream(seed, stream++);
        rng.shuffle(std::span<Index>(rows));
        for (std::size_t k = 0; k < rows.size(); ++k) {
            assignment[static_cast<std::size_t>(rows[k])] = static_cast<int>(k % static_cast<std::size_t>(folds));
        }
    }
    return assignment;
}

GridReport grid_search(const Dataset& data, const KernelSpec& family,
                       const std::vector<double>& C_grid, const std::vector<double>& sigma_grid,
                       int folds, std::uint64_t seed, const SolverConfig& base_config) {
    if (C_grid.empty() || sigma_grid.empty()) {
        throw Error(ErrorKind::empty_input, "grid search needs non-empty C and sigma grids");
    }
    data.validate();
    const auto assignment = stratified_folds(data, folds, seed);

    std::vector<std::vector<Index>> train_rows(static_cast<std::size_t>(folds));
    std::vector<std::vector<Index>> test_rows(static_cast<std::size_t>(folds));
    for (Index i = 0; i < data.size(); ++i) {
        const int f = assignment[static_cast<std::size_t>(i)];
        for (int k = 0; k < folds; ++k) {
            (k == f ? test_rows : train_rows)[static_cast<std::size_t>(k)].push_back(i);
        }
    }

    GridReport report{{}, 0, GridProtocol{folds, seed, family}};
    report.cells.resize(C_grid.size() * sigma_grid.size());

    for (std::size_t s = 0; s < sigma_grid.size(); ++s) {
        const KernelSpec spec = family.with_width(sigma_grid[s]);
        // One Gram per width; every fold and C value reads blocks of it.
        const Eigen::MatrixXd full = gram(spec, data.features).values();
        for (std::size_t c = 0; c < C_grid.size(); ++c) {
            SolverConfig config = base_config;
            config.C = C_grid[c];
            std::vector<double> accs;
            double sv_total = 0.0;
            bool converged = true;
            for (int k = 0; k < folds && converged; ++k) {
                const auto& tr = train_rows[static_cast<std::size_t>(k)];
                const auto& te = test_rows[static_cast<std::size_t>(k)];
                const Dataset train = data.subset(tr);
                try {
                    const SvcModel model =
                        fit_svc_precomputed(train.features, train.target, spec, full(tr, tr), config);
                    Index correct = 0;
                    for (const Index t : te) {
                        double f = model.bias;
                        for (Index v = 0; v < model.sv_count(); ++v) {
                            const Index global = tr[static_cast<std::size_t>(model.support_indices[static_cast<std::size_t>(v)])];
                            f += model.dual_coef(v) * full(global, t);
                        }
                        if (label_of(f) == static_cast<int>(data.target(t))) ++correct;
                    }
                    accs.push_back(static_cast<double>(correct) / static_cast<double>(te.size()));
                    sv_total += static_cast<double>(model.sv_count());
                } catch (const ConvergenceError&) {
                    converged = false;
                }
            }
            GridCell cell{C_grid[c], sigma_grid[s], 0.0, 0.0, 0.0, converged};
            if (converged) {
                const double k = static_cast<double>(folds);
                cell.mean_cv_accuracy = std::accumulate(accs.begin(), accs.end(), 0.0) / k;
                double var = 0.0;
                for (const double a : accs) var += (a - cell.mean_cv_accuracy) * (a - cell.mean_cv_accuracy);
                cell.fold_std = std::sqrt(var / k);
                cell.sv_count_mean = sv_total / k;
            }
            report.cells[c * sigma_grid.size() + s] = cell;
        }
    }

    bool found = false;
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        const auto& cell = report.cells[i];
        if (!cell.converged) continue;
        if (!found) {
            report.best = i;
            found = true;
            continue;
        }
        const auto& best = report.cells[report.best];
        const bool better =
            cell.mean_cv_accuracy > best.mean_cv_accuracy ||
            (cell.mean_cv_accuracy == best.mean_cv_accuracy &&
             (cell.C < best.C || (cell.C == best.C && cell.sigma < best.sigma)));
        if (better) report.best = i;
    }
    if (!found) throw Error(ErrorKind::convergence, "no grid cell converged");
    return report;
}

SvrWidthSelection tune_svr_width(const Dataset& data, const KernelSpec& family,
                                 const std::vector<double>& width_grid, double epsilon,
                                 int folds, std::uint64_t seed, const SolverConfig& config) {
    if (width_grid.empty()) throw Error(ErrorKind::empty_input, "empty width grid");
    if (folds < 2 || folds > data.size()) {
        throw Error(ErrorKind::protocol, "fold count must lie in [2, n]");
    }
    std::vector<Index> order(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), Index{0});
    auto rng = SplitMix64(seed);
    rng.shuffle(std::span<Index>(order));
    std::vector<int> fold_of(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        fold_of[static_cast<std::size_t>(order[k])] = static_cast<int>(k % static_cast<std::size_t>(folds));
    }

    SvrWidthSelection selection{{}, width_grid.front()};
    double best = std::numeric_limits<double>::infinity();
    for (const double width : width_grid) {
        const KernelSpec spec = family.with_width(width);
        double squared = 0.0;
        bool ok = true;
        for (int f = 0; f < folds && ok; ++f) {
            std::vector<Index> tr;
            std::vector<Index> te;
            for (Index i = 0; i < data.size(); ++i) {
                (fold_of[static_cast<std::size_t>(i)] == f ? te : tr).push_back(i);
            }
            const Dataset train = data.subset(tr);
            const Dataset test = data.subset(te);
            try {
                const auto model = fit_svr(train.features, train.target, spec, epsilon, config);
                squared += (predict_svr_rows(model, test.features) - test.target).squaredNorm();
            } catch (const ConvergenceError&) {
                ok = false;
            }
        }
        const double rmse = ok ? std::sqrt(squared / static_cast<double>(data.size()))
                               : std::numeric_limits<double>::infinity();
        selection.scores.push_back({width, rmse});
        if (rmse < best || (rmse == best && width < selection.best_width)) {
            best = rmse;
            selection.best_width = width;
        }
    }
    if (!std::isfinite(best)) throw Error(ErrorKind::convergence, "no width converged");
    return selection;
}

std::string GridReport::to_json() const {
    Json j;
    j["protocol"] = {{"folds", protocol.folds},
                     {"seed", protocol.seed},
                     {"kernel", kernel_to_json(protocol.family)}};
    j["best"] = best;
    auto cells_json = Json::array();
    for (const auto& c : cells) {
        cells_json.push_back({{"C", c.C},
                              {"sigma", c.sigma},
                              {"mean_acc", c.mean_cv_accuracy},
                              {"std", c.fold_std},
                              {"mean_sv", c.sv_count_mean},
                              {"converged", c.converged}});
    }
    j["cells"] = std::move(cells_json);
    return j.dump(2);
}

std::string GridReport::to_csv() const {
    std::ostringstream os;
    os << "C,sigma,mean_acc,std,mean_sv\n";
    for (const auto& c : cells) {
        os << format_double(c.C) << ',' << format_double(c.sigma) << ','
           << format_double(c.mean_cv_accuracy) << ',' << format_double(c.fold_std) << ','
           << format_double(c.sv_count_mean) << '\n';
    }
    return os.str();
}

HoldoutSplit holdout_split(const Dataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(ErrorKind::invalid_parameter, "train fraction must lie in (0, 1)");
    }
    if (data.size() == 0) throw Error(ErrorKind::empty_input, "cannot split an empty dataset");
    const auto n = static_cast<double>(data.size());
    const auto total = static_cast<Index>(std::round(train_fraction * n));

    std::vector<std::vector<Index>> groups;
    if (data.kind == TargetKind::labels) {
        for (auto& [label, rows] : rows_by_label(data)) groups.push_back(std::move(rows));
    } else {
        groups.emplace_back(static_cast<std::size_t>(data.size()));
        std::iota(groups.front().begin(), groups.front().end(), Index{0});
    }

    // Largest remainder apportionment of the training quota across groups.
    std::vector<Index> quota(groups.size());
    std::vector<double> remainder(groups.size());
    Index assigned = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double exact = train_fraction * static_cast<double>(groups[g].size());
        quota[g] = static_cast<Index>(std::floor(exact));
        remainder[g] = exact - static_cast<double>(quota[g]);
        assigned += quota[g];
    }
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < total && k < order.size(); ++k) {
        const std::size_t g = order[k];
        if (quota[g] < static_cast<Index>(groups[g].size())) {
            ++quota[g];
            ++assigned;
        }
    }

    HoldoutSplit split;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto rng = SplitMix64::for_stream(seed, g);
        rng.shuffle(std::span<Index>(groups[g]));
        for (std::size_t k = 0; k < groups[g].size(); ++k) {
            (static_cast<Index>(k) < quota[g] ? split.train_indices : split.test_indices)
                .push_back(groups[g][k]);
        }
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    split.train = data.subset(split.train_indices);
    split.test = data.subset(split.test_indices);
    return split;
}

double accuracy(const Eigen::Ref<const Eigen::VectorXd>& predictions,
                const Eigen::Ref<const Eigen::VectorXd>& labels) {
    if (predictions.size() == 0) throw Error(ErrorKind::empty_input, "accuracy of no predictions");
    if (predictions.size() != labels.size()) {
        throw Error(ErrorKind::shape, "prediction and label counts differ");
    }
    const auto hits = (predictions.array() == labels.array()).count();
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace trigsvm
