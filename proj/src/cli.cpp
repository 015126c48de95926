#include "trigsvm/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "trigsvm/dataset.hpp"
#include "trigsvm/gram_audit.hpp"
#include "trigsvm/json_codec.hpp"
#include "trigsvm/model_io.hpp"
#include "trigsvm/model_selection.hpp"
#include "trigsvm/svc.hpp"
#include "trigsvm/svr.hpp"

namespace trigsvm::cli {

namespace {

struct KernelOptions {
    std::string kernel = "trig";
    double sigma = 1.0;
    int p = 2;
    double beta = 0.5;
    double gamma = 1.0;
    double alpha = 0.0;
};

struct Options {
    KernelOptions k;
    std::string data;
    std::vector<std::string> datasets;
    std::string label_column;
    std::string out;
    std::string report;
    std::string csv;
    std::string model;
    std::string name = "circles";
    std::string grid = "heuristic";
    double C = 1.0;
    double epsilon = default_svr_epsilon;
    double train_fraction = 0.8;
    double kkt_tol = 1e-3;
    double threshold = default_compact_threshold;
    double noise = -1.0;
    int folds = 5;
    long n = 0;
    std::uint64_t seed = 42;
    std::size_t trials = 1000;
    long n_max = 15;
    long d_max = 4;
    bool standardize = false;
    bool heuristic_grid = false;
    std::optional<double> sigma_given;
    std::vector<double> sigmas;
    std::vector<double> Cs;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

KernelSpec make_spec(const KernelOptions& k) {
    switch (parse_kernel_family(k.kernel)) {
        case KernelFamily::polynomial: return KernelSpec::polynomial(k.p);
        case KernelFamily::gaussian: return KernelSpec::gaussian(k.sigma);
        case KernelFamily::rbf: return KernelSpec::rbf(k.gamma);
        case KernelFamily::sigmoid: return KernelSpec::sigmoid(k.alpha, k.beta);
        case KernelFamily::trig: return KernelSpec::trig(k.sigma);
        case KernelFamily::mixed: return KernelSpec::mixed(k.sigma, k.beta);
    }
    throw Error(ErrorKind::invalid_parameter, "unknown kernel");
}

void add_kernel_options(CLI::App* app, KernelOptions& k) {
    app->add_option("--kernel", k.kernel, "poly|gaussian|rbf|sigmoid|trig|mixed")
        ->check(CLI::IsMember({"poly", "polynomial", "gaussian", "rbf", "sigmoid", "trig", "mixed"}))
        ->capture_default_str();
    app->add_option("--sigma", k.sigma, "width for gaussian/trig/mixed")->capture_default_str();
    app->add_option("--p", k.p, "polynomial degree")->capture_default_str();
    app->add_option("--beta", k.beta, "mixed weight, or sigmoid slope")->capture_default_str();
    app->add_option("--gamma", k.gamma, "rbf gamma")->capture_default_str();
    app->add_option("--alpha", k.alpha, "sigmoid offset")->capture_default_str();
}

Dataset load_labelled(const std::string& path, const std::string& label_column) {
    CsvOptions csv;
    csv.has_header = csv_has_header(path);
    csv.label_column = label_column;
    return load_csv(path, csv);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorKind::io, "failed while writing '" + path + "'");
}

Json command_echo(const std::vector<std::string>& args) {
    Json j = Json::array();
    for (const auto& a : args) j.push_back(a);
    return j;
}

Json kernel_config(const KernelSpec& spec) { return kernel_to_json(spec); }

std::string percent(double fraction) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << 100.0 * fraction << '%';
    return os.str();
}

// Split, optionally standardize on the training part, and return both parts
// plus the scaling to attach to models.
struct PreparedSplit {
    HoldoutSplit raw;
    Dataset train;
    Dataset test;
    std::optional<ScalingStats> scaling;
};

PreparedSplit prepare(const Dataset& data, const Options& o) {
    PreparedSplit p{holdout_split(data, o.train_fraction, o.seed), {}, {}, std::nullopt};
    if (o.standardize) {
        auto s = standardize(p.raw.train, p.raw.test);
        p.train = std::move(s.train);
        p.test = std::move(s.test);
        p.scaling = std::move(s.stats);
    } else {
        p.train = p.raw.train;
        p.test = p.raw.test;
    }
    return p;
}

SolverConfig solver_config(const Options& o, double C) {
    SolverConfig config;
    config.C = C;
    config.kkt_tol = o.kkt_tol;
    config.seed = o.seed;
    return config;
}

// ---------------------------------------------------------------- synth

int run_synth(const Options& o, std::ostream& out) {
    if (o.name == "circles") {
        const Index n = o.n > 0 ? o.n : 400;
        const double noise = o.noise >= 0.0 ? o.noise : 0.2;
        const Dataset data = gen_circles(n, o.seed, 1.0, 3.0, noise);
        write_csv(data, o.out, "label");
        out << "wrote " << n << " circle samples to " << o.out << '\n';
        return exit_ok;
    }
    if (o.name == "svr-sine") {
        const Index n = o.n > 0 ? o.n : 200;
        const double noise = o.noise >= 0.0 ? o.noise : 0.1;
        const SineSample s = gen_svr_sine(n, o.seed, noise);
        std::ostringstream text;
        text << "x,y_noisy,y_true\n";
        for (Index i = 0; i < n; ++i) {
            text << format_double(s.x(i)) << ',' << format_double(s.y_noisy(i)) << ','
                 << format_double(s.y_true(i)) << '\n';
        }
        write_text(o.out, text.str());
        out << "wrote " << n << " sine samples to " << o.out << '\n';
        return exit_ok;
    }
    throw Error(ErrorKind::invalid_parameter, "unknown dataset name '" + o.name + "'");
}

// ---------------------------------------------------------------- train

int run_train(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
    const auto start = Clock::now();
    const Dataset data = load_labelled(o.data, o.label_column);
    const KernelSpec spec = make_spec(o.k);
    const auto split = prepare(data, o);
    SvcModel model = fit_svc(split.train.features, split.train.target, spec, solver_config(o, o.C));
    model.scaling = split.scaling;
    const auto stats = count_stats(model, split.raw.train, split.raw.test);
    save_model(model, o.out);

    Json report;
    report["command"] = command_echo(args);
    report["config"] = {{"data", o.data},
                        {"kernel", kernel_config(spec)},
                        {"C", o.C},
                        {"kkt_tol", o.kkt_tol},
                        {"train_fraction", o.train_fraction},
                        {"standardize", o.standardize},
                        {"seed", o.seed},
                        {"model", o.out}};
    const auto n_train = split.raw.train.size();
    const auto n_test = split.raw.test.size();
    report["metrics"] = {
        {"sv", stats.sv_count},
        {"train_errors", stats.train_errors},
        {"test_errors", stats.test_errors},
        {"n_train", n_train},
        {"n_test", n_test},
        {"train_accuracy", 1.0 - static_cast<double>(stats.train_errors) / static_cast<double>(n_train)},
        {"test_accuracy", n_test > 0 ? 1.0 - static_cast<double>(stats.test_errors) / static_cast<double>(n_test) : 0.0},
        {"jitter", model.jitter},
        {"iterations", model.iterations}};
    report["seed"] = o.seed;
    if (!o.report.empty()) write_text(o.report, report.dump(2) + "\n");

    out << "kernel   " << spec.describe() << "  C=" << o.C << '\n'
        << "# SV     " << stats.sv_count << '\n'
        << "# TrE.   " << stats.train_errors << " / " << n_train << '\n'
        << "# TsE.   " << stats.test_errors << " / " << n_test << '\n'
        << "model    " << o.out << '\n'
        << "time     " << std::fixed << std::setprecision(1) << elapsed_ms(start) << " ms\n";
    return exit_ok;
}

// ---------------------------------------------------------------- predict

int run_predict(const Options& o, std::ostream& out) {
    const AnyModel model = load_model(o.model);
    const Index dim = std::visit([](const auto& m) { return m.dimension(); }, model);

    CsvOptions csv;
    csv.has_header = csv_has_header(o.data);
    csv.no_target = true;
    Dataset data = load_csv(o.data, csv);
    std::optional<Eigen::VectorXd> truth;
    if (data.dimension() == dim + 1) {
        truth = data.features.col(dim);
        data.features.conservativeResize(Eigen::NoChange, dim);
    } else if (data.dimension() != dim) {
        throw Error(ErrorKind::shape, "data has " + std::to_string(data.dimension()) +
                                          " columns; model expects " + std::to_string(dim) +
                                          " features (plus an optional target)");
    }

    std::ostringstream text;
    if (const auto* svc = std::get_if<SvcModel>(&model)) {
        const Eigen::VectorXd f = decision_values(*svc, data.features);
        text << "index,decision,prediction\n";
        Index correct = 0;
        for (Index i = 0; i < f.size(); ++i) {
            const int label = label_of(f(i));
            text << i << ',' << format_double(f(i)) << ',' << label << '\n';
            if (truth && static_cast<double>(label) == (*truth)(i)) ++correct;
        }
        write_text(o.out, text.str());
        out << "predicted " << f.size() << " samples to " << o.out << '\n';
        if (truth) {
            out << "accuracy " << percent(static_cast<double>(correct) / static_cast<double>(f.size()))
                << '\n';
        }
    } else {
        const auto& svr = std::get<SvrModel>(model);
        const Eigen::VectorXd pred = predict_svr_rows(svr, data.features);
        text << "index,prediction\n";
        for (Index i = 0; i < pred.size(); ++i) text << i << ',' << format_double(pred(i)) << '\n';
        write_text(o.out, text.str());
        out << "predicted " << pred.size() << " samples to " << o.out << '\n';
        if (truth) {
            const double rmse = std::sqrt((pred - *truth).squaredNorm() / static_cast<double>(pred.size()));
            out << "rmse " << rmse << '\n';
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------- tune

int run_tune(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
    const auto start = Clock::now();
    Dataset data = load_labelled(o.data, o.label_column);
    if (o.standardize) data.features = fit_scaling(data.features).apply_rows(data.features);
    const KernelSpec family = make_spec(o.k);

    std::vector<double> sigmas = o.sigmas;
    if (sigmas.empty()) {
        sigmas = o.heuristic_grid
                     ? recommend_sigma_range(class_distance_stats(data), o.threshold).sigma_subgrid
                     : log2_grid();
    }
    if (family.family() == KernelFamily::polynomial) sigmas.resize(1);
    const std::vector<double> Cs = o.Cs.empty() ? log2_grid() : o.Cs;

    const GridReport report =
        grid_search(data, family, Cs, sigmas, o.folds, o.seed, solver_config(o, 1.0));

    Json j = Json::parse(report.to_json());
    Json wrapped;
    wrapped["command"] = command_echo(args);
    wrapped["config"] = {{"data", o.data}, {"standardize", o.standardize}};
    for (auto it = j.begin(); it != j.end(); ++it) wrapped[it.key()] = it.value();
    if (!o.out.empty()) write_text(o.out, wrapped.dump(2) + "\n");
    if (!o.csv.empty()) write_text(o.csv, report.to_csv());

    const auto& best = report.best_cell();
    out << "cells    " << report.cells.size() << '\n'
        << "best     C=" << best.C << " sigma=" << best.sigma << " cv accuracy "
        << percent(best.mean_cv_accuracy) << " (std " << percent(best.fold_std) << ", mean SV "
        << best.sv_count_mean << ")\n"
        << "time     " << std::fixed << std::setprecision(1) << elapsed_ms(start) << " ms\n";
    return exit_ok;
}

// ---------------------------------------------------------------- heuristic

int run_heuristic(const Options& o, std::ostream& out) {
    Dataset data = load_labelled(o.data, o.label_column);
    if (o.standardize) data.features = fit_scaling(data.features).apply_rows(data.features);
    const auto stats = class_distance_stats(data, 20000, o.seed);
    const auto rec = recommend_sigma_range(stats, o.threshold);

    Json j;
    j["data"] = o.data;
    j["threshold"] = o.threshold;
    j["standardize"] = o.standardize;
    auto classes = Json::array();
    for (const auto& c : stats.classes) {
        out << "class " << std::setw(3) << c.label << "  n=" << c.sample_count
            << "  min distance " << c.min_pairwise_distance << "  max distance "
            << c.max_pairwise_distance << '\n';
        classes.push_back({{"label", c.label},
                           {"n", c.sample_count},
                           {"min_distance", c.min_pairwise_distance},
                           {"max_distance", c.max_pairwise_distance}});
    }
    j["classes"] = std::move(classes);
    j["regime"] = std::string(to_string(rec.regime));
    j["sigma_subgrid"] = rec.sigma_subgrid;
    out << "regime " << to_string(rec.regime) << "\nsigma grid";
    for (const double s : rec.sigma_subgrid) out << ' ' << s;
    out << '\n';
    if (!o.out.empty()) write_text(o.out, j.dump(2) + "\n");
    return exit_ok;
}

// ---------------------------------------------------------------- audit

int run_audit(const Options& o, std::ostream& out) {
    const auto start = Clock::now();
    const KernelSpec spec = make_spec(o.k);
    SurveyOptions survey;
    survey.trials = o.trials;
    survey.n_max = o.n_max;
    survey.d_max = o.d_max;
    survey.seed = o.seed;
    if (!o.sigma_given) survey.width_grid = log2_grid();
    const SurveyReport report = randomized_psd_survey(spec, survey);
    if (!o.out.empty()) write_text(o.out, report.to_json() + "\n");
    out << "kernel          " << spec.describe()
        << (o.sigma_given ? "" : " (width drawn from the log2 grid)") << '\n'
        << "trials          " << survey.trials << '\n'
        << "min eigenvalue  " << std::setprecision(10) << report.min_eigenvalue << '\n'
        << "violations      " << report.violations.size() << " (eigenvalue < "
        << survey.violation_threshold << ")\n"
        << "time            " << std::fixed << std::setprecision(1) << elapsed_ms(start) << " ms\n";
    return exit_ok;
}

// ---------------------------------------------------------------- svr-demo

int run_svr_demo(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
    const auto start = Clock::now();
    const Index n = o.n > 0 ? o.n : 200;
    const double noise = o.noise >= 0.0 ? o.noise : 0.1;
    const SineSample sample = gen_svr_sine(n, o.seed, noise);
    const Dataset data = sample.as_dataset();
    KernelSpec spec = make_spec(o.k);
    const SolverConfig config = solver_config(o, o.C);

    Json tuning = Json::array();
    if (!o.sigma_given && spec.family() != KernelFamily::polynomial) {
        const auto sel = tune_svr_width(data, spec, log2_grid(), o.epsilon, o.folds, o.seed, config);
        for (const auto& s : sel.scores) tuning.push_back({{"sigma", s.width}, {"cv_rmse", s.cv_rmse}});
        spec = spec.with_width(sel.best_width);
    }
    const SvrModel model = fit_svr(data.features, data.target, spec, o.epsilon, config);
    const Eigen::VectorXd pred = predict_svr_rows(model, data.features);
    const double rmse_true = svr_rmse(model, data.features, sample.y_true);
    const double rmse_noisy = svr_rmse(model, data.features, sample.y_noisy);

    std::ostringstream curve;
    curve << "x,y_noisy,y_true,y_pred\n";
    for (Index i = 0; i < n; ++i) {
        curve << format_double(sample.x(i)) << ',' << format_double(sample.y_noisy(i)) << ','
              << format_double(sample.y_true(i)) << ',' << format_double(pred(i)) << '\n';
    }
    write_text(o.out, curve.str());
    if (!o.model.empty()) save_model(model, o.model);

    if (!o.report.empty()) {
        Json report;
        report["command"] = command_echo(args);
        report["config"] = {{"n", n},         {"noise", noise},     {"kernel", kernel_config(spec)},
                            {"C", o.C},       {"epsilon", o.epsilon}, {"kkt_tol", o.kkt_tol},
                            {"seed", o.seed}, {"curve", o.out}};
        report["sigma_tuning"] = tuning;
        report["metrics"] = {{"sv", model.sv_count()},
                             {"rmse_vs_true", rmse_true},
                             {"rmse_vs_noisy", rmse_noisy}};
        report["seed"] = o.seed;
        write_text(o.report, report.dump(2) + "\n");
    }
    out << "kernel         " << spec.describe() << "  C=" << o.C << "  epsilon=" << o.epsilon << '\n'
        << "# SV           " << model.sv_count() << '\n'
        << "RMSE vs true   " << std::setprecision(6) << rmse_true << '\n'
        << "RMSE vs noisy  " << rmse_noisy << '\n'
        << "curve          " << o.out << " (" << n << " rows)\n"
        << "time           " << std::fixed << std::setprecision(1) << elapsed_ms(start) << " ms\n";
    return exit_ok;
}

// ---------------------------------------------------------------- sweep

int run_sweep(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
    const Dataset data = load_labelled(o.data, o.label_column);
    const auto split = prepare(data, o);
    const KernelSpec family = make_spec(o.k);
    const std::vector<double> sigmas =
        o.sigmas.empty() ? std::vector<double>{0.1, 1, 2, 10, 50, 100, 1000} : o.sigmas;

    std::vector<CountStats> rows;
    Json columns = Json::array();
    for (const double s : sigmas) {
        const KernelSpec spec = family.with_width(s);
        SvcModel model = fit_svc(split.train.features, split.train.target, spec, solver_config(o, o.C));
        model.scaling = split.scaling;
        rows.push_back(count_stats(model, split.raw.train, split.raw.test));
        columns.push_back({{"sigma", s},
                           {"sv", rows.back().sv_count},
                           {"train_errors", rows.back().train_errors},
                           {"test_errors", rows.back().test_errors}});
    }

    std::ostringstream table;
    table << std::left << std::setw(10) << "Results";
    for (const double s : sigmas) {
        std::ostringstream head;
        head << "sigma=" << s;
        table << std::setw(13) << head.str();
    }
    table << '\n';
    const auto line = [&](const char* label, auto field) {
        table << std::setw(10) << label;
        for (const auto& r : rows) table << std::setw(13) << field(r);
        table << '\n';
    };
    line("# SV", [](const CountStats& r) { return r.sv_count; });
    line("# TrE.", [](const CountStats& r) { return r.train_errors; });
    line("# TsE.", [](const CountStats& r) { return r.test_errors; });
    out << "kernel " << to_string(family.family()) << "  C=" << o.C << "  train "
        << split.raw.train.size() << "  test " << split.raw.test.size() << '\n'
        << table.str();

    if (!o.out.empty()) {
        Json report;
        report["command"] = command_echo(args);
        report["config"] = {{"data", o.data},
                            {"kernel", kernel_config(family)},
                            {"C", o.C},
                            {"train_fraction", o.train_fraction},
                            {"standardize", o.standardize},
                            {"seed", o.seed}};
        report["columns"] = std::move(columns);
        report["seed"] = o.seed;
        write_text(o.out, report.dump(2) + "\n");
    }
    return exit_ok;
}

// ---------------------------------------------------------------- compare

struct KernelRow {
    std::string label;
    KernelSpec family;
};

int run_compare(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
    const auto start = Clock::now();
    std::vector<std::string> paths = o.datasets;
    if (paths.empty()) throw Error(ErrorKind::invalid_parameter, "compare needs at least one --data");

    const std::vector<KernelRow> kernels{
        {"K1", KernelSpec::polynomial(o.k.p)},
        {"K2", KernelSpec::gaussian(1.0)},
        {"K3", KernelSpec::trig(1.0)},
        {"K4", KernelSpec::mixed(1.0, o.k.beta)},
    };

    Json results = Json::array();
    std::vector<std::vector<double>> acc(kernels.size());
    for (const auto& path : paths) {
        const Dataset data = load_labelled(path, o.label_column);
        const auto split = prepare(data, o);
        std::vector<double> sigmas = log2_grid();
        std::string regime = "full-grid";
        if (o.grid == "heuristic") {
            const auto rec = recommend_sigma_range(class_distance_stats(split.train), o.threshold);
            sigmas = rec.sigma_subgrid;
            regime = std::string(to_string(rec.regime));
        }
        Json entry;
        entry["data"] = path;
        entry["regime"] = regime;
        auto rows = Json::array();
        for (std::size_t k = 0; k < kernels.size(); ++k) {
            const auto& kr = kernels[k];
            std::vector<double> grid = sigmas;
            if (kr.family.family() == KernelFamily::polynomial) grid = {1.0};
            const auto report =
                grid_search(split.train, kr.family, log2_grid(), grid, o.folds, o.seed, solver_config(o, 1.0));
            const auto& best = report.best_cell();
            const KernelSpec spec = kr.family.with_width(best.sigma);
            SvcModel model =
                fit_svc(split.train.features, split.train.target, spec, solver_config(o, best.C));
            model.scaling = split.scaling;
            const auto stats = count_stats(model, split.raw.train, split.raw.test);
            const double test_acc =
                1.0 - static_cast<double>(stats.test_errors) / static_cast<double>(split.raw.test.size());
            acc[k].push_back(test_acc);
            rows.push_back({{"kernel", kr.label},
                            {"spec", kernel_config(spec)},
                            {"C", best.C},
                            {"cv_accuracy", best.mean_cv_accuracy},
                            {"test_accuracy", test_acc},
                            {"sv", stats.sv_count},
                            {"train_errors", stats.train_errors},
                            {"test_errors", stats.test_errors}});
        }
        entry["rows"] = std::move(rows);
        results.push_back(std::move(entry));
    }

    out << std::left << std::setw(8) << "kernel";
    for (std::size_t d = 0; d < paths.size(); ++d) out << std::setw(10) << ("data" + std::to_string(d + 1));
    out << std::setw(10) << "average" << '\n';
    Json averages;
    for (std::size_t k = 0; k < kernels.size(); ++k) {
        out << std::setw(8) << kernels[k].label;
        double sum = 0.0;
        for (const double a : acc[k]) {
            out << std::setw(10) << percent(a);
            sum += a;
        }
        const double mean = sum / static_cast<double>(acc[k].size());
        averages[kernels[k].label] = mean;
        out << std::setw(10) << percent(mean) << '\n';
    }
    for (std::size_t d = 0; d < paths.size(); ++d) out << "data" << d + 1 << " = " << paths[d] << '\n';
    out << "time " << std::fixed << std::setprecision(1) << elapsed_ms(start) << " ms\n";

    if (!o.out.empty()) {
        Json report;
        report["command"] = command_echo(args);
        report["config"] = {{"grid", o.grid},
                            {"folds", o.folds},
                            {"train_fraction", o.train_fraction},
                            {"standardize", o.standardize},
                            {"threshold", o.threshold},
                            {"seed", o.seed}};
        report["datasets"] = std::move(results);
        report["average_accuracy"] = std::move(averages);
        report["seed"] = o.seed;
        write_text(o.out, report.dump(2) + "\n");
    }
    return exit_ok;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kernel support-vector toolkit with a trigonometric kernel", "trigsvm"};
    app.require_subcommand(1);
    Options o;

    const auto add_seed = [&](CLI::App* s) {
        s->add_option("--seed", o.seed, "PRNG seed")->capture_default_str();
    };
    const auto add_data = [&](CLI::App* s) {
        s->add_option("--data", o.data, "input CSV")->required();
        s->add_option("--label-column", o.label_column, "label column name (default: last)");
    };
    const auto add_split = [&](CLI::App* s) {
        s->add_option("--train-fraction", o.train_fraction)->capture_default_str();
        s->add_flag("--standardize", o.standardize, "z-score features with training statistics");
    };

    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset as CSV");
    synth->add_option("--name", o.name, "circles|svr-sine")
        ->check(CLI::IsMember({"circles", "svr-sine"}))
        ->capture_default_str();
    synth->add_option("--n", o.n, "sample count");
    synth->add_option("--noise", o.noise, "noise scale");
    synth->add_option("--out", o.out)->required();
    add_seed(synth);

    auto* train = app.add_subcommand("train", "fit a C-SVC and save the model");
    add_data(train);
    add_kernel_options(train, o.k);
    train->add_option("--C", o.C)->capture_default_str();
    train->add_option("--kkt-tol", o.kkt_tol)->capture_default_str();
    train->add_option("--out", o.out, "model JSON")->required();
    train->add_option("--report", o.report, "run report JSON");
    add_split(train);
    add_seed(train);

    auto* predict_cmd = app.add_subcommand("predict", "apply a saved model to a CSV");
    predict_cmd->add_option("--model", o.model)->required();
    predict_cmd->add_option("--data", o.data)->required();
    predict_cmd->add_option("--out", o.out, "predictions CSV")->required();

    auto* tune = app.add_subcommand("tune", "cross-validated grid search over C and sigma");
    add_data(tune);
    add_kernel_options(tune, o.k);
    tune->add_option("--folds", o.folds)->capture_default_str();
    tune->add_option("--sigmas", o.sigmas, "width grid (default: 2^-5..2^10)")->delimiter(',');
    tune->add_option("--Cs", o.Cs, "C grid (default: 2^-5..2^10)")->delimiter(',');
    tune->add_flag("--heuristic-grid", o.heuristic_grid, "restrict widths by the distance heuristic");
    tune->add_option("--threshold", o.threshold)->capture_default_str();
    tune->add_option("--kkt-tol", o.kkt_tol)->capture_default_str();
    tune->add_flag("--standardize", o.standardize);
    tune->add_option("--out", o.out, "grid report JSON");
    tune->add_option("--csv", o.csv, "grid report CSV");
    add_seed(tune);

    auto* heuristic = app.add_subcommand("heuristic", "per-class distance statistics and width regime");
    add_data(heuristic);
    heuristic->add_option("--threshold", o.threshold)->capture_default_str();
    heuristic->add_flag("--standardize", o.standardize);
    heuristic->add_option("--out", o.out, "JSON summary");
    add_seed(heuristic);

    auto* audit = app.add_subcommand("audit", "randomized positive-definiteness survey");
    add_kernel_options(audit, o.k);
    audit->add_option("--trials", o.trials)->capture_default_str();
    audit->add_option("--n-max", o.n_max)->capture_default_str();
    audit->add_option("--d-max", o.d_max)->capture_default_str();
    audit->add_option("--out", o.out, "survey JSON");
    add_seed(audit);

    auto* svr_demo = app.add_subcommand("svr-demo", "epsilon-SVR on the damped sine curve");
    add_kernel_options(svr_demo, o.k);
    svr_demo->get_option("--kernel")->default_str("mixed");
    svr_demo->get_option("--sigma")->default_str("")->description("width; tuned by cross-validation when omitted");
    svr_demo->add_option("--C", o.C, "box constraint (default 10)");
    svr_demo->add_option("--epsilon", o.epsilon)->capture_default_str();
    svr_demo->add_option("--n", o.n, "sample count (default 200)");
    svr_demo->add_option("--noise", o.noise, "noise scale (default 0.1)");
    svr_demo->add_option("--folds", o.folds, "folds for width tuning")->capture_default_str();
    svr_demo->add_option("--kkt-tol", o.kkt_tol)->capture_default_str();
    svr_demo->add_option("--out", o.out, "curve CSV")->required();
    svr_demo->add_option("--model", o.model, "also save the model JSON");
    svr_demo->add_option("--report", o.report, "run report JSON");
    add_seed(svr_demo);

    auto* sweep = app.add_subcommand("sweep", "width sweep at fixed C (#SV, #TrE, #TsE)");
    add_data(sweep);
    add_kernel_options(sweep, o.k);
    sweep->add_option("--C", o.C)->capture_default_str();
    sweep->add_option("--sigmas", o.sigmas, "widths (default 0.1,1,2,10,50,100,1000)")->delimiter(',');
    sweep->add_option("--kkt-tol", o.kkt_tol)->capture_default_str();
    sweep->add_option("--out", o.out, "JSON report");
    add_split(sweep);
    add_seed(sweep);

    auto* compare = app.add_subcommand("compare", "tuned K1-K4 accuracy table");
    compare->add_option("--data", o.datasets, "input CSV (repeatable)")->required();
    compare->add_option("--label-column", o.label_column);
    compare->add_option("--p", o.k.p, "K1 degree")->capture_default_str();
    compare->add_option("--beta", o.k.beta, "K4 weight")->capture_default_str();
    compare->add_option("--folds", o.folds)->capture_default_str();
    compare->add_option("--grid", o.grid, "heuristic|full")
        ->check(CLI::IsMember({"heuristic", "full"}))
        ->capture_default_str();
    compare->add_option("--threshold", o.threshold)->capture_default_str();
    compare->add_option("--kkt-tol", o.kkt_tol)->capture_default_str();
    compare->add_option("--out", o.out, "JSON report");
    add_split(compare);
    add_seed(compare);

    std::vector<const char*> argv{"trigsvm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }

    // The explicit --sigma presence matters for commands that otherwise tune it.
    for (auto* sub : {audit, svr_demo}) {
        if (sub->parsed() && sub->count("--sigma") > 0) o.sigma_given = o.k.sigma;
    }
    if (svr_demo->parsed()) {
        if (svr_demo->count("--kernel") == 0) o.k.kernel = "mixed";
        if (svr_demo->count("--C") == 0) o.C = 10.0;
    }

    try {
        if (synth->parsed()) return run_synth(o, out);
        if (train->parsed()) return run_train(o, args, out);
        if (predict_cmd->parsed()) return run_predict(o, out);
        if (tune->parsed()) return run_tune(o, args, out);
        if (heuristic->parsed()) return run_heuristic(o, out);
        if (audit->parsed()) return run_audit(o, out);
        if (svr_demo->parsed()) return run_svr_demo(o, args, out);
        if (sweep->parsed()) return run_sweep(o, args, out);
        if (compare->parsed()) return run_compare(o, args, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    err << "usage error: no subcommand\n";
    return exit_usage;
}

}  // namespace trigsvm::cli
