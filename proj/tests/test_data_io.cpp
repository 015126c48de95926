#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <json.hpp>

#include "trigsvm/dataset.hpp"
#include "trigsvm/model_io.hpp"
#include "trigsvm/random.hpp"

using namespace trigsvm;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("trigsvm_io_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path file(const std::string& name, const std::string& content = {}) const {
        const auto p = path / name;
        if (!content.empty()) std::ofstream(p) << content;
        return p;
    }
};

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::data;
}

}  // namespace

TEST_CASE("load_csv label mapping and columns") {
    TempDir tmp;
    auto d = load_csv(tmp.file("a.csv", "1.5,2,0\n3,4,1\n5,6,0\n"));
    CHECK(d.size() == 3);
    CHECK(d.dimension() == 2);
    CHECK(d.target == (VectorXd(3) << -1, 1, -1).finished());
    CHECK(d.features(2, 1) == 6.0);
    CHECK(d.label_names->first == "0");

    d = load_csv(tmp.file("b.csv", "2,9\n3,10\n"));
    CHECK(d.target == (VectorXd(2) << -1, 1).finished());

    d = load_csv(tmp.file("c.csv", "1,cat\n2,dog\n3,cat\n"));
    CHECK(d.target == (VectorXd(3) << -1, 1, -1).finished());

    d = load_csv(tmp.file("d.csv", "1,-1\n2,1\n"));
    CHECK(d.target == (VectorXd(2) << -1, 1).finished());

    CsvOptions named;
    named.has_header = true;
    named.label_column = "y";
    const auto with_header = tmp.file("e.csv", "y,f1,f2\nb,1,2\na,3,4\n");
    CHECK(csv_has_header(with_header));
    d = load_csv(with_header, named);
    CHECK(d.feature_names == std::vector<std::string>{"f1", "f2"});
    CHECK(d.target == (VectorXd(2) << 1, -1).finished());
    CHECK(d.features(1, 0) == 3.0);
    CHECK_FALSE(csv_has_header(tmp.file("f.csv", "1,2,3\n")));

    CsvOptions real;
    real.kind = TargetKind::real;
    d = load_csv(tmp.file("g.csv", "0,0.5\n1,-2.25\n2,7\n"), real);
    CHECK(d.kind == TargetKind::real);
    CHECK(d.target(1) == -2.25);
}

TEST_CASE("load_csv errors") {
    TempDir tmp;
    CHECK(kind_of([&] { load_csv(tmp.path / "missing.csv"); }) == ErrorKind::io);
    CHECK(kind_of([&] { load_csv(tmp.file("l.csv", "1,0\n2,1\n3,2\n")); }) == ErrorKind::label);
    try {
        load_csv(tmp.file("p.csv", "1,2,0\n3,abc,1\n"));
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
        CHECK(msg.find("abc") != std::string::npos);
    }
    CHECK(kind_of([&] { load_csv(tmp.file("r.csv", "1,2,0\n3,1\n")); }) == ErrorKind::parse);
    CHECK(kind_of([&] { load_csv(tmp.file("n.csv", "nan,0\n1,1\n")); }) == ErrorKind::parse);
    CsvOptions named;
    named.has_header = true;
    named.label_column = "nope";
    CHECK(kind_of([&] { load_csv(tmp.file("h.csv", "a,b\n1,0\n"), named); }) == ErrorKind::parse);
}

TEST_CASE("CSV round trip is exact") {
    TempDir tmp;
    SplitMix64 rng(51);
    Dataset d;
    d.features.resize(50, 3);
    d.target.resize(50);
    for (Index i = 0; i < 50; ++i) {
        for (Index j = 0; j < 3; ++j) d.features(i, j) = rng.normal() * std::exp2(rng.uniform(-40, 40));
        d.target(i) = i % 3 == 0 ? 1.0 : -1.0;
    }
    d.features(0, 0) = 0.1;
    d.features(1, 1) = -1e-300;
    d.features(2, 2) = 5e-324;
    const auto p = tmp.path / "rt.csv";
    write_csv(d, p);
    CsvOptions opts;
    opts.has_header = csv_has_header(p);
    CHECK(opts.has_header);
    const auto back = load_csv(p, opts);
    CHECK(back.features == d.features);
    CHECK(back.target == d.target);
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("standardize") {
    Dataset train;
    train.features = (MatrixXd(2, 2) << 1, 5, 3, 5).finished();
    train.target = (VectorXd(2) << 1, -1).finished();
    Dataset test;
    test.features = (MatrixXd(1, 2) << 2, 7).finished();
    test.target = (VectorXd(1) << 1).finished();
    const auto s = standardize(train, test);
    CHECK(s.train.features(0, 0) == -1.0);
    CHECK(s.train.features(1, 0) == 1.0);
    CHECK(s.stats.constant == std::vector<bool>{false, true});
    CHECK(s.train.features(0, 1) == 5.0);
    CHECK(s.test.features(0, 0) == 0.0);
    CHECK(s.test.features(0, 1) == 7.0);

    SplitMix64 rng(52);
    MatrixXd X(200, 4);
    for (Index i = 0; i < X.size(); ++i) X(i) = 3.0 + 10.0 * rng.normal();
    const auto stats = fit_scaling(X);
    const MatrixXd Z = stats.apply_rows(X);
    for (Index j = 0; j < 4; ++j) {
        const double mean = Z.col(j).mean();
        const double sd = std::sqrt((Z.col(j).array() - mean).square().mean());
        CHECK(std::abs(mean) <= 1e-10);
        CHECK(std::abs(sd - 1.0) <= 1e-10);
    }
    CHECK_THROWS_AS(stats.apply(VectorXd::Zero(3)), Error);
}

TEST_CASE("circles generator") {
    const auto a = gen_circles(400, 42);
    const auto b = gen_circles(400, 42);
    CHECK(a.size() == 400);
    CHECK(a.dimension() == 2);
    CHECK(a.features == b.features);
    CHECK(a.target == b.target);
    CHECK((a.target.array() > 0).count() == 200);
    CHECK(gen_circles(400, 43).features != a.features);

    const auto big = gen_circles(4000, 7);
    double inner = 0.0;
    double outer = 0.0;
    for (Index i = 0; i < big.size(); ++i) {
        (big.target(i) > 0 ? inner : outer) += big.features.row(i).norm();
    }
    CHECK(std::abs(inner / 2000.0 - 1.0) <= 0.05);
    CHECK(std::abs(outer / 2000.0 - 3.0) <= 0.05);
    CHECK_THROWS_AS(gen_circles(401, 1), Error);
    CHECK_THROWS_AS(gen_circles(2, 1), Error);
}

TEST_CASE("damped sine generator") {
    CHECK(damped_sine(0.0) == 0.0);
    CHECK(std::abs(damped_sine(std::numbers::pi / 2) - 0.730402691048645598) <= 1e-15);
    const auto s = gen_svr_sine(200, 42, 0.1);
    CHECK(s.x.size() == 200);
    CHECK(s.x(0) == 0.0);
    CHECK(s.x(199) == 10.0);
    for (Index i = 0; i < 200; ++i) CHECK(s.y_true(i) == damped_sine(s.x(i)));
    const VectorXd noise = s.y_noisy - s.y_true;
    const double sd = std::sqrt(noise.squaredNorm() / 200.0);
    CHECK(sd > 0.07);
    CHECK(sd < 0.13);
    const auto again = gen_svr_sine(200, 42, 0.1);
    CHECK(again.y_noisy == s.y_noisy);
    const auto clean = gen_svr_sine(10, 42, 0.0);
    CHECK(clean.y_noisy == clean.y_true);
    CHECK_THROWS_AS(gen_svr_sine(10, 42, -0.1), Error);
    CHECK_THROWS_AS(gen_svr_sine(1, 42, 0.1), Error);
}

TEST_CASE("PRNG stream is fixed") {
    // Published SplitMix64 outputs for seed 1234567.
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);
    SplitMix64 u(5);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        CHECK(u.below(7) < 7);
    }
}

TEST_CASE("model persistence") {
    TempDir tmp;
    SvcModel svc;
    svc.spec = KernelSpec::mixed(0.75, 0.3);
    svc.support_vectors = (MatrixXd(3, 2) << 0.1, 0.2, -1.0 / 3.0, 5.5, 1e-17, -2.0).finished();
    svc.dual_coef = (VectorXd(3) << 0.7, -1.0 / 7.0, 0.3 - 1e-16).finished();
    svc.support_indices = {0, 4, 9};
    svc.bias = -0.123456789012345678;
    svc.C = 8.0;
    ScalingStats stats;
    stats.mean = (VectorXd(2) << 0.5, -0.25).finished();
    stats.stddev = (VectorXd(2) << 2.0, 1.0).finished();
    stats.constant = {false, true};
    svc.scaling = stats;

    save_model(svc, tmp.path / "svc.json");
    const auto back = load_svc_model(tmp.path / "svc.json");
    CHECK(back.spec == svc.spec);
    CHECK(back.support_vectors == svc.support_vectors);
    CHECK(back.dual_coef == svc.dual_coef);
    CHECK(back.bias == svc.bias);
    SplitMix64 rng(53);
    for (int k = 0; k < 100; ++k) {
        VectorXd probe(2);
        probe << rng.uniform(-3, 3), rng.uniform(-3, 3);
        CHECK(std::abs(decision_function(back, probe) - decision_function(svc, probe)) <= 1e-12);
    }
    CHECK(model_to_json(back) == model_to_json(svc));

    SvrModel svr;
    svr.spec = KernelSpec::trig(2.0);
    svr.support_vectors = (MatrixXd(2, 1) << 0.0, 1.0).finished();
    svr.dual_coef = (VectorXd(2) << -1.5, 1.5).finished();
    svr.support_indices = {0, 1};
    svr.bias = 0.25;
    svr.epsilon = 0.05;
    save_model(svr, tmp.path / "svr.json");
    const auto svr_back = load_svr_model(tmp.path / "svr.json");
    CHECK(svr_back.epsilon == 0.05);
    for (int k = 0; k <= 50; ++k) {
        VectorXd probe(1);
        probe << 0.1 * k;
        CHECK(predict_svr(svr_back, probe) == predict_svr(svr, probe));
    }
    CHECK(kind_of([&] { load_svc_model(tmp.path / "svr.json"); }) == ErrorKind::format);

    for (const auto& spec : {KernelSpec::polynomial(3), KernelSpec::gaussian(2.0), KernelSpec::rbf(0.5),
                             KernelSpec::sigmoid(-0.5, 0.25)}) {
        SvcModel m = svc;
        m.spec = spec;
        const auto again = std::get<SvcModel>(model_from_json(model_to_json(m)));
        CHECK(again.spec == spec);
    }
}

TEST_CASE("model format errors") {
    TempDir tmp;
    SvcModel svc;
    svc.support_vectors = MatrixXd::Zero(1, 1);
    svc.dual_coef = VectorXd::Ones(1);
    svc.support_indices = {0};
    auto j = nlohmann::json::parse(model_to_json(svc));
    j["format_version"] = 99;
    CHECK(kind_of([&] { model_from_json(j.dump()); }) == ErrorKind::format);
    j.erase("format_version");
    CHECK(kind_of([&] { model_from_json(j.dump()); }) == ErrorKind::format);
    CHECK(kind_of([&] { model_from_json("{ not json"); }) == ErrorKind::parse);
    j = nlohmann::json::parse(model_to_json(svc));
    j["dual_coef"] = {1.0, 2.0};
    CHECK(kind_of([&] { model_from_json(j.dump()); }) == ErrorKind::parse);
    j = nlohmann::json::parse(model_to_json(svc));
    j["kernel"]["variant"] = "laplace";
    CHECK_THROWS_AS(model_from_json(j.dump()), Error);
    CHECK(kind_of([&] { load_model(tmp.path / "absent.json"); }) == ErrorKind::io);
}
