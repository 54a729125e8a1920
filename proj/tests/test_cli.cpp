#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "helpers.hpp"
#include "l2relax/csv.hpp"
#include "l2relax/error.hpp"

using namespace l2relax;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "l2relax");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "l2relax_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("csv parse and round trip") {
    const LabeledMatrix m = parse_csv("a, b\n1,2.5\n-3,4e-3\n");
    CHECK(m.labels == std::vector<std::string>{"a", "b"});
    CHECK(m.values(1, 1) == 4e-3);
    CHECK_THROWS_AS(parse_csv("1,2\n3,4\n"), Error);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), Error);
    CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), Error);
    CHECK_THROWS_AS(parse_csv("a,b\n1,nan\n"), Error);
    CHECK_THROWS_AS(parse_csv(""), Error);

    RngStream rng(61, 0);
    const Matrix v = standard_normal(rng, 3, 4) / 3.0;
    std::ostringstream os;
    write_csv(os, {"w1", "w2", "w3", "w4"}, v);
    const LabeledMatrix back = parse_csv(os.str());
    CHECK(max_abs(back.values - v) == 0.0);
}

TEST_CASE("read_covariance_csv checks shape and symmetry") {
    CHECK_THROWS_AS(read_covariance_csv(temp_file("rect.csv", "a,b\n1,0\n")), Error);
    CHECK_THROWS_AS(read_covariance_csv(temp_file("asym.csv", "a,b\n1,0.5\n0,1\n")), Error);
    CHECK(read_covariance_csv(temp_file("ok.csv", "a,b\n1,0.5\n0.5,1\n")).sigma(0, 1) == 0.5);
    CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), Error);
}

TEST_CASE("solve command") {
    const auto id = temp_file("id.csv", "a,b,c,d\n1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n");
    const Run r = run({"solve", "--cov", id.string(), "--tau", "0.5"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    for (const auto& w : j["w"]) CHECK(w.get<double>() == doctest::Approx(0.25));
    CHECK(j["labels"][2] == "c");
    CHECK(j.contains("kkt"));

    const auto d = temp_file("d.csv", "x,y,z\n1,0,0\n0,2,0\n0,0,3\n");
    const json jd = json::parse(run({"solve", "--cov", d.string(), "--tau", "0"}).out);
    CHECK(jd["w"][0].get<double>() == doctest::Approx(6.0 / 11.0));
    CHECK(jd["w"][1].get<double>() == doctest::Approx(3.0 / 11.0));
    CHECK(jd["w"][2].get<double>() == doctest::Approx(2.0 / 11.0));

    const Run neg = run({"solve", "--cov", d.string(), "--tau", "-1"});
    CHECK(neg.code == 2);
    CHECK(neg.err.find("domain") != std::string::npos);

    CHECK(run({"solve", "--cov", "/nonexistent.csv", "--tau", "0.1"}).code == 2);
    CHECK(run({"solve", "--tau", "0.1"}).code == 2);
    CHECK(run({"solve", "--cov", d.string(), "--panel", d.string(), "--tau", "0.1"}).code == 2);
    const Run nl = run({"solve", "--cov", d.string(), "--tau", "0.1", "--estimator", "lw_nonlinear"});
    CHECK(nl.code == 2);
    CHECK(nl.err.find("lw_nonlinear") != std::string::npos);
    CHECK(run({"solve", "--cov", temp_file("bad.csv", "a,b\n1,q\nz,1\n").string(), "--tau", "0.1"}).code == 2);
}

TEST_CASE("solve emits weight CSVs that re-ingest exactly") {
    RngStream rng(62, 0);
    const Matrix s = testutil::random_sample_vc(rng, 5, 20);
    std::ostringstream os;
    write_csv(os, {"a", "b", "c", "d", "e"}, s);
    const auto cov = temp_file("rt.csv", os.str());
    const Run csv = run({"solve", "--cov", cov.string(), "--tau", "0.05", "--format", "csv"});
    REQUIRE(csv.code == 0);
    const json j = json::parse(run({"solve", "--cov", cov.string(), "--tau", "0.05"}).out);
    const LabeledMatrix back = parse_csv(csv.out);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(std::abs(back.values(0, i) - j["w"][i].get<double>()) <= 1e-12);
}

TEST_CASE("path command on identity covariance") {
    const auto id = temp_file("id3.csv", "a,b,c\n1,0,0\n0,1,0\n0,0,1\n");
    const Run r = run({"path", "--cov", id.string(), "--grid", "0:1:0.25"});
    REQUIRE(r.code == 0);
    const LabeledMatrix m = parse_csv(r.out);
    CHECK(m.values.rows() == 5);
    CHECK(m.labels.front() == "tau");
    CHECK((m.values.rightCols(3).array() - 1.0 / 3.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("combine command chooses a grid member") {
    RngStream rng(63, 0);
    const Matrix f = standard_normal(rng, 40, 4);
    Matrix panel(40, 5);
    panel.leftCols(4) = f;
    panel.col(4) = f.rowwise().mean() + 0.3 * standard_normal(rng, 40, 1).col(0);
    std::ostringstream os;
    write_csv(os, {"f1", "f2", "f3", "f4", "y"}, panel);
    const auto file = temp_file("panel.csv", os.str());
    for (const std::string scheme : {"kfold", "oos"}) {
        const Run r = run({"combine", "--panel", file.string(), "--grid", "0.1:1:0.1", "--scheme", scheme, "--seed", "3"});
        REQUIRE(r.code == 0);
        const double tau = json::parse(r.out)["chosen_tau"].get<double>();
        bool member = false;
        for (int k = 1; k <= 10; ++k) member = member || std::abs(tau - 0.1 * k) < 1e-12;
        CHECK(member);
    }
    const auto noy = temp_file("noy.csv", "a,b\n1,2\n3,4\n5,6\n");
    CHECK(run({"combine", "--panel", noy.string()}).code == 2);
}

TEST_CASE("biasvar command layout") {
    const Run r = run({"biasvar", "--reps", "5", "--seed", "1"});
    REQUIRE(r.code == 0);
    const LabeledMatrix m = parse_csv(r.out);
    CHECK(m.labels == std::vector<std::string>{"tau", "bias2_w1", "var_w1", "mse_w1", "mse_yhat"});
    CHECK(m.values.rows() == 21);
}

TEST_CASE("simulate command is reproducible and independent of jobs") {
    const Run a = run({"simulate", "--T", "20", "--N", "20", "--K", "2", "--reps", "2", "--seed", "8"});
    const Run b = run({"simulate", "--T", "20", "--N", "20", "--K", "2", "--reps", "2", "--seed", "8", "--jobs", "2"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("dgp,snr,T,N,K,reps,estimator,msfe,mafe\n", 0) == 0);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 11);
}

TEST_CASE("seed falls back to the environment") {
    const std::vector<std::string> args = {"biasvar", "--reps", "3", "--grid", "0:0.02:0.01"};
    setenv("L2RELAX_SEED", "17", 1);
    const Run env = run(args);
    unsetenv("L2RELAX_SEED");
    std::vector<std::string> explicit_seed = args;
    explicit_seed.insert(explicit_seed.end(), {"--seed", "17"});
    CHECK(env.out == run(explicit_seed).out);
    setenv("L2RELAX_SEED", "abc", 1);
    CHECK(run(args).code == 2);
    unsetenv("L2RELAX_SEED");
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"simulate", "--dgp", "4"}).code == 2);
    CHECK(run({"simulate", "--N", "7", "--reps", "1"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("backtest command on a returns CSV") {
    RngStream rng(64, 0);
    const Matrix r = standard_normal(rng, 40, 3) + Matrix::Constant(40, 3, 0.1);
    std::ostringstream os;
    write_csv(os, {"a", "b", "c"}, r);
    const auto file = temp_file("ret.csv", os.str());
    const Run res = run({"backtest", "--returns", file.string(), "--window", "20"});
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j["realized_returns"].size() == 20);
    CHECK(j["weights_history"].size() == 2);
    CHECK(run({"backtest", "--returns", file.string(), "--window", "20", "--method", "gec", "--gec-c", "1"}).code == 0);
}
