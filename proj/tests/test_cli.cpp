#include "argpca/arg_estimator.hpp"
#include "argpca/argpca_pipeline.hpp"
#include "argpca/cli.hpp"
#include "argpca/hdlss_pca.hpp"
#include "argpca/report.hpp"
#include "argpca/sim_harness.hpp"
#include "argpca/subspace_metrics.hpp"

#include "test_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace argpca;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("argpca_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string config(const std::string& name) { return std::string(ARGPCA_SOURCE_DIR) + "/configs/" + name; }

void write_matrix(const fs::path& path, const Eigen::MatrixXd& M) {
    std::ofstream out(path);
    write_matrix_csv(out, M);
}

}  // namespace

TEST_CASE("simulate table1 layout and manifest") {
    const fs::path dir = fresh_dir("table1");
    const Run r = cli({"simulate", "--config", config("table1.cfg"), "--out", dir.string(), "--reps", "5"});
    CHECK(r.code == kExitOk);
    const auto table = lines(slurp(dir / "table.csv"));
    REQUIRE(table.size() == 6);
    CHECK(table[0] == "p,naive,0,1/4,1/2,3/4,1");
    for (std::size_t i = 1; i < 6; ++i) CHECK(std::count(table[i].begin(), table[i].end(), '(') == 6);

    const auto summary = lines(slurp(dir / "summary.csv"));
    CHECK(summary.size() == 1 + 5 * 6);
    CHECK_FALSE(fs::exists(dir / "raw.csv"));

    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["version"] == kToolVersion);
    CHECK(manifest["base_seed"] == 20250101);
    CHECK(manifest["replications"] == 5);
    CHECK(manifest["config_digest"].get<std::string>().size() == 16);
    CHECK(manifest["cell_failures"].size() == 30);
    CHECK(manifest.contains("started_utc"));
    CHECK(manifest.contains("finished_utc"));

    const nlohmann::json js = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(js.size() == 30);
    fs::remove_all(dir);
}

TEST_CASE("simulate table2 layout, seed override and raw dump") {
    const fs::path dir = fresh_dir("table2");
    const Run r = cli({"simulate", "--config", config("table2.cfg"), "--out", dir.string(), "--reps", "3", "--seed",
                       "11", "--raw-dump", "--threads", "2"});
    CHECK(r.code == kExitOk);
    const auto table = lines(slurp(dir / "table.csv"));
    REQUIRE(table.size() == 6);
    CHECK(table[0] == "p,theta_1_arg,theta_1_naive,theta_2_arg,theta_2_naive");
    for (std::size_t i = 1; i < 6; ++i) CHECK(std::count(table[i].begin(), table[i].end(), '(') == 4);
    const auto raw = lines(slurp(dir / "raw.csv"));
    CHECK(raw[0] == "design,p,a1_sq,rep,estimator,angle_index,angle");
    CHECK(raw.size() == 1 + 5 * 3 * 4);
    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["base_seed"] == 11);
    CHECK(lines(slurp(dir / "summary.csv"))[1].substr(lines(slurp(dir / "summary.csv"))[1].rfind(',') + 1) == "11");
    fs::remove_all(dir);
}

TEST_CASE("smoke config finishes quickly") {
    const fs::path dir = fresh_dir("smoke");
    const auto start = std::chrono::steady_clock::now();
    const Run r = cli({"simulate", "--config", config("smoke.cfg"), "--out", dir.string(), "--reps", "1"});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(r.code == kExitOk);
    CHECK(secs < 5.0);
    fs::remove_all(dir);
}

TEST_CASE("simulate errors and exit codes") {
    const fs::path dir = fresh_dir("bad");
    {
        std::ofstream bad(dir / "bad.cfg");
        bad << "design = single_spike_grid\nreplicatoins = 4\n";
    }
    const Run badkey = cli({"simulate", "--config", (dir / "bad.cfg").string(), "--out", (dir / "o").string()});
    CHECK(badkey.code == kExitUsage);
    CHECK(badkey.err.find("replicatoins") != std::string::npos);

    const Run missing = cli({"simulate", "--config", (dir / "missing.cfg").string()});
    CHECK(missing.code == kExitIo);

    CHECK(cli({"simulate"}).code == kExitUsage);
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({"simulate", "--config", config("smoke.cfg"), "--reps", "0"}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
    fs::remove_all(dir);
}

TEST_CASE("argpca end to end on a synthetic panel") {
    const fs::path dir = fresh_dir("pipeline");
    {
        std::ofstream prices(dir / "prices.csv");
        argpca::testing::write_price_csv(prices, 100, 21, 12);
    }
    const fs::path out = dir / "out";
    const Run r = cli({"argpca", "--prices", (dir / "prices.csv").string(), "--m", "2", "--out", out.string(),
                       "--compare"});
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(out / "scores.csv"));
    CHECK(fs::exists(out / "scores_standard.csv"));
    CHECK(fs::exists(out / "score_plot.svg"));
    CHECK(fs::exists(out / "manifest.json"));
    const std::string angles = slurp(out / "angles.txt");
    CHECK(angles.rfind("theta_1=", 0) == 0);
    CHECK(angles.find(" theta_2=") != std::string::npos);
    CHECK(r.out.find("theta_1=") != std::string::npos);
    CHECK(lines(slurp(out / "scores.csv")).size() == 21);  // header + 20 returns

    // The reported angles agree with an in-process computation.
    const ReturnsPanel panel = ingest_prices_file(dir / "prices.csv");
    const ArgPcaResult arg = arg_pca(panel, default_references(panel).refs, 2);
    const AngleReport expect = principal_angles(arg.directions, standard_pca(panel.R, 2).directions);
    CHECK(angles == "theta_1=" + format_fixed(expect.angles[0]) + " theta_2=" + format_fixed(expect.angles[1]) + "\n");

    const fs::path plain = dir / "plain";
    CHECK(cli({"argpca", "--prices", (dir / "prices.csv").string(), "--out", plain.string()}).code == kExitOk);
    CHECK_FALSE(fs::exists(plain / "angles.txt"));
    CHECK(fs::exists(plain / "scores.csv"));

    const Run m0 = cli({"argpca", "--prices", (dir / "prices.csv").string(), "--m", "0", "--out", plain.string()});
    CHECK(m0.code == kExitUsage);
    CHECK(cli({"argpca", "--prices", (dir / "nope.csv").string()}).code == kExitIo);

    // Explicit reference file with the wrong number of rows.
    write_matrix(dir / "refs.csv", Eigen::MatrixXd::Ones(7, 1));
    CHECK(cli({"argpca", "--prices", (dir / "prices.csv").string(), "--refs", (dir / "refs.csv").string(), "--out",
               plain.string()})
              .code == kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("angles command") {
    const fs::path dir = fresh_dir("angles");
    Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(5, 1), e2 = Eigen::MatrixXd::Zero(5, 1);
    e1(0, 0) = 1.0;
    e2(1, 0) = 1.0;
    write_matrix(dir / "e1.csv", e1);
    write_matrix(dir / "e2.csv", e2);
    const Eigen::MatrixXd B = argpca::testing::random_matrix(5, 2, 3);
    write_matrix(dir / "b.csv", B);

    const Run same = cli({"angles", (dir / "b.csv").string(), (dir / "b.csv").string()});
    CHECK(same.code == kExitOk);
    CHECK(same.out == "theta_1=0.000000\ntheta_2=0.000000\n");
    const Run orth = cli({"angles", (dir / "e1.csv").string(), (dir / "e2.csv").string()});
    CHECK(orth.out == "theta_1=1.570796\n");

    Eigen::MatrixXd dup(5, 2);
    dup << B.col(0), B.col(0);
    write_matrix(dir / "dup.csv", dup);
    const Run deficient = cli({"angles", (dir / "dup.csv").string(), (dir / "b.csv").string()});
    CHECK(deficient.code == kExitOk);
    CHECK(deficient.err.find("rank deficient") != std::string::npos);

    write_matrix(dir / "wide.csv", Eigen::MatrixXd::Ones(6, 1));
    CHECK(cli({"angles", (dir / "e1.csv").string(), (dir / "wide.csv").string()}).code == kExitUsage);
    write_matrix(dir / "zero.csv", Eigen::MatrixXd::Zero(5, 1));
    CHECK(cli({"angles", (dir / "zero.csv").string(), (dir / "e1.csv").string()}).code == kExitNumerical);
    CHECK(cli({"angles", (dir / "none.csv").string(), (dir / "e1.csv").string()}).code == kExitIo);
    fs::remove_all(dir);
}

TEST_CASE("angles command round trip on saved two-spike bases") {
    const fs::path dir = fresh_dir("roundtrip");
    const ExperimentConfig cfg = table2_config();
    const SpikedModelSpec spec = model_for(cfg, 2000);
    const SampleDraw draw = draw_replication(cfg, spec, 0);
    const SamplePca pca = gram_pca(center(draw.X), 2);
    const Eigen::MatrixXd arg = arg_subspace(pca, references_for(cfg, 2000)).matrix();
    const Eigen::MatrixXd naive = pca.leading_directions();
    write_matrix(dir / "arg.csv", arg);
    write_matrix(dir / "naive.csv", naive);
    write_matrix(dir / "truth.csv", spec.spike_directions());

    for (const auto& [file, basis] : {std::pair<std::string, Eigen::MatrixXd>{"arg.csv", arg}, {"naive.csv", naive}}) {
        const AngleReport expect = principal_angles(basis, spec.spike_directions());
        const Run r = cli({"angles", (dir / file).string(), (dir / "truth.csv").string()});
        CHECK(r.code == kExitOk);
        CHECK(r.out == "theta_1=" + format_fixed(expect.angles[0], 6) + "\ntheta_2=" +
                           format_fixed(expect.angles[1], 6) + "\n");
    }
    fs::remove_all(dir);
}
