#include "argpca/cli.hpp"

#include "argpca/argpca_pipeline.hpp"
#include "argpca/config.hpp"
#include "argpca/errors.hpp"
#include "argpca/hdlss_pca.hpp"
#include "argpca/report.hpp"
#include "argpca/sim_harness.hpp"
#include "argpca/subspace.hpp"
#include "argpca/subspace_metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace argpca {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    writer(out);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string digest_of(const std::string& text) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

int simulate(const std::string& config_path, const fs::path& out_dir, int threads,
             std::optional<std::uint64_t> seed, std::optional<int> reps, bool raw_dump, std::ostream& out) {
    ParsedConfig parsed = parse_config_file(config_path);
    ExperimentConfig& cfg = parsed.config;
    if (seed) cfg.base_seed = *seed;
    if (reps) {
        if (*reps < 1) throw InvalidArgument("--reps: must be >= 1");
        cfg.replications = *reps;
    }
    cfg.validate();

    const std::string started = utc_now();
    const GridResult result = run_experiment(cfg, Execution{threads, false});
    const std::string finished = utc_now();

    ensure_dir(out_dir);
    write_file(out_dir / "summary.csv", [&](std::ostream& os) { write_summary_csv(os, result.summaries); });
    write_file(out_dir / "summary.json",
               [&](std::ostream& os) { os << summary_to_json(result.summaries).dump(2) << '\n'; });
    write_file(out_dir / "table.csv", [&](std::ostream& os) { write_table_layout(os, cfg, result.summaries); });
    if (raw_dump) write_file(out_dir / "raw.csv", [&](std::ostream& os) { write_raw_csv(os, result.raw); });

    nlohmann::json manifest;
    manifest["tool"] = "argpca";
    manifest["version"] = kToolVersion;
    manifest["command"] = "simulate";
    manifest["config_path"] = config_path;
    manifest["config_digest"] = parsed.digest();
    manifest["config"] = parsed.entries;
    manifest["base_seed"] = cfg.base_seed;
    manifest["replications"] = cfg.replications;
    manifest["threads"] = threads;
    manifest["started_utc"] = started;
    manifest["finished_utc"] = finished;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& s : result.summaries)
        failures.push_back({{"p", s.p},
                            {"a1_sq", s.a1_sq ? nlohmann::json(*s.a1_sq) : nlohmann::json(nullptr)},
                            {"estimator", s.estimator},
                            {"angle_index", s.angle_index},
                            {"failures", s.failures}});
    manifest["cell_failures"] = failures;
    write_file(out_dir / "manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });

    write_table_layout(out, cfg, result.summaries);
    const int failed = result.total_failures();
    if (failed > 0) {
        out << failed << " replication estimates failed; see manifest.json\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int run_argpca(const std::string& prices, const std::string& refs_path, const std::string& history_path,
               int m, const fs::path& out_dir, bool compare, std::ostream& out) {
    const std::string started = utc_now();
    const ReturnsPanel panel = ingest_prices_file(prices);
    const Eigen::Index n = panel.R.cols();
    if (m < 1 || m > n - 2)
        throw InvalidArgument("--m: must satisfy 1 <= m <= n-2 (n=" + std::to_string(n) + " returns)");

    std::vector<std::string> notices;
    for (const auto& t : panel.dropped) notices.push_back("dropped asset " + t + " (missing prices)");
    std::optional<ReferenceSet> refs;
    if (!refs_path.empty()) {
        refs = load_reference_csv_file(refs_path);
    } else {
        std::optional<ReturnsPanel> history;
        if (!history_path.empty()) history = ingest_prices_file(history_path);
        DefaultReferences def = default_references(panel, history);
        notices.insert(notices.end(), def.notices.begin(), def.notices.end());
        refs = std::move(def.refs);
    }
    if (refs->p() != panel.R.rows())
        throw InvalidArgument("references have " + std::to_string(refs->p()) + " rows but the panel has " +
                              std::to_string(panel.R.rows()) + " assets");

    const ArgPcaResult result = arg_pca(panel, *refs, m);
    std::optional<ArgPcaResult> standard;
    if (compare) standard = standard_pca(panel.R, m);

    ensure_dir(out_dir);
    const EmitReport emitted = emit_scores(result, panel.dates, out_dir, standard ? &*standard : nullptr);
    notices.insert(notices.end(), emitted.notices.begin(), emitted.notices.end());
    write_file(out_dir / "arg_directions.csv", [&](std::ostream& os) { write_matrix_csv(os, result.directions); });

    nlohmann::json manifest;
    std::string angle_line;
    if (standard) {
        write_file(out_dir / "standard_directions.csv",
                   [&](std::ostream& os) { write_matrix_csv(os, standard->directions); });
        const AngleReport angles = principal_angles(result.directions, standard->directions);
        for (std::size_t k = 0; k < angles.angles.size(); ++k)
            angle_line += (k ? " " : "") + std::string("theta_") + std::to_string(k + 1) + "=" +
                          format_fixed(angles.angles[k]);
        write_file(out_dir / "angles.txt", [&](std::ostream& os) { os << angle_line << '\n'; });
        manifest["angles"] = angles.angles;
    }

    manifest["tool"] = "argpca";
    manifest["version"] = kToolVersion;
    manifest["command"] = "argpca";
    manifest["prices"] = prices;
    manifest["prices_digest"] = digest_of([&] {
        std::ifstream in(prices);
        return std::string(std::istreambuf_iterator<char>(in), {});
    }());
    manifest["references"] = refs_path.empty() ? (history_path.empty() ? "default" : "default+history") : refs_path;
    if (!history_path.empty()) manifest["history"] = history_path;
    manifest["m"] = m;
    manifest["r"] = refs->r();
    manifest["assets"] = panel.tickers.size();
    manifest["observations"] = n;
    manifest["variances"] = std::vector<double>(result.variances.data(), result.variances.data() + result.variances.size());
    manifest["notices"] = notices;
    manifest["started_utc"] = started;
    manifest["finished_utc"] = utc_now();
    write_file(out_dir / "manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });

    for (const auto& note : notices) out << "note: " << note << '\n';
    out << "ARG-PCA: p=" << panel.R.rows() << " n=" << n << " m=" << m << " r=" << refs->r() << '\n';
    for (Eigen::Index k = 0; k < result.variances.size(); ++k)
        out << "variance_" << k + 1 << '=' << format_fixed(result.variances(k), 6) << '\n';
    if (!angle_line.empty()) out << angle_line << '\n';
    return kExitOk;
}

SubspaceBasis load_basis(const std::string& path, std::ostream& err) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open basis file '" + path + "'");
    const Eigen::MatrixXd M = read_matrix_csv(in);
    if (M.cols() > M.rows()) throw InvalidArgument("basis '" + path + "' has more columns than rows");
    Orthonormalized q = orthonormalize(M);
    if (q.rank < M.cols())
        err << "warning: basis '" << path << "' is rank deficient (rank " << q.rank << " of " << M.cols()
            << " columns)\n";
    return std::move(q.basis);
}

int angles_cmd(const std::string& a_path, const std::string& b_path, std::ostream& out, std::ostream& err) {
    const SubspaceBasis a = load_basis(a_path, err);
    const SubspaceBasis b = load_basis(b_path, err);
    if (a.ambient() != b.ambient())
        throw InvalidArgument("bases have different dimensions (" + std::to_string(a.ambient()) + " vs " +
                              std::to_string(b.ambient()) + ")");
    const AngleReport report = principal_angles(a, b);
    for (std::size_t k = 0; k < report.angles.size(); ++k)
        out << "theta_" << k + 1 << '=' << format_fixed(report.angles[k], 6) << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ARG estimator for PC subspaces in high dimension, low sample size data", "argpca"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    int threads = 0;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    bool raw_dump = false;
    auto* sim = app.add_subcommand("simulate", "Run a Monte-Carlo replication grid");
    sim->add_option("--config", config_path, "Experiment config file")->required();
    sim->add_option("--out", out_dir, "Output directory");
    sim->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sim->add_option("--seed", seed, "Override the config base_seed");
    sim->add_option("--reps", reps, "Override the replication count");
    sim->add_flag("--raw-dump", raw_dump, "Also write per-replication angles");

    std::string prices, refs_path, history_path;
    int m = 2;
    bool compare = false;
    auto* pipe = app.add_subcommand("argpca", "Run ARG-PCA on a price panel");
    pipe->add_option("--prices", prices, "Wide CSV of adjusted closing prices")->required();
    pipe->add_option("--m", m, "Number of spikes");
    pipe->add_option("--refs", refs_path, "Reference CSV (p rows x r columns, no header)");
    pipe->add_option("--history", history_path, "Longer price CSV for the mean-return reference");
    pipe->add_option("--out", out_dir, "Output directory");
    pipe->add_flag("--compare", compare, "Also run standard PCA and report principal angles");

    std::string basis_a, basis_b;
    auto* ang = app.add_subcommand("angles", "Principal angles between two stored bases");
    ang->add_option("basis_a", basis_a, "p x k CSV")->required();
    ang->add_option("basis_b", basis_b, "p x k CSV")->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (*sim) return simulate(config_path, out_dir, threads, seed, reps, raw_dump, out);
        if (*pipe) return run_argpca(prices, refs_path, history_path, m, out_dir, compare, out);
        if (*ang) return angles_cmd(basis_a, basis_b, out, err);
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace argpca
