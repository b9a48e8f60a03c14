#include "argpca/argpca_pipeline.hpp"

#include "argpca/arg_estimator.hpp"
#include "argpca/errors.hpp"
#include "argpca/subspace_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace argpca {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::optional<double> parse_cell(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != cell.size() || !std::isfinite(v)) throw InvalidArgument("cannot parse number '" + cell + "'");
    return v;
}

void fix_signs(Eigen::MatrixXd& directions, Eigen::MatrixXd& scores) {
    for (Eigen::Index k = 0; k < directions.cols(); ++k)
        if (directions.col(k).sum() < 0.0) {
            directions.col(k) *= -1.0;
            scores.col(k) *= -1.0;
        }
}

void check_pipeline_input(const Eigen::MatrixXd& X, Eigen::Index m) {
    if (X.rows() <= X.cols())
        throw InvalidArgument("ARG-PCA: requires p > n (p=" + std::to_string(X.rows()) +
                              ", n=" + std::to_string(X.cols()) + ")");
    if (m < 1 || m > X.cols() - 2)
        throw InvalidArgument("ARG-PCA: m must satisfy 1 <= m <= n-2 (m=" + std::to_string(m) +
                              ", n=" + std::to_string(X.cols()) + ")");
}

}  // namespace

ReturnsPanel ingest_prices(std::istream& csv) {
    std::string line;
    if (!std::getline(csv, line)) throw InvalidArgument("prices: empty input");
    const std::vector<std::string> header = split_row(line);
    if (header.size() < 2) throw InvalidArgument("prices: header needs a date column and at least one ticker");
    const std::size_t assets = header.size() - 1;

    std::vector<std::pair<std::string, std::vector<std::optional<double>>>> rows;
    int lineno = 1;
    while (std::getline(csv, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != header.size())
            throw InvalidArgument("prices line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
        std::vector<std::optional<double>> prices(assets);
        for (std::size_t a = 0; a < assets; ++a) {
            try {
                prices[a] = parse_cell(cells[a + 1]);
            } catch (const InvalidArgument& ex) {
                throw InvalidArgument("prices: asset " + header[a + 1] + " on " + cells[0] + ": " + ex.what());
            }
            if (prices[a] && !(*prices[a] > 0.0))
                throw InvalidArgument("prices: nonpositive price for asset " + header[a + 1] + " on " + cells[0]);
        }
        rows.emplace_back(cells[0], std::move(prices));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t t = 1; t < rows.size(); ++t)
        if (rows[t].first == rows[t - 1].first) throw InvalidArgument("prices: duplicate date " + rows[t].first);
    if (rows.size() < 2) throw InvalidArgument("prices: need at least 2 dates");

    ReturnsPanel panel;
    std::vector<std::size_t> keep;
    for (std::size_t a = 0; a < assets; ++a) {
        const bool complete = std::all_of(rows.begin(), rows.end(), [&](const auto& r) { return r.second[a].has_value(); });
        if (complete) {
            keep.push_back(a);
            panel.tickers.push_back(header[a + 1]);
        } else {
            panel.dropped.push_back(header[a + 1]);
        }
    }
    if (keep.empty()) throw InvalidArgument("prices: no asset has a complete price history");

    const auto n = static_cast<Eigen::Index>(rows.size() - 1);
    panel.R.resize(static_cast<Eigen::Index>(keep.size()), n);
    for (Eigen::Index t = 0; t < n; ++t) {
        panel.dates.push_back(rows[t + 1].first);
        for (std::size_t i = 0; i < keep.size(); ++i)
            panel.R(static_cast<Eigen::Index>(i), t) =
                std::log(*rows[t + 1].second[keep[i]]) - std::log(*rows[t].second[keep[i]]);
    }
    return panel;
}

ReturnsPanel ingest_prices_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open price file '" + path.string() + "'");
    return ingest_prices(in);
}

Eigen::MatrixXd read_matrix_csv(std::istream& csv) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(csv, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split_row(line)) {
            std::optional<double> v;
            try {
                v = parse_cell(cell);
            } catch (const InvalidArgument& ex) {
                throw InvalidArgument("matrix line " + std::to_string(lineno) + ": " + ex.what());
            }
            if (!v) throw InvalidArgument("matrix line " + std::to_string(lineno) + ": empty cell");
            row.push_back(*v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InvalidArgument("matrix line " + std::to_string(lineno) + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidArgument("matrix: no rows");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = rows[i][j];
    return M;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& M) {
    char buf[64];
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
            os << (j ? "," : "") << buf;
        }
        os << '\n';
    }
}

ReferenceSet load_reference_csv(std::istream& csv) {
    return ReferenceSet::normalized(read_matrix_csv(csv));
}

ReferenceSet load_reference_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open reference file '" + path.string() + "'");
    return load_reference_csv(in);
}

ArgPcaResult arg_pca(const Eigen::MatrixXd& X, const ReferenceSet& refs, Eigen::Index m) {
    check_pipeline_input(X, m);
    if (refs.p() != X.rows()) throw InvalidArgument("ARG-PCA: reference dimension does not match data");
    if (m + refs.r() > X.rows()) throw InvalidArgument("ARG-PCA: need m + r <= p");

    // Step 1
    const SamplePca pca = gram_pca(center(X), m);
    const Orthonormalized q = orthonormalize(arg_raw_basis(pca, refs));
    if (q.rank != m)
        throw DegenerateGeometryError("ARG-PCA: ARG basis has rank " + std::to_string(q.rank) +
                                      " < m = " + std::to_string(m));
    const Eigen::MatrixXd& basis = q.basis.matrix();

    // Step 2: coordinates of the projected data in the ARG basis (m x n).
    const Eigen::MatrixXd coords = basis.transpose() * pca.X_centered;

    // Step 3: m x m PCA, divisor n.
    const double n = static_cast<double>(X.cols());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(coords * coords.transpose() / n);
    if (eig.info() != Eigen::Success) throw NumericalError("ARG-PCA: eigensolver failed");
    const Eigen::MatrixXd rot = eig.eigenvectors().rowwise().reverse();

    ArgPcaResult out;
    out.variances = eig.eigenvalues().reverse().cwiseMax(0.0);
    out.directions = basis * rot;
    out.scores = coords.transpose() * rot;
    fix_signs(out.directions, out.scores);
    return out;
}

ArgPcaResult arg_pca(const ReturnsPanel& panel, const ReferenceSet& refs, Eigen::Index m) {
    return arg_pca(panel.R, refs, m);
}

ArgPcaResult standard_pca(const Eigen::MatrixXd& X, Eigen::Index m) {
    check_pipeline_input(X, m);
    const SamplePca pca = gram_pca(center(X), m);
    ArgPcaResult out;
    out.variances = pca.leading_lambdas();
    out.directions = pca.leading_directions();
    out.scores = pca.X_centered.transpose() * out.directions;
    fix_signs(out.directions, out.scores);
    return out;
}

DefaultReferences default_references(const ReturnsPanel& panel, const std::optional<ReturnsPanel>& history) {
    const auto p = static_cast<Eigen::Index>(panel.tickers.size());
    if (p < 1 || panel.R.rows() != p) throw InvalidArgument("default_references: empty panel");
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(p, 1, 1.0 / std::sqrt(static_cast<double>(p)));
    std::vector<std::string> notices;
    if (!history) return {ReferenceSet(std::move(v)), notices};

    std::map<std::string, Eigen::Index> rows;
    for (std::size_t i = 0; i < history->tickers.size(); ++i)
        rows.emplace(history->tickers[i], static_cast<Eigen::Index>(i));
    Eigen::VectorXd mean(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const auto it = rows.find(panel.tickers[i]);
        if (it == rows.end())
            throw InvalidArgument("default_references: asset " + panel.tickers[i] + " missing from history");
        mean(i) = history->R.row(it->second).mean();
    }
    const double norm = mean.norm();
    if (!(norm >= 1e-12)) {
        notices.emplace_back("mean-return reference dropped: norm below 1e-12");
        return {ReferenceSet(std::move(v)), notices};
    }
    Eigen::MatrixXd pair(p, 2);
    pair.col(0) = v.col(0);
    pair.col(1) = mean / norm;
    if (p < 2 || gram_min_eig(pair) < 1e-8) {
        notices.emplace_back("mean-return reference dropped: collinear with the equal-weight reference");
        return {ReferenceSet(std::move(v)), notices};
    }
    return {ReferenceSet(std::move(pair)), notices};
}

std::string score_plot_svg(const ArgPcaResult& result, const ArgPcaResult* standard) {
    if (result.scores.cols() < 2) throw InvalidArgument("score plot: needs at least two components");
    constexpr double W = 640, H = 640, pad = 60;
    double lo_x = result.scores.col(0).minCoeff(), hi_x = result.scores.col(0).maxCoeff();
    double lo_y = result.scores.col(1).minCoeff(), hi_y = result.scores.col(1).maxCoeff();
    if (standard) {
        lo_x = std::min(lo_x, standard->scores.col(0).minCoeff());
        hi_x = std::max(hi_x, standard->scores.col(0).maxCoeff());
        lo_y = std::min(lo_y, standard->scores.col(1).minCoeff());
        hi_y = std::max(hi_y, standard->scores.col(1).maxCoeff());
    }
    const double span_x = hi_x > lo_x ? hi_x - lo_x : 1.0;
    const double span_y = hi_y > lo_y ? hi_y - lo_y : 1.0;
    auto sx = [&](double x) { return pad + (x - lo_x) / span_x * (W - 2 * pad); };
    auto sy = [&](double y) { return H - pad - (y - lo_y) / span_y * (H - 2 * pad); };

    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">PC1 score</text>\n";
    os << "<text x=\"20\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << H / 2
       << ")\">PC2 score</text>\n";
    if (standard) {
        os << "<g id=\"standard-pca\" fill=\"black\">\n";
        for (Eigen::Index t = 0; t < standard->scores.rows(); ++t)
            os << "<circle cx=\"" << sx(standard->scores(t, 0)) << "\" cy=\"" << sy(standard->scores(t, 1))
               << "\" r=\"4\"/>\n";
        os << "</g>\n";
    }
    os << "<g id=\"arg-pca\" fill=\"red\">\n";
    for (Eigen::Index t = 0; t < result.scores.rows(); ++t) {
        const double x = sx(result.scores(t, 0)), y = sy(result.scores(t, 1));
        os << "<polygon points=\"" << x << ',' << y - 5 << ' ' << x - 4.5 << ',' << y + 4 << ' ' << x + 4.5 << ','
           << y + 4 << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

EmitReport emit_scores(const ArgPcaResult& result, const std::vector<std::string>& labels,
                       const std::filesystem::path& dir, const ArgPcaResult* standard) {
    const Eigen::Index n = result.scores.rows();
    if (static_cast<Eigen::Index>(labels.size()) != n)
        throw InvalidArgument("emit_scores: need one label per observation");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    auto write_table = [&](const ArgPcaResult& res, const std::filesystem::path& path) {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out << "date";
        for (Eigen::Index k = 0; k < res.scores.cols(); ++k) out << ",score_" << k + 1;
        out << '\n';
        char buf[64];
        for (Eigen::Index t = 0; t < n; ++t) {
            out << labels[t];
            for (Eigen::Index k = 0; k < res.scores.cols(); ++k) {
                std::snprintf(buf, sizeof buf, "%.10g", res.scores(t, k));
                out << ',' << buf;
            }
            out << '\n';
        }
        if (!out) throw IoError("write failed for '" + path.string() + "'");
    };

    EmitReport report;
    report.table = dir / "scores.csv";
    write_table(result, report.table);
    if (standard) {
        report.standard_table = dir / "scores_standard.csv";
        write_table(*standard, *report.standard_table);
    }
    if (result.scores.cols() < 2) {
        report.notices.emplace_back("score plot skipped: needs m >= 2");
        return report;
    }
    report.plot = dir / "score_plot.svg";
    std::ofstream svg(*report.plot);
    if (!svg) throw IoError("cannot write '" + report.plot->string() + "'");
    svg << score_plot_svg(result, standard);
    if (!svg) throw IoError("write failed for '" + report.plot->string() + "'");
    return report;
}

}  // namespace argpca
