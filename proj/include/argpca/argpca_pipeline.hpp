#pragma once

#include "argpca/hdlss_pca.hpp"
#include "argpca/spiked_model.hpp"
#include "argpca/subspace.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace argpca {

/// Log-returns of p assets over n dates. Row i belongs to tickers[i]; column t to dates[t]
/// (the later date of each return interval).
struct ReturnsPanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    Eigen::MatrixXd R;  ///< p x n
    std::vector<std::string> dropped;  ///< assets removed for missing prices
};

/// Wide price CSV: header `date,TICKER1,...`, one row per date, empty cell = missing.
/// Rows are sorted by date; assets with any missing price are dropped;
/// r_t = log(price_t) - log(price_{t-1}).
ReturnsPanel ingest_prices(std::istream& csv);
ReturnsPanel ingest_prices_file(const std::filesystem::path& path);

/// p x r reference matrix, no header; columns normalized on load.
ReferenceSet load_reference_csv(std::istream& csv);
ReferenceSet load_reference_csv_file(const std::filesystem::path& path);

/// Plain numeric matrix CSV without header.
Eigen::MatrixXd read_matrix_csv(std::istream& csv);
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& M);

struct ArgPcaResult {
    Eigen::VectorXd variances;   ///< nonincreasing, >= 0
    Eigen::MatrixXd directions;  ///< p x m orthonormal; each column has nonnegative entry sum
    Eigen::MatrixXd scores;      ///< n x m = X_c^T directions
};

/// Three steps:
///  1. PCA of the centered data and the raw basis (S_m - lambda_tilde I)(I - P_V) U_m;
///  2. projection of X_c onto its orthonormalized span;
///  3. PCA (divisor n) of the projected data in the m-dimensional coordinates of that span.
/// X is centered internally (a no-op for already centered input).
ArgPcaResult arg_pca(const Eigen::MatrixXd& X, const ReferenceSet& refs, Eigen::Index m);
ArgPcaResult arg_pca(const ReturnsPanel& panel, const ReferenceSet& refs, Eigen::Index m);

/// Ordinary PCA in the same output format (leading m sample PCs).
ArgPcaResult standard_pca(const Eigen::MatrixXd& X, Eigen::Index m);

struct DefaultReferences {
    ReferenceSet refs;
    std::vector<std::string> notices;
};

/// v1 = 1_p / sqrt(p); v2 = normalized per-asset time-mean of `history` (matched by ticker)
/// when supplied. v2 is dropped if its norm is below 1e-12 or if the Gram matrix of (v1, v2)
/// has smallest eigenvalue below 1e-8.
DefaultReferences default_references(const ReturnsPanel& panel,
                                     const std::optional<ReturnsPanel>& history = std::nullopt);

struct EmitReport {
    std::filesystem::path table;
    std::optional<std::filesystem::path> standard_table;
    std::optional<std::filesystem::path> plot;
    std::vector<std::string> notices;
};

/// Writes scores.csv (`date,score_1,...,score_m`) into `dir` and, for m >= 2, score_plot.svg
/// with ARG-PCA scores as red triangles and, when `standard` is given, standard PCA scores as
/// black circles.
EmitReport emit_scores(const ArgPcaResult& result, const std::vector<std::string>& labels,
                       const std::filesystem::path& dir, const ArgPcaResult* standard = nullptr);

/// Score-plot SVG document for the first two score columns.
std::string score_plot_svg(const ArgPcaResult& result, const ArgPcaResult* standard);

}  // namespace argpca
