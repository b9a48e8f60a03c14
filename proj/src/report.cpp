#include "argpca/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace argpca {

namespace {

std::string format_full(double value) {
    if (!std::isfinite(value)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string a1_label(const std::optional<double>& a1_sq) {
    return a1_sq ? format_fixed(*a1_sq) : "NA";
}

std::string fraction_label(double a1_sq) {
    static const std::map<double, std::string> known{
        {0.0, "0"}, {0.25, "1/4"}, {0.5, "1/2"}, {0.75, "3/4"}, {1.0, "1"}};
    const auto it = known.find(a1_sq);
    return it != known.end() ? it->second : format_fixed(a1_sq);
}

std::string cell(const ReplicationSummary& row) {
    return format_fixed(row.mean) + " (" + format_fixed(row.std) + ")";
}

}  // namespace

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

void write_summary_csv(std::ostream& os, const std::vector<ReplicationSummary>& rows) {
    os << "design,p,a1_sq,distribution,estimator,angle_index,mean,std,reps,improvement_rate,base_seed\n";
    for (const auto& r : rows) {
        os << r.design << ',' << r.p << ',' << a1_label(r.a1_sq) << ',' << r.distribution << ','
           << r.estimator << ',' << r.angle_index << ',' << format_fixed(r.mean) << ','
           << format_fixed(r.std) << ',' << r.reps << ','
           << (r.improvement_rate ? format_fixed(*r.improvement_rate) : std::string("NA")) << ','
           << r.base_seed << '\n';
    }
}

void write_raw_csv(std::ostream& os, const std::vector<RawAngle>& raw) {
    os << "design,p,a1_sq,rep,estimator,angle_index,angle\n";
    for (const auto& r : raw)
        os << r.design << ',' << r.p << ',' << a1_label(r.a1_sq) << ',' << r.rep << ',' << r.estimator
           << ',' << r.angle_index << ',' << format_full(r.angle) << '\n';
}

nlohmann::json summary_to_json(const std::vector<ReplicationSummary>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["design"] = r.design;
        j["p"] = r.p;
        j["a1_sq"] = r.a1_sq ? nlohmann::json(*r.a1_sq) : nlohmann::json(nullptr);
        j["distribution"] = r.distribution;
        j["estimator"] = r.estimator;
        j["angle_index"] = r.angle_index;
        j["mean"] = std::isfinite(r.mean) ? nlohmann::json(r.mean) : nlohmann::json(nullptr);
        j["std"] = std::isfinite(r.std) ? nlohmann::json(r.std) : nlohmann::json(nullptr);
        j["reps"] = r.reps;
        j["failures"] = r.failures;
        j["single_rep"] = r.single_rep;
        j["improvement_rate"] =
            r.improvement_rate ? nlohmann::json(*r.improvement_rate) : nlohmann::json(nullptr);
        j["base_seed"] = r.base_seed;
        out.push_back(std::move(j));
    }
    return out;
}

void write_table_layout(std::ostream& os, const ExperimentConfig& cfg,
                        const std::vector<ReplicationSummary>& rows) {
    auto find = [&](Eigen::Index p, const std::string& est, int k,
                    std::optional<double> a1) -> const ReplicationSummary* {
        for (const auto& r : rows)
            if (r.p == p && r.estimator == est && r.angle_index == k && r.a1_sq == a1) return &r;
        return nullptr;
    };
    auto emit = [&](const ReplicationSummary* r) { os << ',' << (r ? cell(*r) : std::string("NA")); };

    if (cfg.design == Design::SingleSpikeGrid) {
        os << "p,naive";
        for (double a : cfg.a1_sq_list) os << ',' << fraction_label(a);
        os << '\n';
        for (auto p : cfg.p_list) {
            os << p;
            emit(find(p, "naive", 1, std::nullopt));
            for (double a : cfg.a1_sq_list) emit(find(p, "arg", 1, a));
            os << '\n';
        }
        return;
    }
    os << 'p';
    for (Eigen::Index k = 1; k <= cfg.m(); ++k) os << ",theta_" << k << "_arg,theta_" << k << "_naive";
    os << '\n';
    for (auto p : cfg.p_list) {
        os << p;
        for (int k = 1; k <= cfg.m(); ++k) {
            emit(find(p, "arg", k, std::nullopt));
            emit(find(p, "naive", k, std::nullopt));
        }
        os << '\n';
    }
}

}  // namespace argpca
