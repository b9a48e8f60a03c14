#pragma once

#include "argpca/sim_harness.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace argpca {

/// design,p,a1_sq,distribution,estimator,angle_index,mean,std,reps,improvement_rate,base_seed
/// Angles at 4 decimals; missing a1_sq / improvement_rate written as NA.
void write_summary_csv(std::ostream& os, const std::vector<ReplicationSummary>& rows);

/// design,p,a1_sq,rep,estimator,angle_index,angle at full precision.
void write_raw_csv(std::ostream& os, const std::vector<RawAngle>& raw);

nlohmann::json summary_to_json(const std::vector<ReplicationSummary>& rows);

/// Paper-style layout: one row per p. Single-spike grids get columns
/// naive, a1^2 values...; subspace designs get theta_k ARG / naive pairs. Cells are
/// "mean (std)".
void write_table_layout(std::ostream& os, const ExperimentConfig& cfg,
                        const std::vector<ReplicationSummary>& rows);

/// Fixed 4-decimal formatting used by every table writer.
std::string format_fixed(double value, int decimals = 4);

}  // namespace argpca
