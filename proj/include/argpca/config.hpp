#pragma once

#include "argpca/sim_harness.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace argpca {

/// Experiment config file: one `key = value` per line, `#` starts a comment.
///
///   design       = single_spike_grid | two_spike | custom
///   p_list       = 100, 200, 500, 1000, 2000
///   n            = 40
///   sigma_sq     = 2, 1
///   tau_sq       = 40
///   a1_sq_list   = 0, 1/4, 1/2, 3/4, 1      (single_spike_grid)
///   references   = 0,0,1,0 ; 0,0,0,1        (custom: coefficients over e1..e4)
///   distribution = gaussian | student_t(5)
///   replications = 100
///   base_seed    = 20250101
///
/// Omitted keys keep the defaults of the chosen design (table1/table2 settings).
struct ParsedConfig {
    ExperimentConfig config;
    std::map<std::string, std::string> entries;  ///< normalized key -> value
    /// 16 hex digits; depends on the entries only, not on their order in the file.
    std::string digest() const;
};

/// Throws InvalidArgument naming the offending key or line.
ParsedConfig parse_config(std::istream& in);
ParsedConfig parse_config_file(const std::string& path);

/// FNV-1a 64-bit.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace argpca
