#include "argpca/config.hpp"

#include "argpca/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace argpca {

namespace {

std::string strip(const std::string& s) {
    std::string out;
    std::copy_if(s.begin(), s.end(), std::back_inserter(out),
                 [](unsigned char c) { return !std::isspace(c); });
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_number(const std::string& key, const std::string& token) {
    const auto slash = token.find('/');
    try {
        std::size_t used = 0;
        if (slash != std::string::npos) {
            const std::string num = token.substr(0, slash), den = token.substr(slash + 1);
            std::size_t u2 = 0;
            const double a = std::stod(num, &used);
            const double b = std::stod(den, &u2);
            if (used != num.size() || u2 != den.size() || b == 0.0) throw std::invalid_argument(token);
            return a / b;
        }
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("config key '" + key + "': cannot parse number '" + token + "'");
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& tok : split(value, ',')) {
        if (tok.empty()) throw InvalidArgument("config key '" + key + "': empty list element");
        out.push_back(parse_number(key, tok));
    }
    return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    if (v != static_cast<double>(static_cast<long long>(v)))
        throw InvalidArgument("config key '" + key + "': expected an integer, got '" + value + "'");
    return static_cast<long long>(v);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string ParsedConfig::digest() const {
    std::string canonical;
    for (const auto& [k, v] : entries) canonical += k + '=' + v + '\n';
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
    return buf;
}

ParsedConfig parse_config(std::istream& in) {
    ParsedConfig parsed;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (strip(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) throw InvalidArgument("config key '" + key + "': empty value");
        if (!parsed.entries.emplace(key, value).second)
            throw InvalidArgument("config key '" + key + "': given more than once");
    }

    const auto& e = parsed.entries;
    ExperimentConfig cfg;
    if (auto it = e.find("design"); it != e.end()) {
        try {
            cfg.design = parse_design(it->second);
        } catch (const InvalidArgument& ex) {
            throw InvalidArgument(std::string("config key 'design': ") + ex.what());
        }
    }
    cfg = cfg.design == Design::SingleSpikeGrid ? table1_config() : table2_config();
    if (auto it = e.find("design"); it != e.end()) cfg.design = parse_design(it->second);

    for (const auto& [key, value] : e) {
        if (key == "design") continue;
        if (key == "p_list") {
            cfg.p_list.clear();
            for (double v : parse_list(key, value)) {
                if (v != static_cast<double>(static_cast<long long>(v)) || v < 1)
                    throw InvalidArgument("config key 'p_list': dimensions must be positive integers");
                cfg.p_list.push_back(static_cast<Eigen::Index>(v));
            }
        } else if (key == "n") {
            cfg.n = parse_integer(key, value);
        } else if (key == "sigma_sq") {
            cfg.sigma_sq = parse_list(key, value);
        } else if (key == "tau_sq") {
            cfg.tau_sq = parse_number(key, value);
        } else if (key == "a1_sq_list") {
            cfg.a1_sq_list = parse_list(key, value);
        } else if (key == "references") {
            cfg.reference_coeffs.clear();
            for (const auto& ref : split(value, ';')) {
                const auto coeffs = parse_list(key, ref);
                if (coeffs.size() != 4)
                    throw InvalidArgument("config key 'references': each reference needs 4 coefficients");
                cfg.reference_coeffs.push_back({coeffs[0], coeffs[1], coeffs[2], coeffs[3]});
            }
        } else if (key == "distribution") {
            try {
                cfg.distribution = Distribution::parse(value);
            } catch (const InvalidArgument& ex) {
                throw InvalidArgument(std::string("config key 'distribution': ") + ex.what());
            }
        } else if (key == "replications") {
            cfg.replications = static_cast<int>(parse_integer(key, value));
        } else if (key == "base_seed") {
            try {
                std::size_t used = 0;
                cfg.base_seed = std::stoull(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                throw InvalidArgument("config key 'base_seed': expected an unsigned integer");
            }
        } else {
            throw InvalidArgument("config key '" + key + "': unknown key");
        }
    }
    try {
        cfg.validate();
    } catch (const InvalidArgument& ex) {
        throw InvalidArgument(std::string("config ") + ex.what());
    }
    parsed.config = std::move(cfg);
    return parsed;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_config(in);
}

}  // namespace argpca
