#include "bmde/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace bmde {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ConfigError("empty element in list '" + value + "'");
        }
        items.push_back(item);
    }
    if (items.empty()) {
        throw ConfigError("empty list");
    }
    return items;
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a real number, got '" + value + "'");
    }
}

std::uint64_t parse_seed(const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("key 'seed': expected an unsigned integer, got '" + value + "'");
    }
}

} // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig config;
    std::map<std::string, std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = lower(trim(stripped.substr(0, eq)));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        if (!seen.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                              key + "'");
        }

        if (key == "distribution") {
            config.distributions.clear();
            for (const std::string& item : split_list(value)) {
                const std::string name = lower(item);
                if (name == "clean") {
                    config.distributions.push_back(DistributionKind::Clean);
                } else if (name == "contaminated") {
                    config.distributions.push_back(DistributionKind::Contaminated);
                } else if (name == "both") {
                    config.distributions.push_back(DistributionKind::Clean);
                    config.distributions.push_back(DistributionKind::Contaminated);
                } else {
                    throw ConfigError("distribution must be clean, contaminated or both");
                }
            }
        } else if (key == "m") {
            config.m_values.clear();
            for (const std::string& item : split_list(value)) {
                config.m_values.push_back(parse_int(key, item));
            }
        } else if (key == "n") {
            config.n_values.clear();
            for (const std::string& item : split_list(value)) {
                config.n_values.push_back(parse_int(key, item));
            }
        } else if (key == "p") {
            config.p_true = parse_real(key, value);
        } else if (key == "nu") {
            config.nu = parse_real(key, value);
        } else if (key == "z") {
            if (lower(value) == "m") {
                config.z_rule = ZRule{};
            } else {
                config.z_rule = ZRule::fixed_at(parse_int(key, value));
            }
        } else if (key == "replications") {
            config.replications = parse_int(key, value);
        } else if (key == "estimators") {
            config.estimators.clear();
            for (const std::string& item : split_list(value)) {
                const std::string name = lower(item);
                if (name == "md") {
                    config.estimators.push_back(Estimator::MD);
                } else if (name == "ml") {
                    config.estimators.push_back(Estimator::ML);
                } else if (name == "e") {
                    config.estimators.push_back(Estimator::E);
                } else {
                    throw ConfigError("unknown estimator '" + item + "'");
                }
            }
        } else if (key == "c1") {
            config.disparity.c1 = parse_real(key, value);
        } else if (key == "c2") {
            config.disparity.c2 = parse_real(key, value);
        } else if (key == "seed") {
            config.master_seed = parse_seed(value);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
        }
    }
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_experiment_config(in);
}

std::vector<int> read_observation_file(std::istream& in, int m) {
    std::vector<int> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        int value = 0;
        try {
            std::size_t used = 0;
            value = std::stoi(stripped, &used);
            if (used != stripped.size()) {
                throw std::invalid_argument(stripped);
            }
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected an integer, got '" + stripped + "'");
        }
        if (value < 0 || value > m) {
            throw ConfigError("line " + std::to_string(line_no) + ": value " +
                              std::to_string(value) + " outside the support {0..." +
                              std::to_string(m) + "}");
        }
        values.push_back(value);
    }
    if (values.empty()) {
        throw ConfigError("no observations in input");
    }
    return values;
}

std::vector<int> load_observation_file(const std::string& path, int m) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open data file '" + path + "'");
    }
    return read_observation_file(in, m);
}

std::string format_double(double value) {
    char buf[64];
    const auto result =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, result.ptr);
}

void write_simulation_csv(std::ostream& out, const ExperimentConfig& config,
                          std::span<const CellSummary> rows) {
    out << "distribution,m,p_true,nu,z,n,estimator,bias,variance,sd,rmse,"
           "boundary_count,reps,seed\n";
    for (const CellSummary& row : rows) {
        const double nu = row.contaminated ? config.nu : 0.0;
        out << (row.contaminated ? "contaminated" : "clean") << ',' << row.m << ','
            << format_double(config.p_true) << ',' << format_double(nu) << ','
            << config.z_rule.resolve(row.m) << ',' << row.n << ','
            << estimator_name(row.estimator) << ',' << format_double(row.bias) << ','
            << format_double(row.variance) << ',' << format_double(row.sd) << ','
            << format_double(row.rmse) << ',' << row.boundary_count << ','
            << row.replications << ',' << config.master_seed << '\n';
    }
}

} // namespace bmde
