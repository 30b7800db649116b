#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mumford/lambda.hpp"

namespace mumford {

using Json = nlohmann::ordered_json;

// Malformed or invalid configuration; the CLI exits with status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string name;
    FieldSpec field;
    // entries are integers or "a/b" rationals, row-major per generator
    std::vector<std::vector<std::string>> generators;
    TruncationPolicy policy;
    int theta_box = 6;
    std::uint64_t seed = 1;
    std::vector<std::string> tasks;
    std::optional<std::vector<std::string>> riemann_divisor;  // branch labels such as "o1"
    CrossRatioRequest cross_ratio;
    std::vector<int> dim_primes{2, 3};
    int dim_max_branch_points = 6;
};

const std::vector<std::string>& known_tasks();

RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);

// Splits "a,b,c" into task names and validates them.
std::vector<std::string> parse_task_list(const std::string& list);

// Builds the group; configuration errors surface as ConfigError.
GroupData build_configured_group(const RunConfig& cfg);

struct RunResult {
    Json report;
    bool pass = true;
};

RunResult run(const RunConfig& cfg);

std::string render_json(const RunResult& r);
std::string render_text(const RunResult& r);

}  // namespace mumford
