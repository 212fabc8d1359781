#pragma once

#include "surplus/model.hpp"
#include "surplus/simulator.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace surplus::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
    kOk = 0,
    kUnexpected = 1,
    kValidation = 2,
    kNoBound = 3,
    kBudget = 4,
};

// ---- reports ---------------------------------------------------------------

using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Field {
    std::string name;
    Value value;
};

using Record = std::vector<Field>;

enum class Format { Csv, Json };

Format format_from_string(const std::string& name);

// Shortest decimal string that parses back to the same double.
std::string shortest(double v);

void write_csv(std::ostream& os, const std::vector<Record>& records);
// One JSON object per line.
void write_json_lines(std::ostream& os, const std::vector<Record>& records);

// ---- configuration ---------------------------------------------------------

// Throws ConfigError on a key outside the documented schema.
void check_schema(const Json& config);

// Sets a dotted key such as "model.premium.c2", creating objects on the way.
void set_dotted(Json& config, const std::string& dotted, Json value);

// "exponential:mean=1", "gamma:shape=2,scale=0.5", "quadratic:c0=2,c1=0,c2=1" ...
Json parse_kind_spec(const std::string& spec, const char* kind_key);

PremiumSpec premium_from(const Json& model);
ClaimDistribution claims_from(const Json& model);
DriftSpec drift_from(const Json& config);
ModelParams model_from(const Json& config);
// Overlays controls.* on `defaults`.
SimControls controls_from(const Json& config, SimControls defaults);

std::string premium_to_spec(const PremiumSpec& premium);
std::string claims_to_spec(const ClaimDistribution& claims);

// Documented configuration keys, one per line, for --help.
std::string key_reference();

// ---- commands --------------------------------------------------------------

// Runs one command on a fully merged configuration. `stamp` fills the timestamp field.
std::vector<Record> run_command(const std::string& command, const Json& config, const std::string& stamp);

// Entry point shared by main() and the tests; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace surplus::cli
