#include "cli.hpp"

#include "surplus/errors.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

namespace surplus::cli {

namespace {

std::string utc_stamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

Json scalar_from_text(const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    try {
        std::size_t used = 0;
        const long long i = std::stoll(text, &used);
        if (used == text.size()) return i;
        const double d = std::stod(text, &used);
        if (used == text.size()) return d;
    } catch (const std::exception&) {
    }
    return text;
}

// "model.premium.c2=0.5,1,2"
std::pair<std::string, Json> parse_grid(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--grid expects KEY=V1,V2,..., got '" + spec + "'");
    Json values = Json::array();
    std::string rest = spec.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        values.push_back(scalar_from_text(rest.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return {spec.substr(0, eq), values};
}

struct Overrides {
    std::string config_path;
    std::optional<std::string> format, out, premium, claims, scheme, trace, command;
    std::optional<double> x0, lambda, a, b, c0, c1, c2, dt, t_max, x_cap, floor, r;
    std::optional<std::int64_t> paths, workers, max_steps;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> times;
    std::vector<std::string> grid;
    bool mc = false;
};

Json merged_config(const Overrides& o) {
    Json config = o.config_path.empty() ? Json::object() : load_file(o.config_path);
    if (!config.is_object()) throw ConfigError("config file must hold a JSON object");
    auto set = [&](const char* key, const auto& opt) {
        if (opt) set_dotted(config, key, *opt);
    };
    if (o.premium) set_dotted(config, "model.premium", parse_kind_spec(*o.premium, "form"));
    if (o.claims) set_dotted(config, "model.claims", parse_kind_spec(*o.claims, "kind"));
    set("model.x0", o.x0);
    set("model.lambda", o.lambda);
    set("model.asset.a", o.a);
    set("model.asset.b", o.b);
    set("model.premium.c0", o.c0);
    set("model.premium.c1", o.c1);
    set("model.premium.c2", o.c2);
    set("controls.dt", o.dt);
    set("controls.t_max", o.t_max);
    set("controls.x_cap", o.x_cap);
    set("controls.paths", o.paths);
    set("controls.seed", o.seed);
    set("controls.scheme", o.scheme);
    set("controls.workers", o.workers);
    set("controls.max_steps", o.max_steps);
    set("controls.trace", o.trace);
    set("explode.floor", o.floor);
    set("supermartingale.r", o.r);
    set("sweep.command", o.command);
    set("output.path", o.out);
    set("output.format", o.format);
    if (o.mc) set_dotted(config, "explode.mc", true);
    if (o.times) set_dotted(config, "supermartingale.times", parse_grid("times=" + *o.times).second);
    for (const auto& g : o.grid) {
        auto [key, values] = parse_grid(g);
        config["sweep"]["grid"][key] = values;
    }
    return config;
}

void emit(const Json& config, const std::vector<Record>& records, std::ostream& out) {
    Format format = Format::Csv;
    std::string path;
    if (auto it = config.find("output"); it != config.end()) {
        if (it->contains("format")) format = format_from_string((*it)["format"]);
        if (it->contains("path")) path = (*it)["path"];
    }
    auto write = [&](std::ostream& os) {
        format == Format::Csv ? write_csv(os, records) : write_json_lines(os, records);
    };
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    write(file);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ruin bounds, boundary classification and Monte Carlo for a surplus process with "
                 "quadratic premium invested in a GBM asset.",
                 "surplus"};
    app.require_subcommand(1);
    app.footer(key_reference() +
               "\nExit status: 0 ok, 2 invalid input, 3 no bound (BoundUnavailable/NoPositiveRoot), "
               "4 step budget exceeded.");

    Overrides o;
    app.add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", o.out, "report file (default stdout)");
    app.add_option("--x0", o.x0, "initial surplus");
    app.add_option("--lambda", o.lambda, "claim intensity");
    app.add_option("--a", o.a, "asset drift");
    app.add_option("--b", o.b, "asset volatility");
    app.add_option("--premium", o.premium, "premium, e.g. quadratic:c0=2,c1=0,c2=1");
    app.add_option("--c0", o.c0, "premium c0");
    app.add_option("--c1", o.c1, "premium c1");
    app.add_option("--c2", o.c2, "premium c2");
    app.add_option("--claims", o.claims, "claim law, e.g. exponential:mean=1 or gamma:shape=2,scale=0.5");
    app.add_option("--paths", o.paths, "Monte Carlo paths");
    app.add_option("--dt", o.dt, "base time step");
    app.add_option("--t-max", o.t_max, "censoring horizon");
    app.add_option("--x-cap", o.x_cap, "explosion threshold");
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--scheme", o.scheme, "euler-log or euler-direct");
    app.add_option("--workers", o.workers, "engine threads");
    app.add_option("--max-steps", o.max_steps, "per-path step budget");
    app.add_option("--trace", o.trace, "per-path CSV log");

    std::string command;
    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        s->callback([&command, name] { command = name; });
        return s;
    };
    sub("bound", "exponential ruin bound");
    sub("classify", "boundary classification of the between-claims diffusion");
    CLI::App* explode = sub("explode", "explosion probability of the between-claims diffusion");
    explode->add_flag("--mc", o.mc, "also estimate it by Monte Carlo");
    explode->add_option("--floor", o.floor, "lower exit level for --mc (default 1e-6 x0)");
    sub("simulate", "Monte Carlo ruin probability");
    CLI::App* sm = sub("supermartingale", "empirical mean of exp(-r X) on a time grid");
    sm->add_option("--r", o.r, "exponent (default r_hat)");
    sm->add_option("--times", o.times, "comma-separated time grid");
    CLI::App* sweep = sub("sweep", "run a command over the cartesian product of a parameter grid");
    sweep->add_option("--command", o.command, "bound, classify, explode or simulate");
    sweep->add_option("--grid", o.grid, "KEY=V1,V2,... (repeatable)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    try {
        const Json config = merged_config(o);
        const auto records = run_command(command, config, utc_stamp());
        emit(config, records, out);
        return kOk;
    } catch (const BoundUnavailable& e) {
        err << "error: " << e.what() << "\n";
        return kNoBound;
    } catch (const NoPositiveRoot& e) {
        err << "error: " << e.what() << "\n";
        return kNoBound;
    } catch (const SimulationBudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kBudget;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const Json::exception& e) {
        err << "error: invalid configuration value: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUnexpected;
    }
}

}  // namespace surplus::cli
