#include "cli.hpp"

#include "surplus/bounds.hpp"
#include "surplus/errors.hpp"
#include "surplus/scale_analysis.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

namespace surplus::cli {

namespace {

const Json* find_path(const Json& config, const char* a, const char* b) {
    auto s = config.find(a);
    if (s == config.end()) return nullptr;
    auto v = s->find(b);
    return v == s->end() ? nullptr : &*v;
}

Value optional_value(const std::optional<double>& v) {
    return v ? Value(*v) : Value(std::monostate{});
}

void echo_model(Record& r, const ModelParams& p) {
    r.push_back({"x0", p.x});
    r.push_back({"lambda", p.lambda});
    r.push_back({"a", p.a});
    r.push_back({"b", p.b});
    r.push_back({"premium", premium_to_spec(p.premium)});
    r.push_back({"claims", claims_to_spec(p.claims)});
}

void echo_drift(Record& r, const DriftSpec& d, double b, double x) {
    r.push_back({"x0", x});
    r.push_back({"a", d.a});
    r.push_back({"b", b});
    r.push_back({"premium", premium_to_spec(d.premium)});
}

void echo_controls(Record& r, const SimControls& c) {
    r.push_back({"paths", c.n_paths});
    r.push_back({"seed", static_cast<std::int64_t>(c.master_seed)});
    r.push_back({"scheme", to_string(c.scheme)});
    r.push_back({"dt", c.dt});
    r.push_back({"t_max", c.t_max});
    r.push_back({"x_cap", c.x_cap});
    r.push_back({"max_steps", c.max_steps});
}

void echo_estimate(Record& r, const MCEstimate& e) {
    r.push_back({"mc_point", e.point});
    r.push_back({"mc_std_error", e.std_error});
    r.push_back({"mc_ci95_lo", e.ci95_lo});
    r.push_back({"mc_ci95_hi", e.ci95_hi});
    r.push_back({"ruined", e.counts.ruined});
    r.push_back({"exploded", e.counts.exploded});
    r.push_back({"exited_low", e.counts.exited_low});
    r.push_back({"censored", e.counts.censored});
    r.push_back({"censored_fraction", e.censored_fraction});
}

void write_trace(const Json& config, const std::vector<PathOutcome>& outcomes) {
    const Json* trace = find_path(config, "controls", "trace");
    if (trace == nullptr) return;
    const std::string path = trace->get<std::string>();
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open trace file '" + path + "'");
    os << "path,status,time,surplus,n_claims,sup_surplus,steps\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        os << i << ',' << to_string(o.status) << ',' << shortest(o.time) << ',' << shortest(o.surplus) << ','
           << o.n_claims << ',' << shortest(o.sup_surplus) << ',' << o.steps << '\n';
    }
}

Record start(const std::string& stamp, const std::string& command) {
    return Record{{"timestamp", stamp}, {"command", command}};
}

Record bound_record(const Json& config, const std::string& stamp) {
    const ModelParams p = model_from(config);
    const BoundReport b = compute_bound(p);
    Record r = start(stamp, "bound");
    echo_model(r, p);
    r.push_back({"condition1", b.condition1_holds});
    r.push_back({"condition2", b.condition2_holds});
    r.push_back({"r0", optional_value(b.r0)});
    r.push_back({"critical_rate", b.critical_rate});
    r.push_back({"r_hat", b.r_hat});
    r.push_back({"bound_at_x", b.bound_at_x});
    r.push_back({"selection", b.selection});
    return r;
}

double required_x(const Json& config) {
    const Json* x = find_path(config, "model", "x0");
    if (x == nullptr) throw ConfigError("missing required key 'model.x0'");
    return x->get<double>();
}

double required_b(const Json& config) {
    const Json* asset = find_path(config, "model", "asset");
    if (asset == nullptr || !asset->contains("b")) throw ConfigError("missing required key 'model.asset.b'");
    return (*asset)["b"].get<double>();
}

Record classify_record(const Json& config, const std::string& stamp) {
    const DriftSpec d = drift_from(config);
    const double b = required_b(config), x = required_x(config);
    const BoundaryReport rep = classify_boundary(d, b, x);
    Record r = start(stamp, "classify");
    echo_drift(r, d, b, x);
    r.push_back({"i1_finite", rep.i1_finite});
    r.push_back({"i1", rep.i1.value});
    r.push_back({"i1_cutoff", rep.i1.cutoff});
    r.push_back({"i2_finite", rep.i2_finite});
    r.push_back({"i2", rep.i2.value});
    r.push_back({"class", to_string(rep.boundary_class)});
    r.push_back({"prob_to_infinity", optional_value(rep.prob_to_infinity)});
    r.push_back({"explosion_prob", optional_value(rep.explosion_prob)});
    r.push_back({"basis", rep.basis});
    return r;
}

Record explode_record(const Json& config, const std::string& stamp) {
    const DriftSpec d = drift_from(config);
    const double b = required_b(config), x = required_x(config);
    Record r = start(stamp, "explode");
    echo_drift(r, d, b, x);
    r.push_back({"explosion_prob", explosion_probability(d, b, x)});

    const Json* mc = find_path(config, "explode", "mc");
    if (mc == nullptr || !mc->get<bool>()) return r;
    const SimControls c = controls_from(config, default_diffusion_controls(d, b, x));
    const Json* floor_key = find_path(config, "explode", "floor");
    const double floor = floor_key ? floor_key->get<double>() : 1e-6 * x;
    const auto outcomes = simulate_diffusion_paths(d, b, x, floor, c);
    write_trace(config, outcomes);
    const OutcomeCounts counts = tally(outcomes);
    echo_controls(r, c);
    r.push_back({"floor", floor});
    echo_estimate(r, make_estimate(counts.exploded, c.n_paths, counts));
    return r;
}

Record simulate_record(const Json& config, const std::string& stamp) {
    const ModelParams p = model_from(config);
    const SimControls c = controls_from(config, default_controls(p));
    const auto outcomes = simulate_paths(p, c);
    write_trace(config, outcomes);
    const OutcomeCounts counts = tally(outcomes);
    Record r = start(stamp, "simulate");
    echo_model(r, p);
    echo_controls(r, c);
    echo_estimate(r, make_estimate(counts.ruined, c.n_paths, counts));
    std::optional<double> r_hat, bound;
    try {
        const BoundReport b = compute_bound(p);
        r_hat = b.r_hat;
        bound = b.bound_at_x;
    } catch (const BoundUnavailable&) {
    }
    r.push_back({"r_hat", optional_value(r_hat)});
    r.push_back({"bound_at_x", optional_value(bound)});
    return r;
}

std::vector<Record> supermartingale_records(const Json& config, const std::string& stamp) {
    const ModelParams p = model_from(config);
    SimControls c = controls_from(config, default_controls(p));
    const Json* r_key = find_path(config, "supermartingale", "r");
    const double rate = r_key ? r_key->get<double>() : compute_bound(p).r_hat;
    std::vector<double> times{0, 1, 2, 4, 8};
    if (const Json* t = find_path(config, "supermartingale", "times")) {
        times.clear();
        for (const auto& v : *t) {
            if (!v.is_number()) throw ConfigError("supermartingale.times must contain numbers");
            times.push_back(v.get<double>());
        }
    }
    const auto profile = supermartingale_profile(p, rate, times, c);
    // The profile runs to the last grid time; echo that horizon.
    c.t_max = std::max(times.back(), 2.0 * c.dt);
    std::vector<Record> out;
    for (const auto& pt : profile) {
        Record r = start(stamp, "supermartingale");
        echo_model(r, p);
        echo_controls(r, c);
        r.push_back({"r", rate});
        r.push_back({"t", pt.t});
        r.push_back({"mean_v", pt.mean_v});
        r.push_back({"std_error", pt.std_error});
        out.push_back(std::move(r));
    }
    return out;
}

Value grid_value(const Json& v) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number()) return v.get<double>();
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::vector<Record> sweep_records(const Json& config, const std::string& stamp) {
    const Json* cmd = find_path(config, "sweep", "command");
    const std::string command = cmd ? cmd->get<std::string>() : "bound";
    if (command != "bound" && command != "classify" && command != "explode" && command != "simulate") {
        throw ConfigError("sweep.command must be bound, classify, explode or simulate");
    }
    const Json* grid = find_path(config, "sweep", "grid");
    if (grid == nullptr || grid->empty()) throw ConfigError("sweep needs at least one sweep.grid entry");

    std::vector<std::pair<std::string, Json>> axes;
    for (auto it = grid->begin(); it != grid->end(); ++it) axes.emplace_back(it.key(), it.value());
    std::vector<std::size_t> index(axes.size(), 0);
    std::vector<Record> out;
    while (true) {
        Json point = config;
        point.erase("sweep");
        Record prefix;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const Json& v = axes[k].second[index[k]];
            set_dotted(point, axes[k].first, v);
            prefix.push_back({axes[k].first, grid_value(v)});
        }
        for (auto& rec : run_command(command, point, stamp)) {
            rec.insert(rec.begin() + 2, prefix.begin(), prefix.end());
            out.push_back(std::move(rec));
        }
        // Odometer over the axes, last key fastest.
        std::size_t k = axes.size();
        while (k > 0 && ++index[k - 1] == axes[k - 1].second.size()) index[--k] = 0;
        if (k == 0) break;
    }
    return out;
}

}  // namespace

std::vector<Record> run_command(const std::string& command, const Json& config, const std::string& stamp) {
    check_schema(config);
    if (command == "bound") return {bound_record(config, stamp)};
    if (command == "classify") return {classify_record(config, stamp)};
    if (command == "explode") return {explode_record(config, stamp)};
    if (command == "simulate") return {simulate_record(config, stamp)};
    if (command == "supermartingale") return supermartingale_records(config, stamp);
    if (command == "sweep") return sweep_records(config, stamp);
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace surplus::cli
