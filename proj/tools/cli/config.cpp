#include "cli.hpp"

#include "surplus/detail/overloaded.hpp"
#include "surplus/errors.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace surplus::cli {

using surplus::detail::Overloaded;

namespace {

// Leaf types: "number", "integer", "string", "bool", "array", "grid".
const Json& schema() {
    static const Json s = Json::parse(R"({
      "model": {
        "x0": "number", "lambda": "number",
        "asset": {"a": "number", "b": "number"},
        "premium": {"form": "string", "c0": "number", "c1": "number", "c2": "number",
                    "p1": "number", "p2": "number", "alpha": "number"},
        "claims": {"kind": "string", "mean": "number", "shape": "number", "scale": "number",
                   "value": "number", "lo": "number", "hi": "number"}
      },
      "controls": {"dt": "number", "t_max": "number", "x_cap": "number", "paths": "integer",
                   "seed": "integer", "scheme": "string", "workers": "integer",
                   "max_steps": "integer", "trace": "string"},
      "explode": {"mc": "bool", "floor": "number"},
      "supermartingale": {"r": "number", "times": "array"},
      "sweep": {"command": "string", "grid": "grid"},
      "output": {"path": "string", "format": "string"}
    })");
    return s;
}

const std::map<std::string, std::vector<std::string>>& premium_keys() {
    static const std::map<std::string, std::vector<std::string>> m{
        {"quadratic", {"c0", "c1", "c2"}}, {"linear", {"c0", "c1"}}, {"power", {"p1", "p2", "alpha"}}};
    return m;
}

const std::map<std::string, std::vector<std::string>>& claims_keys() {
    static const std::map<std::string, std::vector<std::string>> m{{"exponential", {"mean"}},
                                                                  {"gamma", {"shape", "scale"}},
                                                                  {"deterministic", {"value"}},
                                                                  {"uniform", {"lo", "hi"}}};
    return m;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    return parts;
}

const Json* lookup(const Json& root, const std::string& dotted) {
    const Json* node = &root;
    for (const auto& part : split(dotted, '.')) {
        if (!node->is_object()) return nullptr;
        auto it = node->find(part);
        if (it == node->end()) return nullptr;
        node = &*it;
    }
    return node;
}

void check_leaf(const Json& value, const std::string& type, const std::string& path) {
    bool ok = false;
    if (type == "number") ok = value.is_number();
    if (type == "integer") ok = value.is_number_integer();
    if (type == "string") ok = value.is_string();
    if (type == "bool") ok = value.is_boolean();
    if (type == "array") ok = value.is_array();
    if (type == "grid") {
        ok = value.is_object();
        for (auto it = value.begin(); ok && it != value.end(); ++it) {
            const Json* leaf = lookup(schema(), it.key());
            if (leaf == nullptr || !leaf->is_string() || it.key().rfind("sweep.", 0) == 0) {
                throw ConfigError("sweep.grid: unknown key '" + it.key() + "'");
            }
            if (!it.value().is_array() || it.value().empty()) {
                throw ConfigError("sweep.grid." + it.key() + " must be a non-empty array");
            }
            for (const auto& v : it.value()) check_leaf(v, leaf->get<std::string>(), "sweep.grid." + it.key());
        }
    }
    if (!ok) throw ConfigError(path + " must be of type " + type);
}

void check_node(const Json& value, const Json& spec, const std::string& path) {
    if (spec.is_string()) {
        check_leaf(value, spec.get<std::string>(), path);
        return;
    }
    if (!value.is_object()) throw ConfigError((path.empty() ? "config" : path) + " must be an object");
    for (auto it = value.begin(); it != value.end(); ++it) {
        const std::string child = path.empty() ? it.key() : path + "." + it.key();
        auto s = spec.find(it.key());
        if (s == spec.end()) throw ConfigError("unknown configuration key '" + child + "'");
        check_node(it.value(), *s, child);
    }
}

double required_number(const Json& config, const std::string& dotted) {
    const Json* v = lookup(config, dotted);
    if (v == nullptr) throw ConfigError("missing required key '" + dotted + "'");
    if (!v->is_number()) throw ConfigError(dotted + " must be a number");
    return v->get<double>();
}

// Checks that a premium/claims object carries exactly the parameters of its form.
const std::vector<std::string>& form_parameters(const Json& obj, const char* section, const char* selector,
                                                const std::map<std::string, std::vector<std::string>>& forms) {
    const std::string where = std::string("model.") + section;
    auto sel = obj.find(selector);
    if (sel == obj.end()) throw ConfigError("missing required key '" + where + "." + selector + "'");
    const std::string name = sel->get<std::string>();
    auto form = forms.find(name);
    if (form == forms.end()) throw ConfigError(where + "." + selector + ": unknown value '" + name + "'");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (it.key() == selector) continue;
        if (std::find(form->second.begin(), form->second.end(), it.key()) == form->second.end()) {
            throw ConfigError(where + "." + it.key() + " is not a parameter of " + name);
        }
    }
    for (const auto& key : form->second) {
        if (!obj.contains(key)) throw ConfigError("missing required key '" + where + "." + key + "'");
    }
    return form->second;
}

const Json& section(const Json& config, const std::string& dotted) {
    const Json* v = lookup(config, dotted);
    if (v == nullptr) throw ConfigError("missing required key '" + dotted + "'");
    return *v;
}

}  // namespace

void check_schema(const Json& config) { check_node(config, schema(), ""); }

void set_dotted(Json& config, const std::string& dotted, Json value) {
    Json* node = &config;
    const auto parts = split(dotted, '.');
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        Json& next = (*node)[parts[i]];
        if (next.is_null()) next = Json::object();
        if (!next.is_object()) throw ConfigError("cannot set '" + dotted + "': '" + parts[i] + "' is not a section");
        node = &next;
    }
    (*node)[parts.back()] = std::move(value);
}

Json parse_kind_spec(const std::string& spec, const char* kind_key) {
    const auto colon = spec.find(':');
    Json out = Json::object();
    out[kind_key] = spec.substr(0, colon);
    if (colon == std::string::npos) return out;
    for (const auto& item : split(spec.substr(colon + 1), ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value in '" + spec + "', got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size()) throw ConfigError("'" + text + "' is not a number in '" + spec + "'");
        out[key] = v;
    }
    return out;
}

PremiumSpec premium_from(const Json& model) {
    const Json& p = section(model, "premium");
    form_parameters(p, "premium", "form", premium_keys());
    const std::string form = p["form"];
    if (form == "quadratic") return PremiumSpec::quadratic(p["c0"], p["c1"], p["c2"]);
    if (form == "linear") return PremiumSpec::linear(p["c0"], p["c1"]);
    return PremiumSpec::power(p["p1"], p["p2"], p["alpha"]);
}

ClaimDistribution claims_from(const Json& model) {
    const Json& c = section(model, "claims");
    form_parameters(c, "claims", "kind", claims_keys());
    const std::string kind = c["kind"];
    if (kind == "exponential") return ClaimDistribution::exponential(c["mean"]);
    if (kind == "gamma") return ClaimDistribution::gamma(c["shape"], c["scale"]);
    if (kind == "deterministic") return ClaimDistribution::deterministic(c["value"]);
    return ClaimDistribution::uniform(c["lo"], c["hi"]);
}

DriftSpec drift_from(const Json& config) {
    DriftSpec drift{premium_from(section(config, "model")), required_number(config, "model.asset.a")};
    drift.validate();
    return drift;
}

ModelParams model_from(const Json& config) {
    const Json& model = section(config, "model");
    ModelParams params{
        required_number(config, "model.x0"),     required_number(config, "model.asset.a"),
        required_number(config, "model.asset.b"), required_number(config, "model.lambda"),
        premium_from(model),                      claims_from(model),
    };
    params.validate();
    return params;
}

SimControls controls_from(const Json& config, SimControls c) {
    const Json* ctl = lookup(config, "controls");
    if (ctl == nullptr) return c;
    if (ctl->contains("dt")) c.dt = (*ctl)["dt"];
    if (ctl->contains("t_max")) c.t_max = (*ctl)["t_max"];
    if (ctl->contains("x_cap")) c.x_cap = (*ctl)["x_cap"];
    if (ctl->contains("paths")) c.n_paths = (*ctl)["paths"];
    if (ctl->contains("seed")) {
        const Json& s = (*ctl)["seed"];
        if (s.is_number_unsigned() || s.get<std::int64_t>() >= 0) {
            c.master_seed = s.get<std::uint64_t>();
        } else {
            throw ConfigError("controls.seed must be >= 0");
        }
    }
    if (ctl->contains("scheme")) c.scheme = scheme_from_string((*ctl)["scheme"]);
    if (ctl->contains("workers")) {
        const std::int64_t w = (*ctl)["workers"];
        if (w < 1) throw ConfigError("controls.workers must be >= 1");
        c.workers = static_cast<unsigned>(w);
    }
    if (ctl->contains("max_steps")) c.max_steps = (*ctl)["max_steps"];
    return c;
}

std::string premium_to_spec(const PremiumSpec& premium) {
    return std::visit(Overloaded{
                          [](const QuadraticPremium& q) {
                              return "quadratic:c0=" + shortest(q.c0) + ",c1=" + shortest(q.c1) + ",c2=" + shortest(q.c2);
                          },
                          [](const LinearPremium& l) { return "linear:c0=" + shortest(l.c0) + ",c1=" + shortest(l.c1); },
                          [](const PowerPremium& p) {
                              return "power:p1=" + shortest(p.p1) + ",p2=" + shortest(p.p2) + ",alpha=" + shortest(p.alpha);
                          },
                      },
                      premium.form());
}

std::string claims_to_spec(const ClaimDistribution& claims) {
    return std::visit(Overloaded{
                          [](const ExponentialClaims& e) { return "exponential:mean=" + shortest(e.mean); },
                          [](const GammaClaims& g) { return "gamma:shape=" + shortest(g.shape) + ",scale=" + shortest(g.scale); },
                          [](const DeterministicClaims& d) { return "deterministic:value=" + shortest(d.value); },
                          [](const UniformClaims& u) { return "uniform:lo=" + shortest(u.lo) + ",hi=" + shortest(u.hi); },
                      },
                      claims.kind());
}

std::string key_reference() {
    return R"(Configuration keys (JSON file given by --config; flags override the file):
  model.x0                    initial surplus x >= 0
  model.lambda                claim intensity > 0
  model.asset.a               asset drift (> 0 for the jump model, >= 0 for classify/explode)
  model.asset.b               asset volatility > 0
  model.premium.form          quadratic | linear | power
  model.premium.c0,c1,c2      quadratic c(u) = c2 u^2 + c1 u + c0
  model.premium.c0,c1         linear c(u) = c1 u + c0
  model.premium.p1,p2,alpha   power c(u) = p1 (u + p2)^alpha
  model.claims.kind           exponential(mean) | gamma(shape,scale) | deterministic(value) | uniform(lo,hi)
  controls.dt                 base time step (default 0.01)
  controls.t_max              censoring horizon (default 50/lambda; 50 for explode --mc)
  controls.x_cap              explosion threshold (default: return probability below 1e-6)
  controls.paths              number of paths (default 10000)
  controls.seed               master seed (default 1)
  controls.scheme             euler-log | euler-direct
  controls.workers            engine threads (results do not depend on it)
  controls.max_steps          per-path step budget (default 1e8)
  controls.trace              per-path CSV log file
  explode.mc                  also run the Monte Carlo estimate
  explode.floor               lower exit level (default 1e-6 x0)
  supermartingale.r           exponent (default r_hat from the bound)
  supermartingale.times       time grid (default [0,1,2,4,8])
  sweep.command               bound | classify | explode | simulate (default bound)
  sweep.grid.<key>            list of values for any key above; the cartesian product is run
  output.path                 report file (default stdout)
  output.format               csv | json
)";
}

}  // namespace surplus::cli
