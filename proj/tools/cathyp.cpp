// cathyp: classify, sweep and reproduce hyperbolicity results for the
// (lambda, nu) objective Cattaneo systems.
//
// Exit codes: 0 ok, 2 config error, 3 domain error, 4 sweep with every row
// failed, 5 a reproduction recipe failed.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cathyp/cathyp.hpp"

namespace {

using namespace cathyp;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitAllFailed = 4;
constexpr int kExitReproduceFail = 5;

std::vector<double> parse_list(const std::string& text, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(field + ": cannot parse '" + item + "' as a number");
        }
    }
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

/// Flags shared by the single-state subcommands. Every flag overrides the
/// same-named key of the optional --config document.
struct StateFlags {
    std::string config;
    std::optional<std::string> model;
    std::vector<std::string> params;
    std::optional<double> lambda;
    std::optional<double> nu;
    std::optional<std::string> pair;
    std::optional<double> rho;
    std::optional<double> theta;
    std::optional<std::string> v;
    std::optional<std::string> q;
    std::optional<std::string> xi;
    std::optional<int> dim;
    std::optional<std::string> symbol;

    void add_to(CLI::App* app, bool with_direction = true) {
        app->add_option("--config", config, "JSON config file; flags override its keys");
        app->add_option("--model", model, "constitutive model (ideal-gas, stiffened-gas)");
        app->add_option("--param", params, "model parameter key=value (repeatable)");
        app->add_option("--lambda", lambda, "objectivity scalar lambda");
        app->add_option("--nu", nu, "objectivity scalar nu");
        app->add_option("--pair", pair, "named (lambda, nu): christov, jordan-compatible");
        app->add_option("--rho", rho, "density");
        app->add_option("--theta", theta, "temperature");
        if (with_direction) {
            app->add_option("--v", v, "velocity, comma separated");
            app->add_option("--q", q, "heat flux, comma separated");
            app->add_option("--xi", xi, "direction, comma separated, or auto-align (q/|q|)");
            app->add_option("--dim", dim, "spatial dimension (1 or 3)");
            app->add_option("--symbol", symbol, "objective (default) or ccj");
        }
    }

    json merged() const {
        json doc = config.empty() ? json::object() : read_json_file(config);
        if (!doc.is_object()) throw ConfigError("config must be a JSON object");
        if (model) doc["model"]["name"] = *model;
        for (const auto& kv : params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + kv + "'");
            const auto value = parse_list(kv.substr(eq + 1), "--param " + kv.substr(0, eq));
            if (value.size() != 1) throw ConfigError("--param " + kv.substr(0, eq) + " needs one number");
            doc["model"]["params"][kv.substr(0, eq)] = value[0];
        }
        if (pair) {
            try {
                const LambdaNu ln = named_lambda_nu(*pair);
                doc["lambda"] = ln.lambda;
                doc["nu"] = ln.nu;
            } catch (const UnknownModel& e) {
                throw ConfigError(e.what());
            }
        }
        if (lambda) doc["lambda"] = *lambda;
        if (nu) doc["nu"] = *nu;
        if (rho) doc["rho"] = *rho;
        if (theta) doc["theta"] = *theta;
        if (v) doc["v"] = parse_list(*v, "--v");
        if (q) doc["q"] = parse_list(*q, "--q");
        if (xi) {
            if (*xi == "auto-align") doc["xi"] = "auto-align";
            else doc["xi"] = parse_list(*xi, "--xi");
        }
        if (dim) doc["dim"] = *dim;
        if (symbol) doc["symbol"] = *symbol;
        return doc;
    }
};

struct SingleInputs {
    ConstitutiveModel model;
    State state;
    std::optional<Direction> xi;
    LambdaNu lambda_nu;
    SymbolKind kind = SymbolKind::Objective;
    TolProfile tol;
};

std::vector<double> list_key(const json& doc, const char* key) {
    if (!doc.contains(key)) return {};
    try {
        return doc.at(key).get<std::vector<double>>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(key) + " must be a list of numbers");
    }
}

/// Builds the single-state inputs. Domain checks (rho, theta > 0) are left
/// to the library so that they surface as DomainError.
SingleInputs resolve_single(const json& doc) {
    SingleInputs in;
    try {
        const std::string model_name = doc.contains("model") ? doc["model"].value("name", "ideal-gas") : "ideal-gas";
        ModelParameters params;
        if (doc.contains("model") && doc["model"].contains("params")) {
            params = doc["model"]["params"].get<ModelParameters>();
        }
        try {
            in.model = make_model(model_name, params);
        } catch (const UnknownModel& e) {
            throw ConfigError(e.what());
        } catch (const InvalidInput& e) {
            throw ConfigError(e.what());
        }
        in.lambda_nu = {doc.value("lambda", 1.0), doc.value("nu", -1.0)};
        in.model = in.model.with_lambda_nu(in.lambda_nu);

        const auto v = list_key(doc, "v");
        const auto q = list_key(doc, "q");
        std::vector<double> xi;
        const bool auto_align = doc.contains("xi") && doc["xi"].is_string() && doc["xi"] == "auto-align";
        if (doc.contains("xi") && !auto_align) xi = list_key(doc, "xi");

        int dim = 3;
        if (doc.contains("dim")) {
            dim = doc["dim"].get<int>();
        } else {
            for (std::size_t n : {v.size(), q.size(), xi.size()}) {
                if (n == 1) dim = 1;
            }
        }
        if (dim != 1 && dim != 3) throw ConfigError("dim must be 1 or 3");
        auto fill = [dim](const std::vector<double>& values, const char* field) {
            if (values.empty()) return Vector(Vector::Zero(dim));
            if (static_cast<int>(values.size()) != dim) {
                throw ConfigError(std::string(field) + " needs " + std::to_string(dim) + " components");
            }
            return Vector(Eigen::Map<const Vector>(values.data(), dim));
        };
        in.state.dim = dim;
        in.state.rho = doc.value("rho", 1.0);
        in.state.theta = doc.value("theta", 1.0);
        in.state.v = fill(v, "v");
        in.state.q = fill(q, "q");

        if (auto_align) {
            if (in.state.q.norm() == 0.0) throw ConfigError("xi: auto-align needs q != 0");
            in.xi = Direction::normalized(in.state.q);
        } else if (!xi.empty()) {
            const Vector raw = fill(xi, "xi");
            if (raw.norm() == 0.0) throw ConfigError("xi must be nonzero");
            in.xi = Direction::normalized(raw);
        } else {
            in.xi = Direction::axis(dim, 0);
        }

        const std::string kind = doc.value("symbol", std::string("objective"));
        if (kind == "ccj") in.kind = SymbolKind::ChristovJordan;
        else if (kind != "objective") throw ConfigError("symbol must be objective or ccj");

        if (doc.contains("tolerances")) {
            const auto& t = doc["tolerances"];
            in.tol.real_tol = t.value("real_tol", in.tol.real_tol);
            in.tol.cluster_gap = t.value("cluster_gap", in.tol.cluster_gap);
            in.tol.rank_tol = t.value("rank_tol", in.tol.rank_tol);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return in;
}

void print_cluster_table(std::ostream& os, const ClassificationRecord& rec) {
    os << "clusters (value, algebraic/geometric):\n";
    for (const auto& c : rec.clusters) {
        os << "  " << format_number(c.re);
        if (c.im != 0.0) os << (c.im > 0 ? " + " : " - ") << format_number(std::abs(c.im)) << "i";
        os << "  " << c.algebraic << "/" << c.geometric << "\n";
    }
    if (rec.delta) os << "discriminant of quartic factor: " << format_number(*rec.delta) << "\n";
}

// ---------------------------------------------------------------------------

int cmd_classify(const StateFlags& flags, bool as_json, const std::string& out_path) {
    const SingleInputs in = resolve_single(flags.merged());
    // Surface input and domain errors with their own exit codes.
    (void)classify_state(in.model, in.state, *in.xi, in.lambda_nu, in.tol, in.kind);
    const ClassificationRecord rec =
        classify_record(in.model, in.state, *in.xi, in.lambda_nu, in.tol, in.kind);
    if (!rec.ok()) {
        std::cerr << "error: " << rec.error << "\n";
        return kExitDomain;
    }
    std::cout << rec.verdict << "\n";
    if (as_json) {
        std::cout << json(rec).dump() << "\n";
    } else {
        print_cluster_table(std::cout, rec);
    }
    if (!out_path.empty()) {
        std::ostringstream os;
        write_records_jsonl(os, {rec});
        write_text_file(out_path, os.str());
    }
    return 0;
}

struct SweepFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> fibonacci;
    std::optional<std::string> csv;
    std::optional<std::string> jsonl;
    std::optional<std::string> verdict_map;
};

int cmd_sweep(const SweepFlags& flags) {
    json doc = flags.config.empty() ? json::object() : read_json_file(flags.config);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (flags.seed) doc["seed"] = *flags.seed;
    if (flags.threads) doc["threads"] = *flags.threads;
    if (flags.fibonacci) doc["directions"]["fibonacci"] = *flags.fibonacci;
    if (flags.csv) doc["output"]["csv"] = *flags.csv;
    if (flags.jsonl) doc["output"]["jsonl"] = *flags.jsonl;
    if (flags.verdict_map) doc["output"]["verdict_map"] = *flags.verdict_map;

    const SweepConfig cfg = parse_sweep_config(doc);
    const SweepResult result = run_sweep(cfg);

    std::ostringstream csv;
    write_records_csv(csv, result.records);
    if (cfg.output.csv.empty()) {
        std::cout << csv.str();
    } else {
        write_text_file(cfg.output.csv, csv.str());
    }
    if (!cfg.output.jsonl.empty()) {
        std::ostringstream os;
        write_records_jsonl(os, result.records);
        write_text_file(cfg.output.jsonl, os.str());
    }
    if (!cfg.output.verdict_map.empty()) {
        std::ostringstream os;
        write_verdict_map_csv(os, result.verdict_map);
        write_text_file(cfg.output.verdict_map, os.str());
    }
    write_summary(cfg.output.csv.empty() ? std::cerr : std::cout, result.summary);
    return result.summary.failed == result.summary.total ? kExitAllFailed : 0;
}

int cmd_reproduce(const std::string& id, std::uint64_t seed) {
    std::vector<std::string> ids;
    if (id == "all") {
        ids = reproduce_ids();
    } else {
        const auto& known = reproduce_ids();
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            throw ConfigError("unknown result id '" + id + "'");
        }
        ids = {id};
    }
    bool all_pass = true;
    for (const auto& one : ids) {
        const ReproduceResult r = reproduce(one, seed);
        std::cout << "== " << r.id << "\n";
        for (const auto& line : r.evidence) std::cout << "  " << line << "\n";
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.id << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : kExitReproduceFail;
}

int cmd_modal(const StateFlags& flags, const std::vector<std::string>& scenarios, const std::string& k_text,
              bool no_source, const std::string& out_path) {
    const std::vector<double> ks = parse_list(k_text, "--k");
    if (ks.empty()) throw ConfigError("--k: wavenumber list is empty");
    try {
        validate_wavenumbers(ks);
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("--k: ") + e.what());
    }

    std::vector<ModalScenario> runs;
    for (const auto& name : scenarios) {
        if (name == "custom") {
            const SingleInputs in = resolve_single(flags.merged());
            runs.push_back({"custom", in.model, in.state, *in.xi, in.lambda_nu});
        } else {
            try {
                runs.push_back(modal_scenario(name));
            } catch (const InvalidInput& e) {
                throw ConfigError(e.what());
            }
        }
    }

    std::ostringstream csv;
    write_csv_row(csv, {"scenario", "k", "max_im_omega", "max_im_omega_over_k"});
    for (const auto& s : runs) {
        const ModeGrowth g = mode_growth(s.model, s.state, s.xi, s.lambda_nu, ks, !no_source);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            write_csv_row(csv, {s.name, format_number(ks[i]), format_number(g.growth_rates[i]),
                                format_number(g.growth_rates[i] / ks[i])});
        }
    }
    if (out_path.empty()) std::cout << csv.str();
    else write_text_file(out_path, csv.str());
    return 0;
}

int cmd_ccj_speeds(const StateFlags& flags, double v_dot_xi, bool as_json) {
    const SingleInputs in = resolve_single(flags.merged());
    const CcjSpeeds c = ccj_speeds(in.model, in.state.thermo(), v_dot_xi);
    if (as_json) {
        std::cout << json{{"r", c.r}, {"m", c.m}, {"eta0", c.eta0}, {"eta1", c.eta1},
                          {"eta2", c.eta2}, {"eta3", c.eta3}, {"eta4", c.eta4}}.dump()
                  << "\n";
        return 0;
    }
    std::cout << "r    = " << format_number(c.r) << "\n"
              << "m    = " << format_number(c.m) << "\n"
              << "eta0 = " << format_number(c.eta0) << "\n"
              << "eta1 = " << format_number(c.eta1) << "\n"
              << "eta2 = " << format_number(c.eta2) << "\n"
              << "eta3 = " << format_number(c.eta3) << "\n"
              << "eta4 = " << format_number(c.eta4) << "\n";
    return 0;
}

int cmd_witness(const StateFlags& flags, bool as_json) {
    json doc = flags.merged();
    if (!doc.contains("lambda") && !doc.contains("nu")) {
        doc["lambda"] = 1.0;
        doc["nu"] = 0.0;
    }
    const SingleInputs in = resolve_single(doc);
    const WitnessQ w = witness_q(in.model, in.state.thermo(), in.lambda_nu);
    const auto& bd = w.breakdown_at_zero_q;
    if (as_json) {
        std::cout << json{{"g", w.g},
                          {"a0", w.quartic_at_zero_q.a0},
                          {"a2", w.quartic_at_zero_q.a2},
                          {"A", bd.A},
                          {"B", bd.B},
                          {"C", bd.C},
                          {"q_threshold_sq", w.q_threshold_sq},
                          {"witness_q", w.witness_q_value},
                          {"delta_at_witness", w.delta_at_witness}}
                         .dump()
                  << "\n";
        return 0;
    }
    std::cout << "g                = " << format_number(w.g) << "\n"
              << "a2, a0           = " << format_number(w.quartic_at_zero_q.a2) << ", "
              << format_number(w.quartic_at_zero_q.a0) << "\n"
              << "A, B, C          = " << format_number(bd.A) << ", " << format_number(bd.B) << ", "
              << format_number(bd.C) << "\n"
              << "q^2 threshold    = " << format_number(w.q_threshold_sq) << "\n"
              << "witness q        = " << format_number(w.witness_q_value) << "\n"
              << "delta at witness = " << format_number(w.delta_at_witness) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolicity analysis of fluid systems with objective Cattaneo heat flux"};
    app.require_subcommand(1);

    StateFlags classify_flags;
    bool classify_json = false;
    std::string classify_out;
    auto* classify = app.add_subcommand("classify", "classify one (state, direction)");
    classify_flags.add_to(classify);
    classify->add_flag("--json", classify_json, "print the machine-readable record");
    classify->add_option("--out", classify_out, "write the record as JSON lines");

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "classify a grid of (lambda, nu), states and directions");
    sweep->add_option("--config", sweep_flags.config, "JSON sweep config");
    sweep->add_option("--seed", sweep_flags.seed, "random seed");
    sweep->add_option("--threads", sweep_flags.threads, "worker threads (default: CATHYP_THREADS or all cores)");
    sweep->add_option("--fibonacci", sweep_flags.fibonacci, "Fibonacci sphere points");
    sweep->add_option("--csv", sweep_flags.csv, "CSV output path (default stdout)");
    sweep->add_option("--jsonl", sweep_flags.jsonl, "JSON lines output path");
    sweep->add_option("--verdict-map", sweep_flags.verdict_map, "per-(lambda, nu) verdict map CSV");

    std::string reproduce_id;
    std::uint64_t reproduce_seed = 2024;
    auto* reproduce_cmd = app.add_subcommand("reproduce", "run a verification recipe");
    reproduce_cmd->add_option("id", reproduce_id,
                              "complexroots, hnull, qnontrivial, ccjroots, main, ordering or all")
        ->required();
    reproduce_cmd->add_option("--seed", reproduce_seed, "random seed");

    StateFlags modal_flags;
    std::vector<std::string> modal_scenarios = {"hyperbolic", "witness"};
    std::string modal_k = "1,10,100,1000";
    bool modal_no_source = false;
    std::string modal_out;
    auto* modal = app.add_subcommand("modal", "Fourier-mode growth rates of the frozen-coefficient system");
    modal_flags.add_to(modal);
    modal->add_option("--scenario", modal_scenarios, "hyperbolic, witness or custom (repeatable)");
    modal->add_option("--k", modal_k, "ascending wavenumbers, comma separated");
    modal->add_flag("--no-source", modal_no_source, "drop the relaxation term");
    modal->add_option("--csv", modal_out, "CSV output path (default stdout)");

    StateFlags ccj_flags;
    double ccj_vxi = 0.0;
    bool ccj_json = false;
    auto* ccj = app.add_subcommand("ccj-speeds", "closed-form Christov-Jordan characteristic speeds");
    ccj_flags.add_to(ccj, false);
    ccj->add_option("--v-dot-xi", ccj_vxi, "normal velocity xi.v");
    ccj->add_flag("--json", ccj_json, "JSON output");

    StateFlags witness_flags;
    bool witness_json = false;
    auto* witness = app.add_subcommand("witness", "heat flux beyond which the 1D quartic has complex roots");
    witness_flags.add_to(witness, false);
    witness->add_flag("--json", witness_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*classify) return cmd_classify(classify_flags, classify_json, classify_out);
        if (*sweep) return cmd_sweep(sweep_flags);
        if (*reproduce_cmd) return cmd_reproduce(reproduce_id, reproduce_seed);
        if (*modal) return cmd_modal(modal_flags, modal_scenarios, modal_k, modal_no_source, modal_out);
        if (*ccj) return cmd_ccj_speeds(ccj_flags, ccj_vxi, ccj_json);
        if (*witness) return cmd_witness(witness_flags, witness_json);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UnknownModel& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitConfig;
}
