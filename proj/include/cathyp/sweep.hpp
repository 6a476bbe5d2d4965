#pragma once

// Parameter sweeps over (lambda, nu), states and directions, configured by
// a single JSON document.
//
// Config keys (all optional except where a grid would end up empty):
//   model:       {"name": "ideal-gas", "params": {"R": 1, ...}}
//   dim:         1 or 3 (default 3)
//   symbol:      "objective" (default) or "ccj"
//   lambda_nu:   {"pairs": [[l, n], "christov", ...],
//                 "lattice": {"lambda": [lo, hi, n], "nu": [lo, hi, n]},
//                 "include_line": bool}       // add (l, -l) for lattice l values
//   states:      {"explicit": [{"rho", "theta", "v", "q"}],
//                 "random": {"count": n},
//                 "grid": {"thermo": [[rho, theta], ...], "v": [...],
//                          "q_magnitudes": [...], "q_orientations": [[...], ...],
//                          "q_sampled": n}}
//   directions:  {"explicit": [[...]], "axes": bool, "fibonacci": n, "align_q": bool}
//   tolerances:  {"real_tol", "cluster_gap", "rank_tol"}
//   seed, threads
//   output:      {"csv": path, "jsonl": path, "verdict_map": path}

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cathyp/assembly.hpp"
#include "cathyp/constitutive.hpp"
#include "cathyp/report.hpp"
#include "cathyp/sampling.hpp"
#include "cathyp/spectral.hpp"

namespace cathyp {

/// Raised for malformed sweep or classify configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct DirectionSpec {
    std::vector<Vector> explicit_dirs;
    bool axes = true;
    int fibonacci = 64;
    bool align_q = true;
};

struct OutputSpec {
    std::string csv;
    std::string jsonl;
    std::string verdict_map;
};

struct SweepConfig {
    std::string model_name = "ideal-gas";
    ModelParameters model_params;
    int dim = 3;
    SymbolKind kind = SymbolKind::Objective;
    std::vector<LambdaNu> lambda_nu;
    std::vector<State> states;
    DirectionSpec directions;
    TolProfile tol;
    std::uint64_t seed = 1;
    int threads = 0;
    OutputSpec output;
};

namespace detail {

inline std::vector<double> linspace(const nlohmann::json& spec, const char* name) {
    if (!spec.is_array() || spec.size() != 3) {
        throw ConfigError(std::string("lambda_nu.lattice.") + name + " must be [lo, hi, n]");
    }
    const double lo = spec[0].get<double>();
    const double hi = spec[1].get<double>();
    const int n = spec[2].get<int>();
    if (n < 1) throw ConfigError(std::string("lambda_nu.lattice.") + name + " needs n >= 1");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

inline Vector vector_of(const nlohmann::json& j, int dim, const std::string& field) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw ConfigError(field + " must have " + std::to_string(dim) + " components");
    }
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = j[i].get<double>();
    return v;
}

inline LambdaNu pair_of(const nlohmann::json& j) {
    if (j.is_string()) {
        try {
            return named_lambda_nu(j.get<std::string>());
        } catch (const UnknownModel& e) {
            throw ConfigError(std::string("lambda_nu.pairs: ") + e.what());
        }
    }
    if (!j.is_array() || j.size() != 2) throw ConfigError("lambda_nu.pairs entries must be [lambda, nu]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline void push_unique(std::vector<LambdaNu>& list, LambdaNu ln) {
    if (std::find(list.begin(), list.end(), ln) == list.end()) list.push_back(ln);
}

} // namespace detail

/// Reads a config document. Random states are drawn here, so the expanded
/// config is fully determined by the document (including its seed).
inline SweepConfig parse_sweep_config(const nlohmann::json& doc) {
    SweepConfig cfg;
    try {
        if (!doc.is_object()) throw ConfigError("config must be a JSON object");
        if (doc.contains("model")) {
            const auto& m = doc.at("model");
            cfg.model_name = m.value("name", cfg.model_name);
            if (m.contains("params")) cfg.model_params = m.at("params").get<ModelParameters>();
        }
        (void)make_model(cfg.model_name, cfg.model_params);
        cfg.dim = doc.value("dim", 3);
        if (cfg.dim != 1 && cfg.dim != 3) throw ConfigError("dim must be 1 or 3");
        const std::string kind = doc.value("symbol", std::string("objective"));
        if (kind == "objective") cfg.kind = SymbolKind::Objective;
        else if (kind == "ccj") cfg.kind = SymbolKind::ChristovJordan;
        else throw ConfigError("symbol must be \"objective\" or \"ccj\"");
        cfg.seed = doc.value("seed", std::uint64_t{1});
        cfg.threads = doc.value("threads", 0);

        if (doc.contains("lambda_nu")) {
            const auto& ln = doc.at("lambda_nu");
            if (ln.contains("pairs")) {
                for (const auto& p : ln.at("pairs")) detail::push_unique(cfg.lambda_nu, detail::pair_of(p));
            }
            if (ln.contains("lattice")) {
                const auto& lat = ln.at("lattice");
                const auto ls = detail::linspace(lat.at("lambda"), "lambda");
                const auto ns = detail::linspace(lat.at("nu"), "nu");
                for (double l : ls) {
                    for (double n : ns) detail::push_unique(cfg.lambda_nu, {l, n});
                }
                if (ln.value("include_line", false)) {
                    for (double l : ls) detail::push_unique(cfg.lambda_nu, {l, -l});
                }
            }
        } else {
            cfg.lambda_nu.push_back({1.0, -1.0});
        }

        StateSampler sampler(cfg.seed);
        if (doc.contains("states")) {
            const auto& st = doc.at("states");
            if (st.contains("explicit")) {
                for (const auto& s : st.at("explicit")) {
                    State state;
                    state.dim = cfg.dim;
                    state.rho = s.value("rho", 1.0);
                    state.theta = s.value("theta", 1.0);
                    state.v = s.contains("v") ? detail::vector_of(s.at("v"), cfg.dim, "states.explicit.v")
                                              : Vector(Vector::Zero(cfg.dim));
                    state.q = s.contains("q") ? detail::vector_of(s.at("q"), cfg.dim, "states.explicit.q")
                                              : Vector(Vector::Zero(cfg.dim));
                    cfg.states.push_back(state);
                }
            }
            if (st.contains("grid")) {
                const auto& g = st.at("grid");
                std::vector<ThermoPoint> thermo;
                for (const auto& t : g.value("thermo", nlohmann::json::array({{1.0, 1.0}}))) {
                    thermo.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
                }
                const Vector v = g.contains("v") ? detail::vector_of(g.at("v"), cfg.dim, "states.grid.v")
                                                 : Vector(Vector::Zero(cfg.dim));
                std::vector<Vector> orientations;
                if (g.contains("q_orientations")) {
                    for (const auto& o : g.at("q_orientations")) {
                        orientations.push_back(
                            Direction::normalized(detail::vector_of(o, cfg.dim, "states.grid.q_orientations")).vec());
                    }
                }
                for (int i = 0; i < g.value("q_sampled", 0); ++i) orientations.push_back(sampler.direction(cfg.dim).vec());
                if (orientations.empty()) orientations.push_back(Direction::axis(cfg.dim, 0).vec());
                const auto mags = g.value("q_magnitudes", std::vector<double>{0.0});
                if (thermo.empty() || mags.empty()) throw ConfigError("states.grid has an empty axis");
                for (const auto& t : thermo) {
                    for (double mag : mags) {
                        for (const auto& o : orientations) {
                            State s;
                            s.dim = cfg.dim;
                            s.rho = t.rho;
                            s.theta = t.theta;
                            s.v = v;
                            s.q = mag * o;
                            cfg.states.push_back(s);
                        }
                    }
                }
            }
            if (st.contains("random")) {
                const int count = st.at("random").value("count", 0);
                for (int i = 0; i < count; ++i) cfg.states.push_back(sampler.state(cfg.dim));
            }
        } else {
            cfg.states.push_back(cfg.dim == 1 ? State::one_d(1.0, 0.0, 1.0, 0.0)
                                              : State::three_d(1.0, Vector3::Zero(), 1.0, Vector3::Zero()));
        }

        if (doc.contains("directions")) {
            const auto& d = doc.at("directions");
            if (d.contains("explicit")) {
                for (const auto& x : d.at("explicit")) {
                    cfg.directions.explicit_dirs.push_back(
                        Direction::normalized(detail::vector_of(x, cfg.dim, "directions.explicit")).vec());
                }
            }
            cfg.directions.axes = d.value("axes", cfg.directions.axes);
            cfg.directions.fibonacci = d.value("fibonacci", cfg.directions.fibonacci);
            cfg.directions.align_q = d.value("align_q", cfg.directions.align_q);
        }

        if (doc.contains("tolerances")) {
            const auto& t = doc.at("tolerances");
            cfg.tol.real_tol = t.value("real_tol", cfg.tol.real_tol);
            cfg.tol.cluster_gap = t.value("cluster_gap", cfg.tol.cluster_gap);
            cfg.tol.rank_tol = t.value("rank_tol", cfg.tol.rank_tol);
        }
        if (doc.contains("output")) {
            const auto& o = doc.at("output");
            cfg.output.csv = o.value("csv", std::string());
            cfg.output.jsonl = o.value("jsonl", std::string());
            cfg.output.verdict_map = o.value("verdict_map", std::string());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const UnknownModel& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (cfg.lambda_nu.empty()) throw ConfigError("lambda_nu grid is empty");
    if (cfg.states.empty()) throw ConfigError("state grid is empty");
    const auto& ds = cfg.directions;
    const bool sphere_grid = cfg.dim == 3 && ds.fibonacci > 0;
    if (ds.explicit_dirs.empty() && !ds.axes && !sphere_grid && !ds.align_q) {
        throw ConfigError("direction grid is empty");
    }
    if (!(cfg.tol.real_tol > 0.0 && cfg.tol.cluster_gap > 0.0 && cfg.tol.rank_tol > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
    return cfg;
}

/// Directions for one state: explicit, then Fibonacci lattice, then axes,
/// then q/|q| when q != 0.
inline std::vector<Direction> directions_for(const SweepConfig& cfg, const State& state) {
    std::vector<Direction> out;
    for (const auto& x : cfg.directions.explicit_dirs) out.emplace_back(x);
    if (cfg.dim == 3) {
        for (auto& d : fibonacci_sphere(cfg.directions.fibonacci)) out.push_back(std::move(d));
    }
    if (cfg.directions.axes) {
        for (auto& d : canonical_axes(cfg.dim)) out.push_back(std::move(d));
    }
    if (cfg.directions.align_q && state.q.size() == cfg.dim && state.q.norm() > 0.0) {
        out.push_back(Direction::normalized(state.q));
    }
    return out;
}

struct SweepSummary {
    std::map<std::string, std::size_t> verdict_counts;
    std::size_t failed = 0;
    std::size_t total = 0;
};

struct VerdictCell {
    LambdaNu lambda_nu;
    std::size_t classified = 0;
    std::size_t hyperbolic = 0;

    double fraction_hyperbolic() const {
        return classified ? static_cast<double>(hyperbolic) / static_cast<double>(classified) : 0.0;
    }
};

struct SweepResult {
    std::vector<ClassificationRecord> records;
    SweepSummary summary;
    std::vector<VerdictCell> verdict_map;
};

inline int default_thread_count() {
    if (const char* env = std::getenv("CATHYP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs every (lambda_nu, state, direction) cell. Row order is lexicographic
/// in those indices regardless of the thread count.
inline SweepResult run_sweep(const SweepConfig& cfg) {
    ConstitutiveModel model;
    try {
        model = make_model(cfg.model_name, cfg.model_params);
    } catch (const UnknownModel& e) {
        throw ConfigError(e.what());
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }

    struct Job {
        std::size_t ln;
        std::size_t state;
        Direction xi;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < cfg.lambda_nu.size(); ++i) {
        for (std::size_t s = 0; s < cfg.states.size(); ++s) {
            for (auto& d : directions_for(cfg, cfg.states[s])) jobs.push_back({i, s, std::move(d)});
        }
    }
    if (jobs.empty()) throw ConfigError("direction grid is empty for every state");

    SweepResult result;
    result.records.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            ClassificationRecord rec = classify_record(model, cfg.states[job.state], job.xi,
                                                       cfg.lambda_nu[job.ln], cfg.tol, cfg.kind);
            rec.index = i;
            result.records[i] = std::move(rec);
        }
    };
    const int threads = std::clamp<int>(cfg.threads > 0 ? cfg.threads : default_thread_count(), 1,
                                        static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& ln : cfg.lambda_nu) result.verdict_map.push_back({ln, 0, 0});
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& rec = result.records[i];
        ++result.summary.total;
        if (!rec.ok()) {
            ++result.summary.failed;
            continue;
        }
        ++result.summary.verdict_counts[rec.verdict];
        auto& cell = result.verdict_map[jobs[i].ln];
        ++cell.classified;
        if (rec.verdict == to_string(Verdict::Hyperbolic)) ++cell.hyperbolic;
    }
    return result;
}

inline void write_verdict_map_csv(std::ostream& os, const std::vector<VerdictCell>& cells) {
    write_csv_row(os, {"lambda", "nu", "fraction_hyperbolic"});
    for (const auto& c : cells) {
        write_csv_row(os, {format_number(c.lambda_nu.lambda), format_number(c.lambda_nu.nu),
                           format_number(c.fraction_hyperbolic())});
    }
}

inline void write_summary(std::ostream& os, const SweepSummary& s) {
    os << "rows: " << s.total << "\n";
    for (const char* v : {"HYPERBOLIC", "WEAKLY_HYPERBOLIC", "NON_HYPERBOLIC"}) {
        auto it = s.verdict_counts.find(v);
        os << "  " << v << ": " << (it == s.verdict_counts.end() ? 0 : it->second) << "\n";
    }
    os << "  failed: " << s.failed << "\n";
}

} // namespace cathyp
