#pragma once

// ClassificationRecord: one classified (state, direction) pair, with JSON
// (lossless round trip) and CSV serialization.

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cathyp/assembly.hpp"
#include "cathyp/charpoly.hpp"
#include "cathyp/spectral.hpp"

namespace cathyp {

struct ClusterRecord {
    double re = 0.0;
    double im = 0.0;
    int algebraic = 0;
    int geometric = 0;

    friend bool operator==(const ClusterRecord&, const ClusterRecord&) = default;
};

struct ClassificationRecord {
    std::size_t index = 0;
    double lambda = 0.0;
    double nu = 0.0;
    double rho = 0.0;
    double theta = 0.0;
    std::vector<double> v;
    std::vector<double> q;
    std::vector<double> xi;
    /// Empty when the row failed; see `error`.
    std::string verdict;
    std::vector<ClusterRecord> clusters;
    std::optional<double> delta;
    std::string error;
    /// Wall time of the classification, microseconds. Not part of the CSV.
    double elapsed_us = 0.0;

    bool ok() const { return error.empty(); }

    friend bool operator==(const ClassificationRecord&, const ClassificationRecord&) = default;
};

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Discriminant of the quartic factor for the record's inputs.
inline double record_discriminant(const ConstitutiveModel& model, const State& state,
                                  const Direction& xi, const LambdaNu& ln, SymbolKind kind) {
    const LambdaNu effective = kind == SymbolKind::ChristovJordan ? LambdaNu{0.0, 0.0} : ln;
    const DepressedQuartic dq = state.dim == 1 ? quartic_from_state_1d(model, state, effective)
                                               : quartic_from_state_3d(model, state, xi, effective);
    return discriminant(dq).delta;
}

/// Classifies one (state, direction) pair into a record. Library errors are
/// captured in `error` rather than thrown.
inline ClassificationRecord classify_record(const ConstitutiveModel& model, const State& state,
                                            const Direction& xi, const LambdaNu& ln,
                                            const TolProfile& tol = {},
                                            SymbolKind kind = SymbolKind::Objective) {
    ClassificationRecord rec;
    rec.lambda = ln.lambda;
    rec.nu = ln.nu;
    rec.rho = state.rho;
    rec.theta = state.theta;
    rec.v = to_std(state.v);
    rec.q = to_std(state.q);
    rec.xi = to_std(xi.vec());
    const auto start = std::chrono::steady_clock::now();
    try {
        const SpectrumReport rep = classify_state(model, state, xi, ln, tol, kind);
        rec.verdict = to_string(rep.verdict);
        for (const auto& c : rep.clusters) {
            rec.clusters.push_back({c.value.real(), c.value.imag(), c.algebraic, c.geometric});
        }
        rec.delta = record_discriminant(model, state, xi, ln, kind);
    } catch (const Error& e) {
        rec.verdict.clear();
        rec.clusters.clear();
        rec.delta.reset();
        rec.error = e.what();
    }
    rec.elapsed_us =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const ClusterRecord& c) {
    j = nlohmann::json{{"re", c.re}, {"im", c.im}, {"algebraic", c.algebraic}, {"geometric", c.geometric}};
}

inline void from_json(const nlohmann::json& j, ClusterRecord& c) {
    j.at("re").get_to(c.re);
    j.at("im").get_to(c.im);
    j.at("algebraic").get_to(c.algebraic);
    j.at("geometric").get_to(c.geometric);
}

inline void to_json(nlohmann::json& j, const ClassificationRecord& r) {
    j = nlohmann::json{{"index", r.index}, {"lambda", r.lambda}, {"nu", r.nu},
                       {"rho", r.rho},     {"theta", r.theta},   {"v", r.v},
                       {"q", r.q},         {"xi", r.xi},         {"verdict", r.verdict},
                       {"clusters", r.clusters},                 {"error", r.error},
                       {"elapsed_us", r.elapsed_us}};
    j["delta"] = r.delta ? nlohmann::json(*r.delta) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, ClassificationRecord& r) {
    j.at("index").get_to(r.index);
    j.at("lambda").get_to(r.lambda);
    j.at("nu").get_to(r.nu);
    j.at("rho").get_to(r.rho);
    j.at("theta").get_to(r.theta);
    j.at("v").get_to(r.v);
    j.at("q").get_to(r.q);
    j.at("xi").get_to(r.xi);
    j.at("verdict").get_to(r.verdict);
    j.at("clusters").get_to(r.clusters);
    j.at("error").get_to(r.error);
    j.at("elapsed_us").get_to(r.elapsed_us);
    const auto& d = j.at("delta");
    r.delta = d.is_null() ? std::nullopt : std::optional<double>(d.get<double>());
}

// ---------------------------------------------------------------------------
// CSV

/// 17 significant digits so that equal doubles print identically and round trip.
inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_field(fields[i]);
    }
    os << "\r\n";
}

inline const std::vector<std::string>& record_csv_header() {
    static const std::vector<std::string> header = {
        "index", "lambda", "nu", "rho", "theta", "v1", "v2", "v3", "q1", "q2", "q3",
        "xi1", "xi2", "xi3", "verdict", "n_clusters", "max_abs_im", "eta_re", "eta_im",
        "multiplicities", "delta", "error"};
    return header;
}

inline std::vector<std::string> record_csv_fields(const ClassificationRecord& r) {
    std::vector<std::string> f;
    f.push_back(std::to_string(r.index));
    f.push_back(format_number(r.lambda));
    f.push_back(format_number(r.nu));
    f.push_back(format_number(r.rho));
    f.push_back(format_number(r.theta));
    for (const auto* vec : {&r.v, &r.q, &r.xi}) {
        for (std::size_t i = 0; i < 3; ++i) f.push_back(i < vec->size() ? format_number((*vec)[i]) : "");
    }
    f.push_back(r.verdict);
    f.push_back(r.ok() ? std::to_string(r.clusters.size()) : "");

    double max_im = 0.0;
    std::string re_list, im_list, mult;
    for (std::size_t i = 0; i < r.clusters.size(); ++i) {
        const auto& c = r.clusters[i];
        max_im = std::max(max_im, std::abs(c.im));
        const char* sep = i ? ";" : "";
        re_list += sep + format_number(c.re);
        im_list += sep + format_number(c.im);
        mult += sep + std::to_string(c.algebraic) + "/" + std::to_string(c.geometric);
    }
    f.push_back(r.ok() ? format_number(max_im) : "");
    f.push_back(re_list);
    f.push_back(im_list);
    f.push_back(mult);
    f.push_back(r.delta ? format_number(*r.delta) : "");
    f.push_back(r.error);
    return f;
}

inline void write_records_csv(std::ostream& os, const std::vector<ClassificationRecord>& records) {
    write_csv_row(os, record_csv_header());
    for (const auto& r : records) write_csv_row(os, record_csv_fields(r));
}

inline void write_records_jsonl(std::ostream& os, const std::vector<ClassificationRecord>& records) {
    for (const auto& r : records) os << nlohmann::json(r).dump() << '\n';
}

inline std::vector<ClassificationRecord> read_records_jsonl(std::istream& is) {
    std::vector<ClassificationRecord> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        out.push_back(nlohmann::json::parse(line).get<ClassificationRecord>());
    }
    return out;
}

} // namespace cathyp
