#include <gtest/gtest.h>

#include <sstream>

#include "cathyp/sweep.hpp"

using namespace cathyp;
using nlohmann::json;

namespace {

std::string sweep_csv(const json& doc) {
    const SweepResult r = run_sweep(parse_sweep_config(doc));
    std::ostringstream os;
    write_records_csv(os, r.records);
    return os.str();
}

json lattice_config() {
    return json::parse(R"({
      "lambda_nu": {"lattice": {"lambda": [-2, 2, 5], "nu": [-2, 2, 5]}, "include_line": true},
      "states": {"explicit": [{"rho": 1, "theta": 1, "v": [0, 0, 0],
                               "q": [5.7735026918962573, 5.7735026918962573, 5.7735026918962573]}]},
      "directions": {"axes": false, "fibonacci": 0, "align_q": true}
    })");
}

} // namespace

TEST(Csv, Quoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
    std::ostringstream os;
    write_csv_row(os, {"x", "1,2", ""});
    EXPECT_EQ(os.str(), "x,\"1,2\",\r\n");
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Records, ClassifyRecordCapturesErrors) {
    State bad = State::three_d(-1.0, Vector3::Zero(), 1.0, Vector3::Zero());
    const auto rec = classify_record(ideal_gas(), bad, Direction::axis(3, 0), LambdaNu{1.0, -1.0});
    EXPECT_FALSE(rec.ok());
    EXPECT_TRUE(rec.verdict.empty());
    EXPECT_FALSE(rec.delta.has_value());
    const auto fields = record_csv_fields(rec);
    EXPECT_EQ(fields.size(), record_csv_header().size());
    EXPECT_EQ(fields.back(), rec.error);
}

TEST(Records, JsonRoundTrip) {
    const State s = State::three_d(1.3, Vector3(0.1, -0.2, 0.3), 0.7, Vector3(1.0 / 3.0, 2.0, -1e-7));
    std::vector<ClassificationRecord> recs{
        classify_record(ideal_gas(), s, Direction::normalized(Vector3(1, 2, 3)), LambdaNu{0.3, 0.9}),
        classify_record(ideal_gas(), State::three_d(1.0, Vector3::Zero(), 0.0, Vector3::Zero()),
                        Direction::axis(3, 1), LambdaNu{1.0, -1.0})};
    recs[1].index = 1;
    std::stringstream ss;
    write_records_jsonl(ss, recs);
    const auto back = read_records_jsonl(ss);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0], recs[0]);
    EXPECT_EQ(back[1], recs[1]);
    EXPECT_FALSE(back[1].delta.has_value());
}

TEST(Sweep, ConfigParsing) {
    const auto cfg = parse_sweep_config(lattice_config());
    // 25 lattice pairs; the lambda = -nu line is already on the lattice.
    EXPECT_EQ(cfg.lambda_nu.size(), 25u);
    EXPECT_THROW(parse_sweep_config(json::parse(R"({"dim": 2})")), ConfigError);
    EXPECT_THROW(parse_sweep_config(json::parse(R"({"model": {"name": "nope"}})")), ConfigError);
    EXPECT_THROW(parse_sweep_config(json::parse(R"({"directions": {"axes": false, "fibonacci": 0, "align_q": false}})")),
                 ConfigError);
    EXPECT_THROW(parse_sweep_config(json::parse(R"({"tolerances": {"real_tol": -1}})")), ConfigError);
    const auto named = parse_sweep_config(json::parse(R"({"lambda_nu": {"pairs": ["christov", [2, 0.5]]}})"));
    ASSERT_EQ(named.lambda_nu.size(), 2u);
    EXPECT_EQ(named.lambda_nu[0], (LambdaNu{-1.0, 1.0}));
    const auto dirs = parse_sweep_config(json::parse(R"({"directions": {"explicit": [[3, 4, 0]], "axes": false, "fibonacci": 0}})"));
    ASSERT_EQ(dirs.directions.explicit_dirs.size(), 1u);
    EXPECT_NEAR(dirs.directions.explicit_dirs[0](0), 0.6, 1e-15);
}

TEST(Sweep, LatticeVerdicts) {
    const SweepResult r = run_sweep(parse_sweep_config(lattice_config()));
    ASSERT_EQ(r.records.size(), 25u);
    for (const auto& rec : r.records) {
        ASSERT_TRUE(rec.ok()) << rec.error;
        const bool on_line = rec.lambda + rec.nu == 0.0;
        if (rec.lambda == 1.0 && rec.nu == -1.0) {
            EXPECT_EQ(rec.verdict, "HYPERBOLIC");
        } else if (on_line) {
            EXPECT_EQ(rec.verdict, "WEAKLY_HYPERBOLIC") << rec.lambda;
        } else {
            EXPECT_EQ(rec.verdict, "NON_HYPERBOLIC") << rec.lambda << " " << rec.nu;
        }
    }
    EXPECT_EQ(r.summary.total, 25u);
    EXPECT_EQ(r.summary.failed, 0u);
    ASSERT_EQ(r.verdict_map.size(), 25u);
    std::ostringstream os;
    write_verdict_map_csv(os, r.verdict_map);
    EXPECT_NE(os.str().find("1,-1,1\r\n"), std::string::npos);
}

TEST(Sweep, SingleCellEqualsClassify) {
    const json doc = json::parse(R"({
      "lambda_nu": {"pairs": [[0.4, -1.3]]},
      "states": {"explicit": [{"rho": 2, "theta": 0.5, "v": [1, 0, 0], "q": [0.2, 0.1, -3]}]},
      "directions": {"explicit": [[1, 2, 2]], "axes": false, "fibonacci": 0, "align_q": false}
    })");
    const SweepResult r = run_sweep(parse_sweep_config(doc));
    ASSERT_EQ(r.records.size(), 1u);
    const State s = State::three_d(2.0, Vector3(1, 0, 0), 0.5, Vector3(0.2, 0.1, -3));
    const auto rep = classify_state(ideal_gas(), s, Direction::normalized(Vector3(1, 2, 2)), LambdaNu{0.4, -1.3});
    EXPECT_EQ(r.records[0].verdict, to_string(rep.verdict));
    ASSERT_EQ(r.records[0].clusters.size(), rep.clusters.size());
    for (std::size_t i = 0; i < rep.clusters.size(); ++i) {
        EXPECT_EQ(r.records[0].clusters[i].re, rep.clusters[i].value.real());
        EXPECT_EQ(r.records[0].clusters[i].geometric, rep.clusters[i].geometric);
    }
}

TEST(Sweep, DeterministicAcrossRunsAndThreads) {
    json doc = json::parse(R"({
      "lambda_nu": {"pairs": [[1, -1], [-1, 1], [1, 0]]},
      "states": {"random": {"count": 6}},
      "directions": {"fibonacci": 8, "axes": true, "align_q": true},
      "seed": 99
    })");
    doc["threads"] = 1;
    const std::string one = sweep_csv(doc);
    doc["threads"] = 4;
    const std::string four = sweep_csv(doc);
    EXPECT_EQ(one, four);
    EXPECT_EQ(one, sweep_csv(doc));
    doc["seed"] = 100;
    EXPECT_NE(one, sweep_csv(doc));
}

TEST(Sampling, FibonacciSphere) {
    const auto pts = fibonacci_sphere(200);
    ASSERT_EQ(pts.size(), 200u);
    Vector3 mean = Vector3::Zero();
    for (const auto& p : pts) {
        EXPECT_NEAR(p.vec().norm(), 1.0, 1e-14);
        mean += Vector3(p.vec());
    }
    EXPECT_LT((mean / 200.0).norm(), 0.02);
    EXPECT_TRUE(fibonacci_sphere(0).empty());
}
