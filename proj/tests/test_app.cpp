#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plurality/app.hpp"
#include "plurality/errors.hpp"
#include "plurality/oracle.hpp"

using namespace plurality;
using namespace plurality::app;
using Json = nlohmann::json;

namespace {

ExperimentSpec spec_for(std::vector<Color> colors, std::uint32_t k) {
    ExperimentSpec s;
    s.colors = std::move(colors);
    s.k = k;
    return s;
}

}  // namespace

TEST_CASE("color lists: inline, histogram and comments") {
    CHECK(parse_color_labels("0,1,1") == std::vector<std::int64_t>{0, 1, 1});
    CHECK(parse_color_labels("2\n0\n 1 \n") == std::vector<std::int64_t>{2, 0, 1});
    CHECK(parse_color_labels("0:2, 3:1") == std::vector<std::int64_t>{0, 0, 3});
    CHECK(parse_color_labels("# header\n5:0\n7\n") == std::vector<std::int64_t>{7});
    CHECK_THROWS_AS((void)parse_color_labels("1,x"), DomainError);
    CHECK_THROWS_AS((void)parse_color_labels("1:-2"), DomainError);
    CHECK_THROWS_AS((void)parse_color_labels("1.5"), DomainError);
}

TEST_CASE("prepare_colors validates and optionally densifies") {
    const auto plain = prepare_colors({0, 2, 2}, std::nullopt, false);
    CHECK(plain.k == 3);
    CHECK(plain.colors == std::vector<Color>{0, 2, 2});
    CHECK(plain.label_map.empty());

    CHECK_THROWS_AS((void)prepare_colors({0, 4}, 4, false), DomainError);
    CHECK_THROWS_AS((void)prepare_colors({-3, 1}, std::nullopt, false), DomainError);
    CHECK_THROWS_AS((void)prepare_colors({}, std::nullopt, false), ConfigError);

    const auto dense = prepare_colors({40, -3, 40, 1000}, std::nullopt, true);
    CHECK(dense.k == 3);
    CHECK(dense.colors == std::vector<Color>{1, 0, 1, 2});
    CHECK(dense.label_map == std::vector<std::pair<std::int64_t, Color>>{{-3, 0}, {40, 1}, {1000, 2}});

    const auto wider = prepare_colors({10, 20}, 5, true);
    CHECK(wider.k == 5);
    CHECK_THROWS_AS((void)prepare_colors({10, 20, 30}, 2, true), DomainError);
}

TEST_CASE("random colors") {
    const auto a = random_colors("uniform", 40, 4, 3);
    CHECK(a == random_colors("uniform", 40, 4, 3));
    CHECK(a.size() == 40);
    for (Color c : a) CHECK(c < 4);

    const auto w = random_colors("weights:0,5,0", 30, 3, 1);
    for (Color c : w) CHECK(c == 1);
    CHECK_THROWS_AS((void)random_colors("weights:1,1", 5, 3, 1), DomainError);
    CHECK_THROWS_AS((void)random_colors("weights:0,0", 5, 2, 1), DomainError);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = random_colors("planted:3", 25, 5, seed);
        std::vector<std::size_t> counts(5, 0);
        for (Color c : p) ++counts[c];
        std::sort(counts.begin(), counts.end());
        CHECK(counts[4] >= counts[3] + 3);
    }
    CHECK_THROWS_AS((void)random_colors("planted:9", 5, 2, 1), DomainError);
    CHECK_THROWS_AS((void)random_colors("zipf", 5, 2, 1), DomainError);
}

TEST_CASE("cmd_run: unique majority converges to the winner") {
    std::ostringstream out;
    CHECK(cmd_run(spec_for({0, 1, 1}, 2), out) == kOk);
    const auto doc = Json::parse(out.str());
    CHECK(doc["converged"] == true);
    CHECK(doc["winner"] == 1);
    CHECK(doc["tie"] == false);
    CHECK(doc["n"] == 3);
    CHECK(doc["k"] == 2);
    CHECK(doc["scheduler"] == "roundrobin");
    CHECK(doc["final_outputs_histogram"] == Json::array({0, 3}));
    std::vector<std::string> keys;
    for (const auto& [key, value] : doc.items()) keys.push_back(key);
    CHECK(keys.size() == 12);
    for (const char* field : {"n", "k", "scheduler", "seed", "total_interactions", "ket_exchanges",
                              "out_updates", "quiescence_step", "converged", "tie", "winner",
                              "final_outputs_histogram"}) {
        CHECK(doc.contains(field));
    }
}

TEST_CASE("cmd_run: tie reports bra-ket quiescence") {
    std::ostringstream out;
    CHECK(cmd_run(spec_for({0, 1}, 2), out) == kOk);
    const auto doc = Json::parse(out.str());
    CHECK(doc["tie"] == true);
    CHECK(doc["winner"].is_null());
    CHECK(doc["converged"] == true);
    const auto r = run(init_configuration(std::vector<Color>{0, 1}, 2), RoundRobin{}, UntilQuiescent{});
    CHECK(r.final.braket_multiset() == BraKetMultiset{{{0, 1}, 1}, {{1, 0}, 1}});
}

TEST_CASE("cmd_run: adversary with a small cap reports non-convergence") {
    auto spec = spec_for({0, 1, 1}, 2);
    spec.scheduler = StarvationAdversary{{0, 1}, 1'000'000};
    spec.stop = UntilQuiescent{10};
    std::ostringstream out;
    CHECK(cmd_run(spec, out) == kNotConverged);
    const auto doc = Json::parse(out.str());
    CHECK(doc["converged"] == false);
    CHECK(doc["quiescence_step"].is_null());
    CHECK(doc["total_interactions"] == 10);
}

TEST_CASE("cmd_run: echoes the label map and writes traces") {
    auto spec = spec_for({1, 0, 1}, 2);
    spec.label_map = {{7, 0}, {9, 1}};
    spec.options.trace = TraceMode::thinned;
    std::ostringstream metrics, trace;
    CHECK(cmd_run(spec, metrics, &trace) == kOk);
    CHECK(Json::parse(metrics.str())["label_map"] == Json::array({Json::array({7, 0}), Json::array({9, 1})}));

    std::istringstream lines(trace.str());
    std::string line;
    std::size_t events = 0;
    while (std::getline(lines, line)) {
        const auto ev = Json::parse(line);
        CHECK(ev.contains("step"));
        CHECK(ev["pair"].size() == 2);
        CHECK(ev["pre"].size() == 2);
        CHECK(ev["post"][0].size() == 3);
        CHECK((ev["exchanged"] == true || ev["out_changed"] == true));
        ++events;
    }
    CHECK(events > 0);

    spec.trace_format = OutputFormat::csv;
    std::ostringstream m2, csv;
    CHECK(cmd_run(spec, m2, &csv) == kOk);
    const std::string table = csv.str();
    CHECK(table.rfind("step,first,second,", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(table.begin(), table.end(), '\n')) == events + 1);
}

TEST_CASE("cmd_run is byte-for-byte reproducible") {
    auto spec = spec_for(random_colors("uniform", 30, 4, 8), 4);
    spec.scheduler = UniformRandom{5};
    spec.seed = 5;
    spec.options.trace = TraceMode::full;
    std::ostringstream m1, t1, m2, t2;
    const int e1 = cmd_run(spec, m1, &t1);
    const int e2 = cmd_run(spec, m2, &t2);
    CHECK(e1 == e2);
    CHECK(m1.str() == m2.str());
    CHECK(t1.str() == t2.str());
}

TEST_CASE("cmd_verify: n-max 1 is trivially correct") {
    std::ostringstream out;
    CHECK(cmd_verify({1, 3, false, 0, 0}, out) == kOk);
    const auto doc = Json::parse(out.str());
    CHECK(doc["ok"] == true);
    CHECK(doc["instances"] == 6);
    CHECK(doc["counterexamples"].empty());
    CHECK_THROWS_AS((void)cmd_verify({0, 3, false, 0, 0}, out), ConfigError);
}

TEST_CASE("cmd_verify: randomized report") {
    std::ostringstream out;
    CHECK(cmd_verify({10, 4, true, 40, 3}, out) == kOk);
    const auto doc = Json::parse(out.str());
    CHECK(doc["mode"] == "randomized");
    CHECK(doc["instances"] == 40);
    CHECK(doc["passed"] == 40);
}

TEST_CASE("cmd_sweep: deterministic, thread-count independent, sane aggregates") {
    SweepSpec spec;
    spec.ns = {1, 6, 10};
    spec.ks = {1, 2, 3};
    spec.trials = 5;
    spec.seed = 12;
    std::ostringstream a, b, c;
    CHECK(cmd_sweep(spec, a) == kOk);
    CHECK(cmd_sweep(spec, b) == kOk);
    spec.jobs = 4;
    CHECK(cmd_sweep(spec, c) == kOk);
    CHECK(a.str() == b.str());
    CHECK(a.str() == c.str());

    std::istringstream rows(a.str());
    std::string line;
    std::getline(rows, line);
    CHECK(line.rfind("n,k,trials,converged,", 0) == 0);
    std::size_t count = 0;
    while (std::getline(rows, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        REQUIRE(f.size() == 10);
        CHECK(f[3] == "5");
        CHECK(std::stoull(f[9]) <= std::stoull(f[7]));  // max exchanges <= max interactions
        if (f[1] == "1") CHECK(f[9] == "0");
        ++count;
    }
    CHECK(count == 9);
}

TEST_CASE("cmd_sweep: json-lines and validation") {
    SweepSpec spec;
    spec.ns = {5};
    spec.ks = {2};
    spec.trials = 3;
    spec.format = OutputFormat::json_lines;
    spec.random_scheduler = true;
    std::ostringstream out;
    CHECK(cmd_sweep(spec, out) == kOk);
    const auto row = Json::parse(out.str());
    CHECK(row["n"] == 5);
    CHECK(row["converged"] == 3);

    spec.ks = {};
    CHECK_THROWS_AS((void)cmd_sweep(spec, out), ConfigError);
    spec.ks = {0};
    CHECK_THROWS_AS((void)cmd_sweep(spec, out), DomainError);
}

TEST_CASE("parse helpers") {
    CHECK(parse_format("csv") == OutputFormat::csv);
    CHECK(parse_format("json-lines") == OutputFormat::json_lines);
    CHECK_THROWS_AS((void)parse_format("xml"), DomainError);
    CHECK(parse_assert_level("full") == AssertLevel::full);
    CHECK_THROWS_AS((void)parse_assert_level("most"), DomainError);
}
