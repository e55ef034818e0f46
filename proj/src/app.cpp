#include "plurality/app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "plurality/errors.hpp"
#include "plurality/oracle.hpp"
#include "plurality/verify.hpp"

namespace plurality::app {
namespace {

using Json = nlohmann::ordered_json;

std::int64_t parse_int(std::string_view token) {
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
        value = std::stoll(std::string(token), &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != token.size()) {
        throw DomainError("not an integer: '" + std::string(token) + "'");
    }
    return value;
}

Json state_json(const AgentState& s) { return Json::array({s.bra, s.ket, s.out}); }

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

OutputFormat parse_format(std::string_view name) {
    if (name == "json-lines" || name == "jsonl") {
        return OutputFormat::json_lines;
    }
    if (name == "csv") {
        return OutputFormat::csv;
    }
    throw DomainError("unknown format '" + std::string(name) + "' (expected json-lines or csv)");
}

AssertLevel parse_assert_level(std::string_view name) {
    if (name == "off") {
        return AssertLevel::off;
    }
    if (name == "safety") {
        return AssertLevel::safety;
    }
    if (name == "full") {
        return AssertLevel::full;
    }
    throw DomainError("unknown assertion level '" + std::string(name) + "' (expected off, safety or full)");
}

std::vector<std::int64_t> parse_color_labels(std::string_view text) {
    std::vector<std::int64_t> labels;
    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos) {
                labels.push_back(parse_int(token));
                continue;
            }
            const auto label = parse_int(std::string_view(token).substr(0, colon));
            const auto count = parse_int(std::string_view(token).substr(colon + 1));
            if (count < 0) {
                throw DomainError("negative count in '" + token + "'");
            }
            labels.insert(labels.end(), static_cast<std::size_t>(count), label);
        }
    }
    return labels;
}

std::vector<std::int64_t> load_color_labels(const std::string& source) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(source, ec)) {
        std::ifstream in(source);
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_color_labels(buf.str());
    }
    return parse_color_labels(source);
}

DenseColors prepare_colors(const std::vector<std::int64_t>& labels, std::optional<std::uint32_t> k,
                           bool densify) {
    if (labels.empty()) {
        throw ConfigError("a population needs at least one agent");
    }
    DenseColors out;
    if (densify) {
        std::vector<std::int64_t> distinct(labels);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::map<std::int64_t, Color> index;
        for (std::size_t i = 0; i < distinct.size(); ++i) {
            index[distinct[i]] = static_cast<Color>(i);
            out.label_map.emplace_back(distinct[i], static_cast<Color>(i));
        }
        for (auto label : labels) {
            out.colors.push_back(index.at(label));
        }
        out.k = k.value_or(static_cast<std::uint32_t>(distinct.size()));
    } else {
        std::int64_t top = 0;
        for (auto label : labels) {
            if (label < 0 || label > std::int64_t{UINT32_MAX} - 1) {
                throw DomainError("color label " + std::to_string(label) +
                                  " is not a dense color; use --densify");
            }
            top = std::max(top, label);
            out.colors.push_back(static_cast<Color>(label));
        }
        out.k = k.value_or(static_cast<std::uint32_t>(top + 1));
    }
    for (Color c : out.colors) {
        require_valid_color(c, out.k);
    }
    return out;
}

std::vector<Color> random_colors(std::string_view spec, std::size_t n, std::uint32_t k,
                                 std::uint64_t seed) {
    require_valid_k(k);
    if (n == 0) {
        throw ConfigError("a population needs at least one agent");
    }
    std::mt19937_64 rng(seed);
    std::vector<Color> colors(n);

    if (spec.starts_with("weights:")) {
        std::vector<double> weights;
        for (auto w : parse_color_labels(spec.substr(8))) {
            if (w < 0) {
                throw DomainError("color weights must be non-negative");
            }
            weights.push_back(static_cast<double>(w));
        }
        if (weights.size() != k) {
            throw DomainError("expected " + std::to_string(k) + " color weights, got " +
                              std::to_string(weights.size()));
        }
        if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0; })) {
            throw DomainError("color weights must not all be zero");
        }
        std::discrete_distribution<Color> pick(weights.begin(), weights.end());
        for (auto& c : colors) {
            c = pick(rng);
        }
        return colors;
    }

    std::uniform_int_distribution<Color> pick(0, k - 1);
    for (auto& c : colors) {
        c = pick(rng);
    }
    if (spec == "uniform") {
        return colors;
    }
    if (!spec.starts_with("planted:")) {
        throw DomainError("unknown random color spec '" + std::string(spec) +
                          "' (expected uniform, weights:..., or planted:<margin>)");
    }
    const auto margin = parse_int(spec.substr(8));
    if (margin < 1 || static_cast<std::uint64_t>(margin) > n) {
        throw DomainError("planted margin must be in [1, n]");
    }
    const Color winner = pick(rng);
    std::vector<std::size_t> counts(k, 0);
    for (Color c : colors) {
        ++counts[c];
    }
    while (true) {
        Color runner_up = winner;
        std::size_t best = 0;
        for (Color c = 0; c < k; ++c) {
            if (c != winner && counts[c] > best) {
                best = counts[c];
                runner_up = c;
            }
        }
        if (counts[winner] >= best + static_cast<std::size_t>(margin)) {
            return colors;
        }
        // Move one random supporter of the runner-up to the winner.
        std::uniform_int_distribution<std::size_t> which(0, counts[runner_up] - 1);
        std::size_t skip = which(rng);
        for (auto& c : colors) {
            if (c == runner_up && skip-- == 0) {
                c = winner;
                break;
            }
        }
        --counts[runner_up];
        ++counts[winner];
    }
}

void write_trace(std::span<const StepEvent> events, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv) {
        out << "step,first,second,"
               "pre_first_bra,pre_first_ket,pre_first_out,pre_second_bra,pre_second_ket,pre_second_out,"
               "post_first_bra,post_first_ket,post_first_out,post_second_bra,post_second_ket,"
               "post_second_out,exchanged,out_changed\n";
        for (const auto& ev : events) {
            out << ev.step << ',' << ev.pair.first << ',' << ev.pair.second;
            for (const auto* s : {&ev.pre_first, &ev.pre_second, &ev.post_first, &ev.post_second}) {
                out << ',' << s->bra << ',' << s->ket << ',' << s->out;
            }
            out << ',' << int{ev.exchanged} << ',' << int{ev.out_changed} << '\n';
        }
        return;
    }
    for (const auto& ev : events) {
        Json line;
        line["step"] = ev.step;
        line["pair"] = Json::array({ev.pair.first, ev.pair.second});
        line["pre"] = Json::array({state_json(ev.pre_first), state_json(ev.pre_second)});
        line["post"] = Json::array({state_json(ev.post_first), state_json(ev.post_second)});
        line["exchanged"] = ev.exchanged;
        line["out_changed"] = ev.out_changed;
        out << line.dump() << '\n';
    }
}

int cmd_run(const ExperimentSpec& spec, std::ostream& metrics_out, std::ostream* trace_out) {
    const auto majority = oracle::brute_majority(spec.colors);
    const bool until_quiescent = std::holds_alternative<UntilQuiescent>(spec.stop);

    Json doc;
    doc["n"] = spec.colors.size();
    doc["k"] = spec.k;
    doc["scheduler"] = scheduler_name(spec.scheduler);
    doc["seed"] = spec.seed;

    std::optional<RunResult> result;
    try {
        result.emplace(run(init_configuration(spec.colors, spec.k), spec.scheduler, spec.stop, spec.options));
    } catch (const InvariantViolation& e) {
        doc["violation"] = e.what();
        metrics_out << doc.dump(2) << '\n';
        return kViolation;
    }
    const auto& m = result->metrics;

    doc["total_interactions"] = m.total_interactions;
    doc["ket_exchanges"] = m.ket_exchanges;
    doc["out_updates"] = m.out_updates;
    doc["quiescence_step"] = m.quiescence_step ? Json(*m.quiescence_step) : Json(nullptr);
    doc["converged"] = m.converged;
    doc["tie"] = m.tie;
    doc["winner"] = majority.unique ? Json(majority.winner) : Json(nullptr);
    doc["final_outputs_histogram"] = m.final_outputs;
    if (!spec.label_map.empty()) {
        Json map = Json::array();
        for (const auto& [label, color] : spec.label_map) {
            map.push_back(Json::array({label, color}));
        }
        doc["label_map"] = map;
    }
    metrics_out << doc.dump(2) << '\n';

    if (trace_out != nullptr) {
        write_trace(result->trace, spec.trace_format, *trace_out);
    }

    if (!m.converged) {
        return until_quiescent ? kNotConverged : kOk;
    }
    if (majority.unique && m.final_outputs[majority.winner] != spec.colors.size()) {
        return kViolation;
    }
    return kOk;
}

int cmd_verify(const VerifySpec& spec, std::ostream& out) {
    if (spec.n_max == 0 || spec.k_max == 0) {
        throw ConfigError("n-max and k-max must be at least 1");
    }
    const auto summary = spec.randomized
                             ? verify::verify_randomized(spec.trials, spec.n_max, spec.k_max, spec.seed)
                             : verify::verify_exhaustive(spec.n_max, spec.k_max);
    Json doc;
    doc["mode"] = spec.randomized ? "randomized" : "exhaustive";
    doc["n_max"] = spec.n_max;
    doc["k_max"] = spec.k_max;
    if (spec.randomized) {
        doc["trials"] = spec.trials;
        doc["seed"] = spec.seed;
    }
    doc["instances"] = summary.instances;
    doc["passed"] = summary.passed;
    doc["unique_majority"] = summary.unique_majority;
    doc["ties"] = summary.ties;
    doc["total_interactions"] = summary.total_interactions;
    doc["max_interactions"] = summary.max_interactions;
    doc["total_ket_exchanges"] = summary.total_exchanges;
    doc["max_ket_exchanges"] = summary.max_exchanges;
    Json bad = Json::array();
    for (const auto& c : summary.counterexamples) {
        bad.push_back(Json{{"inputs", c.inputs}, {"k", c.k}, {"failure", c.failure}, {"detail", c.detail}});
    }
    doc["counterexamples"] = bad;
    doc["ok"] = summary.ok();
    out << doc.dump(2) << '\n';
    return summary.ok() ? kOk : kViolation;
}

namespace {

struct CellStats {
    std::size_t n = 0;
    std::uint32_t k = 0;
    std::uint64_t trials = 0;
    std::uint64_t converged = 0;
    std::uint64_t sum_quiescence = 0;
    std::uint64_t max_quiescence = 0;
    std::uint64_t sum_interactions = 0;
    std::uint64_t max_interactions = 0;
    std::uint64_t sum_exchanges = 0;
    std::uint64_t max_exchanges = 0;
    std::string error;
};

CellStats run_cell(const SweepSpec& spec, std::size_t n, std::uint32_t k) {
    CellStats cell;
    cell.n = n;
    cell.k = k;
    cell.trials = spec.trials;
    RunOptions options;
    options.trace = TraceMode::none;
    for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
        std::seed_seq seq{spec.seed, std::uint64_t{n}, std::uint64_t{k}, trial};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<Color> pick(0, k - 1);
        std::vector<Color> colors(n);
        for (auto& c : colors) {
            c = pick(rng);
        }
        const SchedulerKind sched = spec.random_scheduler ? SchedulerKind{UniformRandom{rng()}}
                                                          : SchedulerKind{RoundRobin{}};
        const auto result = run(init_configuration(colors, k), sched, UntilQuiescent{spec.cap}, options);
        const auto& m = result.metrics;
        if (m.converged) {
            ++cell.converged;
            cell.sum_quiescence += *m.quiescence_step;
            cell.max_quiescence = std::max(cell.max_quiescence, *m.quiescence_step);
        }
        cell.sum_interactions += m.total_interactions;
        cell.max_interactions = std::max(cell.max_interactions, m.total_interactions);
        cell.sum_exchanges += m.ket_exchanges;
        cell.max_exchanges = std::max(cell.max_exchanges, m.ket_exchanges);
    }
    return cell;
}

}  // namespace

int cmd_sweep(const SweepSpec& spec, std::ostream& out) {
    if (spec.ns.empty() || spec.ks.empty() || spec.trials == 0) {
        throw ConfigError("a sweep needs at least one n, one k and one trial");
    }
    for (auto n : spec.ns) {
        if (n == 0) {
            throw ConfigError("sweep populations need n >= 1");
        }
    }
    for (auto k : spec.ks) {
        require_valid_k(k);
    }

    std::vector<std::pair<std::size_t, std::uint32_t>> grid;
    for (auto n : spec.ns) {
        for (auto k : spec.ks) {
            grid.emplace_back(n, k);
        }
    }
    std::vector<CellStats> cells(grid.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                cells[i] = run_cell(spec, grid[i].first, grid[i].second);
            } catch (const std::exception& e) {
                cells[i].n = grid[i].first;
                cells[i].k = grid[i].second;
                cells[i].error = e.what();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const unsigned jobs = std::max(1U, std::min<unsigned>(spec.jobs, grid.size()));
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
    }

    int status = kOk;
    if (spec.format == OutputFormat::csv) {
        out << "n,k,trials,converged,mean_quiescence_step,max_quiescence_step,mean_interactions,"
               "max_interactions,mean_ket_exchanges,max_ket_exchanges\n";
    }
    for (const auto& c : cells) {
        if (!c.error.empty()) {
            status = kViolation;
            continue;
        }
        if (c.converged != c.trials && status == kOk) {
            status = kNotConverged;
        }
        const double trials = static_cast<double>(c.trials);
        const double conv = static_cast<double>(std::max<std::uint64_t>(c.converged, 1));
        if (spec.format == OutputFormat::csv) {
            out << c.n << ',' << c.k << ',' << c.trials << ',' << c.converged << ','
                << fixed3(static_cast<double>(c.sum_quiescence) / conv) << ',' << c.max_quiescence << ','
                << fixed3(static_cast<double>(c.sum_interactions) / trials) << ',' << c.max_interactions
                << ',' << fixed3(static_cast<double>(c.sum_exchanges) / trials) << ',' << c.max_exchanges
                << '\n';
        } else {
            Json row;
            row["n"] = c.n;
            row["k"] = c.k;
            row["trials"] = c.trials;
            row["converged"] = c.converged;
            row["mean_quiescence_step"] = round3(static_cast<double>(c.sum_quiescence) / conv);
            row["max_quiescence_step"] = c.max_quiescence;
            row["mean_interactions"] = round3(static_cast<double>(c.sum_interactions) / trials);
            row["max_interactions"] = c.max_interactions;
            row["mean_ket_exchanges"] = round3(static_cast<double>(c.sum_exchanges) / trials);
            row["max_ket_exchanges"] = c.max_exchanges;
            out << row.dump() << '\n';
        }
    }
    return status;
}

}  // namespace plurality::app
