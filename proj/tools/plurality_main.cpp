// plurality: run, verify and sweep the k^3-state relative majority protocol.

#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plurality/app.hpp"
#include "plurality/errors.hpp"

namespace {

using namespace plurality;

struct RunFlags {
    std::optional<std::uint32_t> k;
    std::optional<std::size_t> n;
    std::string colors;
    std::string random_colors;
    std::optional<std::uint64_t> color_seed;
    bool densify = false;
    std::string scheduler = "roundrobin";
    std::uint64_t seed = 0;
    std::vector<std::size_t> exclude{0, 1};
    std::uint64_t release = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t cap = 0;
    std::optional<std::uint64_t> steps;
    std::uint64_t check_every = 0;
    std::string assert_level = "safety";
    std::string trace;
    bool full_trace = false;
    std::string format = "json-lines";
    std::string out;
};

// Output goes to a file when a path is given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw ConfigError("cannot open " + path + " for writing");
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

SchedulerKind make_scheduler(const RunFlags& f) {
    if (f.scheduler == "roundrobin") {
        return RoundRobin{};
    }
    if (f.scheduler == "random") {
        return UniformRandom{f.seed};
    }
    if (f.scheduler == "adversary") {
        if (f.exclude.size() != 2) {
            throw ConfigError("--exclude takes exactly two agent indices");
        }
        return StarvationAdversary{canonical_pair(f.exclude[0], f.exclude[1]), f.release};
    }
    throw ConfigError("unknown scheduler '" + f.scheduler + "'");
}

int do_run(const RunFlags& f) {
    app::ExperimentSpec spec;
    if (!f.colors.empty() == !f.random_colors.empty()) {
        throw ConfigError("give exactly one of --colors or --random-colors");
    }
    if (!f.colors.empty()) {
        auto dense = app::prepare_colors(app::load_color_labels(f.colors), f.k, f.densify);
        if (f.n && *f.n != dense.colors.size()) {
            throw ConfigError("--n does not match the number of colors given");
        }
        spec.colors = std::move(dense.colors);
        spec.k = dense.k;
        spec.label_map = std::move(dense.label_map);
    } else {
        if (!f.k || !f.n) {
            throw ConfigError("--random-colors needs --k and --n");
        }
        spec.k = *f.k;
        spec.colors = app::random_colors(f.random_colors, *f.n, *f.k, f.color_seed.value_or(f.seed));
    }
    spec.scheduler = make_scheduler(f);
    spec.seed = f.seed;
    if (f.steps) {
        spec.stop = FixedSteps{*f.steps};
    } else {
        spec.stop = UntilQuiescent{f.cap};
    }
    spec.options.asserts = app::parse_assert_level(f.assert_level);
    spec.options.check_interval = f.check_every;
    spec.trace_format = app::parse_format(f.format);
    if (f.trace.empty()) {
        spec.options.trace = TraceMode::none;
    } else {
        spec.options.trace = f.full_trace ? TraceMode::full : TraceMode::thinned;
    }

    Sink metrics(f.out);
    if (f.trace.empty()) {
        return app::cmd_run(spec, metrics.stream());
    }
    Sink trace(f.trace);
    return app::cmd_run(spec, metrics.stream(), &trace.stream());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Simulate and verify the k^3-state relative majority population protocol"};
    cli.require_subcommand(1);

    RunFlags run;
    auto* run_cmd = cli.add_subcommand("run", "Run one simulation and print its metrics");
    run_cmd->add_option("--k", run.k, "Number of colors");
    run_cmd->add_option("--n", run.n, "Number of agents");
    run_cmd->add_option("--colors", run.colors, "Color file or inline list, e.g. 0,1,1 or 0:3,2:5");
    run_cmd->add_option("--random-colors", run.random_colors,
                        "uniform | weights:w0,w1,... | planted:<margin>");
    run_cmd->add_option("--color-seed", run.color_seed, "Seed for random colors (default: --seed)");
    run_cmd->add_flag("--densify", run.densify, "Map sparse color labels onto 0..d-1");
    run_cmd->add_option("--scheduler", run.scheduler, "roundrobin | random | adversary")
        ->check(CLI::IsMember({"roundrobin", "random", "adversary"}));
    run_cmd->add_option("--seed", run.seed, "Scheduler seed");
    run_cmd->add_option("--exclude", run.exclude, "Pair starved by the adversary")->expected(2);
    run_cmd->add_option("--release", run.release, "Step at which the adversary turns fair");
    run_cmd->add_option("--cap", run.cap, "Interaction cap for until-quiescent runs (0: 50 n^2 cycles)");
    run_cmd->add_option("--steps", run.steps, "Run exactly this many interactions instead");
    run_cmd->add_option("--check-every", run.check_every, "Quiescence check interval (0: one cycle)");
    run_cmd->add_option("--assert", run.assert_level, "off | safety | full")
        ->check(CLI::IsMember({"off", "safety", "full"}));
    run_cmd->add_option("--trace", run.trace, "Write the event trace to this path");
    run_cmd->add_flag("--full-trace", run.full_trace, "Record every step, not only changing ones");
    run_cmd->add_option("--format", run.format, "Trace format: json-lines | csv")
        ->check(CLI::IsMember({"json-lines", "csv"}));
    run_cmd->add_option("--out", run.out, "Metrics output path (default stdout)");

    app::VerifySpec verify;
    std::string verify_mode = "exhaustive";
    std::string verify_out;
    auto* verify_cmd = cli.add_subcommand("verify", "Check runs against the oracle");
    verify_cmd->add_option("--n-max", verify.n_max, "Largest population")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--k-max", verify.k_max, "Largest number of colors")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--mode", verify_mode, "exhaustive | randomized")
        ->check(CLI::IsMember({"exhaustive", "randomized"}));
    verify_cmd->add_option("--trials", verify.trials, "Randomized trials");
    verify_cmd->add_option("--seed", verify.seed, "Randomized seed");
    verify_cmd->add_option("--out", verify_out, "Report path (default stdout)");

    app::SweepSpec sweep;
    std::string sweep_scheduler = "roundrobin";
    std::string sweep_format = "csv";
    std::string sweep_out;
    auto* sweep_cmd = cli.add_subcommand("sweep", "Aggregate run metrics over an (n, k) grid");
    sweep_cmd->add_option("--n", sweep.ns, "Population sizes")->required()->delimiter(',');
    sweep_cmd->add_option("--k", sweep.ks, "Color counts")->required()->delimiter(',');
    sweep_cmd->add_option("--trials", sweep.trials, "Trials per cell");
    sweep_cmd->add_option("--seed", sweep.seed, "Base seed");
    sweep_cmd->add_option("--scheduler", sweep_scheduler, "roundrobin | random")
        ->check(CLI::IsMember({"roundrobin", "random"}));
    sweep_cmd->add_option("--cap", sweep.cap, "Interaction cap per run (0: 50 n^2 cycles)");
    sweep_cmd->add_option("--format", sweep_format, "csv | json-lines")
        ->check(CLI::IsMember({"json-lines", "csv"}));
    sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads");
    sweep_cmd->add_option("--out", sweep_out, "Output path (default stdout)");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return app::kUsage;
    }

    try {
        if (*run_cmd) {
            return do_run(run);
        }
        if (*verify_cmd) {
            verify.randomized = verify_mode == "randomized";
            Sink out(verify_out);
            return app::cmd_verify(verify, out.stream());
        }
        sweep.random_scheduler = sweep_scheduler == "random";
        sweep.format = app::parse_format(sweep_format);
        Sink out(sweep_out);
        return app::cmd_sweep(sweep, out.stream());
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return app::kUsage;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return app::kViolation;
    }
}
