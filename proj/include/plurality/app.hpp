#pragma once

// Command implementations behind the `plurality` tool. Each command writes its documents to the
// given streams and returns a process exit code, so the tool itself only parses flags.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plurality/engine.hpp"
#include "plurality/protocol.hpp"
#include "plurality/scheduler.hpp"

namespace plurality::app {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,         ///< malformed flags or experiment spec
    kNotConverged = 3,  ///< until-quiescent run hit its cap
    kViolation = 4,     ///< runtime invariant failed, wrong output, or a verify check failed
};

enum class OutputFormat { json_lines, csv };

[[nodiscard]] OutputFormat parse_format(std::string_view name);
[[nodiscard]] AssertLevel parse_assert_level(std::string_view name);

/// Parses a color list: integers separated by commas or whitespace, where a token "c:m" stands for
/// m copies of c. Lines starting with '#' are comments. Throws DomainError on malformed input.
[[nodiscard]] std::vector<std::int64_t> parse_color_labels(std::string_view text);

/// Reads `source` as a file when one exists at that path, otherwise parses it as an inline list.
[[nodiscard]] std::vector<std::int64_t> load_color_labels(const std::string& source);

struct DenseColors {
    std::vector<Color> colors;
    std::uint32_t k = 1;
    /// label -> dense color, filled only when densified.
    std::vector<std::pair<std::int64_t, Color>> label_map;
};

/// Validates labels against k. With `densify` the distinct labels are first mapped in increasing
/// order onto 0..d-1, which keeps their circular order. k defaults to d (densified) or
/// max label + 1.
[[nodiscard]] DenseColors prepare_colors(const std::vector<std::int64_t>& labels,
                                         std::optional<std::uint32_t> k, bool densify);

/// Random input of n colors over [0, k-1].
///   "uniform"             every color equally likely
///   "weights:w0,w1,..."   color c drawn with relative weight w_c (k entries)
///   "planted:m"           uniform draw, then agents are moved to a random winner color until it
///                         leads every other color by at least m
[[nodiscard]] std::vector<Color> random_colors(std::string_view spec, std::size_t n, std::uint32_t k,
                                               std::uint64_t seed);

struct ExperimentSpec {
    std::vector<Color> colors;
    std::uint32_t k = 1;
    std::vector<std::pair<std::int64_t, Color>> label_map;
    SchedulerKind scheduler = RoundRobin{};
    std::uint64_t seed = 0;
    StopPolicy stop = UntilQuiescent{};
    RunOptions options;
    OutputFormat trace_format = OutputFormat::json_lines;
};

/// Runs one simulation, writes the metrics document to `metrics_out` and, when `trace_out` is
/// set, the recorded events. Exit code: kOk when converged and (tie or all outs equal the winner),
/// kNotConverged when an until-quiescent run hit its cap, kViolation on an invariant failure or a
/// wrong converged output.
int cmd_run(const ExperimentSpec& spec, std::ostream& metrics_out, std::ostream* trace_out = nullptr);

void write_trace(std::span<const StepEvent> events, OutputFormat format, std::ostream& out);

struct VerifySpec {
    std::size_t n_max = 5;
    std::uint32_t k_max = 4;
    bool randomized = false;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
};

/// Runs the verification battery and writes a JSON report; kViolation if any instance fails.
int cmd_verify(const VerifySpec& spec, std::ostream& out);

struct SweepSpec {
    std::vector<std::size_t> ns;
    std::vector<std::uint32_t> ks;
    std::uint64_t trials = 10;
    std::uint64_t seed = 0;
    bool random_scheduler = false;
    std::uint64_t cap = 0;
    OutputFormat format = OutputFormat::csv;
    unsigned jobs = 1;
};

/// One row per (n, k) cell with aggregates over `trials` uniform random inputs. Cells are
/// independent and may run on several threads; the output order and bytes do not depend on `jobs`.
int cmd_sweep(const SweepSpec& spec, std::ostream& out);

}  // namespace plurality::app
