#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "plurality/protocol.hpp"
#include "plurality/scheduler.hpp"

namespace plurality {

struct StepEvent;

/// The population: an ordered list of agents sharing one k, plus the interaction counter.
class Configuration {
public:
    /// Throws ConfigError if `agents` is empty, DomainError if any state is invalid for k.
    Configuration(std::vector<AgentState> agents, std::uint32_t k);

    [[nodiscard]] std::uint32_t k() const noexcept { return k_; }
    [[nodiscard]] std::size_t size() const noexcept { return agents_.size(); }
    [[nodiscard]] std::uint64_t step_count() const noexcept { return step_; }
    [[nodiscard]] std::span<const AgentState> agents() const noexcept { return agents_; }
    [[nodiscard]] const AgentState& operator[](std::size_t i) const { return agents_.at(i); }

    /// #bras(i) == #kets(i) for every color i.
    [[nodiscard]] bool braket_balanced() const;
    /// All agent weights, sorted ascending.
    [[nodiscard]] std::vector<std::uint32_t> sorted_weights() const;
    [[nodiscard]] BraKetMultiset braket_multiset() const;
    /// Count of agents per out color, indexed by color.
    [[nodiscard]] std::vector<std::size_t> output_histogram() const;
    /// Count of agents per bra color; equals the input histogram in every reachable configuration.
    [[nodiscard]] std::vector<std::size_t> bra_histogram() const;

    bool operator==(const Configuration&) const = default;

private:
    friend StepEvent step(Configuration& config, AgentPair pair);

    std::vector<AgentState> agents_;
    std::uint32_t k_;
    std::uint64_t step_ = 0;
};

/// Every agent starts from init_agent(colors[i]). Throws ConfigError on an empty population and
/// DomainError on a color outside [0, k-1].
[[nodiscard]] Configuration init_configuration(std::span<const Color> colors, std::uint32_t k);

struct StepEvent {
    std::uint64_t step = 0;  ///< index of this interaction (0-based)
    AgentPair pair;
    AgentState pre_first;
    AgentState pre_second;
    AgentState post_first;
    AgentState post_second;
    bool exchanged = false;
    bool out_changed = false;

    [[nodiscard]] bool changed() const noexcept { return exchanged || out_changed; }
};

/// Applies one interaction to the two agents of `pair` and advances the step counter.
/// Throws ConfigError if an index is out of range or the indices coincide.
StepEvent step(Configuration& config, AgentPair pair);

/// True iff no pair of agents present could change anything: for every pair of distinct states
/// (and every state held by at least two agents) apply_interaction reports no swap and no
/// out change. Cost is quadratic in the number of distinct states, not in n.
[[nodiscard]] bool is_quiescent(const Configuration& config);

enum class AssertLevel {
    off,
    safety,  ///< bra/ket balance after every step
    full,    ///< safety + strict potential decrease at every ket exchange
};

enum class TraceMode {
    none,
    thinned,  ///< only steps that changed a state
    full,
};

struct UntilQuiescent {
    std::uint64_t cap = 0;  ///< safety cap on interactions; 0 selects default_cap(n)
};

struct FixedSteps {
    std::uint64_t steps = 0;
};

using StopPolicy = std::variant<UntilQuiescent, FixedSteps>;

/// 50 * n^2 round-robin cycles.
[[nodiscard]] std::uint64_t default_cap(std::size_t n) noexcept;

struct RunOptions {
    AssertLevel asserts = AssertLevel::safety;
    TraceMode trace = TraceMode::thinned;
    /// Quiescence is tested every this many steps; 0 means once per round-robin cycle.
    std::uint64_t check_interval = 0;
};

struct RunMetrics {
    std::uint64_t total_interactions = 0;
    std::uint64_t ket_exchanges = 0;
    std::uint64_t out_updates = 0;
    /// Interaction count at the last state change, present when the final configuration is quiescent.
    std::optional<std::uint64_t> quiescence_step;
    bool converged = false;
    /// Input has several colors of maximal multiplicity.
    bool tie = false;
    std::vector<std::size_t> final_outputs;  ///< histogram over out colors
};

struct RunResult {
    Configuration final;
    std::vector<StepEvent> trace;
    RunMetrics metrics;
};

/// Drives `config` with the given schedule until the stop policy ends the run.
///
/// Under UntilQuiescent the run ends at the first quiescence check that succeeds or at the cap;
/// hitting the cap is reported through metrics.converged = false. With assertions enabled any
/// violated invariant throws InvariantViolation describing the offending step.
[[nodiscard]] RunResult run(Configuration config, const SchedulerKind& scheduler, StopPolicy stop,
                            RunOptions options = {});

}  // namespace plurality
