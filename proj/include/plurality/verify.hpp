#pragma once

// Test batteries that run the engine against the oracle.

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "plurality/engine.hpp"
#include "plurality/protocol.hpp"

namespace plurality::verify {

/// Result of one round-robin run checked against the oracle.
struct InstanceOutcome {
    std::vector<Color> inputs;
    std::uint32_t k = 1;
    bool passed = true;
    /// Empty when passed; otherwise names the failed check: balance, potential, multiset,
    /// output or cap.
    std::string failure;
    std::string detail;
    bool unique_majority = false;
    Color winner = 0;
    RunMetrics metrics;
};

/// Runs `inputs` under round-robin to quiescence with full runtime assertions and checks:
/// bra/ket balance after every step, potential decrease at every exchange, final bra-ket
/// multiset against the predicted stable multiset, and all outs equal to the winner when the
/// majority is unique. `cap` of 0 selects default_cap(n).
[[nodiscard]] InstanceOutcome check_instance(std::span<const Color> inputs, std::uint32_t k,
                                             std::uint64_t cap = 0);

struct Summary {
    std::uint64_t instances = 0;
    std::uint64_t passed = 0;
    std::uint64_t unique_majority = 0;
    std::uint64_t ties = 0;
    std::uint64_t total_interactions = 0;
    std::uint64_t max_interactions = 0;
    std::uint64_t total_exchanges = 0;
    std::uint64_t max_exchanges = 0;
    std::vector<InstanceOutcome> counterexamples;

    [[nodiscard]] bool ok() const noexcept { return passed == instances; }
    void add(InstanceOutcome outcome);
};

/// Calls `fn` with every color sequence of length n over [0, k-1], in lexicographic order.
void for_each_assignment(std::size_t n, std::uint32_t k,
                         const std::function<void(std::span<const Color>)>& fn);

/// Calls `fn` with every non-decreasing color sequence (i.e. every multiset) of size n over [0, k-1].
void for_each_multiset(std::size_t n, std::uint32_t k,
                       const std::function<void(std::span<const Color>)>& fn);

/// check_instance over every assignment with 1 <= n <= n_max agents and 1 <= k <= k_max colors.
[[nodiscard]] Summary verify_exhaustive(std::size_t n_max, std::uint32_t k_max);

/// `trials` random instances with n in [1, n_max] and k in [1, k_max]. Every third trial is
/// steered towards a tie so both majority regimes are covered.
[[nodiscard]] Summary verify_randomized(std::uint64_t trials, std::size_t n_max, std::uint32_t k_max,
                                        std::uint64_t seed);

/// Exhaustive exploration of all configurations reachable from one input under any schedule.
struct Reachability {
    std::uint64_t configurations = 0;
    std::uint64_t transitions = 0;
    std::set<AgentState> states;          ///< every agent state seen in any reachable configuration
    std::uint64_t invalid_states = 0;     ///< states with a field outside [0, k-1]
    std::uint64_t balance_violations = 0;
    std::uint64_t stable_configurations = 0;  ///< no pair would exchange kets
    std::uint64_t stable_mismatches = 0;      ///< stable, but bra-kets differ from the prediction
    std::uint64_t quiescent_configurations = 0;
    std::uint64_t wrong_outputs = 0;          ///< quiescent with a unique winner, some out differs
    bool truncated = false;                   ///< stopped at max_configurations

    [[nodiscard]] bool ok() const noexcept {
        return !truncated && invalid_states == 0 && balance_violations == 0 &&
               stable_mismatches == 0 && wrong_outputs == 0;
    }
};

[[nodiscard]] Reachability explore_reachable(std::span<const Color> inputs, std::uint32_t k,
                                             std::uint64_t max_configurations = 5'000'000);

}  // namespace plurality::verify
