#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace plurality {

/// Unordered pair of distinct agent indices, stored with first < second.
struct AgentPair {
    std::size_t first = 0;
    std::size_t second = 1;

    auto operator<=>(const AgentPair&) const = default;
};

/// Canonical pair from two distinct indices in either order. Throws ConfigError if i == j.
[[nodiscard]] AgentPair canonical_pair(std::size_t i, std::size_t j);

/// n(n-1)/2
[[nodiscard]] constexpr std::size_t pair_count(std::size_t n) noexcept {
    return n < 2 ? 0 : n * (n - 1) / 2;
}

/// Position of a canonical pair in lexicographic order (0,1) < (0,2) < ... < (n-2,n-1).
[[nodiscard]] std::size_t pair_index(const AgentPair& pair, std::size_t n);

/// Cycles through all pairs in lexicographic order. Weakly fair.
struct RoundRobin {};

/// Independent uniform draws over all pairs, addressed by (seed, step). Fair with probability 1.
struct UniformRandom {
    std::uint64_t seed = 0;
};

/// Round-robin that skips `excluded` until `release_step`, then plain round-robin.
/// Violates weak fairness on every finite prefix shorter than the release step.
struct StarvationAdversary {
    AgentPair excluded{0, 1};
    std::uint64_t release_step = std::numeric_limits<std::uint64_t>::max();
};

using SchedulerKind = std::variant<RoundRobin, UniformRandom, StarvationAdversary>;

/// "roundrobin", "random" or "adversary".
[[nodiscard]] std::string scheduler_name(const SchedulerKind& kind);

/// Random-access schedule over n agents: next_pair(t) is the pair interacting at step t.
class Scheduler {
public:
    /// Throws ConfigError if n < 2, or for the adversary if n < 3 or the excluded pair is invalid.
    Scheduler(SchedulerKind kind, std::size_t n);

    [[nodiscard]] AgentPair next_pair(std::uint64_t step) const;

    [[nodiscard]] std::size_t agents() const noexcept { return n_; }
    /// Steps in one full round-robin cycle, n(n-1)/2.
    [[nodiscard]] std::size_t round_length() const noexcept { return pairs_.size(); }
    [[nodiscard]] const SchedulerKind& kind() const noexcept { return kind_; }

private:
    SchedulerKind kind_;
    std::size_t n_;
    std::vector<AgentPair> pairs_;
    std::size_t excluded_index_ = 0;
};

/// Occurrence count of every canonical pair in a schedule prefix, indexed by pair_index.
[[nodiscard]] std::vector<std::uint64_t> fairness_audit(std::span<const AgentPair> prefix,
                                                        std::size_t n);

}  // namespace plurality
