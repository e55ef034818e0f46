#include "plurality/scheduler.hpp"

#include <utility>

#include "plurality/errors.hpp"

namespace plurality {
namespace {

// SplitMix64 finalizer; turns (seed, step) into an independent 64-bit draw.
std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Bias is at most bound / 2^64.
std::size_t scale(std::uint64_t draw, std::size_t bound) noexcept {
    return static_cast<std::size_t>(draw % bound);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

AgentPair canonical_pair(std::size_t i, std::size_t j) {
    if (i == j) {
        throw ConfigError("an agent cannot interact with itself (index " + std::to_string(i) + ")");
    }
    return i < j ? AgentPair{i, j} : AgentPair{j, i};
}

std::size_t pair_index(const AgentPair& pair, std::size_t n) {
    if (pair.first >= pair.second || pair.second >= n) {
        throw ConfigError("pair (" + std::to_string(pair.first) + "," + std::to_string(pair.second) +
                          ") is not a canonical pair for n=" + std::to_string(n));
    }
    const std::size_t i = pair.first;
    return i * n - i * (i + 1) / 2 + (pair.second - i - 1);
}

std::string scheduler_name(const SchedulerKind& kind) {
    return std::visit(overloaded{[](const RoundRobin&) { return std::string("roundrobin"); },
                                 [](const UniformRandom&) { return std::string("random"); },
                                 [](const StarvationAdversary&) { return std::string("adversary"); }},
                      kind);
}

Scheduler::Scheduler(SchedulerKind kind, std::size_t n) : kind_(std::move(kind)), n_(n) {
    if (n < 2) {
        throw ConfigError("a schedule needs at least 2 agents, got n=" + std::to_string(n));
    }
    pairs_.reserve(pair_count(n));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairs_.push_back({i, j});
        }
    }
    if (const auto* adv = std::get_if<StarvationAdversary>(&kind_)) {
        if (n < 3) {
            throw ConfigError("the starvation adversary needs n >= 3 so another pair can run");
        }
        excluded_index_ = pair_index(adv->excluded, n);
    }
}

AgentPair Scheduler::next_pair(std::uint64_t step) const {
    const std::size_t p = pairs_.size();
    return std::visit(
        overloaded{
            [&](const RoundRobin&) { return pairs_[step % p]; },
            [&](const UniformRandom& r) { return pairs_[scale(mix64(r.seed ^ mix64(step)), p)]; },
            [&](const StarvationAdversary& adv) {
                if (step >= adv.release_step) {
                    return pairs_[(step - adv.release_step) % p];
                }
                std::size_t idx = step % (p - 1);
                if (idx >= excluded_index_) {
                    ++idx;
                }
                return pairs_[idx];
            }},
        kind_);
}

std::vector<std::uint64_t> fairness_audit(std::span<const AgentPair> prefix, std::size_t n) {
    std::vector<std::uint64_t> counts(pair_count(n), 0);
    for (const auto& pair : prefix) {
        ++counts[pair_index(pair, n)];
    }
    return counts;
}

}  // namespace plurality
