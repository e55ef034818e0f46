#pragma once

#include <compare>
#include <cstdint>
#include <map>

namespace plurality {

/// Colors are dense integers in [0, k-1]. Sparse labels must be remapped before they get here.
using Color = std::uint32_t;

/// A bra-ket <bra|ket>: the first two components of an agent state.
struct BraKet {
    Color bra = 0;
    Color ket = 0;

    auto operator<=>(const BraKet&) const = default;
};

/// Multiset of bra-kets, keyed by (bra, ket).
using BraKetMultiset = std::map<BraKet, std::size_t>;

/// One agent's state: the triple (bra, ket, out). There are exactly k^3 of them.
struct AgentState {
    Color bra = 0;
    Color ket = 0;
    Color out = 0;

    [[nodiscard]] constexpr bool self_loop() const noexcept { return bra == ket; }
    [[nodiscard]] constexpr BraKet braket() const noexcept { return {bra, ket}; }

    auto operator<=>(const AgentState&) const = default;
};

/// Throws DomainError unless k >= 1.
void require_valid_k(std::uint32_t k);

/// Throws DomainError unless 0 <= color < k.
void require_valid_color(Color color, std::uint32_t k);

/// Throws DomainError unless all three fields are valid colors for k.
void require_valid_state(const AgentState& state, std::uint32_t k);

/// Weight of <bra|ket>: k for a self-loop, (ket - bra) mod k otherwise. Always in [1, k].
[[nodiscard]] std::uint32_t weight(Color bra, Color ket, std::uint32_t k);

[[nodiscard]] inline std::uint32_t weight(const AgentState& state, std::uint32_t k) {
    return weight(state.bra, state.ket, k);
}

/// Input function: <c|c> with out = c.
[[nodiscard]] AgentState init_agent(Color input, std::uint32_t k);

struct InteractionResult {
    AgentState first;
    AgentState second;
    bool exchanged = false;    ///< kets were swapped
    bool out_changed = false;  ///< at least one out field took a new value
};

/// The pairwise transition.
///
/// First the two agents swap kets if that strictly lowers the minimum of their two weights.
/// Then, on the post-swap states, if either agent is a self-loop <i|i> both outs become i.
/// The result is symmetric: swapping the arguments swaps the returned states and keeps the flags.
[[nodiscard]] InteractionResult apply_interaction(const AgentState& a, const AgentState& b,
                                                  std::uint32_t k);

/// Number of distinct agent states for k colors (k^3).
[[nodiscard]] constexpr std::uint64_t state_space_size(std::uint32_t k) noexcept {
    return std::uint64_t{k} * k * k;
}

/// Dense index of a state in [0, k^3).
[[nodiscard]] constexpr std::uint64_t state_index(const AgentState& s, std::uint32_t k) noexcept {
    return (std::uint64_t{s.bra} * k + s.ket) * k + s.out;
}

}  // namespace plurality
