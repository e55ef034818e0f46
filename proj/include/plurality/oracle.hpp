#pragma once

// Ground truth computed from the input colors alone, independent of any simulation.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "plurality/protocol.hpp"

namespace plurality::oracle {

/// Layers G_1 ⊇ G_2 ⊇ ... ⊇ G_q of the input multiset; each layer is a sorted, duplicate-free
/// color list and the multiset union of the layers is the input.
struct GreedyPartition {
    std::vector<std::vector<Color>> sets;

    [[nodiscard]] std::size_t depth() const noexcept { return sets.size(); }
};

/// Computes the partition with the closed form G_p = {c : multiplicity(c) >= p}.
/// Throws DomainError on empty input.
[[nodiscard]] GreedyPartition greedy_partition(std::span<const Color> colors);

/// Cycle <g0|g1>, <g1|g2>, ..., <gm|g0> over the sorted colors of `set`; a singleton {i} gives <i|i>.
/// Throws DomainError if `set` is empty or contains a duplicate.
[[nodiscard]] BraKetMultiset circle_braket_set(std::span<const Color> set);

/// Union of circle_braket_set(G_p) over all layers: the bra-ket multiset any ket-stable
/// configuration reached from `colors` must have.
[[nodiscard]] BraKetMultiset predicted_stable_multiset(std::span<const Color> colors);

struct Majority {
    Color winner = 0;    ///< smallest color of maximal multiplicity
    bool unique = false; ///< no other color reaches that multiplicity
};

/// Plain counting. Throws DomainError on empty input.
[[nodiscard]] Majority brute_majority(std::span<const Color> colors);

/// Majority read off a partition: mu when G_q = {mu} and no layer is a singleton {j} with j != mu;
/// nullopt otherwise.
[[nodiscard]] std::optional<Color> partition_majority(const GreedyPartition& partition);

/// Lexicographic a < b on sorted-ascending weight vectors (the ordinal potential order).
/// Throws DomainError on length mismatch.
[[nodiscard]] bool potential_less(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// Modulo range [x, y]_p (closed) or (x, y)_p (open).
///
/// With d = (y - x) mod p the closed range is {(x + t) mod p : 0 <= t <= d} and the open range is
/// {(x + t) mod p : 1 <= t <= d - 1}. For d = 0 the open range wraps the whole circle and
/// yields the p - 1 residues other than x mod p. Throws DomainError if p == 0.
[[nodiscard]] std::set<std::uint64_t> mod_range(std::uint64_t x, std::uint64_t y, std::uint64_t p,
                                                bool closed);

}  // namespace plurality::oracle
