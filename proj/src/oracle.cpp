#include "plurality/oracle.hpp"

#include <algorithm>
#include <map>

#include "plurality/errors.hpp"

namespace plurality::oracle {
namespace {

std::map<Color, std::size_t> histogram(std::span<const Color> colors) {
    if (colors.empty()) {
        throw DomainError("input color multiset is empty");
    }
    std::map<Color, std::size_t> counts;
    for (Color c : colors) {
        ++counts[c];
    }
    return counts;
}

}  // namespace

GreedyPartition greedy_partition(std::span<const Color> colors) {
    const auto counts = histogram(colors);
    std::size_t depth = 0;
    for (const auto& [color, count] : counts) {
        depth = std::max(depth, count);
    }
    GreedyPartition partition;
    partition.sets.resize(depth);
    for (std::size_t p = 0; p < depth; ++p) {
        for (const auto& [color, count] : counts) {
            if (count > p) {
                partition.sets[p].push_back(color);
            }
        }
    }
    return partition;
}

BraKetMultiset circle_braket_set(std::span<const Color> set) {
    if (set.empty()) {
        throw DomainError("circle bra-ket set of an empty color set");
    }
    std::vector<Color> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw DomainError("circle bra-ket set needs distinct colors");
    }
    BraKetMultiset result;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        ++result[{sorted[i], sorted[(i + 1) % sorted.size()]}];
    }
    return result;
}

BraKetMultiset predicted_stable_multiset(std::span<const Color> colors) {
    BraKetMultiset result;
    for (const auto& layer : greedy_partition(colors).sets) {
        for (const auto& [bk, count] : circle_braket_set(layer)) {
            result[bk] += count;
        }
    }
    return result;
}

Majority brute_majority(std::span<const Color> colors) {
    const auto counts = histogram(colors);
    Majority m;
    std::size_t best = 0;
    for (const auto& [color, count] : counts) {
        if (count > best) {
            best = count;
            m.winner = color;
            m.unique = true;
        } else if (count == best) {
            m.unique = false;
        }
    }
    return m;
}

std::optional<Color> partition_majority(const GreedyPartition& partition) {
    if (partition.sets.empty() || partition.sets.back().size() != 1) {
        return std::nullopt;
    }
    const Color mu = partition.sets.back().front();
    for (const auto& layer : partition.sets) {
        if (layer.size() == 1 && layer.front() != mu) {
            return std::nullopt;
        }
    }
    return mu;
}

bool potential_less(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    if (a.size() != b.size()) {
        throw DomainError("potential comparison needs weight vectors of equal length");
    }
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::set<std::uint64_t> mod_range(std::uint64_t x, std::uint64_t y, std::uint64_t p, bool closed) {
    if (p == 0) {
        throw DomainError("modulo range needs p >= 1");
    }
    const std::uint64_t d = ((y % p) + p - (x % p)) % p;
    const std::uint64_t first = closed ? 0 : 1;
    std::uint64_t last = 0;
    if (closed) {
        last = d;
    } else if (d == 0) {
        last = p - 1;
    } else {
        last = d - 1;
    }
    std::set<std::uint64_t> result;
    for (std::uint64_t t = first; t <= last; ++t) {
        result.insert((x % p + t) % p);
    }
    return result;
}

}  // namespace plurality::oracle
