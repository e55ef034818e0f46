#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "plurality/errors.hpp"
#include "plurality/protocol.hpp"

using namespace plurality;

namespace {

// Reference transition written straight from the rule text, used to derive expected values.
std::uint32_t ref_weight(int bra, int ket, int k) {
    if (bra == ket) return static_cast<std::uint32_t>(k);
    return static_cast<std::uint32_t>(((ket - bra) % k + k) % k);
}

std::vector<AgentState> all_states(std::uint32_t k) {
    std::vector<AgentState> out;
    for (Color i = 0; i < k; ++i)
        for (Color j = 0; j < k; ++j)
            for (Color o = 0; o < k; ++o) out.push_back({i, j, o});
    return out;
}

}  // namespace

TEST_CASE("weight examples") {
    CHECK(weight(2, 2, 5) == 5);
    CHECK(weight(1, 3, 5) == 2);
    CHECK(weight(3, 1, 5) == 3);
    CHECK(weight(0, 0, 1) == 1);
}

TEST_CASE("weight rejects colors outside [0, k-1]") {
    CHECK_THROWS_AS((void)weight(5, 0, 5), DomainError);
    CHECK_THROWS_AS((void)weight(0, 7, 5), DomainError);
    CHECK_THROWS_AS((void)weight(0, 0, 0), DomainError);
}

TEST_CASE("weight range: 1 <= w <= k, w == k iff self-loop") {
    for (std::uint32_t k = 1; k <= 9; ++k) {
        for (Color i = 0; i < k; ++i) {
            for (Color j = 0; j < k; ++j) {
                const auto w = weight(i, j, k);
                CHECK(w >= 1);
                CHECK(w <= k);
                CHECK((w == k) == (i == j || k == 1));
                CHECK(w == ref_weight(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)));
            }
        }
    }
}

TEST_CASE("init_agent") {
    CHECK(init_agent(0, 1) == AgentState{0, 0, 0});
    CHECK(init_agent(3, 4) == AgentState{3, 3, 3});
    CHECK_THROWS_AS((void)init_agent(4, 4), DomainError);
}

TEST_CASE("apply_interaction: profitable swap") {
    // <0|2> (w=2), <1|3> (w=2) -> <0|3> (w=3), <1|2> (w=1): min 2 -> 1.
    CHECK(ref_weight(0, 2, 4) == 2);
    CHECK(ref_weight(1, 3, 4) == 2);
    CHECK(ref_weight(0, 3, 4) == 3);
    CHECK(ref_weight(1, 2, 4) == 1);
    const auto r = apply_interaction({0, 2, 0}, {1, 3, 1}, 4);
    CHECK(r.exchanged);
    CHECK_FALSE(r.out_changed);
    CHECK(r.first == AgentState{0, 3, 0});
    CHECK(r.second == AgentState{1, 2, 1});
}

TEST_CASE("apply_interaction: unprofitable swap is skipped") {
    // <0|1> (w=1), <2|3> (w=1) -> <0|3> (w=3), <2|1> (w=3): min 1 -> 3.
    CHECK(ref_weight(0, 3, 4) == 3);
    CHECK(ref_weight(2, 1, 4) == 3);
    const auto r = apply_interaction({0, 1, 0}, {2, 3, 2}, 4);
    CHECK_FALSE(r.exchanged);
    CHECK_FALSE(r.out_changed);
    CHECK(r.first == AgentState{0, 1, 0});
    CHECK(r.second == AgentState{2, 3, 2});
}

TEST_CASE("apply_interaction: self-loop broadcasts its color") {
    // min(4, 1) = 1 before; <2|1> (w=3), <0|2> (w=2) after; no swap. a is <2|2>.
    CHECK(ref_weight(2, 1, 4) == 3);
    CHECK(ref_weight(0, 2, 4) == 2);
    const auto r = apply_interaction({2, 2, 2}, {0, 1, 0}, 4);
    CHECK_FALSE(r.exchanged);
    CHECK(r.out_changed);
    CHECK(r.first == AgentState{2, 2, 2});
    CHECK(r.second == AgentState{0, 1, 2});
}

TEST_CASE("apply_interaction: output rule reads the post-swap states") {
    // Two self-loops (w=4 each) become <1|3>, <3|1> (w=2 each): swap, then no self-loop remains.
    const auto r = apply_interaction({1, 1, 1}, {3, 3, 3}, 4);
    CHECK(r.exchanged);
    CHECK_FALSE(r.out_changed);
    CHECK(r.first == AgentState{1, 3, 1});
    CHECK(r.second == AgentState{3, 1, 3});
}

TEST_CASE("apply_interaction: a swap can create the self-loop that sets outputs") {
    // k=3: <0|2> (w=2), <2|1> (w=2) -> <0|1> (w=1), <2|2> (w=3). The new <2|2> writes 2 to both outs.
    CHECK(ref_weight(2, 1, 3) == 2);
    CHECK(ref_weight(0, 1, 3) == 1);
    const auto r = apply_interaction({0, 2, 0}, {2, 1, 1}, 3);
    CHECK(r.exchanged);
    CHECK(r.out_changed);
    CHECK(r.first == AgentState{0, 1, 2});
    CHECK(r.second == AgentState{2, 2, 2});
}

TEST_CASE("apply_interaction validates both states") {
    CHECK_THROWS_AS((void)apply_interaction({0, 0, 0}, {0, 4, 0}, 4), DomainError);
    CHECK_THROWS_AS((void)apply_interaction({0, 0, 5}, {0, 0, 0}, 4), DomainError);
}

TEST_CASE("transition properties, exhaustive over all state pairs for k <= 4") {
    for (std::uint32_t k = 1; k <= 4; ++k) {
        const auto states = all_states(k);
        for (const auto& a : states) {
            for (const auto& b : states) {
                const auto r = apply_interaction(a, b, k);
                const auto s = apply_interaction(b, a, k);

                // symmetry
                CHECK(r.first == s.second);
                CHECK(r.second == s.first);
                CHECK(r.exchanged == s.exchanged);
                CHECK(r.out_changed == s.out_changed);

                // strictness of the swap decision
                const auto before = std::min(ref_weight(a.bra, a.ket, k), ref_weight(b.bra, b.ket, k));
                const auto swapped = std::min(ref_weight(a.bra, b.ket, k), ref_weight(b.bra, a.ket, k));
                CHECK(r.exchanged == (swapped < before));

                // bras fixed, kets conserved
                CHECK(r.first.bra == a.bra);
                CHECK(r.second.bra == b.bra);
                CHECK(std::multiset<Color>{r.first.ket, r.second.ket} == std::multiset<Color>{a.ket, b.ket});

                // flags describe exactly what moved
                if (!r.exchanged) {
                    CHECK(r.first.ket == a.ket);
                }
                CHECK(r.out_changed == (r.first.out != a.out || r.second.out != b.out));

                // idempotence at quiescence
                if (!r.exchanged && !r.out_changed) {
                    const auto again = apply_interaction(r.first, r.second, k);
                    CHECK(again.first == r.first);
                    CHECK(again.second == r.second);
                    CHECK_FALSE(again.exchanged);
                    CHECK_FALSE(again.out_changed);
                }
            }
        }
    }
}

TEST_CASE("transition properties on random states for larger k") {
    std::mt19937_64 rng(7);
    for (std::uint32_t k = 5; k <= 12; ++k) {
        std::uniform_int_distribution<Color> c(0, k - 1);
        for (int trial = 0; trial < 2000; ++trial) {
            const AgentState a{c(rng), c(rng), c(rng)};
            const AgentState b{c(rng), c(rng), c(rng)};
            const auto r = apply_interaction(a, b, k);
            const auto s = apply_interaction(b, a, k);
            REQUIRE(r.first == s.second);
            REQUIRE(r.second == s.first);
            const auto before = std::min(weight(a, k), weight(b, k));
            REQUIRE(r.exchanged == (std::min(weight(r.first, k), weight(r.second, k)) < before));
        }
    }
}

TEST_CASE("closure of the initial states under interaction stays within k^3 states") {
    for (std::uint32_t k = 1; k <= 6; ++k) {
        std::set<AgentState> closure;
        for (Color c = 0; c < k; ++c) closure.insert(init_agent(c, k));
        bool grew = true;
        while (grew) {
            grew = false;
            const std::vector<AgentState> current(closure.begin(), closure.end());
            for (const auto& a : current) {
                for (const auto& b : current) {
                    const auto r = apply_interaction(a, b, k);
                    grew |= closure.insert(r.first).second;
                    grew |= closure.insert(r.second).second;
                }
            }
        }
        CHECK(closure.size() <= state_space_size(k));
        for (const auto& s : closure) {
            CHECK(state_index(s, k) < state_space_size(k));
            CHECK(s.bra < k);
            CHECK(s.ket < k);
            CHECK(s.out < k);
        }
    }
}
