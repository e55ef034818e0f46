#include "plurality/protocol.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "plurality/errors.hpp"

namespace plurality {

void require_valid_k(std::uint32_t k) {
    if (k == 0) {
        throw DomainError("number of colors k must be at least 1");
    }
}

void require_valid_color(Color color, std::uint32_t k) {
    require_valid_k(k);
    if (color >= k) {
        throw DomainError("color " + std::to_string(color) + " is outside [0, " +
                          std::to_string(k - 1) + "]");
    }
}

void require_valid_state(const AgentState& state, std::uint32_t k) {
    require_valid_color(state.bra, k);
    require_valid_color(state.ket, k);
    require_valid_color(state.out, k);
}

std::uint32_t weight(Color bra, Color ket, std::uint32_t k) {
    require_valid_color(bra, k);
    require_valid_color(ket, k);
    if (bra == ket) {
        return k;
    }
    return (ket + k - bra) % k;
}

AgentState init_agent(Color input, std::uint32_t k) {
    require_valid_color(input, k);
    return {input, input, input};
}

InteractionResult apply_interaction(const AgentState& a, const AgentState& b, std::uint32_t k) {
    require_valid_state(a, k);
    require_valid_state(b, k);

    InteractionResult r{a, b, false, false};

    const auto before = std::min(weight(a, k), weight(b, k));
    const auto after = std::min(weight(a.bra, b.ket, k), weight(b.bra, a.ket, k));
    if (after < before) {
        std::swap(r.first.ket, r.second.ket);
        r.exchanged = true;
    }

    // Two distinct self-loops always swap in step 1, so at most one loop color survives here.
    const AgentState* loop = r.first.self_loop() ? &r.first : r.second.self_loop() ? &r.second : nullptr;
    if (loop != nullptr) {
        const Color c = loop->bra;
        r.out_changed = r.first.out != c || r.second.out != c;
        r.first.out = c;
        r.second.out = c;
    }
    return r;
}

}  // namespace plurality
