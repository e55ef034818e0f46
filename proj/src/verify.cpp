#include "plurality/verify.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <utility>

#include "plurality/errors.hpp"
#include "plurality/oracle.hpp"

namespace plurality::verify {

InstanceOutcome check_instance(std::span<const Color> inputs, std::uint32_t k, std::uint64_t cap) {
    InstanceOutcome out;
    out.inputs.assign(inputs.begin(), inputs.end());
    out.k = k;
    const auto majority = oracle::brute_majority(inputs);
    out.unique_majority = majority.unique;
    out.winner = majority.winner;

    const auto fail = [&out](std::string which, std::string detail) {
        out.passed = false;
        out.failure = std::move(which);
        out.detail = std::move(detail);
    };

    RunOptions options;
    options.asserts = AssertLevel::full;
    options.trace = TraceMode::none;

    try {
        auto result = run(init_configuration(inputs, k), RoundRobin{}, UntilQuiescent{cap}, options);
        out.metrics = result.metrics;
        if (!result.metrics.converged) {
            fail("cap", "no quiescence within " + std::to_string(result.metrics.total_interactions) +
                            " interactions");
            return out;
        }
        if (result.final.braket_multiset() != oracle::predicted_stable_multiset(inputs)) {
            fail("multiset", "final bra-kets differ from the predicted stable multiset");
            return out;
        }
        if (majority.unique) {
            const auto& agents = result.final.agents();
            const bool all_winner = std::all_of(agents.begin(), agents.end(), [&](const AgentState& a) {
                return a.out == majority.winner;
            });
            if (!all_winner) {
                fail("output", "some agent does not output the unique winner " +
                                   std::to_string(majority.winner));
            }
        }
    } catch (const InvariantViolation& e) {
        const std::string what = e.what();
        fail(what.find("potential") != std::string::npos ? "potential" : "balance", what);
    }
    return out;
}

void Summary::add(InstanceOutcome outcome) {
    ++instances;
    if (outcome.unique_majority) {
        ++unique_majority;
    } else {
        ++ties;
    }
    total_interactions += outcome.metrics.total_interactions;
    max_interactions = std::max(max_interactions, outcome.metrics.total_interactions);
    total_exchanges += outcome.metrics.ket_exchanges;
    max_exchanges = std::max(max_exchanges, outcome.metrics.ket_exchanges);
    if (outcome.passed) {
        ++passed;
    } else {
        counterexamples.push_back(std::move(outcome));
    }
}

void for_each_assignment(std::size_t n, std::uint32_t k,
                         const std::function<void(std::span<const Color>)>& fn) {
    require_valid_k(k);
    std::vector<Color> colors(n, 0);
    while (true) {
        fn(colors);
        std::size_t i = n;
        while (i > 0 && colors[i - 1] + 1 == k) {
            colors[--i] = 0;
        }
        if (i == 0) {
            return;
        }
        ++colors[i - 1];
    }
}

void for_each_multiset(std::size_t n, std::uint32_t k,
                       const std::function<void(std::span<const Color>)>& fn) {
    require_valid_k(k);
    std::vector<Color> colors(n, 0);
    while (true) {
        fn(colors);
        std::size_t i = n;
        while (i > 0 && colors[i - 1] + 1 == k) {
            --i;
        }
        if (i == 0) {
            return;
        }
        const Color next = colors[i - 1] + 1;
        std::fill(colors.begin() + static_cast<std::ptrdiff_t>(i) - 1, colors.end(), next);
    }
}

Summary verify_exhaustive(std::size_t n_max, std::uint32_t k_max) {
    Summary summary;
    for (std::size_t n = 1; n <= n_max; ++n) {
        for (std::uint32_t k = 1; k <= k_max; ++k) {
            for_each_assignment(n, k, [&](std::span<const Color> colors) {
                summary.add(check_instance(colors, k));
            });
        }
    }
    return summary;
}

Summary verify_randomized(std::uint64_t trials, std::size_t n_max, std::uint32_t k_max,
                          std::uint64_t seed) {
    if (n_max == 0) {
        throw ConfigError("n_max must be at least 1");
    }
    require_valid_k(k_max);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_n(1, n_max);
    std::uniform_int_distribution<std::uint32_t> pick_k(1, k_max);

    Summary summary;
    std::vector<Color> colors;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const std::size_t n = pick_n(rng);
        const std::uint32_t k = pick_k(rng);
        std::uniform_int_distribution<Color> pick_color(0, k - 1);
        const bool want_tie = trial % 3 == 2 && n >= 2 && k >= 2;
        // Rejection sampling towards a tie; give up after a bounded number of draws.
        for (int attempt = 0; attempt < 200; ++attempt) {
            colors.resize(n);
            for (auto& c : colors) {
                c = pick_color(rng);
            }
            if (!want_tie || !oracle::brute_majority(colors).unique) {
                break;
            }
        }
        summary.add(check_instance(colors, k));
    }
    return summary;
}

Reachability explore_reachable(std::span<const Color> inputs, std::uint32_t k,
                               std::uint64_t max_configurations) {
    using Multiset = std::vector<AgentState>;

    Reachability result;
    const auto predicted = oracle::predicted_stable_multiset(inputs);
    const auto majority = oracle::brute_majority(inputs);

    Multiset start;
    for (Color c : inputs) {
        start.push_back(init_agent(c, k));
    }
    std::sort(start.begin(), start.end());

    std::set<Multiset> seen{start};
    std::deque<Multiset> frontier{start};

    while (!frontier.empty()) {
        Multiset config = std::move(frontier.front());
        frontier.pop_front();
        ++result.configurations;

        std::vector<std::int64_t> diff(k, 0);
        BraKetMultiset brakets;
        for (const auto& a : config) {
            if (a.bra >= k || a.ket >= k || a.out >= k) {
                ++result.invalid_states;
                continue;
            }
            result.states.insert(a);
            ++diff[a.bra];
            --diff[a.ket];
            ++brakets[a.braket()];
        }
        if (std::any_of(diff.begin(), diff.end(), [](std::int64_t d) { return d != 0; })) {
            ++result.balance_violations;
        }

        // One successor per unordered pair of distinct states, plus self-pairs of repeated states.
        std::vector<std::pair<AgentState, std::size_t>> distinct;
        for (const auto& a : config) {
            if (distinct.empty() || distinct.back().first != a) {
                distinct.emplace_back(a, 0);
            }
            ++distinct.back().second;
        }
        bool ket_stable = true;
        bool quiescent = true;
        for (std::size_t u = 0; u < distinct.size(); ++u) {
            for (std::size_t v = u; v < distinct.size(); ++v) {
                if (u == v && distinct[u].second < 2) {
                    continue;
                }
                const auto& a = distinct[u].first;
                const auto& b = distinct[v].first;
                const auto r = apply_interaction(a, b, k);
                ++result.transitions;
                ket_stable = ket_stable && !r.exchanged;
                if (!r.exchanged && !r.out_changed) {
                    continue;
                }
                quiescent = false;
                Multiset next = config;
                next.erase(std::find(next.begin(), next.end(), a));
                next.erase(std::find(next.begin(), next.end(), b));
                next.push_back(r.first);
                next.push_back(r.second);
                std::sort(next.begin(), next.end());
                if (seen.insert(next).second) {
                    if (seen.size() > max_configurations) {
                        result.truncated = true;
                        return result;
                    }
                    frontier.push_back(std::move(next));
                }
            }
        }

        if (ket_stable) {
            ++result.stable_configurations;
            if (brakets != predicted) {
                ++result.stable_mismatches;
            }
        }
        if (quiescent) {
            ++result.quiescent_configurations;
            if (majority.unique &&
                std::any_of(config.begin(), config.end(),
                            [&](const AgentState& a) { return a.out != majority.winner; })) {
                ++result.wrong_outputs;
            }
        }
    }
    return result;
}

}  // namespace plurality::verify
