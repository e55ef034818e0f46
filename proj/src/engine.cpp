#include "plurality/engine.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "plurality/errors.hpp"
#include "plurality/oracle.hpp"

namespace plurality {
namespace {

std::string describe(const AgentState& s) {
    std::ostringstream os;
    os << "<" << s.bra << "|" << s.ket << "> out=" << s.out;
    return os.str();
}

std::string describe(const StepEvent& ev) {
    std::ostringstream os;
    os << "step " << ev.step << " pair (" << ev.pair.first << "," << ev.pair.second << "): "
       << describe(ev.pre_first) << ", " << describe(ev.pre_second) << " -> " << describe(ev.post_first)
       << ", " << describe(ev.post_second);
    return os.str();
}

}  // namespace

Configuration::Configuration(std::vector<AgentState> agents, std::uint32_t k)
    : agents_(std::move(agents)), k_(k) {
    require_valid_k(k);
    if (agents_.empty()) {
        throw ConfigError("a population needs at least one agent");
    }
    for (const auto& a : agents_) {
        require_valid_state(a, k);
    }
}

bool Configuration::braket_balanced() const {
    std::vector<std::int64_t> diff(k_, 0);
    for (const auto& a : agents_) {
        ++diff[a.bra];
        --diff[a.ket];
    }
    return std::all_of(diff.begin(), diff.end(), [](std::int64_t d) { return d == 0; });
}

std::vector<std::uint32_t> Configuration::sorted_weights() const {
    std::vector<std::uint32_t> w;
    w.reserve(agents_.size());
    for (const auto& a : agents_) {
        w.push_back(weight(a, k_));
    }
    std::sort(w.begin(), w.end());
    return w;
}

BraKetMultiset Configuration::braket_multiset() const {
    BraKetMultiset m;
    for (const auto& a : agents_) {
        ++m[a.braket()];
    }
    return m;
}

std::vector<std::size_t> Configuration::output_histogram() const {
    std::vector<std::size_t> h(k_, 0);
    for (const auto& a : agents_) {
        ++h[a.out];
    }
    return h;
}

std::vector<std::size_t> Configuration::bra_histogram() const {
    std::vector<std::size_t> h(k_, 0);
    for (const auto& a : agents_) {
        ++h[a.bra];
    }
    return h;
}

Configuration init_configuration(std::span<const Color> colors, std::uint32_t k) {
    std::vector<AgentState> agents;
    agents.reserve(colors.size());
    for (Color c : colors) {
        agents.push_back(init_agent(c, k));
    }
    return Configuration(std::move(agents), k);
}

StepEvent step(Configuration& config, AgentPair pair) {
    const std::size_t n = config.size();
    if (pair.first >= n || pair.second >= n) {
        throw ConfigError("pair (" + std::to_string(pair.first) + "," + std::to_string(pair.second) +
                          ") out of range for n=" + std::to_string(n));
    }
    if (pair.first == pair.second) {
        throw ConfigError("an agent cannot interact with itself");
    }
    auto& a = config.agents_[pair.first];
    auto& b = config.agents_[pair.second];

    StepEvent ev;
    ev.step = config.step_;
    ev.pair = pair;
    ev.pre_first = a;
    ev.pre_second = b;

    const auto r = apply_interaction(a, b, config.k_);
    a = r.first;
    b = r.second;
    ++config.step_;

    ev.post_first = a;
    ev.post_second = b;
    ev.exchanged = r.exchanged;
    ev.out_changed = r.out_changed;
    return ev;
}

bool is_quiescent(const Configuration& config) {
    std::map<AgentState, std::size_t> present;
    for (const auto& a : config.agents()) {
        ++present[a];
    }
    const std::uint32_t k = config.k();
    for (auto it = present.begin(); it != present.end(); ++it) {
        if (it->second >= 2) {
            const auto r = apply_interaction(it->first, it->first, k);
            if (r.exchanged || r.out_changed) {
                return false;
            }
        }
        for (auto jt = std::next(it); jt != present.end(); ++jt) {
            const auto r = apply_interaction(it->first, jt->first, k);
            if (r.exchanged || r.out_changed) {
                return false;
            }
        }
    }
    return true;
}

std::uint64_t default_cap(std::size_t n) noexcept {
    const std::uint64_t cycle = std::max<std::uint64_t>(pair_count(n), 1);
    return 50ULL * n * n * cycle;
}

RunResult run(Configuration config, const SchedulerKind& scheduler, StopPolicy stop,
              RunOptions options) {
    RunMetrics metrics;
    std::vector<StepEvent> trace;

    {
        const auto h = config.bra_histogram();
        const auto top = *std::max_element(h.begin(), h.end());
        metrics.tie = std::count(h.begin(), h.end(), top) > 1;
    }

    const bool until_quiescent = std::holds_alternative<UntilQuiescent>(stop);
    std::uint64_t limit = 0;
    if (const auto* uq = std::get_if<UntilQuiescent>(&stop)) {
        limit = uq->cap == 0 ? default_cap(config.size()) : uq->cap;
    } else {
        limit = std::get<FixedSteps>(stop).steps;
    }

    if (options.asserts != AssertLevel::off && !config.braket_balanced()) {
        throw InvariantViolation("initial configuration violates the bra/ket balance");
    }

    std::uint64_t last_change = config.step_count();
    bool quiescent = until_quiescent && is_quiescent(config);

    if (config.size() >= 2 && !quiescent) {
        const Scheduler sched(scheduler, config.size());
        const std::uint64_t interval =
            options.check_interval != 0 ? options.check_interval : sched.round_length();
        std::vector<std::uint32_t> weights;
        if (options.asserts == AssertLevel::full) {
            weights = config.sorted_weights();
        }

        for (std::uint64_t t = 0; t < limit; ++t) {
            const StepEvent ev = step(config, sched.next_pair(config.step_count()));
            ++metrics.total_interactions;
            if (ev.exchanged) {
                ++metrics.ket_exchanges;
            }
            if (ev.out_changed) {
                ++metrics.out_updates;
            }
            if (ev.changed()) {
                last_change = config.step_count();
            }
            if (options.trace == TraceMode::full ||
                (options.trace == TraceMode::thinned && ev.changed())) {
                trace.push_back(ev);
            }

            if (options.asserts != AssertLevel::off && !config.braket_balanced()) {
                throw InvariantViolation("bra/ket balance broken at " + describe(ev));
            }
            if (options.asserts == AssertLevel::full) {
                if (ev.exchanged) {
                    auto next = config.sorted_weights();
                    if (!oracle::potential_less(next, weights)) {
                        throw InvariantViolation("potential did not decrease at " + describe(ev));
                    }
                    weights = std::move(next);
                } else if (ev.pre_first.braket() != ev.post_first.braket() ||
                           ev.pre_second.braket() != ev.post_second.braket()) {
                    throw InvariantViolation("bra-ket changed without a ket exchange at " +
                                             describe(ev));
                }
            }

            if (until_quiescent && (t + 1) % interval == 0 && is_quiescent(config)) {
                quiescent = true;
                break;
            }
        }
    }

    metrics.converged = quiescent || is_quiescent(config);
    if (metrics.converged) {
        metrics.quiescence_step = last_change;
    }
    metrics.final_outputs = config.output_histogram();
    return {std::move(config), std::move(trace), std::move(metrics)};
}

}  // namespace plurality
