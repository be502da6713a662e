#include "excon/weitzman.hpp"

#include "excon/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace excon {

double fair_cap_of(double cost, const std::vector<double>& probability, const std::vector<double>& value,
                   ZeroCostCap zero) {
    const std::size_t m = value.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return value[x] > value[y]; });

    if (cost <= 0.0) {
        if (zero == ZeroCostCap::Infinite) return INF_CAP;
        for (std::size_t j : order)
            if (probability[j] > 0.0) return value[j];
        return 0.0;
    }

    double mass = 0.0;
    double weighted = 0.0;
    double phi = -cost;
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t j = order[s];
        if (probability[j] <= 0.0) continue;
        mass += probability[j];
        weighted += probability[j] * value[j];
        phi = (weighted - cost) / mass;
        std::size_t next = s + 1;
        while (next < m && probability[order[next]] <= 0.0) ++next;
        if (next == m || phi >= value[order[next]]) return phi;
    }
    return phi;
}

double fair_cap(const Box& box, const std::vector<double>& transfers, ZeroCostCap zero) {
    std::vector<double> p, w;
    for (std::size_t j = 0; j < box.prizes.size(); ++j) {
        p.push_back(box.prizes[j].probability);
        w.push_back(box.prizes[j].agent_value + (j < transfers.size() ? transfers[j] : 0.0));
    }
    return fair_cap_of(box.cost, p, w, zero);
}

double fair_cap_principal(const Box& box, ZeroCostCap zero) {
    std::vector<double> p, w;
    for (const Prize& prize : box.prizes) {
        p.push_back(prize.probability);
        w.push_back(prize.principal_value);
    }
    return fair_cap_of(box.cost, p, w, zero);
}

FairCapProfile fair_cap_profile(const Instance& instance, const Contract& contract, ZeroCostCap zero) {
    FairCapProfile profile;
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const Box& box = instance.boxes[i];
        const double phi = fair_cap(box, contract.transfers[i], zero);
        profile.cap.push_back(phi);
        std::vector<double> row;
        for (std::size_t j = 0; j < box.prizes.size(); ++j)
            row.push_back(std::min(box.prizes[j].agent_value + contract.transfers[i][j], phi));
        profile.capped.push_back(std::move(row));
    }
    return profile;
}

void check_policy(const Instance& instance, const ResolvedPolicy& policy) {
    const std::size_t n = instance.size();
    std::vector<int> seen(n, 0);
    const auto mark = [&](std::size_t box) {
        if (box >= n) throw StructureError("policy references box " + std::to_string(box) + " out of range");
        if (seen[box]++) throw StructureError("policy lists box " + std::to_string(box) + " more than once");
    };
    for (std::size_t i : policy.zero_cost) mark(i);
    for (std::size_t k = 0; k < policy.phases.size(); ++k) {
        if (k > 0 && !(policy.phases[k].cap < policy.phases[k - 1].cap))
            throw StructureError("phase caps must strictly decrease");
        for (const PolicyStep& step : policy.phases[k].steps) mark(step.box);
    }
    for (std::size_t i : policy.never_opened) mark(i);
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i]) throw StructureError("policy omits box " + std::to_string(i));
    if (policy.action.size() != n) throw StructureError("action table has wrong number of boxes");
    for (std::size_t i = 0; i < n; ++i)
        if (policy.action[i].size() != instance.boxes[i].prizes.size())
            throw StructureError("action table for box " + std::to_string(i) + " has wrong size");
}

PairTable::PairTable(const Instance& instance, const Contract& contract) {
    if (contract.transfers.size() != instance.size()) throw StructureError("contract shape does not match instance");
    value.push_back({0.0, 0.0});
    std::size_t total = 0;
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const Box& box = instance.boxes[i];
        if (contract.transfers[i].size() != box.prizes.size())
            throw StructureError("contract shape does not match instance");
        offset.push_back(total);
        total += box.prizes.size();
        for (std::size_t j = 0; j < box.prizes.size(); ++j) {
            const double t = contract.transfers[i][j];
            value.push_back({box.prizes[j].agent_value + t, box.prizes[j].principal_value - t});
        }
    }
}

namespace {

bool holds_at_cap(const UtilityPair& best, double cap, double stop_above) {
    return best.agent >= cap - EPS && best.principal > stop_above + EPS;
}

}  // namespace

ExactEvaluation evaluate_exact_detail(const Instance& instance, const Contract& contract,
                                      const ResolvedPolicy& policy) {
    check_policy(instance, policy);
    const PairTable pairs(instance, contract);
    const std::size_t states = pairs.size();
    std::vector<double> active(states, 0.0), stopped(states, 0.0), next(states);
    active[0] = 1.0;
    double cost = 0.0;

    const auto open = [&](std::size_t i) {
        const Box& box = instance.boxes[i];
        std::fill(next.begin(), next.end(), 0.0);
        double mass = 0.0;
        for (std::size_t s = 0; s < states; ++s) {
            if (active[s] == 0.0) continue;
            mass += active[s];
            for (std::size_t j = 0; j < box.prizes.size(); ++j) {
                const double q = active[s] * box.prizes[j].probability;
                if (q == 0.0) continue;
                const std::size_t s2 = pairs.better(s, pairs.index(i, j));
                if (policy.action[i][j] == PrizeAction::StopAndTake)
                    stopped[s2] += q;
                else
                    next[s2] += q;
            }
        }
        cost += mass * box.cost;
        active.swap(next);
    };
    const auto stop_if = [&](auto&& predicate) {
        for (std::size_t s = 0; s < states; ++s) {
            if (active[s] != 0.0 && predicate(pairs.value[s])) {
                stopped[s] += active[s];
                active[s] = 0.0;
            }
        }
    };

    for (std::size_t i : policy.zero_cost) open(i);
    for (const PolicyPhase& phase : policy.phases) {
        stop_if([&](const UtilityPair& best) { return best.agent > phase.cap + EPS; });
        for (const PolicyStep& step : phase.steps) {
            stop_if([&](const UtilityPair& best) { return holds_at_cap(best, phase.cap, step.stop_above); });
            open(step.box);
        }
    }
    for (std::size_t s = 0; s < states; ++s) stopped[s] += active[s];

    ExactEvaluation out;
    out.expected_cost = cost;
    out.nothing_selected = stopped[0];
    double agent = 0.0, principal = 0.0;
    for (std::size_t s = 0; s < states; ++s) {
        agent += stopped[s] * pairs.value[s].agent;
        principal += stopped[s] * pairs.value[s].principal;
    }
    out.utility = {agent - cost, principal};
    for (std::size_t i = 0; i < instance.size(); ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < instance.boxes[i].prizes.size(); ++j) row.push_back(stopped[pairs.index(i, j)]);
        out.selection.push_back(std::move(row));
    }
    return out;
}

UtilityPair evaluate_exact(const Instance& instance, const Contract& contract, const ResolvedPolicy& policy) {
    return evaluate_exact_detail(instance, contract, policy).utility;
}

namespace {

std::size_t draw(const Box& box, CounterRng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < box.prizes.size(); ++j) {
        if (box.prizes[j].probability <= 0.0) continue;
        acc += box.prizes[j].probability;
        last = j;
        if (u < acc) return j;
    }
    return last;
}

UtilityPair run_trial(const Instance& instance, const ResolvedPolicy& policy, const PairTable& pairs,
                      CounterRng& rng) {
    std::size_t best = 0;
    double cost = 0.0;
    const auto finish = [&] { return UtilityPair{pairs.value[best].agent - cost, pairs.value[best].principal}; };
    // Returns true when the drawn prize ends the search.
    const auto open = [&](std::size_t i) {
        const Box& box = instance.boxes[i];
        cost += box.cost;
        const std::size_t j = draw(box, rng);
        best = pairs.better(best, pairs.index(i, j));
        return policy.action[i][j] == PrizeAction::StopAndTake;
    };

    for (std::size_t i : policy.zero_cost)
        if (open(i)) return finish();
    for (const PolicyPhase& phase : policy.phases) {
        if (pairs.value[best].agent > phase.cap + EPS) return finish();
        for (const PolicyStep& step : phase.steps) {
            if (holds_at_cap(pairs.value[best], phase.cap, step.stop_above)) return finish();
            if (open(step.box)) return finish();
        }
    }
    return finish();
}

constexpr std::uint64_t CHUNK = 4096;

}  // namespace

SimulationResult simulate(const Instance& instance, const Contract& contract, const ResolvedPolicy& policy,
                          std::uint64_t trials, std::uint64_t seed, Execution exec) {
    if (trials == 0) throw ValidationError("simulate: trials must be at least 1");
    check_policy(instance, policy);
    const PairTable pairs(instance, contract);
    const std::uint64_t chunks = (trials + CHUNK - 1) / CHUNK;
    std::vector<std::array<double, 4>> partial(chunks);

    const auto run_chunk = [&](std::uint64_t c) {
        std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
        const std::uint64_t end = std::min(trials, (c + 1) * CHUNK);
        for (std::uint64_t trial = c * CHUNK; trial < end; ++trial) {
            CounterRng rng(seed, trial);
            const UtilityPair u = run_trial(instance, policy, pairs, rng);
            acc[0] += u.agent;
            acc[1] += u.principal;
            acc[2] += u.agent * u.agent;
            acc[3] += u.principal * u.principal;
        }
        partial[c] = acc;
    };

    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) run_chunk(static_cast<std::uint64_t>(c));
    } else {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    }

    std::array<double, 4> total{0.0, 0.0, 0.0, 0.0};
    for (const auto& acc : partial)
        for (int k = 0; k < 4; ++k) total[k] += acc[k];

    const double count = static_cast<double>(trials);
    SimulationResult out;
    out.trials = trials;
    out.seed = seed;
    out.mean = {total[0] / count, total[1] / count};
    if (trials > 1) {
        const auto se = [&](double sum, double sq) {
            const double var = std::max(0.0, (sq - sum * sum / count) / (count - 1.0));
            return std::sqrt(var / count);
        };
        out.standard_error = {se(total[0], total[2]), se(total[1], total[3])};
    }
    return out;
}

}  // namespace excon
