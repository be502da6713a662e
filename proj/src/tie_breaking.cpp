#include "excon/tie_breaking.hpp"

#include <algorithm>
#include <numeric>

namespace excon {

PhasePartition partition_phases(const Instance& instance, const Contract& contract) {
    PhasePartition out;
    std::vector<std::size_t> ranked;
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const double phi = fair_cap(instance.boxes[i], contract.transfers[i]);
        out.cap.push_back(phi);
        if (instance.boxes[i].cost <= 0.0)
            out.zero_cost.push_back(i);
        else if (phi < -EPS)
            out.never_opened.push_back(i);
        else
            ranked.push_back(i);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t x, std::size_t y) { return out.cap[x] > out.cap[y]; });
    for (std::size_t i : ranked) {
        if (out.phases.empty() || out.phases.back().cap - out.cap[i] > EPS)
            out.phases.push_back({out.cap[i], {}});
        out.phases.back().boxes.push_back(i);
    }
    return out;
}

TauResult tau_index(const std::vector<ReducedOption>& options) {
    if (options.empty() || options[0].probability <= 0.0)
        throw StructureError("reduced box has an empty stop set");
    std::vector<double> average;
    double mass = 0.0, weighted = 0.0;
    for (const ReducedOption& o : options) {
        mass += o.probability;
        weighted += o.probability * o.value;
        average.push_back(weighted / mass);
    }
    const double tau = *std::max_element(average.begin(), average.end());
    TauResult out{tau, 1};
    for (std::size_t k = 0; k < average.size(); ++k)
        if (average[k] >= tau - EPS) out.k_star = k + 1;
    return out;
}

ReducedBox reduce_box(const Box& box, const std::vector<double>& transfers, double cap, std::size_t index) {
    ReducedBox out;
    out.box = index;
    ReducedOption stop;
    std::vector<std::size_t> indifferent;
    for (std::size_t j = 0; j < box.prizes.size(); ++j) {
        const Prize& prize = box.prizes[j];
        const double w = prize.agent_value + transfers[j];
        const double u = prize.principal_value - transfers[j];
        if (w > cap + EPS) {
            out.action.push_back(PrizeAction::StopAndTake);
            stop.probability += prize.probability;
            stop.value += prize.probability * u;
        } else if (w >= cap - EPS) {
            out.action.push_back(PrizeAction::Continue);
            indifferent.push_back(j);
        } else {
            out.action.push_back(PrizeAction::NeverTakeYet);
            out.bottom_probability += prize.probability;
        }
    }
    if (stop.probability <= 0.0)
        throw StructureError("box " + std::to_string(index) + " has no prize above its fair cap");
    stop.value /= stop.probability;
    out.options.push_back(stop);
    std::stable_sort(indifferent.begin(), indifferent.end(), [&](std::size_t x, std::size_t y) {
        return box.prizes[x].principal_value - transfers[x] > box.prizes[y].principal_value - transfers[y];
    });
    for (std::size_t j : indifferent)
        out.options.push_back({box.prizes[j].probability, box.prizes[j].principal_value - transfers[j]});
    const TauResult tau = tau_index(out.options);
    out.tau = tau.tau;
    out.k_star = tau.k_star;
    out.reduced_cost = stop.probability * (tau.tau - stop.value);
    return out;
}

ResolvedPolicy optimal_policy(const Instance& instance, const Contract& contract) {
    const PhasePartition partition = partition_phases(instance, contract);
    ResolvedPolicy policy;
    policy.action.resize(instance.size());
    policy.zero_cost = partition.zero_cost;
    policy.never_opened = partition.never_opened;
    for (std::size_t i : partition.zero_cost)
        policy.action[i].assign(instance.boxes[i].prizes.size(), PrizeAction::Continue);
    for (std::size_t i : partition.never_opened)
        policy.action[i].assign(instance.boxes[i].prizes.size(), PrizeAction::NeverTakeYet);

    for (const Phase& phase : partition.phases) {
        std::vector<ReducedBox> reduced;
        for (std::size_t i : phase.boxes)
            reduced.push_back(reduce_box(instance.boxes[i], contract.transfers[i], partition.cap[i], i));
        std::stable_sort(reduced.begin(), reduced.end(), [](const ReducedBox& x, const ReducedBox& y) {
            if (x.tau > y.tau + EPS) return true;
            if (y.tau > x.tau + EPS) return false;
            if (x.options[0].value != y.options[0].value) return x.options[0].value > y.options[0].value;
            return x.box < y.box;
        });
        PolicyPhase out;
        out.cap = phase.cap;
        for (ReducedBox& r : reduced) {
            out.steps.push_back({r.box, r.tau});
            policy.action[r.box] = std::move(r.action);
        }
        policy.phases.push_back(std::move(out));
    }
    return policy;
}

}  // namespace excon

namespace excon {

UtilityPair evaluate_optimal(const Instance& instance, const Contract& contract) {
    return evaluate_exact(instance, contract, optimal_policy(instance, contract));
}

}  // namespace excon
