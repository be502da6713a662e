#pragma once

#include "excon/instance.hpp"
#include "excon/rng.hpp"
#include "excon/tie_breaking.hpp"
#include "excon/weitzman.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace excon::testing {

/// Independent root finder for the fair cap equation.
inline double bisect_fair_cap(double cost, const std::vector<double>& p, const std::vector<double>& w) {
    const auto excess = [&](double phi) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) s += p[j] * std::max(0.0, w[j] - phi);
        return s - cost;
    };
    double hi = *std::max_element(w.begin(), w.end());
    double lo = hi - cost - 1.0;
    while (excess(lo) < 0.0) lo -= 2.0 * (hi - lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Uniform transfer in [0, b] on roughly half the prizes.
inline Contract random_contract(const Instance& instance, std::uint64_t seed) {
    CounterRng rng(seed, 0xC0);
    Contract c = Contract::zero(instance);
    for (std::size_t i = 0; i < instance.size(); ++i)
        for (std::size_t j = 0; j < instance.boxes[i].prizes.size(); ++j)
            if (rng.uniform() < 0.5) c.transfers[i][j] = rng.uniform() * instance.boxes[i].prizes[j].principal_value;
    return c;
}

/// Small integer values, quarter probabilities and costs: many exact ties
/// between caps, values and principal values.
inline Instance tie_heavy_instance(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed, 0x7E);
    Instance in;
    for (std::size_t i = 0; i < n; ++i) {
        Box box;
        box.cost = 0.25 * static_cast<double>(rng.next_u64() % 5);
        const std::size_t m = 1 + rng.next_u64() % 3;
        double left = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            double p = j + 1 == m ? left : std::min(left, 0.25 * static_cast<double>(rng.next_u64() % 3));
            left -= p;
            box.prizes.push_back({p, static_cast<double>(rng.next_u64() % 4), static_cast<double>(rng.next_u64() % 4)});
        }
        in.boxes.push_back(box);
    }
    return normalized(in);
}

/// Integer transfers capped by the principal value.
inline Contract tie_heavy_contract(const Instance& instance, std::uint64_t seed) {
    CounterRng rng(seed, 0x7F);
    Contract c = Contract::zero(instance);
    for (std::size_t i = 0; i < instance.size(); ++i)
        for (std::size_t j = 0; j < instance.boxes[i].prizes.size(); ++j)
            c.transfers[i][j] =
                std::min(static_cast<double>(rng.next_u64() % 3), instance.boxes[i].prizes[j].principal_value);
    return c;
}

/// Classic Weitzman value E[max(0, max_i min(w_i, phi_i))], computed from
/// the distribution of the largest capped value.
inline double weitzman_value(const Instance& instance, const Contract& contract) {
    const FairCapProfile profile = fair_cap_profile(instance, contract);
    std::vector<double> levels{0.0};
    for (const auto& row : profile.capped)
        for (double k : row) levels.push_back(std::max(0.0, k));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const auto cdf = [&](double x) {
        double prob = 1.0;
        for (std::size_t i = 0; i < instance.size(); ++i) {
            double below = 0.0;
            for (std::size_t j = 0; j < instance.boxes[i].prizes.size(); ++j)
                if (std::max(0.0, profile.capped[i][j]) <= x) below += instance.boxes[i].prizes[j].probability;
            prob *= below;
        }
        return prob;
    };
    double value = 0.0, prev = 0.0;
    for (double x : levels) {
        const double f = cdf(x);
        value += x * (f - prev);
        prev = f;
    }
    return value;
}

// Joint optimum: one searcher collecting a + b at cost c.
inline double welfare_optimum(const Instance& instance) {
    Instance joint = instance;
    for (Box& box : joint.boxes)
        for (Prize& prize : box.prizes) prize.agent_value += prize.principal_value;
    return evaluate_optimal(joint, Contract::zero(joint)).agent;
}

inline std::size_t rand_between(CounterRng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

}  // namespace excon::testing
