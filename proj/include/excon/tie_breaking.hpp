#pragma once

#include "excon/weitzman.hpp"

#include <vector>

namespace excon {

struct Phase {
    double cap = 0.0;
    std::vector<std::size_t> boxes;
};

struct PhasePartition {
    std::vector<std::size_t> zero_cost;
    /// Caps strictly decreasing; members share a cap within EPS.
    std::vector<Phase> phases;
    std::vector<std::size_t> never_opened;
    /// Fair cap of every box, zero-cost boxes at their largest value.
    std::vector<double> cap;
};

PhasePartition partition_phases(const Instance& instance, const Contract& contract);

struct ReducedOption {
    double probability = 0.0;
    double value = 0.0;
};

struct TauResult {
    double tau = 0.0;
    /// Largest maximizing prefix length (1-based).
    std::size_t k_star = 0;
};

/// Maximum prefix average of options 1..m-1; options[0] is the merged stop
/// option, the rest are sorted by value descending.
TauResult tau_index(const std::vector<ReducedOption>& options);

struct ReducedBox {
    std::size_t box = 0;
    /// Option 1 followed by the indifferent prizes; the bottom option is
    /// kept apart with value 0.
    std::vector<ReducedOption> options;
    double bottom_probability = 0.0;
    double tau = 0.0;
    std::size_t k_star = 0;
    double reduced_cost = 0.0;
    std::vector<PrizeAction> action;
};

/// Classifies prizes against `cap` with EPS bands. Throws StructureError
/// when no prize lies strictly above the cap.
ReducedBox reduce_box(const Box& box, const std::vector<double>& transfers, double cap, std::size_t index);

/// Agent-optimal policy that is best for the principal among agent-optimal
/// policies.
ResolvedPolicy optimal_policy(const Instance& instance, const Contract& contract);

}  // namespace excon

namespace excon {

/// optimal_policy followed by evaluate_exact.
UtilityPair evaluate_optimal(const Instance& instance, const Contract& contract);

}  // namespace excon
