#pragma once

#include "excon/instance.hpp"
#include "excon/numeric.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace excon {

/// Convention for boxes with zero opening cost, whose fair cap equation holds
/// for every cap at or above the largest prize value.
enum class ZeroCostCap {
    MaxValue,  // the smallest consistent cap
    Infinite,
};

inline constexpr double INF_CAP = std::numeric_limits<double>::infinity();

/// Root of sum_j p_j max(0, w_j - phi) = cost with w_j = a_j + t_j, in
/// closed form. Negative roots are returned as is.
double fair_cap(const Box& box, const std::vector<double>& transfers, ZeroCostCap zero = ZeroCostCap::MaxValue);
double fair_cap_principal(const Box& box, ZeroCostCap zero = ZeroCostCap::MaxValue);
/// Same root for explicit (probability, value) lists.
double fair_cap_of(double cost, const std::vector<double>& probability, const std::vector<double>& value,
                   ZeroCostCap zero = ZeroCostCap::MaxValue);

struct FairCapProfile {
    std::vector<double> cap;
    /// kappa_ij = min(a_ij + t_ij, phi_i)
    std::vector<std::vector<double>> capped;
};

FairCapProfile fair_cap_profile(const Instance& instance, const Contract& contract,
                                ZeroCostCap zero = ZeroCostCap::MaxValue);

enum class PrizeAction { StopAndTake, Continue, NeverTakeYet };

struct PolicyStep {
    std::size_t box = 0;
    /// Before opening, an agent holding a value at the phase cap stops when
    /// the held principal value exceeds this threshold.
    double stop_above = 0.0;
};

struct PolicyPhase {
    double cap = 0.0;
    std::vector<PolicyStep> steps;
};

struct ResolvedPolicy {
    std::vector<std::size_t> zero_cost;
    std::vector<PolicyPhase> phases;
    std::vector<std::size_t> never_opened;
    /// action[i][j] for every box i of the instance.
    std::vector<std::vector<PrizeAction>> action;
};

/// Throws StructureError unless every box appears exactly once, caps strictly
/// decrease across phases and action tables match the instance shape.
void check_policy(const Instance& instance, const ResolvedPolicy& policy);

/// Candidate selections: pair 0 is "take nothing" = (0, 0); pair
/// 1 + offset(i) + j is prize j of box i valued (a + t, b - t).
struct PairTable {
    std::vector<UtilityPair> value;
    std::vector<std::size_t> offset;

    PairTable(const Instance& instance, const Contract& contract);
    std::size_t index(std::size_t box, std::size_t prize) const { return 1 + offset[box] + prize; }
    std::size_t size() const { return value.size(); }
    /// Lexicographic improvement; the current pair survives full ties.
    std::size_t better(std::size_t current, std::size_t candidate) const {
        return lex_greater(value[candidate], value[current]) ? candidate : current;
    }
};

struct ExactEvaluation {
    UtilityPair utility;
    /// selection[i][j] = probability the process ends holding prize j of box i.
    std::vector<std::vector<double>> selection;
    double nothing_selected = 0.0;
    /// Expected total opening cost.
    double expected_cost = 0.0;
};

ExactEvaluation evaluate_exact_detail(const Instance& instance, const Contract& contract,
                                      const ResolvedPolicy& policy);
UtilityPair evaluate_exact(const Instance& instance, const Contract& contract, const ResolvedPolicy& policy);

struct SimulationResult {
    UtilityPair mean;
    UtilityPair standard_error;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

/// Trial i draws from CounterRng(seed, i); partial sums are taken over fixed
/// chunks and combined in chunk order, so Serial and Parallel agree exactly.
SimulationResult simulate(const Instance& instance, const Contract& contract, const ResolvedPolicy& policy,
                          std::uint64_t trials, std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace excon
