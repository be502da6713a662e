#pragma once

#include "excon/instance.hpp"
#include "excon/numeric.hpp"

#include <cstddef>
#include <vector>

namespace excon {

inline constexpr std::size_t LEX_DP_MAX_BOXES = 12;
inline constexpr std::size_t ORDERING_MAX_BOXES = 7;
inline constexpr std::size_t IID_ORACLE_MAX_BOXES = 5;

/// Backward induction over (opened set, best pair held). Each state takes the
/// lexicographic maximum of stopping and opening any remaining box; stopping
/// wins full ties, then lower box indices.
UtilityPair lex_dp(const Instance& instance, const Contract& contract, Execution exec = Execution::Serial);

struct OrderingOracleResult {
    std::vector<std::size_t> order;  // kept boxes, original indices
    Contract contract;
    double utility = 0.0;
    std::size_t feasible = 0;
};

/// Best canonical contract over every permutation of the kept binary boxes.
OrderingOracleResult enumerate_orderings_binary(const Instance& instance);

struct PaymentOracleResult {
    std::vector<double> payments;  // transfer on the principal-positive prize, per box
    UtilityPair utility;
    std::size_t evaluated = 0;
};

/// Every multiset of per-box payments from the structured candidate set,
/// scored by lex_dp. Boxes are identical, so multisets cover all vectors.
PaymentOracleResult enumerate_payments_iid(const Instance& instance);

struct GridResult {
    double alpha = 0.0;
    UtilityPair utility;
};

/// Best grid point of {0, step, 2 step, ...} plus 1, first maximizer kept.
GridResult grid_search_linear(const Instance& instance, double step, Execution exec = Execution::Parallel);

}  // namespace excon
