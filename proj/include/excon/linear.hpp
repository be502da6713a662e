#pragma once

#include "excon/tie_breaking.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace excon {

/// phi(alpha) = slope * alpha + intercept on [lo, hi], with active set
/// S = {j : a_j + alpha b_j >= phi(alpha)}.
struct CapSegment {
    double lo = 0.0;
    double hi = 1.0;
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<std::size_t> active;

    double at(double alpha) const { return slope * alpha + intercept; }
};

struct FairCapCurve {
    std::size_t box = 0;
    std::vector<CapSegment> segments;

    double at(double alpha) const;
};

/// Upper envelope of the lines (sum_S p (a + alpha b) - c) / sum_S p over the
/// prefixes S of every value ordering that occurs on [0, 1]. Requires c > 0.
FairCapCurve build_faircap_curve(const Box& box, std::size_t index = 0);

enum class CriticalKind { Endpoint, CapCap, ValueCap, CapZero, ValueValue };

std::string_view to_string(CriticalKind kind);

struct CriticalValue {
    double alpha = 0.0;
    CriticalKind kind = CriticalKind::Endpoint;
};

/// Sorted, EPS-deduplicated. Besides cap/cap, value/cap and cap/zero events,
/// crossings between prize values of different boxes are included since they
/// decide which held prize survives.
std::vector<CriticalValue> critical_values(const Instance& instance);

struct LinearResult {
    double alpha = 0.0;
    Contract contract;
    UtilityPair utility;
    std::vector<CriticalValue> critical;
};

/// Principal-best critical value, smallest alpha on ties.
LinearResult optimal_linear(const Instance& instance, Execution exec = Execution::Parallel);

UtilityPair evaluate_linear(const Instance& instance, double alpha);

/// 0, step, 2 step, ... and 1. Throws ValidationError unless step is in (0, 1].
std::vector<double> alpha_grid(double step);

struct SweepRow {
    double alpha = 0.0;
    UtilityPair utility;
};

std::vector<SweepRow> alpha_sweep(const Instance& instance, double step, Execution exec = Execution::Parallel);
/// Header `alpha,agent_utility,principal_utility`, values as %.12g.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace excon
