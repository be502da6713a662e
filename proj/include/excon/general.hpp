#pragma once

#include "excon/tie_breaking.hpp"

#include <optional>
#include <vector>

namespace excon {

/// Principal's utility from running the search herself: agent machinery on
/// the instance with a := b and no transfers.
double first_best(const Instance& instance);

struct NoAgentValueResult {
    Contract contract;
    UtilityPair utility;
    double first_best = 0.0;
    std::vector<double> principal_cap;
};

/// t_ij = max(0, b_ij - phi^P_i) for boxes with phi^P_i >= 0, else 0.
/// Requires every a_ij = 0.
NoAgentValueResult solve_no_agent_value(const Instance& instance);

struct BinaryBox {
    std::size_t box = 0;
    std::size_t prize = 0;  // index of the positive prize
    double p = 0.0;
    double cost = 0.0;
    /// Renormalization payment max(0, c/p - a).
    double t_tilde = 0.0;
    double a = 0.0;  // a + t_tilde
    double b = 0.0;  // b - t_tilde
    double phi0 = 0.0;  // a - c/p after renormalization, >= 0
};

/// Kept boxes (p (a + b) > c) sorted by basic cap desc, then b desc.
std::vector<BinaryBox> binary_view(const Instance& instance);

/// Principal utility when the agent accepts the first positive prize and
/// boxes are opened by cap desc, then b - t desc. `lift[k]` is the payment on
/// top of the renormalization for view box k; caps are phi0 + lift.
double binary_principal_utility(const std::vector<BinaryBox>& view, const std::vector<double>& lift);

/// Contract on the original instance for per-view-box lifts.
Contract binary_contract(const Instance& instance, const std::vector<BinaryBox>& view, const std::vector<double>& lift);

struct BinaryResult {
    Contract contract;
    /// Opening order of the kept boxes, original indices.
    std::vector<std::size_t> order;
    UtilityPair utility;
    /// Objective value tracked inside the greedy pass.
    double internal_utility = 0.0;
};

BinaryResult solve_binary(const Instance& instance);

struct CanonicalContract {
    bool feasible = false;
    Contract contract;
    std::vector<double> cap;  // per position of sigma
    double utility = 0.0;
};

/// Minimal lifts that make the agent open the kept boxes in the order sigma
/// (original indices). Infeasible when a lift exceeds b or equal caps would
/// be tie-broken against sigma.
CanonicalContract canonical_contract(const Instance& instance, const std::vector<std::size_t>& sigma);

struct IidView {
    std::size_t n = 0;
    std::size_t positive = 0;  // index of the principal-positive prize
    double p = 0.0;
    double v = 0.0;
    double a0 = 0.0;
    double cost = 0.0;
    std::vector<double> q;  // other prizes, sorted by agent value ascending
    std::vector<double> a;
    double phi0 = 0.0;
};

IidView iid_view(const Instance& instance);

/// Mass of other prizes with agent value <= x.
double iid_mass_below(const IidView& view, double x);
/// Payment on the positive prize that lifts the cap to x > phi0.
double iid_lift_payment(const IidView& view, double x);
/// Per-box payment candidates used by the exhaustive oracle.
std::vector<double> iid_candidate_payments(const IidView& view);
/// Same payment t_i on the positive prize of box i, zero elsewhere.
Contract iid_contract(const Instance& instance, const std::vector<double>& payments);

struct Phase2Target {
    double mass_below = 0.0;  // Q_j
    std::size_t count = 0;    // boxes paying up to a_j
    double principal = 0.0;   // v - t_j
};

/// Probability that the final pick is the positive prize of a box in target
/// group j: Q^(n - N_j) (p + Q)^N_j - Q^(n - N_{j-1}) (p + Q)^N_{j-1}.
double phase2_success_probability(double p, double q, std::size_t n, std::size_t upto, std::size_t before);
/// Targets sorted by agent value ascending.
double phase2_principal_utility(double p, const std::vector<Phase2Target>& targets, std::size_t n);

struct IidPhases {
    std::size_t lifted = 0;  // boxes with cap above phi0
    std::size_t front = 0;   // basic boxes whose positive prize sits at phi0
    std::size_t phase1_length = 0;
    std::size_t phase2_length = 0;
    double lifted_cap = 0.0;
    double lifted_payment = 0.0;
    double front_payment = 0.0;
    double phase2_payment = 0.0;
};

struct IidResult {
    Contract contract;
    std::vector<double> payments;
    IidPhases phases;
    UtilityPair utility;
    std::size_t candidates = 0;
    std::size_t closed_form_checks = 0;
    double closed_form_error = 0.0;
};

IidResult solve_iid_single_prize(const Instance& instance, Execution exec = Execution::Parallel);

}  // namespace excon
