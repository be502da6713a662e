#include "excon/oracle.hpp"

#include "excon/general.hpp"
#include "excon/linear.hpp"
#include "excon/weitzman.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

namespace excon {

UtilityPair lex_dp(const Instance& instance, const Contract& contract, Execution exec) {
    const std::size_t n = instance.size();
    if (n > LEX_DP_MAX_BOXES)
        throw SizeGuardError("lex_dp supports at most " + std::to_string(LEX_DP_MAX_BOXES) + " boxes, got " +
                             std::to_string(n));
    const PairTable pairs(instance, contract);
    const std::size_t states = pairs.size();
    const std::size_t masks = std::size_t{1} << n;
    std::vector<UtilityPair> value(masks * states);

    const auto solve = [&](std::size_t mask) {
        for (std::size_t s = 0; s < states; ++s) {
            UtilityPair best = pairs.value[s];
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::size_t{1} << i)) continue;
                const std::size_t child = (mask | (std::size_t{1} << i)) * states;
                const Box& box = instance.boxes[i];
                UtilityPair open{-box.cost, 0.0};
                for (std::size_t j = 0; j < box.prizes.size(); ++j) {
                    const UtilityPair& v = value[child + pairs.better(s, pairs.index(i, j))];
                    open.agent += box.prizes[j].probability * v.agent;
                    open.principal += box.prizes[j].probability * v.principal;
                }
                if (lex_greater(open, best)) best = open;
            }
            value[mask * states + s] = best;
        }
    };

    // Masks of equal size depend only on larger masks.
    std::vector<std::vector<std::size_t>> layers(n + 1);
    for (std::size_t mask = 0; mask < masks; ++mask) layers[std::popcount(mask)].push_back(mask);
    for (std::size_t size = n + 1; size-- > 0;) {
        const auto& layer = layers[size];
        if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
            for (std::int64_t k = 0; k < static_cast<std::int64_t>(layer.size()); ++k) solve(layer[k]);
        } else {
            for (std::size_t mask : layer) solve(mask);
        }
    }
    return value[0];
}

}  // namespace excon

namespace excon {

OrderingOracleResult enumerate_orderings_binary(const Instance& instance) {
    const std::vector<BinaryBox> view = binary_view(instance);
    if (view.size() > ORDERING_MAX_BOXES)
        throw SizeGuardError("ordering oracle supports at most " + std::to_string(ORDERING_MAX_BOXES) +
                             " kept boxes, got " + std::to_string(view.size()));
    std::vector<std::size_t> sigma;
    for (const BinaryBox& b : view) sigma.push_back(b.box);
    std::sort(sigma.begin(), sigma.end());

    OrderingOracleResult out;
    out.utility = -INF_CAP;
    do {
        CanonicalContract c = canonical_contract(instance, sigma);
        if (!c.feasible) continue;
        ++out.feasible;
        if (c.utility > out.utility + EPS) {
            out.utility = c.utility;
            out.order = sigma;
            out.contract = std::move(c.contract);
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    if (view.empty()) {
        out.utility = 0.0;
        out.contract = Contract::zero(instance);
    }
    return out;
}

PaymentOracleResult enumerate_payments_iid(const Instance& instance) {
    const IidView view = iid_view(instance);
    const std::size_t n = view.n;
    if (n > IID_ORACLE_MAX_BOXES)
        throw SizeGuardError("payment oracle supports at most " + std::to_string(IID_ORACLE_MAX_BOXES) +
                             " boxes, got " + std::to_string(n));
    const std::vector<double> menu =
        view.p > 0.0 && view.v > 0.0 ? iid_candidate_payments(view) : std::vector<double>{0.0};

    PaymentOracleResult out;
    bool first = true;
    // Non-decreasing index vectors enumerate multisets.
    std::vector<std::size_t> pick(n, 0);
    while (true) {
        std::vector<double> payments;
        for (std::size_t k : pick) payments.push_back(menu[k]);
        const UtilityPair u = lex_dp(instance, iid_contract(instance, payments));
        ++out.evaluated;
        if (first || u.principal > out.utility.principal + EPS) {
            first = false;
            out.utility = u;
            out.payments = std::move(payments);
        }
        std::size_t pos = n;
        while (pos > 0 && pick[pos - 1] + 1 == menu.size()) --pos;
        if (pos == 0) break;
        const std::size_t next = pick[pos - 1] + 1;
        for (std::size_t k = pos - 1; k < n; ++k) pick[k] = next;
    }
    return out;
}

GridResult grid_search_linear(const Instance& instance, double step, Execution exec) {
    const std::vector<SweepRow> rows = alpha_sweep(instance, step, exec);
    GridResult out{rows[0].alpha, rows[0].utility};
    for (const SweepRow& r : rows)
        if (r.utility.principal > out.utility.principal + EPS) out = {r.alpha, r.utility};
    return out;
}

}  // namespace excon
