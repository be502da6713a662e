#include "excon/general.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace excon {

double first_best(const Instance& instance) {
    Instance own = instance;
    for (Box& box : own.boxes)
        for (Prize& prize : box.prizes) prize.agent_value = prize.principal_value;
    return evaluate_optimal(own, Contract::zero(own)).agent;
}

NoAgentValueResult solve_no_agent_value(const Instance& instance) {
    for (const Box& box : instance.boxes)
        for (const Prize& prize : box.prizes)
            if (prize.agent_value != 0.0) throw ValidationError("no-agent-value mode requires every agent value to be 0");
    NoAgentValueResult out;
    out.contract = Contract::zero(instance);
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const Box& box = instance.boxes[i];
        const double cap = fair_cap_principal(box);
        out.principal_cap.push_back(cap);
        if (cap < 0.0) continue;
        for (std::size_t j = 0; j < box.prizes.size(); ++j)
            out.contract.transfers[i][j] = std::max(0.0, box.prizes[j].principal_value - cap);
    }
    out.utility = evaluate_optimal(instance, out.contract);
    out.first_best = first_best(instance);
    return out;
}

std::vector<BinaryBox> binary_view(const Instance& instance) {
    if (instance.kind != InstanceKind::Binary) throw ValidationError("expected a binary instance");
    std::vector<BinaryBox> view;
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const Box& box = instance.boxes[i];
        for (std::size_t j = 0; j < box.prizes.size(); ++j) {
            const Prize& prize = box.prizes[j];
            if (prize.probability <= 0.0 || (prize.agent_value == 0.0 && prize.principal_value == 0.0)) continue;
            const double p = prize.probability;
            if (p * (prize.agent_value + prize.principal_value) <= box.cost) break;
            BinaryBox v;
            v.box = i;
            v.prize = j;
            v.p = p;
            v.cost = box.cost;
            v.t_tilde = std::max(0.0, box.cost / p - prize.agent_value);
            v.a = prize.agent_value + v.t_tilde;
            v.b = prize.principal_value - v.t_tilde;
            v.phi0 = std::max(0.0, v.a - box.cost / p);
            view.push_back(v);
            break;
        }
    }
    std::stable_sort(view.begin(), view.end(), [](const BinaryBox& x, const BinaryBox& y) {
        if (x.phi0 != y.phi0) return x.phi0 > y.phi0;
        return x.b > y.b;
    });
    return view;
}

namespace {

// Opening order induced by caps phi0 + lift, matching the tie rules of the
// policy construction: cap, then principal value, then box index.
std::vector<std::size_t> binary_order(const std::vector<BinaryBox>& view, const std::vector<double>& lift) {
    std::vector<std::size_t> order(view.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> cap(view.size());
    for (std::size_t k = 0; k < view.size(); ++k) cap[k] = view[k].phi0 + lift[k];
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (std::abs(cap[x] - cap[y]) > EPS) return cap[x] > cap[y];
        const double ux = view[x].b - lift[x], uy = view[y].b - lift[y];
        if (std::abs(ux - uy) > EPS) return ux > uy;
        if (ux != uy) return ux > uy;
        return view[x].box < view[y].box;
    });
    return order;
}

}  // namespace

double binary_principal_utility(const std::vector<BinaryBox>& view, const std::vector<double>& lift) {
    double survive = 1.0, total = 0.0;
    for (std::size_t k : binary_order(view, lift)) {
        total += survive * view[k].p * (view[k].b - lift[k]);
        survive *= 1.0 - view[k].p;
    }
    return total;
}

Contract binary_contract(const Instance& instance, const std::vector<BinaryBox>& view, const std::vector<double>& lift) {
    Contract contract = Contract::zero(instance);
    for (std::size_t k = 0; k < view.size(); ++k) {
        const double t = view[k].t_tilde + lift[k];
        const double b = instance.boxes[view[k].box].prizes[view[k].prize].principal_value;
        contract.transfers[view[k].box][view[k].prize] = std::min(t, b);
    }
    return contract;
}

BinaryResult solve_binary(const Instance& instance) {
    const std::vector<BinaryBox> view = binary_view(instance);
    const std::size_t n = view.size();
    std::vector<double> cap(n), lift(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) cap[k] = view[k].phi0;

    for (std::size_t k = 0; k < n; ++k) {
        double best = -INF_CAP;
        std::size_t pick = k;
        for (std::size_t j = 0; j <= k; ++j) {
            const double l = std::max(0.0, cap[j] - view[k].phi0);
            if (l > view[k].b + EPS) continue;
            lift[k] = std::min(l, view[k].b);
            const double e = binary_principal_utility(view, lift);
            if (e > best + EPS) {
                best = e;
                pick = j;
            }
        }
        cap[k] = cap[pick];
        lift[k] = std::min(std::max(0.0, cap[pick] - view[k].phi0), view[k].b);
    }

    BinaryResult out;
    out.internal_utility = binary_principal_utility(view, lift);
    for (std::size_t k : binary_order(view, lift)) out.order.push_back(view[k].box);
    out.contract = binary_contract(instance, view, lift);
    out.utility = evaluate_optimal(instance, out.contract);
    return out;
}

CanonicalContract canonical_contract(const Instance& instance, const std::vector<std::size_t>& sigma) {
    const std::vector<BinaryBox> view = binary_view(instance);
    const std::size_t n = view.size();
    std::vector<std::size_t> at(instance.size(), n);
    for (std::size_t k = 0; k < n; ++k) at[view[k].box] = k;
    std::vector<bool> used(n, false);
    if (sigma.size() != n) throw ValidationError("ordering must list every kept binary box once");
    for (std::size_t box : sigma) {
        if (box >= instance.size() || at[box] == n || used[at[box]])
            throw ValidationError("ordering must list every kept binary box once");
        used[at[box]] = true;
    }

    CanonicalContract out;
    out.cap.assign(n, 0.0);
    std::vector<double> lift(n, 0.0);
    double suffix = -INF_CAP;
    for (std::size_t pos = n; pos-- > 0;) {
        suffix = std::max(suffix, view[at[sigma[pos]]].phi0);
        out.cap[pos] = suffix;
    }
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t k = at[sigma[pos]];
        lift[k] = out.cap[pos] - view[k].phi0;
        if (lift[k] > view[k].b + EPS) return out;
        lift[k] = std::min(lift[k], view[k].b);
    }
    for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        if (std::abs(out.cap[pos] - out.cap[pos + 1]) > EPS) continue;
        const std::size_t x = at[sigma[pos]], y = at[sigma[pos + 1]];
        if (view[y].b - lift[y] > view[x].b - lift[x] + EPS) return out;
    }
    out.feasible = true;
    out.contract = binary_contract(instance, view, lift);
    out.utility = binary_principal_utility(view, lift);
    return out;
}

IidView iid_view(const Instance& instance) {
    if (instance.kind != InstanceKind::IidSinglePrize) throw ValidationError("expected an i.i.d. single-prize instance");
    if (instance.size() == 0) throw ValidationError("i.i.d. instance has no boxes");
    const Box& box = instance.boxes[0];
    IidView view;
    view.n = instance.size();
    view.cost = box.cost;
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < box.prizes.size(); ++j) {
        if (box.prizes[j].principal_value > 0.0 && box.prizes[j].probability > 0.0) {
            view.positive = j;
            view.p = box.prizes[j].probability;
            view.v = box.prizes[j].principal_value;
            view.a0 = box.prizes[j].agent_value;
        } else if (box.prizes[j].probability > 0.0) {
            others.push_back(j);
        }
    }
    std::stable_sort(others.begin(), others.end(), [&](std::size_t x, std::size_t y) {
        return box.prizes[x].agent_value < box.prizes[y].agent_value;
    });
    for (std::size_t j : others) {
        view.q.push_back(box.prizes[j].probability);
        view.a.push_back(box.prizes[j].agent_value);
    }
    view.phi0 = fair_cap(box, std::vector<double>(box.prizes.size(), 0.0));
    return view;
}

double iid_mass_below(const IidView& view, double x) {
    double mass = 0.0;
    for (std::size_t j = 0; j < view.a.size(); ++j)
        if (view.a[j] <= x + EPS) mass += view.q[j];
    return mass;
}

double iid_lift_payment(const IidView& view, double x) {
    double rest = 0.0;
    for (std::size_t j = 0; j < view.a.size(); ++j) rest += view.q[j] * std::max(0.0, view.a[j] - x);
    return x - view.a0 + (view.cost - rest) / view.p;
}

namespace {

void push_unique(std::vector<double>& xs, double x) {
    for (double y : xs)
        if (std::abs(x - y) <= EPS) return;
    xs.push_back(x);
}

// Payments for boxes at the basic cap: none, up to some a_j <= phi0, or up
// to phi0 itself. Only available when a0 < phi0.
std::vector<double> basic_payments(const IidView& view) {
    std::vector<double> out{0.0};
    if (view.a0 < view.phi0 - EPS) {
        for (double a : view.a)
            if (a > view.a0 + EPS && a <= view.phi0 + EPS && a - view.a0 <= view.v + EPS)
                push_unique(out, std::min(a - view.a0, view.v));
        if (view.phi0 - view.a0 <= view.v + EPS) push_unique(out, std::min(view.phi0 - view.a0, view.v));
    }
    return out;
}

std::vector<double> lifted_caps(const IidView& view) {
    std::vector<double> out;
    for (double a : view.a)
        if (a > view.phi0 + EPS && iid_lift_payment(view, a) <= view.v + EPS) push_unique(out, a);
    return out;
}

}  // namespace

std::vector<double> iid_candidate_payments(const IidView& view) {
    std::vector<double> out = basic_payments(view);
    for (double x : lifted_caps(view)) push_unique(out, std::min(iid_lift_payment(view, x), view.v));
    std::sort(out.begin(), out.end());
    return out;
}

Contract iid_contract(const Instance& instance, const std::vector<double>& payments) {
    const IidView view = iid_view(instance);
    if (payments.size() != instance.size()) throw ValidationError("one payment per box expected");
    Contract contract = Contract::zero(instance);
    for (std::size_t i = 0; i < instance.size(); ++i) contract.transfers[i][view.positive] = payments[i];
    return contract;
}

double phase2_success_probability(double p, double q, std::size_t n, std::size_t upto, std::size_t before) {
    const auto term = [&](std::size_t count) {
        return std::pow(q, static_cast<double>(n - count)) * std::pow(p + q, static_cast<double>(count));
    };
    return term(upto) - term(before);
}

double phase2_principal_utility(double p, const std::vector<Phase2Target>& targets, std::size_t n) {
    double total = 0.0;
    std::size_t before = 0;
    for (const Phase2Target& t : targets) {
        const std::size_t upto = before + t.count;
        total += t.principal * phase2_success_probability(p, t.mass_below, n, upto, before);
        before = upto;
    }
    return total;
}

IidResult solve_iid_single_prize(const Instance& instance, Execution exec) {
    const IidView view = iid_view(instance);
    const std::size_t n = view.n;
    IidResult out;
    if (view.p <= 0.0 || view.v <= 0.0) {
        out.payments.assign(n, 0.0);
        out.contract = Contract::zero(instance);
        out.utility = evaluate_optimal(instance, out.contract);
        out.phases.phase2_length = n;
        out.candidates = 1;
        return out;
    }

    struct Candidate {
        IidPhases phases;
        std::vector<double> payments;
    };
    std::vector<Candidate> candidates;
    const std::vector<double> caps = lifted_caps(view);
    const std::vector<double> basic = basic_payments(view);
    const bool front_ok = view.a0 < view.phi0 - EPS && view.phi0 - view.a0 <= view.v + EPS;
    const double front_payment = front_ok ? std::min(view.phi0 - view.a0, view.v) : 0.0;

    for (std::size_t k = 0; k <= n; ++k) {
        const std::vector<double> cap_choices = k == 0 ? std::vector<double>{0.0} : caps;
        for (double cap : cap_choices) {
            const double lifted_payment = k == 0 ? 0.0 : std::min(iid_lift_payment(view, cap), view.v);
            const std::size_t front_max = front_ok ? n - k : 0;
            for (std::size_t front = 0; front <= front_max; ++front) {
                const std::size_t rest = n - k - front;
                const std::vector<double> tails = rest == 0 ? std::vector<double>{0.0} : basic;
                for (double t2 : tails) {
                    Candidate c;
                    c.phases = {k, front, k + front, rest, k == 0 ? 0.0 : cap, lifted_payment,
                                front == 0 ? 0.0 : front_payment, rest == 0 ? 0.0 : t2};
                    c.payments.assign(k, lifted_payment);
                    c.payments.insert(c.payments.end(), front, front_payment);
                    c.payments.insert(c.payments.end(), rest, t2);
                    candidates.push_back(std::move(c));
                }
            }
        }
    }

    const std::size_t count = candidates.size();
    std::vector<UtilityPair> utility(count);
    std::vector<double> error(count, -1.0);
    const auto score = [&](std::size_t c) {
        const Candidate& cand = candidates[c];
        const Contract contract = iid_contract(instance, cand.payments);
        const ExactEvaluation exact = evaluate_exact_detail(instance, contract, optimal_policy(instance, contract));
        utility[c] = exact.utility;
        const IidPhases& ph = cand.phases;
        const double target = view.a0 + ph.phase2_payment;
        if (ph.phase2_length > 0 && target < view.phi0 - EPS && view.v - ph.phase2_payment > EPS &&
            (ph.front == 0 || view.v - ph.front_payment > EPS)) {
            double observed = 0.0;
            for (std::size_t i = ph.phase1_length; i < n; ++i) observed += exact.selection[i][view.positive];
            const double closed =
                phase2_success_probability(view.p, iid_mass_below(view, target), n, ph.phase2_length, 0);
            error[c] = std::abs(observed - closed);
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(count); ++c) score(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < count; ++c) score(c);
    }

    std::size_t best = 0;
    for (std::size_t c = 0; c < count; ++c) {
        if (error[c] >= 0.0) {
            ++out.closed_form_checks;
            out.closed_form_error = std::max(out.closed_form_error, error[c]);
        }
        if (c == 0) continue;
        const double gain = utility[c].principal - utility[best].principal;
        if (gain > EPS || (gain >= -EPS && candidates[c].phases.phase1_length > candidates[best].phases.phase1_length))
            best = c;
    }
    out.candidates = count;
    out.phases = candidates[best].phases;
    out.payments = candidates[best].payments;
    out.contract = iid_contract(instance, out.payments);
    out.utility = utility[best];
    return out;
}

}  // namespace excon
