#include "excon/instance.hpp"

#include "excon/numeric.hpp"
#include "excon/rng.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace excon {

namespace {

std::string fmt_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

bool is_zero_prize(const Prize& prize) {
    return prize.agent_value == 0.0 && prize.principal_value == 0.0;
}

bool same_box(const Box& x, const Box& y) {
    if (!approx_equal(x.cost, y.cost) || x.prizes.size() != y.prizes.size()) return false;
    for (std::size_t j = 0; j < x.prizes.size(); ++j) {
        const Prize& p = x.prizes[j];
        const Prize& q = y.prizes[j];
        if (!approx_equal(p.probability, q.probability) || !approx_equal(p.agent_value, q.agent_value) ||
            !approx_equal(p.principal_value, q.principal_value)) {
            return false;
        }
    }
    return true;
}

void validate_binary(const Instance& instance, std::vector<std::string>& out) {
    for (std::size_t i = 0; i < instance.size(); ++i) {
        std::vector<const Prize*> live;
        for (const Prize& prize : instance.boxes[i].prizes) {
            if (prize.probability > 0.0) live.push_back(&prize);
        }
        const std::string where = "box " + std::to_string(i) + ": ";
        if (live.size() > 2) {
            out.push_back(where + "binary box has " + std::to_string(live.size()) +
                          " prizes with positive probability");
        } else if (live.size() == 2 && !is_zero_prize(*live[0]) && !is_zero_prize(*live[1])) {
            out.push_back(where + "binary box has no 0-prize (agent and principal value 0)");
        }
    }
}

void validate_iid(const Instance& instance, std::vector<std::string>& out) {
    for (std::size_t i = 1; i < instance.size(); ++i) {
        if (!same_box(instance.boxes[0], instance.boxes[i])) {
            out.push_back("box " + std::to_string(i) + ": i.i.d. box differs from box 0");
        }
    }
    for (std::size_t i = 0; i < instance.size(); ++i) {
        std::size_t positive = 0;
        for (const Prize& prize : instance.boxes[i].prizes) {
            if (prize.probability > 0.0 && prize.principal_value > 0.0) ++positive;
        }
        if (positive != 1) {
            out.push_back("box " + std::to_string(i) + ": i.i.d. box needs exactly one prize with positive principal value, has " +
                          std::to_string(positive));
        }
    }
}

}  // namespace

std::string_view to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::General: return "general";
        case InstanceKind::Binary: return "binary";
        case InstanceKind::IidSinglePrize: return "iid_single_prize";
    }
    return "general";
}

InstanceKind parse_kind(std::string_view name) {
    if (name == "general") return InstanceKind::General;
    if (name == "binary") return InstanceKind::Binary;
    if (name == "iid_single_prize" || name == "iid") return InstanceKind::IidSinglePrize;
    throw ValidationError("unsupported instance kind '" + std::string(name) + "'");
}

Contract Contract::zero(const Instance& instance) {
    Contract contract;
    contract.transfers.reserve(instance.size());
    for (const Box& box : instance.boxes) contract.transfers.emplace_back(box.prizes.size(), 0.0);
    return contract;
}

Contract Contract::linear(const Instance& instance, double alpha) {
    Contract contract;
    contract.transfers.reserve(instance.size());
    for (const Box& box : instance.boxes) {
        std::vector<double> row;
        row.reserve(box.prizes.size());
        for (const Prize& prize : box.prizes) row.push_back(alpha * prize.principal_value);
        contract.transfers.push_back(std::move(row));
    }
    return contract;
}

std::vector<std::string> validate(const Instance& instance) {
    std::vector<std::string> out;
    if (instance.boxes.empty()) {
        out.emplace_back("instance: needs at least one box");
        return out;
    }
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const Box& box = instance.boxes[i];
        const std::string where = "box " + std::to_string(i);
        if (!std::isfinite(box.cost) || box.cost < 0.0) out.push_back(where + ": cost must be finite and >= 0");
        if (box.prizes.empty()) {
            out.push_back(where + ": has no prizes");
            continue;
        }
        double total = 0.0;
        for (std::size_t j = 0; j < box.prizes.size(); ++j) {
            const Prize& prize = box.prizes[j];
            const std::string at = where + " prize " + std::to_string(j);
            if (!(prize.probability >= 0.0 && prize.probability <= 1.0)) out.push_back(at + ": probability outside [0,1]");
            if (!std::isfinite(prize.agent_value) || prize.agent_value < 0.0) out.push_back(at + ": agent value must be >= 0");
            if (!std::isfinite(prize.principal_value) || prize.principal_value < 0.0)
                out.push_back(at + ": principal value must be >= 0");
            total += prize.probability;
        }
        if (!approx_equal(total, 1.0)) out.push_back(where + ": probabilities sum to " + fmt_num(total));
    }
    if (instance.kind == InstanceKind::Binary) validate_binary(instance, out);
    if (instance.kind == InstanceKind::IidSinglePrize) validate_iid(instance, out);
    return out;
}

std::vector<std::string> validate(const Instance& instance, const Contract& contract) {
    std::vector<std::string> out;
    if (contract.transfers.size() != instance.size()) {
        out.push_back("contract: has " + std::to_string(contract.transfers.size()) + " rows, instance has " +
                      std::to_string(instance.size()) + " boxes");
        return out;
    }
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const auto& prizes = instance.boxes[i].prizes;
        const auto& row = contract.transfers[i];
        if (row.size() != prizes.size()) {
            out.push_back("contract row " + std::to_string(i) + ": has " + std::to_string(row.size()) +
                          " transfers, box has " + std::to_string(prizes.size()) + " prizes");
            continue;
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            const std::string at = "contract " + std::to_string(i) + "." + std::to_string(j);
            if (!std::isfinite(row[j]) || row[j] < 0.0) out.push_back(at + ": transfer must be >= 0");
            else if (row[j] > prizes[j].principal_value + EPS)
                out.push_back(at + ": transfer " + fmt_num(row[j]) + " exceeds principal value " +
                              fmt_num(prizes[j].principal_value));
        }
    }
    return out;
}

namespace {
[[noreturn]] void throw_violations(const std::vector<std::string>& violations) {
    std::ostringstream msg;
    for (std::size_t k = 0; k < violations.size(); ++k) msg << (k ? "; " : "") << violations[k];
    throw ValidationError(msg.str());
}
}  // namespace

void require_valid(const Instance& instance) {
    if (auto v = validate(instance); !v.empty()) throw_violations(v);
}

void require_valid(const Instance& instance, const Contract& contract) {
    if (auto v = validate(instance, contract); !v.empty()) throw_violations(v);
}

Instance normalized(Instance instance) {
    for (Box& box : instance.boxes) {
        std::erase_if(box.prizes, [](const Prize& p) { return p.probability == 0.0; });
    }
    if (instance.kind != InstanceKind::IidSinglePrize) return instance;
    for (Box& box : instance.boxes) {
        std::vector<Prize> merged;
        for (const Prize& prize : box.prizes) {
            bool absorbed = false;
            if (prize.principal_value == 0.0) {
                for (Prize& kept : merged) {
                    if (kept.principal_value == 0.0 && approx_equal(kept.agent_value, prize.agent_value)) {
                        kept.probability += prize.probability;
                        absorbed = true;
                        break;
                    }
                }
            }
            if (!absorbed) merged.push_back(prize);
        }
        box.prizes = std::move(merged);
    }
    return instance;
}

namespace {

std::vector<double> dirichlet(CounterRng& rng, std::size_t m) {
    std::vector<double> w(m);
    double total = 0.0;
    for (double& x : w) {
        x = rng.exponential();
        total += x;
    }
    if (total <= 0.0) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(m));
        return w;
    }
    for (double& x : w) x /= total;
    // Absorb the rounding residue so the sum check sees exactly 1 up to ulps.
    double rest = 1.0;
    for (std::size_t j = 0; j + 1 < m; ++j) rest -= w[j];
    w[m - 1] = rest;
    return w;
}

}  // namespace

Instance gen_random(std::size_t n, std::size_t m, std::uint64_t seed, InstanceKind kind) {
    if (n == 0 || m == 0) throw ValidationError("gen_random: n and m must be >= 1");
    CounterRng rng(seed, static_cast<std::uint64_t>(kind));
    Instance instance;
    instance.kind = kind;
    switch (kind) {
        case InstanceKind::General:
            for (std::size_t i = 0; i < n; ++i) {
                Box box;
                box.cost = rng.uniform(0.0, 2.0);
                const auto probs = dirichlet(rng, m);
                for (std::size_t j = 0; j < m; ++j) {
                    const double a = rng.uniform(0.0, 10.0);
                    const double b = rng.uniform(0.0, 10.0);
                    box.prizes.push_back({probs[j], a, b});
                }
                instance.boxes.push_back(std::move(box));
            }
            break;
        case InstanceKind::Binary:
            for (std::size_t i = 0; i < n; ++i) {
                Box box;
                box.cost = rng.uniform(0.0, 2.0);
                const auto probs = dirichlet(rng, 2);
                const double a = rng.uniform(0.0, 10.0);
                const double b = rng.uniform(0.0, 10.0);
                box.prizes.push_back({probs[0], a, b});
                box.prizes.push_back({probs[1], 0.0, 0.0});
                instance.boxes.push_back(std::move(box));
            }
            break;
        case InstanceKind::IidSinglePrize: {
            Box box;
            box.cost = rng.uniform(0.0, 2.0);
            const auto probs = dirichlet(rng, m + 1);
            const double a0 = rng.uniform(0.0, 10.0);
            const double b0 = 10.0 - rng.uniform(0.0, 10.0);  // (0, 10]
            box.prizes.push_back({probs[0], a0, b0});
            for (std::size_t j = 1; j <= m; ++j) box.prizes.push_back({probs[j], rng.uniform(0.0, 10.0), 0.0});
            instance.boxes.assign(n, box);
            break;
        }
    }
    return normalized(std::move(instance));
}

Instance gen_linear_gap_family(std::size_t n) {
    if (n < 2) throw ValidationError("gen_linear_gap_family: n must be >= 2");
    Instance instance;
    instance.kind = InstanceKind::General;
    double prev_reward = 0.0;
    double prev_cost = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double reward = std::ldexp(1.0, static_cast<int>(i));
        const double alpha = 1.0 - std::ldexp(1.0, -static_cast<int>(i));
        const double cost = prev_cost + alpha * (reward - prev_reward);
        instance.boxes.push_back(Box{cost, {Prize{1.0, 0.0, reward}}});
        prev_reward = reward;
        prev_cost = cost;
    }
    return instance;
}

IidExample gen_paper_example_iid(std::size_t n, std::size_t k) {
    if (n < 2 || k < 1 || k + 1 > n) throw ValidationError("gen_paper_example_iid: need 1 <= k <= n-1");
    const double nn = static_cast<double>(n);
    const double xk = std::pow(1.0 - 1.0 / nn, static_cast<double>(k));
    IidExample ex;
    ex.alpha = xk / (1.0 - xk);
    Box box;
    box.cost = 1.0 / nn;
    box.prizes.push_back({1.0 / nn, 0.0, 1.0 + ex.alpha});
    box.prizes.push_back({1.0 / nn, 2.0, 0.0});
    box.prizes.push_back({1.0 - 2.0 / nn, 0.0, 0.0});
    ex.instance.kind = InstanceKind::IidSinglePrize;
    ex.instance.boxes.assign(n, box);
    // n = 2 leaves prize 2 with probability 0.
    ex.instance = normalized(std::move(ex.instance));
    return ex;
}

}  // namespace excon
