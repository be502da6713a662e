#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace excon {

struct Prize {
    double probability = 0.0;
    double agent_value = 0.0;
    double principal_value = 0.0;
};

struct Box {
    double cost = 0.0;
    std::vector<Prize> prizes;
};

enum class InstanceKind { General, Binary, IidSinglePrize };

std::string_view to_string(InstanceKind kind);
/// Throws ValidationError for unknown names.
InstanceKind parse_kind(std::string_view name);

struct Instance {
    InstanceKind kind = InstanceKind::General;
    std::vector<Box> boxes;

    std::size_t size() const { return boxes.size(); }
};

/// Nonnegative transfer per (box, prize), shaped like the instance.
struct Contract {
    std::vector<std::vector<double>> transfers;

    static Contract zero(const Instance& instance);
    static Contract linear(const Instance& instance, double alpha);
};

struct LinearContract {
    double alpha = 0.0;

    Contract expand(const Instance& instance) const { return Contract::linear(instance, alpha); }
};

/// Human-readable invariant violations; empty means valid.
std::vector<std::string> validate(const Instance& instance);
std::vector<std::string> validate(const Instance& instance, const Contract& contract);

/// Throws ValidationError carrying every violation.
void require_valid(const Instance& instance);
void require_valid(const Instance& instance, const Contract& contract);

/// Drops zero-probability prizes; for i.i.d. instances also merges prizes
/// j >= 1 with equal agent value (lowest index kept, probabilities added).
Instance normalized(Instance instance);

/// Random instances: values in [0,10], costs in [0,2], prize probabilities
/// from normalized exponential draws (a flat Dirichlet). For `IidSinglePrize`
/// `m` counts the prizes besides the principal-positive prize 0, so boxes
/// carry m + 1 prizes. Binary boxes always have two prizes.
Instance gen_random(std::size_t n, std::size_t m, std::uint64_t seed, InstanceKind kind);

/// Reward/cost ladder on which linear contracts lose a growing factor, one
/// deterministic box per action: R_i = 2^i, alpha_i = 1 - 2^-i, c_1 = alpha_1 R_1 and
/// c_i = c_{i-1} + alpha_i (R_i - R_{i-1}). Every alpha_i yields principal
/// utility exactly 1 under a linear contract while the welfare of action i is
/// 1 + (i - 1) / 2.
Instance gen_linear_gap_family(std::size_t n);

struct IidExample {
    Instance instance;
    double alpha = 0.0;
};

/// The two-phase i.i.d. family: prize 0 (a=0, b=1+alpha, q=1/n), prize 1
/// (a=2, q=1/n), prize 2 (a=0, q=1-2/n), cost 1/n, with
/// alpha = x^k / (1 - x^k) for x = 1 - 1/n. Requires 1 <= k <= n-1.
IidExample gen_paper_example_iid(std::size_t n, std::size_t k);

}  // namespace excon
