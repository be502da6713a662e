#include "excon/oracle.hpp"
#include "excon/policy_io.hpp"
#include "excon/tie_breaking.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace excon;
using namespace excon::testing;

namespace {

void check_matches_oracle(const Instance& in, const Contract& c) {
    const UtilityPair pipeline = evaluate_optimal(in, c);
    const UtilityPair oracle = lex_dp(in, c);
    CHECK(std::abs(pipeline.agent - oracle.agent) <= 1e-9);
    CHECK(std::abs(pipeline.principal - oracle.principal) <= 1e-9);
}

}  // namespace

TEST_SUITE("tie_breaking") {

TEST_CASE("distinct caps give singleton phases") {
    Instance in;
    for (double a : {4.0, 2.0, 6.0}) in.boxes.push_back({1.0, {{1.0, a, 1.0}}});
    const PhasePartition part = partition_phases(in, Contract::zero(in));
    REQUIRE(part.phases.size() == 3);
    CHECK(part.phases[0].boxes == std::vector<std::size_t>{2});
    CHECK(part.phases[1].boxes == std::vector<std::size_t>{0});
    CHECK(part.phases[2].boxes == std::vector<std::size_t>{1});
}

TEST_CASE("identical boxes share a phase, zero-cost and negative caps are split off") {
    Instance in;
    in.boxes.push_back({1.0, {{0.5, 4.0, 1.0}, {0.5, 0.0, 0.0}}});
    in.boxes.push_back({1.0, {{0.5, 4.0, 2.0}, {0.5, 0.0, 0.0}}});
    in.boxes.push_back({0.0, {{1.0, 1.0, 1.0}}});
    in.boxes.push_back({9.0, {{1.0, 1.0, 1.0}}});
    const PhasePartition part = partition_phases(in, Contract::zero(in));
    CHECK(part.zero_cost == std::vector<std::size_t>{2});
    CHECK(part.never_opened == std::vector<std::size_t>{3});
    REQUIRE(part.phases.size() == 1);
    CHECK(part.phases[0].boxes == std::vector<std::size_t>{0, 1});
    CHECK(part.phases[0].cap == doctest::Approx(2.0));
}

TEST_CASE("phases follow the sorted caps") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Instance in = gen_random(6, 3, seed, InstanceKind::General);
        const Contract c = random_contract(in, seed);
        const PhasePartition part = partition_phases(in, c);
        std::vector<double> listed, direct;
        for (const Phase& ph : part.phases)
            for (std::size_t i : ph.boxes) listed.push_back(fair_cap(in.boxes[i], c.transfers[i]));
        for (std::size_t i = 0; i < in.size(); ++i) {
            const double phi = fair_cap(in.boxes[i], c.transfers[i]);
            if (in.boxes[i].cost > 0.0 && phi >= -EPS) direct.push_back(phi);
        }
        std::sort(direct.begin(), direct.end(), std::greater<>());
        CHECK(listed == direct);
        for (std::size_t k = 1; k < part.phases.size(); ++k) CHECK(part.phases[k].cap < part.phases[k - 1].cap - EPS);
    }
}

TEST_CASE("tau index examples") {
    const TauResult alone = tau_index({{1.0, 5.0}});
    CHECK(alone.tau == 5.0);
    CHECK(alone.k_star == 1);
    const TauResult two = tau_index({{0.5, 0.0}, {0.5, 4.0}});
    CHECK(two.tau == doctest::Approx(2.0));
    CHECK(two.k_star == 2);
    const TauResult tie = tau_index({{0.5, 2.0}, {0.25, 2.0}, {0.25, 1.0}});
    CHECK(tie.tau == 2.0);
    CHECK(tie.k_star == 2);
    CHECK_THROWS_AS(tau_index({{0.0, 1.0}, {0.5, 2.0}}), StructureError);
    CHECK_THROWS_AS(tau_index({}), StructureError);
}

TEST_CASE("reduced boxes satisfy the fair cap identity") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Instance in = tie_heavy_instance(1, seed);
        const Box& box = in.boxes[0];
        if (box.cost <= 0.0) continue;
        const Contract c = tie_heavy_contract(in, seed);
        const double phi = fair_cap(box, c.transfers[0]);
        const ReducedBox r = reduce_box(box, c.transfers[0], phi, 0);
        double excess = 0.0;
        for (const ReducedOption& o : r.options) excess += o.probability * std::max(0.0, o.value - r.tau);
        CHECK(std::abs(excess - r.reduced_cost) <= EPS);
        CHECK(r.tau >= r.options[0].value - EPS);
        CHECK(r.reduced_cost >= -EPS);
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("no agent value and no transfers opens nothing") {
    Instance in = gen_random(4, 3, 5, InstanceKind::General);
    for (Box& box : in.boxes) {
        box.cost = std::max(box.cost, 0.1);
        for (Prize& p : box.prizes) p.agent_value = 0.0;
    }
    const Contract c = Contract::zero(in);
    const ResolvedPolicy policy = optimal_policy(in, c);
    CHECK(policy.phases.empty());
    CHECK(policy.never_opened.size() == 4);
    CHECK(evaluate_exact(in, c, policy).agent == 0.0);
}

TEST_CASE("equal boxes for the agent are ordered by principal value") {
    Instance in;
    in.boxes.push_back({1.0, {{0.5, 4.0, 1.0}, {0.5, 0.0, 0.0}}});
    in.boxes.push_back({1.0, {{0.5, 4.0, 3.0}, {0.5, 0.0, 0.0}}});
    const Contract c = Contract::zero(in);
    const ResolvedPolicy policy = optimal_policy(in, c);
    REQUIRE(policy.phases.size() == 1);
    CHECK(policy.phases[0].steps[0].box == 1);
    CHECK(policy.action[1][0] == PrizeAction::StopAndTake);
    CHECK(policy.action[1][1] == PrizeAction::NeverTakeYet);
    check_matches_oracle(in, c);
    CHECK(evaluate_exact(in, c, policy).principal == doctest::Approx(0.5 * 3.0 + 0.25 * 1.0));
}

TEST_CASE("indifferent prizes are taken when the principal prefers them") {
    // Cap 2: the value-2 prize is indifferent for the agent.
    Instance in;
    in.boxes.push_back({0.5, {{0.25, 4.0, 0.0}, {0.25, 2.0, 8.0}, {0.5, 0.0, 0.0}}});
    in.boxes.push_back({0.5, {{0.25, 4.0, 1.0}, {0.25, 2.0, 0.0}, {0.5, 0.0, 0.0}}});
    const Contract c = Contract::zero(in);
    CHECK(fair_cap(in.boxes[0], {0, 0, 0}) == doctest::Approx(2.0));
    const ResolvedPolicy policy = optimal_policy(in, c);
    CHECK(policy.action[0][1] == PrizeAction::Continue);
    check_matches_oracle(in, c);
}

TEST_CASE("pipeline matches the lexicographic oracle on random instances") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        CounterRng rng(seed, 3);
        const Instance in = gen_random(rand_between(rng, 1, 6), rand_between(rng, 1, 4), seed, InstanceKind::General);
        check_matches_oracle(in, random_contract(in, seed));
    }
}

TEST_CASE("pipeline matches the lexicographic oracle on tie-heavy instances") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Instance in = tie_heavy_instance(1 + seed % 5, seed);
        check_matches_oracle(in, tie_heavy_contract(in, seed));
        check_matches_oracle(in, Contract::zero(in));
    }
}

TEST_CASE("principal values below the cap do not change the policy") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Instance in = tie_heavy_instance(4, seed);
        const Contract c = tie_heavy_contract(in, seed);
        const ResolvedPolicy policy = optimal_policy(in, c);
        Instance bumped = in;
        for (const PolicyPhase& phase : policy.phases)
            for (const PolicyStep& step : phase.steps)
                for (std::size_t j = 0; j < in.boxes[step.box].prizes.size(); ++j)
                    if (policy.action[step.box][j] == PrizeAction::NeverTakeYet)
                        bumped.boxes[step.box].prizes[j].principal_value += 1.0 + static_cast<double>(j);
        CHECK(to_json(optimal_policy(bumped, c)) == to_json(policy));
    }
}

}
