#include "excon/linear.hpp"
#include "excon/oracle.hpp"
#include "excon/policy_io.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace excon;
using namespace excon::testing;

namespace {

std::vector<double> scaled(const Box& box, double alpha) {
    std::vector<double> t;
    for (const Prize& p : box.prizes) t.push_back(alpha * p.principal_value);
    return t;
}

bool has_alpha(const std::vector<CriticalValue>& cv, double alpha) {
    for (const CriticalValue& c : cv)
        if (std::abs(c.alpha - alpha) <= 1e-9) return true;
    return false;
}

}  // namespace

TEST_SUITE("linear_contracts") {

TEST_CASE("single sure prize gives one segment") {
    const Box box{1.0, {{1.0, 2.0, 3.0}}};
    const FairCapCurve curve = build_faircap_curve(box);
    REQUIRE(curve.segments.size() == 1);
    CHECK(curve.segments[0].slope == doctest::Approx(3.0));
    CHECK(curve.segments[0].intercept == doctest::Approx(1.0));
}

TEST_CASE("zero principal values give a flat curve") {
    const Box box{1.0, {{0.5, 4.0, 0.0}, {0.5, 1.0, 0.0}}};
    const FairCapCurve curve = build_faircap_curve(box);
    REQUIRE(curve.segments.size() == 1);
    CHECK(curve.segments[0].slope == 0.0);
    CHECK(curve.at(0.3) == doctest::Approx(fair_cap(box, {0.0, 0.0})));
}

TEST_CASE("curves need a positive cost") {
    CHECK_THROWS_AS(build_faircap_curve(Box{0.0, {{1.0, 1.0, 1.0}}}), ValidationError);
}

TEST_CASE("curves are convex, short and exact") {
    CounterRng rng(17, 0);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Instance in = gen_random(1, 1 + seed % 6, seed, InstanceKind::General);
        const Box& box = in.boxes[0];
        if (box.cost <= 0.0) continue;
        const FairCapCurve curve = build_faircap_curve(box);
        CHECK(curve.segments.size() <= 2 * box.prizes.size() + 1);
        CHECK(curve.segments.front().lo == 0.0);
        CHECK(curve.segments.back().hi == 1.0);
        for (std::size_t k = 1; k < curve.segments.size(); ++k) {
            CHECK(curve.segments[k].slope >= curve.segments[k - 1].slope);
            CHECK(curve.segments[k].lo == curve.segments[k - 1].hi);
        }
        for (int s = 0; s < 100; ++s) {
            const double alpha = rng.uniform();
            CHECK(std::abs(curve.at(alpha) - fair_cap(box, scaled(box, alpha))) <= 1e-9);
        }
    }
}

TEST_CASE("active sets hold the prizes at or above the cap") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Instance in = gen_random(1, 4, seed, InstanceKind::General);
        const Box& box = in.boxes[0];
        if (box.cost <= 0.0) continue;
        for (const CapSegment& seg : build_faircap_curve(box).segments) {
            const double mid = 0.5 * (seg.lo + seg.hi);
            for (std::size_t j = 0; j < box.prizes.size(); ++j) {
                const double v = box.prizes[j].agent_value + mid * box.prizes[j].principal_value;
                const bool listed = std::find(seg.active.begin(), seg.active.end(), j) != seg.active.end();
                if (v > seg.at(mid) + 1e-9) CHECK(listed);
                if (v < seg.at(mid) - 1e-9) CHECK_FALSE(listed);
            }
        }
    }
}

TEST_CASE("one box with one prize") {
    Instance in;
    in.boxes.push_back({1.0, {{1.0, 0.5, 2.0}}});
    const auto cv = critical_values(in);
    REQUIRE(cv.size() == 3);
    CHECK(cv[0].alpha == 0.0);
    CHECK(cv[1].alpha == doctest::Approx(0.25));
    CHECK(cv[1].kind == CriticalKind::CapZero);
    CHECK(cv[2].alpha == 1.0);
}

TEST_CASE("identical curves add no cap crossing") {
    Instance in;
    in.boxes.push_back({1.0, {{0.5, 4.0, 2.0}, {0.5, 0.0, 0.0}}});
    in.boxes.push_back(in.boxes[0]);
    for (const CriticalValue& c : critical_values(in)) CHECK(c.kind != CriticalKind::CapCap);
}

TEST_CASE("critical values are sorted and cover the endpoints") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto cv = critical_values(gen_random(4, 3, seed, InstanceKind::General));
        CHECK(cv.front().alpha == 0.0);
        CHECK(cv.back().alpha == 1.0);
        for (std::size_t k = 1; k < cv.size(); ++k) CHECK(cv[k].alpha > cv[k - 1].alpha + EPS);
    }
}

TEST_CASE("crossing caps are detected") {
    Instance in;
    in.boxes.push_back({1.0, {{1.0, 3.0, 0.0}}});
    in.boxes.push_back({1.0, {{1.0, 1.0, 4.0}}});
    CHECK(has_alpha(critical_values(in), 0.5));
}

TEST_CASE("policy structure is constant between critical values") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Instance in = gen_random(1 + seed % 5, 1 + seed % 3, 500 + seed, InstanceKind::General);
        const auto cv = critical_values(in);
        for (std::size_t k = 0; k + 1 < cv.size(); ++k) {
            const double lo = cv[k].alpha, hi = cv[k + 1].alpha;
            if (hi - lo < 1e-6) continue;
            const auto structure = [&](double alpha) {
                nlohmann::json p = to_json(optimal_policy(in, Contract::linear(in, alpha)));
                for (auto& phase : p["phases"]) {
                    phase.erase("cap");
                    phase.erase("stop_above");
                }
                return p;
            };
            const auto first = structure(lo + (hi - lo) / 6.0);
            for (int s = 2; s <= 5; ++s) CHECK(structure(lo + (hi - lo) * s / 6.0) == first);
        }
    }
}

TEST_CASE("alpha zero when payments are never needed") {
    Instance in;
    in.boxes.push_back({1.0, {{0.5, 10.0, 3.0}, {0.5, 6.0, 1.0}}});
    in.boxes.push_back({0.5, {{1.0, 5.0, 2.0}}});
    const LinearResult r = optimal_linear(in);
    CHECK(r.alpha == 0.0);
}

TEST_CASE("box opened only under full sharing") {
    Instance in;
    in.boxes.push_back({1.0, {{1.0, 0.0, 1.0}}});
    CHECK(optimal_policy(in, Contract::linear(in, 1.0)).phases.size() == 1);
    CHECK(optimal_policy(in, Contract::linear(in, 0.99)).phases.empty());
    CHECK(evaluate_linear(in, 1.0).principal == 0.0);
    // Utility is 0 everywhere, so the smallest alpha wins the tie.
    const LinearResult r = optimal_linear(in);
    CHECK(r.alpha == 0.0);
    CHECK(r.utility.principal == 0.0);
}

TEST_CASE("optimal linear contract beats a grid") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        CounterRng rng(seed, 5);
        const Instance in = gen_random(rand_between(rng, 1, 5), rand_between(rng, 1, 3), 900 + seed, InstanceKind::General);
        const LinearResult r = optimal_linear(in);
        const GridResult g = grid_search_linear(in, 1e-3);
        CHECK(r.utility.principal >= g.utility.principal - 1e-6);
        CHECK(r.contract.transfers == Contract::linear(in, r.alpha).transfers);
    }
}

TEST_CASE("utility is linear in one minus alpha inside an interval") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Instance in = gen_random(1 + seed % 5, 1 + seed % 3, 700 + seed, InstanceKind::General);
        const auto cv = critical_values(in);
        for (std::size_t k = 0; k + 1 < cv.size(); ++k) {
            const double lo = cv[k].alpha, hi = cv[k + 1].alpha;
            if (hi - lo < 1e-6) continue;
            double x[3], y[3];
            for (int s = 0; s < 3; ++s) {
                x[s] = lo + (hi - lo) * (s + 1) / 4.0;
                y[s] = evaluate_linear(in, x[s]).principal;
            }
            const double cross = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
            CHECK(std::abs(cross) <= 1e-7);
        }
    }
}

TEST_CASE("sweep grid and CSV") {
    CHECK(alpha_grid(0.5) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(alpha_grid(0.3).back() == 1.0);
    CHECK(alpha_grid(0.3).size() == 5);
    CHECK_THROWS_AS(alpha_grid(0.0), ValidationError);
    CHECK_THROWS_AS(alpha_grid(1.5), ValidationError);
    Instance in;
    in.boxes.push_back({1.0, {{1.0, 0.5, 2.0}}});
    const auto rows = alpha_sweep(in, 0.5);
    REQUIRE(rows.size() == 3);
    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("alpha,agent_utility,principal_utility\n0,", 0) == 0);
    CHECK(csv.find("\n0.5,0.5,1\n") != std::string::npos);
}

TEST_CASE("sweep never beats the optimum and is monotone between critical values") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Instance in = gen_random(3, 2, 300 + seed, InstanceKind::General);
        const LinearResult best = optimal_linear(in);
        const auto rows = alpha_sweep(in, 0.01);
        const auto cv = critical_values(in);
        for (const SweepRow& r : rows) CHECK(r.utility.principal <= best.utility.principal + 1e-6);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            bool same_interval = true;
            for (const CriticalValue& c : cv)
                if (c.alpha >= rows[k - 1].alpha - EPS && c.alpha <= rows[k].alpha + EPS) same_interval = false;
            if (same_interval) CHECK(rows[k].utility.principal <= rows[k - 1].utility.principal + 1e-9);
        }
    }
}

TEST_CASE("serial and parallel evaluation agree") {
    const Instance in = gen_random(5, 3, 77, InstanceKind::General);
    const LinearResult s = optimal_linear(in, Execution::Serial);
    const LinearResult p = optimal_linear(in, Execution::Parallel);
    CHECK(s.alpha == p.alpha);
    CHECK(s.utility.principal == p.utility.principal);
    CHECK(sweep_csv(alpha_sweep(in, 0.01, Execution::Serial)) == sweep_csv(alpha_sweep(in, 0.01, Execution::Parallel)));
}

}
