#include "excon/linear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>

namespace excon {

double FairCapCurve::at(double alpha) const {
    for (const CapSegment& s : segments)
        if (alpha <= s.hi) return s.at(alpha);
    return segments.back().at(alpha);
}

namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<std::size_t> active;

    double at(double alpha) const { return slope * alpha + intercept; }
};

std::vector<double> sorted_unique(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs)
        if (out.empty() || x - out.back() > EPS) out.push_back(x);
    return out;
}

}  // namespace

FairCapCurve build_faircap_curve(const Box& box, std::size_t index) {
    if (!(box.cost > 0.0)) throw ValidationError("fair cap curve needs a positive opening cost");
    std::vector<std::size_t> live;
    for (std::size_t j = 0; j < box.prizes.size(); ++j)
        if (box.prizes[j].probability > 0.0) live.push_back(j);
    const auto a = [&](std::size_t j) { return box.prizes[j].agent_value; };
    const auto b = [&](std::size_t j) { return box.prizes[j].principal_value; };

    std::vector<double> cuts{0.0, 1.0};
    for (std::size_t x = 0; x < live.size(); ++x) {
        for (std::size_t y = x + 1; y < live.size(); ++y) {
            const double db = b(live[x]) - b(live[y]);
            if (db == 0.0) continue;
            const double alpha = (a(live[y]) - a(live[x])) / db;
            if (alpha > 0.0 && alpha < 1.0) cuts.push_back(alpha);
        }
    }
    cuts = sorted_unique(std::move(cuts));

    std::vector<Line> lines;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        std::vector<std::size_t> order = live;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return a(x) + mid * b(x) > a(y) + mid * b(y);
        });
        double mass = 0.0, sa = 0.0, sb = 0.0;
        for (std::size_t s = 0; s < order.size(); ++s) {
            const double p = box.prizes[order[s]].probability;
            mass += p;
            sa += p * a(order[s]);
            sb += p * b(order[s]);
            Line line{sb / mass, (sa - box.cost) / mass, {order.begin(), order.begin() + s + 1}};
            std::sort(line.active.begin(), line.active.end());
            const bool duplicate = std::any_of(lines.begin(), lines.end(), [&](const Line& o) {
                return std::abs(o.slope - line.slope) <= 1e-12 && std::abs(o.intercept - line.intercept) <= 1e-12;
            });
            if (!duplicate) lines.push_back(std::move(line));
        }
    }

    // Walk the upper envelope from alpha = 0.
    constexpr double TINY = 1e-12;
    std::size_t cur = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const double dv = lines[k].at(0.0) - lines[cur].at(0.0);
        if (dv > TINY || (dv >= -TINY && lines[k].slope > lines[cur].slope)) cur = k;
    }
    FairCapCurve curve;
    curve.box = index;
    double pos = 0.0;
    while (true) {
        double next = 2.0;
        std::size_t pick = cur;
        for (std::size_t k = 0; k < lines.size(); ++k) {
            if (lines[k].slope <= lines[cur].slope + TINY) continue;
            const double x = (lines[cur].intercept - lines[k].intercept) / (lines[k].slope - lines[cur].slope);
            if (x < next - TINY || (x <= next + TINY && lines[k].slope > lines[pick].slope)) {
                next = std::min(next, x);
                pick = k;
            }
        }
        if (pick == cur || next >= 1.0) break;
        if (next > pos + TINY) {
            curve.segments.push_back({pos, next, lines[cur].slope, lines[cur].intercept, lines[cur].active});
            pos = next;
        }
        cur = pick;
    }
    curve.segments.push_back({pos, 1.0, lines[cur].slope, lines[cur].intercept, lines[cur].active});
    return curve;
}

std::string_view to_string(CriticalKind kind) {
    switch (kind) {
        case CriticalKind::Endpoint: return "endpoint";
        case CriticalKind::CapCap: return "cap_cap";
        case CriticalKind::ValueCap: return "value_cap";
        case CriticalKind::CapZero: return "cap_zero";
        case CriticalKind::ValueValue: return "value_value";
    }
    return "endpoint";
}

namespace {

// Zeros of the affine difference d on [lo, hi] given its end values.
void add_zeros(std::vector<CriticalValue>& out, double lo, double hi, double dlo, double dhi, CriticalKind kind) {
    const bool zlo = std::abs(dlo) <= EPS;
    const bool zhi = std::abs(dhi) <= EPS;
    if (zlo && zhi) return;
    if (zlo) out.push_back({lo, kind});
    if (zhi) out.push_back({hi, kind});
    if (!zlo && !zhi && (dlo < 0.0) != (dhi < 0.0)) out.push_back({lo + (hi - lo) * dlo / (dlo - dhi), kind});
}

std::vector<double> merged_breaks(const FairCapCurve& x, const FairCapCurve& y) {
    std::vector<double> cuts{0.0, 1.0};
    for (const auto* c : {&x, &y})
        for (const CapSegment& s : c->segments) cuts.push_back(s.hi);
    return sorted_unique(std::move(cuts));
}

}  // namespace

std::vector<CriticalValue> critical_values(const Instance& instance) {
    std::vector<CriticalValue> out{{0.0, CriticalKind::Endpoint}, {1.0, CriticalKind::Endpoint}};
    std::vector<FairCapCurve> curves;
    for (std::size_t i = 0; i < instance.size(); ++i)
        if (instance.boxes[i].cost > 0.0) curves.push_back(build_faircap_curve(instance.boxes[i], i));

    struct ValueLine {
        std::size_t box;
        double a, b;
    };
    std::vector<ValueLine> values;
    for (std::size_t i = 0; i < instance.size(); ++i)
        for (const Prize& p : instance.boxes[i].prizes)
            if (p.probability > 0.0) values.push_back({i, p.agent_value, p.principal_value});

    for (std::size_t x = 0; x < curves.size(); ++x) {
        for (std::size_t y = x + 1; y < curves.size(); ++y) {
            const auto cuts = merged_breaks(curves[x], curves[y]);
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                const double lo = cuts[k], hi = cuts[k + 1];
                add_zeros(out, lo, hi, curves[x].at(lo) - curves[y].at(lo), curves[x].at(hi) - curves[y].at(hi),
                          CriticalKind::CapCap);
            }
        }
    }
    for (const FairCapCurve& curve : curves) {
        for (const CapSegment& s : curve.segments) {
            add_zeros(out, s.lo, s.hi, s.at(s.lo), s.at(s.hi), CriticalKind::CapZero);
            for (const ValueLine& v : values)
                add_zeros(out, s.lo, s.hi, v.a + s.lo * v.b - s.at(s.lo), v.a + s.hi * v.b - s.at(s.hi),
                          CriticalKind::ValueCap);
        }
    }
    for (std::size_t x = 0; x < values.size(); ++x)
        for (std::size_t y = x + 1; y < values.size(); ++y)
            if (values[x].box != values[y].box)
                add_zeros(out, 0.0, 1.0, values[x].a - values[y].a, values[x].a + values[x].b - values[y].a - values[y].b,
                          CriticalKind::ValueValue);

    for (CriticalValue& c : out) c.alpha = std::clamp(c.alpha, 0.0, 1.0);
    std::stable_sort(out.begin(), out.end(),
                     [](const CriticalValue& x, const CriticalValue& y) { return x.alpha < y.alpha; });
    std::vector<CriticalValue> merged;
    for (const CriticalValue& c : out)
        if (merged.empty() || c.alpha - merged.back().alpha > EPS) merged.push_back(c);
    if (merged.back().alpha < 1.0) merged.back() = {1.0, CriticalKind::Endpoint};
    return merged;
}

UtilityPair evaluate_linear(const Instance& instance, double alpha) {
    return evaluate_optimal(instance, Contract::linear(instance, alpha));
}

LinearResult optimal_linear(const Instance& instance, Execution exec) {
    LinearResult out;
    out.critical = critical_values(instance);
    const std::size_t count = out.critical.size();
    std::vector<UtilityPair> utility(count);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(count); ++k)
            utility[k] = evaluate_linear(instance, out.critical[k].alpha);
    } else {
        for (std::size_t k = 0; k < count; ++k) utility[k] = evaluate_linear(instance, out.critical[k].alpha);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < count; ++k)
        if (utility[k].principal > utility[best].principal + EPS) best = k;
    out.alpha = out.critical[best].alpha;
    out.utility = utility[best];
    out.contract = Contract::linear(instance, out.alpha);
    return out;
}

std::vector<double> alpha_grid(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw ValidationError("grid step must lie in (0, 1]");
    const auto count = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
    std::vector<double> grid;
    for (std::size_t k = 0; k <= count; ++k) grid.push_back(std::min(1.0, static_cast<double>(k) * step));
    if (grid.back() < 1.0 - EPS)
        grid.push_back(1.0);
    else
        grid.back() = 1.0;
    return grid;
}

std::vector<SweepRow> alpha_sweep(const Instance& instance, double step, Execution exec) {
    const std::vector<double> grid = alpha_grid(step);
    std::vector<SweepRow> rows(grid.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(grid.size()); ++k)
            rows[k] = {grid[k], evaluate_linear(instance, grid[k])};
    } else {
        for (std::size_t k = 0; k < grid.size(); ++k) rows[k] = {grid[k], evaluate_linear(instance, grid[k])};
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "alpha,agent_utility,principal_utility\n";
    char buf[128];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", r.alpha, r.utility.agent, r.utility.principal);
        out += buf;
    }
    return out;
}

}  // namespace excon
