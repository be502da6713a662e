#include "excon/policy_io.hpp"

#include <string>

namespace excon {

using nlohmann::json;

std::string_view to_string(PrizeAction action) {
    switch (action) {
        case PrizeAction::StopAndTake: return "STOP_AND_TAKE";
        case PrizeAction::Continue: return "CONTINUE";
        case PrizeAction::NeverTakeYet: return "NEVER_TAKE_YET";
    }
    return "CONTINUE";
}

PrizeAction parse_action(std::string_view name) {
    if (name == "STOP_AND_TAKE") return PrizeAction::StopAndTake;
    if (name == "CONTINUE") return PrizeAction::Continue;
    if (name == "NEVER_TAKE_YET") return PrizeAction::NeverTakeYet;
    throw ParseError("unknown prize action '" + std::string(name) + "'");
}

namespace {

json action_map(const ResolvedPolicy& policy, const std::vector<std::size_t>& boxes) {
    json out = json::object();
    for (std::size_t i : boxes)
        for (std::size_t j = 0; j < policy.action[i].size(); ++j)
            out[std::to_string(i) + "." + std::to_string(j)] = std::string(to_string(policy.action[i][j]));
    return out;
}

std::vector<std::size_t> indices(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_array()) throw ParseError(std::string("policy.") + key + ": expected an array");
    return it->get<std::vector<std::size_t>>();
}

}  // namespace

json to_json(const ResolvedPolicy& policy) {
    json phases = json::array();
    for (const PolicyPhase& phase : policy.phases) {
        std::vector<std::size_t> boxes;
        std::vector<double> stop_above;
        for (const PolicyStep& step : phase.steps) {
            boxes.push_back(step.box);
            stop_above.push_back(step.stop_above);
        }
        phases.push_back({{"cap", phase.cap},
                          {"boxes", boxes},
                          {"stop_above", stop_above},
                          {"actions", action_map(policy, boxes)}});
    }
    return {{"zero_cost", policy.zero_cost},
            {"zero_cost_actions", action_map(policy, policy.zero_cost)},
            {"phases", std::move(phases)},
            {"never_opened", policy.never_opened}};
}

ResolvedPolicy policy_from_json(const json& doc, const Instance& instance) {
    if (!doc.is_object()) throw ParseError("policy: expected an object");
    ResolvedPolicy policy;
    policy.action.resize(instance.size());
    for (std::size_t i = 0; i < instance.size(); ++i)
        policy.action[i].assign(instance.boxes[i].prizes.size(), PrizeAction::NeverTakeYet);

    const auto read_actions = [&](const json& actions) {
        if (!actions.is_object()) throw ParseError("policy actions: expected an object");
        for (auto it = actions.begin(); it != actions.end(); ++it) {
            const std::string& key = it.key();
            const auto dot = key.find('.');
            if (dot == std::string::npos) throw ParseError("policy action key '" + key + "' is not box.prize");
            const std::size_t i = std::stoul(key.substr(0, dot));
            const std::size_t j = std::stoul(key.substr(dot + 1));
            if (i >= instance.size() || j >= instance.boxes[i].prizes.size())
                throw StructureError("policy action key '" + key + "' out of range");
            policy.action[i][j] = parse_action(it.value().get<std::string>());
        }
    };

    policy.zero_cost = indices(doc, "zero_cost");
    policy.never_opened = indices(doc, "never_opened");
    if (doc.contains("zero_cost_actions")) read_actions(doc.at("zero_cost_actions"));
    const json& phases = doc.at("phases");
    for (const json& p : phases) {
        PolicyPhase phase;
        phase.cap = p.at("cap").get<double>();
        const auto boxes = indices(p, "boxes");
        const auto stop_above = p.at("stop_above").get<std::vector<double>>();
        if (stop_above.size() != boxes.size()) throw StructureError("policy phase: boxes and stop_above differ in length");
        for (std::size_t k = 0; k < boxes.size(); ++k) phase.steps.push_back({boxes[k], stop_above[k]});
        read_actions(p.at("actions"));
        policy.phases.push_back(std::move(phase));
    }
    check_policy(instance, policy);
    return policy;
}

}  // namespace excon
