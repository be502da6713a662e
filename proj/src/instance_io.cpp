#include "excon/instance_io.hpp"

#include "excon/numeric.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace excon {

namespace {

using nlohmann::json;

void dump_string(std::string& out, const std::string& s) {
    out += json(s).dump();
}

void dump(std::string& out, const json& value, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (value.type()) {
        case json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = value.begin(); it != value.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                dump_string(out, it.key());
                out += indent < 0 ? ":" : ": ";
                dump(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& item : value) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                dump(out, item, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            return;
        }
        case json::value_t::number_float: {
            const double x = value.get<double>();
            if (!std::isfinite(x)) {
                out += x > 0 ? "\"inf\"" : (x < 0 ? "\"-inf\"" : "\"nan\"");
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out += buf;
            return;
        }
        default:
            out += value.dump();
    }
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
    return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
    const json& v = field(obj, key, path);
    if (!v.is_number()) throw ParseError(path + "." + key + ": expected a number");
    return v.get<double>();
}

}  // namespace

std::string canonical_dump(const json& value, int indent) {
    std::string out;
    dump(out, value, indent, 0);
    return out;
}

json to_json(const Instance& instance) {
    json boxes = json::array();
    for (const Box& box : instance.boxes) {
        json prizes = json::array();
        for (const Prize& p : box.prizes) {
            prizes.push_back({{"p", p.probability}, {"agent", p.agent_value}, {"principal", p.principal_value}});
        }
        boxes.push_back({{"cost", box.cost}, {"prizes", std::move(prizes)}});
    }
    return {{"kind", std::string(to_string(instance.kind))}, {"boxes", std::move(boxes)}};
}

Instance instance_from_json(const json& doc) {
    Instance instance;
    const json& kind = field(doc, "kind", "instance");
    if (!kind.is_string()) throw ParseError("instance.kind: expected a string");
    try {
        instance.kind = parse_kind(kind.get<std::string>());
    } catch (const ValidationError& e) {
        throw ParseError(std::string("instance.kind: ") + e.what());
    }
    const json& boxes = field(doc, "boxes", "instance");
    if (!boxes.is_array()) throw ParseError("instance.boxes: expected an array");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const std::string path = "boxes[" + std::to_string(i) + "]";
        Box box;
        box.cost = number(boxes[i], "cost", path);
        const json& prizes = field(boxes[i], "prizes", path);
        if (!prizes.is_array()) throw ParseError(path + ".prizes: expected an array");
        for (std::size_t j = 0; j < prizes.size(); ++j) {
            const std::string ppath = path + ".prizes[" + std::to_string(j) + "]";
            box.prizes.push_back(
                {number(prizes[j], "p", ppath), number(prizes[j], "agent", ppath), number(prizes[j], "principal", ppath)});
        }
        instance.boxes.push_back(std::move(box));
    }
    // Probability sums are checked before zero-probability prizes vanish.
    require_valid(instance);
    instance = normalized(std::move(instance));
    require_valid(instance);
    return instance;
}

json to_json(const Contract& contract) {
    json rows = json::array();
    for (const auto& row : contract.transfers) rows.push_back(row);
    return {{"transfers", std::move(rows)}};
}

json to_json(const LinearContract& contract) { return {{"alpha", contract.alpha}}; }

Contract contract_from_json(const json& doc, const Instance& instance) {
    if (!doc.is_object()) throw ParseError("contract: expected an object");
    Contract contract;
    if (doc.contains("alpha")) {
        const double alpha = number(doc, "alpha", "contract");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("contract.alpha: must lie in [0,1]");
        contract = Contract::linear(instance, alpha);
    } else {
        const json& rows = field(doc, "transfers", "contract");
        if (!rows.is_array()) throw ParseError("contract.transfers: expected an array");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].is_array()) throw ParseError("contract.transfers[" + std::to_string(i) + "]: expected an array");
            std::vector<double> row;
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                if (!rows[i][j].is_number())
                    throw ParseError("contract.transfers[" + std::to_string(i) + "][" + std::to_string(j) +
                                     "]: expected a number");
                row.push_back(rows[i][j].get<double>());
            }
            contract.transfers.push_back(std::move(row));
        }
    }
    require_valid(instance, contract);
    return contract;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

void save_instance(const Instance& instance, const std::filesystem::path& path) {
    write_text_file(path, canonical_dump(to_json(instance), 2) + "\n");
}

Contract load_contract(const std::filesystem::path& path, const Instance& instance) {
    return contract_from_json(read_json_file(path), instance);
}

}  // namespace excon
