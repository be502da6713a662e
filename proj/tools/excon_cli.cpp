// excon: solve, evaluate, simulate, generate and sweep exploration contracts.
//
// Exit codes: 0 success, 2 usage or validation errors, 3 I/O errors.

#include "excon/general.hpp"
#include "excon/instance_io.hpp"
#include "excon/linear.hpp"
#include "excon/oracle.hpp"
#include "excon/policy_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace excon;

namespace {

constexpr int EXIT_USAGE = 2;
constexpr int EXIT_IO = 3;

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[digest[k] >> 4];
        out += hex[digest[k] & 15];
    }
    return out;
}

json utility_json(const UtilityPair& u) { return {{"agent", u.agent}, {"principal", u.principal}}; }

struct Shared {
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool oracle = false;
    std::optional<double> oracle_grid;
    std::optional<std::uint64_t> trials;
};

class Run {
public:
    Run(std::vector<std::string> argv, const Shared& shared) : shared_(shared), start_(std::chrono::steady_clock::now()) {
        report_["command"] = std::move(argv);
    }

    json& report() { return report_; }

    void set_instance(const Instance& instance) {
        report_["instance_digest"] = sha256_hex(canonical_dump(to_json(instance)));
        report_["instance_kind"] = std::string(to_string(instance.kind));
        report_["boxes"] = instance.size();
    }

    void write_file(const std::string& name, const std::string& text) const {
        write_text_file(fs::path(shared_.out_dir) / name, text);
    }

    // report.json and timing.json go to --out; without it the report is
    // printed and timing dropped.
    void finish(const std::optional<json>& contract = std::nullopt) {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const std::string text = canonical_dump(report_, 2) + "\n";
        if (shared_.out_dir.empty()) {
            std::cout << text;
            return;
        }
        std::error_code ec;
        fs::create_directories(shared_.out_dir, ec);
        if (ec) throw IoError("cannot create directory '" + shared_.out_dir + "': " + ec.message());
        if (contract) write_file("contract.json", canonical_dump(*contract, 2) + "\n");
        write_file("report.json", text);
        write_file("timing.json", canonical_dump(json{{"wall_seconds", wall}}, 2) + "\n");
    }

private:
    const Shared& shared_;
    json report_;
    std::chrono::steady_clock::time_point start_;
};

std::uint64_t require_seed(const Shared& shared, const char* what) {
    if (!shared.seed) throw ValidationError(std::string(what) + " needs --seed");
    return *shared.seed;
}

json oracle_dp(const Instance& instance, const Contract& contract, const UtilityPair& solver) {
    const UtilityPair dp = lex_dp(instance, contract, Execution::Parallel);
    return {{"lex_dp", utility_json(dp)},
            {"agent_delta", dp.agent - solver.agent},
            {"principal_delta", dp.principal - solver.principal}};
}

int cmd_solve(const std::vector<std::string>& argv, const Shared& shared, const std::string& path,
              const std::string& mode) {
    Run run(argv, shared);
    const Instance instance = load_instance(path);
    run.set_instance(instance);
    run.report()["solver"] = mode;
    json oracle = json::object();
    json contract_doc;
    Contract contract;
    UtilityPair utility;

    if (mode == "linear") {
        const LinearResult r = optimal_linear(instance);
        contract = r.contract;
        utility = r.utility;
        contract_doc = to_json(contract);
        contract_doc["alpha"] = r.alpha;
        run.report()["alpha"] = r.alpha;
        json critical = json::array();
        for (const CriticalValue& c : r.critical)
            critical.push_back({{"alpha", c.alpha}, {"kind", std::string(to_string(c.kind))}});
        run.report()["critical_values"] = std::move(critical);
        if (shared.oracle_grid) {
            const GridResult g = grid_search_linear(instance, *shared.oracle_grid);
            oracle["grid"] = {{"step", *shared.oracle_grid},
                              {"alpha", g.alpha},
                              {"principal", g.utility.principal},
                              {"delta", g.utility.principal - utility.principal}};
        }
    } else if (mode == "no-agent-value") {
        const NoAgentValueResult r = solve_no_agent_value(instance);
        contract = r.contract;
        utility = r.utility;
        contract_doc = to_json(contract);
        run.report()["first_best"] = r.first_best;
        run.report()["principal_caps"] = r.principal_cap;
    } else if (mode == "binary") {
        const BinaryResult r = solve_binary(instance);
        contract = r.contract;
        utility = r.utility;
        contract_doc = to_json(contract);
        run.report()["order"] = r.order;
        run.report()["internal_utility"] = r.internal_utility;
        if (shared.oracle) {
            const OrderingOracleResult o = enumerate_orderings_binary(instance);
            oracle["orderings"] = {{"principal", o.utility},
                                   {"order", o.order},
                                   {"feasible", o.feasible},
                                   {"delta", o.utility - utility.principal}};
        }
    } else if (mode == "iid") {
        const IidResult r = solve_iid_single_prize(instance);
        contract = r.contract;
        utility = r.utility;
        contract_doc = to_json(contract);
        run.report()["phases"] = {{"phase1_length", r.phases.phase1_length},
                                  {"phase2_length", r.phases.phase2_length},
                                  {"lifted", r.phases.lifted},
                                  {"front", r.phases.front},
                                  {"lifted_cap", r.phases.lifted_cap},
                                  {"lifted_payment", r.phases.lifted_payment},
                                  {"front_payment", r.phases.front_payment},
                                  {"phase2_payment", r.phases.phase2_payment}};
        run.report()["phase_lengths"] = {r.phases.phase1_length, r.phases.phase2_length};
        run.report()["candidates"] = r.candidates;
        run.report()["closed_form"] = {{"checks", r.closed_form_checks}, {"max_error", r.closed_form_error}};
        if (shared.oracle) {
            const PaymentOracleResult o = enumerate_payments_iid(instance);
            oracle["payments"] = {{"principal", o.utility.principal},
                                  {"payments", o.payments},
                                  {"evaluated", o.evaluated},
                                  {"delta", o.utility.principal - utility.principal}};
        }
    } else {
        throw ValidationError("unknown mode '" + mode + "'");
    }

    if (shared.oracle) oracle["pipeline"] = oracle_dp(instance, contract, utility);
    run.report()["contract"] = contract_doc;
    run.report()["utility"] = utility_json(utility);
    if (!oracle.empty()) run.report()["oracle"] = std::move(oracle);
    run.finish(contract_doc);
    return 0;
}

json simulation_json(const Instance& instance, const Contract& contract, const ResolvedPolicy& policy,
                     const UtilityPair& exact, std::uint64_t trials, std::uint64_t seed) {
    const SimulationResult s = simulate(instance, contract, policy, trials, seed);
    const auto within = [](double mean, double se, double target) {
        return std::abs(mean - target) <= 3.0 * se + EPS;
    };
    return {{"trials", trials},
            {"seed", seed},
            {"mean", utility_json(s.mean)},
            {"standard_error", utility_json(s.standard_error)},
            {"within_3se", within(s.mean.agent, s.standard_error.agent, exact.agent) &&
                               within(s.mean.principal, s.standard_error.principal, exact.principal)}};
}

int cmd_evaluate(const std::vector<std::string>& argv, const Shared& shared, const std::string& path,
                 const std::string& contract_path, bool simulate_only) {
    Run run(argv, shared);
    const Instance instance = load_instance(path);
    run.set_instance(instance);
    const Contract contract = load_contract(contract_path, instance);
    const ResolvedPolicy policy = optimal_policy(instance, contract);
    const UtilityPair exact = evaluate_exact(instance, contract, policy);
    run.report()["solver"] = simulate_only ? "simulate" : "evaluate";
    run.report()["contract"] = to_json(contract);
    run.report()["utility"] = utility_json(exact);
    if (!simulate_only) run.report()["policy"] = to_json(policy);
    if (simulate_only || shared.trials) {
        if (!shared.trials) throw ValidationError("simulate needs --trials");
        const std::uint64_t seed = require_seed(shared, "simulation");
        run.report()["simulation"] = simulation_json(instance, contract, policy, exact, *shared.trials, seed);
    }
    if (shared.oracle) run.report()["oracle"] = {{"pipeline", oracle_dp(instance, contract, exact)}};
    run.finish();
    return 0;
}

int cmd_generate(const std::vector<std::string>& argv, const Shared& shared, const std::string& family,
                 const std::string& kind, std::size_t n, std::size_t m, std::size_t k) {
    Instance instance;
    json meta = json::object();
    if (family.empty()) {
        const std::uint64_t seed = require_seed(shared, "random generation");
        instance = gen_random(n, m, seed, parse_kind(kind));
    } else if (family == "linear-gap") {
        instance = gen_linear_gap_family(n);
    } else if (family == "two-phase") {
        if (k == 0) k = n / 2;
        const IidExample ex = gen_paper_example_iid(n, k);
        instance = ex.instance;
        meta["alpha"] = ex.alpha;
    } else {
        throw ValidationError("unknown family '" + family + "'");
    }
    const std::string text = canonical_dump(to_json(instance), 2) + "\n";
    if (shared.out_dir.empty()) {
        std::cout << text;
        return 0;
    }
    Run run(argv, shared);
    run.set_instance(instance);
    run.report()["solver"] = "generate";
    if (!meta.empty()) run.report()["family"] = meta;
    std::error_code ec;
    fs::create_directories(shared.out_dir, ec);
    if (ec) throw IoError("cannot create directory '" + shared.out_dir + "': " + ec.message());
    run.write_file("instance.json", text);
    run.finish();
    return 0;
}

int cmd_sweep(const Shared& shared, const std::string& path, double step) {
    const Instance instance = load_instance(path);
    const std::vector<SweepRow> rows = alpha_sweep(instance, step);
    const LinearResult best = optimal_linear(instance);
    char footer[64];
    std::snprintf(footer, sizeof footer, "# alpha_star=%.12g\n", best.alpha);
    const std::string text = sweep_csv(rows) + footer;
    if (shared.out_dir.empty()) {
        std::cout << text;
        return 0;
    }
    std::error_code ec;
    fs::create_directories(shared.out_dir, ec);
    if (ec) throw IoError("cannot create directory '" + shared.out_dir + "': " + ec.message());
    write_text_file(fs::path(shared.out_dir) / "sweep.csv", text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Principal-agent exploration contracts over Pandora's box instances"};
    app.require_subcommand(1);
    Shared shared;
    const auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--out", shared.out_dir, "Output directory");
        cmd->add_option("--seed", shared.seed, "Random seed");
        cmd->add_flag("--oracle", shared.oracle, "Cross-check against brute-force oracles");
        cmd->add_option("--oracle-grid", shared.oracle_grid, "Grid step for the linear-contract oracle")
            ->check(CLI::Range(1e-9, 1.0));
        cmd->add_option("--trials", shared.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    };

    std::string instance_path, contract_path, mode, family, kind = "general";
    std::size_t n = 0, m = 2, k = 0;
    double step = 0.01;

    auto* solve = app.add_subcommand("solve", "Compute an optimal contract");
    solve->add_option("instance", instance_path, "Instance JSON")->required();
    solve->add_option("--mode", mode, "linear | no-agent-value | binary | iid")
        ->required()
        ->check(CLI::IsMember({"linear", "no-agent-value", "binary", "iid"}));
    add_shared(solve);

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a contract under the principal-favoring policy");
    evaluate->add_option("instance", instance_path, "Instance JSON")->required();
    evaluate->add_option("--contract", contract_path, "Contract JSON")->required();
    add_shared(evaluate);
    evaluate->add_option("--simulate", shared.trials, "Also run N Monte Carlo trials")->check(CLI::PositiveNumber);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of a contract's utilities");
    sim->add_option("instance", instance_path, "Instance JSON")->required();
    sim->add_option("--contract", contract_path, "Contract JSON")->required();
    add_shared(sim);

    auto* generate = app.add_subcommand("generate", "Write a random or structured instance");
    generate->add_option("--kind", kind, "general | binary | iid");
    generate->add_option("--family", family, "linear-gap | two-phase");
    generate->add_option("--n", n, "Number of boxes")->required()->check(CLI::PositiveNumber);
    generate->add_option("--m", m, "Prizes per box");
    generate->add_option("--k", k, "Phase-1 rounds for two-phase (default n/2)");
    add_shared(generate);

    auto* sweep = app.add_subcommand("sweep", "Principal and agent utility over a grid of linear contracts");
    sweep->add_option("instance", instance_path, "Instance JSON")->required();
    sweep->add_option("--step", step, "Grid step in (0, 1]");
    add_shared(sweep);

    // The output directory is left out so reports written to different
    // places compare equal.
    std::vector<std::string> echo;
    for (int a = 1; a < argc; ++a) {
        const std::string arg = argv[a];
        if (arg == "--out") {
            ++a;
            continue;
        }
        if (arg.rfind("--out=", 0) == 0) continue;
        echo.push_back(arg);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : EXIT_USAGE;
    }

    try {
        if (*solve) return cmd_solve(echo, shared, instance_path, mode);
        if (*evaluate) return cmd_evaluate(echo, shared, instance_path, contract_path, false);
        if (*sim) return cmd_evaluate(echo, shared, instance_path, contract_path, true);
        if (*generate) return cmd_generate(echo, shared, family, kind, n, m, k);
        if (*sweep) return cmd_sweep(shared, instance_path, step);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_IO;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    return EXIT_USAGE;
}
