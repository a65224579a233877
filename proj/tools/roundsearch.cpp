// roundsearch: play, sweep, bounds, solve, verify.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "roundsearch/bounds.hpp"
#include "roundsearch/game.hpp"
#include "roundsearch/harness.hpp"
#include "roundsearch/solver.hpp"
#include "roundsearch/transcript_io.hpp"

using namespace roundsearch;
using nlohmann::json;

namespace {

// "1..10,20,30..32" -> {1,...,10,20,30,31,32}
std::vector<int> parse_range(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(std::stoi(item));
            continue;
        }
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(8) << x;
    return os.str();
}

json bounds_json(const BoundsReport& b) {
    json j = {{"config", b.config},
              {"lower", b.lower},
              {"upper", b.upper},
              {"upper_algorithmic", b.upper_algorithmic},
              {"lower_exceeds_upper", b.lower_exceeds_upper}};
    if (b.two_round) j["two_round"] = {{"upper", b.two_round->first}, {"lower", b.two_round->second}};
    if (!b.notes.empty()) j["notes"] = b.notes;
    return j;
}

int cmd_play(const GameConfig& c, std::string questioner, const std::string& adversary, std::uint64_t seed,
             bool as_json) {
    if (questioner.empty()) questioner = splitting_questioner(c);
    const GameResult g = play(c, questioner, adversary, seed);
    const BoundCheck check = check_bounds(g);
    if (as_json) {
        json j = to_json(g);
        j["bound_ok"] = check.ok();
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "config      n=" << c.n << " d=" << c.d << " r=" << c.r << '\n'
                  << "questioner  " << g.questioner << '\n'
                  << "adversary   " << g.adversary << '\n';
        std::cout << "per_round  ";
        for (auto k : g.per_round) std::cout << ' ' << k;
        std::cout << '\n'
                  << "total       " << g.total_queries << '\n'
                  << "bounds      [" << fmt(g.bounds.lower) << ", " << g.bounds.upper_algorithmic << "]\n"
                  << "verdict     " << to_string(g.verdict) << (g.verdict_valid ? " (valid)" : " (INVALID)") << '\n';
        for (const auto& lc : g.ledger_checks)
            std::cout << "check       " << lc.name << " round " << lc.round << ": " << (lc.passed ? "pass" : "FAIL")
                      << (lc.exact ? "" : " (heuristic)") << "  " << lc.detail << '\n';
    }
    return check.ok() && g.ledger_ok() ? 0 : 1;
}

int cmd_bounds(const GameConfig& c, bool as_json) {
    const BoundsReport b = bounds_for(c);
    if (as_json) {
        std::cout << bounds_json(b).dump(2) << '\n';
        return 0;
    }
    std::cout << "lower              " << fmt(b.lower) << (b.lower_exceeds_upper ? "  (exceeds upper)" : "") << '\n'
              << "upper              " << fmt(b.upper) << '\n'
              << "upper_algorithmic  " << b.upper_algorithmic << '\n';
    if (b.two_round) std::cout << "two_round          [" << b.two_round->second << ", " << b.two_round->first << "]\n";
    if (!b.notes.empty()) std::cout << "notes              " << b.notes << '\n';
    return 0;
}

int cmd_solve(const GameConfig& c, const std::string& emit, bool as_json) {
    ExactSolver solver(solver_config_from_env());
    const int value = solver.solve(c.n, c.d, c.r);
    if (!emit.empty()) {
        std::ofstream out(emit);
        if (!out) throw std::runtime_error("cannot write " + emit);
        out << to_json(solver.strategy_tree(c.n, c.d, c.r)).dump(2) << '\n';
    }
    const BoundsReport b = bounds_for(c);
    if (as_json) {
        std::cout << json{{"config", c},
                          {"value", value},
                          {"nodes", solver.nodes_expanded()},
                          {"memo", solver.memo_size()},
                          {"bounds", bounds_json(b)}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "value " << value << "  (bounds " << fmt(b.lower) << " .. " << fmt(b.upper) << ", "
                  << solver.nodes_expanded() << " nodes, " << solver.memo_size() << " states)\n";
    }
    return 0;
}

int cmd_verify(const VerifyOptions& opt, bool as_json) {
    if (!as_json) std::cout << std::left << std::setw(14) << "module" << std::setw(36) << "invariant" << std::setw(10)
                            << "cases" << std::setw(8) << "result" << "seconds\n";
    const VerifyReport report = verify(opt, [&](const InvariantResult& r) {
        if (as_json) return;
        std::cout << std::left << std::setw(14) << r.module << std::setw(36) << r.name << std::setw(10) << r.cases
                  << std::setw(8) << (r.passed ? "pass" : "FAIL") << std::fixed << std::setprecision(2) << r.seconds
                  << '\n'
                  << std::flush;
    });
    if (as_json) {
        json rows = json::array();
        for (const auto& r : report.results)
            rows.push_back({{"module", r.module},
                            {"invariant", r.name},
                            {"cases", r.cases},
                            {"passed", r.passed},
                            {"detail", r.detail},
                            {"seconds", r.seconds}});
        std::cout << json{{"passed", report.passed()}, {"results", rows}}.dump(2) << '\n';
    }
    if (const auto* f = report.first_failure()) {
        std::cerr << "first failing invariant: " << f->module << "/" << f->name << ": " << f->detail << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Round-limited search for excellent elements: games, sweeps, bounds, exact values."};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "Structured output");

    GameConfig c;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--n", c.n, "Ground set size")->required();
        sub->add_option("--d", c.d, "Excellent elements to find")->capture_default_str();
        sub->add_option("--r", c.r, "Rounds")->required();
        sub->add_flag("--json", as_json, "Structured output");
    };

    auto* play_cmd = app.add_subcommand("play", "Referee one game");
    add_config(play_cmd);
    std::string questioner;
    std::string adversary = "endgame-auto";
    std::uint64_t seed = 0;
    play_cmd->add_option("--questioner", questioner, "katona, katona-parallel, singletons, random");
    play_cmd->add_option("--adversary", adversary, "lemma, good-family, endgame-auto, fixed:<ids>, fixed:all, random:<p>")
        ->capture_default_str();
    play_cmd->add_option("--seed", seed)->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "Play a grid of games, one row per game");
    std::string ns = "10,100,1000", ds = "1", rs = "2,3", out_path, format = "csv";
    std::vector<std::string> sweep_q{"katona"}, sweep_a{"endgame-auto"};
    sweep_cmd->add_option("--n", ns, "Values or ranges, e.g. 1..10,100")->capture_default_str();
    sweep_cmd->add_option("--d", ds)->capture_default_str();
    sweep_cmd->add_option("--r", rs)->capture_default_str();
    sweep_cmd->add_option("--questioner", sweep_q, "Repeatable")->capture_default_str();
    sweep_cmd->add_option("--adversary", sweep_a, "Repeatable")->capture_default_str();
    sweep_cmd->add_option("--seed", seed)->capture_default_str();
    sweep_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sweep_cmd->add_option("--out", out_path, "Output file (default stdout)");
    sweep_cmd->add_flag("--json", as_json, "Same as --format json");

    auto* bounds_cmd = app.add_subcommand("bounds", "Closed-form bounds for one configuration");
    add_config(bounds_cmd);

    auto* solve_cmd = app.add_subcommand("solve", "Exact game value by minimax (n <= 4, r <= 3)");
    add_config(solve_cmd);
    std::string emit;
    solve_cmd->add_option("--emit-strategy", emit, "Write the optimal strategy tree as JSON");

    auto* verify_cmd = app.add_subcommand("verify", "Run every invariant suite");
    std::string level = "quick";
    std::string fault;
    verify_cmd->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
    verify_cmd->add_option("--seed", seed)->capture_default_str();
    verify_cmd->add_option("--inject-fault", fault, "mutant: corrupt the lower-bound adversaries")
        ->check(CLI::IsMember({"mutant"}));
    verify_cmd->add_flag("--json", as_json, "Structured output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*play_cmd) return cmd_play(c, questioner, adversary, seed, as_json);
        if (*bounds_cmd) return cmd_bounds(c, as_json);
        if (*solve_cmd) return cmd_solve(c, emit, as_json);
        if (*verify_cmd) {
            VerifyOptions opt;
            opt.level = level == "full" ? VerifyOptions::Level::full : VerifyOptions::Level::quick;
            opt.seed = seed;
            if (!fault.empty()) opt.inject_fault = fault;
            return cmd_verify(opt, as_json);
        }
        if (*sweep_cmd) {
            SweepSpec spec;
            spec.ns = parse_range(ns);
            spec.ds = parse_range(ds);
            spec.rs = parse_range(rs);
            for (const auto& q : sweep_q)
                for (const auto& a : sweep_a) spec.pairs.emplace_back(q, a);
            spec.seed = seed;
            spec.format = (as_json || format == "json") ? SweepSpec::Format::json : SweepSpec::Format::csv;
            SweepOutcome outcome;
            if (out_path.empty()) {
                outcome = write_sweep(spec, std::cout);
            } else {
                std::ofstream out(out_path);
                if (!out) throw std::runtime_error("cannot write " + out_path);
                outcome = write_sweep(spec, out);
            }
            if (outcome.error) std::cerr << "sweep stopped: " << *outcome.error << '\n';
            return outcome.error || outcome.bound_violations > 0 ? 1 : 0;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
