#include "roundsearch/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "roundsearch/bounds.hpp"
#include "roundsearch/solver.hpp"
#include "roundsearch/transcript_io.hpp"

namespace roundsearch {

nlohmann::json to_json(const GameResult& result) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : result.ledger_checks)
        checks.push_back({{"name", c.name}, {"round", c.round}, {"passed", c.passed}, {"exact", c.exact},
                          {"detail", c.detail}});
    nlohmann::json bounds = {{"lower", result.bounds.lower},
                             {"upper", result.bounds.upper},
                             {"upper_algorithmic", result.bounds.upper_algorithmic},
                             {"lower_exceeds_upper", result.bounds.lower_exceeds_upper}};
    if (result.bounds.two_round)
        bounds["two_round"] = {result.bounds.two_round->first, result.bounds.two_round->second};
    return {{"config", result.config},
            {"questioner", result.questioner},
            {"adversary", result.adversary},
            {"total_queries", result.total_queries},
            {"per_round", result.per_round},
            {"verdict", result.verdict},
            {"verdict_valid", result.verdict_valid},
            {"bounds", bounds},
            {"ledger_checks", checks},
            {"transcript", result.transcript}};
}

std::vector<std::string> suite_adversaries(const GameConfig& config) {
    std::vector<std::string> out;
    if (config.d == 1) out.push_back("lemma");
    out.push_back("good-family");
    out.push_back("fixed:");
    out.push_back("fixed:1");
    out.push_back("fixed:" + std::to_string(config.n));
    out.push_back("fixed:all");
    out.push_back("random:0.5");
    return out;
}

std::string splitting_questioner(const GameConfig& config) {
    return config.d == 1 ? "katona" : "katona-parallel";
}

std::vector<Query> LastRoundProbe::next_round(const KnowledgeState&, int round) {
    if (round != config_.r) return {};
    return {{1}};
}

std::optional<Verdict> LastRoundProbe::verdict(const KnowledgeState& state) {
    return best_verdict(state, config_.d);
}

// --- sweep ---------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

nlohmann::json row_json(const SweepRow& row) {
    return {{"n", row.config.n},
            {"d", row.config.d},
            {"r", row.config.r},
            {"questioner", row.questioner},
            {"adversary", row.adversary},
            {"total_queries", row.total_queries},
            {"lower", row.lower},
            {"upper_alg", row.upper_alg},
            {"verdict", row.verdict},
            {"valid", row.valid}};
}

}  // namespace

std::string csv_row(const SweepRow& row) {
    std::ostringstream os;
    os << row.config.n << ',' << row.config.d << ',' << row.config.r << ',' << csv_field(row.questioner) << ','
       << csv_field(row.adversary) << ',' << row.total_queries << ',' << format_double(row.lower) << ','
       << row.upper_alg << ',' << csv_field(row.verdict) << ',' << (row.valid ? "true" : "false");
    return os.str();
}

SweepOutcome run_sweep(const SweepSpec& spec, const std::function<void(const SweepRow&)>& on_row) {
    SweepOutcome outcome;
    std::uint64_t index = 0;
    try {
        for (int n : spec.ns) {
            for (int d : spec.ds) {
                if (d > n) continue;
                for (int r : spec.rs) {
                    const GameConfig config{n, d, r};
                    config.validate();
                    for (const auto& [q, a] : spec.pairs) {
                        const GameResult result = play(config, q, a, derive_seed(spec.seed, index++));
                        const BoundCheck check = check_bounds(result);
                        SweepRow row;
                        row.config = config;
                        row.questioner = q;
                        row.adversary = a;
                        row.total_queries = result.total_queries;
                        row.lower = result.bounds.lower;
                        row.upper_alg = result.bounds.upper_algorithmic;
                        row.verdict = to_string(result.verdict);
                        row.valid = result.verdict_valid;
                        row.bound_ok = check.ok();
                        if (!row.bound_ok) ++outcome.bound_violations;
                        outcome.rows.push_back(row);
                        if (on_row) on_row(row);
                    }
                }
            }
        }
    } catch (const std::exception& e) {
        outcome.error = e.what();
    }
    return outcome;
}

SweepOutcome write_sweep(const SweepSpec& spec, std::ostream& out) {
    if (spec.format == SweepSpec::Format::csv) {
        out << kSweepColumns << '\n' << std::flush;
        SweepOutcome outcome = run_sweep(spec, [&](const SweepRow& row) { out << csv_row(row) << '\n' << std::flush; });
        if (!outcome.rows.empty()) out << "# bound_violations=" << outcome.bound_violations << '\n';
        if (outcome.error) out << "# error=" << *outcome.error << '\n';
        out << std::flush;
        return outcome;
    }
    SweepOutcome outcome = run_sweep(spec);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : outcome.rows) rows.push_back(row_json(row));
    nlohmann::json j = {{"columns", kSweepColumns}, {"rows", rows}, {"bound_violations", outcome.bound_violations}};
    if (outcome.error) j["error"] = *outcome.error;
    out << j.dump(2) << '\n';
    return outcome;
}

// --- verify --------------------------------------------------------------------

bool VerifyReport::passed() const {
    return std::all_of(results.begin(), results.end(), [](const InvariantResult& r) { return r.passed; });
}

const InvariantResult* VerifyReport::first_failure() const {
    for (const auto& r : results)
        if (!r.passed) return &r;
    return nullptr;
}

namespace {

// Counts cases and remembers the first counterexample.
struct Tally {
    std::int64_t cases = 0;
    std::optional<std::string> failure;

    bool fail(const std::string& what) {
        if (!failure) failure = what;
        return false;
    }
    bool ok() const { return !failure; }
};

std::string describe(const GameConfig& c, const std::string& q, const std::string& a) {
    return "n=" + std::to_string(c.n) + " d=" + std::to_string(c.d) + " r=" + std::to_string(c.r) + " " + q +
           " vs " + a;
}

// Accounting identity and forced-element soundness for one finished game.
std::optional<std::string> game_problem(const GameResult& g) {
    std::int64_t sum = 0;
    for (auto k : g.per_round) sum += k;
    if (sum != g.total_queries) return "total_queries differs from the per-round sum";
    if (!is_consistent(g.final_state)) return "inconsistent final state";
    if (g.verdict_valid && g.verdict.kind == Verdict::Kind::found) {
        const ElementSet forced = forced_excellent(g.final_state);
        for (Element x : g.verdict.elements)
            if (!contains(forced, x)) return "valid verdict names non-forced element " + std::to_string(x);
    }
    return std::nullopt;
}

// Plays one game; records protocol failures and soundness problems.
std::optional<GameResult> referee(Tally& t, const GameConfig& c, Questioner& q, Adversary& a) {
    ++t.cases;
    try {
        GameResult g = play(c, q, a);
        if (auto problem = game_problem(g)) {
            t.fail(describe(c, q.name(), a.name()) + ": " + *problem);
            return std::nullopt;
        }
        return g;
    } catch (const std::exception& e) {
        t.fail(describe(c, q.name(), a.name()) + ": " + e.what());
        return std::nullopt;
    }
}

std::unique_ptr<Adversary> build_adversary(const std::string& spec, const GameConfig& c, std::uint64_t seed,
                                           const VerifyOptions& opt) {
    const bool lower_rule = spec == "lemma" || spec == "good-family" || spec == "endgame-auto";
    if (lower_rule && opt.inject_fault && *opt.inject_fault == "mutant") return make_adversary("mutant", c, seed);
    return make_adversary(spec, c, seed);
}

// Brute-force oracle over all 2^n worlds that agree with a transcript.
struct WorldOracle {
    std::vector<std::uint32_t> worlds;

    WorldOracle(int n, const std::vector<RoundRecord>& rounds) {
        for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) {
            bool agrees = true;
            for (const auto& round : rounds) {
                for (std::size_t i = 0; i < round.queries.size() && agrees; ++i) {
                    bool hit = false;
                    for (Element x : round.queries[i]) hit = hit || (s >> (x - 1) & 1U);
                    agrees = hit == (round.answers[i] == Answer::yes);
                }
                if (!agrees) break;
            }
            if (agrees) worlds.push_back(s);
        }
    }
};

using Clock = std::chrono::steady_clock;

}  // namespace

VerifyReport verify(const VerifyOptions& opt, const std::function<void(const InvariantResult&)>& on_result) {
    const bool full = opt.level == VerifyOptions::Level::full;
    VerifyReport report;
    ExactSolver solver(solver_config_from_env());

    auto run = [&](const std::string& module, const std::string& name, const std::function<void(Tally&)>& body) {
        const auto start = Clock::now();
        Tally t;
        try {
            body(t);
        } catch (const std::exception& e) {
            t.fail(std::string("exception: ") + e.what());
        }
        InvariantResult r;
        r.module = module;
        r.name = name;
        r.cases = t.cases;
        r.passed = t.ok();
        if (t.failure) r.detail = *t.failure;
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        report.results.push_back(r);
        if (on_result) on_result(r);
    };

    // core-model ------------------------------------------------------------
    auto random_transcripts = [&](int count, const std::function<void(const GameConfig&, const Transcript&)>& fn) {
        std::mt19937_64 rng(derive_seed(opt.seed, 11));
        for (int i = 0; i < count; ++i) {
            const int n = 1 + static_cast<int>(rng() % 8);
            const int d = 1 + static_cast<int>(rng() % std::min(n, 3));
            const int r = 1 + static_cast<int>(rng() % 3);
            const GameConfig c{n, d, r};
            const GameResult g = play(c, "random", "random:0.5", rng());
            fn(c, g.transcript);
        }
    };

    run("core-model", "forced_matches_bruteforce", [&](Tally& t) {
        random_transcripts(full ? 3000 : 400, [&](const GameConfig& c, const Transcript& tr) {
            ++t.cases;
            const WorldOracle oracle(c.n, tr.rounds);
            const KnowledgeState state = replay(tr).back();
            if (is_consistent(state) != !oracle.worlds.empty()) {
                t.fail("consistency disagrees with brute force at n=" + std::to_string(c.n));
                return;
            }
            if (oracle.worlds.empty()) return;
            std::uint32_t all = ~std::uint32_t{0};
            for (auto w : oracle.worlds) all &= w;
            ElementSet expect;
            for (int x = 1; x <= c.n; ++x)
                if (all >> (x - 1) & 1U) expect.push_back(x);
            if (forced_excellent(state) != expect)
                t.fail("forced set " + format_set(forced_excellent(state)) + " != " + format_set(expect));
        });
    });

    run("core-model", "verdict_valid_matches_bruteforce", [&](Tally& t) {
        random_transcripts(full ? 3000 : 400, [&](const GameConfig& c, const Transcript& tr) {
            ++t.cases;
            const WorldOracle oracle(c.n, tr.rounds);
            const KnowledgeState state = replay(tr).back();
            int largest = 0;
            for (auto w : oracle.worlds) largest = std::max(largest, std::popcount(w));
            const bool fewer_ok = largest <= c.d - 1;
            if (verdict_valid(state, Verdict::fewer_than_d(), c.d) != fewer_ok)
                t.fail("fewer_than_d validity disagrees with brute force");
            const Verdict v = best_verdict(state, c.d);
            if (v.kind == Verdict::Kind::found) {
                for (Element x : v.elements)
                    for (auto w : oracle.worlds)
                        if (!(w >> (x - 1) & 1U)) t.fail("found element missing from a consistent world");
            }
        });
    });

    // bounds ------------------------------------------------------------------
    run("bounds", "ceil_root_exact", [&](Tally& t) {
        std::mt19937_64 rng(derive_seed(opt.seed, 21));
        for (int i = 0; i < (full ? 200000 : 20000); ++i) {
            ++t.cases;
            const std::int64_t x = static_cast<std::int64_t>(rng() % 1'000'000'000'000ULL);
            const int r = 1 + static_cast<int>(rng() % 6);
            const std::int64_t k = ceil_root(x, r);
            // b^r, saturating just above x
            const auto pw = [r, x](std::int64_t b) {
                std::int64_t p = 1;
                for (int j = 0; j < r; ++j) {
                    if (b != 0 && p > x / b) return x + 1;
                    p *= b;
                }
                return p;
            };
            if (pw(k) < x || (k > 0 && pw(k - 1) >= x))
                t.fail("ceil_root(" + std::to_string(x) + "," + std::to_string(r) + ")=" + std::to_string(k));
        }
    });

    run("bounds", "n_sequence_bound", [&](Tally& t) {
        std::mt19937_64 rng(derive_seed(opt.seed, 22));
        for (int i = 0; i < (full ? 50000 : 5000); ++i) {
            ++t.cases;
            const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 100000);
            std::vector<std::int64_t> ks(1 + rng() % 5);
            for (auto& k : ks) k = static_cast<std::int64_t>(rng() % 50);
            if (!n_sequence_bound_holds(n, ks)) t.fail("n_i bound fails for n=" + std::to_string(n));
        }
    });

    run("bounds", "bounds_ordered", [&](Tally& t) {
        for (int n = 1; n <= (full ? 1000 : 200); ++n)
            for (int d = 1; d <= std::min(n, 4); ++d)
                for (int r = 1; r <= 6; ++r) {
                    ++t.cases;
                    const BoundsReport b = bounds_for({n, d, r});
                    if (b.upper > static_cast<double>(b.upper_algorithmic) + kBoundTolerance)
                        t.fail("upper above algorithmic upper at n=" + std::to_string(n));
                    if (!b.lower_exceeds_upper && b.lower > b.upper + kBoundTolerance)
                        t.fail("unflagged lower > upper at n=" + std::to_string(n));
                }
    });

    // questioner -------------------------------------------------------------
    auto upper_suite = [&](Tally& t, const std::vector<int>& ds, int max_n, int max_r) {
        for (int d : ds)
            for (int n = d; n <= max_n; ++n)
                for (int r = 1; r <= max_r; ++r) {
                    const GameConfig c{n, d, r};
                    for (const auto& a : suite_adversaries(c)) {
                        auto q = make_questioner(splitting_questioner(c), c);
                        auto adv = build_adversary(a, c, derive_seed(opt.seed, t.cases), opt);
                        auto g = referee(t, c, *q, *adv);
                        if (!g) continue;
                        if (!g->verdict_valid || g->total_queries > g->bounds.upper_algorithmic)
                            t.fail(describe(c, q->name(), a) + ": " + std::to_string(g->total_queries) +
                                   " queries, bound " + std::to_string(g->bounds.upper_algorithmic) +
                                   (g->verdict_valid ? "" : ", invalid verdict"));
                    }
                }
    };
    run("questioner", "katona_upper_bound", [&](Tally& t) { upper_suite(t, {1}, full ? 1000 : 150, full ? 6 : 4); });
    run("questioner", "katona_parallel_upper_bound",
        [&](Tally& t) { upper_suite(t, {2, 3, 4}, full ? 500 : 100, 4); });

    // adversary ----------------------------------------------------------------
    auto lower_suite = [&](Tally& t, int d, int max_n, int randoms) {
        for (int n = std::max(2, d); n <= max_n; ++n)
            for (int r = 2; r <= 4; ++r) {
                const GameConfig c{n, d, r};
                const BoundsReport b = bounds_for(c);
                if (b.lower_exceeds_upper || b.lower_ceil() <= 0) continue;
                std::vector<std::unique_ptr<Questioner>> qs;
                qs.push_back(make_questioner(splitting_questioner(c), c));
                qs.push_back(make_questioner("singletons", c));
                qs.push_back(std::make_unique<LastRoundProbe>(c));
                for (int i = 0; i < randoms; ++i)
                    qs.push_back(make_questioner("random", c, derive_seed(opt.seed, 1000u * n + 10u * r + i)));
                for (auto& q : qs) {
                    auto adv = build_adversary(d == 1 ? "lemma" : "good-family", c, 0, opt);
                    auto g = referee(t, c, *q, *adv);
                    if (g && g->verdict_valid && g->total_queries < b.lower_ceil())
                        t.fail(describe(c, q->name(), adv->name()) + ": valid verdict after " +
                               std::to_string(g->total_queries) + " < " + std::to_string(b.lower_ceil()));
                }
            }
    };
    run("adversary", "lemma_lower_bound", [&](Tally& t) { lower_suite(t, 1, full ? 200 : 60, full ? 30 : 8); });
    run("adversary", "good_family_lower_bound", [&](Tally& t) {
        for (int d = 2; d <= 3; ++d) lower_suite(t, d, full ? 200 : 80, full ? 10 : 3);
    });

    run("adversary", "ledger_invariants", [&](Tally& t) {
        std::mt19937_64 rng(derive_seed(opt.seed, 31));
        for (int i = 0; i < (full ? 10000 : 1500); ++i) {
            const int n = 1 + static_cast<int>(rng() % 60);
            const int d = 1 + static_cast<int>(rng() % std::min(n, 3));
            const int r = 1 + static_cast<int>(rng() % 4);
            const GameConfig c{n, d, r};
            auto q = make_questioner("random", c, rng());
            auto adv = build_adversary("endgame-auto", c, 0, opt);
            auto g = referee(t, c, *q, *adv);
            if (!g) continue;
            for (const auto& check : g->ledger_checks)
                if (!check.passed)
                    t.fail(describe(c, q->name(), adv->name()) + ": " + check.name + " round " +
                           std::to_string(check.round) + " " + check.detail);
        }
    });

    // exact-solver -------------------------------------------------------------
    std::vector<GameConfig> grid;
    for (int n = 1; n <= 4; ++n)
        for (int r = 1; r <= (full ? 3 : 2); ++r) grid.push_back({n, 1, r});
    for (int n = 2; n <= 4; ++n)
        for (int r = 1; r <= (full ? 2 : 1); ++r) grid.push_back({n, 2, r});

    run("exact-solver", "sandwich", [&](Tally& t) {
        const SandwichReport s = verify_sandwich(grid, solver);
        t.cases = static_cast<std::int64_t>(s.rows.size());
        if (s.first_failure) {
            const auto& row = s.rows.back();
            t.fail("n=" + std::to_string(row.config.n) + " d=" + std::to_string(row.config.d) +
                   " r=" + std::to_string(row.config.r) + ": value " + std::to_string(row.value) + " outside [" +
                   format_double(row.lower) + ", " + format_double(row.upper) + "]");
        }
        if (solver.solve(1, 1, 1) != 1 || solver.solve(2, 1, 1) != 2) t.fail("tiny exact values differ from 1, 2");
    });

    run("exact-solver", "monotone", [&](Tally& t) {
        for (const auto& c : grid) {
            ++t.cases;
            const int v = solver.solve(c.n, c.d, c.r);
            if (c.r + 1 <= (full ? 3 : 2) && solver.solve(c.n, c.d, c.r + 1) > v)
                t.fail("value grows with rounds at n=" + std::to_string(c.n));
            if (c.d > 1 && solver.solve(c.n, 1, c.r) > v)
                t.fail("d=1 value exceeds d=" + std::to_string(c.d) + " at n=" + std::to_string(c.n));
        }
    });

    run("exact-solver", "strategy_tree_witness", [&](Tally& t) {
        for (const auto& c : grid) {
            const StrategyTree tree = solver.strategy_tree(c.n, c.d, c.r);
            std::vector<std::unique_ptr<Adversary>> advs;
            for (const auto& a : suite_adversaries(c)) advs.push_back(make_adversary(a, c, derive_seed(opt.seed, 41)));
            for (std::uint32_t s = 0; s < (std::uint32_t{1} << c.n); ++s) {
                ElementSet hidden;
                for (int x = 1; x <= c.n; ++x)
                    if (s >> (x - 1) & 1U) hidden.push_back(x);
                advs.push_back(std::make_unique<FixedSetAdversary>(c, hidden));
            }
            advs.push_back(std::make_unique<SolverAdversary>(c, solver));
            for (auto& adv : advs) {
                TreeQuestioner q(tree);
                auto g = referee(t, c, q, *adv);
                if (g && (!g->verdict_valid || g->total_queries > tree.value))
                    t.fail(describe(c, "solver-tree", adv->name()) + ": " + std::to_string(g->total_queries) +
                           " queries vs value " + std::to_string(tree.value));
            }
        }
    });

    run("exact-solver", "solver_adversary_witness", [&](Tally& t) {
        for (const auto& c : grid) {
            const int value = solver.solve(c.n, c.d, c.r);
            std::vector<std::unique_ptr<Questioner>> qs;
            qs.push_back(make_questioner(splitting_questioner(c), c));
            qs.push_back(make_questioner("singletons", c));
            qs.push_back(std::make_unique<LastRoundProbe>(c));
            for (int i = 0; i < 20; ++i) qs.push_back(make_questioner("random", c, derive_seed(opt.seed, 50 + i)));
            for (auto& q : qs) {
                SolverAdversary adv(c, solver);
                auto g = referee(t, c, *q, adv);
                if (g && g->verdict_valid && g->total_queries < value)
                    t.fail(describe(c, q->name(), "solver") + ": valid verdict after " +
                           std::to_string(g->total_queries) + " < " + std::to_string(value));
            }
        }
    });

    // harness -------------------------------------------------------------------
    run("harness", "determinism", [&](Tally& t) {
        SweepSpec spec;
        spec.ns = {5, 17, 40};
        spec.ds = {1, 2};
        spec.rs = {1, 2, 3};
        spec.pairs = {{"random", "random:0.3"}, {"random", "endgame-auto"}, {"singletons", "good-family"}};
        spec.seed = opt.seed;
        const SweepOutcome a = run_sweep(spec);
        const SweepOutcome b = run_sweep(spec);
        t.cases = static_cast<std::int64_t>(a.rows.size());
        if (a.error) t.fail(*a.error);
        if (a.rows.size() != b.rows.size()) t.fail("row counts differ between identical sweeps");
        for (std::size_t i = 0; i < std::min(a.rows.size(), b.rows.size()); ++i)
            if (csv_row(a.rows[i]) != csv_row(b.rows[i])) t.fail("row " + std::to_string(i) + " differs");
    });

    return report;
}

}  // namespace roundsearch
