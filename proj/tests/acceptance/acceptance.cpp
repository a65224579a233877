// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "roundsearch/bounds.hpp"
#include "roundsearch/game.hpp"
#include "roundsearch/harness.hpp"
#include "roundsearch/set_family.hpp"
#include "roundsearch/solver.hpp"

using namespace roundsearch;

namespace {

constexpr std::uint64_t kSeed = 20240611;

// Shared soundness counters for criterion 7.
struct Soundness {
    std::int64_t games = 0;
    std::int64_t inconsistent = 0;
    std::int64_t non_forced = 0;
    std::int64_t other_failures = 0;
    std::string first_problem;

    void note(const std::string& what) {
        if (first_problem.empty()) first_problem = what;
    }
} soundness;

std::string tag(const GameConfig& c, const std::string& q, const std::string& a) {
    std::ostringstream os;
    os << "n=" << c.n << " d=" << c.d << " r=" << c.r << " " << q << " vs " << a;
    return os.str();
}

// Plays a game and feeds the soundness counters.
std::optional<GameResult> referee(const GameConfig& c, Questioner& q, Adversary& a) {
    ++soundness.games;
    try {
        GameResult g = play(c, q, a);
        if (!is_consistent(g.final_state)) {
            ++soundness.inconsistent;
            soundness.note(tag(c, q.name(), a.name()) + ": inconsistent final state");
        }
        if (g.verdict_valid && g.verdict.kind == Verdict::Kind::found) {
            // independent of verdict_valid: forced elements are singleton residual sets
            const ElementSet forced = forced_excellent(g.final_state);
            for (Element x : g.verdict.elements)
                if (!contains(forced, x)) {
                    ++soundness.non_forced;
                    soundness.note(tag(c, q.name(), a.name()) + ": names non-forced " + std::to_string(x));
                }
        }
        return g;
    } catch (const GameFailure& e) {
        if (e.kind() == GameFailure::Kind::adversary_inconsistent)
            ++soundness.inconsistent;
        else
            ++soundness.other_failures;
        soundness.note(tag(c, q.name(), a.name()) + ": " + e.what());
    } catch (const std::exception& e) {
        ++soundness.other_failures;
        soundness.note(tag(c, q.name(), a.name()) + ": " + e.what());
    }
    return std::nullopt;
}

std::optional<GameResult> referee(const GameConfig& c, const std::string& qname, const std::string& aname,
                                  std::uint64_t seed) {
    std::unique_ptr<Questioner> q;
    std::unique_ptr<Adversary> a;
    try {
        q = make_questioner(qname, c, derive_seed(seed, 1));
        a = make_adversary(aname, c, derive_seed(seed, 2));
    } catch (const std::exception& e) {
        ++soundness.other_failures;
        soundness.note(tag(c, qname, aname) + ": " + e.what());
        return std::nullopt;
    }
    return referee(c, *q, *a);
}

struct Outcome {
    bool passed = true;
    std::string summary;
    std::string first_failure;

    void fail(const std::string& what) {
        if (passed) first_failure = what;
        passed = false;
    }
};

int failures = 0;
std::vector<int> selected;  // empty: run everything

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) return;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1fs]%s%s\n", o.passed ? "PASS" : "FAIL", id, name.c_str(),
                o.summary.c_str(), secs, o.passed ? "" : " first failure: ", o.first_failure.c_str());
    std::fflush(stdout);
}

// --- criterion 5 oracles -------------------------------------------------------

// m(i, F) over i distinct members: plain enumeration when small, else the
// library search.
std::optional<std::int64_t> least_union(const std::vector<ElementSet>& family, int i) {
    const auto m = static_cast<int>(family.size());
    if (m < i) return std::nullopt;
    double combos = 1;
    for (int j = 0; j < i; ++j) combos = combos * (m - j) / (j + 1);
    if (combos > 200000) return min_union(family, i);
    std::int64_t best = -1;
    std::vector<int> idx(static_cast<std::size_t>(i));
    std::function<void(int, int, ElementSet)> rec = [&](int from, int depth, ElementSet u) {
        if (depth == i) {
            const auto size = static_cast<std::int64_t>(u.size());
            if (best < 0 || size < best) best = size;
            return;
        }
        for (int j = from; j < m; ++j) rec(j + 1, depth + 1, set_union(u, family[static_cast<std::size_t>(j)]));
    };
    rec(0, 0, {});
    return best;
}

struct InvariantTally {
    std::int64_t checked = 0;
    std::int64_t violations = 0;
};

// Re-derives the round invariants from the transcript alone.
void check_round_invariants(const GameResult& g, std::map<std::string, InvariantTally>& tally, Outcome& o) {
    const GameConfig& c = g.config;
    const auto states = replay(g.transcript);
    std::int64_t n_prev = c.n;
    bool all_no = true;
    for (int t = 1; t < c.r; ++t) {
        const RoundRecord& rec = g.transcript.rounds[static_cast<std::size_t>(t - 1)];
        const auto k = static_cast<std::int64_t>(rec.queries.size());
        const std::int64_t n_t = n_prev / (k + 1);
        for (Answer a : rec.answers) all_no = all_no && a == Answer::no;
        const KnowledgeState& s = states[static_cast<std::size_t>(t)];
        const auto& family = s.residual_yes();
        const auto dead = static_cast<std::int64_t>(s.dead_count());

        auto record = [&](const std::string& name, bool ok, const std::string& detail) {
            auto& entry = tally[name];
            ++entry.checked;
            if (!ok) {
                ++entry.violations;
                o.fail(tag(c, g.questioner, g.adversary) + ": " + name + " round " + std::to_string(t) + " " +
                       detail);
            }
        };

        if (c.d == 1) {
            const int m = s.min_residual_size();
            const bool ok = (m >= 0 && m >= n_t + 1) || (all_no && dead <= c.n - n_t);
            record("single-element round invariant", ok,
                   "m=" + std::to_string(m) + " n_t=" + std::to_string(n_t) + " |G|=" + std::to_string(dead));
        } else if (t <= c.r - 2) {
            bool ok = true;
            for (int i = 1; i <= c.d; ++i)
                if (auto mu = least_union(family, i); mu && *mu < i * n_t) ok = false;
            record("union growth invariant", ok, "n_t=" + std::to_string(n_t));
        } else {
            const std::int64_t np = n_prev / (k + c.d);
            bool unions = true;
            for (int i = 1; i <= c.d; ++i)
                if (auto mu = least_union(family, i); mu && *mu < i * np) unions = false;
            const bool ok = (all_no && dead <= c.n - c.d * np) || (!all_no && unions);
            record("penultimate round invariant", ok,
                   "n'=" + std::to_string(np) + " |G|=" + std::to_string(dead) + (all_no ? " all-no" : ""));
        }
        n_prev = n_t;
    }
}

}  // namespace

// Optional arguments pick criteria by number, e.g. `acceptance 4 6`.
int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    // 1 -----------------------------------------------------------------------
    report(1, "single-element upper bound, katona vs suite", [] {
        Outcome o;
        std::int64_t games = 0;
        std::vector<int> ns;
        for (int n = 1; n <= 1000; ++n) ns.push_back(n);
        ns.push_back(10000);
        ns.push_back(100000);
        for (int n : ns)
            for (int r = 1; r <= 6; ++r) {
                const GameConfig c{n, 1, r};
                const std::int64_t bound = r * ceil_root(n, r);
                for (const auto& a : suite_adversaries(c)) {
                    ++games;
                    auto g = referee(c, "katona", a, derive_seed(kSeed, static_cast<std::uint64_t>(games)));
                    if (!g) {
                        o.fail(tag(c, "katona", a) + ": game failed");
                        continue;
                    }
                    if (!g->verdict_valid) o.fail(tag(c, "katona", a) + ": invalid verdict");
                    if (g->total_queries > bound)
                        o.fail(tag(c, "katona", a) + ": " + std::to_string(g->total_queries) + " > " +
                               std::to_string(bound));
                }
            }
        o.summary = std::to_string(games) + " games";
        return o;
    });

    // 2 -----------------------------------------------------------------------
    report(2, "single-element lower bound forced by the lemma adversary", [] {
        Outcome o;
        std::int64_t games = 0, valid = 0, tight = 0;
        for (int n = 2; n <= 200; ++n)
            for (int r = 2; r <= 4; ++r) {
                const GameConfig c{n, 1, r};
                const double formula = r * std::pow(static_cast<double>(n), 1.0 / r) - 2 * r + 1;
                const auto need = static_cast<std::int64_t>(std::ceil(formula - kBoundTolerance));
                std::vector<std::pair<std::string, std::uint64_t>> qs{{"katona", 0}, {"singletons", 0}};
                for (std::uint64_t i = 0; i < 100; ++i)
                    qs.emplace_back("random", derive_seed(kSeed + 2, static_cast<std::uint64_t>(n) * 1000 + r * 100 + i));
                for (const auto& [qname, seed] : qs) {
                    ++games;
                    auto g = referee(c, qname, "lemma", seed);
                    if (!g) {
                        o.fail(tag(c, qname, "lemma") + ": game failed");
                        continue;
                    }
                    if (!g->verdict_valid) continue;
                    ++valid;
                    if (g->total_queries == need) ++tight;
                    if (g->total_queries < need)
                        o.fail(tag(c, qname, "lemma") + ": valid after " + std::to_string(g->total_queries) + " < " +
                               std::to_string(need));
                }
            }
        o.summary = std::to_string(games) + " games, " + std::to_string(valid) + " valid verdicts, " +
                    std::to_string(tight) + " exactly at the bound";
        return o;
    });

    // 3 -----------------------------------------------------------------------
    report(3, "d-element upper bound, katona-parallel vs suite", [] {
        Outcome o;
        std::int64_t games = 0;
        for (int d = 2; d <= 4; ++d)
            for (int n = d; n <= 2000; ++n)
                for (int r = 1; r <= 4; ++r) {
                    const GameConfig c{n, d, r};
                    std::int64_t pw = 1;
                    for (int j = 0; j < r - 1; ++j) pw *= d;
                    const std::int64_t bound = r * ceil_root(pw * n, r);
                    for (const auto& a : suite_adversaries(c)) {
                        ++games;
                        auto g = referee(c, "katona-parallel", a, derive_seed(kSeed + 3, static_cast<std::uint64_t>(games)));
                        if (!g) {
                            o.fail(tag(c, "katona-parallel", a) + ": game failed");
                            continue;
                        }
                        if (!g->verdict_valid) o.fail(tag(c, "katona-parallel", a) + ": invalid verdict");
                        if (g->total_queries > bound)
                            o.fail(tag(c, "katona-parallel", a) + ": " + std::to_string(g->total_queries) + " > " +
                                   std::to_string(bound));
                    }
                }
        o.summary = std::to_string(games) + " games";
        return o;
    });

    // 4 -----------------------------------------------------------------------
    report(4, "two-round sandwich for d >= 2", [] {
        Outcome o;
        std::int64_t configs = 0, lower_checked = 0;
        for (int d = 2; d <= 4; ++d)
            for (int n = d; n <= 2000; ++n) {
                const GameConfig c{n, d, 2};
                ++configs;
                const std::int64_t root = ceil_root(static_cast<std::int64_t>(d) * n, 2);
                const std::int64_t upper = 2 * root;
                const std::int64_t lower = 2 * root - 4 * d - 2;

                // upper side: katona-parallel against every suite adversary
                for (const auto& a : suite_adversaries(c)) {
                    auto g = referee(c, "katona-parallel", a, derive_seed(kSeed + 4, static_cast<std::uint64_t>(n * 10 + d)));
                    if (!g || !g->verdict_valid || g->total_queries > upper)
                        o.fail(tag(c, "katona-parallel", a) + ": above " + std::to_string(upper) + " or invalid");
                }

                // lower side: cheapest valid verdict any suite questioner reaches
                // against the good-family adversary
                if (lower <= 0) continue;
                ++lower_checked;
                std::vector<std::pair<std::string, std::uint64_t>> qs{{"katona-parallel", 0}, {"singletons", 0}};
                for (std::uint64_t i = 0; i < 2; ++i)
                    qs.emplace_back("random", derive_seed(kSeed + 5, static_cast<std::uint64_t>(n) * 100 + d * 10 + i));
                std::optional<std::int64_t> cheapest;
                for (const auto& [qname, seed] : qs) {
                    auto g = referee(c, qname, "good-family", seed);
                    if (!g) {
                        o.fail(tag(c, qname, "good-family") + ": game failed");
                        continue;
                    }
                    if (g->verdict_valid && (!cheapest || g->total_queries < *cheapest)) cheapest = g->total_queries;
                }
                if (cheapest && *cheapest < lower)
                    o.fail(tag(c, "suite", "good-family") + ": cheapest valid " + std::to_string(*cheapest) + " < " +
                           std::to_string(lower));
            }
        o.summary = std::to_string(configs) + " configs, lower side active on " + std::to_string(lower_checked);
        return o;
    });

    // 5 -----------------------------------------------------------------------
    report(5, "round invariants on randomized games", [] {
        Outcome o;
        std::map<std::string, InvariantTally> tally;
        std::mt19937_64 rng(kSeed + 6);
        std::int64_t self_reported = 0, heuristic = 0;
        for (int i = 0; i < 10000; ++i) {
            const int n = 1 + static_cast<int>(rng() % 60);
            const int r = 1 + static_cast<int>(rng() % 4);
            const int d = 1 + static_cast<int>(rng() % std::min(n, 3));
            const GameConfig c{n, d, r};
            auto g = referee(c, "random", "endgame-auto", rng());
            if (!g) {
                o.fail(tag(c, "random", "endgame-auto") + ": game failed");
                continue;
            }
            check_round_invariants(*g, tally, o);
            for (const auto& lc : g->ledger_checks) {
                ++self_reported;
                if (!lc.exact) ++heuristic;
                if (!lc.passed) o.fail(tag(c, "random", "endgame-auto") + ": " + lc.name + " " + lc.detail);
            }
        }
        std::ostringstream os;
        os << "10000 games;";
        for (const auto& [name, t] : tally) os << " " << name << " " << t.violations << "/" << t.checked << ";";
        os << " adversary ledger checks " << self_reported << " (" << heuristic << " heuristic)";
        o.summary = os.str();
        return o;
    });

    // 6 -----------------------------------------------------------------------
    report(6, "exact solver inside the bounds", [] {
        Outcome o;
        ExactSolver solver(solver_config_from_env());
        std::vector<GameConfig> grid;
        for (int n = 1; n <= 4; ++n)
            for (int r = 1; r <= 3; ++r) grid.push_back({n, 1, r});
        for (int n = 2; n <= 4; ++n)
            for (int r = 1; r <= 2; ++r) grid.push_back({n, 2, r});
        const SandwichReport s = verify_sandwich(grid, solver);
        std::ostringstream os;
        for (const auto& row : s.rows) {
            os << " (" << row.config.n << "," << row.config.d << "," << row.config.r << ")=" << row.value;
            if (!row.passed) o.fail("value outside bounds at n=" + std::to_string(row.config.n));
        }
        if (s.rows.size() != grid.size()) o.fail("sandwich stopped early");
        if (solver.solve(1, 1, 1) != 1) o.fail("solve(1,1,1) != 1");
        if (solver.solve(2, 1, 1) != 2) o.fail("solve(2,1,1) != 2");
        o.summary = "values" + os.str();
        return o;
    });

    // 7 -----------------------------------------------------------------------
    report(7, "consistency soundness across criteria 1-5", [] {
        Outcome o;
        if (soundness.inconsistent) o.fail(std::to_string(soundness.inconsistent) + " inconsistent; " + soundness.first_problem);
        if (soundness.non_forced) o.fail(std::to_string(soundness.non_forced) + " non-forced; " + soundness.first_problem);
        if (soundness.other_failures) o.fail(std::to_string(soundness.other_failures) + " failed games; " + soundness.first_problem);
        o.summary = std::to_string(soundness.games) + " games, " + std::to_string(soundness.inconsistent) +
                    " inconsistent states, " + std::to_string(soundness.non_forced) + " non-forced verdict elements";
        return o;
    });

    return failures == 0 ? 0 : 1;
}
