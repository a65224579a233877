#include "roundsearch/transcript_io.hpp"

namespace roundsearch {

using nlohmann::json;

void to_json(json& j, const GameConfig& c) { j = json{{"n", c.n}, {"d", c.d}, {"r", c.r}}; }

void from_json(const json& j, GameConfig& c) {
    j.at("n").get_to(c.n);
    j.at("d").get_to(c.d);
    j.at("r").get_to(c.r);
}

void to_json(json& j, const Verdict& v) {
    if (v.kind == Verdict::Kind::found) j = json{{"kind", "found"}, {"elements", v.elements}};
    else j = json{{"kind", "fewer_than_d"}};
}

void from_json(const json& j, Verdict& v) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "found") {
        v = Verdict::found(j.at("elements").get<ElementSet>());
    } else if (kind == "fewer_than_d") {
        v = Verdict::fewer_than_d();
    } else {
        throw std::invalid_argument("unknown verdict kind: " + kind);
    }
}

Answer parse_answer(const std::string& s) {
    if (s == "yes") return Answer::yes;
    if (s == "no") return Answer::no;
    throw std::invalid_argument("answer must be \"yes\" or \"no\", got \"" + s + "\"");
}

void to_json(json& j, const RoundRecord& r) {
    json answers = json::array();
    for (Answer a : r.answers) answers.push_back(to_string(a));
    j = json{{"index", r.index}, {"queries", r.queries}, {"answers", std::move(answers)}};
}

void from_json(const json& j, RoundRecord& r) {
    j.at("index").get_to(r.index);
    j.at("queries").get_to(r.queries);
    r.answers.clear();
    for (const auto& a : j.at("answers")) r.answers.push_back(parse_answer(a.get<std::string>()));
    if (r.answers.size() != r.queries.size())
        throw std::invalid_argument("round " + std::to_string(r.index) + ": answers/queries length mismatch");
}

void to_json(json& j, const Transcript& t) {
    j = json{{"config", t.config}, {"rounds", t.rounds}};
    if (t.verdict) j["verdict"] = *t.verdict;
}

void from_json(const json& j, Transcript& t) {
    j.at("config").get_to(t.config);
    j.at("rounds").get_to(t.rounds);
    t.verdict.reset();
    if (j.contains("verdict")) t.verdict = j.at("verdict").get<Verdict>();
    int expected = 1;
    for (const auto& round : t.rounds) {
        if (round.index != expected) throw std::invalid_argument("round indices must run 1, 2, ...");
        ++expected;
    }
}

std::string dump_transcript(const Transcript& t, int indent) { return json(t).dump(indent); }

Transcript parse_transcript(const std::string& text) { return json::parse(text).get<Transcript>(); }

}  // namespace roundsearch
