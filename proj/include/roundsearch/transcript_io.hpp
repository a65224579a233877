#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "roundsearch/types.hpp"

namespace roundsearch {

// JSON layout:
//
//   {
//     "config":  {"d": 1, "n": 9, "r": 2},
//     "rounds":  [{"answers": ["yes", "no"], "index": 1, "queries": [[1,2,3],[4,5,6]]}],
//     "verdict": {"elements": [3], "kind": "found"}      // or {"kind": "fewer_than_d"}
//   }
//
// "verdict" is omitted when the game has none. Keys are emitted in sorted
// order, so parse followed by dump reproduces the input byte for byte.

void to_json(nlohmann::json& j, const GameConfig& c);
void from_json(const nlohmann::json& j, GameConfig& c);
void to_json(nlohmann::json& j, const Verdict& v);
void from_json(const nlohmann::json& j, Verdict& v);
void to_json(nlohmann::json& j, const RoundRecord& r);
void from_json(const nlohmann::json& j, RoundRecord& r);
void to_json(nlohmann::json& j, const Transcript& t);
void from_json(const nlohmann::json& j, Transcript& t);

Answer parse_answer(const std::string& s);

std::string dump_transcript(const Transcript& t, int indent = -1);
Transcript parse_transcript(const std::string& text);

}  // namespace roundsearch
