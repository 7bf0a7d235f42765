// weakasr/unkfill.cpp

// Copyright 2026 The weakasr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "weakasr/unkfill.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace weakasr {

std::string to_string(FillStrategy strategy) {
  switch (strategy) {
    case FillStrategy::kRemove: return "remove";
    case FillStrategy::kReplaceFullVocab: return "full";
    case FillStrategy::kReplaceTranscriptVocab: return "transcript";
  }
  throw std::logic_error("unknown strategy");
}

FillStrategy fill_strategy_from_string(const std::string& name) {
  if (name == "remove") return FillStrategy::kRemove;
  if (name == "full") return FillStrategy::kReplaceFullVocab;
  if (name == "transcript") return FillStrategy::kReplaceTranscriptVocab;
  throw std::invalid_argument("unknown fill strategy: " + name);
}

namespace {

PseudoLabel remove_unks(const PseudoLabel& pl) {
  PseudoLabel out;
  out.id = pl.id;
  for (const auto& w : pl.words) {
    if (w != kUnkWord) out.words.push_back(w);
  }
  return out;
}

// Score of the sentence prefix tokens[0..end_index], with assigned unk
// positions substituted. Unassigned unk positions never fall inside the
// scored prefix.
double prefix_score(const NGramModel& lm, const std::vector<std::string>& tokens,
                    std::size_t end_index) {
  std::vector<std::string> prefix(tokens.begin(),
                                  tokens.begin() + static_cast<std::ptrdiff_t>(end_index) + 1);
  return score(lm, prefix);
}

struct Hypothesis {
  std::vector<std::string> assignment;
  double score = 0.0;
};

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.assignment < b.assignment;
}

}  // namespace

FillResult fill_unk(const PseudoLabel& pl, const NGramModel& lm,
                    FillStrategy strategy, const std::optional<Bag>& bag,
                    int beam_width) {
  if (beam_width < 1) throw std::invalid_argument("beam width must be >= 1");
  if (strategy == FillStrategy::kReplaceTranscriptVocab && !bag.has_value()) {
    throw std::invalid_argument("transcript strategy requires the sample bag");
  }

  FillResult result;
  result.strategy = strategy;
  result.beam_width = beam_width;

  if (pl.unk_positions.empty()) {
    result.pl = pl;
    return result;
  }
  if (strategy == FillStrategy::kRemove) {
    result.pl = remove_unks(pl);
    return result;
  }

  std::vector<std::string> candidates;
  if (strategy == FillStrategy::kReplaceFullVocab) {
    candidates = lm.vocab_words();
  } else {
    std::set<std::string> set;
    for (const auto& [word, count] : *bag) {
      if (count <= 0) continue;
      std::string folded = fold_case(word);
      if (lm.contains(folded)) set.insert(folded);
    }
    candidates.assign(set.begin(), set.end());
  }
  if (candidates.empty()) {
    result.pl = remove_unks(pl);
    result.fallback_positions = pl.unk_positions;
    return result;
  }

  const std::vector<std::size_t>& positions = pl.unk_positions;
  std::vector<Hypothesis> beam{{{}, 0.0}};
  for (std::size_t j = 0; j < positions.size(); ++j) {
    // Scored prefix: through this unk plus up to n-1 following known words,
    // stopping before the next unfilled unk.
    std::size_t end_index = positions[j];
    std::size_t limit = j + 1 < positions.size() ? positions[j + 1] - 1
                                                 : pl.words.size() - 1;
    end_index = std::min(limit, end_index + static_cast<std::size_t>(lm.order() - 1));

    std::vector<Hypothesis> expanded;
    expanded.reserve(beam.size() * candidates.size());
    for (const auto& hyp : beam) {
      std::vector<std::string> tokens = pl.words;
      for (std::size_t a = 0; a < hyp.assignment.size(); ++a) {
        tokens[positions[a]] = hyp.assignment[a];
      }
      for (const auto& cand : candidates) {
        tokens[positions[j]] = cand;
        Hypothesis next;
        next.assignment = hyp.assignment;
        next.assignment.push_back(cand);
        next.score = prefix_score(lm, tokens, end_index);
        expanded.push_back(std::move(next));
      }
    }
    std::sort(expanded.begin(), expanded.end(), better);
    if (expanded.size() > static_cast<std::size_t>(beam_width)) {
      expanded.resize(static_cast<std::size_t>(beam_width));
    }
    beam = std::move(expanded);
  }

  // Final selection by full-sentence score.
  Hypothesis best;
  bool first = true;
  for (auto& hyp : beam) {
    std::vector<std::string> tokens = pl.words;
    for (std::size_t a = 0; a < positions.size(); ++a) {
      tokens[positions[a]] = hyp.assignment[a];
    }
    hyp.score = score(lm, tokens);
    if (first || better(hyp, best)) {
      best = hyp;
      first = false;
    }
  }

  result.pl.id = pl.id;
  result.pl.words = pl.words;
  for (std::size_t a = 0; a < positions.size(); ++a) {
    result.pl.words[positions[a]] = best.assignment[a];
  }
  return result;
}

PseudoLabel exhaustive_fill(const PseudoLabel& pl, const NGramModel& lm,
                            const std::vector<std::string>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("no candidates");
  std::vector<std::string> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());

  const std::vector<std::size_t>& positions = pl.unk_positions;
  double combos = std::pow(static_cast<double>(sorted.size()),
                           static_cast<double>(positions.size()));
  if (combos > 1e5) throw std::invalid_argument("assignment space too large");

  PseudoLabel best;
  best.id = pl.id;
  if (positions.empty()) {
    best.words = pl.words;
    best.unk_positions = pl.unk_positions;
    return best;
  }

  std::vector<std::size_t> odometer(positions.size(), 0);
  double best_score = 0.0;
  bool first = true;
  while (true) {
    std::vector<std::string> tokens = pl.words;
    for (std::size_t a = 0; a < positions.size(); ++a) {
      tokens[positions[a]] = sorted[odometer[a]];
    }
    double s = score(lm, tokens);
    // Iterating assignments in lexicographic order, a strict improvement is
    // required to replace the incumbent, so ties keep the smallest.
    if (first || s > best_score) {
      best.words = tokens;
      best_score = s;
      first = false;
    }
    std::size_t pos = positions.size();
    while (pos > 0) {
      --pos;
      if (++odometer[pos] < sorted.size()) break;
      odometer[pos] = 0;
      if (pos == 0) return best;
    }
  }
}

void save_fill_results(const std::vector<FillResult>& results,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& r : results) {
    nlohmann::json j;
    j["id"] = r.pl.id;
    j["words"] = r.pl.words;
    j["unk_positions"] = r.pl.unk_positions;
    j["strategy"] = to_string(r.strategy);
    j["beam_width"] = r.beam_width;
    j["fallback_positions"] = r.fallback_positions;
    out << j.dump() << '\n';
  }
}

std::vector<FillResult> load_fill_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<FillResult> results;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    FillResult r;
    r.pl.id = j.value("id", std::string());
    r.pl.words = j.at("words").get<std::vector<std::string>>();
    r.pl.unk_positions = j.at("unk_positions").get<std::vector<std::size_t>>();
    r.strategy = fill_strategy_from_string(j.at("strategy").get<std::string>());
    r.beam_width = j.at("beam_width").get<int>();
    r.fallback_positions = j.at("fallback_positions").get<std::vector<std::size_t>>();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace weakasr
