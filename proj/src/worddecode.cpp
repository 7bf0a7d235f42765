// weakasr/worddecode.cpp

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

#include "weakasr/worddecode.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace weakasr {

namespace {

std::vector<WordId> frame_argmax(const Emissions& emissions) {
  std::vector<WordId> ids(emissions.num_frames());
  for (std::size_t t = 0; t < emissions.num_frames(); ++t) {
    std::span<const double> row = emissions.log_probs.row(t);
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;  // tie keeps the lowest class id
    }
    ids[t] = static_cast<WordId>(best);
  }
  return ids;
}

}  // namespace

PseudoLabel greedy_decode(const Emissions& emissions, const Vocabulary& vocab) {
  if (emissions.num_classes() != vocab.num_classes()) {
    throw std::invalid_argument("emissions class count mismatch");
  }
  PseudoLabel pl;
  Localization loc = localize(emissions, vocab);
  for (const auto& entry : loc.entries) {
    if (entry.word == vocab.unk_id()) pl.unk_positions.push_back(pl.words.size());
    pl.words.push_back(vocab.word(entry.word));
  }
  return pl;
}

Localization localize(const Emissions& emissions, const Vocabulary& vocab) {
  if (emissions.num_classes() != vocab.num_classes()) {
    throw std::invalid_argument("emissions class count mismatch");
  }
  std::vector<WordId> ids = frame_argmax(emissions);
  Localization loc;
  std::size_t t = 0;
  while (t < ids.size()) {
    std::size_t run_start = t;
    WordId id = ids[t];
    while (t < ids.size() && ids[t] == id) ++t;
    if (id != vocab.blank_id()) {
      loc.entries.push_back({id, run_start, t - run_start});
    }
  }
  return loc;
}

std::string pseudo_label_to_json(const PseudoLabel& pl) {
  nlohmann::json j;
  j["id"] = pl.id;
  j["words"] = pl.words;
  j["unk_positions"] = pl.unk_positions;
  return j.dump();
}

PseudoLabel pseudo_label_from_json(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  PseudoLabel pl;
  pl.id = j.value("id", std::string());
  pl.words = j.at("words").get<std::vector<std::string>>();
  pl.unk_positions = j.at("unk_positions").get<std::vector<std::size_t>>();
  for (std::size_t i = 0; i < pl.words.size(); ++i) {
    bool listed = false;
    for (std::size_t u : pl.unk_positions) listed |= (u == i);
    if ((pl.words[i] == kUnkWord) != listed) {
      throw std::runtime_error("unk_positions inconsistent with words");
    }
  }
  return pl;
}

void save_pseudo_labels(const std::vector<PseudoLabel>& pls, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& pl : pls) out << pseudo_label_to_json(pl) << '\n';
}

std::vector<PseudoLabel> load_pseudo_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<PseudoLabel> pls;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    pls.push_back(pseudo_label_from_json(line));
  }
  return pls;
}

}  // namespace weakasr
