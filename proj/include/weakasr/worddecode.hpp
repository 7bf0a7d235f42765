// weakasr/worddecode.hpp

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

#ifndef WEAKASR_WORDDECODE_HPP
#define WEAKASR_WORDDECODE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "weakasr/aggloss.hpp"
#include "weakasr/vocab.hpp"

namespace weakasr {

// Decoded word sequence. Words are stored as strings so that downstream
// rewriting (unk replacement) can introduce words outside the acoustic
// vocabulary. unk_positions lists exactly the indices holding <unk>.
struct PseudoLabel {
  std::string id;
  std::vector<std::string> words;
  std::vector<std::size_t> unk_positions;
};

struct LocalizationEntry {
  WordId word = 0;
  std::size_t onset_frame = 0;  // output-frame index; scale by the encoder
                                // stride for input-frame coordinates
  std::size_t span = 0;
};

struct Localization {
  std::vector<LocalizationEntry> entries;
};

// Per-frame argmax (ties to the lowest class id), collapse adjacent repeats,
// drop <blank>.
PseudoLabel greedy_decode(const Emissions& emissions, const Vocabulary& vocab);

// Maximal equal-argmax runs; each non-blank run contributes
// (word, first frame of run, run length).
Localization localize(const Emissions& emissions, const Vocabulary& vocab);

// JSON-lines: {"id": ..., "words": [...], "unk_positions": [...]}.
std::string pseudo_label_to_json(const PseudoLabel& pl);
PseudoLabel pseudo_label_from_json(const std::string& line);
void save_pseudo_labels(const std::vector<PseudoLabel>& pls, const std::string& path);
std::vector<PseudoLabel> load_pseudo_labels(const std::string& path);

}  // namespace weakasr

#endif  // WEAKASR_WORDDECODE_HPP
