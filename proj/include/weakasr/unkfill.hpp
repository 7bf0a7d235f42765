// weakasr/unkfill.hpp

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

#ifndef WEAKASR_UNKFILL_HPP
#define WEAKASR_UNKFILL_HPP

#include <optional>
#include <string>
#include <vector>

#include "weakasr/ngramlm.hpp"
#include "weakasr/vocab.hpp"
#include "weakasr/worddecode.hpp"

namespace weakasr {

enum class FillStrategy {
  kRemove,                  // delete every <unk>
  kReplaceFullVocab,        // candidates = the LM vocabulary
  kReplaceTranscriptVocab,  // candidates = bag words known to the LM
};

std::string to_string(FillStrategy strategy);
FillStrategy fill_strategy_from_string(const std::string& name);

struct FillResult {
  PseudoLabel pl;
  FillStrategy strategy = FillStrategy::kRemove;
  int beam_width = 1;
  // Unk positions (indices into the input PL) that had to be removed because
  // the candidate set was empty.
  std::vector<std::size_t> fallback_positions;
};

// Replace (or remove) the <unk> tokens of a pseudo-label, maximizing the LM
// likelihood of the resulting sentence with a left-to-right beam over unk
// positions. Non-unk tokens are never modified by the Replace strategies.
// The pruning score of a partial hypothesis covers the sentence prefix up to
// the just-filled position plus up to n-1 following known words; the final
// winner is chosen by full-sentence score, ties broken by lexicographically
// smallest assignment.
FillResult fill_unk(const PseudoLabel& pl, const NGramModel& lm,
                    FillStrategy strategy, const std::optional<Bag>& bag,
                    int beam_width);

// Oracle: scores every complete assignment of candidates to unk positions
// with the full-sentence LM score and returns the argmax (ties to the
// lexicographically smallest assignment). Bound: |candidates|^#unks <= 1e5.
PseudoLabel exhaustive_fill(const PseudoLabel& pl, const NGramModel& lm,
                            const std::vector<std::string>& candidates);

// JSON-lines with per-line fill metadata appended to the PL schema.
void save_fill_results(const std::vector<FillResult>& results,
                       const std::string& path);
std::vector<FillResult> load_fill_results(const std::string& path);

}  // namespace weakasr

#endif  // WEAKASR_UNKFILL_HPP
