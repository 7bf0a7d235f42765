// weakasr/ctc.hpp

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

#ifndef WEAKASR_CTC_HPP
#define WEAKASR_CTC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "weakasr/matrix.hpp"

namespace weakasr {

using LetterId = std::int32_t;

// Ordered unique symbols plus the word separator; blank is the implicit last
// class (id = num symbols).
class LetterAlphabet {
 public:
  LetterAlphabet() = default;
  explicit LetterAlphabet(std::vector<std::string> symbols);

  // Alphabet covering the characters of the given words, sorted, plus the
  // separator.
  static LetterAlphabet from_words(const std::vector<std::string>& words,
                                   char separator = '|');

  LetterId id_of(const std::string& symbol) const;
  const std::string& symbol(LetterId id) const;
  std::size_t size() const { return symbols_.size(); }
  std::size_t num_classes() const { return size() + 1; }
  LetterId blank_id() const { return static_cast<LetterId>(size()); }
  LetterId separator_id() const { return separator_id_; }

  // One symbol per line; blank implicit.
  void save(const std::string& path) const;
  static LetterAlphabet load(const std::string& path, char separator = '|');

 private:
  std::vector<std::string> symbols_;
  LetterId separator_id_ = -1;
};

struct CtcTarget {
  std::vector<LetterId> symbols;  // no blanks
};

// Spell a word sequence into letters, joining words with the separator.
CtcTarget encode_words(const std::vector<std::string>& words,
                       const LetterAlphabet& alphabet);

// Shortest input that can align to the target: |target| plus one blank per
// adjacent repeated pair.
std::size_t ctc_min_frames(const CtcTarget& target);

struct CtcLossAndGrad {
  double loss = 0.0;
  Matrix grad;  // d loss / d logits
};

// Negative log-probability of all alignments collapsing to the target, by
// forward-backward in log space over log_softmax(logits). The gradient is
// exact w.r.t. the raw logits. Throws "target unalignable" when T is below
// the minimum length.
CtcLossAndGrad ctc_loss(const Matrix& logits, const CtcTarget& target);

// Test oracle: enumerate all C^T frame labelings and sum the probabilities of
// those collapsing to the target. Bounds: T <= 10, C <= 8.
double ctc_brute_force(const Matrix& logits, const CtcTarget& target);

// Greedy decode with CTC collapse semantics over letters.
CtcTarget ctc_greedy_decode(const Matrix& log_probs, const LetterAlphabet& alphabet);

// Split a decoded letter sequence back into words at the separator.
std::vector<std::string> letters_to_words(const CtcTarget& letters,
                                          const LetterAlphabet& alphabet);

}  // namespace weakasr

#endif  // WEAKASR_CTC_HPP
