// weakasr/vocab.hpp

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

#ifndef WEAKASR_VOCAB_HPP
#define WEAKASR_VOCAB_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace weakasr {

using WordId = std::int32_t;
using Bag = std::map<std::string, int>;  // word -> count, unordered supervision

inline constexpr const char* kUnkWord = "<unk>";
inline constexpr const char* kBlankWord = "<blank>";

// Closed word vocabulary. Ids are dense in [0, size()]; <unk> is always a
// member; <blank> is the extra last class (id = size()) and is never stored
// as a word.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  WordId id_of(const std::string& word) const;  // OOV -> unk id
  bool contains(const std::string& word) const;
  const std::string& word(WordId id) const;

  std::size_t size() const { return words_.size(); }        // |V|, incl. <unk>
  std::size_t num_classes() const { return size() + 1; }    // |V| + <blank>
  WordId unk_id() const { return unk_id_; }
  WordId blank_id() const { return static_cast<WordId>(size()); }

  const std::vector<std::string>& words() const { return words_; }

  // One word per line, line number = id. <blank> is implicit.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::vector<std::string> words_;
  std::map<std::string, WordId> index_;
  WordId unk_id_ = -1;
};

// Per-sample training label: a distribution over |V|+1 classes, with the
// blank class pinned at the prior alpha.
struct TargetDistribution {
  std::vector<double> probs;
  double blank_prior = 0.0;
};

// Most frequent top_k words across all bags (ties broken by ascending
// lexicographic order), plus <unk>. Words are case-folded before counting.
Vocabulary build_vocabulary(const std::vector<Bag>& bags, int top_k);

TargetDistribution make_target(const Bag& words, const Vocabulary& vocab,
                               double alpha);

// 1 - words_per_second / frames_per_second, clamped to [0, 0.99].
double default_alpha(double words_per_second, double frames_per_second);

std::string fold_case(const std::string& word);

}  // namespace weakasr

#endif  // WEAKASR_VOCAB_HPP
