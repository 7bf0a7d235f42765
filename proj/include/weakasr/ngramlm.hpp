// weakasr/ngramlm.hpp

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

#ifndef WEAKASR_NGRAMLM_HPP
#define WEAKASR_NGRAMLM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace weakasr {

// Backoff n-gram model with interpolated add-k smoothing:
//
//   P_i(w | ctx) = (c(ctx, w) + k*M*P_{i-1}(w | ctx')) / (c(ctx) + k*M)
//
// where M = |V_lm| + 1 (words plus <unk>) and the base case is uniform over
// M classes. Contexts are padded with start markers; OOV query words map to
// <unk>. A context never seen at order i scores exactly as the order-(i-1)
// model.
class NGramModel {
 public:
  using TokenId = std::int32_t;

  int order() const { return order_; }
  double smoothing_k() const { return k_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t num_classes() const { return vocab_.size() + 1; }
  const std::vector<std::string>& vocab_words() const { return vocab_; }
  bool contains(const std::string& word) const;

  // Log probability of one conditional event, after OOV mapping.
  double log_prob(const std::vector<std::string>& context,
                  const std::string& word) const;

  // ARPA-like plain text: \data\ header, then per-order blocks of
  // "logprob <ngram> [backoff]" lines with natural-log values.
  void save(const std::string& path) const;
  static NGramModel load(const std::string& path);

  friend NGramModel train_ngram(const std::vector<std::vector<std::string>>& corpus,
                                int order, double k);
  friend double score(const NGramModel& model,
                      const std::vector<std::string>& sentence);

 private:
  TokenId token_id(const std::string& word) const;  // OOV -> unk id

  int order_ = 0;
  double k_ = 0.0;
  std::vector<std::string> vocab_;            // sorted, case-folded
  std::map<std::string, TokenId> index_;
  // probs_[i]: full (i+1)-grams (context + predicted id) -> log P.
  // bows_[i]: contexts of length i+1 -> log backoff weight.
  std::vector<std::map<std::vector<TokenId>, double>> probs_;
  std::vector<std::map<std::vector<TokenId>, double>> bows_;
};

// Corpus sentences are whitespace-free word lists; words are case-folded.
NGramModel train_ngram(const std::vector<std::vector<std::string>>& corpus,
                       int order, double k);

// Sum of log P(w_t | previous n-1 words) with start-marker padding. The
// empty sentence has no word events and scores 0 (the boundary-only event is
// certain).
double score(const NGramModel& model, const std::vector<std::string>& sentence);

}  // namespace weakasr

#endif  // WEAKASR_NGRAMLM_HPP
