// weakasr/synthdata.hpp

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

#ifndef WEAKASR_SYNTHDATA_HPP
#define WEAKASR_SYNTHDATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "weakasr/matrix.hpp"
#include "weakasr/vocab.hpp"

namespace weakasr {

struct SynthConfig {
  int num_common_words = 30;  // frequent words, meant to land in the vocab
  int num_rare_words = 5;     // deliberately rare, meant to stay OOV
  int feature_dim = 8;
  int min_word_frames = 3;
  int max_word_frames = 6;
  int min_silence_frames = 0;
  int max_silence_frames = 4;
  double noise_sigma = 0.3;
  int min_sentence_words = 3;
  int max_sentence_words = 8;
  int num_train = 2000;
  int num_dev = 200;
  int num_lm_sentences = 5000;
  double rare_word_weight = 0.07;  // relative stationary mass of rare words
  std::uint64_t seed = 1;
};

struct SyntheticSample {
  std::string id;
  Matrix features;  // T_in x F
  Bag bag;          // the only training supervision
  std::vector<std::string> ref_transcript;  // evaluation only
  std::vector<std::size_t> ref_onsets;      // input-frame indices, eval only
};

// First-order Markov word grammar with no self-transitions. Sentences start
// from the stationary distribution, so token frequencies match it.
struct WordGrammar {
  std::vector<std::string> words;
  Matrix transition;               // row i: P(next | current = i)
  std::vector<double> stationary;  // left eigenvector, L1-normalized
  std::vector<std::vector<double>> prototypes;  // one F-dim vector per word
};

WordGrammar build_grammar(const SynthConfig& config);

struct GeneratedCorpus {
  std::vector<SyntheticSample> train;
  std::vector<SyntheticSample> dev;
  std::vector<std::vector<std::string>> lm_corpus;  // independent draws
};

GeneratedCorpus generate_corpus(const SynthConfig& config);

// Word-level Levenshtein distance with unit costs.
std::size_t edit_distance(const std::vector<std::string>& ref,
                          const std::vector<std::string>& hyp);

// edit_distance / |ref|; |ref| = 0 is an error.
double wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

// WER of the reference with every OOV word replaced by <unk> (the
// vocabulary-restricted oracle lower bound).
double oracle_restricted_wer(const std::vector<std::string>& ref,
                             const Vocabulary& vocab);

// Same oracle but deleting OOV words instead of substituting them. At unit
// edit costs this coincides with the substitution variant; both are reported.
double oracle_restricted_wer_delete(const std::vector<std::string>& ref,
                                    const Vocabulary& vocab);

// Corpus-level WER: summed edit distance over summed reference length.
double corpus_wer(const std::vector<std::vector<std::string>>& refs,
                  const std::vector<std::vector<std::string>>& hyps);

// Dataset JSON-lines: {id, frames, bag, ref, onsets}. Training consumers use
// load_train_view, which does not expose ref/onsets at all.
void save_dataset(const std::vector<SyntheticSample>& samples,
                  const std::string& path);
std::vector<SyntheticSample> load_dataset(const std::string& path);

struct TrainSample {
  std::string id;
  Matrix features;
  Bag bag;
};
std::vector<TrainSample> load_train_view(const std::string& path);

void save_lm_corpus(const std::vector<std::vector<std::string>>& sentences,
                    const std::string& path);
std::vector<std::vector<std::string>> load_lm_corpus(const std::string& path);

}  // namespace weakasr

#endif  // WEAKASR_SYNTHDATA_HPP
