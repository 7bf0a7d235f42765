// weakasr/synthdata.cpp

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

#include "weakasr/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "weakasr/rng.hpp"

namespace weakasr {

namespace {

void validate_config(const SynthConfig& c) {
  if (c.num_common_words < 1 || c.num_rare_words < 0 || c.feature_dim < 1 ||
      c.min_word_frames < 1 || c.max_word_frames < c.min_word_frames ||
      c.min_silence_frames < 0 || c.max_silence_frames < c.min_silence_frames ||
      c.noise_sigma < 0.0 || c.min_sentence_words < 1 ||
      c.max_sentence_words < c.min_sentence_words || c.rare_word_weight <= 0.0) {
    throw std::invalid_argument("invalid synth config");
  }
}

std::string word_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "w%02d", index);
  return buf;
}

// Inverse-CDF draw from a normalized weight row.
std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

std::vector<std::string> sample_sentence(const WordGrammar& grammar,
                                         const SynthConfig& config, Rng& rng) {
  int length = static_cast<int>(
      rng.uniform_int(config.min_sentence_words, config.max_sentence_words));
  std::vector<std::string> words;
  std::size_t cur = sample_index(grammar.stationary, rng);
  words.push_back(grammar.words[cur]);
  for (int i = 1; i < length; ++i) {
    cur = sample_index(grammar.transition.row(cur), rng);
    words.push_back(grammar.words[cur]);
  }
  return words;
}

SyntheticSample render_sample(const WordGrammar& grammar, const SynthConfig& config,
                              const std::string& id, Rng& rng) {
  SyntheticSample sample;
  sample.id = id;
  sample.ref_transcript = sample_sentence(grammar, config, rng);
  for (const auto& w : sample.ref_transcript) sample.bag[w] += 1;

  std::size_t F = static_cast<std::size_t>(config.feature_dim);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < sample.ref_transcript.size(); ++i) {
    if (i > 0) {
      int gap = static_cast<int>(
          rng.uniform_int(config.min_silence_frames, config.max_silence_frames));
      for (int g = 0; g < gap; ++g) rows.emplace_back(F, 0.0);
    }
    sample.ref_onsets.push_back(rows.size());
    std::size_t word = 0;
    for (; word < grammar.words.size(); ++word) {
      if (grammar.words[word] == sample.ref_transcript[i]) break;
    }
    int dur = static_cast<int>(
        rng.uniform_int(config.min_word_frames, config.max_word_frames));
    for (int d = 0; d < dur; ++d) rows.push_back(grammar.prototypes[word]);
  }

  sample.features = Matrix(rows.size(), F);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t f = 0; f < F; ++f) {
      sample.features.at(t, f) = rows[t][f] + config.noise_sigma * rng.normal();
    }
  }
  return sample;
}

}  // namespace

WordGrammar build_grammar(const SynthConfig& config) {
  validate_config(config);
  int W = config.num_common_words + config.num_rare_words;
  WordGrammar grammar;
  for (int i = 0; i < W; ++i) grammar.words.push_back(word_name(i));

  Rng rng = Rng::derive(config.seed, "grammar");
  std::vector<double> base(static_cast<std::size_t>(W), 1.0);
  for (int i = config.num_common_words; i < W; ++i) {
    base[static_cast<std::size_t>(i)] = config.rare_word_weight;
  }

  grammar.transition = Matrix(static_cast<std::size_t>(W), static_cast<std::size_t>(W));
  for (int i = 0; i < W; ++i) {
    double total = 0.0;
    for (int j = 0; j < W; ++j) {
      // No self-transitions: immediate word repeats would be collapsed by
      // greedy decoding and poison the reference WER.
      double v = (i == j) ? 0.0
                          : base[static_cast<std::size_t>(j)] * rng.uniform(0.25, 1.75);
      grammar.transition.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
      total += v;
    }
    for (int j = 0; j < W; ++j) {
      grammar.transition.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) /= total;
    }
  }

  // Stationary distribution by power iteration.
  grammar.stationary.assign(static_cast<std::size_t>(W), 1.0 / W);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<double> next(static_cast<std::size_t>(W), 0.0);
    for (int i = 0; i < W; ++i) {
      double pi = grammar.stationary[static_cast<std::size_t>(i)];
      for (int j = 0; j < W; ++j) {
        next[static_cast<std::size_t>(j)] +=
            pi * grammar.transition.at(static_cast<std::size_t>(i),
                                       static_cast<std::size_t>(j));
      }
    }
    double total = 0.0;
    for (double v : next) total += v;
    for (double& v : next) v /= total;
    grammar.stationary = std::move(next);
  }

  Rng proto_rng = Rng::derive(config.seed, "prototypes");
  for (int i = 0; i < W; ++i) {
    std::vector<double> proto(static_cast<std::size_t>(config.feature_dim));
    for (double& v : proto) v = proto_rng.uniform(-1.0, 1.0);
    grammar.prototypes.push_back(std::move(proto));
  }
  return grammar;
}

GeneratedCorpus generate_corpus(const SynthConfig& config) {
  WordGrammar grammar = build_grammar(config);
  GeneratedCorpus corpus;
  char buf[32];
  for (int i = 0; i < config.num_train; ++i) {
    Rng rng = Rng::derive(config.seed, "train-sample", static_cast<std::uint64_t>(i));
    std::snprintf(buf, sizeof(buf), "train-%06d", i);
    corpus.train.push_back(render_sample(grammar, config, buf, rng));
  }
  for (int i = 0; i < config.num_dev; ++i) {
    Rng rng = Rng::derive(config.seed, "dev-sample", static_cast<std::uint64_t>(i));
    std::snprintf(buf, sizeof(buf), "dev-%06d", i);
    corpus.dev.push_back(render_sample(grammar, config, buf, rng));
  }
  for (int i = 0; i < config.num_lm_sentences; ++i) {
    Rng rng = Rng::derive(config.seed, "lm-sentence", static_cast<std::uint64_t>(i));
    corpus.lm_corpus.push_back(sample_sentence(grammar, config, rng));
  }
  return corpus;
}

std::size_t edit_distance(const std::vector<std::string>& ref,
                          const std::vector<std::string>& hyp) {
  std::size_t n = ref.size();
  std::size_t m = hyp.size();
  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  if (ref.empty()) throw std::invalid_argument("empty reference");
  return static_cast<double>(edit_distance(ref, hyp)) /
         static_cast<double>(ref.size());
}

double oracle_restricted_wer(const std::vector<std::string>& ref,
                             const Vocabulary& vocab) {
  std::vector<std::string> hyp;
  for (const auto& w : ref) {
    hyp.push_back(vocab.contains(fold_case(w)) ? w : std::string(kUnkWord));
  }
  return wer(ref, hyp);
}

double oracle_restricted_wer_delete(const std::vector<std::string>& ref,
                                    const Vocabulary& vocab) {
  std::vector<std::string> hyp;
  for (const auto& w : ref) {
    if (vocab.contains(fold_case(w))) hyp.push_back(w);
  }
  return wer(ref, hyp);
}

double corpus_wer(const std::vector<std::vector<std::string>>& refs,
                  const std::vector<std::vector<std::string>>& hyps) {
  if (refs.size() != hyps.size()) throw std::invalid_argument("size mismatch");
  std::size_t errors = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (refs[i].empty()) throw std::invalid_argument("empty reference");
    errors += edit_distance(refs[i], hyps[i]);
    total += refs[i].size();
  }
  if (total == 0) throw std::invalid_argument("empty reference");
  return static_cast<double>(errors) / static_cast<double>(total);
}

void save_dataset(const std::vector<SyntheticSample>& samples,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& s : samples) {
    nlohmann::json j;
    j["id"] = s.id;
    std::vector<std::vector<double>> frames;
    for (std::size_t t = 0; t < s.features.rows(); ++t) {
      frames.emplace_back(s.features.row(t).begin(), s.features.row(t).end());
    }
    j["frames"] = frames;
    j["bag"] = s.bag;
    j["ref"] = s.ref_transcript;
    j["onsets"] = s.ref_onsets;
    out << j.dump() << '\n';
  }
}

namespace {

Matrix frames_from_json(const nlohmann::json& j) {
  auto frames = j.at("frames").get<std::vector<std::vector<double>>>();
  if (frames.empty()) throw std::runtime_error("sample has no frames");
  Matrix features(frames.size(), frames[0].size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    if (frames[t].size() != frames[0].size()) {
      throw std::runtime_error("ragged frame rows");
    }
    for (std::size_t f = 0; f < frames[t].size(); ++f) {
      features.at(t, f) = frames[t][f];
    }
  }
  return features;
}

}  // namespace

std::vector<SyntheticSample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<SyntheticSample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    SyntheticSample s;
    s.id = j.value("id", std::string());
    s.features = frames_from_json(j);
    s.bag = j.at("bag").get<Bag>();
    s.ref_transcript = j.at("ref").get<std::vector<std::string>>();
    s.ref_onsets = j.at("onsets").get<std::vector<std::size_t>>();
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<TrainSample> load_train_view(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<TrainSample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    TrainSample s;
    s.id = j.value("id", std::string());
    s.features = frames_from_json(j);
    s.bag = j.at("bag").get<Bag>();
    samples.push_back(std::move(s));
  }
  return samples;
}

void save_lm_corpus(const std::vector<std::vector<std::string>>& sentences,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i > 0) out << ' ';
      out << s[i];
    }
    out << '\n';
  }
}

std::vector<std::vector<std::string>> load_lm_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::vector<std::string>> sentences;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> words;
    std::string word;
    for (char c : line) {
      if (c == ' ' || c == '\t') {
        if (!word.empty()) words.push_back(fold_case(word));
        word.clear();
      } else {
        word += c;
      }
    }
    if (!word.empty()) words.push_back(fold_case(word));
    if (!words.empty()) sentences.push_back(std::move(words));
  }
  return sentences;
}

}  // namespace weakasr
