// weakasr/vocab.cpp

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

#include "weakasr/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace weakasr {

std::string fold_case(const std::string& word) {
  std::string out = word;
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] == kBlankWord) {
      throw std::invalid_argument("<blank> cannot be a vocabulary word");
    }
    auto [it, inserted] = index_.emplace(words_[i], static_cast<WordId>(i));
    if (!inserted) throw std::invalid_argument("duplicate vocabulary word");
    if (words_[i] == kUnkWord) unk_id_ = static_cast<WordId>(i);
  }
  if (unk_id_ < 0) throw std::invalid_argument("vocabulary must contain <unk>");
}

WordId Vocabulary::id_of(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? unk_id_ : it->second;
}

bool Vocabulary::contains(const std::string& word) const {
  return index_.count(word) > 0;
}

const std::string& Vocabulary::word(WordId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= words_.size()) {
    throw std::out_of_range("word id out of range");
  }
  return words_[static_cast<std::size_t>(id)];
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& w : words_) out << w << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return Vocabulary(std::move(words));
}

Vocabulary build_vocabulary(const std::vector<Bag>& bags, int top_k) {
  if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
  std::map<std::string, long long> counts;
  long long total = 0;
  for (const auto& bag : bags) {
    for (const auto& [word, count] : bag) {
      std::string folded = fold_case(word);
      if (folded == kUnkWord || folded == kBlankWord) continue;
      counts[folded] += count;
      total += count;
    }
  }
  if (total == 0) throw std::invalid_argument("empty corpus");

  std::vector<std::pair<std::string, long long>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > static_cast<std::size_t>(top_k)) ranked.resize(top_k);

  std::vector<std::string> words;
  words.reserve(ranked.size() + 1);
  for (const auto& [word, count] : ranked) words.push_back(word);
  words.push_back(kUnkWord);
  return Vocabulary(std::move(words));
}

TargetDistribution make_target(const Bag& words, const Vocabulary& vocab,
                               double alpha) {
  if (alpha < 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("alpha must be in [0, 1)");
  }
  long long total = 0;
  std::vector<long long> class_counts(vocab.num_classes(), 0);
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    class_counts[static_cast<std::size_t>(vocab.id_of(fold_case(word)))] += count;
    total += count;
  }
  if (total == 0) throw std::invalid_argument("empty transcript");

  TargetDistribution target;
  target.blank_prior = alpha;
  target.probs.assign(vocab.num_classes(), 0.0);
  for (std::size_t c = 0; c + 1 < vocab.num_classes(); ++c) {
    if (class_counts[c] > 0) {
      target.probs[c] = (1.0 - alpha) * static_cast<double>(class_counts[c]) /
                        static_cast<double>(total);
    }
  }
  target.probs[static_cast<std::size_t>(vocab.blank_id())] = alpha;
  return target;
}

double default_alpha(double words_per_second, double frames_per_second) {
  if (frames_per_second <= 0.0) {
    throw std::invalid_argument("frame rate must be positive");
  }
  if (words_per_second < 0.0) {
    throw std::invalid_argument("word rate must be non-negative");
  }
  if (words_per_second > frames_per_second) {
    throw std::invalid_argument("rate exceeds frame rate");
  }
  double alpha = 1.0 - words_per_second / frames_per_second;
  return std::clamp(alpha, 0.0, 0.99);
}

}  // namespace weakasr
