// weakasr/ngramlm.cpp

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

#include "weakasr/ngramlm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "weakasr/vocab.hpp"

namespace weakasr {

namespace {

constexpr const char* kStartWord = "<s>";
constexpr double kPseudoLogProb = -99.0;  // context-only lines, never queried

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool NGramModel::contains(const std::string& word) const {
  return index_.count(fold_case(word)) > 0;
}

NGramModel::TokenId NGramModel::token_id(const std::string& word) const {
  auto it = index_.find(word);
  if (it != index_.end()) return it->second;
  return static_cast<TokenId>(vocab_.size());  // unk
}

double NGramModel::log_prob(const std::vector<std::string>& context,
                            const std::string& word) const {
  TokenId unk = static_cast<TokenId>(vocab_.size());
  TokenId start = unk + 1;
  std::vector<TokenId> ctx;
  for (const auto& c : context) {
    std::string folded = fold_case(c);
    ctx.push_back(folded == kStartWord ? start : token_id(folded));
  }
  TokenId w = token_id(fold_case(word));

  // Back off from the longest usable order down to unigrams, accumulating
  // backoff weights of the contexts we fall out of.
  double bow_acc = 0.0;
  int max_order = std::min<int>(order_, static_cast<int>(ctx.size()) + 1);
  for (int i = max_order; i >= 1; --i) {
    std::vector<TokenId> key(ctx.end() - (i - 1), ctx.end());
    key.push_back(w);
    auto it = probs_[static_cast<std::size_t>(i - 1)].find(key);
    if (it != probs_[static_cast<std::size_t>(i - 1)].end()) {
      return bow_acc + it->second;
    }
    if (i >= 2) {
      std::vector<TokenId> c(ctx.end() - (i - 1), ctx.end());
      auto bit = bows_[static_cast<std::size_t>(i - 2)].find(c);
      if (bit != bows_[static_cast<std::size_t>(i - 2)].end()) {
        bow_acc += bit->second;
      }
    }
  }
  throw std::logic_error("unigram table must cover every event");
}

NGramModel train_ngram(const std::vector<std::vector<std::string>>& corpus,
                       int order, double k) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (k <= 0.0) throw std::invalid_argument("smoothing constant must be positive");
  bool any_token = false;
  for (const auto& s : corpus) any_token |= !s.empty();
  if (corpus.empty() || !any_token) throw std::invalid_argument("empty corpus");

  NGramModel model;
  model.order_ = order;
  model.k_ = k;

  std::set<std::string> vocab_set;
  for (const auto& sentence : corpus) {
    for (const auto& raw : sentence) {
      std::string w = fold_case(raw);
      if (w == kStartWord || w == kUnkWord) continue;
      vocab_set.insert(w);
    }
  }
  model.vocab_.assign(vocab_set.begin(), vocab_set.end());
  for (std::size_t i = 0; i < model.vocab_.size(); ++i) {
    model.index_[model.vocab_[i]] = static_cast<NGramModel::TokenId>(i);
  }
  NGramModel::TokenId unk = static_cast<NGramModel::TokenId>(model.vocab_.size());
  NGramModel::TokenId start = unk + 1;
  std::size_t M = model.num_classes();

  // Count full n-grams and context totals for all orders.
  std::vector<std::map<std::vector<NGramModel::TokenId>, long long>> counts(
      static_cast<std::size_t>(order));
  std::vector<std::map<std::vector<NGramModel::TokenId>, long long>> ctx_totals(
      static_cast<std::size_t>(order));
  for (const auto& sentence : corpus) {
    std::vector<NGramModel::TokenId> padded(static_cast<std::size_t>(order - 1), start);
    for (const auto& raw : sentence) {
      std::string w = fold_case(raw);
      if (w == kStartWord) continue;
      padded.push_back(w == kUnkWord ? unk : model.index_.at(w));
    }
    for (std::size_t t = static_cast<std::size_t>(order - 1); t < padded.size(); ++t) {
      for (int i = 1; i <= order; ++i) {
        std::vector<NGramModel::TokenId> ctx(padded.begin() + t - (i - 1),
                                             padded.begin() + t);
        std::vector<NGramModel::TokenId> full = ctx;
        full.push_back(padded[t]);
        counts[static_cast<std::size_t>(i - 1)][full] += 1;
        ctx_totals[static_cast<std::size_t>(i - 1)][ctx] += 1;
      }
    }
  }

  // Derive linear probabilities bottom-up, then store logs.
  std::vector<std::map<std::vector<NGramModel::TokenId>, double>> linear(
      static_cast<std::size_t>(order));
  model.probs_.resize(static_cast<std::size_t>(order));
  model.bows_.resize(static_cast<std::size_t>(order > 0 ? order - 1 : 0));

  double km = k * static_cast<double>(M);
  long long n_tokens = ctx_totals[0].empty() ? 0 : ctx_totals[0].begin()->second;
  for (NGramModel::TokenId e = 0; e <= unk; ++e) {
    std::vector<NGramModel::TokenId> key{e};
    auto it = counts[0].find(key);
    long long c = it == counts[0].end() ? 0 : it->second;
    double p = (static_cast<double>(c) + k) / (static_cast<double>(n_tokens) + km);
    linear[0][key] = p;
    model.probs_[0][key] = std::log(p);
  }

  // Linear-space lookup against the tables built so far.
  auto linear_prob = [&](int i, const std::vector<NGramModel::TokenId>& ctx,
                         NGramModel::TokenId w) {
    double weight = 1.0;
    for (int j = i; j >= 1; --j) {
      std::vector<NGramModel::TokenId> key(ctx.end() - (j - 1), ctx.end());
      key.push_back(w);
      auto it = linear[static_cast<std::size_t>(j - 1)].find(key);
      if (it != linear[static_cast<std::size_t>(j - 1)].end()) {
        return weight * it->second;
      }
      if (j >= 2) {
        std::vector<NGramModel::TokenId> c(ctx.end() - (j - 1), ctx.end());
        auto tit = ctx_totals[static_cast<std::size_t>(j - 1)].find(c);
        if (tit != ctx_totals[static_cast<std::size_t>(j - 1)].end()) {
          weight *= km / (static_cast<double>(tit->second) + km);
        }
      }
    }
    throw std::logic_error("unigram table must cover every event");
  };

  for (int i = 2; i <= order; ++i) {
    for (const auto& [full, c] : counts[static_cast<std::size_t>(i - 1)]) {
      std::vector<NGramModel::TokenId> ctx(full.begin(), full.end() - 1);
      std::vector<NGramModel::TokenId> lower_ctx(full.begin() + 1, full.end() - 1);
      long long ctx_total = ctx_totals[static_cast<std::size_t>(i - 1)].at(ctx);
      double lower = linear_prob(i - 1, lower_ctx, full.back());
      double p = (static_cast<double>(c) + km * lower) /
                 (static_cast<double>(ctx_total) + km);
      linear[static_cast<std::size_t>(i - 1)][full] = p;
      model.probs_[static_cast<std::size_t>(i - 1)][full] = std::log(p);
    }
  }
  for (int i = 1; i < order; ++i) {
    for (const auto& [ctx, total] : ctx_totals[static_cast<std::size_t>(i)]) {
      model.bows_[static_cast<std::size_t>(i - 1)][ctx] =
          std::log(km) - std::log(static_cast<double>(total) + km);
    }
  }
  return model;
}

double score(const NGramModel& model, const std::vector<std::string>& sentence) {
  std::vector<std::string> context(static_cast<std::size_t>(model.order_ - 1),
                                   kStartWord);
  double total = 0.0;
  for (const auto& word : sentence) {
    total += model.log_prob(context, word);
    if (model.order_ > 1) {
      context.erase(context.begin());
      context.push_back(fold_case(word));
    }
  }
  return total;
}

void NGramModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  TokenId unk = static_cast<TokenId>(vocab_.size());
  TokenId start = unk + 1;
  auto token_name = [&](TokenId id) -> std::string {
    if (id == unk) return kUnkWord;
    if (id == start) return kStartWord;
    return vocab_[static_cast<std::size_t>(id)];
  };

  out << "weakasr-ngram-1\n";
  out << "order " << order_ << "\n";
  out << "k " << format_double(k_) << "\n";
  out << "classes " << num_classes() << "\n";
  for (int i = 1; i <= order_; ++i) {
    out << "\\" << i << "-grams:\n";
    // Union of event n-grams and bow-only contexts of this length.
    std::map<std::vector<TokenId>, std::pair<bool, double>> lines;
    for (const auto& [ngram, logp] : probs_[static_cast<std::size_t>(i - 1)]) {
      lines[ngram] = {true, logp};
    }
    if (i < order_) {
      for (const auto& [ctx, bow] : bows_[static_cast<std::size_t>(i - 1)]) {
        (void)bow;
        lines.emplace(ctx, std::make_pair(false, kPseudoLogProb));
      }
    }
    for (const auto& [ngram, entry] : lines) {
      out << format_double(entry.second);
      for (TokenId id : ngram) out << ' ' << token_name(id);
      if (i < order_) {
        auto bit = bows_[static_cast<std::size_t>(i - 1)].find(ngram);
        if (bit != bows_[static_cast<std::size_t>(i - 1)].end()) {
          out << ' ' << format_double(bit->second);
        }
      }
      out << '\n';
    }
  }
  out << "\\end\\\n";
}

NGramModel NGramModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(pos + 1) +
                             ": parse error: " + what);
  };
  auto have = [&]() { return pos < lines.size(); };

  NGramModel model;
  if (!have() || lines[pos] != "weakasr-ngram-1") fail("bad magic");
  ++pos;
  std::size_t classes = 0;
  {
    if (!have()) fail("missing order header");
    std::istringstream ss(lines[pos]);
    std::string tag;
    if (!(ss >> tag >> model.order_) || tag != "order" || model.order_ < 1) {
      fail("bad order header");
    }
    ++pos;
    if (!have()) fail("missing k header");
    std::istringstream ks(lines[pos]);
    if (!(ks >> tag >> model.k_) || tag != "k") fail("bad k header");
    ++pos;
    if (!have()) fail("missing classes header");
    std::istringstream cs(lines[pos]);
    if (!(cs >> tag >> classes) || tag != "classes") fail("bad classes header");
    ++pos;
  }

  struct RawEntry {
    double logp;
    std::vector<std::string> ngram;
    bool has_bow = false;
    double bow = 0.0;
  };
  std::vector<std::vector<RawEntry>> raw(static_cast<std::size_t>(model.order_));
  std::set<std::string> events;
  for (int i = 1; i <= model.order_; ++i) {
    std::string expect = "\\" + std::to_string(i) + "-grams:";
    if (!have() || lines[pos] != expect) fail("missing " + expect + " section");
    ++pos;
    while (true) {
      if (!have()) fail("truncated file inside " + expect);
      const std::string& line = lines[pos];
      if (!line.empty() && line[0] == '\\') break;  // next section header
      ++pos;
      if (line.empty()) continue;
      std::istringstream ss(line);
      RawEntry e;
      if (!(ss >> e.logp)) fail("bad logprob");
      std::vector<std::string> rest;
      std::string tok;
      while (ss >> tok) rest.push_back(tok);
      std::size_t want = static_cast<std::size_t>(i);
      if (rest.size() == want + 1 && i < model.order_) {
        try {
          std::size_t parsed = 0;
          e.bow = std::stod(rest.back(), &parsed);
          if (parsed != rest.back().size()) fail("bad backoff weight");
          e.has_bow = true;
          rest.pop_back();
        } catch (const std::invalid_argument&) {
          fail("bad backoff weight");
        }
      }
      if (rest.size() != want) fail("wrong n-gram length");
      e.ngram = std::move(rest);
      if (i == 1 && e.ngram[0] != kStartWord && e.ngram[0] != kUnkWord) {
        events.insert(e.ngram[0]);
      }
      raw[static_cast<std::size_t>(i - 1)].push_back(std::move(e));
    }
  }
  if (!have() || lines[pos] != "\\end\\") fail("missing \\end\\ section");

  model.vocab_.assign(events.begin(), events.end());
  for (std::size_t i = 0; i < model.vocab_.size(); ++i) {
    model.index_[model.vocab_[i]] = static_cast<TokenId>(i);
  }
  if (model.num_classes() != classes) {
    throw std::runtime_error(path + ": classes header does not match 1-gram block");
  }
  TokenId unk = static_cast<TokenId>(model.vocab_.size());
  TokenId start = unk + 1;
  auto to_id = [&](const std::string& w) -> TokenId {
    if (w == kUnkWord) return unk;
    if (w == kStartWord) return start;
    auto it = model.index_.find(w);
    if (it == model.index_.end()) {
      throw std::runtime_error(path + ": n-gram word missing from 1-gram block: " + w);
    }
    return it->second;
  };

  model.probs_.resize(static_cast<std::size_t>(model.order_));
  model.bows_.resize(static_cast<std::size_t>(model.order_ > 0 ? model.order_ - 1 : 0));
  for (int i = 1; i <= model.order_; ++i) {
    for (const auto& e : raw[static_cast<std::size_t>(i - 1)]) {
      std::vector<TokenId> ids;
      for (const auto& w : e.ngram) ids.push_back(to_id(w));
      if (e.logp != kPseudoLogProb) {
        model.probs_[static_cast<std::size_t>(i - 1)][ids] = e.logp;
      }
      if (e.has_bow) model.bows_[static_cast<std::size_t>(i - 1)][ids] = e.bow;
    }
  }
  return model;
}

}  // namespace weakasr
