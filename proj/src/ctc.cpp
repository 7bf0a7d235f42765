// weakasr/ctc.cpp

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

#include "weakasr/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "weakasr/logmath.hpp"

namespace weakasr {

LetterAlphabet::LetterAlphabet(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!seen.insert(symbols_[i]).second) {
      throw std::invalid_argument("duplicate alphabet symbol");
    }
    if (symbols_[i] == "|") separator_id_ = static_cast<LetterId>(i);
  }
  if (separator_id_ < 0) throw std::invalid_argument("alphabet needs a separator");
}

LetterAlphabet LetterAlphabet::from_words(const std::vector<std::string>& words,
                                          char separator) {
  std::set<char> chars;
  for (const auto& w : words) {
    if (w == "<unk>") continue;  // never spelled
    for (char c : w) chars.insert(c);
  }
  chars.erase(separator);
  std::vector<std::string> symbols;
  for (char c : chars) symbols.emplace_back(1, c);
  symbols.emplace_back(1, separator);
  return LetterAlphabet(std::move(symbols));
}

LetterId LetterAlphabet::id_of(const std::string& symbol) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == symbol) return static_cast<LetterId>(i);
  }
  throw std::out_of_range("symbol not in alphabet: " + symbol);
}

const std::string& LetterAlphabet::symbol(LetterId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= symbols_.size()) {
    throw std::out_of_range("letter id out of range");
  }
  return symbols_[static_cast<std::size_t>(id)];
}

void LetterAlphabet::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& s : symbols_) out << s << '\n';
}

LetterAlphabet LetterAlphabet::load(const std::string& path, char /*separator*/) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> symbols;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) symbols.push_back(line);
  }
  return LetterAlphabet(std::move(symbols));
}

CtcTarget encode_words(const std::vector<std::string>& words,
                       const LetterAlphabet& alphabet) {
  CtcTarget target;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) target.symbols.push_back(alphabet.separator_id());
    for (char c : words[i]) {
      target.symbols.push_back(alphabet.id_of(std::string(1, c)));
    }
  }
  return target;
}

std::size_t ctc_min_frames(const CtcTarget& target) {
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < target.symbols.size(); ++i) {
    if (target.symbols[i] == target.symbols[i - 1]) ++repeats;
  }
  return target.symbols.size() + repeats;
}

namespace {

Matrix normalize_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t t = 0; t < logits.rows(); ++t) {
    for (double v : logits.row(t)) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite logits");
    }
    double lse = log_sum_exp(logits.row(t));
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      out.at(t, c) = logits.at(t, c) - lse;
    }
  }
  return out;
}

void validate_target(const CtcTarget& target, std::size_t num_classes) {
  LetterId blank = static_cast<LetterId>(num_classes - 1);
  for (LetterId s : target.symbols) {
    if (s < 0 || s >= blank) throw std::invalid_argument("target symbol out of range");
  }
}

}  // namespace

CtcLossAndGrad ctc_loss(const Matrix& logits, const CtcTarget& target) {
  if (logits.rows() == 0) throw std::invalid_argument("empty emissions");
  validate_target(target, logits.cols());
  std::size_t T = logits.rows();
  std::size_t C = logits.cols();
  LetterId blank = static_cast<LetterId>(C - 1);
  if (T < ctc_min_frames(target)) throw std::invalid_argument("target unalignable");

  Matrix o = normalize_rows(logits);

  // Augmented label sequence: blank, l1, blank, l2, ..., blank.
  std::size_t L = target.symbols.size();
  std::size_t S = 2 * L + 1;
  auto label = [&](std::size_t s) -> LetterId {
    return (s % 2 == 1) ? target.symbols[s / 2] : blank;
  };
  auto can_skip = [&](std::size_t s) {
    // A diagonal transition from s-2 to s is allowed for non-blank states
    // whose symbol differs from the previous non-blank symbol.
    return s % 2 == 1 && s >= 2 && label(s) != label(s - 2);
  };

  Matrix log_alpha(T, S, kNegInf);
  log_alpha.at(0, 0) = o.at(0, static_cast<std::size_t>(blank));
  if (S > 1) log_alpha.at(0, 1) = o.at(0, static_cast<std::size_t>(label(1)));
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      double acc = log_alpha.at(t - 1, s);
      if (s >= 1) acc = log_add(acc, log_alpha.at(t - 1, s - 1));
      if (can_skip(s)) acc = log_add(acc, log_alpha.at(t - 1, s - 2));
      if (acc == kNegInf) continue;
      log_alpha.at(t, s) = acc + o.at(t, static_cast<std::size_t>(label(s)));
    }
  }

  double log_p = log_alpha.at(T - 1, S - 1);
  if (S > 1) log_p = log_add(log_p, log_alpha.at(T - 1, S - 2));
  if (log_p == kNegInf) throw std::invalid_argument("target unalignable");

  // Beta excludes the emission at its own frame, so alpha_t + beta_t sums the
  // probability of all paths passing through state s at frame t.
  Matrix log_beta(T, S, kNegInf);
  log_beta.at(T - 1, S - 1) = 0.0;
  if (S > 1) log_beta.at(T - 1, S - 2) = 0.0;
  for (std::size_t t = T - 1; t > 0; --t) {
    for (std::size_t s = 0; s < S; ++s) {
      double acc = kNegInf;
      if (log_beta.at(t, s) != kNegInf) {
        acc = log_beta.at(t, s) + o.at(t, static_cast<std::size_t>(label(s)));
      }
      if (s + 1 < S && log_beta.at(t, s + 1) != kNegInf) {
        acc = log_add(acc, log_beta.at(t, s + 1) +
                               o.at(t, static_cast<std::size_t>(label(s + 1))));
      }
      if (s + 2 < S && can_skip(s + 2) && log_beta.at(t, s + 2) != kNegInf) {
        acc = log_add(acc, log_beta.at(t, s + 2) +
                               o.at(t, static_cast<std::size_t>(label(s + 2))));
      }
      log_beta.at(t - 1, s) = acc;
    }
  }

  CtcLossAndGrad out;
  out.loss = -log_p;
  out.grad = Matrix(T, C);
  for (std::size_t t = 0; t < T; ++t) {
    // gamma[c] = posterior probability of emitting class c at frame t
    std::vector<double> gamma(C, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      double a = log_alpha.at(t, s);
      double b = log_beta.at(t, s);
      if (a == kNegInf || b == kNegInf) continue;
      gamma[static_cast<std::size_t>(label(s))] += std::exp(a + b - log_p);
    }
    for (std::size_t c = 0; c < C; ++c) {
      out.grad.at(t, c) = std::exp(o.at(t, c)) - gamma[c];
    }
  }
  return out;
}

double ctc_brute_force(const Matrix& logits, const CtcTarget& target) {
  std::size_t T = logits.rows();
  std::size_t C = logits.cols();
  if (T == 0) throw std::invalid_argument("empty emissions");
  if (T > 10 || C > 8) throw std::invalid_argument("enumeration bound exceeded");
  validate_target(target, C);
  LetterId blank = static_cast<LetterId>(C - 1);

  Matrix o = normalize_rows(logits);

  // DFS over all C^T labelings, carrying the incremental collapse state:
  // how many target symbols the collapsed prefix has matched, and whether the
  // prefix is still consistent with the target.
  double total = kNegInf;
  struct Frame {
    std::size_t t;
    LetterId prev;
    std::size_t matched;
    bool consistent;
    double log_prob;
  };
  std::vector<Frame> stack;
  stack.push_back({0, -1, 0, true, 0.0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.t == T) {
      if (f.consistent && f.matched == target.symbols.size()) {
        total = log_add(total, f.log_prob);
      }
      continue;
    }
    for (std::size_t c = 0; c < C; ++c) {
      LetterId id = static_cast<LetterId>(c);
      Frame next = f;
      next.t = f.t + 1;
      next.prev = id;
      next.log_prob = f.log_prob + o.at(f.t, c);
      if (f.consistent && id != blank && id != f.prev) {
        // a new collapsed symbol appears
        if (f.matched < target.symbols.size() &&
            target.symbols[f.matched] == id) {
          next.matched = f.matched + 1;
        } else {
          next.consistent = false;
        }
      }
      stack.push_back(next);
    }
  }
  if (total == kNegInf) throw std::invalid_argument("target unalignable");
  return -total;
}

CtcTarget ctc_greedy_decode(const Matrix& log_probs, const LetterAlphabet& alphabet) {
  if (log_probs.cols() != alphabet.num_classes()) {
    throw std::invalid_argument("emissions class count mismatch");
  }
  CtcTarget out;
  LetterId prev = -1;
  for (std::size_t t = 0; t < log_probs.rows(); ++t) {
    std::span<const double> row = log_probs.row(t);
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    LetterId id = static_cast<LetterId>(best);
    if (id != prev && id != alphabet.blank_id()) out.symbols.push_back(id);
    prev = id;
  }
  return out;
}

std::vector<std::string> letters_to_words(const CtcTarget& letters,
                                          const LetterAlphabet& alphabet) {
  std::vector<std::string> words;
  std::string cur;
  for (LetterId id : letters.symbols) {
    if (id == alphabet.separator_id()) {
      if (!cur.empty()) words.push_back(cur);
      cur.clear();
    } else {
      cur += alphabet.symbol(id);
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

}  // namespace weakasr
