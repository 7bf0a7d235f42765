// weakasr/aggloss.hpp

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

#ifndef WEAKASR_AGGLOSS_HPP
#define WEAKASR_AGGLOSS_HPP

#include <vector>

#include "weakasr/matrix.hpp"
#include "weakasr/vocab.hpp"

namespace weakasr {

// T x C per-frame log-probabilities; every row is a valid log-distribution.
struct Emissions {
  Matrix log_probs;
  std::size_t num_frames() const { return log_probs.rows(); }
  std::size_t num_classes() const { return log_probs.cols(); }
};

// Frame-averaged output distribution, in log space.
struct AggregatedDistribution {
  std::vector<double> log_q;
};

// Row-wise logits - LogSumExp(row), with max-subtraction.
Emissions log_softmax(const Matrix& logits);

// Per-class LogSumExp over the time axis, minus log T. exp(log_q) is the
// arithmetic mean of the per-frame distributions.
AggregatedDistribution aggregate(const Emissions& emissions);

// -sum_i p_i * log_q_i, with p_i = 0 terms contributing exactly 0.
double cross_entropy(const AggregatedDistribution& agg,
                     const TargetDistribution& target);

struct LossAndGrad {
  double loss = 0.0;
  Matrix grad;  // d loss / d logits, same shape as the input
};

// cross_entropy(aggregate(log_softmax(logits)), target) together with its
// exact gradient w.r.t. the raw logits.
LossAndGrad loss_and_grad(const Matrix& logits, const TargetDistribution& target);

}  // namespace weakasr

#endif  // WEAKASR_AGGLOSS_HPP
