// weakasr/aggloss.cpp

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

#include "weakasr/aggloss.hpp"

#include <cmath>
#include <stdexcept>

#include "weakasr/logmath.hpp"

namespace weakasr {

Emissions log_softmax(const Matrix& logits) {
  if (logits.rows() == 0) throw std::invalid_argument("empty emissions");
  for (double v : logits.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite logits");
  }
  Emissions out;
  out.log_probs = Matrix(logits.rows(), logits.cols());
  for (std::size_t t = 0; t < logits.rows(); ++t) {
    double lse = log_sum_exp(logits.row(t));
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      out.log_probs.at(t, c) = logits.at(t, c) - lse;
    }
  }
  return out;
}

AggregatedDistribution aggregate(const Emissions& emissions) {
  std::size_t T = emissions.num_frames();
  std::size_t C = emissions.num_classes();
  if (T == 0) throw std::invalid_argument("empty emissions");
  AggregatedDistribution agg;
  agg.log_q.assign(C, kNegInf);
  double log_t = std::log(static_cast<double>(T));
  std::vector<double> column(T);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t t = 0; t < T; ++t) column[t] = emissions.log_probs.at(t, c);
    agg.log_q[c] = log_sum_exp(column) - log_t;
  }
  return agg;
}

double cross_entropy(const AggregatedDistribution& agg,
                     const TargetDistribution& target) {
  if (agg.log_q.size() != target.probs.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  double loss = 0.0;
  for (std::size_t c = 0; c < agg.log_q.size(); ++c) {
    if (target.probs[c] > 0.0) loss -= target.probs[c] * agg.log_q[c];
  }
  return loss;
}

LossAndGrad loss_and_grad(const Matrix& logits, const TargetDistribution& target) {
  if (logits.cols() != target.probs.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  Emissions emissions = log_softmax(logits);
  AggregatedDistribution agg = aggregate(emissions);

  LossAndGrad out;
  out.loss = cross_entropy(agg, target);
  out.grad = Matrix(logits.rows(), logits.cols());

  std::size_t T = logits.rows();
  std::size_t C = logits.cols();
  double log_t = std::log(static_cast<double>(T));

  // dL/do[t][c] = -p_c * w[t][c], where w[t][c] = softmax over time of o[.,c];
  // pushing through the per-frame log-softmax adds pi[t][c] * sum_c' p_c' w[t][c'].
  for (std::size_t t = 0; t < T; ++t) {
    double frame_mass = 0.0;  // sum over classes of p_c * w[t][c]
    for (std::size_t c = 0; c < C; ++c) {
      if (target.probs[c] > 0.0) {
        double w = std::exp(emissions.log_probs.at(t, c) - (agg.log_q[c] + log_t));
        out.grad.at(t, c) = -target.probs[c] * w;
        frame_mass += target.probs[c] * w;
      }
    }
    for (std::size_t c = 0; c < C; ++c) {
      double pi = std::exp(emissions.log_probs.at(t, c));
      out.grad.at(t, c) += pi * frame_mass;
    }
  }
  return out;
}

}  // namespace weakasr
