// weakasr/encoder.hpp

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

#ifndef WEAKASR_ENCODER_HPP
#define WEAKASR_ENCODER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "weakasr/matrix.hpp"

namespace weakasr {

struct EncoderDims {
  int feature_dim = 8;   // F
  int hidden_dim = 32;   // H
  int num_classes = 0;   // C
  int kernel_width = 7;  // k
  int stride = 3;        // s
  int num_ff_layers = 2; // d
};

// Strided 1-D convolution frontend (no bias) -> tanh -> d feedforward layers
// (H->H, tanh) -> linear output head (H->C). All parameters live in one flat
// vector; block order is conv weights, then per-layer FF weights and biases,
// then output weights and bias. That order is also the checkpoint payload
// order.
struct EncoderParams {
  EncoderDims dims;
  std::uint64_t seed = 0;
  std::vector<double> flat;

  std::size_t conv_offset() const { return 0; }
  std::size_t conv_size() const;
  std::size_t ff_w_offset(int layer) const;
  std::size_t ff_b_offset(int layer) const;
  std::size_t out_w_offset() const;
  std::size_t out_b_offset() const;
  std::size_t param_count() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long step = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

EncoderParams init_encoder(std::uint64_t seed, const EncoderDims& dims);

// Number of output frames for a given input length: ceil((T_in - k + 1) / s).
std::size_t output_frames(const EncoderDims& dims, std::size_t input_frames);

// features: T_in x F -> logits: T x C. Throws "input too short" if T_in < k.
Matrix encoder_forward(const EncoderParams& params, const Matrix& features);

// Exact chain-rule gradient of the logits w.r.t. every parameter, contracted
// with grad_logits. Recomputes the forward activations internally.
std::vector<double> encoder_backward(const EncoderParams& params,
                                     const Matrix& features,
                                     const Matrix& grad_logits);

AdamState init_adam(const EncoderParams& params, double learning_rate);

// One bias-corrected Adam update, in place. Throws "diverged" on non-finite
// gradients.
void adam_step(EncoderParams& params, const std::vector<double>& grads,
               AdamState& state);

// Versioned binary checkpoint: header {format_version, dims, seed} followed by
// the flat little-endian float64 payload in declaration order.
void save_checkpoint(const EncoderParams& params, const std::string& path);
EncoderParams load_checkpoint(const std::string& path);

}  // namespace weakasr

#endif  // WEAKASR_ENCODER_HPP
