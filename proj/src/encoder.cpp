// weakasr/encoder.cpp

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

#include "weakasr/encoder.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "weakasr/rng.hpp"

namespace weakasr {

namespace {

void validate_dims(const EncoderDims& d) {
  if (d.feature_dim < 1 || d.hidden_dim < 1 || d.num_classes < 1 ||
      d.kernel_width < 1 || d.stride < 1 || d.num_ff_layers < 0) {
    throw std::invalid_argument("invalid encoder dims");
  }
  if (d.kernel_width < d.stride) {
    throw std::invalid_argument("kernel width must be >= stride");
  }
}

// Conv weight layout: [h][j][f]; FF weights: [out][in]; output head: [c][h].
struct Activations {
  Matrix conv_out;               // T x H, post-tanh
  std::vector<Matrix> ff_out;    // per layer, T x H, post-tanh
};

Matrix forward_impl(const EncoderParams& p, const Matrix& features,
                    Activations* cache) {
  const EncoderDims& d = p.dims;
  if (features.cols() != static_cast<std::size_t>(d.feature_dim)) {
    throw std::invalid_argument("feature dim mismatch");
  }
  if (features.rows() < static_cast<std::size_t>(d.kernel_width)) {
    throw std::invalid_argument("input too short");
  }
  std::size_t T = output_frames(d, features.rows());
  std::size_t H = d.hidden_dim;
  std::size_t F = d.feature_dim;
  std::size_t k = d.kernel_width;

  Matrix conv_out(T, H);
  const double* conv_w = p.flat.data() + p.conv_offset();
  for (std::size_t t = 0; t < T; ++t) {
    std::size_t start = t * d.stride;
    for (std::size_t h = 0; h < H; ++h) {
      double acc = 0.0;
      const double* w = conv_w + h * k * F;
      for (std::size_t j = 0; j < k; ++j) {
        std::span<const double> x = features.row(start + j);
        for (std::size_t f = 0; f < F; ++f) acc += w[j * F + f] * x[f];
      }
      conv_out.at(t, h) = std::tanh(acc);
    }
  }

  Matrix cur = conv_out;
  std::vector<Matrix> ff_outs;
  for (int layer = 0; layer < d.num_ff_layers; ++layer) {
    const double* w = p.flat.data() + p.ff_w_offset(layer);
    const double* b = p.flat.data() + p.ff_b_offset(layer);
    Matrix next(T, H);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t o = 0; o < H; ++o) {
        double acc = b[o];
        const double* wrow = w + o * H;
        std::span<const double> in = cur.row(t);
        for (std::size_t i = 0; i < H; ++i) acc += wrow[i] * in[i];
        next.at(t, o) = std::tanh(acc);
      }
    }
    if (cache) ff_outs.push_back(next);
    cur = std::move(next);
  }

  std::size_t C = d.num_classes;
  const double* out_w = p.flat.data() + p.out_w_offset();
  const double* out_b = p.flat.data() + p.out_b_offset();
  Matrix logits(T, C);
  for (std::size_t t = 0; t < T; ++t) {
    std::span<const double> in = cur.row(t);
    for (std::size_t c = 0; c < C; ++c) {
      double acc = out_b[c];
      const double* wrow = out_w + c * H;
      for (std::size_t i = 0; i < H; ++i) acc += wrow[i] * in[i];
      logits.at(t, c) = acc;
    }
  }

  if (cache) {
    cache->conv_out = std::move(conv_out);
    cache->ff_out = std::move(ff_outs);
  }
  return logits;
}

}  // namespace

std::size_t EncoderParams::conv_size() const {
  return static_cast<std::size_t>(dims.hidden_dim) * dims.kernel_width *
         dims.feature_dim;
}

std::size_t EncoderParams::ff_w_offset(int layer) const {
  std::size_t h = dims.hidden_dim;
  return conv_size() + static_cast<std::size_t>(layer) * (h * h + h);
}

std::size_t EncoderParams::ff_b_offset(int layer) const {
  std::size_t h = dims.hidden_dim;
  return ff_w_offset(layer) + h * h;
}

std::size_t EncoderParams::out_w_offset() const {
  std::size_t h = dims.hidden_dim;
  return conv_size() + static_cast<std::size_t>(dims.num_ff_layers) * (h * h + h);
}

std::size_t EncoderParams::out_b_offset() const {
  return out_w_offset() +
         static_cast<std::size_t>(dims.num_classes) * dims.hidden_dim;
}

std::size_t EncoderParams::param_count() const {
  return out_b_offset() + dims.num_classes;
}

std::size_t output_frames(const EncoderDims& dims, std::size_t input_frames) {
  if (input_frames < static_cast<std::size_t>(dims.kernel_width)) {
    throw std::invalid_argument("input too short");
  }
  std::size_t valid = input_frames - dims.kernel_width + 1;
  return (valid + dims.stride - 1) / dims.stride;
}

EncoderParams init_encoder(std::uint64_t seed, const EncoderDims& dims) {
  validate_dims(dims);
  EncoderParams p;
  p.dims = dims;
  p.seed = seed;
  p.flat.assign(p.param_count(), 0.0);

  Rng rng = Rng::derive(seed, "encoder-init");
  auto fill = [&](std::size_t offset, std::size_t count, double fan_in) {
    double bound = 1.0 / std::sqrt(fan_in);
    for (std::size_t i = 0; i < count; ++i) {
      p.flat[offset + i] = rng.uniform(-bound, bound);
    }
  };
  std::size_t h = dims.hidden_dim;
  fill(p.conv_offset(), p.conv_size(),
       static_cast<double>(dims.kernel_width) * dims.feature_dim);
  for (int layer = 0; layer < dims.num_ff_layers; ++layer) {
    fill(p.ff_w_offset(layer), h * h + h, static_cast<double>(h));
  }
  fill(p.out_w_offset(), static_cast<std::size_t>(dims.num_classes) * h + dims.num_classes,
       static_cast<double>(h));
  return p;
}

Matrix encoder_forward(const EncoderParams& params, const Matrix& features) {
  return forward_impl(params, features, nullptr);
}

std::vector<double> encoder_backward(const EncoderParams& params,
                                     const Matrix& features,
                                     const Matrix& grad_logits) {
  const EncoderDims& d = params.dims;
  Activations acts;
  Matrix logits = forward_impl(params, features, &acts);
  if (!grad_logits.same_shape(logits)) {
    throw std::invalid_argument("grad_logits shape mismatch");
  }

  std::size_t T = logits.rows();
  std::size_t H = d.hidden_dim;
  std::size_t C = d.num_classes;
  std::size_t F = d.feature_dim;
  std::size_t k = d.kernel_width;

  std::vector<double> grads(params.param_count(), 0.0);

  const Matrix& last_hidden =
      d.num_ff_layers > 0 ? acts.ff_out.back() : acts.conv_out;

  // Output head.
  const double* out_w = params.flat.data() + params.out_w_offset();
  double* g_out_w = grads.data() + params.out_w_offset();
  double* g_out_b = grads.data() + params.out_b_offset();
  Matrix grad_hidden(T, H);  // gradient flowing into the post-tanh hidden
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t c = 0; c < C; ++c) {
      double g = grad_logits.at(t, c);
      if (g == 0.0) continue;
      g_out_b[c] += g;
      const double* wrow = out_w + c * H;
      double* gwrow = g_out_w + c * H;
      std::span<const double> in = last_hidden.row(t);
      for (std::size_t i = 0; i < H; ++i) {
        gwrow[i] += g * in[i];
        grad_hidden.at(t, i) += g * wrow[i];
      }
    }
  }

  // FF layers, back to front.
  for (int layer = d.num_ff_layers - 1; layer >= 0; --layer) {
    const Matrix& out_act = acts.ff_out[static_cast<std::size_t>(layer)];
    const Matrix& in_act =
        layer > 0 ? acts.ff_out[static_cast<std::size_t>(layer - 1)] : acts.conv_out;
    const double* w = params.flat.data() + params.ff_w_offset(layer);
    double* g_w = grads.data() + params.ff_w_offset(layer);
    double* g_b = grads.data() + params.ff_b_offset(layer);
    Matrix grad_in(T, H);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t o = 0; o < H; ++o) {
        double y = out_act.at(t, o);
        double g = grad_hidden.at(t, o) * (1.0 - y * y);  // through tanh
        if (g == 0.0) continue;
        g_b[o] += g;
        const double* wrow = w + o * H;
        double* gwrow = g_w + o * H;
        std::span<const double> in = in_act.row(t);
        for (std::size_t i = 0; i < H; ++i) {
          gwrow[i] += g * in[i];
          grad_in.at(t, i) += g * wrow[i];
        }
      }
    }
    grad_hidden = std::move(grad_in);
  }

  // Conv frontend.
  double* g_conv = grads.data() + params.conv_offset();
  for (std::size_t t = 0; t < T; ++t) {
    std::size_t start = t * d.stride;
    for (std::size_t h = 0; h < H; ++h) {
      double y = acts.conv_out.at(t, h);
      double g = grad_hidden.at(t, h) * (1.0 - y * y);
      if (g == 0.0) continue;
      double* gw = g_conv + h * k * F;
      for (std::size_t j = 0; j < k; ++j) {
        std::span<const double> x = features.row(start + j);
        for (std::size_t f = 0; f < F; ++f) gw[j * F + f] += g * x[f];
      }
    }
  }
  return grads;
}

AdamState init_adam(const EncoderParams& params, double learning_rate) {
  AdamState state;
  state.m.assign(params.param_count(), 0.0);
  state.v.assign(params.param_count(), 0.0);
  state.learning_rate = learning_rate;
  return state;
}

void adam_step(EncoderParams& params, const std::vector<double>& grads,
               AdamState& state) {
  if (grads.size() != params.flat.size() || state.m.size() != grads.size()) {
    throw std::invalid_argument("gradient shape mismatch");
  }
  for (double g : grads) {
    if (!std::isfinite(g)) throw std::runtime_error("diverged");
  }
  state.step += 1;
  double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < grads.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
    double mhat = state.m[i] / bc1;
    double vhat = state.v[i] / bc2;
    params.flat[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
  }
}

namespace {

constexpr std::uint32_t kCheckpointMagic = 0x57415352;  // "WASR"
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated checkpoint");
  return value;
}

}  // namespace

void save_checkpoint(const EncoderParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_pod(out, kCheckpointMagic);
  write_pod(out, kCheckpointVersion);
  write_pod(out, static_cast<std::uint32_t>(params.dims.feature_dim));
  write_pod(out, static_cast<std::uint32_t>(params.dims.hidden_dim));
  write_pod(out, static_cast<std::uint32_t>(params.dims.num_classes));
  write_pod(out, static_cast<std::uint32_t>(params.dims.kernel_width));
  write_pod(out, static_cast<std::uint32_t>(params.dims.stride));
  write_pod(out, static_cast<std::uint32_t>(params.dims.num_ff_layers));
  write_pod(out, params.seed);
  write_pod(out, static_cast<std::uint64_t>(params.flat.size()));
  out.write(reinterpret_cast<const char*>(params.flat.data()),
            static_cast<std::streamsize>(params.flat.size() * sizeof(double)));
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

EncoderParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  if (read_pod<std::uint32_t>(in) != kCheckpointMagic) {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  if (read_pod<std::uint32_t>(in) != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version: " + path);
  }
  EncoderParams p;
  p.dims.feature_dim = static_cast<int>(read_pod<std::uint32_t>(in));
  p.dims.hidden_dim = static_cast<int>(read_pod<std::uint32_t>(in));
  p.dims.num_classes = static_cast<int>(read_pod<std::uint32_t>(in));
  p.dims.kernel_width = static_cast<int>(read_pod<std::uint32_t>(in));
  p.dims.stride = static_cast<int>(read_pod<std::uint32_t>(in));
  p.dims.num_ff_layers = static_cast<int>(read_pod<std::uint32_t>(in));
  p.seed = read_pod<std::uint64_t>(in);
  std::uint64_t count = read_pod<std::uint64_t>(in);
  validate_dims(p.dims);
  if (count != p.param_count()) {
    throw std::runtime_error("checkpoint payload size mismatch: " + path);
  }
  p.flat.resize(count);
  in.read(reinterpret_cast<char*>(p.flat.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  return p;
}

}  // namespace weakasr
