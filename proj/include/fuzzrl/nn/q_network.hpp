// Copyright 2026 The FuzzRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FUZZRL_NN_Q_NETWORK_HPP_
#define FUZZRL_NN_Q_NETWORK_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzrl/nn/kernels.hpp"

namespace fuzzrl {

struct QNetDims {
  size_t obs_bits = 32768;  // 8 * max_len
  size_t embed = 64;
  size_t lstm = 64;
  size_t actions = 13;

  size_t ParamCount() const {
    return embed * obs_bits + embed + 4 * lstm * embed + 4 * lstm * lstm +
           4 * lstm + actions * lstm + actions;
  }
  friend bool operator==(const QNetDims&, const QNetDims&) = default;
};

// Affine bit embedding -> single LSTM layer -> affine head to 13
// Q-values. Row-major blocks; the LSTM gate rows stack as i, f, g, o.
struct QNetParams {
  QNetDims dims;
  std::vector<Real> embed_w;  // embed x obs_bits
  std::vector<Real> embed_b;  // embed
  std::vector<Real> lstm_wx;  // 4*lstm x embed
  std::vector<Real> lstm_wh;  // 4*lstm x lstm
  std::vector<Real> lstm_b;   // 4*lstm
  std::vector<Real> head_w;   // actions x lstm
  std::vector<Real> head_b;   // actions

  static QNetParams Zeros(const QNetDims& dims);
  // Uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per block, seeded.
  static QNetParams Init(const QNetDims& dims, uint64_t seed);

  // Fixed block order used by SGD, checkpoints and gradient checks.
  std::vector<std::vector<Real>*> Blocks();
  std::vector<const std::vector<Real>*> Blocks() const;
  static const char* BlockName(size_t index);
};

struct RecurrentState {
  std::vector<Real> h;
  std::vector<Real> c;

  static RecurrentState Zero(size_t units) {
    RecurrentState s;
    s.h.assign(units, 0);
    s.c.assign(units, 0);
    return s;
  }
  friend bool operator==(const RecurrentState&, const RecurrentState&) =
      default;
};

// Intermediate values of one forward step, kept for backprop.
struct ForwardCache {
  std::vector<uint8_t> bits;  // input copy
  std::vector<Real> x;        // embed output
  std::vector<Real> h_prev, c_prev;
  std::vector<Real> i, f, g, o;  // post-activation gates
  std::vector<Real> c, h, tanh_c;
  std::vector<Real> q;
};

// One forward step. Updates *state; fills *cache when non-null.
// bits must have exactly dims.obs_bits elements (0/1 each).
std::vector<Real> QForward(const QNetParams& p, const uint8_t* bits,
                           RecurrentState* state, ForwardCache* cache);

// Backprop through a sequence of cached steps. dq[t] holds dLoss/dq_t
// (length actions). Gradients accumulate into *grads (same shape as p,
// caller zeroes). Gradients w.r.t. the initial state are discarded.
void QBackwardSequence(const QNetParams& p,
                       const std::vector<ForwardCache>& caches,
                       const std::vector<std::vector<Real>>& dq,
                       QNetParams* grads);

// a* = argmax_a q_online_next (ties -> lowest index);
// returns done ? r : r + gamma * q_target_next[a*].
Real DoubleQTargetFromValues(Real r, bool done, Real gamma,
                             const std::vector<Real>& q_online_next,
                             const std::vector<Real>& q_target_next);

size_t ArgmaxLowest(const std::vector<Real>& v);

// Checkpoint file: "FQNW" magic, u32 version, u32 dims x4, parameter
// blocks as little-endian f64 in Blocks() order, FNV-1a checksum of all
// preceding bytes. Returns false / nullopt with *error set on failure.
bool SaveCheckpoint(const QNetParams& p, const std::string& path,
                    std::string* error);
std::optional<QNetParams> LoadCheckpoint(const std::string& path,
                                         std::string* error);

}  // namespace fuzzrl

#endif  // FUZZRL_NN_Q_NETWORK_HPP_
