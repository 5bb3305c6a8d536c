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

#include "fuzzrl/agent/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzrl {

std::vector<uint8_t> ExpandBits(const std::vector<uint8_t>& input,
                                size_t obs_bits) {
  std::vector<uint8_t> bits(obs_bits, 0);
  size_t usable = std::min(input.size(), obs_bits / 8);
  for (size_t j = 0; j < usable; ++j) {
    uint8_t b = input[j];
    for (int k = 0; k < 8; ++k) {
      bits[8 * j + static_cast<size_t>(k)] =
          static_cast<uint8_t>((b >> (7 - k)) & 1);
    }
  }
  return bits;
}

PrioritizedReplay::PrioritizedReplay(size_t capacity, double alpha)
    : capacity_(capacity), alpha_(alpha) {
  if (capacity_ == 0) throw std::invalid_argument("replay capacity 0");
  leaves_ = 1;
  while (leaves_ < capacity_) leaves_ <<= 1;
  tree_.assign(2 * leaves_, 0.0);
  items_.resize(capacity_);
}

void PrioritizedReplay::SetLeaf(size_t index, double value) {
  size_t node = leaves_ + index;
  tree_[node] = value;
  for (node >>= 1; node >= 1; node >>= 1) {
    tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
    if (node == 1) break;
  }
}

size_t PrioritizedReplay::SampleIndex(double u) const {
  size_t node = 1;
  while (node < leaves_) {
    size_t left = 2 * node;
    if (u < tree_[left]) {
      node = left;
    } else {
      u -= tree_[left];
      node = left + 1;
    }
  }
  size_t index = node - leaves_;
  // Floating-point edge: u could fall just past the last occupied leaf.
  if (index >= size_) index = size_ - 1;
  return index;
}

size_t PrioritizedReplay::Add(Transition t) {
  size_t slot = next_;
  items_[slot] = std::move(t);
  SetLeaf(slot, std::pow(max_raw_priority_, alpha_));
  next_ = (next_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
  return slot;
}

std::vector<PrioritizedReplay::Sampled> PrioritizedReplay::SampleBatch(
    size_t batch, double beta, RngStream& rng) {
  if (size_ == 0) throw std::logic_error("sampling from empty replay");
  std::vector<Sampled> out(batch);
  double tot = total();
  double max_w = 0;
  for (size_t b = 0; b < batch; ++b) {
    double u = rng.Real01() * tot;
    size_t idx = SampleIndex(u);
    double p = tree_[leaves_ + idx] / tot;
    double w = std::pow(static_cast<double>(size_) * p, -beta);
    out[b] = Sampled{idx, w, p};
    max_w = std::max(max_w, w);
  }
  if (max_w > 0) {
    for (auto& s : out) s.weight /= max_w;
  }
  return out;
}

void PrioritizedReplay::UpdatePriority(size_t index, double raw_priority) {
  if (index >= size_) throw std::out_of_range("replay index");
  if (raw_priority <= 0) throw std::invalid_argument("priority must be > 0");
  max_raw_priority_ = std::max(max_raw_priority_, raw_priority);
  SetLeaf(index, std::pow(raw_priority, alpha_));
}

}  // namespace fuzzrl
