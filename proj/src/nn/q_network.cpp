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

#include "fuzzrl/nn/q_network.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "fuzzrl/rng.hpp"
#include "fuzzrl/test_input.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");
static_assert(sizeof(fuzzrl::Real) == 8, "checkpoint format stores f64");

namespace fuzzrl {

namespace {

inline Real Sigmoid(Real z) { return Real(1) / (Real(1) + std::exp(-z)); }

void InitBlock(std::vector<Real>& block, size_t fan_in, RngStream& rng) {
  Real bound = Real(1) / std::sqrt(static_cast<Real>(fan_in));
  for (Real& v : block) v = (2 * rng.Real01() - 1) * bound;
}

constexpr char kMagic[4] = {'F', 'Q', 'N', 'W'};
constexpr uint32_t kVersion = 1;

}  // namespace

QNetParams QNetParams::Zeros(const QNetDims& dims) {
  QNetParams p;
  p.dims = dims;
  p.embed_w.assign(dims.embed * dims.obs_bits, 0);
  p.embed_b.assign(dims.embed, 0);
  p.lstm_wx.assign(4 * dims.lstm * dims.embed, 0);
  p.lstm_wh.assign(4 * dims.lstm * dims.lstm, 0);
  p.lstm_b.assign(4 * dims.lstm, 0);
  p.head_w.assign(dims.actions * dims.lstm, 0);
  p.head_b.assign(dims.actions, 0);
  return p;
}

QNetParams QNetParams::Init(const QNetDims& dims, uint64_t seed) {
  QNetParams p = Zeros(dims);
  RngStream rng(seed);
  InitBlock(p.embed_w, dims.obs_bits, rng);
  InitBlock(p.embed_b, dims.obs_bits, rng);
  InitBlock(p.lstm_wx, dims.embed + dims.lstm, rng);
  InitBlock(p.lstm_wh, dims.embed + dims.lstm, rng);
  InitBlock(p.lstm_b, dims.embed + dims.lstm, rng);
  InitBlock(p.head_w, dims.lstm, rng);
  InitBlock(p.head_b, dims.lstm, rng);
  return p;
}

std::vector<std::vector<Real>*> QNetParams::Blocks() {
  return {&embed_w, &embed_b, &lstm_wx, &lstm_wh,
          &lstm_b,  &head_w,  &head_b};
}

std::vector<const std::vector<Real>*> QNetParams::Blocks() const {
  return {&embed_w, &embed_b, &lstm_wx, &lstm_wh,
          &lstm_b,  &head_w,  &head_b};
}

const char* QNetParams::BlockName(size_t index) {
  static constexpr const char* kNames[] = {
      "embed_w", "embed_b", "lstm_wx", "lstm_wh", "lstm_b", "head_w",
      "head_b"};
  return kNames[index];
}

std::vector<Real> QForward(const QNetParams& p, const uint8_t* bits,
                           RecurrentState* state, ForwardCache* cache) {
  const QNetDims& d = p.dims;
  if (state->h.size() != d.lstm || state->c.size() != d.lstm) {
    throw std::invalid_argument("recurrent state size mismatch");
  }

  std::vector<Real> x(d.embed);
  kern::MatvecBits(p.embed_w.data(), bits, p.embed_b.data(), x.data(),
                   d.embed, d.obs_bits);

  std::vector<Real> z(4 * d.lstm);
  kern::Matvec(p.lstm_wx.data(), x.data(), p.lstm_b.data(), z.data(),
               4 * d.lstm, d.embed);
  std::vector<Real> zh(4 * d.lstm);
  kern::Matvec(p.lstm_wh.data(), state->h.data(), nullptr, zh.data(),
               4 * d.lstm, d.lstm);
  for (size_t i = 0; i < 4 * d.lstm; ++i) z[i] += zh[i];

  std::vector<Real> gi(d.lstm), gf(d.lstm), gg(d.lstm), go(d.lstm);
  std::vector<Real> c_new(d.lstm), h_new(d.lstm), tanh_c(d.lstm);
  for (size_t u = 0; u < d.lstm; ++u) {
    gi[u] = Sigmoid(z[u]);
    gf[u] = Sigmoid(z[d.lstm + u]);
    gg[u] = std::tanh(z[2 * d.lstm + u]);
    go[u] = Sigmoid(z[3 * d.lstm + u]);
    c_new[u] = gf[u] * state->c[u] + gi[u] * gg[u];
    tanh_c[u] = std::tanh(c_new[u]);
    h_new[u] = go[u] * tanh_c[u];
  }

  std::vector<Real> q(d.actions);
  kern::Matvec(p.head_w.data(), h_new.data(), p.head_b.data(), q.data(),
               d.actions, d.lstm);

  if (cache) {
    cache->bits.assign(bits, bits + d.obs_bits);
    cache->x = x;
    cache->h_prev = state->h;
    cache->c_prev = state->c;
    cache->i = gi;
    cache->f = gf;
    cache->g = gg;
    cache->o = go;
    cache->c = c_new;
    cache->h = h_new;
    cache->tanh_c = tanh_c;
    cache->q = q;
  }

  state->h = std::move(h_new);
  state->c = std::move(c_new);
  return q;
}

void QBackwardSequence(const QNetParams& p,
                       const std::vector<ForwardCache>& caches,
                       const std::vector<std::vector<Real>>& dq,
                       QNetParams* grads) {
  const QNetDims& d = p.dims;
  if (caches.size() != dq.size()) {
    throw std::invalid_argument("cache/dq length mismatch");
  }
  std::vector<Real> dh_next(d.lstm, 0);  // dLoss/dh_t from step t+1
  std::vector<Real> dc_next(d.lstm, 0);

  for (size_t t = caches.size(); t-- > 0;) {
    const ForwardCache& cc = caches[t];

    // Head.
    std::vector<Real> dh(d.lstm, 0);
    kern::MatvecT(p.head_w.data(), dq[t].data(), dh.data(), d.actions,
                  d.lstm);
    kern::OuterAccum(grads->head_w.data(), dq[t].data(), cc.h.data(),
                     d.actions, d.lstm);
    for (size_t a = 0; a < d.actions; ++a) grads->head_b[a] += dq[t][a];
    for (size_t u = 0; u < d.lstm; ++u) dh[u] += dh_next[u];

    // LSTM cell.
    std::vector<Real> dz(4 * d.lstm);
    std::vector<Real> dc(d.lstm);
    for (size_t u = 0; u < d.lstm; ++u) {
      Real doo = dh[u] * cc.tanh_c[u];
      dc[u] = dh[u] * cc.o[u] * (1 - cc.tanh_c[u] * cc.tanh_c[u]) +
              dc_next[u];
      Real di = dc[u] * cc.g[u];
      Real df = dc[u] * cc.c_prev[u];
      Real dg = dc[u] * cc.i[u];
      dz[u] = di * cc.i[u] * (1 - cc.i[u]);
      dz[d.lstm + u] = df * cc.f[u] * (1 - cc.f[u]);
      dz[2 * d.lstm + u] = dg * (1 - cc.g[u] * cc.g[u]);
      dz[3 * d.lstm + u] = doo * cc.o[u] * (1 - cc.o[u]);
    }

    kern::OuterAccum(grads->lstm_wx.data(), dz.data(), cc.x.data(),
                     4 * d.lstm, d.embed);
    kern::OuterAccum(grads->lstm_wh.data(), dz.data(), cc.h_prev.data(),
                     4 * d.lstm, d.lstm);
    for (size_t i = 0; i < 4 * d.lstm; ++i) grads->lstm_b[i] += dz[i];

    // Embed.
    std::vector<Real> dx(d.embed, 0);
    kern::MatvecT(p.lstm_wx.data(), dz.data(), dx.data(), 4 * d.lstm,
                  d.embed);
    kern::OuterAccumBits(grads->embed_w.data(), dx.data(), cc.bits.data(),
                         d.embed, d.obs_bits);
    for (size_t i = 0; i < d.embed; ++i) grads->embed_b[i] += dx[i];

    // Into step t-1.
    kern::MatvecT(p.lstm_wh.data(), dz.data(), dh_next.data(), 4 * d.lstm,
                  d.lstm);
    for (size_t u = 0; u < d.lstm; ++u) dc_next[u] = dc[u] * cc.f[u];
  }
}

size_t ArgmaxLowest(const std::vector<Real>& v) {
  size_t best = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

Real DoubleQTargetFromValues(Real r, bool done, Real gamma,
                             const std::vector<Real>& q_online_next,
                             const std::vector<Real>& q_target_next) {
  if (done) return r;
  size_t a_star = ArgmaxLowest(q_online_next);
  return r + gamma * q_target_next[a_star];
}

bool SaveCheckpoint(const QNetParams& p, const std::string& path,
                    std::string* error) {
  std::string buf;
  buf.append(kMagic, 4);
  auto put_u32 = [&](uint32_t v) {
    buf.append(reinterpret_cast<const char*>(&v), 4);
  };
  put_u32(kVersion);
  put_u32(static_cast<uint32_t>(p.dims.obs_bits));
  put_u32(static_cast<uint32_t>(p.dims.embed));
  put_u32(static_cast<uint32_t>(p.dims.lstm));
  put_u32(static_cast<uint32_t>(p.dims.actions));
  for (const auto* block : p.Blocks()) {
    buf.append(reinterpret_cast<const char*>(block->data()),
               block->size() * sizeof(Real));
  }
  uint64_t sum = Fnv1a64(buf);
  buf.append(reinterpret_cast<const char*>(&sum), 8);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    if (error) *error = "cannot open " + path + " for writing";
    return false;
  }
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) {
    if (error) *error = "short write to " + path;
    return false;
  }
  return true;
}

std::optional<QNetParams> LoadCheckpoint(const std::string& path,
                                         std::string* error) {
  auto fail = [&](const std::string& msg) -> std::optional<QNetParams> {
    if (error) *error = msg + ": " + path;
    return std::nullopt;
  };
  std::ifstream f(path, std::ios::binary);
  if (!f) return fail("cannot open checkpoint");
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 4 + 5 * 4 + 8) return fail("checkpoint too short");
  if (std::memcmp(buf.data(), kMagic, 4) != 0) return fail("bad magic");

  uint64_t stored_sum;
  std::memcpy(&stored_sum, buf.data() + buf.size() - 8, 8);
  uint64_t actual = Fnv1a64(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(buf.data()), buf.size() - 8));
  if (stored_sum != actual) return fail("checksum mismatch");

  size_t off = 4;
  auto get_u32 = [&]() {
    uint32_t v;
    std::memcpy(&v, buf.data() + off, 4);
    off += 4;
    return v;
  };
  if (get_u32() != kVersion) return fail("unsupported version");
  QNetDims dims;
  dims.obs_bits = get_u32();
  dims.embed = get_u32();
  dims.lstm = get_u32();
  dims.actions = get_u32();

  QNetParams p = QNetParams::Zeros(dims);
  size_t need = off + dims.ParamCount() * sizeof(Real) + 8;
  if (buf.size() != need) return fail("checkpoint size mismatch");
  for (auto* block : p.Blocks()) {
    std::memcpy(block->data(), buf.data() + off, block->size() * sizeof(Real));
    off += block->size() * sizeof(Real);
  }
  return p;
}

}  // namespace fuzzrl
