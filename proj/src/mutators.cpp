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

#include "fuzzrl/mutators.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>

namespace fuzzrl {

namespace {

constexpr const char* kActionNames[kNumActions] = {
    "EraseBytes",
    "InsertByte",
    "InsertRepeatedBytes",
    "ChangeBit",
    "ChangeByte",
    "ShuffleBytes",
    "ChangeASCIIInteger",
    "ChangeBinaryInteger",
    "CopyPart",
    "CrossOver",
    "AddWordPersistAutoDict",
    "AddWordTempAutoDict",
    "AddWordFromTORC",
};

bool IsDigit(uint8_t c) { return c >= '0' && c <= '9'; }

std::vector<uint8_t> InsertByteAt(const std::vector<uint8_t>& in,
                                  RngStream& rng, size_t max_len) {
  std::vector<uint8_t> out = in;
  size_t pos = rng.Below(out.size() + 1);
  uint8_t b = static_cast<uint8_t>(rng.NextU64() & 0xFF);
  out.insert(out.begin() + static_cast<ptrdiff_t>(pos), b);
  if (out.size() > max_len) out.resize(max_len);
  return out;
}

std::vector<uint8_t> ChangeByteAt(const std::vector<uint8_t>& in,
                                  RngStream& rng) {
  std::vector<uint8_t> out = in;
  size_t pos = rng.Below(out.size());
  out[pos] = static_cast<uint8_t>(rng.NextU64() & 0xFF);
  return out;
}

std::vector<uint8_t> InsertRepeated(const std::vector<uint8_t>& in,
                                    RngStream& rng,
                                    const MutatorLimits& limits) {
  size_t span = limits.max_insert_repeat >= 3 ? limits.max_insert_repeat - 2
                                              : 1;
  size_t n = 3 + rng.Below(span);
  size_t room = limits.max_len - in.size();
  n = std::min(n, room);
  size_t pos = rng.Below(in.size() + 1);
  // Prefer 0x00 and 0xFF as fill: structured parsers treat them specially.
  uint8_t fill;
  if (rng.Coin()) {
    fill = static_cast<uint8_t>(rng.NextU64() & 0xFF);
  } else {
    fill = rng.Coin() ? 0x00 : 0xFF;
  }
  std::vector<uint8_t> out = in;
  out.insert(out.begin() + static_cast<ptrdiff_t>(pos), n, fill);
  return out;
}

std::vector<uint8_t> ShuffleRange(const std::vector<uint8_t>& in,
                                  RngStream& rng) {
  std::vector<uint8_t> out = in;
  size_t amount = 1 + rng.Below(std::min<size_t>(out.size(), 8));
  size_t start = rng.Below(out.size() - amount + 1);
  // Fisher-Yates over out[start, start+amount).
  for (size_t i = amount - 1; i >= 1; --i) {
    size_t j = rng.Below(i + 1);
    std::swap(out[start + i], out[start + j]);
  }
  return out;
}

std::optional<std::vector<uint8_t>> ChangeAsciiInteger(
    const std::vector<uint8_t>& in, RngStream& rng) {
  size_t size = in.size();
  size_t start = rng.Below(size);
  size_t found = size;
  for (size_t k = 0; k < size; ++k) {
    size_t p = (start + k) % size;
    if (IsDigit(in[p])) {
      found = p;
      break;
    }
  }
  if (found == size) return std::nullopt;
  size_t run_begin = found;
  while (run_begin > 0 && IsDigit(in[run_begin - 1])) --run_begin;
  size_t run_end = found + 1;
  while (run_end < size && IsDigit(in[run_end])) ++run_end;
  size_t run_len = run_end - run_begin;

  uint64_t val = 0;
  for (size_t i = run_begin; i < run_end; ++i) {
    val = val * 10 + (in[i] - '0');  // wrapping parse for long runs
  }
  switch (rng.Below(4)) {
    case 0:
      val += 1 + rng.Below(10);
      break;
    case 1:
      val -= 1 + rng.Below(10);
      break;
    case 2:
      val *= 1 + rng.Below(10);
      break;
    default:
      val = rng.NextU64();
      break;
  }
  std::string s = std::to_string(val);
  // Write low-order digits aligned to the end of the run; any leading
  // original digits stay in place (no zero padding).
  size_t m = std::min(s.size(), run_len);
  std::vector<uint8_t> out = in;
  std::memcpy(out.data() + (run_end - m), s.data() + (s.size() - m), m);
  return out;
}

std::vector<uint8_t> ChangeBinaryInteger(const std::vector<uint8_t>& in,
                                         RngStream& rng) {
  static constexpr size_t kWidths[4] = {1, 2, 4, 8};
  size_t fitting = 0;
  for (size_t w : kWidths) {
    if (w <= in.size()) ++fitting;
  }
  size_t w = kWidths[rng.Below(fitting)];
  size_t off = rng.Below(in.size() - w + 1);
  uint64_t val = 0;
  for (size_t i = 0; i < w; ++i) {
    val |= static_cast<uint64_t>(in[off + i]) << (8 * i);  // little-endian
  }
  switch (rng.Below(3)) {
    case 0:
      val += 1 + rng.Below(10);
      break;
    case 1:
      val -= 1 + rng.Below(10);
      break;
    default:
      val = ~val + 1;  // two's-complement negate
      break;
  }
  std::vector<uint8_t> out = in;
  for (size_t i = 0; i < w; ++i) {
    out[off + i] = static_cast<uint8_t>((val >> (8 * i)) & 0xFF);
  }
  return out;
}

std::vector<uint8_t> CopyPart(const std::vector<uint8_t>& in, RngStream& rng) {
  size_t len = 1 + rng.Below(in.size());
  size_t start = rng.Below(in.size() - len + 1);
  return std::vector<uint8_t>(in.begin() + static_cast<ptrdiff_t>(start),
                              in.begin() + static_cast<ptrdiff_t>(start + len));
}

struct CrossOverOut {
  std::vector<uint8_t> bytes;
  std::optional<Word> credit;
};

CrossOverOut CrossOver(const std::vector<uint8_t>& a,
                       const std::vector<uint8_t>& b, bool credit_b,
                       RngStream& rng, size_t max_len) {
  CrossOverOut r;
  if (a.empty() && b.empty()) return r;
  size_t cap = 1 + rng.Below(max_len);
  size_t pos_a = 0, pos_b = 0;
  bool use_a = true;
  size_t best_b_slice = 0, best_b_start = 0;
  while (r.bytes.size() < cap && (pos_a < a.size() || pos_b < b.size())) {
    const std::vector<uint8_t>& src = use_a ? a : b;
    size_t& pos = use_a ? pos_a : pos_b;
    if (pos < src.size()) {
      size_t n = 1 + rng.Below(src.size() - pos);
      n = std::min(n, cap - r.bytes.size());
      if (!use_a && n > best_b_slice) {
        best_b_slice = n;
        best_b_start = pos;
      }
      r.bytes.insert(r.bytes.end(), src.begin() + static_cast<ptrdiff_t>(pos),
                     src.begin() + static_cast<ptrdiff_t>(pos + n));
      pos += n;
    }
    use_a = !use_a;
  }
  if (credit_b && best_b_slice > 0) {
    r.credit = Word(b.begin() + static_cast<ptrdiff_t>(best_b_start),
                    b.begin() + static_cast<ptrdiff_t>(best_b_start +
                                                       best_b_slice));
  }
  return r;
}

// Overwrites a range starting inside the input with `word`, growing the
// input when the word overhangs the end, capped at max_len.
std::vector<uint8_t> SpliceWord(const std::vector<uint8_t>& in,
                                const Word& word, RngStream& rng,
                                size_t max_len) {
  std::vector<uint8_t> out = in;
  size_t pos = rng.Below(out.size());
  size_t end = std::min(pos + word.size(), max_len);
  if (end > out.size()) out.resize(end);
  std::memcpy(out.data() + pos, word.data(), end - pos);
  return out;
}

}  // namespace

const char* ActionName(MutatorAction a) {
  return kActionNames[ActionIndex(a) % kNumActions];
}

std::optional<MutatorAction> ActionFromName(const std::string& name) {
  for (size_t i = 0; i < kNumActions; ++i) {
    if (name == kActionNames[i]) return static_cast<MutatorAction>(i);
  }
  return std::nullopt;
}

void DictionaryState::CreditWord(std::span<const uint8_t> word) {
  if (word.empty()) return;
  Word w(word.begin(), word.end());
  if (w.size() > limits_.max_word_len) {
    w.resize(limits_.max_word_len);
    ++truncated_words_;
  }
  auto push_unique = [&](std::deque<Word>& dict, size_t cap) {
    if (std::find(dict.begin(), dict.end(), w) != dict.end()) return;
    dict.push_back(w);
    while (dict.size() > cap) dict.pop_front();
  };
  push_unique(temp_, limits_.temp_capacity);
  push_unique(persist_, limits_.persist_capacity);
}

void DictionaryState::RecordCompare(std::span<const uint8_t> observed,
                                    std::span<const uint8_t> expected) {
  if (expected.empty()) return;
  TorcEntry e;
  e.observed.assign(observed.begin(), observed.end());
  e.expected.assign(expected.begin(), expected.end());
  if (e.expected.size() > limits_.max_word_len) {
    e.expected.resize(limits_.max_word_len);
    ++truncated_words_;
  }
  if (e.observed.size() > limits_.max_word_len) {
    e.observed.resize(limits_.max_word_len);
  }
  torc_.push_back(std::move(e));
  while (torc_.size() > limits_.torc_capacity) torc_.pop_front();
}

void DictionaryState::ResetEpisode() {
  temp_.clear();
  torc_.clear();
}

void DictionaryState::PreloadPersist(const std::deque<Word>& words) {
  for (const Word& w : words) {
    if (w.empty()) continue;
    if (std::find(persist_.begin(), persist_.end(), w) != persist_.end()) {
      continue;
    }
    persist_.push_back(w);
    while (persist_.size() > limits_.persist_capacity) persist_.pop_front();
  }
}

std::string DictionaryState::SnapshotText() const {
  std::string out;
  for (const Word& w : persist_) {
    out += HexEncode(w);
    out += '\n';
  }
  return out;
}

MutationResult Mutate(MutatorAction action, const TestInput& input,
                      const TestInput* cross_with, const DictionaryState& dicts,
                      RngStream& rng, const MutatorLimits& limits) {
  const std::vector<uint8_t>& in = input.bytes;
  assert(in.size() <= limits.max_len);
  MutationResult res;
  res.applied = action;

  auto fallback = [&]() {
    if (in.empty()) {
      res.applied = MutatorAction::kInsertByte;
      res.output.bytes = InsertByteAt(in, rng, limits.max_len);
    } else {
      res.applied = MutatorAction::kChangeByte;
      res.output.bytes = ChangeByteAt(in, rng);
    }
  };

  switch (action) {
    case MutatorAction::kEraseBytes: {
      if (in.empty()) {
        fallback();
        break;
      }
      std::vector<uint8_t> out = in;
      size_t pos = rng.Below(out.size());
      out.erase(out.begin() + static_cast<ptrdiff_t>(pos));
      res.output.bytes = std::move(out);
      break;
    }
    case MutatorAction::kInsertByte:
      res.output.bytes = InsertByteAt(in, rng, limits.max_len);
      break;
    case MutatorAction::kInsertRepeatedBytes:
      res.output.bytes = InsertRepeated(in, rng, limits);
      break;
    case MutatorAction::kChangeBit: {
      if (in.empty()) {
        fallback();
        break;
      }
      std::vector<uint8_t> out = in;
      size_t bit = rng.Below(out.size() * 8);
      out[bit >> 3] ^= static_cast<uint8_t>(1u << (bit & 7));
      res.output.bytes = std::move(out);
      break;
    }
    case MutatorAction::kChangeByte: {
      if (in.empty()) {
        fallback();
        break;
      }
      res.output.bytes = ChangeByteAt(in, rng);
      break;
    }
    case MutatorAction::kShuffleBytes: {
      if (in.empty()) {
        fallback();
        break;
      }
      res.output.bytes = ShuffleRange(in, rng);
      break;
    }
    case MutatorAction::kChangeAsciiInteger: {
      if (in.empty()) {
        fallback();
        break;
      }
      auto out = ChangeAsciiInteger(in, rng);
      if (!out) {
        fallback();
        break;
      }
      res.output.bytes = std::move(*out);
      break;
    }
    case MutatorAction::kChangeBinaryInteger: {
      if (in.empty()) {
        fallback();
        break;
      }
      res.output.bytes = ChangeBinaryInteger(in, rng);
      break;
    }
    case MutatorAction::kCopyPart: {
      if (in.empty()) {
        fallback();
        break;
      }
      res.output.bytes = CopyPart(in, rng);
      break;
    }
    case MutatorAction::kCrossOver: {
      const std::vector<uint8_t>& other = cross_with ? cross_with->bytes : in;
      if (in.empty() && other.empty()) {
        fallback();
        break;
      }
      CrossOverOut out =
          CrossOver(in, other, cross_with != nullptr, rng, limits.max_len);
      res.output.bytes = std::move(out.bytes);
      res.credit_word = std::move(out.credit);
      break;
    }
    case MutatorAction::kAddWordPersistAutoDict:
    case MutatorAction::kAddWordTempAutoDict: {
      const std::deque<Word>& dict =
          action == MutatorAction::kAddWordPersistAutoDict ? dicts.persist()
                                                           : dicts.temp();
      if (in.empty() || dict.empty()) {
        fallback();
        break;
      }
      const Word& w = dict[rng.Below(dict.size())];
      res.output.bytes = SpliceWord(in, w, rng, limits.max_len);
      res.credit_word = w;
      break;
    }
    case MutatorAction::kAddWordFromTorc: {
      if (in.empty() || dicts.torc().empty()) {
        fallback();
        break;
      }
      const TorcEntry& e = dicts.torc()[rng.Below(dicts.torc().size())];
      res.output.bytes = SpliceWord(in, e.expected, rng, limits.max_len);
      res.credit_word = e.expected;
      break;
    }
  }

  assert(res.output.bytes.size() <= limits.max_len);
  return res;
}

}  // namespace fuzzrl
