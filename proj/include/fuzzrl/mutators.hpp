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

#ifndef FUZZRL_MUTATORS_HPP_
#define FUZZRL_MUTATORS_HPP_

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzzrl/rng.hpp"
#include "fuzzrl/test_input.hpp"

namespace fuzzrl {

// The action space. Integer encodings 0..12 are stable: they appear in
// action logs, replay buffers and checkpointed policies.
enum class MutatorAction : uint8_t {
  kEraseBytes = 0,
  kInsertByte = 1,
  kInsertRepeatedBytes = 2,
  kChangeBit = 3,
  kChangeByte = 4,
  kShuffleBytes = 5,
  kChangeAsciiInteger = 6,
  kChangeBinaryInteger = 7,
  kCopyPart = 8,
  kCrossOver = 9,
  kAddWordPersistAutoDict = 10,
  kAddWordTempAutoDict = 11,
  kAddWordFromTorc = 12,
};

inline constexpr size_t kNumActions = 13;

const char* ActionName(MutatorAction a);
std::optional<MutatorAction> ActionFromName(const std::string& name);

inline MutatorAction ActionFromIndex(uint8_t i) {
  return static_cast<MutatorAction>(i % kNumActions);
}
inline uint8_t ActionIndex(MutatorAction a) { return static_cast<uint8_t>(a); }

struct MutatorLimits {
  size_t max_len = 4096;           // hard cap on every produced input
  size_t max_insert_repeat = 128;  // InsertRepeatedBytes count upper bound
};

struct DictionaryLimits {
  size_t temp_capacity = 256;
  size_t persist_capacity = 4096;
  size_t torc_capacity = 64;
  size_t max_word_len = 64;
};

using Word = std::vector<uint8_t>;

// One recorded comparison: the value the target saw in the input and the
// value it compared against. Mutators consume the expected side only.
struct TorcEntry {
  Word observed;
  Word expected;
};

// Stateful word stores feeding the three dictionary mutators.
//
// temp and persist hold words credited with a coverage gain; temp is
// cleared on episode reset, persist survives the whole run (and can be
// carried across episodes). torc is a bounded ring of recent comparison
// operands recorded during target execution. All three evict oldest-first
// at capacity.
class DictionaryState {
 public:
  explicit DictionaryState(DictionaryLimits limits = {}) : limits_(limits) {}

  // Credits `word` with a coverage gain: appended (deduplicated) to both
  // the temporary and the persistent dictionary. Words longer than
  // max_word_len are truncated, counted in truncated_words(). Empty words
  // are ignored.
  void CreditWord(std::span<const uint8_t> word);

  void RecordCompare(std::span<const uint8_t> observed,
                     std::span<const uint8_t> expected);

  // Episode boundary: temp and torc are recent-history stores and reset;
  // persist survives.
  void ResetEpisode();

  void PreloadPersist(const std::deque<Word>& words);

  const std::deque<Word>& temp() const { return temp_; }
  const std::deque<Word>& persist() const { return persist_; }
  const std::deque<TorcEntry>& torc() const { return torc_; }
  const DictionaryLimits& limits() const { return limits_; }
  uint64_t truncated_words() const { return truncated_words_; }

  // Persistent dictionary snapshot: newline-delimited hex words.
  std::string SnapshotText() const;

 private:
  DictionaryLimits limits_;
  std::deque<Word> temp_;
  std::deque<Word> persist_;
  std::deque<TorcEntry> torc_;
  uint64_t truncated_words_ = 0;
};

// Result of one mutation. credit_word is set when the mutation spliced a
// stored or foreign word into the input (dictionary operators and
// CrossOver); the engine feeds it back via DictionaryState::CreditWord
// when the mutant gains coverage.
struct MutationResult {
  TestInput output;
  std::optional<Word> credit_word;
  MutatorAction applied;  // action after fallback substitution
};

// Applies `action` to `input` and returns a new input.
//
// Every (action, input) pair yields a valid output: operators that need
// content fall back to InsertByte on an empty input, or to ChangeByte
// when the input is non-empty but unusable (no digits for
// ChangeAsciiInteger, empty dictionary for the dictionary operators).
// Output length never exceeds limits.max_len; size-increasing operators
// truncate at the cap.
//
// cross_with supplies the corpus sample for CrossOver; null means
// self-crossover. Identical (action, input, cross_with, dicts, rng state)
// produce byte-identical results.
MutationResult Mutate(MutatorAction action, const TestInput& input,
                      const TestInput* cross_with, const DictionaryState& dicts,
                      RngStream& rng, const MutatorLimits& limits);

}  // namespace fuzzrl

#endif  // FUZZRL_MUTATORS_HPP_
