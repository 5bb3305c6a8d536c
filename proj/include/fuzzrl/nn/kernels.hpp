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

#ifndef FUZZRL_NN_KERNELS_HPP_
#define FUZZRL_NN_KERNELS_HPP_

#include <cstddef>
#include <cstdint>

namespace fuzzrl {

// All network math runs in double: the finite-difference gradient checks
// need more headroom than float32 provides.
using Real = double;

namespace kern {

// Dense kernels behind the Q-network, row-major W[m x n].
//
// Each function has an OpenMP-parallel primary and a *Serial reference.
// Work is split so every output element is owned by exactly one thread
// and accumulated in the same order as the serial code, so primary and
// reference are bit-exact for identical inputs (asserted in tests and
// compared in the kernels benchmark tool).

// out[i] = sum_j W[i,j] * x[j] + (b ? b[i] : 0)
void Matvec(const Real* w, const Real* x, const Real* b, Real* out, size_t m,
            size_t n);
void MatvecSerial(const Real* w, const Real* x, const Real* b, Real* out,
                  size_t m, size_t n);

// Same, but x is a 0/1 byte vector: additions only, no multiplies.
void MatvecBits(const Real* w, const uint8_t* bits, const Real* b, Real* out,
                size_t m, size_t n);
void MatvecBitsSerial(const Real* w, const uint8_t* bits, const Real* b,
                      Real* out, size_t m, size_t n);

// out[j] = sum_i W[i,j] * y[i]  (transposed product, column-owned)
void MatvecT(const Real* w, const Real* y, Real* out, size_t m, size_t n);
void MatvecTSerial(const Real* w, const Real* y, Real* out, size_t m,
                   size_t n);

// G[i,j] += y[i] * x[j]
void OuterAccum(Real* g, const Real* y, const Real* x, size_t m, size_t n);
void OuterAccumSerial(Real* g, const Real* y, const Real* x, size_t m,
                      size_t n);

// G[i,j] += y[i] where bits[j] != 0
void OuterAccumBits(Real* g, const Real* y, const uint8_t* bits, size_t m,
                    size_t n);
void OuterAccumBitsSerial(Real* g, const Real* y, const uint8_t* bits,
                          size_t m, size_t n);

// p[i] -= lr * g[i]
void SgdStep(Real* p, const Real* g, Real lr, size_t n);
void SgdStepSerial(Real* p, const Real* g, Real lr, size_t n);

// True when the primary kernels actually fan out over OpenMP threads.
bool ParallelEnabled();

}  // namespace kern
}  // namespace fuzzrl

#endif  // FUZZRL_NN_KERNELS_HPP_
