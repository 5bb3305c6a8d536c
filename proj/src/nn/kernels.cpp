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

#include "fuzzrl/nn/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fuzzrl::kern {

namespace {

inline Real RowDot(const Real* row, const Real* x, size_t n) {
  Real acc = 0;
  for (size_t j = 0; j < n; ++j) acc += row[j] * x[j];
  return acc;
}

// Branchless 0/1 multiply vectorizes; a data-dependent branch over
// half-set bit vectors does not.
inline Real RowDotBits(const Real* row, const uint8_t* bits, size_t n) {
  Real acc = 0;
  for (size_t j = 0; j < n; ++j) {
    acc += row[j] * static_cast<Real>(bits[j]);
  }
  return acc;
}

}  // namespace

void MatvecSerial(const Real* w, const Real* x, const Real* b, Real* out,
                  size_t m, size_t n) {
  for (size_t i = 0; i < m; ++i) {
    out[i] = RowDot(w + i * n, x, n) + (b ? b[i] : Real(0));
  }
}

void Matvec(const Real* w, const Real* x, const Real* b, Real* out, size_t m,
            size_t n) {
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < m; ++i) {
    out[i] = RowDot(w + i * n, x, n) + (b ? b[i] : Real(0));
  }
}

void MatvecBitsSerial(const Real* w, const uint8_t* bits, const Real* b,
                      Real* out, size_t m, size_t n) {
  for (size_t i = 0; i < m; ++i) {
    out[i] = RowDotBits(w + i * n, bits, n) + (b ? b[i] : Real(0));
  }
}

void MatvecBits(const Real* w, const uint8_t* bits, const Real* b, Real* out,
                size_t m, size_t n) {
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < m; ++i) {
    out[i] = RowDotBits(w + i * n, bits, n) + (b ? b[i] : Real(0));
  }
}

void MatvecTSerial(const Real* w, const Real* y, Real* out, size_t m,
                   size_t n) {
  for (size_t j = 0; j < n; ++j) {
    Real acc = 0;
    for (size_t i = 0; i < m; ++i) acc += w[i * n + j] * y[i];
    out[j] = acc;
  }
}

void MatvecT(const Real* w, const Real* y, Real* out, size_t m, size_t n) {
#pragma omp parallel for schedule(static)
  for (size_t j = 0; j < n; ++j) {
    Real acc = 0;
    for (size_t i = 0; i < m; ++i) acc += w[i * n + j] * y[i];
    out[j] = acc;
  }
}

void OuterAccumSerial(Real* g, const Real* y, const Real* x, size_t m,
                      size_t n) {
  for (size_t i = 0; i < m; ++i) {
    Real yi = y[i];
    Real* row = g + i * n;
    for (size_t j = 0; j < n; ++j) row[j] += yi * x[j];
  }
}

void OuterAccum(Real* g, const Real* y, const Real* x, size_t m, size_t n) {
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < m; ++i) {
    Real yi = y[i];
    Real* row = g + i * n;
    for (size_t j = 0; j < n; ++j) row[j] += yi * x[j];
  }
}

void OuterAccumBitsSerial(Real* g, const Real* y, const uint8_t* bits,
                          size_t m, size_t n) {
  for (size_t i = 0; i < m; ++i) {
    Real yi = y[i];
    Real* row = g + i * n;
    for (size_t j = 0; j < n; ++j) {
      row[j] += yi * static_cast<Real>(bits[j]);
    }
  }
}

void OuterAccumBits(Real* g, const Real* y, const uint8_t* bits, size_t m,
                    size_t n) {
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < m; ++i) {
    Real yi = y[i];
    Real* row = g + i * n;
    for (size_t j = 0; j < n; ++j) {
      row[j] += yi * static_cast<Real>(bits[j]);
    }
  }
}

void SgdStepSerial(Real* p, const Real* g, Real lr, size_t n) {
  for (size_t i = 0; i < n; ++i) p[i] -= lr * g[i];
}

void SgdStep(Real* p, const Real* g, Real lr, size_t n) {
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < n; ++i) p[i] -= lr * g[i];
}

bool ParallelEnabled() {
#ifdef _OPENMP
  return omp_get_max_threads() > 1;
#else
  return false;
#endif
}

}  // namespace fuzzrl::kern
