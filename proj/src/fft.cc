// Copyright 2026 The sonovib Authors. All Rights Reserved.
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

// FFT entry points backed by FFTW. Plans are created once per size with
// FFTW_ESTIMATE (deterministic, no timing-based planning) and executed with
// the new-array interface, which is safe to call concurrently.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "sonovib/dsp.h"
#include "sonovib/error.h"

namespace sonovib::dsp {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int len = static_cast<int>(n);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(len, real, cplx, flags);
    p.inverse = fftw_plan_dft_c2r_1d(len, cplx, real, flags);
    fftw_free(real);
    fftw_free(cplx);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> frame,
                                       std::size_t n) {
  if (n == 0) throw ValidationError("rfft: size must be positive");
  std::vector<double> buf(n, 0.0);
  const std::size_t copy = std::min(n, frame.size());
  std::copy_n(frame.begin(), copy, buf.begin());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(plan_cache().get(n).forward, buf.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum,
                          std::size_t n) {
  if (n == 0 || spectrum.size() != n / 2 + 1) {
    throw ValidationError("irfft: spectrum size must be n/2 + 1");
  }
  // c2r overwrites its input.
  std::vector<std::complex<double>> work(spectrum.begin(), spectrum.end());
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plan_cache().get(n).inverse,
                       reinterpret_cast<fftw_complex*>(work.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace sonovib::dsp
