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

#ifndef SONOVIB_BENCH_H_
#define SONOVIB_BENCH_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sonovib/audio_io.h"
#include "sonovib/converters.h"

namespace sonovib::bench {

inline constexpr std::size_t kSourceClips = 50;
inline constexpr int kSourceSeconds = 5;
inline constexpr int kDurations[] = {1, 2, 5, 10, 20};

// Clip sets keyed by duration in seconds: 250 x 1 s, 100 x 2 s (the fifth
// second dropped), 50 x 5 s, 50 x 10 s (source repeated twice) and 50 x 20 s
// (four times).
using BenchCorpus = std::map<int, std::vector<AudioClip>>;

// Requires exactly 50 clips of exactly 5 s each.
BenchCorpus build_bench_corpus(std::span<const AudioClip> clips);

struct BenchResult {
  int duration_s = 0;
  std::size_t clip_count = 0;
  Algorithm algorithm = Algorithm::kPlm;
  double mean_latency_s = 0.0;
  double sd_latency_s = 0.0;
};

struct BenchOptions {
  std::vector<int> durations = {1, 2, 5, 10, 20};
  std::vector<Algorithm> algorithms = {Algorithm::kPlm, Algorithm::kFshift,
                                       Algorithm::kPitch,
                                       Algorithm::kHapticgen};
  std::size_t warmup = 1;
};

// Times convert() per clip on the calling thread with a monotonic clock.
// Warm-up conversions are run first and discarded. Clips must already be in
// memory; file I/O is outside the timed region.
std::vector<BenchResult> run_bench(const BenchCorpus& corpus,
                                   const BenchOptions& options,
                                   const ConverterConfig& cfg);

std::string format_bench_text(std::span<const BenchResult> results);
std::string format_bench_json(std::span<const BenchResult> results);

}  // namespace sonovib::bench

#endif  // SONOVIB_BENCH_H_
