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

#include "sonovib/bench.h"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "sonovib/error.h"

namespace sonovib::bench {

BenchCorpus build_bench_corpus(std::span<const AudioClip> clips) {
  if (clips.size() != kSourceClips) {
    throw ValidationError("bench corpus needs exactly " + std::to_string(kSourceClips) +
                          " source clips, got " + std::to_string(clips.size()));
  }
  const int fs = clips.front().sample_rate;
  for (const auto& c : clips) {
    if (c.sample_rate <= 0 || c.sample_rate != fs) {
      throw ValidationError("bench source clips must share one sample rate");
    }
    if (c.samples.size() != static_cast<std::size_t>(kSourceSeconds) *
                                static_cast<std::size_t>(fs)) {
      throw ValidationError("bench source clip '" + c.source_id + "' is not exactly " +
                            std::to_string(kSourceSeconds) + " s");
    }
  }
  const auto second = static_cast<std::size_t>(fs);
  const auto segment = [&](const AudioClip& c, std::size_t start, std::size_t len,
                           const std::string& suffix) {
    AudioClip out;
    out.sample_rate = fs;
    out.source_id = c.source_id + suffix;
    out.samples.assign(c.samples.begin() + static_cast<std::ptrdiff_t>(start),
                       c.samples.begin() + static_cast<std::ptrdiff_t>(start + len));
    return out;
  };
  const auto repeat = [&](const AudioClip& c, int times, const std::string& suffix) {
    AudioClip out;
    out.sample_rate = fs;
    out.source_id = c.source_id + suffix;
    for (int i = 0; i < times; ++i) {
      out.samples.insert(out.samples.end(), c.samples.begin(), c.samples.end());
    }
    return out;
  };

  BenchCorpus corpus;
  for (const auto& c : clips) {
    for (std::size_t s = 0; s < 5; ++s) {
      corpus[1].push_back(segment(c, s * second, second, "_1s_" + std::to_string(s)));
    }
    for (std::size_t s = 0; s < 2; ++s) {
      corpus[2].push_back(
          segment(c, 2 * s * second, 2 * second, "_2s_" + std::to_string(s)));
    }
    corpus[5].push_back(c);
    corpus[10].push_back(repeat(c, 2, "_10s"));
    corpus[20].push_back(repeat(c, 4, "_20s"));
  }
  return corpus;
}

std::vector<BenchResult> run_bench(const BenchCorpus& corpus,
                                   const BenchOptions& options,
                                   const ConverterConfig& cfg) {
  if (options.warmup < 1) throw ValidationError("bench warmup must be at least 1");
  if (options.durations.empty() || options.algorithms.empty()) {
    throw ValidationError("bench needs at least one duration and one algorithm");
  }
  using Clock = std::chrono::steady_clock;
  std::vector<BenchResult> results;
  for (int duration : options.durations) {
    const auto it = corpus.find(duration);
    if (it == corpus.end() || it->second.empty()) {
      throw ValidationError("bench corpus has no " + std::to_string(duration) +
                            " s clips");
    }
    const auto& clips = it->second;
    for (Algorithm algo : options.algorithms) {
      const auto convert_one = [&](const AudioClip& clip) {
        try {
          return convert(clip, algo, cfg);
        } catch (const ValidationError& e) {
          throw ValidationError("bench clip '" + clip.source_id + "': " + e.what());
        } catch (const ProcessingError& e) {
          throw ProcessingError("bench clip '" + clip.source_id + "': " + e.what());
        }
      };
      for (std::size_t w = 0; w < options.warmup; ++w) {
        convert_one(clips[w % clips.size()]);
      }
      std::vector<double> latencies;
      latencies.reserve(clips.size());
      for (const auto& clip : clips) {
        const auto start = Clock::now();
        const auto out = convert_one(clip);
        const auto stop = Clock::now();
        (void)out;
        latencies.push_back(std::chrono::duration<double>(stop - start).count());
      }
      BenchResult r;
      r.duration_s = duration;
      r.clip_count = clips.size();
      r.algorithm = algo;
      double sum = 0.0;
      for (double l : latencies) sum += l;
      r.mean_latency_s = sum / static_cast<double>(latencies.size());
      if (latencies.size() > 1) {
        double ss = 0.0;
        for (double l : latencies) ss += (l - r.mean_latency_s) * (l - r.mean_latency_s);
        r.sd_latency_s = std::sqrt(ss / static_cast<double>(latencies.size() - 1));
      }
      results.push_back(r);
    }
  }
  return results;
}

std::string format_bench_text(std::span<const BenchResult> results) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "duration" << std::setw(8) << "clips"
      << std::setw(11) << "algorithm" << std::right << std::setw(14) << "mean_s"
      << std::setw(14) << "sd_s" << '\n';
  for (const auto& r : results) {
    out << std::left << std::setw(10) << (std::to_string(r.duration_s) + "s")
        << std::setw(8) << r.clip_count << std::setw(11) << to_string(r.algorithm)
        << std::right << std::scientific << std::setprecision(3) << std::setw(14)
        << r.mean_latency_s << std::setw(14) << r.sd_latency_s << std::defaultfloat
        << '\n';
  }
  return out.str();
}

std::string format_bench_json(std::span<const BenchResult> results) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    j.push_back({{"duration_s", r.duration_s},
                 {"clip_count", r.clip_count},
                 {"algorithm", to_string(r.algorithm)},
                 {"mean_latency_s", r.mean_latency_s},
                 {"sd_latency_s", r.sd_latency_s}});
  }
  return j.dump(2) + "\n";
}

}  // namespace sonovib::bench
