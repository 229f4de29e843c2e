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

#include <gtest/gtest.h>

#include <cstring>

#include "fixtures.h"
#include "json.hpp"
#include "sonovib/error.h"

namespace sonovib::bench {
namespace {

constexpr int kRate = 8000;

std::vector<AudioClip> sources(std::size_t count = kSourceClips) {
  std::vector<AudioClip> clips;
  for (std::size_t i = 0; i < count; ++i) {
    clips.push_back(testing::make_clip(testing::white_noise(5 * kRate, i, 0.2), kRate,
                                       "src" + std::to_string(i)));
  }
  return clips;
}

TEST(Corpus, ProtocolSizes) {
  const auto corpus = build_bench_corpus(sources());
  EXPECT_EQ(corpus.at(1).size(), 250u);
  EXPECT_EQ(corpus.at(2).size(), 100u);
  EXPECT_EQ(corpus.at(5).size(), 50u);
  EXPECT_EQ(corpus.at(10).size(), 50u);
  EXPECT_EQ(corpus.at(20).size(), 50u);
  for (const auto& [d, clips] : corpus) {
    for (const auto& c : clips) ASSERT_EQ(c.samples.size(), static_cast<std::size_t>(d * kRate));
  }
}

TEST(Corpus, OneSecondSegmentsConcatenateToSource) {
  const auto src = sources();
  const auto corpus = build_bench_corpus(src);
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::vector<double> joined;
    for (std::size_t s = 0; s < 5; ++s) {
      const auto& seg = corpus.at(1)[i * 5 + s].samples;
      joined.insert(joined.end(), seg.begin(), seg.end());
    }
    ASSERT_EQ(joined, src[i].samples);
  }
}

TEST(Corpus, TwoSecondClipsDropFifthSecondAndRepeatsAreExact) {
  const auto src = sources();
  const auto corpus = build_bench_corpus(src);
  const auto& two = corpus.at(2);
  EXPECT_TRUE(std::equal(two[1].samples.begin(), two[1].samples.end(),
                         src[0].samples.begin() + 2 * kRate));
  const auto& ten = corpus.at(10)[3].samples;
  EXPECT_TRUE(std::equal(ten.begin(), ten.begin() + 5 * kRate, ten.begin() + 5 * kRate));
  const auto& twenty = corpus.at(20)[3].samples;
  for (int q = 0; q < 4; ++q) {
    EXPECT_TRUE(std::equal(src[3].samples.begin(), src[3].samples.end(),
                           twenty.begin() + q * 5 * kRate));
  }
}

TEST(Corpus, RejectsWrongCountOrDuration) {
  EXPECT_THROW(build_bench_corpus(sources(49)), ValidationError);
  auto bad = sources();
  bad[10].samples.pop_back();
  EXPECT_THROW(build_bench_corpus(bad), ValidationError);
}

TEST(RunBench, OneRowPerDurationAndAlgorithm) {
  BenchCorpus corpus;
  for (int d : {1, 2, 5}) {
    for (int i = 0; i < 3; ++i) {
      corpus[d].push_back(testing::make_clip(
          testing::white_noise(static_cast<std::size_t>(d) * 44100, 10 * d + i, 0.2),
          44100, "c"));
    }
  }
  BenchOptions opts;
  opts.durations = {1, 2, 5};
  opts.algorithms = {Algorithm::kHapticgen, Algorithm::kPlm};
  const auto results = run_bench(corpus, opts, {});
  ASSERT_EQ(results.size(), 6u);
  for (const auto& r : results) {
    EXPECT_EQ(r.clip_count, 3u);
    EXPECT_GT(r.mean_latency_s, 0.0);
    EXPECT_GE(r.sd_latency_s, 0.0);
  }
  // Latency grows with duration: compare the 1 s and 5 s means per algorithm.
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_LE(results[a].mean_latency_s, results[4 + a].mean_latency_s);
  }
  const auto j = nlohmann::json::parse(format_bench_json(results));
  EXPECT_EQ(j.size(), 6u);
  EXPECT_NE(format_bench_text(results).find("hapticgen"), std::string::npos);
}

TEST(RunBench, Errors) {
  BenchCorpus corpus;
  corpus[1].push_back(testing::make_clip(std::vector<double>(44100, 0.0), 44100, "silent"));
  BenchOptions opts;
  opts.durations = {1};
  opts.algorithms = {Algorithm::kHapticgen};
  try {
    run_bench(corpus, opts, {});
    FAIL();
  } catch (const ProcessingError& e) {
    EXPECT_NE(std::string(e.what()).find("silent"), std::string::npos);
  }
  opts.warmup = 0;
  EXPECT_THROW(run_bench(corpus, opts, {}), ValidationError);
  opts.warmup = 1;
  opts.durations = {2};
  EXPECT_THROW(run_bench(corpus, opts, {}), ValidationError);
}

}  // namespace
}  // namespace sonovib::bench
