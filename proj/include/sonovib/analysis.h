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

#ifndef SONOVIB_ANALYSIS_H_
#define SONOVIB_ANALYSIS_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sonovib/audio_io.h"
#include "sonovib/curation.h"

namespace sonovib::analysis {

inline constexpr std::size_t kNumAlgorithms = 4;

// Index into kRatedAlgorithms; throws for kBlended.
std::size_t algorithm_index(Algorithm algo);

struct RatingRecord {
  std::string clip_id;
  Algorithm algorithm = Algorithm::kPlm;
  std::string rater_id;
  double rating = 0.0;
};

// Maps the columns and algorithm labels of an external ratings export onto
// the canonical schema.
struct ColumnMap {
  std::string clip_id = "clip_id";
  std::string algorithm = "algorithm";
  std::string rater_id = "rater_id";
  std::string rating = "rating";
  std::map<std::string, std::string> algorithm_aliases;

  static ColumnMap load(const std::filesystem::path& path);
};

// Clip-level ratings: mean over raters for each (clip, algorithm) pair.
class RatingsTable {
 public:
  static RatingsTable from_records(std::vector<RatingRecord> records);

  const std::vector<RatingRecord>& records() const { return records_; }
  // Clip ids in first-seen order.
  const std::vector<std::string>& clip_ids() const { return clip_ids_; }
  // Mean rating per algorithm; nullopt where a clip lacks that algorithm.
  const std::array<std::optional<double>, kNumAlgorithms>& clip_means(
      const std::string& clip_id) const;
  std::optional<double> clip_rating(const std::string& clip_id,
                                    Algorithm algo) const;
  // Individual rater scores for one pair, in record order.
  const std::vector<double>& rater_scores(const std::string& clip_id,
                                          Algorithm algo) const;

 private:
  std::vector<RatingRecord> records_;
  std::vector<std::string> clip_ids_;
  std::map<std::string, std::array<std::optional<double>, kNumAlgorithms>>
      means_;
  std::map<std::string, std::array<std::vector<double>, kNumAlgorithms>> scores_;
};

RatingsTable load_ratings(const std::filesystem::path& path,
                          const ColumnMap& columns = {});
RatingsTable parse_ratings(std::string_view csv_text,
                           const ColumnMap& columns = {});

enum class Level { kOverall, kCategory, kClass, kClip };
Level parse_level(std::string_view name);
std::string_view to_string(Level level);

// mean averages clip-level ratings; sd is the sample standard deviation
// (n - 1) of the individual rater scores pooled over the group's clips.
struct AlgorithmStats {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t count = 0;    // clips
  std::size_t ratings = 0;  // individual scores
};

struct GroupSummary {
  std::string key;    // category id, class id, or clip id
  std::string label;  // class name where known
  std::array<AlgorithmStats, kNumAlgorithms> stats{};
  // Every algorithm whose mean equals the maximum; more than one is a tie.
  std::vector<Algorithm> winners;
};

struct AggregateReport {
  Level level = Level::kOverall;
  std::array<AlgorithmStats, kNumAlgorithms> overall{};
  std::vector<GroupSummary> groups;
  // Clips on which each algorithm achieved the top rating. A tied clip
  // credits every tied algorithm and adds one to tie_count.
  std::array<std::size_t, kNumAlgorithms> clip_wins{};
  std::size_t tie_count = 0;
  std::size_t clip_count = 0;
};

AggregateReport aggregate(const RatingsTable& table,
                          const curation::DatasetManifest& manifest,
                          Level level);

std::string format_report_text(const AggregateReport& report);
std::string format_report_json(const AggregateReport& report);

// Rating-weighted average of equal-length references; weights are ratings
// normalised to sum to one. Each output sample stays inside the envelope of
// the reference samples.
VibrationSignal blend_targets(std::span<const VibrationSignal> refs,
                              std::span<const double> ratings);

struct MetricReport {
  double mse = 0.0;
  double stft_loss = 0.0;
  double mel_l1 = 0.0;
  double amp_loss = 0.0;
  double rmse = 0.0;
};

struct MetricParams {
  std::vector<std::size_t> stft_sizes = {1024, 512, 256};
  std::size_t mel_bands = 64;
  std::size_t mel_fft = 1024;
  std::size_t mel_hop = 256;
  double mel_f_max = 4000.0;
  double epsilon = 1e-7;
};

// Signals shorter than an FFT size are zero-padded to it for that term.
MetricReport reconstruction_metrics(std::span<const double> pred,
                                    std::span<const double> target,
                                    double sample_rate = kVibrationRate,
                                    const MetricParams& params = {});

std::string format_metrics_json(const MetricReport& report);

struct LabeledSignal {
  std::string label;
  std::vector<double> samples;
};

struct ReferenceComparison {
  std::vector<std::pair<std::string, double>> rmse;  // in reference order
  std::string best_label;
};

// RMSE of generated against each reference, after zero-padding both to the
// longer length.
ReferenceComparison compare_to_references(std::span<const double> generated,
                                          std::span<const LabeledSignal> refs);

}  // namespace sonovib::analysis

#endif  // SONOVIB_ANALYSIS_H_
