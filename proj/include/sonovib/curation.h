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

#ifndef SONOVIB_CURATION_H_
#define SONOVIB_CURATION_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sonovib/audio_io.h"

namespace sonovib::curation {

inline constexpr std::size_t kFeatureDims = 31;

// Clip-level descriptor; every field is a mean over analysis frames.
struct FeatureVector {
  double centroid_hz = 0.0;
  double rolloff_hz = 0.0;
  double bandwidth_hz = 0.0;
  double rms_energy = 0.0;
  double zcr = 0.0;  // crossings per sample
  double tempo_bpm = 0.0;
  std::array<double, 13> mfcc{};
  std::array<double, 12> chroma{};  // C = 0 ... B = 11, L2-normalised

  std::array<double, kFeatureDims> to_array() const;
};

struct FeatureParams {
  std::size_t fft_size = 2048;
  std::size_t hop = 512;
  std::size_t mel_bands = 26;
  double rolloff_fraction = 0.85;
  double min_tempo_bpm = 30.0;
  double max_tempo_bpm = 300.0;
  // Log-normal tempo prior: centre in BPM, spread in octaves.
  double prior_bpm = 120.0;
  double prior_octaves = 1.0;
};

// Requires at least one second of audio.
FeatureVector extract_features(const AudioClip& clip,
                               const FeatureParams& params = {});

// JSON object keyed by clip id, one record of named features per clip.
std::string format_features_json(
    std::span<const std::pair<std::string, FeatureVector>> records);

// Onset-autocorrelation tempo estimate, clamped to the configured range.
double estimate_tempo(const AudioClip& clip, const FeatureParams& params = {});

// --- Clustering ---------------------------------------------------------------

using Matrix = std::vector<std::vector<double>>;

// Per-dimension z-scores; constant dimensions map to 0.
Matrix standardize(const Matrix& points);

struct KMeansOptions {
  std::size_t max_iterations = 300;
  // Independent k-means++ restarts; the lowest final objective wins.
  std::size_t restarts = 10;
};

struct KMeansResult {
  std::vector<std::size_t> assignment;
  Matrix centroids;
  double objective = 0.0;
  // Objective after each Lloyd iteration of the winning restart.
  std::vector<double> objective_history;
  std::size_t iterations = 0;
};

// Lloyd iterations from seeded k-means++ initialisation.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

// Largest-remainder apportionment of target across cluster sizes; ties go to
// the lower cluster index.
std::vector<std::size_t> proportional_allocation(
    std::span<const std::size_t> cluster_sizes, std::size_t target);

// Picks target ids: proportional per-cluster quotas drawn uniformly with the
// seeded generator, topped up from unselected ids if quotas fall short.
std::vector<std::string> stratified_sample(
    std::span<const std::string> ids, std::span<const std::size_t> assignment,
    std::size_t target, std::uint64_t seed);

// --- Augmentation ---------------------------------------------------------------

struct AugmentPlan {
  bool shift = false;
  double semitones = 0.0;
  bool noise = false;
  double noise_sigma_fraction = 0.0;  // of the clip peak, in (0, 0.005]
  std::uint64_t noise_seed = 0;
};

// Draws every decision from the seed up front so the plan is fixed by it.
AugmentPlan plan_augment(std::uint64_t seed);
AudioClip apply_augment(const AudioClip& clip, const AugmentPlan& plan);
AudioClip augment(const AudioClip& clip, std::uint64_t seed);

// --- Manifest ---------------------------------------------------------------

struct ManifestEntry {
  std::string clip_id;
  std::string path;
  int class_id = 0;
  std::string class_name;
  int category_id = 1;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  bool operator==(const DatasetManifest&) const = default;
  const ManifestEntry* find(std::string_view clip_id) const;
};

// CSV with header clip_id,path,class_id,class_name,category_id. Errors name
// the offending line.
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(std::string_view text);
void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);
std::string format_manifest(const DatasetManifest& manifest);

struct CurateOptions {
  std::size_t per_class = 20;
  std::size_t clusters = 10;
  std::uint64_t seed = 0;
};

// Per class: extract features, standardise within the class, cluster, and
// draw a proportional sample. Relative paths resolve against base_dir.
// Output keeps manifest order.
DatasetManifest curate(const DatasetManifest& manifest,
                       const std::filesystem::path& base_dir,
                       const CurateOptions& options);

}  // namespace sonovib::curation

#endif  // SONOVIB_CURATION_H_
