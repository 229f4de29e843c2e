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

#include "sonovib/curation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "csv.h"
#include "json.hpp"
#include "sonovib/dsp.h"
#include "sonovib/error.h"

namespace sonovib::curation {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

// Orthonormal DCT-II coefficient k of x.
double dct2(std::span<const double> x, std::size_t k) {
  const double n = static_cast<double>(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) *
                           (static_cast<double>(i) + 0.5) / n);
  }
  return acc * std::sqrt((k == 0 ? 1.0 : 2.0) / n);
}

int pitch_class(double hz) {
  const long semis = std::lround(12.0 * std::log2(hz / 440.0));
  return static_cast<int>(((semis + 9) % 12 + 12) % 12);
}

std::vector<double> onset_envelope(const dsp::Spectrogram& spec) {
  std::vector<double> env(spec.frames, 0.0);
  for (std::size_t t = 1; t < spec.frames; ++t) {
    const auto cur = spec.frame(t);
    const auto prev = spec.frame(t - 1);
    double flux = 0.0;
    for (std::size_t k = 0; k < spec.bins; ++k) {
      flux += std::max(0.0, cur[k] - prev[k]);
    }
    env[t] = flux;
  }
  return env;
}

double tempo_from_spectrogram(const dsp::Spectrogram& spec, double sample_rate,
                              const FeatureParams& params) {
  constexpr double kFallbackBpm = 120.0;
  auto env = onset_envelope(spec);
  const double mean = std::accumulate(env.begin(), env.end(), 0.0) /
                      static_cast<double>(env.size());
  double energy = 0.0;
  for (double& v : env) {
    v -= mean;
    energy += v * v;
  }
  if (energy <= 1e-20) return kFallbackBpm;

  const double frame_rate = sample_rate / static_cast<double>(params.hop);
  const auto lag_min = static_cast<std::size_t>(
      std::ceil(60.0 * frame_rate / params.max_tempo_bpm));
  const auto lag_max = std::min<std::size_t>(
      env.size() - 1,
      static_cast<std::size_t>(std::floor(60.0 * frame_rate / params.min_tempo_bpm)));
  if (lag_min >= lag_max) return kFallbackBpm;

  // Unbiased autocorrelation weighted by the tempo prior.
  const auto score = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t t = lag; t < env.size(); ++t) acc += env[t] * env[t - lag];
    acc /= static_cast<double>(env.size() - lag);
    const double octaves =
        std::log2(60.0 * frame_rate / static_cast<double>(lag) / params.prior_bpm) /
        params.prior_octaves;
    return acc * std::exp(-0.5 * octaves * octaves);
  };
  std::size_t best = lag_min;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
    const double v = score(lag);
    if (v > best_value) {
      best_value = v;
      best = lag;
    }
  }
  double lag = static_cast<double>(best);
  if (best > lag_min && best < lag_max) {
    const double a = score(best - 1);
    const double c = score(best + 1);
    const double denom = a - 2.0 * best_value + c;
    if (denom < 0.0) lag += 0.5 * (a - c) / denom;
  }
  return std::clamp(60.0 * frame_rate / lag, params.min_tempo_bpm,
                    params.max_tempo_bpm);
}

void check_length(const AudioClip& clip, const FeatureParams& params) {
  if (clip.sample_rate <= 0) throw ValidationError("features: missing sample rate");
  if (!(params.prior_bpm > 0.0) || !(params.prior_octaves > 0.0)) {
    throw ValidationError("features: tempo prior must be positive");
  }
  if (clip.samples.size() < static_cast<std::size_t>(clip.sample_rate) ||
      clip.samples.size() < params.fft_size) {
    throw ValidationError("features: clip '" + clip.source_id +
                          "' is shorter than 1 s");
  }
}

}  // namespace

std::array<double, kFeatureDims> FeatureVector::to_array() const {
  std::array<double, kFeatureDims> out{};
  out[0] = centroid_hz;
  out[1] = rolloff_hz;
  out[2] = bandwidth_hz;
  out[3] = rms_energy;
  out[4] = zcr;
  out[5] = tempo_bpm;
  std::copy(mfcc.begin(), mfcc.end(), out.begin() + 6);
  std::copy(chroma.begin(), chroma.end(), out.begin() + 19);
  return out;
}

double estimate_tempo(const AudioClip& clip, const FeatureParams& params) {
  check_length(clip, params);
  const auto spec = dsp::stft(clip.samples, params.fft_size, params.hop,
                              clip.sample_rate);
  return tempo_from_spectrogram(spec, clip.sample_rate, params);
}

FeatureVector extract_features(const AudioClip& clip,
                               const FeatureParams& params) {
  check_length(clip, params);
  const double fs = clip.sample_rate;
  const auto spec = dsp::stft(clip.samples, params.fft_size, params.hop, fs);
  const std::size_t bins = spec.bins;
  const double bin_hz = fs / static_cast<double>(params.fft_size);
  const auto mel = dsp::mel_filterbank(params.mel_bands, params.fft_size, fs,
                                       0.0, fs / 2.0);
  std::vector<int> chroma_of(bins, -1);
  for (std::size_t k = 1; k < bins; ++k) {
    const double f = static_cast<double>(k) * bin_hz;
    if (f >= 27.5) chroma_of[k] = pitch_class(f);
  }

  FeatureVector fv;
  std::array<double, 12> chroma_sum{};
  std::vector<double> log_mel(params.mel_bands);
  std::vector<double> power(bins);
  const double n_frames = static_cast<double>(spec.frames);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const auto mag = spec.frame(t);
    double total = 0.0, weighted = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      total += mag[k];
      weighted += f * mag[k];
      power[k] = mag[k] * mag[k];
    }
    double centroid = 0.0, bandwidth = 0.0, rolloff = 0.0;
    if (total > 0.0) {
      centroid = weighted / total;
      double spread = 0.0, cumulative = 0.0;
      bool rolled = false;
      for (std::size_t k = 0; k < bins; ++k) {
        const double f = static_cast<double>(k) * bin_hz;
        spread += mag[k] * (f - centroid) * (f - centroid);
        cumulative += mag[k];
        if (!rolled && cumulative >= params.rolloff_fraction * total) {
          rolloff = f;
          rolled = true;
        }
      }
      bandwidth = std::sqrt(spread / total);
    }
    fv.centroid_hz += centroid / n_frames;
    fv.bandwidth_hz += bandwidth / n_frames;
    fv.rolloff_hz += rolloff / n_frames;

    const auto frame = std::span(clip.samples).subspan(t * params.hop, params.fft_size);
    fv.rms_energy += rms(frame) / n_frames;
    std::size_t crossings = 0;
    for (std::size_t i = 1; i < frame.size(); ++i) {
      if (std::signbit(frame[i]) != std::signbit(frame[i - 1])) ++crossings;
    }
    fv.zcr += static_cast<double>(crossings) /
              static_cast<double>(frame.size()) / n_frames;

    for (std::size_t b = 0; b < params.mel_bands; ++b) {
      double e = 0.0;
      for (std::size_t k = 0; k < bins; ++k) e += mel[b * bins + k] * power[k];
      log_mel[b] = std::log(e + 1e-10);
    }
    for (std::size_t c = 0; c < fv.mfcc.size(); ++c) {
      fv.mfcc[c] += dct2(log_mel, c + 1) / n_frames;
    }
    for (std::size_t k = 0; k < bins; ++k) {
      if (chroma_of[k] >= 0) chroma_sum[static_cast<std::size_t>(chroma_of[k])] += power[k];
    }
  }
  double norm = 0.0;
  for (double v : chroma_sum) norm += v * v;
  norm = std::sqrt(norm);
  for (std::size_t c = 0; c < 12; ++c) {
    fv.chroma[c] = norm > 0.0 ? chroma_sum[c] / norm : 0.0;
  }
  fv.tempo_bpm = tempo_from_spectrogram(spec, fs, params);
  return fv;
}

std::string format_features_json(
    std::span<const std::pair<std::string, FeatureVector>> records) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [id, fv] : records) {
    nlohmann::ordered_json r;
    r["centroid_hz"] = fv.centroid_hz;
    r["rolloff_hz"] = fv.rolloff_hz;
    r["bandwidth_hz"] = fv.bandwidth_hz;
    r["rms_energy"] = fv.rms_energy;
    r["zcr"] = fv.zcr;
    r["tempo_bpm"] = fv.tempo_bpm;
    r["mfcc"] = fv.mfcc;
    r["chroma"] = fv.chroma;
    out[id] = std::move(r);
  }
  return out.dump(2) + "\n";
}

// --- Clustering -------------------------------------------------------------

Matrix standardize(const Matrix& points) {
  if (points.empty()) return {};
  const std::size_t dims = points.front().size();
  const double n = static_cast<double>(points.size());
  Matrix out = points;
  for (std::size_t d = 0; d < dims; ++d) {
    double mean = 0.0;
    for (const auto& p : points) mean += p[d];
    mean /= n;
    double var = 0.0;
    for (const auto& p : points) var += (p[d] - mean) * (p[d] - mean);
    const double sd = std::sqrt(var / n);
    for (auto& p : out) p[d] = sd > 0.0 ? (p[d] - mean) / sd : 0.0;
  }
  return out;
}

namespace {

struct LloydRun {
  std::vector<std::size_t> assignment;
  Matrix centroids;
  std::vector<double> history;
  double objective = 0.0;
  std::size_t iterations = 0;
};

Matrix kmeanspp_init(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = points.size();
  Matrix centroids;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  centroids.push_back(points[pick(rng)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);
  while (centroids.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        target -= d2[i];
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
      while (d2[chosen] <= 0.0 && chosen > 0) --chosen;
    } else {
      chosen = pick(rng);
    }
    centroids.push_back(points[chosen]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

double assign(const Matrix& points, const Matrix& centroids,
              std::vector<std::size_t>& assignment) {
  double objective = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(points[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assignment[i] = best;
    objective += best_d;
  }
  return objective;
}

void update_centroids(const Matrix& points,
                      const std::vector<std::size_t>& assignment,
                      Matrix& centroids) {
  const std::size_t dims = points.front().size();
  Matrix sums(centroids.size(), std::vector<double>(dims, 0.0));
  std::vector<std::size_t> counts(centroids.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& s = sums[assignment[i]];
    for (std::size_t d = 0; d < dims; ++d) s[d] += points[i][d];
    ++counts[assignment[i]];
  }
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (counts[c] == 0) continue;  // empty cluster keeps its centroid
    for (std::size_t d = 0; d < dims; ++d) {
      centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
  }
}

LloydRun lloyd(const Matrix& points, Matrix centroids,
               std::size_t max_iterations) {
  LloydRun run;
  run.assignment.assign(points.size(), 0);
  std::vector<std::size_t> previous;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const double obj = assign(points, centroids, run.assignment);
    run.history.push_back(obj);
    run.iterations = it + 1;
    if (run.assignment == previous) break;
    previous = run.assignment;
    update_centroids(points, run.assignment, centroids);
  }
  run.centroids = std::move(centroids);
  std::vector<std::size_t> scratch(points.size());
  run.objective = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    run.objective += squared_distance(points[i], run.centroids[run.assignment[i]]);
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k == 0) throw ValidationError("kmeans: k must be positive");
  if (points.size() < k) {
    throw ValidationError("kmeans: " + std::to_string(points.size()) +
                          " points cannot form " + std::to_string(k) +
                          " clusters");
  }
  const std::size_t dims = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dims) throw ValidationError("kmeans: ragged point matrix");
  }
  std::optional<LloydRun> best;
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    auto run = lloyd(points, kmeanspp_init(points, k, rng),
                     std::max<std::size_t>(1, options.max_iterations));
    if (!best || run.objective < best->objective) best = std::move(run);
  }
  KMeansResult result;
  result.assignment = std::move(best->assignment);
  result.centroids = std::move(best->centroids);
  result.objective = best->objective;
  result.objective_history = std::move(best->history);
  result.iterations = best->iterations;
  return result;
}

std::vector<std::size_t> proportional_allocation(
    std::span<const std::size_t> cluster_sizes, std::size_t target) {
  const std::size_t total =
      std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
  if (target > total) {
    throw ValidationError("sample target " + std::to_string(target) +
                          " exceeds population " + std::to_string(total));
  }
  std::vector<std::size_t> alloc(cluster_sizes.size(), 0);
  if (total == 0) return alloc;
  std::vector<std::size_t> remainder(cluster_sizes.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < cluster_sizes.size(); ++i) {
    alloc[i] = target * cluster_sizes[i] / total;
    remainder[i] = target * cluster_sizes[i] % total;
    assigned += alloc[i];
  }
  std::vector<std::size_t> order(cluster_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t i = 0; assigned < target; ++i) {
    ++alloc[order[i % order.size()]];
    ++assigned;
  }
  return alloc;
}

std::vector<std::string> stratified_sample(
    std::span<const std::string> ids, std::span<const std::size_t> assignment,
    std::size_t target, std::uint64_t seed) {
  if (ids.size() != assignment.size()) {
    throw ValidationError("stratified_sample: ids and assignment differ in size");
  }
  if (target > ids.size()) {
    throw ValidationError("sample target " + std::to_string(target) +
                          " exceeds population " + std::to_string(ids.size()));
  }
  const std::size_t clusters =
      ids.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<std::vector<std::size_t>> members(clusters);
  for (std::size_t i = 0; i < ids.size(); ++i) members[assignment[i]].push_back(i);
  std::vector<std::size_t> sizes(clusters);
  for (std::size_t c = 0; c < clusters; ++c) sizes[c] = members[c].size();
  const auto alloc = proportional_allocation(sizes, target);

  std::mt19937_64 rng(seed);
  std::vector<bool> selected(ids.size(), false);
  std::size_t count = 0;
  for (std::size_t c = 0; c < clusters; ++c) {
    auto pool = members[c];
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t j = 0; j < alloc[c] && j < pool.size(); ++j) {
      selected[pool[j]] = true;
      ++count;
    }
  }
  if (count < target) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!selected[i]) rest.push_back(i);
    }
    std::shuffle(rest.begin(), rest.end(), rng);
    for (std::size_t j = 0; count < target; ++j, ++count) selected[rest[j]] = true;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (selected[i]) out.push_back(ids[i]);
  }
  return out;
}

// --- Augmentation -------------------------------------------------------------

AugmentPlan plan_augment(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AugmentPlan plan;
  plan.shift = unit(rng) < 0.5;
  plan.semitones = -2.0 + 4.0 * unit(rng);
  plan.noise = unit(rng) < 0.5;
  plan.noise_sigma_fraction = 0.005 * (1.0 - unit(rng));
  plan.noise_seed = rng();
  return plan;
}

AudioClip apply_augment(const AudioClip& clip, const AugmentPlan& plan) {
  if (clip.samples.empty()) throw ValidationError("augment: empty clip");
  AudioClip out = clip;
  if (plan.shift) out.samples = dsp::pitch_shift(clip.samples, plan.semitones);
  if (plan.noise) {
    const double sigma = plan.noise_sigma_fraction * peak(clip.samples);
    if (sigma > 0.0) {
      std::mt19937_64 rng(plan.noise_seed);
      std::normal_distribution<double> gauss(0.0, sigma);
      for (double& s : out.samples) s += gauss(rng);
    }
  }
  return out;
}

AudioClip augment(const AudioClip& clip, std::uint64_t seed) {
  return apply_augment(clip, plan_augment(seed));
}

// --- Manifest -----------------------------------------------------------------

const ManifestEntry* DatasetManifest::find(std::string_view clip_id) const {
  for (const auto& e : entries) {
    if (e.clip_id == clip_id) return &e;
  }
  return nullptr;
}

namespace {

constexpr const char* kManifestHeader[] = {"clip_id", "path", "class_id",
                                           "class_name", "category_id"};

int parse_int(const std::string& s, std::size_t line, const char* column) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ValidationError("manifest line " + std::to_string(line) + ": " + column +
                          " '" + s + "' is not an integer");
  }
  return v;
}

}  // namespace

DatasetManifest parse_manifest(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ValidationError("manifest is empty");
  const auto& header = rows.front().fields;
  bool header_ok = header.size() == std::size(kManifestHeader);
  for (std::size_t i = 0; header_ok && i < header.size(); ++i) {
    header_ok = header[i] == kManifestHeader[i];
  }
  if (!header_ok) {
    throw ValidationError(
        "manifest header must be clip_id,path,class_id,class_name,category_id");
  }
  DatasetManifest manifest;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "manifest line " + std::to_string(row.line);
    if (row.fields.size() != 5) {
      throw ValidationError(where + ": expected 5 fields, got " +
                            std::to_string(row.fields.size()));
    }
    ManifestEntry e;
    e.clip_id = row.fields[0];
    e.path = row.fields[1];
    e.class_id = parse_int(row.fields[2], row.line, "class_id");
    e.class_name = row.fields[3];
    e.category_id = parse_int(row.fields[4], row.line, "category_id");
    if (e.clip_id.empty()) throw ValidationError(where + ": empty clip_id");
    if (e.class_id < 0 || e.class_id > 49) {
      throw ValidationError(where + ": class_id " + std::to_string(e.class_id) +
                            " outside 0-49");
    }
    if (e.category_id < 1 || e.category_id > 5) {
      throw ValidationError(where + ": category_id " +
                            std::to_string(e.category_id) + " outside 1-5");
    }
    if (!seen.insert(e.clip_id).second) {
      throw ValidationError(where + ": duplicate clip_id '" + e.clip_id + "'");
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  try {
    return parse_manifest(csv::read_file(path.string()));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::ostringstream out;
  out << "clip_id,path,class_id,class_name,category_id\n";
  for (const auto& e : manifest.entries) {
    out << csv::quote(e.clip_id) << ',' << csv::quote(e.path) << ',' << e.class_id
        << ',' << csv::quote(e.class_name) << ',' << e.category_id << '\n';
  }
  return out.str();
}

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << format_manifest(manifest);
}

DatasetManifest curate(const DatasetManifest& manifest,
                       const std::filesystem::path& base_dir,
                       const CurateOptions& options) {
  std::map<int, std::vector<const ManifestEntry*>> by_class;
  for (const auto& e : manifest.entries) by_class[e.class_id].push_back(&e);

  std::set<std::string> keep;
  for (const auto& [class_id, entries] : by_class) {
    if (entries.size() < options.per_class) {
      throw ValidationError("class " + std::to_string(class_id) + " has " +
                            std::to_string(entries.size()) + " clips, fewer than " +
                            std::to_string(options.per_class));
    }
    Matrix features;
    std::vector<std::string> ids;
    for (const ManifestEntry* e : entries) {
      std::filesystem::path p(e->path);
      if (p.is_relative()) p = base_dir / p;
      const auto fv = extract_features(load_wav(p)).to_array();
      features.emplace_back(fv.begin(), fv.end());
      ids.push_back(e->clip_id);
    }
    const std::uint64_t class_seed =
        options.seed * 1000003ULL + static_cast<std::uint64_t>(class_id);
    const auto clusters = kmeans(standardize(features),
                                 std::min(options.clusters, features.size()),
                                 class_seed);
    for (auto& id : stratified_sample(ids, clusters.assignment,
                                      options.per_class, class_seed)) {
      keep.insert(std::move(id));
    }
  }
  DatasetManifest out;
  for (const auto& e : manifest.entries) {
    if (keep.count(e.clip_id)) out.entries.push_back(e);
  }
  return out;
}

}  // namespace sonovib::curation
