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

// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--group all|core|ratings]
//
// The ratings group needs the Study-1 listening-test ratings export:
//   SONOVIB_RATINGS_CSV       ratings CSV
//   SONOVIB_RATINGS_MANIFEST  manifest CSV covering every rated clip
//   SONOVIB_COLUMN_MAP        optional JSON column map for foreign exports
// When those are absent the ratings lines report FAIL and, for
// --group ratings, the exit status is 77 so ctest marks the test skipped.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "sonovib/analysis.h"
#include "sonovib/bench.h"
#include "sonovib/converters.h"
#include "sonovib/curation.h"
#include "sonovib/dsp.h"
#include "sonovib/error.h"

namespace {

using namespace sonovib;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kMeanTol = 0.1;
constexpr double kSdTol = 0.1;
constexpr double kAggregateSeconds = 5.0;
constexpr double kConverterSuiteSeconds = 60.0;
constexpr double kHapticLo = 145.0, kHapticHi = 255.0;
constexpr double kPitchLo = 45.0, kPitchHi = 405.0;
constexpr double kPlmBandFraction = 0.90;
constexpr double kPlmHalfWidth = 15.0;
constexpr double kNoiseBelow1kFraction = 0.80;
constexpr double kBandpassRejectDb = 30.0;
constexpr int kBlendCases = 1000;
constexpr double kMseZero = 1e-12;
constexpr double kOtherZero = 1e-6;
constexpr double kHomogeneityRel = 1e-9;
constexpr int kKMeansSeeds = 20;
constexpr double kSoftLatencySeconds = 1.0;

struct Outcome {
  bool pass = false;
  std::string detail;
  bool blocked = false;  // input data unavailable
};

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// --- ratings ------------------------------------------------------------------

// Expected per-class winners of the Study-1 listening test.
std::map<int, Algorithm> expected_class_winners() {
  std::map<int, Algorithm> w;
  for (int c : {10, 18, 20, 21, 24, 35, 36, 41, 44, 47}) w[c] = Algorithm::kFshift;
  for (int c : {3, 5, 7, 9, 11, 13, 14, 16, 17, 23, 33, 43, 46}) w[c] = Algorithm::kHapticgen;
  for (int c = 0; c < 50; ++c) w.try_emplace(c, Algorithm::kPitch);
  return w;
}

struct RatingsData {
  std::optional<analysis::RatingsTable> table;
  curation::DatasetManifest manifest;
  std::string missing;
  double load_seconds = 0.0;
};

RatingsData& ratings_data() {
  static RatingsData data = [] {
    RatingsData d;
    const char* csv = std::getenv("SONOVIB_RATINGS_CSV");
    const char* man = std::getenv("SONOVIB_RATINGS_MANIFEST");
    if (!csv || !man) {
      d.missing = "Study-1 ratings not supplied (set SONOVIB_RATINGS_CSV and "
                  "SONOVIB_RATINGS_MANIFEST)";
      return d;
    }
    const auto start = Clock::now();
    try {
      const char* map = std::getenv("SONOVIB_COLUMN_MAP");
      const auto cols = map ? analysis::ColumnMap::load(map) : analysis::ColumnMap{};
      d.table = analysis::load_ratings(csv, cols);
      d.manifest = curation::load_manifest(man);
    } catch (const std::exception& e) {
      d.table.reset();
      d.missing = std::string("could not load ratings: ") + e.what();
    }
    d.load_seconds = elapsed(start);
    return d;
  }();
  return data;
}

Outcome aggregate_reproduction() {
  auto& d = ratings_data();
  if (!d.table) return {false, d.missing, true};
  const auto start = Clock::now();
  const auto r = analysis::aggregate(*d.table, d.manifest, analysis::Level::kOverall);
  const double seconds = d.load_seconds + elapsed(start);
  struct Expect { Algorithm algo; double mean, sd; };
  const Expect expected[] = {{Algorithm::kPitch, 62.6, 22.9},
                             {Algorithm::kHapticgen, 57.0, 23.2},
                             {Algorithm::kFshift, 56.9, 24.3},
                             {Algorithm::kPlm, 31.2, 22.9}};
  bool ok = seconds < kAggregateSeconds;
  std::string detail;
  for (const auto& e : expected) {
    const auto& s = r.overall[analysis::algorithm_index(e.algo)];
    ok = ok && std::abs(s.mean - e.mean) <= kMeanTol && std::abs(s.sd - e.sd) <= kSdTol;
    detail += std::string(to_string(e.algo)) + " " + fmt(s.mean, 2) + "/" + fmt(s.sd, 2) + " ";
  }
  return {ok, detail + "in " + fmt(seconds, 2) + " s"};
}

Outcome winner_reproduction() {
  auto& d = ratings_data();
  if (!d.table) return {false, d.missing, true};
  const auto r = analysis::aggregate(*d.table, d.manifest, analysis::Level::kClass);
  const auto idx = [](Algorithm a) { return analysis::algorithm_index(a); };
  bool ok = r.clip_wins[idx(Algorithm::kPitch)] == 403 &&
            r.clip_wins[idx(Algorithm::kFshift)] == 288 &&
            r.clip_wins[idx(Algorithm::kHapticgen)] == 261 &&
            r.clip_wins[idx(Algorithm::kPlm)] == 56 && r.tie_count == 8;
  const auto table = expected_class_winners();
  int matched = 0;
  for (const auto& g : r.groups) {
    const auto it = table.find(std::stoi(g.key));
    if (it != table.end() && g.winners.size() == 1 && g.winners[0] == it->second) ++matched;
  }
  ok = ok && matched == 50 && r.groups.size() == 50;
  return {ok, "clip wins pitch " + std::to_string(r.clip_wins[idx(Algorithm::kPitch)]) +
                  ", fshift " + std::to_string(r.clip_wins[idx(Algorithm::kFshift)]) +
                  ", hapticgen " + std::to_string(r.clip_wins[idx(Algorithm::kHapticgen)]) +
                  ", plm " + std::to_string(r.clip_wins[idx(Algorithm::kPlm)]) + ", ties " +
                  std::to_string(r.tie_count) + "; class winners " +
                  std::to_string(matched) + "/50"};
}

// --- converters ---------------------------------------------------------------

Outcome converter_invariants() {
  const auto start = Clock::now();
  const ConverterConfig cfg;
  const auto clips = testing::converter_fixture_set();
  std::vector<std::string> problems;
  double hap_lo = 1e9, hap_hi = 0, pitch_lo = 1e9, pitch_hi = 0, plm_min = 1.0;
  for (const auto& clip : clips) {
    for (Algorithm algo : kRatedAlgorithms) {
      const std::string tag = clip.source_id + "/" + std::string(to_string(algo));
      const auto a = convert(clip, algo, cfg);
      const auto b = convert(clip, algo, cfg);
      if (a.sample_rate != 8000) problems.push_back(tag + " rate");
      const double frame_s = algo == Algorithm::kPlm
                                 ? static_cast<double>(cfg.plm.frame_size) / clip.sample_rate
                                 : (algo == Algorithm::kFshift ? 1.0 / 8000 : 0.01);
      if (std::abs(static_cast<double>(a.samples.size()) / 8000.0 - clip.duration_s()) >
          frame_s + 1e-12) {
        problems.push_back(tag + " duration");
      }
      if (peak(a.samples) > 1.0) problems.push_back(tag + " range");
      if (a.samples.size() != b.samples.size() ||
          std::memcmp(a.samples.data(), b.samples.data(), a.samples.size() * sizeof(double))) {
        problems.push_back(tag + " nondeterministic");
      }
      if (algo == Algorithm::kHapticgen || algo == Algorithm::kPitch) {
        const auto est = dsp::instantaneous_frequency(a.samples, 8000);
        const double lo = *std::min_element(est.begin(), est.end());
        const double hi = *std::max_element(est.begin(), est.end());
        if (algo == Algorithm::kHapticgen) {
          hap_lo = std::min(hap_lo, lo);
          hap_hi = std::max(hap_hi, hi);
          if (lo < kHapticLo || hi > kHapticHi) problems.push_back(tag + " frequency");
        } else {
          pitch_lo = std::min(pitch_lo, lo);
          pitch_hi = std::max(pitch_hi, hi);
          if (lo < kPitchLo || hi > kPitchHi) problems.push_back(tag + " frequency");
        }
      }
      if (algo == Algorithm::kPlm) {
        const double f1 = cfg.plm.carrier1_hz, f2 = cfg.plm.carrier2_hz;
        // The two bands overlap by 5 Hz; integrate their union once.
        const double frac =
            testing::band_energy_fraction(a.samples, 8000, f1 - kPlmHalfWidth,
                                          f2 + kPlmHalfWidth) -
            (f1 + kPlmHalfWidth < f2 - kPlmHalfWidth
                 ? testing::band_energy_fraction(a.samples, 8000, f1 + kPlmHalfWidth,
                                                 f2 - kPlmHalfWidth)
                 : 0.0);
        plm_min = std::min(plm_min, frac);
        if (frac < kPlmBandFraction) problems.push_back(tag + " band energy");
      }
    }
  }
  const double seconds = elapsed(start);
  if (seconds >= kConverterSuiteSeconds) problems.push_back("runtime");
  std::string detail = std::to_string(clips.size()) + " clips; hapticgen IF [" +
                       fmt(hap_lo, 1) + ", " + fmt(hap_hi, 1) + "] Hz; pitch IF [" +
                       fmt(pitch_lo, 1) + ", " + fmt(pitch_hi, 1) + "] Hz; plm band energy >= " +
                       fmt(plm_min, 4) + "; " + fmt(seconds, 1) + " s";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

Outcome spectral_checks() {
  const int fs = 44100;
  const ConverterConfig cfg;
  const auto tone = testing::make_clip(testing::sine(440.0, fs, 2 * fs, 0.5), fs);
  const auto v = convert_fshift(tone, cfg);
  const double bin = 8000.0 / static_cast<double>(v.samples.size());
  const double f_peak = testing::dominant_frequency(v.samples, 8000, 1, 4000);
  const bool peak_ok = std::abs(f_peak - 220.0) <= bin;

  const auto noise = testing::make_clip(testing::white_noise(2 * fs, 2024, 0.2), fs);
  const auto vn = convert_fshift(noise, cfg);
  const double below = testing::band_energy_fraction(vn.samples, 8000, 0, 1000);

  // Swept-sine oracle: steady-state RMS gain of the filter at each frequency.
  const dsp::FilterSpec bp{dsp::FilterKind::kBandpass, 250.0, 1.0, 4};
  const auto gain = [&](double f) {
    const auto x = testing::sine(f, fs, fs, 0.5);
    const auto y = dsp::butterworth_filter(x, bp, fs);
    return rms(std::span(y).subspan(fs / 2)) / rms(std::span(x).subspan(fs / 2));
  };
  const double reject_db = 20.0 * std::log10(gain(250.0) / gain(2500.0));
  const bool ok = peak_ok && below >= kNoiseBelow1kFraction && reject_db >= kBandpassRejectDb;
  return {ok, "fshift(440 Hz) peak " + fmt(f_peak, 2) + " Hz (bin " + fmt(bin, 2) +
                  "); noise energy < 1 kHz " + fmt(below, 4) + "; bandpass 2500 Hz " +
                  fmt(reject_db, 1) + " dB below 250 Hz"};
}

// --- blending / metrics ---------------------------------------------------------

Outcome blending() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0), r(0.0, 100.0);
  const auto random_refs = [&](std::size_t n) {
    std::vector<VibrationSignal> refs(4);
    for (auto& ref : refs) {
      ref.samples.resize(n);
      for (double& v : ref.samples) v = u(rng);
    }
    return refs;
  };
  bool one_hot = true;
  const auto refs = random_refs(4000);
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<double> w(4, 0.0);
    w[k] = 100.0;
    one_hot = one_hot && analysis::blend_targets(refs, w).samples == refs[k].samples;
  }
  int violations = 0;
  for (int c = 0; c < kBlendCases; ++c) {
    const auto rs = random_refs(128);
    std::vector<double> w(4);
    for (double& v : w) v = r(rng);
    const auto out = analysis::blend_targets(rs, w);
    for (std::size_t n = 0; n < 128; ++n) {
      double lo = rs[0].samples[n], hi = lo;
      for (const auto& ref : rs) {
        lo = std::min(lo, ref.samples[n]);
        hi = std::max(hi, ref.samples[n]);
      }
      if (out.samples[n] < lo || out.samples[n] > hi) {
        ++violations;
        break;
      }
    }
  }
  return {one_hot && violations == 0,
          std::string("one-hot bit-exact: ") + (one_hot ? "yes" : "no") + "; envelope violations " +
              std::to_string(violations) + "/" + std::to_string(kBlendCases)};
}

Outcome metrics() {
  const auto x = testing::white_noise(8000, 31, 0.2);
  const auto same = analysis::reconstruction_metrics(x, x);
  const bool zero = same.mse <= kMseZero && same.rmse <= kOtherZero &&
                    same.stft_loss <= kOtherZero && same.mel_l1 <= kOtherZero &&
                    same.amp_loss <= kOtherZero;

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  bool exact = true;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(10), t(10);
    for (double& v : p) v = u(rng);
    for (double& v : t) v = u(rng);
    double se = 0.0;
    for (int i = 0; i < 10; ++i) se += (p[i] - t[i]) * (p[i] - t[i]);
    exact = exact && analysis::reconstruction_metrics(p, t).mse == se / 10.0;
  }

  const auto p = testing::white_noise(4000, 32, 0.2);
  const auto t = testing::white_noise(4000, 33, 0.2);
  const auto base = analysis::reconstruction_metrics(p, t);
  double worst = 0.0;
  for (double a : {0.25, 2.0, 7.5}) {
    auto ps = p, ts = t;
    for (double& v : ps) v *= a;
    for (double& v : ts) v *= a;
    const auto m = analysis::reconstruction_metrics(ps, ts);
    worst = std::max({worst, std::abs(m.rmse / (a * base.rmse) - 1.0),
                      std::abs(m.amp_loss / (a * base.amp_loss) - 1.0),
                      std::abs(m.mse / (a * a * base.mse) - 1.0)});
  }
  const bool homog = worst <= kHomogeneityRel;
  return {zero && exact && homog,
          std::string("identical -> zero: ") + (zero ? "yes" : "no") +
              "; 10-sample mse exact: " + (exact ? "yes" : "no") +
              "; worst homogeneity rel. error " + [&] {
                std::ostringstream s;
                s << std::scientific << std::setprecision(2) << worst;
                return s.str();
              }()};
}

// --- curation / bench -------------------------------------------------------------

Outcome curation_checks() {
  int recovered = 0;
  bool monotone = true;
  for (int seed = 0; seed < kKMeansSeeds; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::normal_distribution<double> g(0.0, 0.05);
    const double centres[3][2] = {{0, 0}, {1, 0}, {0, 1}};
    curation::Matrix pts;
    std::vector<std::size_t> labels;
    for (std::size_t c = 0; c < 3; ++c) {
      for (int i = 0; i < 30; ++i) {
        pts.push_back({centres[c][0] + g(rng), centres[c][1] + g(rng)});
        labels.push_back(c);
      }
    }
    const auto r = curation::kmeans(pts, 3, static_cast<std::uint64_t>(seed));
    std::map<std::size_t, std::size_t> to_label;
    bool same = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      same = same && to_label.try_emplace(r.assignment[i], labels[i]).first->second == labels[i];
    }
    same = same && to_label.size() == 3;
    recovered += same;
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      monotone = monotone && r.objective_history[i] <= r.objective_history[i - 1];
    }
  }
  const auto alloc = curation::proportional_allocation(std::vector<std::size_t>{20, 12, 8}, 20);
  const bool alloc_ok = alloc == std::vector<std::size_t>{10, 6, 4};
  return {recovered == kKMeansSeeds && monotone && alloc_ok,
          "blobs recovered " + std::to_string(recovered) + "/" + std::to_string(kKMeansSeeds) +
              ", objective monotone: " + (monotone ? "yes" : "no") + "; allocation (" +
              std::to_string(alloc[0]) + ", " + std::to_string(alloc[1]) + ", " +
              std::to_string(alloc[2]) + ")"};
}

Outcome bench_protocol() {
  constexpr int kRate = 8000;
  std::vector<AudioClip> sources;
  for (std::size_t i = 0; i < bench::kSourceClips; ++i) {
    sources.push_back(testing::make_clip(testing::white_noise(5 * kRate, 50 + i, 0.2), kRate,
                                         "src" + std::to_string(i)));
  }
  const auto corpus = bench::build_bench_corpus(sources);
  const bool sizes = corpus.at(1).size() == 250 && corpus.at(2).size() == 100 &&
                     corpus.at(5).size() == 50 && corpus.at(10).size() == 50 &&
                     corpus.at(20).size() == 50;
  bool lossless = true;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::vector<double> joined;
    for (std::size_t s = 0; s < 5; ++s) {
      const auto& seg = corpus.at(1)[i * 5 + s].samples;
      joined.insert(joined.end(), seg.begin(), seg.end());
    }
    lossless = lossless && joined == sources[i].samples;
  }
  // Soft target: one 5 s clip at 44.1 kHz through each converter.
  const auto clip = testing::make_clip(testing::white_noise(5 * 44100, 77, 0.2), 44100);
  double slowest = 0.0;
  for (Algorithm a : kRatedAlgorithms) {
    const auto start = Clock::now();
    convert(clip, a, {});
    slowest = std::max(slowest, elapsed(start));
  }
  return {sizes && lossless && slowest < kSoftLatencySeconds,
          "sizes " + std::to_string(corpus.at(1).size()) + "/" +
              std::to_string(corpus.at(2).size()) + "/" + std::to_string(corpus.at(5).size()) +
              "/" + std::to_string(corpus.at(10).size()) + "/" +
              std::to_string(corpus.at(20).size()) + "; lossless: " + (lossless ? "yes" : "no") +
              "; slowest converter on 5 s clip " + fmt(slowest, 3) + " s"};
}

struct Criterion {
  const char* group;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::string group = "all";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--group" && i + 1 < argc) {
      group = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--group all|core|ratings]\n";
      return 2;
    }
  }
  if (group != "all" && group != "core" && group != "ratings") {
    std::cerr << "unknown group '" << group << "'\n";
    return 2;
  }
  const std::vector<Criterion> criteria = {
      {"ratings", "aggregate-reproduction", aggregate_reproduction},
      {"ratings", "winner-reproduction", winner_reproduction},
      {"core", "converter-invariants", converter_invariants},
      {"core", "spectral-checks", spectral_checks},
      {"core", "blending", blending},
      {"core", "metrics", metrics},
      {"core", "curation", curation_checks},
      {"core", "bench-protocol", bench_protocol},
  };
  int failed = 0, blocked = 0, ran = 0;
  for (const auto& c : criteria) {
    if (group != "all" && group != c.group) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
    if (!o.pass) {
      ++failed;
      blocked += o.blocked;
    }
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed";
  if (blocked) std::cout << " (" << blocked << " blocked on missing data)";
  std::cout << std::endl;
  if (failed == 0) return 0;
  // Only data-blocked failures in the ratings group: report as skipped.
  if (group == "ratings" && failed == blocked) return 77;
  return 1;
}
