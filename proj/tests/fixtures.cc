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

#include "fixtures.h"

#include <cmath>
#include <numbers>
#include <random>

namespace sonovib::testing {

std::vector<double> sine(double freq_hz, double sample_rate, std::size_t n,
                         double amplitude, double phase) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                      static_cast<double>(i) / sample_rate +
                                  phase);
  }
  return out;
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> out(n);
  for (double& v : out) v = g(rng);
  return out;
}

AudioClip make_clip(std::vector<double> samples, int sample_rate, std::string id) {
  AudioClip c;
  c.samples = std::move(samples);
  c.sample_rate = sample_rate;
  c.source_id = std::move(id);
  return c;
}

double dft_power(std::span<const double> x, std::size_t k) {
  const double w = 2.0 * std::numbers::pi * static_cast<double>(k) /
                   static_cast<double>(x.size());
  // Goertzel recursion.
  const double coeff = 2.0 * std::cos(w);
  double s1 = 0.0, s2 = 0.0;
  for (double v : x) {
    const double s = v + coeff * s1 - s2;
    s2 = s1;
    s1 = s;
  }
  return std::max(0.0, s1 * s1 + s2 * s2 - coeff * s1 * s2);
}

double dominant_frequency(std::span<const double> x, double sample_rate,
                          double f_lo, double f_hi) {
  const double n = static_cast<double>(x.size());
  const auto k_lo = static_cast<std::size_t>(std::max(1.0, std::ceil(f_lo * n / sample_rate)));
  const auto k_hi = static_cast<std::size_t>(
      std::min(std::floor(f_hi * n / sample_rate), n / 2.0));
  std::size_t best = k_lo;
  double best_p = -1.0;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double p = dft_power(x, k);
    if (p > best_p) {
      best_p = p;
      best = k;
    }
  }
  return static_cast<double>(best) * sample_rate / n;
}

double band_energy_fraction(std::span<const double> x, double sample_rate,
                            double f_lo, double f_hi) {
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  for (double v : x) total += v * v;
  if (total <= 0.0) return 0.0;
  const auto k_lo = static_cast<std::size_t>(std::max(1.0, std::ceil(f_lo * n / sample_rate)));
  const auto k_hi = static_cast<std::size_t>(
      std::min(std::floor(f_hi * n / sample_rate), std::ceil(n / 2.0) - 1.0));
  double band = 0.0;
  for (std::size_t k = k_lo; k <= k_hi; ++k) band += 2.0 * dft_power(x, k);
  return band / (n * total);
}

std::vector<AudioClip> converter_fixture_set() {
  constexpr int kFs = 44100;
  std::vector<AudioClip> clips;
  const auto add = [&](std::vector<double> x, const std::string& id,
                       std::uint64_t seed) {
    const auto floor = white_noise(x.size(), seed, 1e-3);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += floor[i];
    clips.push_back(make_clip(std::move(x), kFs, id));
  };
  const auto secs = [](double s) { return static_cast<std::size_t>(s * kFs); };

  const double tones[] = {55.0, 220.0, 440.0, 1000.0, 3000.0};
  for (std::size_t i = 0; i < std::size(tones); ++i) {
    add(sine(tones[i], kFs, secs(1.5), 0.5), "tone" + std::to_string(i), 100 + i);
  }
  // Linear chirps.
  for (int i = 0; i < 3; ++i) {
    const double f0 = 100.0 * (i + 1), f1 = 2000.0 * (i + 1), dur = 2.0;
    std::vector<double> x(secs(dur));
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double t = static_cast<double>(n) / kFs;
      x[n] = 0.4 * std::sin(2.0 * std::numbers::pi * (f0 * t + 0.5 * (f1 - f0) / dur * t * t));
    }
    add(std::move(x), "chirp" + std::to_string(i), 200 + i);
  }
  // Noise, plain and shaped by bursts.
  for (int i = 0; i < 4; ++i) {
    auto x = white_noise(secs(1.0 + 0.5 * i), 300 + i, 0.1 + 0.05 * i);
    if (i % 2 == 1) {
      for (std::size_t n = 0; n < x.size(); ++n) {
        if ((n / secs(0.25)) % 2 == 1) x[n] *= 0.05;
      }
    }
    add(std::move(x), "noise" + std::to_string(i), 400 + i);
  }
  // Amplitude-modulated tones.
  for (int i = 0; i < 3; ++i) {
    auto x = sine(300.0 + 200.0 * i, kFs, secs(2.0), 0.5);
    for (std::size_t n = 0; n < x.size(); ++n) {
      x[n] *= 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * (2.0 + 3.0 * i) *
                                    static_cast<double>(n) / kFs));
    }
    add(std::move(x), "am" + std::to_string(i), 500 + i);
  }
  // Click trains.
  for (int i = 0; i < 2; ++i) {
    std::vector<double> x(secs(2.0), 0.0);
    const std::size_t period = secs(0.1 + 0.15 * i);
    for (std::size_t n = 0; n < x.size(); n += period) {
      for (std::size_t j = 0; j < 200 && n + j < x.size(); ++j) {
        x[n + j] = 0.8 * std::exp(-static_cast<double>(j) / 40.0) *
                   std::sin(2.0 * std::numbers::pi * 2500.0 * j / kFs);
      }
    }
    add(std::move(x), "clicks" + std::to_string(i), 600 + i);
  }
  // Harmonic stacks (roughness-heavy dyads).
  for (int i = 0; i < 3; ++i) {
    auto x = sine(400.0, kFs, secs(1.2), 0.3);
    const auto y = sine(400.0 + 20.0 * (i + 1), kFs, x.size(), 0.3);
    const auto z = sine(1200.0, kFs, x.size(), 0.1);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] += y[n] + z[n];
    add(std::move(x), "dyad" + std::to_string(i), 700 + i);
  }
  return clips;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("sonovib_test_" + name + "_" +
                    std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sonovib::testing
