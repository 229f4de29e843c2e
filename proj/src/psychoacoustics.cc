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

#include "sonovib/psychoacoustics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sonovib/dsp.h"
#include "sonovib/error.h"

namespace sonovib::psycho {
namespace {

// 40-phon equal-loudness contour, ISO 226:2003.
constexpr double kContourHz[] = {
    20,   25,   31.5, 40,   50,   63,   80,    100,   125,  160,
    200,  250,  315,  400,  500,  630,  800,   1000,  1250, 1600,
    2000, 2500, 3150, 4000, 5000, 6300, 8000, 10000, 12500};
constexpr double kContourSpl[] = {
    99.85, 93.94, 88.17, 82.63, 77.78, 73.08, 68.48, 64.37, 60.59, 56.70,
    53.41, 50.40, 47.58, 45.21, 43.21, 41.63, 40.62, 40.01, 41.82, 42.51,
    39.23, 36.51, 35.61, 36.65, 40.01, 45.83, 51.80, 54.28, 51.49};

// Contour level at f, linear in log-frequency, flat beyond the table.
double contour_at(const LoudnessConfig& cfg, double f) {
  const auto& hz = cfg.contour_hz;
  const auto& spl = cfg.contour_spl;
  if (f <= hz.front()) return spl.front();
  if (f >= hz.back()) return spl.back();
  const auto it = std::upper_bound(hz.begin(), hz.end(), f);
  const auto i = static_cast<std::size_t>(it - hz.begin());
  const double t = std::log(f / hz[i - 1]) / std::log(hz[i] / hz[i - 1]);
  return spl[i - 1] + t * (spl[i] - spl[i - 1]);
}

void check_frame(std::span<const double> frame, std::size_t min_len,
                 const char* what) {
  if (frame.size() < min_len) {
    throw ValidationError(std::string(what) + ": frame of " +
                          std::to_string(frame.size()) +
                          " samples is shorter than " +
                          std::to_string(min_len));
  }
}

// One-sided power spectrum of the Hann-windowed frame, scaled so the bins
// sum to the frame's mean-square value.
struct PowerSpectrum {
  std::vector<double> power;
  double bin_hz = 0.0;
};

PowerSpectrum power_spectrum(std::span<const double> frame,
                             double sample_rate) {
  const std::size_t n_fft = dsp::next_pow2(frame.size());
  const auto window = dsp::hann_window(frame.size());
  std::vector<double> buf(frame.size());
  double window_energy = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    buf[i] = frame[i] * window[i];
    window_energy += window[i] * window[i];
  }
  const auto spec = dsp::rfft(buf, n_fft);
  PowerSpectrum ps;
  ps.bin_hz = sample_rate / static_cast<double>(n_fft);
  ps.power.resize(spec.size());
  const double scale = 1.0 / (static_cast<double>(n_fft) * window_energy);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const bool edge = k == 0 || k == spec.size() - 1;
    ps.power[k] = (edge ? 1.0 : 2.0) * std::norm(spec[k]) * scale;
  }
  return ps;
}

}  // namespace

PsychoConfig PsychoConfig::defaults() {
  PsychoConfig cfg;
  cfg.loudness.contour_hz.assign(std::begin(kContourHz), std::end(kContourHz));
  cfg.loudness.contour_spl.assign(std::begin(kContourSpl), std::end(kContourSpl));
  return cfg;
}

double hz_to_bark(double hz) {
  return 13.0 * std::atan(0.00076 * hz) +
         3.5 * std::atan((hz / 7500.0) * (hz / 7500.0));
}

std::size_t bark_band_of(double hz) {
  const double z = hz_to_bark(std::max(0.0, hz));
  return std::min<std::size_t>(kBarkBands - 1, static_cast<std::size_t>(z));
}

BarkVector bark_band_energies(std::span<const double> frame,
                              double sample_rate) {
  check_frame(frame, kMinLoudnessFrame, "bark_band_energies");
  const auto ps = power_spectrum(frame, sample_rate);
  BarkVector bands{};
  for (std::size_t k = 0; k < ps.power.size(); ++k) {
    bands[bark_band_of(static_cast<double>(k) * ps.bin_hz)] += ps.power[k];
  }
  return bands;
}

BarkVector specific_loudness_bark(std::span<const double> frame,
                                  double sample_rate, const PsychoConfig& cfg) {
  check_frame(frame, kMinLoudnessFrame, "specific_loudness_bark");
  const LoudnessConfig& lc = cfg.loudness;
  if (lc.contour_hz.size() < 2 || lc.contour_hz.size() != lc.contour_spl.size()) {
    throw ValidationError("loudness contour needs matching frequency and level "
                          "tables of at least two points");
  }
  const auto ps = power_spectrum(frame, sample_rate);
  const double ref_level = contour_at(lc, 1000.0);
  BarkVector intensity{};
  for (std::size_t k = 0; k < ps.power.size(); ++k) {
    if (ps.power[k] == 0.0) continue;
    const double f = static_cast<double>(k) * ps.bin_hz;
    const double weight = std::pow(10.0, (ref_level - contour_at(lc, f)) / 10.0);
    intensity[bark_band_of(f)] += ps.power[k] * weight;
  }
  const double ref_power =
      0.5 * std::pow(10.0, (lc.reference_spl - lc.full_scale_spl) / 10.0);
  BarkVector out{};
  for (std::size_t b = 0; b < kBarkBands; ++b) {
    out[b] = intensity[b] > 0.0 ? std::pow(intensity[b] / ref_power, lc.exponent)
                                : 0.0;
  }
  return out;
}

double frame_loudness(std::span<const double> frame, double sample_rate,
                      const PsychoConfig& cfg) {
  check_frame(frame, kMinLoudnessFrame, "frame_loudness");
  const auto specific = specific_loudness_bark(frame, sample_rate, cfg);
  double total = 0.0;
  for (double v : specific) total += v;
  return total;
}

std::vector<SpectralPeak> spectral_peaks(std::span<const double> frame,
                                         double sample_rate,
                                         const RoughnessConfig& cfg) {
  // 4x zero padding keeps parabolic amplitude error well under 0.01%.
  const std::size_t n_fft = 4 * dsp::next_pow2(frame.size());
  const auto window = dsp::blackman_harris_window(frame.size());
  std::vector<double> buf(frame.size());
  double window_sum = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    buf[i] = frame[i] * window[i];
    window_sum += window[i];
  }
  const auto spec = dsp::rfft(buf, n_fft);
  std::vector<double> mag(spec.size());
  double max_mag = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    mag[k] = std::abs(spec[k]);
    max_mag = std::max(max_mag, mag[k]);
  }
  if (max_mag == 0.0) return {};
  const double floor = max_mag * std::pow(10.0, cfg.peak_floor_db / 20.0);

  std::vector<std::size_t> candidates;
  for (std::size_t k = 1; k + 1 < mag.size(); ++k) {
    if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && mag[k] >= floor) {
      candidates.push_back(k);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  if (candidates.size() > cfg.max_peaks) candidates.resize(cfg.max_peaks);

  const double bin_hz = sample_rate / static_cast<double>(n_fft);
  const double amp_scale = 2.0 / window_sum;
  std::vector<SpectralPeak> peaks;
  for (std::size_t k : candidates) {
    // Parabolic refinement on the dB magnitude.
    const double a = 20.0 * std::log10(std::max(mag[k - 1], 1e-300));
    const double b = 20.0 * std::log10(mag[k]);
    const double c = 20.0 * std::log10(std::max(mag[k + 1], 1e-300));
    const double denom = a - 2.0 * b + c;
    const double delta = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    const double peak_db = b - 0.25 * (a - c) * delta;
    peaks.push_back({(static_cast<double>(k) + delta) * bin_hz,
                     std::pow(10.0, peak_db / 20.0) * amp_scale});
  }
  return peaks;
}

double pair_roughness(const SpectralPeak& a, const SpectralPeak& b,
                      const RoughnessConfig& cfg) {
  const double a_min = std::min(a.amplitude, b.amplitude);
  const double a_max = std::max(a.amplitude, b.amplitude);
  if (a_max <= 0.0) return 0.0;
  const double f_min = std::min(a.frequency_hz, b.frequency_hz);
  const double df = std::abs(a.frequency_hz - b.frequency_hz);
  const double x = std::pow(a_min * a_max, cfg.amplitude_exponent);
  const double y = std::pow(2.0 * a_min / (a_min + a_max), cfg.fluctuation_exponent);
  const double s = cfg.s_num / (cfg.s1 * f_min + cfg.s2);
  const double z = std::exp(-cfg.b1 * s * df) - std::exp(-cfg.b2 * s * df);
  return x * 0.5 * y * z;
}

double frame_roughness(std::span<const double> frame, double sample_rate,
                       const PsychoConfig& cfg) {
  check_frame(frame, kMinRoughnessFrame, "frame_roughness");
  const auto peaks = spectral_peaks(frame, sample_rate, cfg.roughness);
  double total = 0.0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    for (std::size_t j = i + 1; j < peaks.size(); ++j) {
      total += pair_roughness(peaks[i], peaks[j], cfg.roughness);
    }
  }
  return total;
}

PsychoFrame analyze_frame(std::span<const double> frame, double sample_rate,
                          const PsychoConfig& cfg) {
  PsychoFrame out;
  out.specific_loudness = specific_loudness_bark(frame, sample_rate, cfg);
  for (double v : out.specific_loudness) out.la += v;
  out.ra = frame.size() >= kMinRoughnessFrame
               ? frame_roughness(frame, sample_rate, cfg)
               : 0.0;
  return out;
}

}  // namespace sonovib::psycho
