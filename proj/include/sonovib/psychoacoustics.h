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

#ifndef SONOVIB_PSYCHOACOUSTICS_H_
#define SONOVIB_PSYCHOACOUSTICS_H_

#include <array>
#include <filesystem>
#include <span>
#include <vector>

namespace sonovib::psycho {

inline constexpr std::size_t kBarkBands = 24;
inline constexpr std::size_t kMinLoudnessFrame = 256;
inline constexpr std::size_t kMinRoughnessFrame = 1024;

using BarkVector = std::array<double, kBarkBands>;

// Loudness model: band intensities from the power spectrum, weighted by an
// equal-loudness contour, compressed with a power law and summed to sones.
// A 1 kHz tone at reference_spl dB SPL yields 1 sone.
struct LoudnessConfig {
  // Equal-loudness contour (dB SPL needed for equal loudness at each
  // frequency). Default: the 40-phon ISO 226:2003 contour.
  std::vector<double> contour_hz;
  std::vector<double> contour_spl;
  // dB SPL assigned to a full-scale sine.
  double full_scale_spl = 100.0;
  double reference_spl = 40.0;
  double exponent = 0.23;
};

// Pairwise roughness over spectral peaks. Each pair contributes
//   (a_min * a_max)^amp_exp * 0.5 * (2 a_min / (a_min + a_max))^fluct_exp
//   * (exp(-b1 * s * df) - exp(-b2 * s * df)),  s = s_num / (s1 * f_min + s2).
struct RoughnessConfig {
  double amplitude_exponent = 0.1;
  double fluctuation_exponent = 3.11;
  double b1 = 3.5;
  double b2 = 5.75;
  double s_num = 0.24;
  double s1 = 0.0207;
  double s2 = 18.96;
  std::size_t max_peaks = 10;
  double peak_floor_db = -40.0;
};

struct PsychoConfig {
  LoudnessConfig loudness;
  RoughnessConfig roughness;

  static PsychoConfig defaults();
};

// Reads a JSON file; keys absent from the file keep their defaults.
PsychoConfig load_psycho_config(const std::filesystem::path& path);

struct PsychoFrame {
  double la = 0.0;  // loudness, sones
  double ra = 0.0;  // roughness
  BarkVector specific_loudness{};
};

// Traunmueller-Zwicker analytic critical-band rate.
double hz_to_bark(double hz);
// Band index in [0, 23] for a frequency; everything above Bark 23 falls in
// the top band.
std::size_t bark_band_of(double hz);

// Windowed power per Bark band, normalised so a sine of amplitude A sums to
// A^2 / 2.
BarkVector bark_band_energies(std::span<const double> frame,
                              double sample_rate);

BarkVector specific_loudness_bark(std::span<const double> frame,
                                  double sample_rate,
                                  const PsychoConfig& cfg = PsychoConfig::defaults());

double frame_loudness(std::span<const double> frame, double sample_rate,
                      const PsychoConfig& cfg = PsychoConfig::defaults());

struct SpectralPeak {
  double frequency_hz = 0.0;
  double amplitude = 0.0;
};

// Up to max_peaks largest local maxima of the Blackman-Harris magnitude
// spectrum lying within peak_floor_db of the frame maximum.
std::vector<SpectralPeak> spectral_peaks(std::span<const double> frame,
                                         double sample_rate,
                                         const RoughnessConfig& cfg);

double pair_roughness(const SpectralPeak& a, const SpectralPeak& b,
                      const RoughnessConfig& cfg);

double frame_roughness(std::span<const double> frame, double sample_rate,
                       const PsychoConfig& cfg = PsychoConfig::defaults());

PsychoFrame analyze_frame(std::span<const double> frame, double sample_rate,
                          const PsychoConfig& cfg = PsychoConfig::defaults());

}  // namespace sonovib::psycho

#endif  // SONOVIB_PSYCHOACOUSTICS_H_
