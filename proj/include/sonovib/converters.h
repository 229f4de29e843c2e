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

#ifndef SONOVIB_CONVERTERS_H_
#define SONOVIB_CONVERTERS_H_

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "sonovib/audio_io.h"
#include "sonovib/psychoacoustics.h"

namespace sonovib {

// Perception-level mapping: loudness La and roughness Ra per frame drive a
// two-carrier vibration.
//   Iv = max(0, iv_offset + iv_gain * log(1 + La))
//   Rv = clamp(rv_offset + rv_gain * Ra^rv_exponent, 0, 1)
//   A1 = Iv * (1 - mix * Rv),  A2 = Iv * mix * Rv
// The defaults are placeholders; fitted game-sound coefficients can
// be dropped in through the config file.
struct PlmConfig {
  std::size_t frame_size = 4096;
  double carrier1_hz = 175.0;
  double carrier2_hz = 210.0;
  double iv_offset = 0.0;
  double iv_gain = 1.0;
  double rv_offset = 0.0;
  double rv_gain = 1.0;
  double rv_exponent = 0.5;
  double mix = 0.5;
};

struct FshiftConfig {
  std::vector<double> shifts = {-12.0, -24.0};
  double hp_cutoff_hz = 10.0;
  int hp_order = 2;
  double bp_center_hz = 250.0;
  double bp_q = 1.0;
  int bp_order = 4;
};

// Pitch matching. Frequency per window is
//   intercept + sum_b weights[b] * p[b],  p = specific loudness / total,
// clamped to [f_min, f_max]. Default weights place band b at
// f_min + (f_max - f_min) * (b + 0.5) / 24, i.e. a linear map of the
// loudness-weighted Bark centroid; they stand in for a fitted
// perceptual regression.
std::array<double, psycho::kBarkBands> centroid_weights(double f_min,
                                                        double f_max);

struct PitchConfig {
  double window_ms = 10.0;
  double overlap = 0.5;
  double f_min = 50.0;
  double f_max = 400.0;
  std::array<double, psycho::kBarkBands> weights = centroid_weights(50.0, 400.0);
  double intercept = 0.0;
};

// HapticGen: f = f_center - f_dev + 2 * f_dev * r, amplitude = r, where r is
// window RMS over the clip's loudest window RMS.
struct HapticgenConfig {
  double window_ms = 10.0;
  double f_center = 200.0;
  double f_dev = 50.0;
};

struct ConverterConfig {
  PlmConfig plm;
  FshiftConfig fshift;
  PitchConfig pitch;
  HapticgenConfig hapticgen;
  psycho::PsychoConfig psycho = psycho::PsychoConfig::defaults();
  int output_rate = kVibrationRate;
  double target_segment_rms = kDefaultTargetRms;
  // Peak-normalise the clip before analysis.
  bool peak_normalize_input = true;

  // Throws ValidationError when an invariant is broken.
  void validate() const;
};

// Reads a JSON config file over the defaults. Keys present override the
// corresponding field; unknown keys are rejected.
ConverterConfig load_converter_config(const std::filesystem::path& path);

enum class NormalizationStrategy { kSegmentMax, kGlobal };

// Resamples raw to the output rate, scales so either the loudest segment's
// RMS (segment_max) or the whole-signal RMS (global) equals target_rms, then
// clamps to [-1, 1]. segment_samples counts output-rate samples.
VibrationSignal normalize_vibration(std::span<const double> raw, int raw_rate,
                                    NormalizationStrategy strategy,
                                    std::size_t segment_samples,
                                    double target_rms, int output_rate,
                                    Algorithm tag);

// Per-frame perception-level features.
struct PlmFrame {
  double la = 0.0;
  double ra = 0.0;
  double iv = 0.0;
  double rv = 0.0;
};
std::vector<PlmFrame> plm_frames(const AudioClip& clip,
                                 const ConverterConfig& cfg);

// Per-window frequency and amplitude for the oscillator-driven converters,
// sampled at window centres (in input samples).
struct ControlTrack {
  std::vector<double> positions;
  std::vector<double> frequency_hz;
  std::vector<double> amplitude;
};
ControlTrack pitch_track(const AudioClip& clip, const ConverterConfig& cfg);
ControlTrack hapticgen_track(const AudioClip& clip, const ConverterConfig& cfg);

// Waveforms at the output rate before normalisation.
std::vector<double> plm_raw(const AudioClip& clip, const ConverterConfig& cfg);
std::vector<double> fshift_raw(const AudioClip& clip,
                               const ConverterConfig& cfg);
std::vector<double> pitch_raw(const AudioClip& clip, const ConverterConfig& cfg);
std::vector<double> hapticgen_raw(const AudioClip& clip,
                                  const ConverterConfig& cfg);

VibrationSignal convert_plm(const AudioClip& clip, const ConverterConfig& cfg);
VibrationSignal convert_fshift(const AudioClip& clip,
                               const ConverterConfig& cfg);
VibrationSignal convert_pitch(const AudioClip& clip,
                              const ConverterConfig& cfg);
VibrationSignal convert_hapticgen(const AudioClip& clip,
                                  const ConverterConfig& cfg);

VibrationSignal convert(const AudioClip& clip, Algorithm algo,
                        const ConverterConfig& cfg);

}  // namespace sonovib

#endif  // SONOVIB_CONVERTERS_H_
