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

#ifndef SONOVIB_AUDIO_IO_H_
#define SONOVIB_AUDIO_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sonovib {

// Haptic output rate shared by every converter.
inline constexpr int kVibrationRate = 8000;

struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;
  std::string source_id;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

enum class Algorithm { kPlm, kFshift, kPitch, kHapticgen, kBlended };

// The four rated conversion algorithms, in canonical order.
inline constexpr Algorithm kRatedAlgorithms[] = {
    Algorithm::kPlm, Algorithm::kFshift, Algorithm::kPitch,
    Algorithm::kHapticgen};

std::string_view to_string(Algorithm algo);
// Throws ValidationError on an unknown tag.
Algorithm parse_algorithm(std::string_view tag);

struct VibrationSignal {
  std::vector<double> samples;
  int sample_rate = kVibrationRate;
  Algorithm algorithm = Algorithm::kBlended;
  double clipped_fraction = 0.0;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads a 16-bit PCM RIFF/WAVE file. Multi-channel data is mixed down by
// arithmetic mean; samples are scaled by 1/32768.
AudioClip load_wav(const std::filesystem::path& path);

// Writes mono 16-bit PCM. Values are clamped and rounded, 1.0 -> 32767.
void save_wav(std::span<const double> samples, int sample_rate,
              const std::filesystem::path& path);
void save_wav(const AudioClip& clip, const std::filesystem::path& path);
void save_wav(const VibrationSignal& signal, const std::filesystem::path& path);

// Band-limited resampling. Output length is round(n * out_rate / in_rate).
std::vector<double> resample(std::span<const double> samples, int in_rate,
                             int out_rate);
AudioClip resample(const AudioClip& clip, int target_rate);

// Resamples by an arbitrary ratio (output rate / input rate) to exactly
// out_length samples. Used where the rate ratio is irrational.
std::vector<double> resample_ratio(std::span<const double> samples,
                                   double ratio, std::size_t out_length);

// Divides by the absolute peak so max |x| == 1.
AudioClip peak_normalize(const AudioClip& clip);
std::vector<double> peak_normalize(std::span<const double> samples);

struct RmsNormalized {
  std::vector<double> samples;
  double gain = 1.0;
  double clipped_fraction = 0.0;
};

inline constexpr double kDefaultTargetRms = 0.15;
// Fraction of clipped samples above which callers should warn.
inline constexpr double kClipWarnFraction = 0.001;

// Scales to target_rms, then clamps to [-1, 1] and records the fraction of
// samples that hit the clamp.
RmsNormalized rms_normalize(std::span<const double> samples,
                            double target_rms = kDefaultTargetRms);

double rms(std::span<const double> samples);
double peak(std::span<const double> samples);

}  // namespace sonovib

#endif  // SONOVIB_AUDIO_IO_H_
