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

#ifndef SONOVIB_DSP_H_
#define SONOVIB_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sonovib/audio_io.h"

namespace sonovib::dsp {

// --- FFT --------------------------------------------------------------------

// One-sided spectrum (n/2 + 1 bins) of frame zero-padded or truncated to n.
std::vector<std::complex<double>> rfft(std::span<const double> frame,
                                       std::size_t n);
// Inverse of rfft; spectrum must hold n/2 + 1 bins. Output is scaled by 1/n.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum,
                          std::size_t n);

std::size_t next_pow2(std::size_t n);
bool is_pow2(std::size_t n);

// Periodic Hann window (the DFT-even form used for STFT analysis).
std::vector<double> hann_window(std::size_t n);
// Four-term Blackman-Harris, periodic.
std::vector<double> blackman_harris_window(std::size_t n);

// --- STFT -------------------------------------------------------------------

struct Spectrogram {
  std::vector<double> magnitudes;  // frame-major, frames x bins
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::size_t fft_size = 0;
  std::size_t hop = 0;
  double sample_rate = 0.0;

  double at(std::size_t frame, std::size_t bin) const {
    return magnitudes[frame * bins + bin];
  }
  std::span<const double> frame(std::size_t f) const {
    return {magnitudes.data() + f * bins, bins};
  }
};

// Hann-windowed magnitude STFT without centre padding; frame count is
// floor((len - fft_size) / hop) + 1.
Spectrogram stft(std::span<const double> signal, std::size_t fft_size,
                 std::size_t hop, double sample_rate = 0.0);

// Triangular filters on the HTK mel scale, num_bands x (fft_size/2 + 1),
// row-major.
std::vector<double> mel_filterbank(std::size_t num_bands, std::size_t fft_size,
                                   double sample_rate, double f_min,
                                   double f_max);

// --- Filtering --------------------------------------------------------------

enum class FilterKind { kHighpass, kBandpass };

struct FilterSpec {
  FilterKind kind = FilterKind::kBandpass;
  double center_or_cutoff_hz = 250.0;
  // Bandpass only: centre / (-3 dB bandwidth). Highpass responses are
  // maximally flat and ignore it.
  double q = 1.0;
  // Total filter order, 2 or 4.
  int order = 4;
};

// Second-order section, a0 normalised to 1.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;
};

// Butterworth design by bilinear transform of the analog prototype with
// pre-warped edges.
std::vector<Biquad> design_butterworth(const FilterSpec& spec,
                                       double sample_rate);

// Magnitude of the cascade at frequency_hz.
double cascade_gain(std::span<const Biquad> sections, double frequency_hz,
                    double sample_rate);

// Causal cascade (transposed direct form II). State is initialised to the
// steady state for a constant input equal to the first sample, so a DC
// offset produces no start-up transient.
std::vector<double> sosfilt(std::span<const Biquad> sections,
                            std::span<const double> signal);

std::vector<double> butterworth_filter(std::span<const double> signal,
                                       const FilterSpec& spec,
                                       double sample_rate);

// --- Pitch shifting ---------------------------------------------------------

struct PhaseVocoderParams {
  std::size_t fft_size = 2048;
  std::size_t hop = 512;
};

// Phase-vocoder time stretch: output length round(len / rate).
std::vector<double> time_stretch(std::span<const double> signal, double rate,
                                 const PhaseVocoderParams& params = {});

// Time-stretch by 2^(-semitones/12), then resample back to the original
// length. |semitones| <= 24.
std::vector<double> pitch_shift(std::span<const double> signal,
                                double semitones,
                                const PhaseVocoderParams& params = {});
AudioClip pitch_shift(const AudioClip& clip, double semitones);

// --- Synthesis and analysis -------------------------------------------------

// Phase-accumulating sine oscillator:
//   out[n] = amp[n] * sin(phase[n]),
//   phase[n+1] = phase[n] + 2*pi*freq[n]/sample_rate, phase[0] = 0.
std::vector<double> nco_synthesize(std::span<const double> freq_track,
                                   std::span<const double> amp_track,
                                   double sample_rate);

// RMS of consecutive windows; count is floor((len - win) / hop) + 1.
std::vector<double> frame_rms(std::span<const double> signal,
                              double sample_rate, double window_ms,
                              double hop_ms);

// Frequencies from intervals between successive upward zero crossings,
// with crossing instants linearly interpolated.
std::vector<double> instantaneous_frequency(std::span<const double> signal,
                                            double sample_rate);

// Piecewise-linear interpolation of (position, value) knots onto
// [0, length). Values are held flat outside the knot range.
std::vector<double> interpolate_track(std::span<const double> positions,
                                      std::span<const double> values,
                                      std::size_t length);

}  // namespace sonovib::dsp

#endif  // SONOVIB_DSP_H_
