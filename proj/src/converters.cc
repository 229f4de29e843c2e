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

#include "sonovib/converters.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sonovib/dsp.h"
#include "sonovib/error.h"

namespace sonovib {
namespace {

std::size_t samples_for_ms(double ms, double rate) {
  return static_cast<std::size_t>(std::llround(ms * rate / 1000.0));
}

std::size_t output_length(const AudioClip& clip, int output_rate) {
  return static_cast<std::size_t>(std::llround(
      static_cast<double>(clip.samples.size()) * output_rate / clip.sample_rate));
}

void require_clip(const AudioClip& clip, std::size_t min_samples,
                  const char* who) {
  if (clip.sample_rate <= 0) {
    throw ValidationError(std::string(who) + ": clip has no sample rate");
  }
  if (clip.samples.empty() || clip.samples.size() < min_samples) {
    throw ValidationError(std::string(who) + ": clip of " +
                          std::to_string(clip.samples.size()) +
                          " samples is shorter than one analysis frame (" +
                          std::to_string(min_samples) + ")");
  }
}

// Knot positions expressed in output-rate samples.
std::vector<double> to_output_positions(std::span<const double> input_positions,
                                        double input_rate, double output_rate) {
  std::vector<double> out(input_positions.size());
  const double scale = output_rate / input_rate;
  std::transform(input_positions.begin(), input_positions.end(), out.begin(),
                 [scale](double p) { return p * scale; });
  return out;
}

std::vector<double> synthesize_track(const ControlTrack& track,
                                     const AudioClip& clip, int output_rate) {
  const std::size_t n = output_length(clip, output_rate);
  const auto pos =
      to_output_positions(track.positions, clip.sample_rate, output_rate);
  const auto freq = dsp::interpolate_track(pos, track.frequency_hz, n);
  const auto amp = dsp::interpolate_track(pos, track.amplitude, n);
  return dsp::nco_synthesize(freq, amp, output_rate);
}

AudioClip prepare_input(const AudioClip& clip, const ConverterConfig& cfg) {
  cfg.validate();
  if (clip.samples.empty()) throw ValidationError("empty clip");
  return cfg.peak_normalize_input ? peak_normalize(clip) : clip;
}

std::size_t segment_at_output(std::size_t input_samples, double input_rate,
                              int output_rate) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(
             static_cast<double>(input_samples) * output_rate / input_rate)));
}

}  // namespace

std::array<double, psycho::kBarkBands> centroid_weights(double f_min,
                                                        double f_max) {
  std::array<double, psycho::kBarkBands> w{};
  for (std::size_t b = 0; b < w.size(); ++b) {
    w[b] = f_min + (f_max - f_min) * (static_cast<double>(b) + 0.5) /
                       static_cast<double>(w.size());
  }
  return w;
}

void ConverterConfig::validate() const {
  const double nyquist = output_rate / 2.0;
  if (output_rate <= 0) throw ValidationError("output_rate must be positive");
  if (!(target_segment_rms > 0.0)) {
    throw ValidationError("target_segment_rms must be positive");
  }
  if (plm.frame_size == 0) throw ValidationError("plm.frame_size must be positive");
  if (!(plm.carrier1_hz > 0 && plm.carrier1_hz < nyquist && plm.carrier2_hz > 0 &&
        plm.carrier2_hz < nyquist)) {
    throw ValidationError("plm carriers must lie in (0, output Nyquist)");
  }
  if (!(pitch.f_min > 0 && pitch.f_min < pitch.f_max && pitch.f_max < nyquist)) {
    throw ValidationError("pitch requires 0 < f_min < f_max < output Nyquist");
  }
  if (!(pitch.window_ms > 0) || !(pitch.overlap >= 0 && pitch.overlap < 1)) {
    throw ValidationError("pitch window must be positive, overlap in [0, 1)");
  }
  const double lo = hapticgen.f_center - hapticgen.f_dev;
  const double hi = hapticgen.f_center + hapticgen.f_dev;
  if (!(hapticgen.f_dev >= 0 && lo > 0 && hi < nyquist)) {
    throw ValidationError("hapticgen f_center +/- f_dev must lie in (0, Nyquist)");
  }
  if (!(hapticgen.window_ms > 0)) {
    throw ValidationError("hapticgen window must be positive");
  }
  for (double s : fshift.shifts) {
    if (!(std::abs(s) <= 24.0)) throw ValidationError("fshift shifts must be within +/-24");
  }
}

VibrationSignal normalize_vibration(std::span<const double> raw, int raw_rate,
                                    NormalizationStrategy strategy,
                                    std::size_t segment_samples,
                                    double target_rms, int output_rate,
                                    Algorithm tag) {
  if (raw.empty()) throw ValidationError("normalize_vibration: empty input");
  if (!(target_rms > 0.0)) {
    throw ValidationError("normalize_vibration: target must be positive");
  }
  // Resample before scaling so the clamp is the last step.
  const auto x = resample(raw, raw_rate, output_rate);
  constexpr double kSilence = 1e-12;
  double reference = 0.0;
  if (strategy == NormalizationStrategy::kGlobal) {
    reference = rms(x);
  } else {
    const std::size_t seg = std::max<std::size_t>(1, segment_samples);
    for (std::size_t start = 0; start < x.size(); start += seg) {
      const std::size_t len = std::min(seg, x.size() - start);
      reference = std::max(reference, rms(std::span(x).subspan(start, len)));
    }
  }
  if (reference <= kSilence) {
    throw DegenerateSignalError("vibration has no energy to normalize");
  }
  const double gain = target_rms / reference;
  VibrationSignal out;
  out.sample_rate = output_rate;
  out.algorithm = tag;
  out.samples.resize(x.size());
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i] * gain;
    if (v > 1.0 || v < -1.0) ++clipped;
    out.samples[i] = std::clamp(v, -1.0, 1.0);
  }
  out.clipped_fraction =
      static_cast<double>(clipped) / static_cast<double>(x.size());
  return out;
}

// --- Perception-level mapping ----------------------------------------------

std::vector<PlmFrame> plm_frames(const AudioClip& clip,
                                 const ConverterConfig& cfg) {
  const std::size_t frame = cfg.plm.frame_size;
  require_clip(clip, frame, "plm");
  const std::size_t count = (clip.samples.size() + frame - 1) / frame;
  std::vector<PlmFrame> frames(count);
  std::vector<double> buf(frame);
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t start = f * frame;
    const std::size_t len = std::min(frame, clip.samples.size() - start);
    std::fill(buf.begin(), buf.end(), 0.0);
    std::copy_n(clip.samples.begin() + static_cast<std::ptrdiff_t>(start), len,
                buf.begin());
    PlmFrame& out = frames[f];
    out.la = psycho::frame_loudness(buf, clip.sample_rate, cfg.psycho);
    out.ra = frame >= psycho::kMinRoughnessFrame
                 ? psycho::frame_roughness(buf, clip.sample_rate, cfg.psycho)
                 : 0.0;
    out.iv = std::max(0.0, cfg.plm.iv_offset + cfg.plm.iv_gain * std::log1p(out.la));
    const double rough =
        out.ra > 0.0 ? std::pow(out.ra, cfg.plm.rv_exponent) : 0.0;
    out.rv = std::clamp(cfg.plm.rv_offset + cfg.plm.rv_gain * rough, 0.0, 1.0);
  }
  return frames;
}

std::vector<double> plm_raw(const AudioClip& clip, const ConverterConfig& cfg) {
  cfg.validate();
  const auto frames = plm_frames(clip, cfg);
  const double frame = static_cast<double>(cfg.plm.frame_size);
  std::vector<double> positions(frames.size());
  std::vector<double> a1(frames.size());
  std::vector<double> a2(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    positions[f] = (static_cast<double>(f) + 0.5) * frame;
    a1[f] = frames[f].iv * (1.0 - cfg.plm.mix * frames[f].rv);
    a2[f] = frames[f].iv * cfg.plm.mix * frames[f].rv;
  }
  const std::size_t n = output_length(clip, cfg.output_rate);
  const auto pos = to_output_positions(positions, clip.sample_rate, cfg.output_rate);
  const auto amp1 = dsp::interpolate_track(pos, a1, n);
  const auto amp2 = dsp::interpolate_track(pos, a2, n);
  const auto c1 = dsp::nco_synthesize(std::vector<double>(n, cfg.plm.carrier1_hz),
                                      amp1, cfg.output_rate);
  const auto c2 = dsp::nco_synthesize(std::vector<double>(n, cfg.plm.carrier2_hz),
                                      amp2, cfg.output_rate);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = c1[i] + c2[i];
  return out;
}

VibrationSignal convert_plm(const AudioClip& clip, const ConverterConfig& cfg) {
  const AudioClip in = prepare_input(clip, cfg);
  const auto raw = plm_raw(in, cfg);
  return normalize_vibration(
      raw, cfg.output_rate, NormalizationStrategy::kSegmentMax,
      segment_at_output(cfg.plm.frame_size, in.sample_rate, cfg.output_rate),
      cfg.target_segment_rms, cfg.output_rate, Algorithm::kPlm);
}

// --- Frequency shifting ----------------------------------------------------

std::vector<double> fshift_raw(const AudioClip& clip,
                               const ConverterConfig& cfg) {
  cfg.validate();
  require_clip(clip, 1, "fshift");
  std::vector<double> sum = clip.samples;
  for (double shift : cfg.fshift.shifts) {
    const auto shifted = dsp::pitch_shift(clip.samples, shift);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += shifted[i];
  }
  const double fs = clip.sample_rate;
  dsp::FilterSpec hp{dsp::FilterKind::kHighpass, cfg.fshift.hp_cutoff_hz, 1.0,
                     cfg.fshift.hp_order};
  dsp::FilterSpec bp{dsp::FilterKind::kBandpass, cfg.fshift.bp_center_hz,
                     cfg.fshift.bp_q, cfg.fshift.bp_order};
  const auto filtered =
      dsp::butterworth_filter(dsp::butterworth_filter(sum, hp, fs), bp, fs);
  return resample(filtered, clip.sample_rate, cfg.output_rate);
}

VibrationSignal convert_fshift(const AudioClip& clip,
                               const ConverterConfig& cfg) {
  const AudioClip in = prepare_input(clip, cfg);
  const auto raw = fshift_raw(in, cfg);
  return normalize_vibration(raw, cfg.output_rate, NormalizationStrategy::kGlobal,
                             raw.size(), cfg.target_segment_rms,
                             cfg.output_rate, Algorithm::kFshift);
}

// --- Pitch matching --------------------------------------------------------

ControlTrack pitch_track(const AudioClip& clip, const ConverterConfig& cfg) {
  const std::size_t win = samples_for_ms(cfg.pitch.window_ms, clip.sample_rate);
  if (win < psycho::kMinLoudnessFrame) {
    throw ValidationError(
        "pitch: analysis window of " + std::to_string(win) +
        " samples is below the loudness model minimum of " +
        std::to_string(psycho::kMinLoudnessFrame) +
        "; use a higher input sample rate or a longer window");
  }
  require_clip(clip, win, "pitch");
  const std::size_t hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::llround(static_cast<double>(win) * (1.0 - cfg.pitch.overlap))));
  const std::size_t count = (clip.samples.size() - win) / hop + 1;

  ControlTrack track;
  track.positions.resize(count);
  track.frequency_hz.assign(count, 0.0);
  track.amplitude.resize(count);
  std::vector<bool> voiced(count, false);
  const std::span<const double> samples(clip.samples);
  for (std::size_t w = 0; w < count; ++w) {
    const auto frame = samples.subspan(w * hop, win);
    const auto specific =
        psycho::specific_loudness_bark(frame, clip.sample_rate, cfg.psycho);
    double total = 0.0;
    for (double v : specific) total += v;
    track.positions[w] = static_cast<double>(w * hop) + 0.5 * static_cast<double>(win);
    track.amplitude[w] = total;
    if (total > 0.0) {
      double f = cfg.pitch.intercept;
      for (std::size_t b = 0; b < specific.size(); ++b) {
        f += cfg.pitch.weights[b] * specific[b] / total;
      }
      track.frequency_hz[w] = std::clamp(f, cfg.pitch.f_min, cfg.pitch.f_max);
      voiced[w] = true;
    }
  }
  // Silent windows carry the neighbouring frequency; their amplitude is 0.
  double last = cfg.pitch.f_min;
  const auto first_voiced = std::find(voiced.begin(), voiced.end(), true);
  if (first_voiced != voiced.end()) {
    last = track.frequency_hz[static_cast<std::size_t>(first_voiced - voiced.begin())];
  }
  for (std::size_t w = 0; w < count; ++w) {
    if (voiced[w]) {
      last = track.frequency_hz[w];
    } else {
      track.frequency_hz[w] = last;
    }
  }
  return track;
}

std::vector<double> pitch_raw(const AudioClip& clip, const ConverterConfig& cfg) {
  cfg.validate();
  return synthesize_track(pitch_track(clip, cfg), clip, cfg.output_rate);
}

VibrationSignal convert_pitch(const AudioClip& clip, const ConverterConfig& cfg) {
  const AudioClip in = prepare_input(clip, cfg);
  const auto raw = pitch_raw(in, cfg);
  return normalize_vibration(raw, cfg.output_rate,
                             NormalizationStrategy::kSegmentMax,
                             samples_for_ms(cfg.pitch.window_ms, cfg.output_rate),
                             cfg.target_segment_rms, cfg.output_rate,
                             Algorithm::kPitch);
}

// --- HapticGen -------------------------------------------------------------

ControlTrack hapticgen_track(const AudioClip& clip, const ConverterConfig& cfg) {
  const std::size_t win = std::max<std::size_t>(
      1, samples_for_ms(cfg.hapticgen.window_ms, clip.sample_rate));
  require_clip(clip, win, "hapticgen");
  const auto energies = dsp::frame_rms(clip.samples, clip.sample_rate,
                                       cfg.hapticgen.window_ms,
                                       cfg.hapticgen.window_ms);
  const double loudest = *std::max_element(energies.begin(), energies.end());
  ControlTrack track;
  const double lo = cfg.hapticgen.f_center - cfg.hapticgen.f_dev;
  const double span = 2.0 * cfg.hapticgen.f_dev;
  for (std::size_t w = 0; w < energies.size(); ++w) {
    const double r = loudest > 0.0 ? energies[w] / loudest : 0.0;
    track.positions.push_back(static_cast<double>(w * win) + 0.5 * static_cast<double>(win));
    track.frequency_hz.push_back(lo + span * r);
    track.amplitude.push_back(r);
  }
  return track;
}

std::vector<double> hapticgen_raw(const AudioClip& clip,
                                  const ConverterConfig& cfg) {
  cfg.validate();
  return synthesize_track(hapticgen_track(clip, cfg), clip, cfg.output_rate);
}

VibrationSignal convert_hapticgen(const AudioClip& clip,
                                  const ConverterConfig& cfg) {
  const AudioClip in = prepare_input(clip, cfg);
  const auto raw = hapticgen_raw(in, cfg);
  return normalize_vibration(
      raw, cfg.output_rate, NormalizationStrategy::kSegmentMax,
      samples_for_ms(cfg.hapticgen.window_ms, cfg.output_rate),
      cfg.target_segment_rms, cfg.output_rate, Algorithm::kHapticgen);
}

VibrationSignal convert(const AudioClip& clip, Algorithm algo,
                        const ConverterConfig& cfg) {
  switch (algo) {
    case Algorithm::kPlm:
      return convert_plm(clip, cfg);
    case Algorithm::kFshift:
      return convert_fshift(clip, cfg);
    case Algorithm::kPitch:
      return convert_pitch(clip, cfg);
    case Algorithm::kHapticgen:
      return convert_hapticgen(clip, cfg);
    case Algorithm::kBlended:
      break;
  }
  throw ValidationError("convert: '" + std::string(to_string(algo)) +
                        "' is not a conversion algorithm");
}

}  // namespace sonovib
