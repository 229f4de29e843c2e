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

#include "sonovib/dsp.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sonovib/error.h"

namespace sonovib::dsp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

double wrap_phase(double p) {
  return p - kTwoPi * std::round(p / kTwoPi);
}

// Sample at index i of x extended by whole-sample reflection.
double reflect_at(std::span<const double> x, long long i) {
  const auto n = static_cast<long long>(x.size());
  if (n == 1) return x[0];
  const long long period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  if (i >= n) i = period - i;
  return x[static_cast<std::size_t>(i)];
}

Complex bilinear(Complex s, double fs) {
  return (2.0 * fs + s) / (2.0 * fs - s);
}

// Groups digital poles into conjugate pairs (or pairs of real poles) and
// builds denominators. Numerators are filled by the caller.
std::vector<Biquad> pole_sections(std::vector<Complex> poles) {
  std::vector<Complex> upper;
  std::vector<double> real;
  for (const Complex& p : poles) {
    if (std::abs(p.imag()) > 1e-12) {
      if (p.imag() > 0) upper.push_back(p);
    } else {
      real.push_back(p.real());
    }
  }
  std::sort(real.begin(), real.end());
  std::vector<Biquad> sections;
  for (const Complex& p : upper) {
    Biquad b;
    b.a1 = -2.0 * p.real();
    b.a2 = std::norm(p);
    sections.push_back(b);
  }
  for (std::size_t i = 0; i + 1 < real.size(); i += 2) {
    Biquad b;
    b.a1 = -(real[i] + real[i + 1]);
    b.a2 = real[i] * real[i + 1];
    sections.push_back(b);
  }
  return sections;
}

std::vector<Complex> butterworth_prototype(int order) {
  std::vector<Complex> poles;
  for (int k = 0; k < order; ++k) {
    const double theta = kPi * (2.0 * k + order + 1) / (2.0 * order);
    poles.emplace_back(std::cos(theta), std::sin(theta));
  }
  return poles;
}

Complex section_response(const Biquad& s, Complex z_inv) {
  const Complex num = s.b0 + z_inv * (s.b1 + z_inv * s.b2);
  const Complex den = 1.0 + z_inv * (s.a1 + z_inv * s.a2);
  return num / den;
}

void normalize_gain(std::vector<Biquad>& sections, double frequency_hz,
                    double sample_rate) {
  const double g = cascade_gain(sections, frequency_hz, sample_rate);
  sections.front().b0 /= g;
  sections.front().b1 /= g;
  sections.front().b2 /= g;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

std::vector<double> blackman_harris_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    w[i] = 0.35875 - 0.48829 * std::cos(x) + 0.14128 * std::cos(2 * x) -
           0.01168 * std::cos(3 * x);
  }
  return w;
}

Spectrogram stft(std::span<const double> signal, std::size_t fft_size,
                 std::size_t hop, double sample_rate) {
  if (!is_pow2(fft_size)) {
    throw ValidationError("stft: fft_size must be a power of two");
  }
  if (hop == 0 || hop > fft_size) {
    throw ValidationError("stft: hop must be in (0, fft_size]");
  }
  if (signal.size() < fft_size) {
    throw ValidationError("stft: signal shorter than fft_size (" +
                          std::to_string(signal.size()) + " < " +
                          std::to_string(fft_size) + ")");
  }
  Spectrogram spec;
  spec.fft_size = fft_size;
  spec.hop = hop;
  spec.sample_rate = sample_rate;
  spec.bins = fft_size / 2 + 1;
  spec.frames = (signal.size() - fft_size) / hop + 1;
  spec.magnitudes.resize(spec.frames * spec.bins);
  const auto window = hann_window(fft_size);
  std::vector<double> frame(fft_size);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    const double* src = signal.data() + f * hop;
    for (std::size_t i = 0; i < fft_size; ++i) frame[i] = src[i] * window[i];
    const auto bins = rfft(frame, fft_size);
    for (std::size_t k = 0; k < spec.bins; ++k) {
      spec.magnitudes[f * spec.bins + k] = std::abs(bins[k]);
    }
  }
  return spec;
}

std::vector<double> mel_filterbank(std::size_t num_bands, std::size_t fft_size,
                                   double sample_rate, double f_min,
                                   double f_max) {
  const auto hz_to_mel = [](double f) {
    return 2595.0 * std::log10(1.0 + f / 700.0);
  };
  const auto mel_to_hz = [](double m) {
    return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
  };
  const std::size_t bins = fft_size / 2 + 1;
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(num_bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(num_bands + 1));
  }
  std::vector<double> fb(num_bands * bins, 0.0);
  for (std::size_t b = 0; b < num_bands; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate /
                       static_cast<double>(fft_size);
      double w = 0.0;
      if (f > lo && f <= mid) {
        w = (f - lo) / (mid - lo);
      } else if (f > mid && f < hi) {
        w = (hi - f) / (hi - mid);
      }
      fb[b * bins + k] = w;
    }
  }
  return fb;
}

std::vector<Biquad> design_butterworth(const FilterSpec& spec,
                                       double sample_rate) {
  if (spec.order != 2 && spec.order != 4) {
    throw ValidationError("filter order must be 2 or 4");
  }
  if (!(spec.q > 0.0)) throw ValidationError("filter Q must be positive");
  const double nyquist = sample_rate / 2.0;
  const double fc = spec.center_or_cutoff_hz;
  if (!(fc > 0.0) || fc >= nyquist) {
    throw ValidationError("filter frequency " + std::to_string(fc) +
                          " Hz must lie in (0, Nyquist = " +
                          std::to_string(nyquist) + " Hz)");
  }
  const double fs = sample_rate;
  const auto prewarp = [fs](double f) {
    return 2.0 * fs * std::tan(kPi * f / fs);
  };

  std::vector<Complex> poles;
  std::vector<Biquad> sections;
  if (spec.kind == FilterKind::kHighpass) {
    const double wc = prewarp(fc);
    for (const Complex& p : butterworth_prototype(spec.order)) {
      poles.push_back(bilinear(wc / p, fs));
    }
    sections = pole_sections(poles);
    for (Biquad& s : sections) {  // double zero at z = 1
      s.b0 = 1.0;
      s.b1 = -2.0;
      s.b2 = 1.0;
    }
    normalize_gain(sections, nyquist, fs);
  } else {
    const double root = std::sqrt(1.0 + 4.0 * spec.q * spec.q);
    const double f_lo = fc * (root - 1.0) / (2.0 * spec.q);
    const double f_hi = fc * (root + 1.0) / (2.0 * spec.q);
    if (f_hi >= nyquist) {
      throw ValidationError("band-pass upper edge " + std::to_string(f_hi) +
                            " Hz reaches Nyquist");
    }
    const double w_lo = prewarp(f_lo);
    const double w_hi = prewarp(f_hi);
    const double bw = w_hi - w_lo;
    const double w0_sq = w_lo * w_hi;
    for (const Complex& p : butterworth_prototype(spec.order / 2)) {
      const Complex pb = p * bw;
      const Complex disc = std::sqrt(pb * pb - 4.0 * w0_sq);
      poles.push_back(bilinear((pb + disc) / 2.0, fs));
      poles.push_back(bilinear((pb - disc) / 2.0, fs));
    }
    sections = pole_sections(poles);
    for (Biquad& s : sections) {  // zeros at z = 1 and z = -1
      s.b0 = 1.0;
      s.b1 = 0.0;
      s.b2 = -1.0;
    }
    const double centre_hz = fs / kPi * std::atan(std::sqrt(w0_sq) / (2.0 * fs));
    normalize_gain(sections, centre_hz, fs);
  }
  return sections;
}

double cascade_gain(std::span<const Biquad> sections, double frequency_hz,
                    double sample_rate) {
  const Complex z_inv = std::polar(1.0, -kTwoPi * frequency_hz / sample_rate);
  Complex h = 1.0;
  for (const Biquad& s : sections) h *= section_response(s, z_inv);
  return std::abs(h);
}

std::vector<double> sosfilt(std::span<const Biquad> sections,
                            std::span<const double> signal) {
  std::vector<double> y(signal.begin(), signal.end());
  if (y.empty()) return y;
  for (const Biquad& s : sections) {
    const double x0 = y.front();
    const double dc_gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double y0 = dc_gain * x0;
    double z2 = s.b2 * x0 - s.a2 * y0;
    double z1 = s.b1 * x0 - s.a1 * y0 + z2;
    for (double& v : y) {
      const double x = v;
      const double out = s.b0 * x + z1;
      z1 = s.b1 * x - s.a1 * out + z2;
      z2 = s.b2 * x - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> butterworth_filter(std::span<const double> signal,
                                       const FilterSpec& spec,
                                       double sample_rate) {
  const auto sections = design_butterworth(spec, sample_rate);
  return sosfilt(sections, signal);
}

std::vector<double> time_stretch(std::span<const double> signal, double rate,
                                 const PhaseVocoderParams& params) {
  if (signal.empty()) throw ValidationError("time_stretch: empty input");
  if (!(rate > 0.0)) throw ValidationError("time_stretch: rate must be positive");
  const std::size_t n_fft = params.fft_size;
  const std::size_t hop = params.hop;
  const std::size_t bins = n_fft / 2 + 1;
  const std::size_t pad = n_fft / 2;
  const auto window = hann_window(n_fft);

  const std::size_t out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(signal.size()) / rate));
  // Enough synthesis frames to cover the output with full window overlap.
  const std::size_t out_frames = (out_len + pad) / hop + 2;
  // Centred analysis frames over the signal extended by reflection, far
  // enough past the end that every synthesis step has both neighbours.
  const auto n_frames = static_cast<std::size_t>(
                            std::floor(static_cast<double>(out_frames - 1) * rate)) +
                        2;
  std::vector<std::vector<Complex>> frames(n_frames);
  std::vector<double> buf(n_fft);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const long long start = static_cast<long long>(f * hop) -
                            static_cast<long long>(pad);
    for (std::size_t i = 0; i < n_fft; ++i) {
      buf[i] = window[i] * reflect_at(signal, start + static_cast<long long>(i));
    }
    frames[f] = rfft(buf, n_fft);
  }

  std::vector<double> phase_advance(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    phase_advance[k] = kTwoPi * static_cast<double>(k * hop) /
                       static_cast<double>(n_fft);
  }

  std::vector<double> phase(bins);
  for (std::size_t k = 0; k < bins; ++k) phase[k] = std::arg(frames[0][k]);

  std::vector<double> acc(n_fft + hop * out_frames, 0.0);
  std::vector<double> norm(acc.size(), 0.0);
  std::vector<Complex> spec(bins);
  for (std::size_t t = 0; t < out_frames; ++t) {
    const double step = static_cast<double>(t) * rate;
    const auto left = std::min(static_cast<std::size_t>(step), n_frames - 2);
    const double alpha = step - static_cast<double>(left);
    const auto& a = frames[left];
    const auto& b = frames[left + 1];
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag = (1.0 - alpha) * std::abs(a[k]) + alpha * std::abs(b[k]);
      spec[k] = std::polar(mag, phase[k]);
      const double dphase =
          wrap_phase(std::arg(b[k]) - std::arg(a[k]) - phase_advance[k]);
      phase[k] += phase_advance[k] + dphase;
    }
    const auto frame = irfft(spec, n_fft);
    const std::size_t offset = t * hop;
    for (std::size_t i = 0; i < n_fft; ++i) {
      acc[offset + i] += frame[i] * window[i];
      norm[offset + i] += window[i] * window[i];
    }
  }

  std::vector<double> out(out_len, 0.0);
  for (std::size_t i = 0; i < out_len; ++i) {
    const std::size_t j = i + pad;
    if (j >= acc.size()) break;
    out[i] = norm[j] > 1e-10 ? acc[j] / norm[j] : acc[j];
  }
  return out;
}

std::vector<double> pitch_shift(std::span<const double> signal,
                                double semitones,
                                const PhaseVocoderParams& params) {
  if (signal.empty()) throw ValidationError("pitch_shift: empty input");
  if (!(std::abs(semitones) <= 24.0)) {
    throw ValidationError("pitch_shift: |semitones| must be <= 24");
  }
  if (semitones == 0.0) return {signal.begin(), signal.end()};
  const double rate = std::pow(2.0, -semitones / 12.0);
  const auto stretched = time_stretch(signal, rate, params);
  return resample_ratio(stretched, rate, signal.size());
}

AudioClip pitch_shift(const AudioClip& clip, double semitones) {
  AudioClip out = clip;
  out.samples = pitch_shift(clip.samples, semitones);
  return out;
}

std::vector<double> nco_synthesize(std::span<const double> freq_track,
                                   std::span<const double> amp_track,
                                   double sample_rate) {
  if (freq_track.size() != amp_track.size()) {
    throw ValidationError("nco_synthesize: frequency and amplitude tracks differ "
                          "in length");
  }
  const double nyquist = sample_rate / 2.0;
  std::vector<double> out(freq_track.size());
  double phase = 0.0;
  for (std::size_t n = 0; n < freq_track.size(); ++n) {
    const double f = freq_track[n];
    if (!(f > 0.0 && f < nyquist)) {
      throw ValidationError("nco_synthesize: frequency " + std::to_string(f) +
                            " Hz outside (0, Nyquist)");
    }
    if (!(amp_track[n] >= 0.0)) {
      throw ValidationError("nco_synthesize: negative amplitude");
    }
    out[n] = amp_track[n] * std::sin(phase);
    phase += kTwoPi * f / sample_rate;
    if (phase >= kTwoPi) phase -= kTwoPi;
  }
  return out;
}

std::vector<double> frame_rms(std::span<const double> signal,
                              double sample_rate, double window_ms,
                              double hop_ms) {
  if (!(window_ms > 0.0) || !(hop_ms > 0.0)) {
    throw ValidationError("frame_rms: window and hop must be positive");
  }
  const auto win = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(window_ms * sample_rate / 1000.0)));
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(hop_ms * sample_rate / 1000.0)));
  if (win > signal.size()) {
    throw ValidationError("frame_rms: window longer than signal");
  }
  const std::size_t count = (signal.size() - win) / hop + 1;
  std::vector<double> out(count);
  for (std::size_t f = 0; f < count; ++f) {
    out[f] = rms(signal.subspan(f * hop, win));
  }
  return out;
}

std::vector<double> instantaneous_frequency(std::span<const double> signal,
                                            double sample_rate) {
  std::vector<double> crossings;
  for (std::size_t n = 1; n < signal.size(); ++n) {
    const double a = signal[n - 1];
    const double b = signal[n];
    if (a < 0.0 && b >= 0.0) {
      crossings.push_back(static_cast<double>(n - 1) + (-a) / (b - a));
    }
  }
  if (crossings.size() < 2) {
    throw ValidationError(
        "instantaneous_frequency: fewer than 2 upward zero crossings");
  }
  std::vector<double> out(crossings.size() - 1);
  for (std::size_t i = 1; i < crossings.size(); ++i) {
    out[i - 1] = sample_rate / (crossings[i] - crossings[i - 1]);
  }
  return out;
}

std::vector<double> interpolate_track(std::span<const double> positions,
                                      std::span<const double> values,
                                      std::size_t length) {
  if (positions.size() != values.size() || positions.empty()) {
    throw ValidationError("interpolate_track: need matching, non-empty knots");
  }
  std::vector<double> out(length);
  std::size_t k = 0;
  for (std::size_t n = 0; n < length; ++n) {
    const double x = static_cast<double>(n);
    if (x <= positions.front()) {
      out[n] = values.front();
      continue;
    }
    if (x >= positions.back()) {
      out[n] = values.back();
      continue;
    }
    while (positions[k + 1] < x) ++k;
    const double span = positions[k + 1] - positions[k];
    const double t = span > 0.0 ? (x - positions[k]) / span : 0.0;
    out[n] = values[k] + t * (values[k + 1] - values[k]);
  }
  return out;
}

}  // namespace sonovib::dsp
