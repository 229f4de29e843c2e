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

#include "sonovib/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>

#include "sonovib/error.h"

namespace sonovib {
namespace {

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
  }
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

double modified_bessel_i0(double x) {
  // Power series; converges quickly for the Kaiser beta values used here.
  double sum = 1.0;
  double term = 1.0;
  const double half_x_sq = 0.25 * x * x;
  for (int k = 1; k < 64; ++k) {
    term *= half_x_sq / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// Windowed-sinc kernel tabulated at kOversample points per input sample.
// Kaiser window sized for 65 dB stopband rejection starting at the lower
// Nyquist frequency, transition band 10% of it.
class SincKernel {
 public:
  explicit SincKernel(double ratio) {
    const double r = std::min(1.0, ratio);
    constexpr double kAttenuationDb = 65.0;
    const double beta = 0.1102 * (kAttenuationDb - 8.7);
    const double transition = 0.1 * r;  // cycles per input sample
    const double taps =
        (kAttenuationDb - 7.95) / (2.285 * 2.0 * std::numbers::pi * transition);
    half_width_ = static_cast<int>(std::ceil(taps / 2.0)) + 1;
    cutoff_ = 0.45 * r;
    const double i0_beta = modified_bessel_i0(beta);
    const std::size_t n = static_cast<std::size_t>(half_width_) * kOversample + 2;
    table_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(i) / kOversample;
      const double u = d / half_width_;
      double w = 0.0;
      if (u < 1.0) w = modified_bessel_i0(beta * std::sqrt(1.0 - u * u)) / i0_beta;
      const double x = 2.0 * cutoff_ * d;
      const double sinc =
          x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
      table_[i] = 2.0 * cutoff_ * sinc * w;
    }
  }

  int half_width() const { return half_width_; }

  double operator()(double d) const {
    const double pos = std::abs(d) * kOversample;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= table_.size()) return 0.0;
    const double frac = pos - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
  }

 private:
  static constexpr int kOversample = 512;
  int half_width_ = 0;
  double cutoff_ = 0.0;
  std::vector<double> table_;
};

// Whole-sample symmetric extension keeps DC and slow trends continuous at
// the edges instead of stepping to zero.
double reflected(std::span<const double> x, long long i) {
  const auto n = static_cast<long long>(x.size());
  if (n == 1) return x[0];
  const long long period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  if (i >= n) i = period - i;
  return x[static_cast<std::size_t>(i)];
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kPlm:
      return "plm";
    case Algorithm::kFshift:
      return "fshift";
    case Algorithm::kPitch:
      return "pitch";
    case Algorithm::kHapticgen:
      return "hapticgen";
    case Algorithm::kBlended:
      return "blended";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view tag) {
  for (Algorithm a : {Algorithm::kPlm, Algorithm::kFshift, Algorithm::kPitch,
                      Algorithm::kHapticgen, Algorithm::kBlended}) {
    if (to_string(a) == tag) return a;
  }
  throw ValidationError("unknown algorithm tag '" + std::string(tag) + "'");
}

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError(name + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    std::size_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) {
        throw ValidationError(name + ": truncated fmt chunk");
      }
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible && size >= 26) format = read_u16(f + 24);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      // Streaming writers leave the size unset; take what is there.
      data = bytes.data() + body;
      data_size = std::min(size, available);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1);
  }

  if (!have_fmt) throw ValidationError(name + ": missing fmt chunk");
  if (format != kFormatPcm) {
    throw ValidationError(name + ": unsupported encoding (format tag " +
                          std::to_string(format) + "), expected PCM");
  }
  if (bits != 16) {
    throw ValidationError(name + ": expected 16-bit PCM, got " +
                          std::to_string(bits) + "-bit");
  }
  if (channels == 0 || rate == 0) {
    throw ValidationError(name + ": invalid channel count or sample rate");
  }
  if (!have_data) throw ValidationError(name + ": missing data chunk");
  const std::size_t frame_bytes = 2u * channels;
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) throw ValidationError(name + ": zero-length data chunk");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.source_id = path.stem().string();
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const auto v = static_cast<std::int16_t>(
          read_u16(data + i * frame_bytes + 2 * c));
      acc += static_cast<double>(v) / 32768.0;
    }
    clip.samples[i] = acc / channels;
  }
  return clip;
}

void save_wav(std::span<const double> samples, int sample_rate,
              const std::filesystem::path& path) {
  if (sample_rate <= 0) throw ValidationError("sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : samples) {
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(v));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw ProcessingError("write failed for '" + path.string() + "'");
}

void save_wav(const AudioClip& clip, const std::filesystem::path& path) {
  save_wav(clip.samples, clip.sample_rate, path);
}

void save_wav(const VibrationSignal& signal, const std::filesystem::path& path) {
  save_wav(signal.samples, signal.sample_rate, path);
}

std::vector<double> resample_ratio(std::span<const double> samples,
                                   double ratio, std::size_t out_length) {
  if (samples.empty()) throw ValidationError("resample: empty input");
  if (!(ratio > 0.0)) throw ValidationError("resample: ratio must be positive");
  const SincKernel kernel(ratio);
  const int hw = kernel.half_width();
  const auto n = static_cast<long long>(samples.size());
  std::vector<double> out(out_length);
  for (std::size_t m = 0; m < out_length; ++m) {
    const double t = static_cast<double>(m) / ratio;
    const auto centre = static_cast<long long>(std::floor(t));
    double acc = 0.0;
    for (long long i = centre - hw + 1; i <= centre + hw; ++i) {
      const double w = kernel(t - static_cast<double>(i));
      if (w == 0.0) continue;
      const double x = (i >= 0 && i < n) ? samples[static_cast<std::size_t>(i)]
                                         : reflected(samples, i);
      acc += w * x;
    }
    out[m] = acc;
  }
  return out;
}

std::vector<double> resample(std::span<const double> samples, int in_rate,
                             int out_rate) {
  if (samples.empty()) throw ValidationError("resample: empty input");
  if (in_rate <= 0 || out_rate <= 0) {
    throw ValidationError("resample: rates must be positive");
  }
  if (in_rate == out_rate) return {samples.begin(), samples.end()};
  const auto out_length = static_cast<std::size_t>(std::llround(
      static_cast<double>(samples.size()) * out_rate / in_rate));
  return resample_ratio(samples, static_cast<double>(out_rate) / in_rate,
                        out_length);
}

AudioClip resample(const AudioClip& clip, int target_rate) {
  AudioClip out;
  out.samples = resample(clip.samples, clip.sample_rate, target_rate);
  out.sample_rate = target_rate;
  out.source_id = clip.source_id;
  return out;
}

double rms(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

double peak(std::span<const double> samples) {
  double p = 0.0;
  for (double s : samples) p = std::max(p, std::abs(s));
  return p;
}

std::vector<double> peak_normalize(std::span<const double> samples) {
  const double p = peak(samples);
  if (p == 0.0) throw DegenerateSignalError("cannot peak-normalize silence");
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(),
                 [p](double s) { return s / p; });
  return out;
}

AudioClip peak_normalize(const AudioClip& clip) {
  AudioClip out = clip;
  out.samples = peak_normalize(clip.samples);
  return out;
}

RmsNormalized rms_normalize(std::span<const double> samples,
                            double target_rms) {
  if (!(target_rms > 0.0)) {
    throw ValidationError("rms_normalize: target must be positive");
  }
  const double current = rms(samples);
  if (current == 0.0) throw DegenerateSignalError("cannot RMS-normalize silence");
  RmsNormalized result;
  result.gain = target_rms / current;
  result.samples.resize(samples.size());
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = samples[i] * result.gain;
    if (v > 1.0 || v < -1.0) ++clipped;
    result.samples[i] = std::clamp(v, -1.0, 1.0);
  }
  result.clipped_fraction =
      static_cast<double>(clipped) / static_cast<double>(samples.size());
  return result;
}

}  // namespace sonovib
