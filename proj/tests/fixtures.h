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

// Synthetic signals and brute-force oracles shared by the tests and the
// acceptance runner.

#ifndef SONOVIB_TESTS_FIXTURES_H_
#define SONOVIB_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sonovib/audio_io.h"

namespace sonovib::testing {

std::vector<double> sine(double freq_hz, double sample_rate, std::size_t n,
                         double amplitude = 1.0, double phase = 0.0);
std::vector<double> white_noise(std::size_t n, std::uint64_t seed,
                                double sigma = 0.2);
AudioClip make_clip(std::vector<double> samples, int sample_rate,
                    std::string id = "fixture");

// Direct DFT power |X_k|^2 at bin k (no FFT library involved).
double dft_power(std::span<const double> x, std::size_t k);

// Bin with the largest direct-DFT power among bins whose frequency lies in
// [f_lo, f_hi], returned as a frequency in Hz.
double dominant_frequency(std::span<const double> x, double sample_rate,
                          double f_lo, double f_hi);

// Fraction of signal energy (Parseval) in positive-frequency bins inside
// [f_lo, f_hi]. DC and Nyquist excluded from the band.
double band_energy_fraction(std::span<const double> x, double sample_rate,
                            double f_lo, double f_hi);

// Twenty varied 44.1 kHz clips (tones, chirps, bursts, noise, clicks) with a
// low noise floor so no analysis window is exactly silent.
std::vector<AudioClip> converter_fixture_set();

// Fresh empty directory under the system temp path.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace sonovib::testing

#endif  // SONOVIB_TESTS_FIXTURES_H_
