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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "sonovib/analysis.h"
#include "sonovib/audio_io.h"
#include "sonovib/converters.h"
#include "sonovib/curation.h"
#include "sonovib/dsp.h"
#include "sonovib/error.h"

namespace py = pybind11;
using namespace sonovib;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw ValidationError("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) {
  const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(v.size())};
  const std::vector<py::ssize_t> strides{static_cast<py::ssize_t>(sizeof(double))};
  return Array(shape, strides, v.data());
}

AudioClip make_clip(const Array& samples, int sample_rate) {
  return {to_vector(samples), sample_rate, "array"};
}

ConverterConfig config_from(const std::optional<std::filesystem::path>& path) {
  return path ? load_converter_config(*path) : ConverterConfig{};
}

py::dict features_dict(const curation::FeatureVector& fv) {
  py::dict d;
  d["centroid_hz"] = fv.centroid_hz;
  d["rolloff_hz"] = fv.rolloff_hz;
  d["bandwidth_hz"] = fv.bandwidth_hz;
  d["rms_energy"] = fv.rms_energy;
  d["zcr"] = fv.zcr;
  d["tempo_bpm"] = fv.tempo_bpm;
  d["mfcc"] = std::vector<double>(fv.mfcc.begin(), fv.mfcc.end());
  d["chroma"] = std::vector<double>(fv.chroma.begin(), fv.chroma.end());
  const auto flat = fv.to_array();
  d["vector"] = to_array(std::vector<double>(flat.begin(), flat.end()));
  return d;
}

}  // namespace

PYBIND11_MODULE(_sonovib, m) {
  m.doc() = "Audio-to-vibrotactile conversion, curation and rating analysis";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ProcessingError>(m, "ProcessingError", PyExc_RuntimeError);

  m.attr("VIBRATION_RATE") = kVibrationRate;
  m.attr("ALGORITHMS") = std::vector<std::string>{"plm", "fshift", "pitch", "hapticgen"};

  m.def("load_wav", [](const std::filesystem::path& path) {
        const auto clip = load_wav(path);
        return py::make_tuple(to_array(clip.samples), clip.sample_rate);
      }, py::arg("path"), "Read a 16-bit PCM WAV as float samples; multichannel input is mixed to mono.");
  m.def("save_wav", [](const std::filesystem::path& path, const Array& samples, int rate) {
        save_wav(to_vector(samples), rate, path);
      }, py::arg("path"), py::arg("samples"), py::arg("sample_rate"));

  m.def("resample", [](const Array& x, int in_rate, int out_rate) {
        return to_array(resample(to_vector(x), in_rate, out_rate));
      }, py::arg("samples"), py::arg("in_rate"), py::arg("out_rate"));
  m.def("pitch_shift", [](const Array& x, double semitones) {
        return to_array(dsp::pitch_shift(to_vector(x), semitones));
      }, py::arg("samples"), py::arg("semitones"));

  m.def("convert",
        [](const Array& x, int rate, const std::string& algo,
           const std::optional<std::filesystem::path>& config) {
          const auto v = convert(make_clip(x, rate), parse_algorithm(algo), config_from(config));
          return to_array(v.samples);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("algorithm"),
        py::arg("config") = py::none(),
        "Convert audio to an 8 kHz vibration signal with one of the four algorithms.");

  m.def("extract_features", [](const Array& x, int rate) {
        return features_dict(curation::extract_features(make_clip(x, rate)));
      }, py::arg("samples"), py::arg("sample_rate"));
  m.def("augment", [](const Array& x, int rate, std::uint64_t seed) {
        return to_array(curation::augment(make_clip(x, rate), seed).samples);
      }, py::arg("samples"), py::arg("sample_rate"), py::arg("seed"));

  m.def("kmeans",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts,
           std::size_t k, std::uint64_t seed) {
          if (pts.ndim() != 2) throw ValidationError("kmeans: expected a 2-D array");
          curation::Matrix rows(static_cast<std::size_t>(pts.shape(0)));
          const auto cols = static_cast<std::size_t>(pts.shape(1));
          for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i].assign(pts.data() + i * cols, pts.data() + (i + 1) * cols);
          }
          const auto r = curation::kmeans(rows, k, seed);
          py::dict d;
          d["assignment"] = r.assignment;
          d["centroids"] = r.centroids;
          d["objective"] = r.objective;
          d["objective_history"] = r.objective_history;
          d["iterations"] = r.iterations;
          return d;
        },
        py::arg("points"), py::arg("k"), py::arg("seed"));
  m.def("proportional_allocation",
        [](const std::vector<std::size_t>& sizes, std::size_t target) {
          return curation::proportional_allocation(sizes, target);
        },
        py::arg("cluster_sizes"), py::arg("target"));

  m.def("blend_targets",
        [](const std::vector<Array>& refs, const std::vector<double>& ratings) {
          std::vector<VibrationSignal> signals;
          for (const auto& r : refs) signals.push_back({to_vector(r)});
          return to_array(analysis::blend_targets(signals, ratings).samples);
        },
        py::arg("references"), py::arg("ratings"));
  m.def("reconstruction_metrics",
        [](const Array& pred, const Array& target, double rate) {
          const auto r = analysis::reconstruction_metrics(to_vector(pred), to_vector(target), rate);
          py::dict d;
          d["mse"] = r.mse;
          d["rmse"] = r.rmse;
          d["stft_loss"] = r.stft_loss;
          d["mel_l1"] = r.mel_l1;
          d["amp_loss"] = r.amp_loss;
          return d;
        },
        py::arg("pred"), py::arg("target"), py::arg("sample_rate") = kVibrationRate);

  // Returns the JSON report text; the Python package decodes it.
  m.def("aggregate_json",
        [](const std::filesystem::path& ratings, const std::filesystem::path& manifest,
           const std::string& level, const std::optional<std::filesystem::path>& column_map) {
          const auto cols = column_map ? analysis::ColumnMap::load(*column_map)
                                       : analysis::ColumnMap{};
          const auto report = analysis::aggregate(analysis::load_ratings(ratings, cols),
                                                  curation::load_manifest(manifest),
                                                  analysis::parse_level(level));
          return analysis::format_report_json(report);
        },
        py::arg("ratings"), py::arg("manifest"), py::arg("level") = "overall",
        py::arg("column_map") = py::none());
}
