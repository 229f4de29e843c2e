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

// JSON configuration files for the converters and the psychoacoustic model.

#include <fstream>
#include <set>
#include <string>

#include "json.hpp"
#include "sonovib/converters.h"
#include "sonovib/error.h"
#include "sonovib/psychoacoustics.h"

namespace sonovib {
namespace {

using nlohmann::json;

// Reads members of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ValidationError(path_ + ": expected an object");
  }

  template <typename T>
  void read(const char* key, T& field) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      field = it->template get<T>();
    } catch (const json::exception& e) {
      throw ValidationError(path_ + "." + key + ": " + e.what());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) {
        throw ValidationError("unknown config key '" + path_ + "." + key + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void apply_psycho(psycho::PsychoConfig& cfg, const json& j,
                  const std::string& path) {
  ObjectReader r(j, path);
  if (const json* l = r.child("loudness")) {
    ObjectReader lr(*l, r.path("loudness"));
    lr.read("contour_hz", cfg.loudness.contour_hz);
    lr.read("contour_spl", cfg.loudness.contour_spl);
    lr.read("full_scale_spl", cfg.loudness.full_scale_spl);
    lr.read("reference_spl", cfg.loudness.reference_spl);
    lr.read("exponent", cfg.loudness.exponent);
    lr.finish();
  }
  if (const json* rj = r.child("roughness")) {
    ObjectReader rr(*rj, r.path("roughness"));
    auto& rc = cfg.roughness;
    rr.read("amplitude_exponent", rc.amplitude_exponent);
    rr.read("fluctuation_exponent", rc.fluctuation_exponent);
    rr.read("b1", rc.b1);
    rr.read("b2", rc.b2);
    rr.read("s_num", rc.s_num);
    rr.read("s1", rc.s1);
    rr.read("s2", rc.s2);
    rr.read("max_peaks", rc.max_peaks);
    rr.read("peak_floor_db", rc.peak_floor_db);
    rr.finish();
  }
  r.finish();
  const auto& lc = cfg.loudness;
  if (lc.contour_hz.size() < 2 || lc.contour_hz.size() != lc.contour_spl.size()) {
    throw ValidationError(path + ".loudness: contour tables must match and hold "
                                 "at least two points");
  }
}

}  // namespace

namespace psycho {

PsychoConfig load_psycho_config(const std::filesystem::path& path) {
  PsychoConfig cfg = PsychoConfig::defaults();
  apply_psycho(cfg, parse_file(path), path.filename().string());
  return cfg;
}

}  // namespace psycho

ConverterConfig load_converter_config(const std::filesystem::path& path) {
  const json j = parse_file(path);
  ConverterConfig cfg;
  ObjectReader r(j, "config");
  r.read("output_rate", cfg.output_rate);
  r.read("target_segment_rms", cfg.target_segment_rms);
  r.read("peak_normalize_input", cfg.peak_normalize_input);
  if (const json* p = r.child("plm")) {
    ObjectReader pr(*p, r.path("plm"));
    pr.read("frame_size", cfg.plm.frame_size);
    pr.read("carrier1_hz", cfg.plm.carrier1_hz);
    pr.read("carrier2_hz", cfg.plm.carrier2_hz);
    pr.read("iv_offset", cfg.plm.iv_offset);
    pr.read("iv_gain", cfg.plm.iv_gain);
    pr.read("rv_offset", cfg.plm.rv_offset);
    pr.read("rv_gain", cfg.plm.rv_gain);
    pr.read("rv_exponent", cfg.plm.rv_exponent);
    pr.read("mix", cfg.plm.mix);
    pr.finish();
  }
  if (const json* f = r.child("fshift")) {
    ObjectReader fr(*f, r.path("fshift"));
    fr.read("shifts", cfg.fshift.shifts);
    fr.read("hp_cutoff_hz", cfg.fshift.hp_cutoff_hz);
    fr.read("hp_order", cfg.fshift.hp_order);
    fr.read("bp_center_hz", cfg.fshift.bp_center_hz);
    fr.read("bp_q", cfg.fshift.bp_q);
    fr.read("bp_order", cfg.fshift.bp_order);
    fr.finish();
  }
  if (const json* p = r.child("pitch")) {
    ObjectReader pr(*p, r.path("pitch"));
    pr.read("window_ms", cfg.pitch.window_ms);
    pr.read("overlap", cfg.pitch.overlap);
    pr.read("f_min", cfg.pitch.f_min);
    pr.read("f_max", cfg.pitch.f_max);
    pr.read("weights", cfg.pitch.weights);
    pr.read("intercept", cfg.pitch.intercept);
    pr.finish();
  }
  if (const json* h = r.child("hapticgen")) {
    ObjectReader hr(*h, r.path("hapticgen"));
    hr.read("window_ms", cfg.hapticgen.window_ms);
    hr.read("f_center", cfg.hapticgen.f_center);
    hr.read("f_dev", cfg.hapticgen.f_dev);
    hr.finish();
  }
  if (const json* p = r.child("psycho")) apply_psycho(cfg.psycho, *p, r.path("psycho"));
  r.finish();
  cfg.validate();
  return cfg;
}

}  // namespace sonovib
