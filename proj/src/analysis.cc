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

#include "sonovib/analysis.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "csv.h"
#include "json.hpp"
#include "sonovib/dsp.h"
#include "sonovib/error.h"

namespace sonovib::analysis {
namespace {

constexpr double kTieTolerance = 1e-9;

AlgorithmStats describe(const std::vector<double>& clip_means,
                        const std::vector<double>& scores) {
  AlgorithmStats s;
  s.count = clip_means.size();
  s.ratings = scores.size();
  if (clip_means.empty()) return s;
  double sum = 0.0;
  for (double v : clip_means) sum += v;
  s.mean = sum / static_cast<double>(clip_means.size());
  if (scores.size() > 1) {
    double mu = 0.0;
    for (double v : scores) mu += v;
    mu /= static_cast<double>(scores.size());
    double ss = 0.0;
    for (double v : scores) ss += (v - mu) * (v - mu);
    s.sd = std::sqrt(ss / static_cast<double>(scores.size() - 1));
  }
  return s;
}

// Algorithms whose value equals the maximum among present values.
std::vector<Algorithm> argmax_set(
    const std::array<std::optional<double>, kNumAlgorithms>& values) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) {
    if (v) best = std::max(best, *v);
  }
  std::vector<Algorithm> out;
  for (std::size_t a = 0; a < kNumAlgorithms; ++a) {
    if (values[a] && best - *values[a] <= kTieTolerance) {
      out.push_back(kRatedAlgorithms[a]);
    }
  }
  return out;
}

std::vector<double> log_mel(std::span<const double> signal, double sample_rate,
                            const MetricParams& p, const std::vector<double>& fb) {
  std::vector<double> padded(signal.begin(), signal.end());
  if (padded.size() < p.mel_fft) padded.resize(p.mel_fft, 0.0);
  const auto spec = dsp::stft(padded, p.mel_fft, p.mel_hop, sample_rate);
  std::vector<double> out(spec.frames * p.mel_bands);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const auto mag = spec.frame(t);
    for (std::size_t b = 0; b < p.mel_bands; ++b) {
      double e = 0.0;
      for (std::size_t k = 0; k < spec.bins; ++k) e += fb[b * spec.bins + k] * mag[k];
      out[t * p.mel_bands + b] = std::log(e + p.epsilon);
    }
  }
  return out;
}

double stft_term(std::span<const double> pred, std::span<const double> target,
                 std::size_t fft, double eps) {
  std::vector<double> p(pred.begin(), pred.end());
  std::vector<double> t(target.begin(), target.end());
  if (p.size() < fft) {
    p.resize(fft, 0.0);
    t.resize(fft, 0.0);
  }
  const auto sp = dsp::stft(p, fft, fft / 4);
  const auto st = dsp::stft(t, fft, fft / 4);
  double diff2 = 0.0, norm2 = 0.0, log_l1 = 0.0;
  for (std::size_t i = 0; i < st.magnitudes.size(); ++i) {
    const double a = st.magnitudes[i];
    const double b = sp.magnitudes[i];
    diff2 += (a - b) * (a - b);
    norm2 += a * a;
    log_l1 += std::abs(std::log(a + eps) - std::log(b + eps));
  }
  const double convergence = std::sqrt(diff2) / std::max(std::sqrt(norm2), eps);
  return convergence + log_l1 / static_cast<double>(st.magnitudes.size());
}

}  // namespace

std::size_t algorithm_index(Algorithm algo) {
  for (std::size_t i = 0; i < kNumAlgorithms; ++i) {
    if (kRatedAlgorithms[i] == algo) return i;
  }
  throw ValidationError("algorithm '" + std::string(to_string(algo)) +
                        "' is not a rated algorithm");
}

ColumnMap ColumnMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open column map '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(path.string() + ": expected an object");
  ColumnMap map;
  for (const auto& [key, value] : j.items()) {
    std::string* field = nullptr;
    if (key == "clip_id") field = &map.clip_id;
    else if (key == "algorithm") field = &map.algorithm;
    else if (key == "rater_id") field = &map.rater_id;
    else if (key == "rating") field = &map.rating;
    if (field) {
      if (!value.is_string()) {
        throw ValidationError(path.string() + ": '" + key + "' must be a string");
      }
      *field = value.get<std::string>();
    } else if (key == "algorithm_aliases") {
      if (!value.is_object()) {
        throw ValidationError(path.string() + ": algorithm_aliases must be an object");
      }
      for (const auto& [from, to] : value.items()) {
        if (!to.is_string()) {
          throw ValidationError(path.string() + ": alias '" + from +
                                "' must map to a string");
        }
        const auto tag = to.get<std::string>();
        algorithm_index(parse_algorithm(tag));
        map.algorithm_aliases[from] = tag;
      }
    } else {
      throw ValidationError(path.string() + ": unknown key '" + key + "'");
    }
  }
  return map;
}

RatingsTable RatingsTable::from_records(std::vector<RatingRecord> records) {
  if (records.empty()) throw ValidationError("ratings table is empty");
  RatingsTable table;
  std::map<std::string, std::array<std::pair<double, std::size_t>, kNumAlgorithms>> sums;
  for (const auto& r : records) {
    if (!(r.rating >= 0.0 && r.rating <= 100.0)) {
      throw ValidationError("rating " + std::to_string(r.rating) + " for clip '" +
                            r.clip_id + "' outside [0, 100]");
    }
    const std::size_t a = algorithm_index(r.algorithm);
    auto [it, inserted] = sums.try_emplace(r.clip_id);
    if (inserted) table.clip_ids_.push_back(r.clip_id);
    it->second[a].first += r.rating;
    ++it->second[a].second;
    table.scores_[r.clip_id][a].push_back(r.rating);
  }
  for (const auto& [id, per_algo] : sums) {
    auto& means = table.means_[id];
    for (std::size_t a = 0; a < kNumAlgorithms; ++a) {
      if (per_algo[a].second > 0) {
        means[a] = per_algo[a].first / static_cast<double>(per_algo[a].second);
      }
    }
  }
  table.records_ = std::move(records);
  return table;
}

const std::array<std::optional<double>, kNumAlgorithms>& RatingsTable::clip_means(
    const std::string& clip_id) const {
  const auto it = means_.find(clip_id);
  if (it == means_.end()) throw ValidationError("no ratings for clip '" + clip_id + "'");
  return it->second;
}

std::optional<double> RatingsTable::clip_rating(const std::string& clip_id,
                                                Algorithm algo) const {
  const auto it = means_.find(clip_id);
  if (it == means_.end()) return std::nullopt;
  return it->second[algorithm_index(algo)];
}

const std::vector<double>& RatingsTable::rater_scores(const std::string& clip_id,
                                                   Algorithm algo) const {
  const auto it = scores_.find(clip_id);
  if (it == scores_.end()) throw ValidationError("no ratings for clip '" + clip_id + "'");
  return it->second[algorithm_index(algo)];
}

RatingsTable parse_ratings(std::string_view csv_text, const ColumnMap& columns) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty()) throw ValidationError("ratings file is empty");
  const auto& header = rows.front().fields;
  const auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ValidationError("ratings header lacks column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_clip = column(columns.clip_id);
  const std::size_t c_algo = column(columns.algorithm);
  const std::size_t c_rater = column(columns.rater_id);
  const std::size_t c_rating = column(columns.rating);

  std::vector<RatingRecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "ratings line " + std::to_string(row.line);
    if (row.fields.size() != header.size()) {
      throw ValidationError(where + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(row.fields.size()));
    }
    RatingRecord rec;
    rec.clip_id = row.fields[c_clip];
    rec.rater_id = row.fields[c_rater];
    std::string tag = row.fields[c_algo];
    if (const auto alias = columns.algorithm_aliases.find(tag);
        alias != columns.algorithm_aliases.end()) {
      tag = alias->second;
    }
    try {
      rec.algorithm = parse_algorithm(tag);
      algorithm_index(rec.algorithm);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    const std::string& text = row.fields[c_rating];
    std::size_t used = 0;
    try {
      rec.rating = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw ValidationError(where + ": rating '" + text + "' is not a number");
    }
    if (!(rec.rating >= 0.0 && rec.rating <= 100.0)) {
      throw ValidationError(where + ": rating " + text + " outside [0, 100]");
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ValidationError("ratings file has no records");
  return RatingsTable::from_records(std::move(records));
}

RatingsTable load_ratings(const std::filesystem::path& path,
                          const ColumnMap& columns) {
  try {
    return parse_ratings(csv::read_file(path.string()), columns);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

Level parse_level(std::string_view name) {
  if (name == "overall") return Level::kOverall;
  if (name == "category") return Level::kCategory;
  if (name == "class") return Level::kClass;
  if (name == "clip") return Level::kClip;
  throw ValidationError("unknown level '" + std::string(name) +
                        "' (expected overall, category, class or clip)");
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::kOverall: return "overall";
    case Level::kCategory: return "category";
    case Level::kClass: return "class";
    case Level::kClip: return "clip";
  }
  return "overall";
}

AggregateReport aggregate(const RatingsTable& table,
                          const curation::DatasetManifest& manifest,
                          Level level) {
  std::map<std::string, const curation::ManifestEntry*> lookup;
  for (const auto& e : manifest.entries) lookup[e.clip_id] = &e;

  AggregateReport report;
  report.level = level;
  report.clip_count = table.clip_ids().size();

  struct Bucket {
    std::string label;
    std::array<std::vector<double>, kNumAlgorithms> values;
    std::array<std::vector<double>, kNumAlgorithms> scores;
  };
  // Integer-keyed levels sort numerically; clip level keeps table order.
  std::map<long, Bucket> numbered;
  std::vector<std::pair<std::string, Bucket>> clips;
  Bucket all;

  for (const auto& id : table.clip_ids()) {
    const auto it = lookup.find(id);
    if (it == lookup.end()) {
      throw ValidationError("clip '" + id + "' in ratings is missing from the manifest");
    }
    const auto& means = table.clip_means(id);
    const auto winners = argmax_set(means);
    for (Algorithm w : winners) ++report.clip_wins[algorithm_index(w)];
    if (winners.size() > 1) ++report.tie_count;

    Bucket* bucket = nullptr;
    switch (level) {
      case Level::kOverall: break;
      case Level::kCategory: {
        bucket = &numbered[it->second->category_id];
        break;
      }
      case Level::kClass: {
        bucket = &numbered[it->second->class_id];
        bucket->label = it->second->class_name;
        break;
      }
      case Level::kClip: {
        clips.emplace_back(id, Bucket{it->second->class_name, {}, {}});
        bucket = &clips.back().second;
        break;
      }
    }
    for (std::size_t a = 0; a < kNumAlgorithms; ++a) {
      if (!means[a]) continue;
      const auto& scores = table.rater_scores(id, kRatedAlgorithms[a]);
      for (Bucket* b : {&all, bucket}) {
        if (!b) continue;
        b->values[a].push_back(*means[a]);
        b->scores[a].insert(b->scores[a].end(), scores.begin(), scores.end());
      }
    }
  }

  const auto summarise = [](std::string key, const Bucket& b) {
    GroupSummary g;
    g.key = std::move(key);
    g.label = b.label;
    std::array<std::optional<double>, kNumAlgorithms> means;
    for (std::size_t a = 0; a < kNumAlgorithms; ++a) {
      g.stats[a] = describe(b.values[a], b.scores[a]);
      if (g.stats[a].count > 0) means[a] = g.stats[a].mean;
    }
    g.winners = argmax_set(means);
    return g;
  };
  for (std::size_t a = 0; a < kNumAlgorithms; ++a) {
    report.overall[a] = describe(all.values[a], all.scores[a]);
  }
  for (const auto& [key, bucket] : numbered) {
    report.groups.push_back(summarise(std::to_string(key), bucket));
  }
  for (const auto& [key, bucket] : clips) report.groups.push_back(summarise(key, bucket));
  return report;
}

namespace {

std::string join_winners(const std::vector<Algorithm>& winners) {
  std::string out;
  for (std::size_t i = 0; i < winners.size(); ++i) {
    if (i) out += '+';
    out += to_string(winners[i]);
  }
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

std::string format_report_text(const AggregateReport& report) {
  std::ostringstream out;
  out << "level: " << to_string(report.level) << "\n\n";
  out << std::left << std::setw(12) << "algorithm" << std::right << std::setw(10)
      << "mean" << std::setw(10) << "sd" << std::setw(8) << "n" << std::setw(8)
      << "wins" << '\n';
  for (std::size_t a = 0; a < kNumAlgorithms; ++a) {
    const auto& s = report.overall[a];
    out << std::left << std::setw(12) << to_string(kRatedAlgorithms[a]) << std::right
        << std::setw(10) << fixed(s.mean, 2) << std::setw(10) << fixed(s.sd, 2)
        << std::setw(8) << s.count << std::setw(8) << report.clip_wins[a] << '\n';
  }
  out << "clips: " << report.clip_count << ", ties: " << report.tie_count << '\n';
  if (report.groups.empty()) return out.str();

  std::size_t key_w = 4, label_w = 5;
  for (const auto& g : report.groups) {
    key_w = std::max(key_w, g.key.size());
    label_w = std::max(label_w, g.label.size());
  }
  out << '\n' << std::left << std::setw(static_cast<int>(key_w) + 2) << "key"
      << std::setw(static_cast<int>(label_w) + 2) << "label";
  for (Algorithm a : kRatedAlgorithms) out << std::right << std::setw(11) << to_string(a);
  out << "  winner\n";
  for (const auto& g : report.groups) {
    out << std::left << std::setw(static_cast<int>(key_w) + 2) << g.key
        << std::setw(static_cast<int>(label_w) + 2) << g.label;
    for (const auto& s : g.stats) {
      out << std::right << std::setw(11) << (s.count ? fixed(s.mean, 2) : "-");
    }
    out << "  " << join_winners(g.winners) << '\n';
  }
  return out.str();
}

std::string format_report_json(const AggregateReport& report) {
  const auto stats_json = [](const std::array<AlgorithmStats, kNumAlgorithms>& stats) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t a = 0; a < kNumAlgorithms; ++a) {
      j[std::string(to_string(kRatedAlgorithms[a]))] = {
          {"mean", stats[a].mean}, {"sd", stats[a].sd}, {"clips", stats[a].count},
          {"ratings", stats[a].ratings}};
    }
    return j;
  };
  nlohmann::ordered_json j;
  j["level"] = to_string(report.level);
  j["clip_count"] = report.clip_count;
  j["overall"] = stats_json(report.overall);
  nlohmann::ordered_json wins = nlohmann::ordered_json::object();
  for (std::size_t a = 0; a < kNumAlgorithms; ++a) {
    wins[std::string(to_string(kRatedAlgorithms[a]))] = report.clip_wins[a];
  }
  j["clip_wins"] = wins;
  j["ties"] = report.tie_count;
  j["groups"] = nlohmann::ordered_json::array();
  for (const auto& g : report.groups) {
    nlohmann::ordered_json gj;
    gj["key"] = g.key;
    gj["label"] = g.label;
    gj["stats"] = stats_json(g.stats);
    std::vector<std::string> winners;
    for (Algorithm w : g.winners) winners.emplace_back(to_string(w));
    gj["winners"] = winners;
    j["groups"].push_back(std::move(gj));
  }
  return j.dump(2) + "\n";
}

VibrationSignal blend_targets(std::span<const VibrationSignal> refs,
                              std::span<const double> ratings) {
  if (refs.empty()) throw ValidationError("blend: no references");
  if (refs.size() != ratings.size()) {
    throw ValidationError("blend: " + std::to_string(refs.size()) + " references but " +
                          std::to_string(ratings.size()) + " ratings");
  }
  double total = 0.0;
  for (double r : ratings) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ValidationError("blend: ratings must be finite and non-negative");
    }
    total += r;
  }
  if (total <= 0.0) throw ValidationError("blend: ratings are all zero");
  const std::size_t n = refs.front().samples.size();
  for (const auto& ref : refs) {
    if (ref.samples.size() != n) {
      throw ValidationError("blend: reference lengths differ");
    }
    if (ref.sample_rate != refs.front().sample_rate) {
      throw ValidationError("blend: reference sample rates differ");
    }
  }
  VibrationSignal out;
  out.sample_rate = refs.front().sample_rate;
  out.algorithm = Algorithm::kBlended;
  out.samples.assign(n, 0.0);
  std::vector<double> weights;
  for (double r : ratings) weights.push_back(r / total);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0, lo = refs.front().samples[i], hi = lo;
    for (std::size_t r = 0; r < refs.size(); ++r) {
      const double v = refs[r].samples[i];
      if (weights[r] > 0.0) acc += weights[r] * v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // Rounding can leave a convex combination an ulp outside its envelope.
    out.samples[i] = std::clamp(acc, lo, hi);
  }
  return out;
}

MetricReport reconstruction_metrics(std::span<const double> pred,
                                    std::span<const double> target,
                                    double sample_rate, const MetricParams& params) {
  if (pred.size() != target.size()) {
    throw ValidationError("metrics: lengths differ (" + std::to_string(pred.size()) +
                          " vs " + std::to_string(target.size()) + ")");
  }
  if (pred.empty()) throw ValidationError("metrics: empty signals");
  if (params.stft_sizes.empty()) throw ValidationError("metrics: no STFT sizes");
  MetricReport m;
  double se = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    se += d * d;
  }
  m.mse = se / static_cast<double>(pred.size());
  m.rmse = std::sqrt(m.mse);
  m.amp_loss = std::abs(rms(pred) - rms(target));

  for (std::size_t fft : params.stft_sizes) {
    m.stft_loss += stft_term(pred, target, fft, params.epsilon);
  }
  m.stft_loss /= static_cast<double>(params.stft_sizes.size());

  const auto fb = dsp::mel_filterbank(params.mel_bands, params.mel_fft, sample_rate,
                                      0.0, std::min(params.mel_f_max, sample_rate / 2));
  const auto mp = log_mel(pred, sample_rate, params, fb);
  const auto mt = log_mel(target, sample_rate, params, fb);
  double l1 = 0.0;
  for (std::size_t i = 0; i < mp.size(); ++i) l1 += std::abs(mp[i] - mt[i]);
  m.mel_l1 = l1 / static_cast<double>(mp.size());
  return m;
}

std::string format_metrics_json(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["mse"] = report.mse;
  j["rmse"] = report.rmse;
  j["stft_loss"] = report.stft_loss;
  j["mel_l1"] = report.mel_l1;
  j["amp_loss"] = report.amp_loss;
  return j.dump(2) + "\n";
}

ReferenceComparison compare_to_references(std::span<const double> generated,
                                          std::span<const LabeledSignal> refs) {
  if (refs.empty()) throw ValidationError("compare: empty reference set");
  ReferenceComparison out;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ref : refs) {
    const std::size_t n = std::max(generated.size(), ref.samples.size());
    double se = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = i < generated.size() ? generated[i] : 0.0;
      const double r = i < ref.samples.size() ? ref.samples[i] : 0.0;
      se += (g - r) * (g - r);
    }
    const double value = n ? std::sqrt(se / static_cast<double>(n)) : 0.0;
    out.rmse.emplace_back(ref.label, value);
    if (value < best) {
      best = value;
      out.best_label = ref.label;
    }
  }
  return out;
}

}  // namespace sonovib::analysis
