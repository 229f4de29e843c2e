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

#include "sonovib/cli.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sonovib/analysis.h"
#include "sonovib/audio_io.h"
#include "sonovib/bench.h"
#include "sonovib/converters.h"
#include "sonovib/curation.h"
#include "sonovib/error.h"

namespace sonovib::cli {
namespace {

namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& text,
                std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ProcessingError("write to '" + path + "' failed");
}

std::vector<Algorithm> parse_algorithm_list(const std::vector<std::string>& tags) {
  std::vector<Algorithm> out;
  for (const auto& t : tags) {
    const Algorithm a = parse_algorithm(t);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  if (out.empty()) throw ValidationError("no algorithms given");
  return out;
}

// Flag-level overrides layered over the defaults and the config file.
struct ConfigFlags {
  std::string path;
  std::optional<double> target_rms;
  bool no_peak_normalize = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", path, "JSON converter config")->check(CLI::ExistingFile);
    cmd->add_option("--target-rms", target_rms, "loudest-segment RMS target");
    cmd->add_flag("--no-peak-normalize", no_peak_normalize,
                  "skip input peak normalisation");
  }

  ConverterConfig resolve() const {
    ConverterConfig cfg = path.empty() ? ConverterConfig{} : load_converter_config(path);
    if (target_rms) cfg.target_segment_rms = *target_rms;
    if (no_peak_normalize) cfg.peak_normalize_input = false;
    cfg.validate();
    return cfg;
  }
};

struct ConvertArgs {
  std::string algo, in, out;
  ConfigFlags config;
};

int do_convert(const ConvertArgs& a) {
  const auto cfg = a.config.resolve();
  const Algorithm algo = parse_algorithm(a.algo);
  save_wav(convert(load_wav(a.in), algo, cfg), a.out);
  return kExitOk;
}

struct BatchArgs {
  std::string manifest, out_dir;
  std::vector<std::string> algos;
  std::size_t workers = 0;
  ConfigFlags config;
};

int do_batch(const BatchArgs& a, std::ostream& out, std::ostream& err) {
  const auto cfg = a.config.resolve();
  const auto algos = parse_algorithm_list(a.algos);
  const auto manifest = curation::load_manifest(a.manifest);
  const fs::path base = fs::path(a.manifest).parent_path();
  fs::create_directories(a.out_dir);

  const std::size_t n = manifest.entries.size();
  std::size_t workers = a.workers ? a.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex failure_mutex;
  std::optional<std::pair<int, std::string>> failure;
  const auto record_failure = [&](int code, const std::string& message) {
    std::lock_guard lock(failure_mutex);
    if (!failure) failure.emplace(code, message);
    stop = true;
  };
  const auto worker = [&] {
    while (!stop) {
      const std::size_t i = next++;
      if (i >= n) return;
      const auto& entry = manifest.entries[i];
      try {
        fs::path p(entry.path);
        if (p.is_relative()) p = base / p;
        const AudioClip clip = load_wav(p);
        for (Algorithm algo : algos) {
          const auto name = entry.clip_id + "." + std::string(to_string(algo)) + ".wav";
          save_wav(convert(clip, algo, cfg), fs::path(a.out_dir) / name);
        }
      } catch (const ValidationError& e) {
        record_failure(kExitValidation, "clip '" + entry.clip_id + "': " + e.what());
      } catch (const std::exception& e) {
        record_failure(kExitRuntime, "clip '" + entry.clip_id + "': " + e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) {
    err << "error: " << failure->second << '\n';
    return failure->first;
  }
  out << "wrote " << n * algos.size() << " files to " << a.out_dir << '\n';
  return kExitOk;
}

struct FeaturesArgs {
  std::string in, out;
};

int do_features(const FeaturesArgs& a, std::ostream& out) {
  AudioClip clip = load_wav(a.in);
  const std::string id = fs::path(a.in).stem().string();
  const std::pair<std::string, curation::FeatureVector> record{
      id, curation::extract_features(clip)};
  write_text(a.out, curation::format_features_json({&record, 1}), out);
  return kExitOk;
}

struct CurateArgs {
  std::string manifest, out;
  std::size_t per_class = 20;
  std::size_t k = 10;
  std::uint64_t seed = 0;
};

int do_curate(const CurateArgs& a, std::ostream& out) {
  const auto manifest = curation::load_manifest(a.manifest);
  curation::CurateOptions opts;
  opts.per_class = a.per_class;
  opts.clusters = a.k;
  opts.seed = a.seed;
  if (opts.per_class == 0 || opts.clusters == 0) {
    throw ValidationError("--per-class and --k must be positive");
  }
  const auto curated =
      curation::curate(manifest, fs::path(a.manifest).parent_path(), opts);
  write_text(a.out, curation::format_manifest(curated), out);
  return kExitOk;
}

struct AugmentArgs {
  std::string in, out;
  std::uint64_t seed = 0;
};

int do_augment(const AugmentArgs& a) {
  save_wav(curation::augment(load_wav(a.in), a.seed), a.out);
  return kExitOk;
}

struct BlendArgs {
  std::vector<std::string> refs;
  std::vector<double> ratings;
  std::string out;
};

int do_blend(const BlendArgs& a) {
  std::vector<VibrationSignal> refs;
  for (const auto& path : a.refs) {
    const AudioClip clip = load_wav(path);
    VibrationSignal v;
    v.samples = clip.samples;
    v.sample_rate = clip.sample_rate;
    refs.push_back(std::move(v));
  }
  save_wav(analysis::blend_targets(refs, a.ratings), a.out);
  return kExitOk;
}

struct MetricsArgs {
  std::string pred, target, out;
};

int do_metrics(const MetricsArgs& a, std::ostream& out) {
  const AudioClip pred = load_wav(a.pred);
  const AudioClip target = load_wav(a.target);
  if (pred.sample_rate != target.sample_rate) {
    throw ValidationError("metrics: sample rates differ (" +
                          std::to_string(pred.sample_rate) + " vs " +
                          std::to_string(target.sample_rate) + ")");
  }
  const auto report =
      analysis::reconstruction_metrics(pred.samples, target.samples, pred.sample_rate);
  write_text(a.out, analysis::format_metrics_json(report), out);
  return kExitOk;
}

struct ReportArgs {
  std::string ratings, manifest, level = "overall", column_map, format = "text", out;
};

int do_report(const ReportArgs& a, std::ostream& out) {
  const auto columns = a.column_map.empty() ? analysis::ColumnMap{}
                                            : analysis::ColumnMap::load(a.column_map);
  const auto level = analysis::parse_level(a.level);
  const auto table = analysis::load_ratings(a.ratings, columns);
  const auto manifest = curation::load_manifest(a.manifest);
  const auto report = analysis::aggregate(table, manifest, level);
  write_text(a.out,
             a.format == "json" ? analysis::format_report_json(report)
                                : analysis::format_report_text(report),
             out);
  return kExitOk;
}

struct BenchArgs {
  std::string clips, format = "text", out;
  std::vector<int> durations = {1, 2, 5, 10, 20};
  std::vector<std::string> algos = {"plm", "fshift", "pitch", "hapticgen"};
  std::size_t warmup = 1;
  ConfigFlags config;
};

int do_bench(const BenchArgs& a, std::ostream& out) {
  const auto cfg = a.config.resolve();
  bench::BenchOptions opts;
  opts.algorithms = parse_algorithm_list(a.algos);
  opts.durations = a.durations;
  opts.warmup = a.warmup;
  for (int d : opts.durations) {
    if (std::find(std::begin(bench::kDurations), std::end(bench::kDurations), d) ==
        std::end(bench::kDurations)) {
      throw ValidationError("unsupported duration " + std::to_string(d) +
                            " (expected 1, 2, 5, 10 or 20)");
    }
  }
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(a.clips)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<AudioClip> clips;
  for (const auto& p : paths) clips.push_back(load_wav(p));
  const auto corpus = bench::build_bench_corpus(clips);
  const auto results = bench::run_bench(corpus, opts, cfg);
  write_text(a.out,
             a.format == "json" ? bench::format_bench_json(results)
                                : bench::format_bench_text(results),
             out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sonovib: audio to vibrotactile conversion toolkit", "sonovib"};
  app.require_subcommand(1);

  ConvertArgs convert_args;
  auto* convert_cmd = app.add_subcommand("convert", "convert one clip to vibration");
  convert_cmd->add_option("--algo", convert_args.algo, "plm|fshift|pitch|hapticgen")
      ->required();
  convert_cmd->add_option("--in", convert_args.in, "input WAV")->required();
  convert_cmd->add_option("--out", convert_args.out, "output WAV")->required();
  convert_args.config.attach(convert_cmd);

  BatchArgs batch_args;
  auto* batch_cmd = app.add_subcommand("batch", "convert every manifest clip");
  batch_cmd->add_option("--manifest", batch_args.manifest)->required()->check(
      CLI::ExistingFile);
  batch_cmd->add_option("--algos", batch_args.algos, "comma-separated tags")
      ->required()
      ->delimiter(',');
  batch_cmd->add_option("--out-dir", batch_args.out_dir)->required();
  batch_cmd->add_option("--workers", batch_args.workers, "0 = available cores");
  batch_args.config.attach(batch_cmd);

  FeaturesArgs features_args;
  auto* features_cmd = app.add_subcommand("features", "extract clip features");
  features_cmd->add_option("--in", features_args.in)->required();
  features_cmd->add_option("--out", features_args.out, "JSON output, - for stdout");

  CurateArgs curate_args;
  auto* curate_cmd = app.add_subcommand("curate", "diversity-stratified subset");
  curate_cmd->add_option("--manifest", curate_args.manifest)->required()->check(
      CLI::ExistingFile);
  curate_cmd->add_option("--per-class", curate_args.per_class, "clips kept per class");
  curate_cmd->add_option("--k", curate_args.k, "clusters per class");
  curate_cmd->add_option("--seed", curate_args.seed)->required();
  curate_cmd->add_option("--out", curate_args.out, "manifest CSV, - for stdout");

  AugmentArgs augment_args;
  auto* augment_cmd = app.add_subcommand("augment", "seeded pitch/noise augmentation");
  augment_cmd->add_option("--in", augment_args.in)->required();
  augment_cmd->add_option("--seed", augment_args.seed)->required();
  augment_cmd->add_option("--out", augment_args.out)->required();

  BlendArgs blend_args;
  auto* blend_cmd = app.add_subcommand("blend", "rating-weighted reference blend");
  blend_cmd->add_option("--refs", blend_args.refs)->required()->expected(1, -1);
  blend_cmd->add_option("--ratings", blend_args.ratings)->required()->expected(1, -1);
  blend_cmd->add_option("--out", blend_args.out)->required();

  MetricsArgs metrics_args;
  auto* metrics_cmd = app.add_subcommand("metrics", "reconstruction metrics");
  metrics_cmd->add_option("--pred", metrics_args.pred)->required();
  metrics_cmd->add_option("--target", metrics_args.target)->required();
  metrics_cmd->add_option("--out", metrics_args.out, "JSON output, - for stdout");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "aggregate ratings");
  report_cmd->add_option("--ratings", report_args.ratings)->required();
  report_cmd->add_option("--manifest", report_args.manifest)->required();
  report_cmd->add_option("--level", report_args.level, "overall|category|class|clip");
  report_cmd->add_option("--column-map", report_args.column_map, "JSON column map");
  report_cmd->add_option("--format", report_args.format)
      ->check(CLI::IsMember({"text", "json"}));
  report_cmd->add_option("--out", report_args.out);

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "converter latency benchmark");
  bench_cmd->add_option("--clips", bench_args.clips, "directory of 50 five-second WAVs")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--durations", bench_args.durations)->delimiter(',');
  bench_cmd->add_option("--algos", bench_args.algos)->delimiter(',');
  bench_cmd->add_option("--warmup", bench_args.warmup);
  bench_cmd->add_option("--format", bench_args.format)
      ->check(CLI::IsMember({"text", "json"}));
  bench_cmd->add_option("--out", bench_args.out);
  bench_args.config.attach(bench_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (convert_cmd->parsed()) return do_convert(convert_args);
    if (batch_cmd->parsed()) return do_batch(batch_args, out, err);
    if (features_cmd->parsed()) return do_features(features_args, out);
    if (curate_cmd->parsed()) return do_curate(curate_args, out);
    if (augment_cmd->parsed()) return do_augment(augment_args);
    if (blend_cmd->parsed()) return do_blend(blend_args);
    if (metrics_cmd->parsed()) return do_metrics(metrics_args, out);
    if (report_cmd->parsed()) return do_report(report_args, out);
    if (bench_cmd->parsed()) return do_bench(bench_args, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace sonovib::cli
