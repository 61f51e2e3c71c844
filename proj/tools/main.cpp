// Copyright 2026 The OmniEvent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "omnievent/bench.hpp"
#include "omnievent/config.hpp"
#include "omnievent/error.hpp"
#include "omnievent/event_io.hpp"
#include "omnievent/pipeline.hpp"
#include "omnievent/serial.hpp"
#include "omnievent/sfc.hpp"
#include "omnievent/synthetic.hpp"
#include "omnievent/tensorize.hpp"
#include "selfcheck.hpp"

namespace {

using namespace omnievent;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "Pipeline config file (flat key = value)");
  cmd->add_option("--set", c.overrides, "Override a config entry, key=value (repeatable)");
  cmd->add_option("--seed", c.seed, "Run seed (falls back to the config, then OMNIEVENT_SEED, then 0)");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
}

PipelineConfig resolve_config(const Common& c) {
  PipelineConfig cfg = c.config_path.empty() ? PipelineConfig{} : load_config(c.config_path);
  for (const auto& s : c.overrides) apply_override(cfg, s);
  if (c.seed) {
    cfg.seed = *c.seed;
  } else if (!cfg.was_set("seed")) {
    if (const char* env = std::getenv("OMNIEVENT_SEED"); env && *env) {
      try {
        apply_setting(cfg, "seed", env);
      } catch (const ConfigError& e) {
        throw ConfigError(0, fmt::format("OMNIEVENT_SEED: {}", e.what()));
      }
    }
  }
  if (c.threads) cfg.threads = *c.threads;
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  return out;
}

// Writes to `path`, or standard output when it is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_output(path);
  write(out);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

serial::BranchKind parse_branch(const std::string& s) {
  if (s == "S" || s == "s") return serial::BranchKind::kSpatial;
  if (s == "T" || s == "t") return serial::BranchKind::kTemporal;
  if (s == "ST" || s == "st") return serial::BranchKind::kSpatioTemporal;
  throw ParameterError(fmt::format("unknown branch '{}' (expected S, T or ST)", s));
}

sfc::CurveKind parse_order(const std::string& s) {
  const auto kind = sfc::parse_curve_kind(s);
  if (!kind) throw ParameterError(fmt::format("unknown curve order '{}'", s));
  return *kind;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stoull(item));
  return out;
}

// ---- subcommands ----

struct SynthArgs {
  std::string kind = "ramp";
  std::string out;
  std::size_t count = 1000;
  int direction = 1;
  double duration = 1.0;
};

int run_synth(const Common& common, const SynthArgs& a) {
  const PipelineConfig cfg = resolve_config(common);
  std::vector<Event> events;
  if (a.kind == "ramp") {
    const auto seq = synthetic::ramp_frames(cfg.geometry);
    events = synth_events(seq.frames, seq.timestamps, cfg.geometry);
  } else if (a.kind == "motion") {
    events = synthetic::motion_events(cfg.geometry, a.direction, a.count, cfg.seed);
  } else if (a.kind == "uniform") {
    events = synthetic::uniform_events(cfg.geometry, a.count, a.duration, cfg.seed);
  } else {
    throw ParameterError(fmt::format("unknown synth kind '{}'", a.kind));
  }
  if (a.out.empty() || a.out == "-") {
    write_events_csv(std::cout, events);
  } else {
    save_events(a.out, events);
  }
  std::cerr << fmt::format("synth: {} events\n", events.size());
  return 0;
}

struct FuseArgs {
  std::string in;
  std::string out;
  std::optional<int> segments;
};

int run_fuse(const Common& common, const FuseArgs& a) {
  const PipelineConfig cfg = resolve_config(common);
  const auto events = load_events(a.in);
  const auto fused = fuse(events, a.segments.value_or(cfg.segments));
  with_output(a.out, [&](std::ostream& out) { write_fused_csv(out, fused); });
  return 0;
}

struct SerializeArgs {
  std::string in;
  std::string out;
  std::string branch = "ST";
  std::string order = "hilbert";
  std::optional<int> patch;
  int shift = 5;
};

int run_serialize(const Common& common, const SerializeArgs& a) {
  const PipelineConfig cfg = resolve_config(common);
  const auto kind = parse_branch(a.branch);
  serial::BranchConfig branch = cfg.branch(kind);
  branch.orders = {parse_order(a.order)};
  if (a.patch) branch.encoder.front().patch_size = *a.patch;
  branch.validate();
  const auto events = load_events(a.in);
  const EventBatch batch = prepare_batch(events, cfg);
  const sfc::CurveOrder order{branch.orders.front(), branch.dims(), branch.bits};
  const auto ser = serial::serialize(batch, order, branch);
  const auto map = serial::make_pool_map(ser, a.shift);
  std::vector<std::size_t> patch_of(batch.size());
  for (std::size_t p = 0; p < ser.patches.size(); ++p) {
    for (std::size_t k = ser.patches[p].begin; k < ser.patches[p].end; ++k) patch_of[ser.perm[k]] = p;
  }
  with_output(a.out, [&](std::ostream& out) {
    fmt::print(out, "# branch={} order={} bits={} patch={} shift={} points={} patches={} groups={}\n",
               serial::to_string(kind), sfc::to_string(order.kind), order.bits, branch.encoder.front().patch_size,
               a.shift, batch.size(), ser.patches.size(), map.group_count());
    out << "index,code,patch,group\n";
    for (std::size_t i = 0; i < batch.size(); ++i) {
      fmt::print(out, "{},{},{},{}\n", i, ser.codes[i], patch_of[i], map.group_of[i]);
    }
  });
  return 0;
}

struct CodecArgs {
  std::string order = "hilbert";
  int dims = 2;
  int bits = 10;
  std::vector<std::string> values;
};

int run_encode(const CodecArgs& a) {
  const sfc::CurveOrder order{parse_order(a.order), a.dims, a.bits};
  order.validate();
  if (a.values.size() % static_cast<std::size_t>(a.dims) != 0) {
    throw ParameterError(fmt::format("encode expects a multiple of {} cell coordinates", a.dims));
  }
  for (std::size_t i = 0; i < a.values.size(); i += a.dims) {
    sfc::Cells cells{};
    std::string shown;
    for (int d = 0; d < a.dims; ++d) {
      cells[d] = static_cast<std::uint32_t>(std::stoul(a.values[i + d]));
      shown += (d ? " " : "") + a.values[i + d];
    }
    fmt::print("{} -> {}\n", shown, sfc::encode(cells, order));
  }
  return 0;
}

int run_decode(const CodecArgs& a) {
  const sfc::CurveOrder order{parse_order(a.order), a.dims, a.bits};
  order.validate();
  for (const auto& v : a.values) {
    const auto cells = sfc::decode(std::stoull(v), order);
    std::string shown;
    for (int d = 0; d < a.dims; ++d) shown += (d ? " " : "") + std::to_string(cells[d]);
    fmt::print("{} -> {}\n", v, shown);
  }
  return 0;
}

struct TensorizeArgs {
  std::string in;
  std::string out;
  std::string csv;
  int csv_channel = 0;
};

int run_tensorize(const Common& common, const TensorizeArgs& a) {
  const PipelineConfig cfg = resolve_config(common);
  const auto events = load_events(a.in);
  const auto tensor = tensorize(events, cfg);
  ft::save_omnx(a.out, tensor);
  if (!a.csv.empty()) {
    if (a.csv_channel < 0 || a.csv_channel >= tensor.channels) {
      throw ParameterError(fmt::format("channel {} out of range [0, {})", a.csv_channel, tensor.channels));
    }
    with_output(a.csv, [&](std::ostream& out) { ft::write_channel_csv(out, tensor, a.csv_channel); });
  }
  std::cerr << fmt::format("tensorize: {} events -> {} x {} x {} ({})\n", events.size(), tensor.height,
                           tensor.width, tensor.channels, a.out);
  return 0;
}

int run_selfcheck(const Common& common) {
  const PipelineConfig cfg = resolve_config(common);
  auto results = tools::codec_checks();
  for (auto& r : tools::gradient_checks(cfg.seed)) results.push_back(std::move(r));
  int failed = 0;
  for (const auto& r : results) {
    fmt::print("{} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
    if (!r.passed) ++failed;
  }
  fmt::print("selfcheck: {}/{} passed\n", results.size() - failed, results.size());
  return failed == 0 ? 0 : kExitFailure;
}

struct BenchArgs {
  std::string sizes = "2048,4096,8192";
  std::size_t k = 512;
  int patch = 512;
  int seeds = 1;
  bool sweep = false;
  std::size_t sweep_n = 8192;
  std::string csv;
};

int run_bench(const Common& common, const BenchArgs& a) {
  const PipelineConfig cfg = resolve_config(common);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < a.seeds; ++i) seeds.push_back(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
  bench::BenchOptions options;
  options.threads = cfg.threads;
  bench::BenchReport report;
  if (a.sweep) {
    report = bench::patch_size_sweep(a.sweep_n, bench::default_patch_sizes(), seeds.front());
  } else {
    report = bench::bench_patch_vs_knn(parse_sizes(a.sizes), a.k, a.patch, seeds, options);
  }
  report.write_table(std::cout);
  if (!a.csv.empty()) with_output(a.csv, [&](std::ostream& out) { report.write_csv(out); });
  return 0;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

int run_info(const Common& common) {
  const PipelineConfig cfg = resolve_config(common);
  fmt::print("omnievent {}\n", OMNIEVENT_VERSION);
  fmt::print("geometry {}x{} tau={} segments={} samples={} seed={}\n", cfg.geometry.height, cfg.geometry.width,
             cfg.geometry.tau, cfg.segments, cfg.samples, cfg.seed);
  fmt::print("receptive_field(512, 5, 2) = {}\n", serial::receptive_field(512, 5, 2));
  for (auto kind : {serial::BranchKind::kSpatial, serial::BranchKind::kTemporal, serial::BranchKind::kSpatioTemporal}) {
    const auto& b = cfg.branch(kind);
    const auto p = static_cast<std::uint64_t>(b.encoder.front().patch_size);
    std::string orders;
    for (std::size_t i = 0; i < b.orders.size(); ++i) orders += (i ? "," : "") + std::string(sfc::to_string(b.orders[i]));
    fmt::print("branch {:<2} dims={} orders={} patch={} shifts=[{}] receptive_field={}\n", serial::to_string(kind),
               b.dims(), orders, p, join(b.pool_shifts), serial::receptive_field(p, b.pool_shifts));
  }
  const auto sta = cfg.sta();
  fmt::print("sta channels={} length={} rounds={} fc_hidden={} out_channels={}\n", sta.channels, sta.length,
             sta.rounds, sta.fc_hidden, sta.out_channels());
  fmt::print("tensor {} x {} x {}\n", cfg.geometry.height, cfg.geometry.width, sta.out_channels() + ft::kStatChannels);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OmniEvent: event-stream serialization, fusion and tensorization"};
  app.require_subcommand(1);

  Common common;
  SynthArgs synth_args;
  FuseArgs fuse_args;
  SerializeArgs ser_args;
  CodecArgs codec_args;
  TensorizeArgs tensor_args;
  BenchArgs bench_args;

  auto* synth = app.add_subcommand("synth", "Generate synthetic events (ramp, motion or uniform)");
  add_common(synth, common);
  synth->add_option("--kind", synth_args.kind, "ramp | motion | uniform")->check(CLI::IsMember({"ramp", "motion", "uniform"}));
  synth->add_option("-o,--out", synth_args.out, "Output file (.csv, or .evt/.bin for EVT1); stdout if omitted");
  synth->add_option("--count", synth_args.count, "Event count for motion/uniform");
  synth->add_option("--direction", synth_args.direction, "Motion direction (+1 or -1)");
  synth->add_option("--duration", synth_args.duration, "Stream duration in seconds (uniform)");

  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse events per pixel and temporal segment");
  add_common(fuse_cmd, common);
  fuse_cmd->add_option("-i,--in", fuse_args.in, "Event file (CSV or EVT1)")->required();
  fuse_cmd->add_option("-o,--out", fuse_args.out, "Fused CSV output; stdout if omitted");
  fuse_cmd->add_option("--T,-T", fuse_args.segments, "Temporal segments (overrides the config)")->check(CLI::PositiveNumber);

  auto* ser = app.add_subcommand("serialize", "Dump per-point curve code, patch id and pool group id");
  add_common(ser, common);
  ser->add_option("-i,--in", ser_args.in, "Event file (CSV or EVT1)")->required();
  ser->add_option("-o,--out", ser_args.out, "Output; stdout if omitted");
  ser->add_option("--branch", ser_args.branch, "S | T | ST");
  ser->add_option("--order", ser_args.order, "hilbert | hilbert-trans | z | z-trans");
  ser->add_option("--patch", ser_args.patch, "Patch size (default: first encoder stage)");
  ser->add_option("--shift", ser_args.shift, "Pooling shift y for the group column")->check(CLI::PositiveNumber);

  auto* enc = app.add_subcommand("encode", "Encode cell coordinates to curve codes");
  auto* dec = app.add_subcommand("decode", "Decode curve codes to cell coordinates");
  for (auto* cmd : {enc, dec}) {
    cmd->add_option("--order", codec_args.order, "hilbert | hilbert-trans | z | z-trans");
    cmd->add_option("--dims", codec_args.dims, "Dimensions (1-3)");
    cmd->add_option("--bits", codec_args.bits, "Bits per axis");
  }
  enc->add_option("cells", codec_args.values, "Cell coordinates, dims values per point")->required();
  dec->add_option("codes", codec_args.values, "Curve codes")->required();

  auto* tz = app.add_subcommand("tensorize", "Run the full pipeline and write an OMNX tensor");
  add_common(tz, common);
  tz->add_option("-i,--in", tensor_args.in, "Event file (CSV or EVT1)")->required();
  tz->add_option("-o,--out", tensor_args.out, "OMNX output file")->required();
  tz->add_option("--csv", tensor_args.csv, "Also write one channel as an H x W CSV");
  tz->add_option("--csv-channel", tensor_args.csv_channel, "Channel for --csv");

  auto* check = app.add_subcommand("selfcheck", "Codec bijection and gradient checks");
  add_common(check, common);

  auto* bench_cmd = app.add_subcommand("bench", "Curve patches versus brute-force KNN");
  add_common(bench_cmd, common);
  bench_cmd->add_option("--sizes", bench_args.sizes, "Comma-separated point counts");
  bench_cmd->add_option("-k,--k", bench_args.k, "KNN neighbor count");
  bench_cmd->add_option("--patch", bench_args.patch, "Patch size");
  bench_cmd->add_option("--seeds", bench_args.seeds, "Number of data seeds")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--sweep", bench_args.sweep, "Patch-size sweep 16..1024 instead");
  bench_cmd->add_option("--sweep-n", bench_args.sweep_n, "Point count for the sweep");
  bench_cmd->add_option("--csv", bench_args.csv, "Also write the report as CSV");

  auto* info = app.add_subcommand("info", "Print the resolved configuration and receptive fields");
  add_common(info, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth->parsed()) return run_synth(common, synth_args);
    if (fuse_cmd->parsed()) return run_fuse(common, fuse_args);
    if (ser->parsed()) return run_serialize(common, ser_args);
    if (enc->parsed()) return run_encode(codec_args);
    if (dec->parsed()) return run_decode(codec_args);
    if (tz->parsed()) return run_tensorize(common, tensor_args);
    if (check->parsed()) return run_selfcheck(common);
    if (bench_cmd->parsed()) return run_bench(common, bench_args);
    if (info->parsed()) return run_info(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
