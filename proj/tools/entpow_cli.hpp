// Copyright 2026 The entpow Authors
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

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "entpow/entpow.hpp"

namespace entpow::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kValidation = 2, kIo = 3, kResource = 4 };

/// Record written next to every output file. Replaying it (entpow replay)
/// re-runs the command with identical parameters.
struct RunManifest {
  std::string command;
  std::size_t d1 = 1;
  std::size_t d2 = 1;
  SeedSpec seed{};
  std::map<std::string, std::string> parameters;  // flag name -> value
  std::string tool_version = kToolVersion;
  double wall_time = 0.0;  // seconds

  nlohmann::json to_json() const {
    return {{"command", command},
            {"part", {{"d1", d1}, {"d2", d2}}},
            {"seed", {{"master_seed", seed.master_seed}, {"stream_index", seed.stream_index}}},
            {"parameters", parameters},
            {"tool_version", tool_version},
            {"wall_time", wall_time}};
  }

  static RunManifest from_json(const nlohmann::json& j) {
    RunManifest m;
    try {
      m.command = j.at("command").get<std::string>();
      m.d1 = j.at("part").at("d1").get<std::size_t>();
      m.d2 = j.at("part").at("d2").get<std::size_t>();
      m.seed.master_seed = j.at("seed").at("master_seed").get<std::uint64_t>();
      m.seed.stream_index = j.at("seed").at("stream_index").get<std::uint64_t>();
      m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
      m.tool_version = j.at("tool_version").get<std::string>();
      m.wall_time = j.at("wall_time").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed manifest: ") + e.what());
    }
    return m;
  }
};

inline std::filesystem::path manifest_path(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".manifest.json");
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("failed writing " + path.string());
}

inline void write_manifest(const std::filesystem::path& out, const RunManifest& m) {
  write_text(manifest_path(out), m.to_json().dump(2) + "\n");
}

inline RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return RunManifest::from_json(j);
}

/// Every flag of every command. Unused fields are ignored per command.
struct Options {
  std::size_t d1 = 2;
  std::size_t d2 = 2;
  std::optional<std::size_t> d;
  std::string gate = "identity";
  std::string file;
  std::string table;
  std::string method = "closed";
  std::size_t samples = 20000;
  std::size_t bins = 100;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::size_t restarts = 20;
  std::size_t iters = 20000;
  double step = 0.3;
  double decay = 0.995;
  std::string out;
  std::size_t threads = 0;

  Bipartition part() const { return d ? Bipartition(*d, *d) : Bipartition(d1, d2); }
  SeedSpec seed_spec() const { return {seed, stream}; }
};

inline std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// Flags recorded in a manifest for each command; output-independent flags
// such as --threads are left out.
inline std::map<std::string, std::string> parameters_for(const std::string& command, const Options& o) {
  const Bipartition part = o.part();
  std::map<std::string, std::string> p{{"d1", std::to_string(part.d1())},
                                       {"d2", std::to_string(part.d2())},
                                       {"seed", std::to_string(o.seed)},
                                       {"stream", std::to_string(o.stream)}};
  if (command == "eval" || command == "mc") {
    if (!o.file.empty()) {
      p["file"] = o.file;
    } else {
      p["gate"] = o.gate;
      if (!o.table.empty()) p["table"] = o.table;
    }
  }
  if (command == "eval") p["method"] = o.method;
  if (command == "mc" || command == "dist") p["samples"] = std::to_string(o.samples);
  if (command == "dist") p["bins"] = std::to_string(o.bins);
  if (command == "optimize") {
    p["restarts"] = std::to_string(o.restarts);
    p["iters"] = std::to_string(o.iters);
    p["step"] = format_double(o.step);
    p["decay"] = format_double(o.decay);
  }
  return p;
}

inline std::vector<std::size_t> parse_table(const std::string& text) {
  std::vector<std::size_t> table;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      table.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("--table: '" + item + "' is not a nonnegative integer");
    }
  }
  return table;
}

/// Gate named by --gate (or loaded from --file).
inline UnitaryGate resolve_gate(const Options& o) {
  if (!o.file.empty()) return load_gate(o.file);
  const Bipartition part = o.part();
  GateSpec spec;
  spec.d1 = part.d1();
  spec.d2 = part.d2();
  const std::string& g = o.gate;
  if (g == "identity") {
    spec.kind = GateKind::identity;
  } else if (g == "swap") {
    spec.kind = GateKind::swap;
  } else if (g == "cnot") {
    spec.kind = GateKind::cnot;
    spec.d1 = spec.d2 = 2;
  } else if (g == "controlled" || g == "controlled-clock") {
    spec.kind = GateKind::controlled_family;
  } else if (g == "controlled-shift") {
    spec.kind = GateKind::controlled_family;
    spec.family = ControlledFamily::shift;
  } else if (g == "additive-perm") {
    spec.kind = GateKind::additive_permutation;
  } else if (g == "perm") {
    spec.kind = GateKind::basis_permutation;
    spec.table = parse_table(o.table);
  } else if (g == "bilocal-hadamard") {
    if (spec.d1 != 2 || spec.d2 != 2) throw ValidationError("bilocal-hadamard is defined on (2,2) only");
    spec.kind = GateKind::bilocal_product;
    spec.components = {hadamard(), hadamard()};
  } else if (g == "haar") {
    return UnitaryGate(haar_unitary(part.dim(), o.seed_spec()), part);
  } else {
    throw ValidationError("unknown gate '" + g +
                          "' (expected identity, swap, cnot, controlled, controlled-shift, additive-perm, "
                          "perm, bilocal-hadamard, haar)");
  }
  return make_gate(spec);
}

inline nlohmann::json report_to_json(const EntanglingPowerReport& r) {
  nlohmann::json j{{"value", r.value},         {"i0", r.i0},
                   {"i1", r.i1},               {"mean_haar", r.mean_haar},
                   {"upper_bound", r.upper_bound}, {"gap_to_bound", r.gap_to_bound()},
                   {"method", std::string(to_string(r.method))}};
  if (r.mc_samples) j["mc_samples"] = *r.mc_samples;
  if (r.mc_stderr) j["mc_stderr"] = *r.mc_stderr;
  return j;
}

inline void print_report(std::ostream& os, const EntanglingPowerReport& r) {
  os << std::setprecision(12);
  os << "method        " << to_string(r.method) << '\n'
     << "value         " << r.value << '\n'
     << "I_0           " << r.i0 << '\n'
     << "I_1           " << r.i1 << '\n'
     << "haar_mean     " << r.mean_haar << '\n'
     << "upper_bound   " << r.upper_bound << '\n'
     << "gap_to_bound  " << r.gap_to_bound() << '\n';
}

class Runner {
 public:
  explicit Runner(std::ostream& out) : out_(out) {}

  int cmd_eval(const Options& o) {
    const UnitaryGate u = resolve_gate(o);
    out_ << "bipartition   " << u.part().str() << '\n';
    nlohmann::json reports = nlohmann::json::array();
    if (o.method != "closed" && o.method != "oracle" && o.method != "both") {
      throw ValidationError("--method must be closed, oracle or both");
    }
    if (o.method == "closed" || o.method == "both") {
      const auto r = ep_closed(u);
      print_report(out_, r);
      reports.push_back(report_to_json(r));
    }
    if (o.method == "oracle" || o.method == "both") {
      const auto r = ep_dense_oracle(u);
      print_report(out_, r);
      reports.push_back(report_to_json(r));
    }
    if (!o.out.empty()) {
      nlohmann::json doc{{"part", {{"d1", u.part().d1()}, {"d2", u.part().d2()}}}, {"reports", reports}};
      emit("eval", o, doc.dump(2) + "\n");
    }
    return kOk;
  }

  int cmd_mc(const Options& o) {
    const UnitaryGate u = resolve_gate(o);
    const auto r = ep_monte_carlo(u, o.samples, o.seed_spec(), o.threads);
    const auto closed = ep_closed(u);
    out_ << std::setprecision(12);
    out_ << "bipartition   " << u.part().str() << '\n'
         << "samples       " << o.samples << '\n'
         << "estimate      " << r.value << " +- " << *r.mc_stderr << '\n'
         << "closed_form   " << closed.value << '\n'
         << "deviation     " << (r.value - closed.value) << '\n';
    if (!o.out.empty()) {
      nlohmann::json doc{{"monte_carlo", report_to_json(r)}, {"closed_form", report_to_json(closed)}};
      emit("mc", o, doc.dump(2) + "\n");
    }
    return kOk;
  }

  int cmd_dist(const Options& o) {
    const Bipartition part = o.part();
    const Histogram h = sample_q(part, o.samples, o.bins, o.seed_spec(), o.threads);
    std::ostringstream csv;
    csv << std::setprecision(17) << "bin_left,bin_right,count,density\n";
    for (std::size_t k = 0; k < h.n_bins(); ++k) {
      csv << h.bin_edges[k] << ',' << h.bin_edges[k + 1] << ',' << h.counts[k] << ',' << h.density(k) << '\n';
    }
    if (o.out.empty()) {
      out_ << csv.str();
      return kOk;
    }
    emit("dist", o, csv.str());
    out_ << std::setprecision(12);
    out_ << "bipartition     " << part.str() << '\n'
         << "samples         " << h.n_samples << '\n'
         << "empirical_mean  " << h.empirical_mean << " (sigma of mean "
         << h.empirical_stddev / std::sqrt(static_cast<double>(h.n_samples)) << ")\n"
         << "haar_mean       " << haar_mean(part) << '\n'
         << "empirical_max   " << h.empirical_max << '\n'
         << "upper_bound     " << upper_bound(part) << '\n'
         << "wrote           " << o.out << '\n';
    return kOk;
  }

  int cmd_optimize(const Options& o) {
    OptimizeConfig cfg;
    cfg.part = o.part();
    cfg.restarts = o.restarts;
    cfg.max_iters = o.iters;
    cfg.initial_step = o.step;
    cfg.step_decay = o.decay;
    cfg.seed = o.seed_spec();
    cfg.threads = o.threads;
    const OptimizeResult r = maximize_ep(cfg);
    out_ << std::setprecision(12);
    out_ << "bipartition   " << cfg.part.str() << '\n'
         << "best_value    " << r.best_value << '\n'
         << "upper_bound   " << r.bound << '\n'
         << "gap_to_bound  " << r.gap_to_bound << '\n'
         << "iterations    " << r.iterations_used << '\n'
         << "best_restart  " << r.best_restart << '\n';
    if (!o.out.empty()) {
      emit("optimize", o, gate_to_json(r.best_gate).dump(1) + "\n");
      out_ << "wrote         " << o.out << '\n';
    }
    return kOk;
  }

  int cmd_permutations(const Options& o) {
    const Bipartition part = o.part();
    const PermutationMax best = exhaustive_permutation_max(part);
    out_ << std::setprecision(12) << "bipartition   " << part.str() << '\n'
         << "max_value     " << best.value << '\n'
         << "upper_bound   " << upper_bound(part) << '\n'
         << "table        ";
    for (std::size_t v : best.table) out_ << ' ' << v;
    out_ << '\n';
    return kOk;
  }

  int cmd_verify(const Options& o) {
    std::optional<UnitaryGate> user;
    if (!o.file.empty()) user = load_gate(o.file);
    VerifyOptions vopt;
    vopt.seed = o.seed_spec();
    const VerifyReport report = run_identity_suite(vopt, user);
    std::size_t failed = 0;
    for (const auto& c : report.checks) {
      out_ << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "  (" << c.detail << ")\n";
      if (!c.passed) ++failed;
    }
    out_ << report.checks.size() - failed << "/" << report.checks.size() << " identities hold\n";
    return report.all_passed() ? kOk : kCheckFailed;
  }

  int dispatch(const std::string& command, const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    started_ = start;
    if (command == "eval") return cmd_eval(o);
    if (command == "mc") return cmd_mc(o);
    if (command == "dist") return cmd_dist(o);
    if (command == "optimize") return cmd_optimize(o);
    if (command == "permutations") return cmd_permutations(o);
    if (command == "verify") return cmd_verify(o);
    throw ValidationError("unknown command '" + command + "'");
  }

 private:
  // Writes an output file plus its manifest.
  void emit(const std::string& command, const Options& o, const std::string& content) {
    write_text(o.out, content);
    RunManifest m;
    m.command = command;
    m.d1 = o.part().d1();
    m.d2 = o.part().d2();
    m.seed = o.seed_spec();
    m.parameters = parameters_for(command, o);
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    write_manifest(o.out, m);
  }

  std::ostream& out_;
  std::chrono::steady_clock::time_point started_{};
};

namespace detail {

inline void add_part_flags(CLI::App* sub, Options& o) {
  sub->add_option("--d1", o.d1, "dimension of the first factor")->check(CLI::PositiveNumber);
  sub->add_option("--d2", o.d2, "dimension of the second factor")->check(CLI::PositiveNumber);
  sub->add_option("--d", o.d, "set d1 = d2 = d")->check(CLI::PositiveNumber);
}

inline void add_seed_flags(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--stream", o.stream, "stream index under the master seed");
  sub->add_option("--threads", o.threads, "worker threads (0: ENTPOW_THREADS or hardware)");
}

inline void add_gate_flags(CLI::App* sub, Options& o) {
  sub->add_option("--gate", o.gate,
                  "identity | swap | cnot | controlled | controlled-shift | additive-perm | perm | "
                  "bilocal-hadamard | haar");
  sub->add_option("--file", o.file, "gate JSON file (overrides --gate)");
  sub->add_option("--table", o.table, "comma-separated basis permutation for --gate perm");
}

}  // namespace detail

/// Parses and runs one command line (args excludes the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"entpow: entangling power of bipartite unitaries"};
  app.require_subcommand(1);
  Options o;
  std::string manifest_file;

  auto* eval = app.add_subcommand("eval", "closed-form (or dense-operator) entangling power of a gate");
  detail::add_part_flags(eval, o);
  detail::add_gate_flags(eval, o);
  detail::add_seed_flags(eval, o);
  eval->add_option("--method", o.method, "closed | oracle | both");
  eval->add_option("--out", o.out, "write a JSON report here");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate over random product inputs");
  detail::add_part_flags(mc, o);
  detail::add_gate_flags(mc, o);
  detail::add_seed_flags(mc, o);
  mc->add_option("--samples", o.samples, "number of product-state samples")->check(CLI::PositiveNumber);
  mc->add_option("--out", o.out, "write a JSON report here");

  auto* dist = app.add_subcommand("dist", "histogram of e over Haar-random unitaries (CSV)");
  detail::add_part_flags(dist, o);
  detail::add_seed_flags(dist, o);
  dist->add_option("--samples", o.samples, "number of Haar unitaries")->check(CLI::PositiveNumber);
  dist->add_option("--bins", o.bins, "number of bins on [0, bound]");
  dist->add_option("--out", o.out, "CSV path (stdout if omitted)");

  auto* opt = app.add_subcommand("optimize", "maximize e over the unitary group");
  detail::add_part_flags(opt, o);
  detail::add_seed_flags(opt, o);
  opt->add_option("--restarts", o.restarts, "independent restarts")->check(CLI::PositiveNumber);
  opt->add_option("--iters", o.iters, "iterations per restart")->check(CLI::PositiveNumber);
  opt->add_option("--step", o.step, "initial step size");
  opt->add_option("--decay", o.decay, "step decay per rejection");
  opt->add_option("--out", o.out, "write the best gate as JSON here");

  auto* perms = app.add_subcommand("permutations", "exhaustive maximum over basis permutations");
  detail::add_part_flags(perms, o);

  auto* verify = app.add_subcommand("verify", "run the analytic identity suite");
  verify->add_option("--file", o.file, "also validate and check this gate file");
  verify->add_option("--seed", o.seed, "seed for the random test gates");

  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_file, "manifest JSON")->required();
  replay->add_option("--out", o.out, "output path (defaults to the recorded one)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    Runner runner(out);
    if (replay->parsed()) {
      const RunManifest m = read_manifest(manifest_file);
      std::vector<std::string> replay_args{m.command};
      for (const auto& [key, value] : m.parameters) {
        replay_args.push_back("--" + key);
        replay_args.push_back(value);
      }
      const std::string recorded_out =
          manifest_file.size() > 14 ? manifest_file.substr(0, manifest_file.size() - 14) : "";
      replay_args.push_back("--out");
      replay_args.push_back(o.out.empty() ? recorded_out : o.out);
      return run(replay_args, out, err);
    }
    for (auto* sub : app.get_subcommands()) {
      if (o.d && (sub->count("--d1") || sub->count("--d2"))) {
        throw ValidationError("--d cannot be combined with --d1/--d2");
      }
      return runner.dispatch(sub->get_name(), o);
    }
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

}  // namespace entpow::cli
