// Copyright 2026 The hcvx Authors.
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


// hcvx command-line tool. Talks to the library only through the C interface.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcvx/hcvx.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitCertificate = 3;
constexpr int kExitSolver = 4;

struct Flags {
  double tol_rank = 1e-8;
  double tol_feas = 1e-6;
  double gap = 1e-8;
  int max_iter = 200;
  double grid_h = 1e-2;
  uint64_t seed = 0;
  int samples = 1000;
  std::string force_kind = "auto";
  std::string report_format = "text";
  bool tol_feas_given = false;
};

int exit_for_status(hcvx_status s) {
  if (s == HCVX_OK) return kExitOk;
  if (s == HCVX_ERR_PARSE) return kExitParse;
  if (s == HCVX_ERR_SOLVER) return kExitSolver;
  return kExitCertificate;
}

std::string error_line(hcvx_status s) {
  return std::string("error (") + hcvx_status_name(s) + "): " + hcvx_last_error();
}

// Owns the C handles for one invocation.
class Session {
 public:
  Session() : opts_(hcvx_options_create()) {}
  ~Session() { hcvx_options_free(opts_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  hcvx_status configure(const Flags& f) {
    hcvx_status s = HCVX_OK;
    auto step = [&](hcvx_status r) {
      if (s == HCVX_OK) s = r;
    };
    step(hcvx_options_set_tol_rank(opts_, f.tol_rank));
    step(hcvx_options_set_tol_feas(opts_, f.tol_feas));
    step(hcvx_options_set_gap(opts_, f.gap));
    step(hcvx_options_set_max_iter(opts_, f.max_iter));
    step(hcvx_options_set_grid_h(opts_, f.grid_h));
    step(hcvx_options_set_seed(opts_, f.seed));
    step(hcvx_options_set_samples(opts_, f.samples));
    step(hcvx_options_set_force_kind(opts_, f.force_kind.c_str()));
    if (f.tol_feas_given) step(hcvx_options_set_oracle_feas_tol(opts_, f.tol_feas));
    return s;
  }

  const hcvx_options* options() const { return opts_; }

 private:
  hcvx_options* opts_;
};

using Command = hcvx_status (*)(const hcvx_instance*, const hcvx_options*, hcvx_report**);

struct Outcome {
  int exit_code = kExitOk;
  std::string out;  // stdout
  std::string err;  // stderr
  std::string kind;
  double value = NAN;
  std::string verdict;
  double ratio = NAN;
};

Outcome run_file(const std::string& path, Command cmd, const Flags& flags) {
  Outcome o;
  Session session;
  if (hcvx_status s = session.configure(flags); s != HCVX_OK) {
    o.exit_code = kExitParse;
    o.err = error_line(s) + "\n";
    return o;
  }
  hcvx_instance* inst = nullptr;
  if (hcvx_status s = hcvx_instance_read(path.c_str(), &inst); s != HCVX_OK) {
    o.exit_code = kExitParse;
    o.err = path + ": " + error_line(s) + "\n";
    o.verdict = "parse error";
    return o;
  }
  o.kind = hcvx_instance_kind(inst);
  hcvx_report* rep = nullptr;
  const hcvx_status s = cmd(inst, session.options(), &rep);
  hcvx_instance_free(inst);
  if (s != HCVX_OK) {
    o.exit_code = exit_for_status(s);
    o.err = path + ": " + error_line(s) + "\n";
    o.verdict = hcvx_last_error_code();
    return o;
  }
  o.exit_code = hcvx_report_exit_code(rep);
  o.out = flags.report_format == "structured" ? hcvx_report_json(rep) : hcvx_report_text(rep);
  if (!o.out.empty() && o.out.back() != '\n') o.out += '\n';
  o.value = hcvx_report_value(rep);
  o.verdict = hcvx_report_verdict(rep);
  o.ratio = hcvx_report_ratio(rep);
  hcvx_report_free(rep);
  return o;
}

int emit(const Outcome& o) {
  std::fputs(o.out.c_str(), stdout);
  std::fputs(o.err.c_str(), stderr);
  return o.exit_code;
}

int reduce_ilp(const std::string& path, const std::string& output) {
  hcvx_instance* inst = nullptr;
  if (hcvx_status s = hcvx_instance_read(path.c_str(), &inst); s != HCVX_OK) {
    std::cerr << path << ": " << error_line(s) << "\n";
    return kExitParse;
  }
  hcvx_instance* reduced = nullptr;
  hcvx_status s = hcvx_reduce_ilp(inst, &reduced);
  hcvx_instance_free(inst);
  if (s != HCVX_OK) {
    std::cerr << path << ": " << error_line(s) << "\n";
    return exit_for_status(s);
  }
  char* text = nullptr;
  s = hcvx_instance_write(reduced, &text);
  hcvx_instance_free(reduced);
  if (s != HCVX_OK) {
    std::cerr << error_line(s) << "\n";
    return exit_for_status(s);
  }
  int rc = kExitOk;
  if (output.empty() || output == "-") {
    std::fputs(text, stdout);
  } else {
    std::ofstream f(output, std::ios::binary);
    f << text;
    if (!f) {
      std::cerr << "error: cannot write " << output << "\n";
      rc = kExitCertificate;
    }
  }
  hcvx_string_free(text);
  return rc;
}

std::string fmt_number(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Solves every *.json file of `dir` (sorted by name) and prints one summary
// row per file. Worst exit code wins.
int batch(const std::string& dir, const Flags& flags, int jobs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    std::cerr << "error: " << dir << " is not a directory\n";
    return kExitParse;
  }
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") {
      files.push_back(e.path().string());
    }
  }
  std::sort(files.begin(), files.end());

  struct Row {
    Outcome outcome;
    double seconds = 0.0;
  };
  auto work = [&](const std::string& path) {
    const auto t0 = std::chrono::steady_clock::now();
    Row r{run_file(path, hcvx_solve, flags), 0.0};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };
  std::vector<Row> rows(files.size());
  for (std::size_t start = 0; start < files.size(); start += jobs) {
    const std::size_t stop = std::min(files.size(), start + static_cast<std::size_t>(jobs));
    std::vector<std::future<Row>> pending;
    for (std::size_t k = start; k < stop; ++k) {
      pending.push_back(std::async(std::launch::async, work, files[k]));
    }
    for (std::size_t k = start; k < stop; ++k) rows[k] = pending[k - start].get();
  }

  int worst = kExitOk;
  if (flags.report_format == "structured") {
    std::cout << "[\n";
    for (std::size_t k = 0; k < files.size(); ++k) {
      const Outcome& o = rows[k].outcome;
      std::cout << "  {\"file\": \"" << fs::path(files[k]).filename().string()
                << "\", \"kind\": \"" << o.kind << "\", \"value\": "
                << (std::isnan(o.value) ? "null" : fmt_number(o.value))
                << ", \"certificate\": \"" << o.verdict << "\", \"ratio\": "
                << (std::isnan(o.ratio) ? "null" : fmt_number(o.ratio))
                << ", \"exit\": " << o.exit_code << ", \"seconds\": "
                << fmt_number(rows[k].seconds) << "}" << (k + 1 < files.size() ? "," : "")
                << "\n";
    }
    std::cout << "]\n";
  } else {
    std::printf("%-28s %-6s %18s  %-28s %10s %4s %9s\n", "file", "kind", "value",
                "certificate", "ratio", "exit", "time[s]");
    for (std::size_t k = 0; k < files.size(); ++k) {
      const Outcome& o = rows[k].outcome;
      std::printf("%-28s %-6s %18s  %-28s %10s %4d %9.3f\n",
                  fs::path(files[k]).filename().string().c_str(), o.kind.c_str(),
                  fmt_number(o.value).c_str(), o.verdict.c_str(), fmt_number(o.ratio).c_str(),
                  o.exit_code, rows[k].seconds);
    }
  }
  for (std::size_t k = 0; k < files.size(); ++k) {
    std::fputs(rows[k].outcome.err.c_str(), stderr);
    worst = std::max(worst, rows[k].outcome.exit_code);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order cone relaxations of uniform and structured QCQPs"};
  app.set_version_flag("--version", std::string(hcvx_version()));
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--tol-rank", flags.tol_rank, "relative rank cutoff")->check(CLI::PositiveNumber);
  auto* tol_feas = app.add_option("--tol-feas", flags.tol_feas, "feasibility tolerance")
                       ->check(CLI::PositiveNumber);
  app.add_option("--gap", flags.gap, "cone solver gap tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", flags.max_iter, "cone solver iteration limit")
      ->check(CLI::PositiveNumber);
  app.add_option("--grid-h", flags.grid_h, "oracle grid step")->check(CLI::PositiveNumber);
  app.add_option("--seed", flags.seed, "oracle sampling seed");
  app.add_option("--samples", flags.samples, "oracle random samples")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--force-kind", flags.force_kind, "relaxation to build")
      ->check(CLI::IsMember({"auto", "socp", "cr", "cr2"}));
  app.add_option("--report-format", flags.report_format, "output format")
      ->check(CLI::IsMember({"text", "structured"}));

  std::string file;
  std::string output;
  std::string dir;
  int jobs = 1;

  auto* solve = app.add_subcommand("solve", "relax, certify exactness and recover");
  solve->add_option("file", file)->required();
  auto* approx = app.add_subcommand("approx", "approximate solution with ratio guarantee");
  approx->add_option("file", file)->required();
  auto* cheby = app.add_subcommand("cheby", "Chebyshev center of a ball intersection");
  cheby->add_option("file", file)->required();
  auto* oracle = app.add_subcommand("oracle", "brute-force reference value");
  oracle->add_option("file", file)->required();
  auto* reduce = app.add_subcommand("reduce-ilp", "binary ILP to uniform QCQP");
  reduce->add_option("file", file)->required();
  reduce->add_option("-o,--output", output, "output file (default stdout)");
  auto* batch_cmd = app.add_subcommand("batch", "solve every instance of a directory");
  batch_cmd->add_option("dir", dir)->required();
  batch_cmd->add_option("-j,--jobs", jobs, "files solved concurrently")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }
  flags.tol_feas_given = tol_feas->count() > 0;

  if (*reduce) return reduce_ilp(file, output);
  if (*batch_cmd) return batch(dir, flags, jobs);
  Command cmd = hcvx_solve;
  if (*approx) cmd = hcvx_approx;
  if (*cheby) cmd = hcvx_cheby;
  if (*oracle) cmd = hcvx_oracle;
  return emit(run_file(file, cmd, flags));
}
