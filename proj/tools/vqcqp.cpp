// Copyright 2026 The vqcqp Authors.
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


// vqcqp: generate instances, run solver campaigns, compare reports.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vqcqp/vqcqp.hpp"

namespace fs = std::filesystem;
using namespace vqcqp;

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 2,
  kInfeasible = 3,
  kNotConverged = 4,
  kIo = 5,
  kSchema = 6,
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
T parse_field(const std::string& text, const std::string& what) {
  T value{};
  try {
    std::size_t used = 0;
    if constexpr (std::is_floating_point_v<T>) {
      value = std::stod(text, &used);
    } else {
      value = static_cast<T>(std::stoull(text, &used));
    }
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ParameterError("bad " + what + " '" + text + "'");
  }
  return value;
}

struct Source {
  ProblemDocument doc;
  std::string instance;
};

// "maxcut:N:P:SEED", "opf:N:SEED[:MODE]" or a problem file.
Source load_source(const std::string& spec) {
  const auto parts = split(spec, ':');
  Source s;
  if (parts[0] == "maxcut" && parts.size() == 4) {
    const auto n = parse_field<std::size_t>(parts[1], "N");
    const auto p = parse_field<double>(parts[2], "P");
    const auto seed = parse_field<std::uint64_t>(parts[3], "seed");
    s.doc = maxcut_document(gen_gnp_graph(n, p, seed), p, seed);
  } else if (parts[0] == "opf" && (parts.size() == 3 || parts.size() == 4)) {
    const auto n = parse_field<std::size_t>(parts[1], "N");
    const auto seed = parse_field<std::uint64_t>(parts[2], "seed");
    const AdmittanceMode mode = parts.size() == 4 ? admittance_mode_from_string(parts[3])
                                                  : AdmittanceMode::complex;
    s.doc = opf_document(gen_opf(n, seed, mode), seed);
  } else {
    s.doc = problem_from_json(read_json_file(spec));
  }
  s.instance = instance_id(s.doc.metadata, fs::path(spec).stem().string());
  return s;
}

int status_code(const CampaignResult& c) {
  int code = kOk;
  for (const auto& m : c.methods) {
    const std::string status = campaign_status(m);
    if (status == "infeasible_start") code = kInfeasible;
    if (status == "not_converged" && code == kOk) code = kNotConverged;
  }
  return code;
}

// Report files named on the command line; directories contribute every
// *_best.json below them.
std::vector<fs::path> collect_reports(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        const std::string name = e.path().filename().string();
        if (e.is_regular_file() && name.size() > 10 &&
            name.ends_with("_best.json")) {
          found.push_back(e.path());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid variational QCQP solver"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "TOML file with default option values; flags win");
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random benchmark instance");
  std::string kind;
  std::size_t gen_n = 0;
  double gen_p = 0.25;
  std::uint64_t gen_seed = 0;
  std::string gen_mode = "complex";
  std::string gen_out;
  gen->add_option("kind", kind, "maxcut or opf")
      ->required()
      ->check(CLI::IsMember({"maxcut", "opf"}));
  gen->add_option("--n", gen_n, "Vertices (maxcut) or buses (opf)")->required();
  gen->add_option("--p", gen_p, "Edge probability (maxcut)")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--mode", gen_mode, "Admittances for opf: real or complex")
      ->check(CLI::IsMember({"real", "complex"}))
      ->capture_default_str();
  gen->add_option("--out,-o", gen_out, "Output file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Run solver campaigns");
  std::vector<std::string> sources;
  std::string method = "both";
  CampaignConfig cfg;
  std::string out_dir;
  bool quiet = false;
  solve->add_option("sources", sources,
                    "Problem files or generator specs maxcut:N:P:SEED, opf:N:SEED[:MODE]")
      ->required();
  solve->add_option("--method", method, "hybrid, classical or both")
      ->check(CLI::IsMember({"hybrid", "classical", "both"}))
      ->capture_default_str();
  solve->add_option("--layers", cfg.hybrid.layers, "Ansatz layers")->capture_default_str();
  solve->add_option("--shots", cfg.hybrid.shots, "Shots per circuit (0 = exact)")
      ->capture_default_str();
  solve->add_option("--seed", cfg.seed, "Seed of restart 0")->capture_default_str();
  solve->add_option("--restarts", cfg.restarts, "Restarts per method")->capture_default_str();
  solve->add_option("--eps", cfg.ipm.eps, "Final tolerance on R0")->capture_default_str();
  solve->add_option("--mu0", cfg.ipm.mu0, "Initial barrier parameter")->capture_default_str();
  solve->add_option("--cmu", cfg.ipm.c_mu, "Barrier contraction factor")->capture_default_str();
  solve->add_option("--ceps", cfg.ipm.c_eps, "Inner tolerance factor")->capture_default_str();
  solve->add_option("--tau", cfg.ipm.tau, "Fraction to boundary")->capture_default_str();
  solve->add_option("--max-inner", cfg.ipm.max_inner, "Inner iteration cap")
      ->capture_default_str();
  solve->add_option("--max-outer", cfg.ipm.max_outer, "Outer iteration cap")
      ->capture_default_str();
  solve->add_option("--delta-band", cfg.delta_band, "Equality band")->capture_default_str();
  solve->add_flag("!--no-staged-start", cfg.ipm.staged_start,
                  "Only accept random draws as starting points");
  solve->add_flag("!--no-inertia-correction", cfg.ipm.inertia_correction,
                  "Disable the Hessian shift on indefinite systems");
  solve->add_option("--out-dir", out_dir, "Output root")->envname("VQCQP_OUT");
  solve->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  solve->add_flag("--quiet,-q", quiet, "No progress output");

  // compare
  auto* cmp = app.add_subcommand("compare", "Tabulate best runs across reports");
  std::vector<std::string> reports;
  std::string table_path = "comparison.csv";
  std::string hist_path = "histogram.csv";
  cmp->add_option("reports", reports, "Report files or campaign directories")->required();
  cmp->add_option("--table", table_path, "Comparison table CSV")->capture_default_str();
  cmp->add_option("--histogram", hist_path, "Histogram data CSV")->capture_default_str();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force Max-Cut optimum");
  std::string oracle_source;
  oracle->add_option("source", oracle_source, "Max-Cut problem file or maxcut:N:P:SEED")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) {
      const ProblemDocument doc =
          kind == "maxcut"
              ? maxcut_document(gen_gnp_graph(gen_n, gen_p, gen_seed), gen_p, gen_seed)
              : opf_document(gen_opf(gen_n, gen_seed, admittance_mode_from_string(gen_mode)),
                             gen_seed);
      write_json_file(gen_out, problem_to_json(doc));
      return kOk;
    }

    if (solve->parsed()) {
      cfg.methods = methods_from_string(method);
      cfg.validate();
      if (out_dir.empty()) out_dir = "results";
      int code = kOk;
      for (const auto& spec : sources) {
        const Source src = load_source(spec);
        const CampaignResult result = run_campaign(src.doc, src.instance, cfg);
        const fs::path dir = write_campaign(result, out_dir);
        write_json_file(dir / "problem.json", problem_to_json(src.doc));
        if (!quiet) {
          for (const auto& m : result.methods) {
            const SolveReport& b = m.best_run();
            std::cout << src.instance << ' ' << to_string(m.method) << ' '
                      << campaign_status(m);
            if (b.feasible_start()) std::cout << " objective=" << format_number(b.objective);
            if (auto c = m.best_cut()) std::cout << " cut=" << format_number(*c);
            if (b.optimum_cut) std::cout << " optimum=" << format_number(*b.optimum_cut);
            std::cout << " converged=" << m.converged_count() << '/' << m.runs.size() << '\n';
          }
        }
        code = std::max(code, status_code(result));
      }
      return code;
    }

    if (cmp->parsed()) {
      std::vector<SolveReport> rs;
      for (const auto& p : collect_reports(reports)) {
        rs.push_back(report_from_json(read_json_file(p)));
      }
      const ComparisonTables t = compare_reports(rs);
      write_text_file(table_path, t.table);
      write_text_file(hist_path, t.histogram);
      return kOk;
    }

    if (oracle->parsed()) {
      const Source src = load_source(oracle_source);
      const std::optional<Graph> g = maxcut_graph(src.doc);
      if (!g) throw ParameterError("oracle needs a Max-Cut instance");
      const Cut c = brute_force_maxcut(*g);
      std::cout << dump_json({{"instance", src.instance},
                              {"optimum_cut", c.value},
                              {"signs", c.signs}});
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSchema;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
