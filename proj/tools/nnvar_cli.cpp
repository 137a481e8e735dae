// nnvar: nearest-neighbor entropy / varentropy toolkit.
//
// Exit codes: 0 ok, 1 other failure, 2 usage / parse / config error,
// 3 duplicate points, 4 too few points.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nnvar/campaign_config.hpp"
#include "nnvar/conditions.hpp"
#include "nnvar/distributions.hpp"
#include "nnvar/errors.hpp"
#include "nnvar/estimators.hpp"
#include "nnvar/experiments.hpp"
#include "nnvar/nn_graph.hpp"
#include "nnvar/parallel.hpp"
#include "nnvar/report_io.hpp"

#ifndef NNVAR_VERSION
#define NNVAR_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace nnvar;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDuplicates = 3;
constexpr int kExitTooFew = 4;

struct Globals {
  bool json = false;
  std::uint64_t seed = 1;
  bool seed_given = false;
  unsigned threads = 0;
  bool no_meta = false;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void add_meta(json& doc, const Globals& g, const char* command) {
  doc["command"] = command;
  if (g.no_meta) return;
  doc["meta"] = {{"version", NNVAR_VERSION}, {"timestamp", utc_timestamp()}, {"threads", g.threads}};
}

// Adds the schema tag to a report body.
json with_schema(json body) {
  json doc = {{"schema", kSchemaVersion}};
  for (auto& [k, v] : body.items()) {
    if (k != "schema") doc[k] = std::move(v);
  }
  return doc;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + out_path + "'");
  out << text;
}

std::string fmt(double v) { return format_double(v); }

// --- estimate -------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  std::string engine = "tree";
  double jitter = 0.0;
  bool emit_zeta = false;
  std::string out;
};

int cmd_estimate(const Globals& g, const EstimateArgs& a) {
  Sample sample = read_dataset_csv(std::filesystem::path(a.input));
  if (a.jitter > 0.0) sample = apply_jitter(sample, a.jitter, g.seed);
  const NnEngine engine = a.engine == "brute" ? NnEngine::BruteForce : NnEngine::Tree;
  const EstimateReport report = estimate(sample, engine, g.threads);
  std::string text;
  if (g.json) {
    json doc = with_schema(to_json(report, a.emit_zeta));
    doc["engine"] = a.engine;
    if (a.jitter > 0.0) doc["jitter"] = a.jitter;
    add_meta(doc, g, "estimate");
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "n      " << report.n << "\n"
        << "d      " << report.dim << "\n"
        << "H_N    " << fmt(report.entropy) << "\n"
        << "S2_N   " << fmt(report.second_moment) << "\n"
        << "V_N    " << fmt(report.varentropy) << "\n";
    if (report.unstable) out << "note   n < " << kUnstableBelow << ": unstable regime\n";
    if (a.emit_zeta) {
      out << "zeta\n";
      for (double z : report.zeta) out << fmt(z) << "\n";
    }
    text = out.str();
  }
  emit(text, a.out);
  return kExitOk;
}

// --- sample ---------------------------------------------------------------

struct SampleArgs {
  std::string spec;
  std::size_t n = 0;
  std::string out;
};

int cmd_sample(const Globals& g, const SampleArgs& a) {
  const Distribution dist = parse_distribution(a.spec);
  const Sample sample = dist.sample(a.n, g.seed);
  std::ostringstream out;
  write_dataset_csv(out, sample);
  emit(out.str(), a.out);
  return kExitOk;
}

// --- conditions -----------------------------------------------------------

struct ConditionArgs {
  std::string spec;
  ConditionParams params;
  std::string out;
};

int cmd_conditions(const Globals& g, ConditionArgs a) {
  const Distribution dist = parse_distribution(a.spec);
  a.params.mc.seed = g.seed;
  a.params.mc.threads = g.threads;
  const ConditionReport report = check_conditions(dist, a.params);
  std::string text;
  if (g.json) {
    json doc = to_json(report);
    add_meta(doc, g, "conditions");
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "distribution  " << report.distribution << "\n";
    auto line = [&](const FunctionalEstimate& f) {
      std::string label = f.functional;
      for (const auto& [k, v] : f.params) label += " " + k + "=" + fmt(v);
      out << std::left << std::setw(22) << label << std::setw(14) << to_string(f.verdict);
      for (std::size_t i = 0; i < f.estimates.size(); ++i) {
        out << " " << fmt(f.estimates[i]) << "+-" << std::setprecision(2) << f.stderrs[i];
      }
      out << "\n";
    };
    for (const auto& k : report.k_alpha) line(k);
    line(report.q);
    line(report.t);
    const DensityRatioCheck& c = report.density_ratio;
    out << std::left << std::setw(22) << "m_f >= c f" << std::setw(14) << to_string(c.verdict)
        << " c=" << fmt(c.c_estimate) << " int f^(1-eps)=" << fmt(c.power_integral)
        << " T bound=" << fmt(c.t_bound) << "\n";
    out << "sup f         " << fmt(report.density_bound) << "\n";
    text = out.str();
  }
  emit(text, a.out);
  return kExitOk;
}

// --- campaign -------------------------------------------------------------

struct CampaignArgs {
  std::string config;
  bool dry_run = false;
  std::string out_dir = ".";
};

int cmd_campaign(const Globals& g, const CampaignArgs& a) {
  CampaignConfig config = load_campaign_config(a.config);
  if (g.seed_given) config.seed = g.seed;
  config.threads = g.threads;
  if (a.dry_run) {
    const auto plan = plan_campaign(config);
    if (g.json) {
      json streams = json::array();
      for (const auto& p : plan) streams.push_back({p.n, p.replication, p.stream_seed});
      json doc = {{"schema", kSchemaVersion},
                  {"name", config.name},
                  {"spec", config.spec.name()},
                  {"replications_total", plan.size()},
                  {"stream_fields", {"n", "replication", "stream_seed"}},
                  {"streams", streams}};
      add_meta(doc, g, "campaign");
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << "campaign " << config.name << ": " << config.spec.name() << "\n"
                << "planned replications " << plan.size() << " (" << config.n_grid.size()
                << " sizes x " << config.replications << ")\n"
                << "stream ids (seed " << config.seed << ", n, r)\n";
      for (const auto& p : plan) {
        std::cout << "  n=" << p.n << " r=" << p.replication << " stream=" << p.stream_seed << "\n";
      }
    }
    return kExitOk;
  }

  const McReport report = run_campaign(config);
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  json doc = to_json(report, !g.no_meta);
  add_meta(doc, g, "campaign");
  {
    std::ofstream out(dir / (config.name + ".json"), std::ios::binary);
    out << doc.dump(2) << "\n";
  }
  std::vector<Estimand> parts;
  if (config.estimand == Estimand::Both) {
    parts = {Estimand::Entropy, Estimand::Varentropy};
  } else {
    parts = {config.estimand};
  }
  for (Estimand e : parts) {
    const std::string file = config.estimand == Estimand::Both
                                 ? config.name + "_" + to_string(e) + ".csv"
                                 : config.name + ".csv";
    std::ofstream out(dir / file, std::ios::binary);
    write_campaign_csv(out, report, e);
  }

  if (g.json) {
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "campaign " << report.name << ": " << report.spec << ", R=" << report.replications
            << ", seed=" << report.seed << "\n";
  for (Estimand e : parts) {
    std::cout << to_string(e) << "\n"
              << std::left << std::setw(8) << "n" << std::setw(14) << "mean" << std::setw(14)
              << "bias" << std::setw(14) << "variance" << std::setw(14) << "mse" << std::setw(14)
              << "stderr_mean" << std::setw(14) << "stderr_mse" << "redraws\n";
    for (const McRow& row : report.rows) {
      const auto& s = e == Estimand::Entropy ? row.entropy : row.varentropy;
      std::cout << std::setw(8) << row.n << std::setprecision(6);
      for (double v : {s->mean, s->bias, s->variance, s->mse, s->stderr_mean, s->stderr_mse}) {
        std::cout << std::setw(14) << v;
      }
      std::cout << row.redraws << "\n";
    }
  }
  std::cout << "wrote " << (dir / (config.name + ".json")).string() << "\n";
  return kExitOk;
}

// --- normality ------------------------------------------------------------

struct NormalityArgs {
  std::string input;
  double level = 0.05;
  std::size_t calibration = 999;
  std::string out;
};

int cmd_normality(const Globals& g, const NormalityArgs& a) {
  const Sample sample = read_dataset_csv(std::filesystem::path(a.input));
  const NormalityTestResult r =
      normality_screen(sample, a.level, NormalityCalibration{a.calibration, g.seed}, g.threads);
  std::string text;
  if (g.json) {
    json doc = to_json(r);
    add_meta(doc, g, "normality");
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "n          " << r.n << "\n"
        << "d          " << r.dim << "\n"
        << "V_N        " << fmt(r.varentropy) << "\n"
        << "statistic  " << fmt(r.statistic) << "  (V_N - d/2)\n"
        << "p-value    " << fmt(r.p_value) << "  (" << r.calibration_replications
        << " null replications)\n"
        << "decision   " << (r.reject ? "reject" : "do not reject") << " normality at level "
        << fmt(r.level) << "\n";
    text = out.str();
  }
  emit(text, a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearest-neighbor entropy and varentropy estimation", "nnvar"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", NNVAR_VERSION);

  Globals g;
  app.add_flag("--json", g.json, "Emit JSON");
  auto* seed_opt = app.add_option("--seed", g.seed, "Base RNG seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_flag("--no-meta", g.no_meta, "Omit timestamp/version/runtime metadata");

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate H_N, S2_N and V_N from a CSV dataset");
  estimate_cmd->add_option("input", est.input, "Headerless CSV dataset")->required();
  estimate_cmd->add_option("--engine", est.engine, "Nearest-neighbor engine")
      ->check(CLI::IsMember({"tree", "brute"}))
      ->capture_default_str();
  estimate_cmd->add_option("--jitter", est.jitter, "Add Uniform(-s, s) noise before estimating")
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_flag("--emit-zeta", est.emit_zeta, "Include the per-point zeta values");
  estimate_cmd->add_option("--out", est.out, "Write output to a file");

  SampleArgs smp;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a seeded sample as CSV");
  sample_cmd->add_option("spec", smp.spec, "Distribution, e.g. normal(d=2)")->required();
  sample_cmd->add_option("--n", smp.n, "Number of points")->required();
  sample_cmd->add_option("--out", smp.out, "Write CSV to a file");

  ConditionArgs cond;
  auto* cond_cmd = app.add_subcommand("conditions", "Estimate the hypothesis functionals K, Q, T");
  cond_cmd->add_option("spec", cond.spec, "Distribution")->required();
  cond_cmd->add_option("--eps0", cond.params.eps0)->capture_default_str();
  cond_cmd->add_option("--eps1", cond.params.eps1)->capture_default_str();
  cond_cmd->add_option("--eps2", cond.params.eps2)->capture_default_str();
  cond_cmd->add_option("--R1", cond.params.R1)->capture_default_str();
  cond_cmd->add_option("--R2", cond.params.R2)->capture_default_str();
  cond_cmd->add_option("--alpha", cond.params.alphas, "alpha values for K")
      ->check(CLI::Range(1, 4))
      ->capture_default_str();
  cond_cmd->add_option("--budget", cond.params.budget, "Base Monte Carlo budget")
      ->capture_default_str();
  cond_cmd->add_option("--doublings", cond.params.mc.doublings, "Budget doublings")
      ->capture_default_str();
  cond_cmd->add_option("--grid-size", cond.params.mc.grid_size, "Radius grid size")
      ->capture_default_str();
  cond_cmd->add_option("--out", cond.out, "Write output to a file");

  CampaignArgs camp;
  auto* camp_cmd = app.add_subcommand("campaign", "Run a Monte Carlo campaign from a config file");
  camp_cmd->add_option("config", camp.config, "Campaign config file")->required();
  camp_cmd->add_flag("--dry-run", camp.dry_run, "Print the plan and write nothing");
  camp_cmd->add_option("--out-dir", camp.out_dir, "Directory for JSON/CSV reports")
      ->capture_default_str();

  NormalityArgs norm;
  auto* norm_cmd = app.add_subcommand("normality", "Varentropy-based normality screen");
  norm_cmd->add_option("input", norm.input, "Headerless CSV dataset")->required();
  norm_cmd->add_option("--level", norm.level, "Test level")->capture_default_str();
  norm_cmd->add_option("--calibration", norm.calibration, "Null calibration replications")
      ->capture_default_str();
  norm_cmd->add_option("--out", norm.out, "Write output to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  g.seed_given = seed_opt->count() > 0;
  if (g.threads == 0) g.threads = default_thread_count();

  try {
    if (*estimate_cmd) return cmd_estimate(g, est);
    if (*sample_cmd) return cmd_sample(g, smp);
    if (*cond_cmd) return cmd_conditions(g, cond);
    if (*camp_cmd) return cmd_campaign(g, camp);
    if (*norm_cmd) return cmd_normality(g, norm);
  } catch (const DuplicatePointsError& e) {
    std::cerr << "error: " << e.what() << "\nhint: rerun with --jitter <half-width> to break ties\n";
    return kExitDuplicates;
  } catch (const EmptySampleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTooFew;
  } catch (const TooFewPointsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTooFew;
  } catch (const BudgetTooSmallError& e) {
    std::cerr << "error: BudgetTooSmall: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CalibrationBudgetTooSmallError& e) {
    std::cerr << "error: CalibrationBudgetTooSmall: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParamsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
