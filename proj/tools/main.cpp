#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv.hpp"
#include "permwalk.h"

namespace {

using permwalk::cli::DataMatrix;
using permwalk::cli::format_double;
using permwalk::cli::input_error;
using json = nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;
constexpr int kSchemaVersion = 1;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Raised when a library call fails; maps to the computation exit code.
class compute_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

void check(pw_status status, const std::string& what)
{
  if (status == PW_OK) return;
  std::string message = what + ": " + pw_status_message(status);
  const char* detail = pw_last_error();
  if (detail && *detail) message += " (" + std::string(detail) + ")";
  throw compute_error(message);
}

pw_side parse_side(const std::string& side)
{
  return side == "less" ? PW_SIDE_LESS : PW_SIDE_GREATER;
}

pw_statistic parse_statistic(const std::string& statistic)
{
  return statistic == "mean-diff" ? PW_STAT_MEAN_DIFF : PW_STAT_T;
}

/// PERMWALK_THREADS overrides the flag when set.
unsigned resolve_threads(unsigned flag_value)
{
  const char* env = std::getenv("PERMWALK_THREADS");
  if (!env || !*env) return flag_value;
  char* end = nullptr;
  const unsigned long parsed = std::strtoul(env, &end, 10);
  if (*end != '\0' || parsed < 1 || parsed > 4096)
    throw input_error("PERMWALK_THREADS must be a positive integer, got '" + std::string(env) +
                      "'");
  return static_cast<unsigned>(parsed);
}

void write_output(const std::string& out_path, const std::string& content)
{
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw input_error("cannot open '" + out_path + "' for writing");
  out << content;
  if (!out) throw input_error("failed writing '" + out_path + "'");
}

/// Wall-clock scope timer reporting to stderr; measurements never enter the
/// result document, which stays byte-identical for a fixed seed.
class StderrTimer {
public:
  explicit StderrTimer(std::string label)
      : label_(std::move(label)), start_(std::chrono::steady_clock::now())
  {
  }
  ~StderrTimer()
  {
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    std::cerr << label_ << " took " << elapsed.count() << " s\n";
  }

private:
  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

json double_array(const double* values, std::size_t count)
{
  // NaN serializes to null, marking degenerate entries in the document.
  return json(std::vector<double>(values, values + count));
}

json uint_array(const std::uint64_t* values, std::size_t count)
{
  return json(std::vector<std::uint64_t>(values, values + count));
}

json flag_array(const std::uint8_t* values, std::size_t count)
{
  std::vector<bool> flags(count);
  for (std::size_t k = 0; k < count; ++k) flags[k] = values[k] != 0;
  return json(flags);
}

std::string csv_cell(double value)
{
  return format_double(value);
}

/* --------------------------------------------------------------- ttest */

struct TtestOptions {
  std::string data;
  std::string groups;
  std::uint64_t walks = 500'000;
  std::uint64_t seed = 0;
  std::string side = "greater";
  std::string correction = "maxstat";
  double alpha = 0.05;
  std::uint64_t burnin = 0;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
};

void run_ttest(const TtestOptions& opt)
{
  const DataMatrix matrix = permwalk::cli::read_matrix(opt.data);
  const auto labels = permwalk::cli::read_group_labels(opt.groups, matrix);

  pw_field_config config;
  pw_field_config_init(&config);
  config.n_walks = opt.walks;
  config.seed = opt.seed;
  config.burnin = opt.burnin;
  config.side = parse_side(opt.side);
  config.maxstat = opt.correction == "maxstat" ? 1 : 0;
  config.alpha = opt.alpha;
  config.threads = resolve_threads(opt.threads);

  pw_field_result* result = nullptr;
  {
    StderrTimer timer("ttest (" + std::to_string(opt.walks) + " walks)");
    check(pw_field_ttest_run(matrix.values.data(), matrix.n_vertices, matrix.n_subjects(),
                             labels.data(), &config, &result),
          "field t-test");
  }

  pw_field_info info;
  check(pw_field_result_info(result, &info), "field t-test result");
  const std::size_t V = info.n_vertices;
  const double* statistic = pw_field_result_statistic(result);
  const std::uint8_t* ok = pw_field_result_statistic_ok(result);
  const double* pvalue = pw_field_result_pvalue(result);
  const double* corrected = pw_field_result_corrected_pvalue(result);
  const std::uint64_t* exceed = pw_field_result_exceed(result);
  const std::uint64_t* walk_count = pw_field_result_walk_count(result);
  const std::uint64_t* degenerate = pw_field_result_degenerate(result);

  std::string content;
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "ttest";
    doc["config"] = {{"data", opt.data},       {"groups", opt.groups},
                     {"walks", opt.walks},     {"seed", opt.seed},
                     {"side", opt.side},       {"correction", opt.correction},
                     {"alpha", opt.alpha},     {"burnin", opt.burnin},
                     {"threads", config.threads}};
    doc["groups"] = {{"m", info.m}, {"n", info.n}};
    doc["runtime"] = {{"stat_evaluations", info.stat_evaluations},
                      {"maxstat_walks", info.maxstat_walks},
                      {"maxstat_degenerate", info.maxstat_degenerate}};
    if (info.has_corrected) {
      doc["corrected"] = {{"p_sup", info.corrected_p_sup}, {"p_inf", info.corrected_p_inf}};
      if (info.has_thresholds)
        doc["thresholds"] = {{"alpha", opt.alpha},
                             {"upper", info.threshold_upper},
                             {"lower", info.threshold_lower}};
    }
    json vertices;
    vertices["statistic"] = double_array(statistic, V);
    vertices["ok"] = flag_array(ok, V);
    vertices["pvalue"] = double_array(pvalue, V);
    if (corrected) vertices["corrected_pvalue"] = double_array(corrected, V);
    vertices["exceed"] = uint_array(exceed, V);
    vertices["walks"] = uint_array(walk_count, V);
    vertices["degenerate"] = uint_array(degenerate, V);
    doc["vertices"] = std::move(vertices);
    content = doc.dump(2) + "\n";
  } else {
    std::string table = "vertex,statistic,ok,pvalue";
    if (corrected) table += ",corrected_pvalue";
    table += ",exceed,walks,degenerate\n";
    for (std::size_t v = 0; v < V; ++v) {
      table += std::to_string(v) + ',' + csv_cell(statistic[v]) + ',' +
               (ok[v] ? "1" : "0") + ',' + csv_cell(pvalue[v]);
      if (corrected) table += ',' + csv_cell(corrected[v]);
      table += ',' + std::to_string(exceed[v]) + ',' + std::to_string(walk_count[v]) + ',' +
               std::to_string(degenerate[v]) + '\n';
    }
    content = std::move(table);
  }
  pw_field_result_destroy(result);
  write_output(opt.out, content);
}

/* ---------------------------------------------------------------- twin */

struct TwinOptions {
  std::string data;
  std::string pairs;
  std::uint64_t walks = 10'000;
  std::uint64_t seed = 0;
  std::uint64_t report_every = 100;
  std::string out;
  std::string format = "json";
};

void run_twin(const TwinOptions& opt)
{
  const DataMatrix matrix = permwalk::cli::read_matrix(opt.data);
  const auto pairs = permwalk::cli::read_pair_labels(opt.pairs, matrix);

  pw_twin_field_config config;
  pw_twin_field_config_init(&config);
  config.n_walks = opt.walks;
  config.seed = opt.seed;
  config.report_every = opt.report_every;

  pw_twin_result* result = nullptr;
  {
    StderrTimer timer("twin (" + std::to_string(opt.walks) + " walks)");
    check(pw_twin_field_run(matrix.values.data(), matrix.n_vertices, matrix.n_subjects(),
                            pairs.a.data(), pairs.b.data(), pairs.a.size(), &config, &result),
          "twin correlation");
  }

  pw_twin_info info;
  check(pw_twin_result_info(result, &info), "twin correlation result");
  const std::size_t V = info.n_vertices;
  const double* mean = pw_twin_result_mean_correlation(result);
  const std::uint8_t* ok = pw_twin_result_correlation_ok(result);
  const std::uint64_t* degenerate = pw_twin_result_degenerate(result);

  std::string content;
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "twin";
    doc["config"] = {{"data", opt.data},
                     {"pairs", opt.pairs},
                     {"n_pairs", pairs.a.size()},
                     {"walks", opt.walks},
                     {"seed", opt.seed},
                     {"report_every", opt.report_every}};
    doc["converged"] = info.converged != 0;
    doc["runtime"] = {{"stat_evaluations", info.stat_evaluations}};
    json vertices;
    vertices["mean_correlation"] = double_array(mean, V);
    vertices["ok"] = flag_array(ok, V);
    vertices["degenerate"] = uint_array(degenerate, V);
    doc["vertices"] = std::move(vertices);
    content = doc.dump(2) + "\n";
  } else {
    std::string table = "vertex,mean_correlation,ok,degenerate\n";
    for (std::size_t v = 0; v < V; ++v)
      table += std::to_string(v) + ',' + csv_cell(mean[v]) + ',' + (ok[v] ? "1" : "0") + ',' +
               std::to_string(degenerate[v]) + '\n';
    content = std::move(table);
  }
  pw_twin_result_destroy(result);
  write_output(opt.out, content);
}

/* -------------------------------------------------------- heritability */

struct HeritabilityOptions {
  std::string mz;
  std::string dz;
  std::string out;
  std::string format = "json";
};

/// Pull the per-vertex means out of a twin result document (JSON format).
void load_twin_document(const std::string& path, std::vector<double>& mean,
                        std::vector<bool>& ok)
{
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "' for reading");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw input_error("'" + path + "': not valid JSON: " + e.what());
  }
  if (doc.value("command", "") != "twin")
    throw input_error("'" + path + "': expected a twin result document");
  const auto it = doc.find("vertices");
  if (it == doc.end() || !it->contains("mean_correlation") || !it->contains("ok"))
    throw input_error("'" + path + "': missing vertices.mean_correlation");
  for (const auto& value : (*it)["mean_correlation"])
    mean.push_back(value.is_null() ? kNaN : value.get<double>());
  for (const auto& value : (*it)["ok"]) ok.push_back(value.get<bool>());
  if (mean.size() != ok.size())
    throw input_error("'" + path + "': mean_correlation and ok lengths differ");
}

void run_heritability(const HeritabilityOptions& opt)
{
  std::vector<double> mz_mean, dz_mean;
  std::vector<bool> mz_ok, dz_ok;
  load_twin_document(opt.mz, mz_mean, mz_ok);
  load_twin_document(opt.dz, dz_mean, dz_ok);
  if (mz_mean.size() != dz_mean.size())
    throw input_error("MZ and DZ documents cover different vertex counts (" +
                      std::to_string(mz_mean.size()) + " vs " + std::to_string(dz_mean.size()) +
                      ")");

  std::vector<double> hi(mz_mean.size());
  check(pw_heritability(mz_mean.data(), dz_mean.data(), mz_mean.size(), hi.data()),
        "heritability index");

  std::string content;
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "heritability";
    doc["config"] = {{"mz", opt.mz}, {"dz", opt.dz}};
    json vertices;
    vertices["hi"] = double_array(hi.data(), hi.size());
    json ok_array = json::array();
    for (std::size_t v = 0; v < hi.size(); ++v) ok_array.push_back(mz_ok[v] && dz_ok[v]);
    vertices["ok"] = std::move(ok_array);
    doc["vertices"] = std::move(vertices);
    content = doc.dump(2) + "\n";
  } else {
    std::string table = "vertex,hi,ok\n";
    for (std::size_t v = 0; v < hi.size(); ++v)
      table += std::to_string(v) + ',' + csv_cell(hi[v]) + ',' +
               ((mz_ok[v] && dz_ok[v]) ? "1" : "0") + '\n';
    content = std::move(table);
  }
  write_output(opt.out, content);
}

/* ------------------------------------------------------------ simulate */

struct SimulateOptions {
  std::string scenario;
  std::uint32_t reps = 100;
  std::uint64_t naive_perms = 10'000;
  std::uint32_t checkpoints = 50;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::string side = "less";
  double shift = 0.1;
  unsigned threads = 1;
  std::string out;
  std::string format = "csv";
};

void run_simulate(const SimulateOptions& opt)
{
  pw_simulate_config config;
  pw_simulate_config_init(&config);
  const std::uint64_t size = opt.scenario == "large" ? 100 : 10;
  config.m = size;
  config.n = size;
  config.reps = opt.reps;
  config.naive_perms = opt.naive_perms;
  config.throughput_ratio = opt.ratio;
  config.checkpoints = opt.checkpoints;
  config.seed = opt.seed;
  config.side = parse_side(opt.side);
  config.shift = opt.shift;
  config.threads = resolve_threads(opt.threads);

  pw_simulate_result* result = nullptr;
  {
    StderrTimer timer("simulate (" + opt.scenario + ", " + std::to_string(opt.reps) + " reps)");
    check(pw_simulate(&config, &result), "convergence simulation");
  }

  pw_simulate_info info;
  check(pw_simulate_result_info(result, &info), "simulation result");
  const std::size_t C = info.checkpoints;
  const double* fraction = pw_simulate_budget_fraction(result);
  const std::uint64_t* walk_iters = pw_simulate_walk_iters(result);
  const std::uint64_t* naive_iters = pw_simulate_naive_iters(result);
  const double* walk_err = pw_simulate_walk_rel_error(result);
  const double* naive_err = pw_simulate_naive_rel_error(result);
  std::cerr << "throughput ratio used: " << info.throughput_ratio << "\n";

  std::string content;
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "simulate";
    doc["config"] = {{"scenario", opt.scenario},
                     {"m", info.m},
                     {"n", info.n},
                     {"reps", opt.reps},
                     {"naive_perms", opt.naive_perms},
                     {"checkpoints", opt.checkpoints},
                     {"ratio", info.throughput_ratio},
                     {"seed", opt.seed},
                     {"side", opt.side},
                     {"shift", opt.shift},
                     {"threads", config.threads}};
    doc["dataset"] = {{"t_observed", info.t_observed}, {"p_true", info.p_true}};
    doc["curves"] = {{"budget_fraction", double_array(fraction, C)},
                     {"walk_iters", uint_array(walk_iters, C)},
                     {"naive_iters", uint_array(naive_iters, C)},
                     {"walk_rel_error", double_array(walk_err, C)},
                     {"naive_rel_error", double_array(naive_err, C)}};
    content = doc.dump(2) + "\n";
  } else {
    std::string table = "budget_fraction,walk_iters,naive_iters,walk_rel_error,naive_rel_error\n";
    for (std::size_t c = 0; c < C; ++c)
      table += csv_cell(fraction[c]) + ',' + std::to_string(walk_iters[c]) + ',' +
               std::to_string(naive_iters[c]) + ',' + csv_cell(walk_err[c]) + ',' +
               csv_cell(naive_err[c]) + '\n';
    content = std::move(table);
  }
  pw_simulate_result_destroy(result);
  write_output(opt.out, content);
}

/* -------------------------------------------------------------- mixing */

struct MixingOptions {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t walks = 1000;
  std::uint32_t reps = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

void run_mixing(const MixingOptions& opt)
{
  std::vector<double> proportion(opt.walks + 1);
  {
    StderrTimer timer("mixing (" + std::to_string(opt.reps) + " reps)");
    check(pw_mixing(opt.m, opt.n, opt.walks, opt.reps, opt.seed, proportion.data()),
          "mixing estimate");
  }

  std::string content;
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "mixing";
    doc["config"] = {{"m", opt.m},
                     {"n", opt.n},
                     {"walks", opt.walks},
                     {"reps", opt.reps},
                     {"seed", opt.seed}};
    doc["proportion"] = double_array(proportion.data(), proportion.size());
    content = doc.dump(2) + "\n";
  } else {
    std::string table = "walk,proportion\n";
    for (std::size_t k = 0; k < proportion.size(); ++k)
      table += std::to_string(k) + ',' + csv_cell(proportion[k]) + '\n';
    content = std::move(table);
  }
  write_output(opt.out, content);
}

/* --------------------------------------------------------------- bench */

struct BenchOptions {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t evals = 1'000'000;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

void run_bench(const BenchOptions& opt)
{
  pw_throughput_result result;
  {
    StderrTimer timer("bench (m=" + std::to_string(opt.m) + ", n=" + std::to_string(opt.n) + ")");
    check(pw_measure_throughput(opt.m, opt.n, opt.evals, opt.seed, &result), "throughput");
  }
  std::cerr << "speedup ratio: " << result.ratio << "x\n";

  std::string content;
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "bench";
    doc["config"] = {{"m", opt.m}, {"n", opt.n}, {"evals", opt.evals}, {"seed", opt.seed}};
    doc["walk_evals"] = result.walk_evals;
    doc["naive_evals"] = result.naive_evals;
    doc["walk_ns_per_eval"] = result.walk_ns_per_eval;
    doc["naive_ns_per_eval"] = result.naive_ns_per_eval;
    doc["ratio"] = result.ratio;
    content = doc.dump(2) + "\n";
  } else {
    content = "walk_evals,naive_evals,walk_ns_per_eval,naive_ns_per_eval,ratio\n" +
              std::to_string(result.walk_evals) + ',' + std::to_string(result.naive_evals) + ',' +
              csv_cell(result.walk_ns_per_eval) + ',' + csv_cell(result.naive_ns_per_eval) + ',' +
              csv_cell(result.ratio) + '\n';
  }
  write_output(opt.out, content);
}

/* ----------------------------------------------------------- enumerate */

struct EnumerateOptions {
  std::string data;
  std::string groups;
  std::string statistic = "t";
  std::string side = "greater";
  bool geq = false;
  std::uint64_t limit = 1'000'000;
  std::string out;
  std::string format = "json";
};

void run_enumerate(const EnumerateOptions& opt)
{
  const DataMatrix matrix = permwalk::cli::read_matrix(opt.data);
  const auto labels = permwalk::cli::read_group_labels(opt.groups, matrix);

  std::vector<std::size_t> x_cols, y_cols;
  for (std::size_t s = 0; s < labels.size(); ++s)
    (labels[s] == 0 ? x_cols : y_cols).push_back(s);

  std::vector<double> p(matrix.n_vertices), x(x_cols.size()), y(y_cols.size());
  std::vector<std::uint64_t> n_exceed(matrix.n_vertices), n_degenerate(matrix.n_vertices);
  std::uint64_t n_assignments = 0;
  {
    StderrTimer timer("enumerate (" + std::to_string(matrix.n_vertices) + " vertices)");
    for (std::size_t v = 0; v < matrix.n_vertices; ++v) {
      const double* row = matrix.values.data() + v * matrix.n_subjects();
      for (std::size_t k = 0; k < x_cols.size(); ++k) x[k] = row[x_cols[k]];
      for (std::size_t k = 0; k < y_cols.size(); ++k) y[k] = row[y_cols[k]];
      pw_enumeration_result result;
      check(pw_enumerate(x.data(), x.size(), y.data(), y.size(), parse_statistic(opt.statistic),
                         parse_side(opt.side), opt.geq ? 0 : 1, opt.limit, &result),
            "enumeration at vertex " + std::to_string(v));
      p[v] = result.p;
      n_exceed[v] = result.n_exceed;
      n_degenerate[v] = result.n_degenerate;
      n_assignments = result.n_assignments;
    }
  }

  std::string content;
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "enumerate";
    doc["config"] = {{"data", opt.data},
                     {"groups", opt.groups},
                     {"statistic", opt.statistic},
                     {"side", opt.side},
                     {"strict", !opt.geq},
                     {"limit", opt.limit}};
    doc["n_assignments"] = n_assignments;
    json vertices;
    vertices["p"] = double_array(p.data(), p.size());
    vertices["exceed"] = uint_array(n_exceed.data(), n_exceed.size());
    vertices["degenerate"] = uint_array(n_degenerate.data(), n_degenerate.size());
    doc["vertices"] = std::move(vertices);
    content = doc.dump(2) + "\n";
  } else {
    std::string table = "vertex,p,n_assignments,n_exceed,n_degenerate\n";
    for (std::size_t v = 0; v < p.size(); ++v)
      table += std::to_string(v) + ',' + csv_cell(p[v]) + ',' + std::to_string(n_assignments) +
               ',' + std::to_string(n_exceed[v]) + ',' + std::to_string(n_degenerate[v]) + '\n';
    content = std::move(table);
  }
  write_output(opt.out, content);
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"permwalk: permutation tests via random transposition walks"};
  app.set_version_flag("--version", pw_version());
  app.require_subcommand(1);

  auto format_check = CLI::IsMember({"json", "csv"});
  auto side_check = CLI::IsMember({"greater", "less"});

  TtestOptions ttest;
  auto* cmd_ttest = app.add_subcommand("ttest", "Walk-based two-sample t field inference");
  cmd_ttest->add_option("--data", ttest.data, "Matrix CSV (rows=vertices, cols=subjects)")
      ->required();
  cmd_ttest->add_option("--groups", ttest.groups, "Two-column subject,group CSV (x or y)")
      ->required();
  cmd_ttest->add_option("--walks", ttest.walks, "Number of random transpositions");
  cmd_ttest->add_option("--seed", ttest.seed, "RNG seed");
  cmd_ttest->add_option("--side", ttest.side, "One-sided alternative")->check(side_check);
  cmd_ttest->add_option("--correction", ttest.correction, "Multiple-comparison correction")
      ->check(CLI::IsMember({"none", "maxstat"}));
  cmd_ttest->add_option("--alpha", ttest.alpha, "Threshold level for maxstat");
  cmd_ttest->add_option("--burnin", ttest.burnin, "Unobserved walks before counting");
  cmd_ttest->add_option("--threads", ttest.threads, "Parallel chains");
  cmd_ttest->add_option("--out", ttest.out, "Output path (default: stdout)");
  cmd_ttest->add_option("--format", ttest.format, "Output format")->check(format_check);
  cmd_ttest->callback([&] { run_ttest(ttest); });

  TwinOptions twin;
  auto* cmd_twin = app.add_subcommand("twin", "Averaged twin correlations over pair-swap walks");
  cmd_twin->add_option("--data", twin.data, "Matrix CSV (rows=vertices, cols=subjects)")
      ->required();
  cmd_twin->add_option("--pairs", twin.pairs, "Two-column idA,idB CSV of twin pairs")->required();
  cmd_twin->add_option("--walks", twin.walks, "Number of pair-swap walks");
  cmd_twin->add_option("--seed", twin.seed, "RNG seed");
  cmd_twin->add_option("--report-every", twin.report_every, "Convergence checkpoint cadence");
  cmd_twin->add_option("--out", twin.out, "Output path (default: stdout)");
  cmd_twin->add_option("--format", twin.format, "Output format")->check(format_check);
  cmd_twin->callback([&] { run_twin(twin); });

  HeritabilityOptions heritability;
  auto* cmd_her = app.add_subcommand("heritability", "HI = MZ - DZ from two twin documents");
  cmd_her->add_option("--mz", heritability.mz, "Twin result JSON for MZ pairs")->required();
  cmd_her->add_option("--dz", heritability.dz, "Twin result JSON for DZ pairs")->required();
  cmd_her->add_option("--out", heritability.out, "Output path (default: stdout)");
  cmd_her->add_option("--format", heritability.format, "Output format")->check(format_check);
  cmd_her->callback([&] { run_heritability(heritability); });

  SimulateOptions simulate;
  auto* cmd_sim = app.add_subcommand("simulate", "Equal-budget convergence comparison");
  cmd_sim->add_option("--scenario", simulate.scenario, "small (m=n=10) or large (m=n=100)")
      ->required()
      ->check(CLI::IsMember({"small", "large"}));
  cmd_sim->add_option("--reps", simulate.reps, "Replicates to average");
  cmd_sim->add_option("--naive-perms", simulate.naive_perms, "Naive Monte Carlo budget");
  cmd_sim->add_option("--checkpoints", simulate.checkpoints, "Curve resolution");
  cmd_sim->add_option("--ratio", simulate.ratio,
                      "Walk/naive throughput ratio (default: measure once)");
  cmd_sim->add_option("--seed", simulate.seed, "RNG seed");
  cmd_sim->add_option("--side", simulate.side, "One-sided alternative")->check(side_check);
  cmd_sim->add_option("--shift", simulate.shift, "Mean shift of group y");
  cmd_sim->add_option("--threads", simulate.threads, "Parallel replicate workers");
  cmd_sim->add_option("--out", simulate.out, "Output path (default: stdout)");
  cmd_sim->add_option("--format", simulate.format, "Output format")->check(format_check);
  cmd_sim->callback([&] { run_simulate(simulate); });

  MixingOptions mixing;
  auto* cmd_mix = app.add_subcommand("mixing", "Mean mixing proportion per walk");
  cmd_mix->add_option("--m", mixing.m, "Group x size")->required();
  cmd_mix->add_option("--n", mixing.n, "Group y size")->required();
  cmd_mix->add_option("--walks", mixing.walks, "Walks per repetition");
  cmd_mix->add_option("--reps", mixing.reps, "Repetitions to average");
  cmd_mix->add_option("--seed", mixing.seed, "RNG seed");
  cmd_mix->add_option("--out", mixing.out, "Output path (default: stdout)");
  cmd_mix->add_option("--format", mixing.format, "Output format")->check(format_check);
  cmd_mix->callback([&] { run_mixing(mixing); });

  BenchOptions bench;
  auto* cmd_bench = app.add_subcommand("bench", "Incremental vs naive throughput");
  cmd_bench->add_option("--m", bench.m, "Group x size")->required();
  cmd_bench->add_option("--n", bench.n, "Group y size")->required();
  cmd_bench->add_option("--evals", bench.evals, "Incremental evaluations to time");
  cmd_bench->add_option("--seed", bench.seed, "RNG seed");
  cmd_bench->add_option("--out", bench.out, "Output path (default: stdout)");
  cmd_bench->add_option("--format", bench.format, "Output format")->check(format_check);
  cmd_bench->callback([&] { run_bench(bench); });

  EnumerateOptions enumerate;
  auto* cmd_enum = app.add_subcommand("enumerate", "Exact p-values over all group assignments");
  cmd_enum->add_option("--data", enumerate.data, "Matrix CSV (rows=vertices, cols=subjects)")
      ->required();
  cmd_enum->add_option("--groups", enumerate.groups, "Two-column subject,group CSV (x or y)")
      ->required();
  cmd_enum->add_option("--statistic", enumerate.statistic, "Test statistic")
      ->check(CLI::IsMember({"t", "mean-diff"}));
  cmd_enum->add_option("--side", enumerate.side, "One-sided alternative")->check(side_check);
  cmd_enum->add_flag("--geq", enumerate.geq,
                     "Count permuted >= observed instead of strict >");
  cmd_enum->add_option("--limit", enumerate.limit, "Maximum assignments to enumerate");
  cmd_enum->add_option("--out", enumerate.out, "Output path (default: stdout)");
  cmd_enum->add_option("--format", enumerate.format, "Output format")->check(format_check);
  cmd_enum->callback([&] { run_enumerate(enumerate); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const compute_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return 0;
}
