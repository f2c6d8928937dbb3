// Command-line front end: kernel dumps, analytical bounds, sampling,
// statistical verification and benchmarking.
//
// Exit codes: 0 success, 1 validation or statistical failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mbd/experiment.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CliOptions {
  std::string family = "geometric";
  std::string sampler = "doubling";
  std::string summation = "kahan";
  std::string out_format = "json";
  std::string output;
  double xi = 0.0;
  double alpha = 0.0;
  int n = 0;
  mbd::ExperimentConfig config;
  double tv_tolerance = 0.0;
};

void add_distribution_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--dist", o.family, "Target family")
      ->check(CLI::IsMember({"geometric", "zipf", "file"}))
      ->capture_default_str();
  cmd->add_option("--xi", o.xi, "Geometric ratio, 0 < xi < 1");
  cmd->add_option("--alpha", o.alpha, "Zipf exponent, alpha > 1");
  cmd->add_option("--n", o.n, "Largest state index N (states 0..N)");
  cmd->add_option("--weights-file", o.config.dist.weights_file,
                  "Weights: one per line ('#' comments) or a JSON array");
  cmd->add_option("--output", o.output, "Write to this file instead of stdout");
}

void add_sampling_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--count", o.config.count, "Number of samples")->capture_default_str();
  cmd->add_option("--seed", o.config.seed, "64-bit seed")->capture_default_str();
  cmd->add_option("--block-multiplier", o.config.block_multiplier, "Read-once block size B = b*ceil(theta)*N")
      ->capture_default_str();
  cmd->add_option("--jobs", o.config.jobs, "Worker threads; worker w uses a seed derived from (seed, w)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--summation", o.summation, "Normalization summation for itm and reports")
      ->check(CLI::IsMember({"naive", "pairwise", "kahan"}))
      ->capture_default_str();
  cmd->add_option("--max-lookback", o.config.doubling.max_lookback, "Doubling cap on look-back t")
      ->capture_default_str();
  cmd->add_option("--max-blocks", o.config.read_once.max_blocks, "Read-once cap on blocks per sample")
      ->capture_default_str();
}

void finalize(CliOptions& o, const CLI::App* cmd) {
  auto& spec = o.config.dist;
  spec.family = mbd::parse_family(o.family);
  if (cmd->count("--xi")) spec.xi = o.xi;
  if (cmd->count("--alpha")) spec.alpha = o.alpha;
  if (cmd->count("--n")) spec.n = o.n;
  if (cmd->get_option_no_throw("--sampler") && cmd->count("--sampler")) o.config.sampler = mbd::parse_sampler(o.sampler);
  o.config.summation = mbd::parse_summation_mode(o.summation);
  if (cmd->get_option_no_throw("--tv-tolerance") && cmd->count("--tv-tolerance")) o.config.tv_tolerance = o.tv_tolerance;
}

std::ostream& open_output(const CliOptions& o, std::ofstream& file) {
  if (o.output.empty()) return std::cout;
  file.open(o.output, std::ios::binary);
  if (!file) throw mbd::UsageError("cannot open output file " + o.output);
  return file;
}

int cmd_kernel(CliOptions& o) {
  const auto d = mbd::make_distribution(o.config.dist);
  const auto k = mbd::build_kernel(d);
  std::ofstream file;
  open_output(o, file) << mbd::kernel_json(k).dump(2) << '\n';
  if (!mbd::validate_monotone(k).passes()) {
    std::cerr << "kernel fails the monotonicity check\n";
    return kExitFailure;
  }
  return 0;
}

int cmd_bounds(CliOptions& o) {
  const auto d = mbd::make_distribution(o.config.dist);
  if (d.size_n() < 1) throw std::invalid_argument("bounds need at least two states (N >= 1)");
  const auto k = mbd::build_kernel(d);
  const auto b = mbd::compute_bounds(d, k, o.config.block_multiplier);
  std::ofstream file;
  open_output(o, file) << mbd::bounds_json(b).dump(2) << '\n';
  return 0;
}

int cmd_sample(CliOptions& o) {
  const auto d = mbd::make_distribution(o.config.dist);
  const auto k = mbd::build_kernel(d);
  const auto samples = mbd::run_samples(o.config, d, k);
  std::ofstream file;
  auto& out = open_output(o, file);
  if (o.out_format == "csv") {
    for (const auto& s : samples) out << s.value << ',' << s.uniforms_used << '\n';
    return 0;
  }
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json used = nlohmann::json::array();
  for (const auto& s : samples) {
    values.push_back(s.value);
    used.push_back(s.uniforms_used);
  }
  nlohmann::json doc = {{"config", mbd::to_json(o.config)}, {"values", values}, {"uniforms_used", used}};
  if (o.config.sampler == mbd::SamplerKind::read_once) {
    doc["config"]["block_size"] = mbd::block_size_for(d, k, o.config.block_multiplier);
  }
  out << doc.dump() << '\n';
  return 0;
}

int cmd_report(CliOptions& o, bool benchmark) {
  const auto report = benchmark ? mbd::bench(o.config) : mbd::verify(o.config);
  std::ofstream file;
  open_output(o, file) << report.json.dump(2) << '\n';
  return report.pass ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect sampling from finite discrete distributions with monotone birth-and-death chains"};
  app.require_subcommand(1);
  CliOptions o;

  auto* kernel = app.add_subcommand("kernel", "Dump the birth-and-death kernel as JSON");
  add_distribution_flags(kernel, o);

  auto* bounds = app.add_subcommand("bounds", "Analytical running-time bounds as JSON");
  add_distribution_flags(bounds, o);
  bounds->add_option("--block-multiplier", o.config.block_multiplier, "b in B = b*ceil(theta)*N")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "Draw samples");
  add_distribution_flags(sample, o);
  add_sampling_flags(sample, o);
  sample->add_option("--sampler", o.sampler, "Sampler")
      ->check(CLI::IsMember({"doubling", "readonce", "itm"}))
      ->capture_default_str();
  sample->add_option("--out", o.out_format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Sample and check exactness and running-time bounds");
  add_distribution_flags(verify, o);
  add_sampling_flags(verify, o);
  verify->add_option("--sampler", o.sampler, "Sampler")
      ->check(CLI::IsMember({"doubling", "readonce", "itm"}))
      ->capture_default_str();
  verify->add_option("--significance", o.config.significance, "Chi-square rejection level")->capture_default_str();
  verify->add_option("--tv-tolerance", o.tv_tolerance, "Override the TV-distance tolerance");

  auto* bench = app.add_subcommand("bench", "Compare doubling, read-once and inverse transform");
  add_distribution_flags(bench, o);
  add_sampling_flags(bench, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    finalize(o, cmd);
    if (cmd == kernel) return cmd_kernel(o);
    if (cmd == bounds) return cmd_bounds(o);
    if (cmd == sample) return cmd_sample(o);
    if (cmd == verify) return cmd_report(o, false);
    if (cmd == bench) return cmd_report(o, true);
  } catch (const mbd::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
