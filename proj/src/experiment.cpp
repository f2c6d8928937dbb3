#include "mbd/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "mbd/rng.hpp"

namespace mbd {

using nlohmann::json;

Family parse_family(const std::string& s) {
  if (s == "geometric") return Family::geometric;
  if (s == "zipf") return Family::zipf;
  if (s == "file") return Family::file;
  throw UsageError("unknown distribution family '" + s + "'");
}

SamplerKind parse_sampler(const std::string& s) {
  if (s == "doubling") return SamplerKind::doubling;
  if (s == "readonce") return SamplerKind::read_once;
  if (s == "itm") return SamplerKind::inverse_transform;
  throw UsageError("unknown sampler '" + s + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::geometric: return "geometric";
    case Family::zipf: return "zipf";
    case Family::file: return "file";
  }
  return "?";
}

std::string to_string(SamplerKind s) {
  switch (s) {
    case SamplerKind::doubling: return "doubling";
    case SamplerKind::read_once: return "readonce";
    case SamplerKind::inverse_transform: return "itm";
  }
  return "?";
}

json to_json(const ExperimentConfig& c) {
  json dist = {{"family", to_string(c.dist.family)}};
  if (c.dist.xi) dist["xi"] = *c.dist.xi;
  if (c.dist.alpha) dist["alpha"] = *c.dist.alpha;
  if (c.dist.n) dist["n"] = *c.dist.n;
  if (c.dist.family == Family::file) dist["weights_file"] = c.dist.weights_file;
  return {
      {"distribution", dist},
      {"sampler", to_string(c.sampler)},
      {"count", c.count},
      {"seed", c.seed},
      {"block_multiplier", c.block_multiplier},
      {"jobs", c.jobs},
      {"summation", std::string(to_string(c.summation))},
      {"significance", c.significance},
  };
}

TargetDistribution make_distribution(const DistributionSpec& spec) {
  switch (spec.family) {
    case Family::geometric:
      if (!spec.xi || !spec.n) throw UsageError("geometric distribution needs --xi and --n");
      return TargetDistribution::geometric(*spec.xi, *spec.n);
    case Family::zipf:
      if (!spec.alpha || !spec.n) throw UsageError("zipf distribution needs --alpha and --n");
      return TargetDistribution::zipf(*spec.alpha, *spec.n);
    case Family::file:
      if (spec.weights_file.empty()) throw UsageError("file distribution needs --weights-file");
      return load_weights_file(spec.weights_file);
  }
  throw UsageError("unknown distribution family");
}

std::uint64_t block_size_for(const TargetDistribution& d, const BDKernel& k, int block_multiplier) {
  if (d.size_n() == 0) return 1;
  return default_block_size(theta(d, k), d.size_n(), block_multiplier);
}

std::vector<SampleResult> run_samples(const ExperimentConfig& config, const TargetDistribution& d, const BDKernel& k) {
  const unsigned jobs = std::max(1u, config.jobs);
  const std::uint64_t block =
      config.sampler == SamplerKind::read_once ? block_size_for(d, k, config.block_multiplier) : 0;
  std::optional<InverseTransformSampler> itm;
  if (config.sampler == SamplerKind::inverse_transform) itm.emplace(d, config.summation);

  std::vector<std::vector<SampleResult>> parts(jobs);
  std::vector<std::exception_ptr> errors(jobs);

  auto worker = [&](unsigned w) {
    try {
      const std::uint64_t share = config.count / jobs + (w < config.count % jobs ? 1 : 0);
      const std::uint64_t seed = derive_seed(config.seed, w);
      auto& out = parts[w];
      out.reserve(share);
      switch (config.sampler) {
        case SamplerKind::doubling: {
          PastBuffer past(seed);
          for (std::uint64_t i = 0; i < share; ++i) {
            past.clear();
            out.push_back(doubling_sample(k, past, config.doubling));
          }
          break;
        }
        case SamplerKind::read_once: {
          UniformStream stream(seed);
          for (std::uint64_t i = 0; i < share; ++i) out.push_back(read_once_sample(k, block, stream, config.read_once));
          break;
        }
        case SamplerKind::inverse_transform: {
          UniformStream stream(seed);
          for (std::uint64_t i = 0; i < share; ++i) out.push_back(itm->sample(stream));
          break;
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SampleResult> all;
  all.reserve(config.count);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

double default_tv_tolerance(std::size_t num_states, std::uint64_t count) {
  const double n = static_cast<double>(count);
  const double mean_bound = 0.5 * std::sqrt(static_cast<double>(num_states) / n);
  const double deviation = std::sqrt(std::log(1e6) / (2.0 * n));
  return mean_bound + deviation;
}

json kernel_json(const BDKernel& k) {
  const auto report = validate_monotone(k);
  json out = {
      {"n", k.size_n()},
      {"p", std::vector<double>(k.up().begin(), k.up().end())},
      {"q", std::vector<double>(k.down().begin(), k.down().end())},
      {"r", std::vector<double>(k.hold().begin(), k.hold().end())},
  };
  if (k.size_n() == 0) {
    out["monotone_slack_min"] = nullptr;
  } else {
    out["monotone_slack_min"] = report.min_slack();
  }
  return out;
}

json bounds_json(const BoundSet& b) {
  json simple = json::array();
  for (const auto& c : b.simple.candidates) {
    simple.push_back({{"kind", std::string(to_string(c.kind))}, {"constant", c.constant}, {"value", c.value}});
  }
  const auto& best = b.simple.best();
  json doubling_tail = json::object();
  for (int k : {16, 32, 44}) doubling_tail[std::to_string(k)] = b.doubling.tail(k);
  json readonce_tail = json::object();
  for (int k = 1; k <= 5; ++k) readonce_tail[std::to_string(k)] = b.read_once.tail(k);
  json scan = json::array();
  for (int m = 3; m <= 12; ++m) {
    scan.push_back({{"b", m}, {"beta", beta(m)}, {"objective", block_objective(m)}});
  }
  return {
      {"n", b.n},
      {"theta", b.theta},
      {"e_t0n", b.e_t0n},
      {"e_tn0", b.e_tn0},
      {"coalescence_bound", b.coalescence_bound},
      {"doubling_mean_bound", b.doubling.mean},
      {"doubling_tail", doubling_tail},
      {"block_multiplier", b.read_once.multiplier},
      {"block_size", b.read_once.block_size},
      {"beta", b.read_once.beta},
      {"readonce_mean_bound", b.read_once.mean},
      {"readonce_tail", readonce_tail},
      {"simple_bounds",
       {{"constants",
         {{"c_geo_lower", b.simple.c_geo_lower},
          {"c_geo_upper", b.simple.c_geo_upper},
          {"c_tail_lower", b.simple.c_tail_lower},
          {"c_tail_upper", b.simple.c_tail_upper},
          {"max_inverse_up", b.simple.max_inverse_up},
          {"source", "data-derived"}}},
        {"candidates", simple},
        {"best", {{"kind", std::string(to_string(best.kind))}, {"value", best.value}}}}},
      {"b_scan", scan},
      {"optimal_block_multiplier", optimal_block_multiplier()},
  };
}

namespace {

json to_json(const TimeStats& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"sd", s.sd}, {"q50", s.q50},
          {"q90", s.q90},     {"q99", s.q99},   {"max", s.max}};
}

json to_json(const BoundCheck& c) {
  return {{"name", c.name}, {"empirical", c.empirical}, {"bound", c.bound}, {"allowance", c.allowance}, {"pass", c.pass}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::vector<std::uint64_t> uniforms_of(const std::vector<SampleResult>& samples) {
  std::vector<std::uint64_t> t;
  t.reserve(samples.size());
  for (const auto& s : samples) t.push_back(s.uniforms_used);
  return t;
}

}  // namespace

RunReport verify(const ExperimentConfig& config) {
  if (config.count < 1) throw UsageError("--count must be >= 1");
  const auto d = make_distribution(config.dist);
  const auto k = build_kernel(d);
  const auto samples = run_samples(config, d, k);

  std::vector<int> values;
  values.reserve(samples.size());
  for (const auto& s : samples) values.push_back(s.value);
  const auto hist = make_histogram(values, d.num_states());
  const auto pi = d.normalized_pi(config.summation);
  const double tv = total_variation(hist, pi);
  const double tv_tol = config.tv_tolerance.value_or(default_tv_tolerance(d.num_states(), config.count));
  const auto times = uniforms_of(samples);

  json cfg = to_json(config);
  json report = {{"config", cfg}, {"histogram", hist}, {"tv_distance", tv}, {"tv_tolerance", tv_tol}};
  bool pass = tv <= tv_tol;

  if (d.size_n() >= 1) {
    const auto chi = chi_square_test(hist, pi);
    report["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"bins", chi.bins}, {"p_value", chi.p_value}};
    pass = pass && chi.p_value >= config.significance;
  } else {
    report["chi_square"] = nullptr;
  }
  report["time_stats"] = to_json(time_stats(times));

  json checks = json::array();
  if (d.size_n() >= 1) {
    const auto bounds = compute_bounds(d, k, std::max(3, config.block_multiplier));
    report["config"]["block_size"] =
        config.sampler == SamplerKind::read_once ? block_size_for(d, k, config.block_multiplier) : 0;
    report["bounds"] = bounds_json(bounds);
    std::vector<BoundCheck> list;
    if (config.sampler == SamplerKind::doubling) list = summarize_times(times, bounds, TimeKind::doubling);
    if (config.sampler == SamplerKind::read_once && config.block_multiplier >= 3) {
      list = summarize_times(times, bounds, TimeKind::read_once);
    }
    if (config.sampler == SamplerKind::read_once) {
      const auto block = block_size_for(d, k, config.block_multiplier);
      const auto bad = std::count_if(times.begin(), times.end(), [&](auto t) { return t % block != 0; });
      list.push_back({"readonce_uniforms_divisible_by_B", static_cast<double>(bad), 0.0, 0.0, bad == 0});
    }
    for (const auto& c : list) {
      checks.push_back(to_json(c));
      pass = pass && c.pass;
    }
  } else {
    report["bounds"] = nullptr;
  }
  report["bound_checks"] = checks;
  report["pass"] = pass;
  report["generated_at"] = utc_timestamp();
  return {std::move(report), pass};
}

RunReport bench(const ExperimentConfig& config) {
  if (config.count < 1) throw UsageError("--count must be >= 1");
  const auto d = make_distribution(config.dist);
  const auto k = build_kernel(d);
  json report = {{"config", to_json(config)}};
  json per = json::object();
  bool pass = true;

  std::optional<BoundSet> bounds;
  if (d.size_n() >= 1) {
    bounds = compute_bounds(d, k, std::max(3, config.block_multiplier));
    report["bounds"] = bounds_json(*bounds);
  }

  for (auto kind : {SamplerKind::doubling, SamplerKind::read_once, SamplerKind::inverse_transform}) {
    ExperimentConfig c = config;
    c.sampler = kind;
    c.jobs = 1;
    const auto start = std::chrono::steady_clock::now();
    const auto samples = run_samples(c, d, k);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    const auto times = uniforms_of(samples);
    const auto st = time_stats(times);
    json entry = {{"seconds_per_sample", elapsed.count() / static_cast<double>(samples.size())},
                  {"uniforms_per_sample", to_json(st)}};
    if (bounds && kind == SamplerKind::doubling) {
      const auto chk = check_mean("doubling_mean<=4*theta*N", times, bounds->doubling.mean);
      entry["check"] = to_json(chk);
      pass = pass && chk.pass;
    }
    if (bounds && kind == SamplerKind::read_once && config.block_multiplier >= 3) {
      const auto chk = check_mean("readonce_mean<=2B/(1-beta)", times, bounds->read_once.mean);
      entry["check"] = to_json(chk);
      pass = pass && chk.pass;
    }
    per[to_string(kind)] = entry;
  }
  report["samplers"] = per;
  report["pass"] = pass;
  report["generated_at"] = utc_timestamp();
  return {std::move(report), pass};
}

}  // namespace mbd
