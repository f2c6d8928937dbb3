#include "mbd/distribution.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace mbd {

namespace {

constexpr std::size_t kPairwiseBlock = 128;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

SummationMode parse_summation_mode(std::string_view name) {
  if (name == "naive") return SummationMode::naive;
  if (name == "pairwise") return SummationMode::pairwise;
  if (name == "kahan") return SummationMode::kahan;
  throw std::invalid_argument("unknown summation mode '" + std::string(name) + "'");
}

std::string_view to_string(SummationMode mode) {
  switch (mode) {
    case SummationMode::naive: return "naive";
    case SummationMode::pairwise: return "pairwise";
    case SummationMode::kahan: return "kahan";
  }
  return "?";
}

double naive_sum(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kPairwiseBlock) return naive_sum(values);
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double kahan_sum(std::span<const double> values) {
  double s = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double sum(std::span<const double> values, SummationMode mode) {
  switch (mode) {
    case SummationMode::naive: return naive_sum(values);
    case SummationMode::pairwise: return pairwise_sum(values);
    case SummationMode::kahan: return kahan_sum(values);
  }
  throw std::logic_error("unreachable summation mode");
}

TargetDistribution TargetDistribution::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("weights must be non-empty");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || !(w > 0.0)) {
      std::ostringstream msg;
      msg << "weight " << i << " = " << w << " violates positivity: every weight must be finite and > 0";
      throw std::invalid_argument(msg.str());
    }
  }
  return TargetDistribution(std::move(weights));
}

TargetDistribution TargetDistribution::geometric(double xi, int n) {
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("geometric: xi must lie in (0,1)");
  if (n < 1) throw std::invalid_argument("geometric: n must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) w[static_cast<std::size_t>(i)] = std::pow(xi, i);
  return from_weights(std::move(w));
}

TargetDistribution TargetDistribution::zipf(double alpha, int n) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("zipf: alpha must be > 1");
  if (n < 1) throw std::invalid_argument("zipf: n must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) w[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i + 1), -alpha);
  return from_weights(std::move(w));
}

double TargetDistribution::gamma_ratio(int i) const {
  if (i < 0 || i >= size_n()) {
    throw std::out_of_range("gamma_ratio: index " + std::to_string(i) + " outside {0.." +
                            std::to_string(size_n() - 1) + "}");
  }
  return weight(i) / weight(i + 1);
}

std::vector<double> TargetDistribution::normalized_pi(SummationMode mode) const {
  const double total = sum(weights_, mode);
  std::vector<double> pi(weights_.size());
  for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = weights_[i] / total;
  return pi;
}

std::vector<double> parse_weights(std::string_view text) {
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '[') {
    const auto doc = nlohmann::json::parse(body);
    std::vector<double> out;
    out.reserve(doc.size());
    for (const auto& v : doc) {
      if (!v.is_number()) throw std::invalid_argument("weight array must contain only numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  std::vector<double> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": not a number: '" + std::string(line) + "'");
    }
    out.push_back(value);
  }
  return out;
}

TargetDistribution load_weights_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open weights file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return TargetDistribution::from_weights(parse_weights(buf.str()));
}

}  // namespace mbd
