#include "gipsa/bench/algorithms.hpp"

#include <charconv>
#include <cmath>

#include "gipsa/bench/trace_csv.hpp"
#include "gipsa/errors.hpp"

namespace gipsa::bench {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = text.find(sep);
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double number(std::string_view text, std::string_view token) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw InvalidInput("algorithm '" + std::string(token) + "': bad number '" +
                       std::string(text) + "'");
  }
  return v;
}

std::string num(double v) { return format_double(v); }

}  // namespace

std::string AlgorithmSpec::token() const {
  switch (kind) {
    case Kind::Fbs:
      return lambda_times_L == 1.0 ? "fbs" : "fbs:" + num(lambda_times_L);
    case Kind::Ifbs:
      return "ifbs:" + num(alpha) + (lambda_times_L == 1.0 ? "" : ":" + num(lambda_times_L));
    case Kind::IfbsAlphaStar:
      return "ifbs:alpha*";
    case Kind::Gipsa:
      return "gipsa:" + num(alpha) + ":" + num(beta) + ":" + num(lambda_times_L);
    case Kind::FistaCd:
      return "fista-cd:" + num(a);
    case Kind::FistaCdRestart:
      return "fista-cd-re:" + num(a);
    case Kind::ConstantMomentum:
      return "cm:" + num(mu);
  }
  return "?";
}

std::string AlgorithmSpec::label() const {
  switch (kind) {
    case Kind::Fbs:
      return lambda_times_L == 1.0 ? "FBS" : "FBS(lambda=" + num(lambda_times_L) + "/L)";
    case Kind::Ifbs:
      return "I-FBS(" + num(alpha) +
             (lambda_times_L == 1.0 ? "" : ",lambda=" + num(lambda_times_L) + "/L") + ")";
    case Kind::IfbsAlphaStar:
      return "I-FBS(alpha*)";
    case Kind::Gipsa:
      return "GIPSA(" + num(alpha) + "," + num(beta) + "," + num(lambda_times_L) + "/L)";
    case Kind::FistaCd:
      return a == 2.1 ? "FISTA-CD" : "FISTA-CD(a=" + num(a) + ")";
    case Kind::FistaCdRestart:
      return a == 2.1 ? "FISTA-CD-RE" : "FISTA-CD-RE(a=" + num(a) + ")";
    case Kind::ConstantMomentum:
      return "CM(mu=" + num(mu) + ")";
  }
  return "?";
}

AlgorithmSpec parse_algorithm(std::string_view token) {
  token = trim(token);
  const auto parts = split(token, ':');
  const std::string_view name = parts[0];
  const auto args = parts.size() - 1;
  auto bad = [&]() {
    return InvalidInput("unrecognized algorithm '" + std::string(token) + "'");
  };
  AlgorithmSpec spec;
  if (name == "fbs") {
    if (args > 1) throw bad();
    spec.kind = AlgorithmSpec::Kind::Fbs;
    if (args == 1) spec.lambda_times_L = number(parts[1], token);
  } else if (name == "ifbs") {
    if (args < 1 || args > 2) throw bad();
    if (parts[1] == "alpha*") {
      if (args != 1) throw bad();
      spec.kind = AlgorithmSpec::Kind::IfbsAlphaStar;
    } else {
      spec.kind = AlgorithmSpec::Kind::Ifbs;
      spec.alpha = number(parts[1], token);
      if (args == 2) spec.lambda_times_L = number(parts[2], token);
    }
  } else if (name == "gipsa") {
    if (args != 3) throw bad();
    spec.kind = AlgorithmSpec::Kind::Gipsa;
    spec.alpha = number(parts[1], token);
    spec.beta = number(parts[2], token);
    spec.lambda_times_L = number(parts[3], token);
  } else if (name == "fista-cd" || name == "fista-cd-re") {
    if (args > 1) throw bad();
    spec.kind = name == "fista-cd" ? AlgorithmSpec::Kind::FistaCd
                                   : AlgorithmSpec::Kind::FistaCdRestart;
    if (args == 1) spec.a = number(parts[1], token);
  } else if (name == "cm") {
    if (args != 1) throw bad();
    spec.kind = AlgorithmSpec::Kind::ConstantMomentum;
    spec.mu = number(parts[1], token);
  } else {
    throw bad();
  }
  if (!(spec.lambda_times_L > 0.0)) throw InvalidInput("algorithm: stepsize must be positive");
  return spec;
}

std::vector<AlgorithmSpec> parse_algorithm_list(std::string_view list) {
  std::vector<AlgorithmSpec> out;
  for (const auto part : split(list, ',')) {
    if (!trim(part).empty()) out.push_back(parse_algorithm(part));
  }
  if (out.empty()) throw InvalidInput("algorithm list is empty");
  return out;
}

std::vector<AlgorithmSpec> default_roster() {
  return parse_algorithm_list(
      "gipsa:0.42:0.6:1.39,ifbs:0,ifbs:0.4,ifbs:alpha*,ifbs:0.95,fista-cd:2.1,fista-cd-re:2.1");
}

ResolvedAlgorithm resolve(const AlgorithmSpec& spec, double L, double l_E_hat) {
  if (!(L > 0.0)) throw InvalidInput("resolve: L must be positive");
  const double lambda = spec.lambda_times_L / L;
  ResolvedAlgorithm out;
  out.label = spec.label();
  switch (spec.kind) {
    case AlgorithmSpec::Kind::Fbs:
      out.schedule = Fbs{lambda};
      break;
    case AlgorithmSpec::Kind::Ifbs:
      out.schedule = FixedIfbs{spec.alpha, lambda};
      break;
    case AlgorithmSpec::Kind::IfbsAlphaStar:
      if (!(l_E_hat > 0.0)) {
        throw InvalidInput("ifbs:alpha* needs a positive local curvature estimate");
      }
      out.schedule = ConstantMomentum{std::min(l_E_hat, L), 1.0 / L};
      break;
    case AlgorithmSpec::Kind::Gipsa:
      out.schedule = FixedGipsa{spec.alpha, spec.beta, lambda};
      break;
    case AlgorithmSpec::Kind::FistaCd:
      out.schedule = FistaCd{spec.a, 1.0 / L};
      break;
    case AlgorithmSpec::Kind::FistaCdRestart:
      out.schedule = FistaCd{spec.a, 1.0 / L};
      out.restart = true;
      break;
    case AlgorithmSpec::Kind::ConstantMomentum:
      out.schedule = ConstantMomentum{spec.mu, 1.0 / L};
      break;
  }
  check_schedule(out.schedule);
  return out;
}

}  // namespace gipsa::bench
