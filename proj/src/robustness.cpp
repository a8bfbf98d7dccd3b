#include "estimability/robustness.hpp"

#include "estimability/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

namespace estimability {

namespace {

constexpr double kWeightTolerance = 1e-12;

std::vector<Atom> sorted_merged(const std::vector<Atom> &atoms) {
  std::vector<Atom> sorted = atoms;
  std::sort(sorted.begin(), sorted.end(),
            [](const Atom &a, const Atom &b) { return a.location < b.location; });
  std::vector<Atom> merged;
  for (const auto &a : sorted) {
    if (!merged.empty() && merged.back().location == a.location)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  return merged;
}

double total_weight(const std::vector<Atom> &atoms) {
  return std::accumulate(atoms.begin(), atoms.end(), 0.0,
                         [](double acc, const Atom &a) { return acc + a.weight; });
}

double mean_of(const std::vector<Atom> &atoms) {
  double sum = 0.0;
  for (const auto &a : atoms)
    sum += a.weight * a.location;
  return sum / total_weight(atoms);
}

double median_of(const std::vector<Atom> &atoms) {
  const auto sorted = sorted_merged(atoms);
  const double half = 0.5 * total_weight(sorted);
  double cumulative = 0.0;
  for (const auto &a : sorted) {
    cumulative += a.weight;
    if (cumulative >= half - kWeightTolerance)
      return a.location;
  }
  return sorted.back().location;
}

double trimmed_mean_of(const std::vector<Atom> &atoms, double trim) {
  const auto sorted = sorted_merged(atoms);
  const double total = total_weight(sorted);
  const double lower = trim * total;
  const double upper = (1.0 - trim) * total;
  double cumulative = 0.0;
  double kept = 0.0;
  double sum = 0.0;
  for (const auto &a : sorted) {
    const double start = cumulative;
    cumulative += a.weight;
    const double mass = std::min(cumulative, upper) - std::max(start, lower);
    if (mass > 0.0) {
      kept += mass;
      sum += mass * a.location;
    }
  }
  return sum / kept;
}

} // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty())
    throw InvalidInput("distribution needs at least one atom");
  for (const auto &a : atoms_) {
    if (!std::isfinite(a.location))
      throw InvalidInput("atom locations must be finite");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw InvalidInput("atom weights must be positive");
  }
  const double total = total_weight(atoms_);
  if (std::abs(total - 1.0) > kWeightTolerance)
    throw InvalidInput("atom weights sum to " + std::to_string(total) + ", expected 1");
}

EmpiricalDistribution EmpiricalDistribution::normalized(std::vector<Atom> atoms) {
  if (atoms.empty())
    throw InvalidInput("distribution needs at least one atom");
  for (const auto &a : atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw InvalidInput("atom weights must be positive");
  }
  const double total = total_weight(atoms);
  for (auto &a : atoms)
    a.weight /= total;
  return EmpiricalDistribution(std::move(atoms));
}

EmpiricalDistribution EmpiricalDistribution::uniform(const std::vector<double> &locations) {
  std::vector<Atom> atoms;
  atoms.reserve(locations.size());
  for (double x : locations)
    atoms.push_back({x, 1.0});
  return normalized(std::move(atoms));
}

Functional Functional::trimmed_mean(double trim_fraction) {
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5))
    throw InvalidInput("trim fraction must lie in [0, 0.5)");
  return Functional(FunctionalKind::TrimmedMean, trim_fraction);
}

Functional Functional::parse(std::string_view text) {
  if (text == "mean")
    return mean();
  if (text == "median")
    return median();
  constexpr std::string_view prefix = "trimmed:";
  if (text.starts_with(prefix)) {
    const auto number = text.substr(prefix.size());
    double trim = 0.0;
    const auto *end = number.data() + number.size();
    const auto [ptr, ec] = std::from_chars(number.data(), end, trim);
    if (number.empty() || ec != std::errc{} || ptr != end)
      throw InvalidInput("invalid trim fraction '" + std::string(number) + "'");
    return trimmed_mean(trim);
  }
  throw InvalidInput("unknown functional '" + std::string(text) +
                     "' (expected mean, median or trimmed:<frac>)");
}

std::string Functional::name() const {
  switch (kind_) {
  case FunctionalKind::Mean:
    return "mean";
  case FunctionalKind::Median:
    return "median";
  case FunctionalKind::TrimmedMean: {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, trim_);
    return "trimmed:" + std::string(buf, ptr);
  }
  }
  return "unknown";
}

double evaluate(const Functional &t, const EmpiricalDistribution &f) {
  const auto &atoms = f.atoms();
  switch (t.kind()) {
  case FunctionalKind::Mean:
    return mean_of(atoms);
  case FunctionalKind::Median:
    return median_of(atoms);
  case FunctionalKind::TrimmedMean:
    return trimmed_mean_of(atoms, t.trim_fraction());
  }
  throw InvalidInput("unknown functional");
}

EmpiricalDistribution contaminate(const EmpiricalDistribution &f, double eps, double y) {
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidInput("contamination fraction must lie in (0, 1)");
  if (!std::isfinite(y))
    throw InvalidInput("contamination point must be finite");
  std::vector<Atom> atoms = f.atoms();
  bool merged = false;
  for (auto &a : atoms) {
    a.weight *= 1.0 - eps;
    if (a.location == y && !merged) {
      a.weight += eps;
      merged = true;
    }
  }
  if (!merged)
    atoms.push_back({y, eps});
  return EmpiricalDistribution(std::move(atoms));
}

double influence_function(const Functional &t, const EmpiricalDistribution &f, double y) {
  constexpr std::array<double, 3> ladder{1e-3, 1e-4, 1e-5};
  const double base = evaluate(t, f);
  std::array<double, 3> quotient{};
  for (std::size_t i = 0; i < ladder.size(); ++i)
    quotient[i] = (evaluate(t, contaminate(f, ladder[i], y)) - base) / ladder[i];

  // The ladder ratio is 10, so each extrapolation removes one power of ε.
  const double first = (10.0 * quotient[1] - quotient[0]) / 9.0;
  const double second = (10.0 * quotient[2] - quotient[1]) / 9.0;
  const double extrapolated = (100.0 * second - first) / 99.0;

  double scale = std::max(1.0, std::abs(y));
  for (const auto &a : f.atoms())
    scale = std::max(scale, std::abs(a.location));
  const double spread = std::abs(first - second);
  if (spread > 1e-3 * std::max(std::abs(second), 1e-6 * scale))
    throw NumericalFailure("influence quotient at y = " + std::to_string(y) +
                           " does not settle as epsilon shrinks (" + std::to_string(quotient[0]) +
                           ", " + std::to_string(quotient[1]) + ", " +
                           std::to_string(quotient[2]) + ")");
  return extrapolated;
}

InfluenceProfile influence_profile(const Functional &t, const EmpiricalDistribution &f,
                                   const std::vector<double> &probe_points) {
  if (probe_points.empty())
    throw InvalidInput("influence profile needs at least one probe");
  if (!std::is_sorted(probe_points.begin(), probe_points.end()))
    throw InvalidInput("probe points must be sorted");

  InfluenceProfile profile;
  profile.probe_points = probe_points;
  profile.values.reserve(probe_points.size());
  for (double y : probe_points)
    profile.values.push_back(influence_function(t, f, y));

  // Growth test: slope of |IF| against |y| over the outer 20% of probes,
  // widened until at least two distinct magnitudes are included.
  std::vector<std::size_t> order(probe_points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(probe_points[a]) > std::abs(probe_points[b]);
  });
  auto count = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(order.size()))));
  count = std::min(count, order.size());
  while (count < order.size() &&
         std::abs(probe_points[order[count - 1]]) == std::abs(probe_points[order[0]]))
    ++count;

  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    x_mean += std::abs(probe_points[order[i]]);
    y_mean += std::abs(profile.values[order[i]]);
  }
  x_mean /= static_cast<double>(count);
  y_mean /= static_cast<double>(count);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = std::abs(probe_points[order[i]]) - x_mean;
    sxy += dx * (std::abs(profile.values[order[i]]) - y_mean);
    sxx += dx * dx;
  }
  profile.unbounded_flag = sxx > 0.0 && sxy / sxx > 0.5;

  if (!profile.unbounded_flag) {
    double worst = 0.0;
    for (double v : profile.values)
      worst = std::max(worst, std::abs(v));
    profile.gross_error_sensitivity = worst;
  }

  for (const auto &a : f.atoms()) {
    const double v = influence_function(t, f, a.location);
    profile.asymptotic_variance += a.weight * v * v;
  }
  return profile;
}

SensitivityAttack sensitivity_attack(const EmpiricalDistribution &f, double eps, double target) {
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidInput("attack needs a contamination distance in (0, 1); at 0 the mean cannot "
                       "move");
  if (!std::isfinite(target))
    throw InvalidInput("attack target must be finite");
  const double mean = evaluate(Functional::mean(), f);
  SensitivityAttack attack;
  attack.y = (target - (1.0 - eps) * mean) / eps;
  attack.achieved = evaluate(Functional::mean(), contaminate(f, eps, attack.y));
  attack.distance = eps;
  return attack;
}

} // namespace estimability
