#include "temprisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "temprisk/error.hpp"

namespace temprisk {

namespace {

constexpr double kIntegralTol = 1e-9;

void require_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ValidationError(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

// Ceil / floor that treat values within tolerance of an integer as that integer.
double ceil_tol(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= kIntegralTol * std::max(1.0, std::abs(v)) ? r : std::ceil(v);
}

double floor_tol(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= kIntegralTol * std::max(1.0, std::abs(v)) ? r : std::floor(v);
}

std::size_t clamp_index(double idx, std::size_t n) {
  if (idx < 1.0) return 1;
  if (idx > static_cast<double>(n)) return n;
  return static_cast<std::size_t>(idx);
}

}  // namespace

SampleSet::SampleSet(std::vector<double> samples) : z_(std::move(samples)) {
  if (z_.empty()) throw ValidationError("sample set must contain at least one sample");
  for (double v : z_) {
    if (std::isnan(v)) throw ValidationError("sample set contains NaN");
  }
  std::sort(z_.begin(), z_.end());
}

std::size_t required_samples(double beta, double delta) {
  require_unit_open(beta, "beta");
  require_unit_open(delta, "delta");
  const double slack = std::min(beta, 1.0 - beta);
  return static_cast<std::size_t>(std::ceil(std::log(2.0 / delta) / (2.0 * slack * slack)));
}

VarIndices var_indices(std::size_t n, double beta, double delta) {
  require_unit_open(beta, "beta");
  require_unit_open(delta, "delta");
  if (n == 0) throw ValidationError("sample count must be positive");
  const double nd = static_cast<double>(n);
  const double gamma = std::sqrt(std::log(2.0 / delta) / (2.0 * nd));
  if (gamma > std::min(beta, 1.0 - beta)) {
    const std::size_t need = required_samples(beta, delta);
    throw InsufficientSamplesError("insufficient samples for (beta=" + std::to_string(beta) +
                                       ", delta=" + std::to_string(delta) + "): have " +
                                       std::to_string(n) + ", need at least " + std::to_string(need),
                                   need);
  }
  VarIndices out;
  out.gamma = gamma;
  out.upper = clamp_index(ceil_tol(nd * (beta + gamma)), n);
  out.lower = clamp_index(floor_tol(nd * (beta - gamma)), n);
  return out;
}

VarBounds var_bounds(const SampleSet& z, double beta, double delta) {
  const auto idx = var_indices(z.size(), beta, delta);
  return {z.order_stat(idx.lower), z.order_stat(idx.upper)};
}

double var_exact(const Pmf& pmf, double beta) {
  require_unit_open(beta, "beta");
  if (pmf.support.empty() || pmf.support.size() != pmf.prob.size()) {
    throw ValidationError("pmf needs matching, non-empty support and probability lists");
  }
  double total = 0.0;
  for (double p : pmf.prob) {
    if (!(p >= 0.0)) throw ValidationError("pmf probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("pmf probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  std::vector<std::size_t> order(pmf.support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pmf.support[a] < pmf.support[b]; });
  double cdf = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cdf += pmf.prob[order[k]];
    const bool last_of_point =
        k + 1 == order.size() || pmf.support[order[k + 1]] != pmf.support[order[k]];
    if (last_of_point && cdf >= beta - 1e-12) return pmf.support[order[k]];
  }
  return pmf.support[order.back()];
}

double cvar_estimate(const SampleSet& z, double beta) {
  require_unit_open(beta, "beta");
  const auto& s = z.sorted();
  const std::size_t n = s.size();
  const double scale = 1.0 / ((1.0 - beta) * static_cast<double>(n));
  // Objective at alpha = s[k]: alpha + scale * sum_{i > k} (s[i] - s[k]).
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + s[i];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double tail = suffix[k + 1] - static_cast<double>(n - k - 1) * s[k];
    best = std::min(best, s[k] + scale * tail);
  }
  return best;
}

double expectation(const SampleSet& z) { return z.vector().mean(); }

double empirical_quantile(const SampleSet& z, double beta) {
  require_unit_open(beta, "beta");
  return z.order_stat(clamp_index(ceil_tol(beta * static_cast<double>(z.size())), z.size()));
}

RiskReport make_report(const SampleSet& z, const std::vector<double>& betas, double delta) {
  RiskReport rep;
  rep.n = z.size();
  for (double beta : betas) {
    const auto idx = var_indices(z.size(), beta, delta);
    rep.var.push_back({beta, delta, idx.lower, idx.upper, z.order_stat(idx.lower),
                       z.order_stat(idx.upper)});
    rep.cvar.push_back({beta, cvar_estimate(z, beta)});
  }
  rep.expectation = expectation(z);
  return rep;
}

}  // namespace temprisk
