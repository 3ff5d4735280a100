#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace temprisk {

/// Cost samples sorted ascending.
class SampleSet {
 public:
  explicit SampleSet(std::vector<double> samples);

  std::size_t size() const { return z_.size(); }
  const std::vector<double>& sorted() const { return z_; }
  /// 1-based order statistic.
  double order_stat(std::size_t i) const { return z_.at(i - 1); }
  Eigen::Map<const Eigen::VectorXd> vector() const {
    return {z_.data(), static_cast<Eigen::Index>(z_.size())};
  }

 private:
  std::vector<double> z_;
};

struct VarIndices {
  std::size_t lower = 1;
  std::size_t upper = 1;
  double gamma = 0.0;
};

/// 1-based order-statistic indices bracketing VaR_beta at confidence 1 - delta.
VarIndices var_indices(std::size_t n, double beta, double delta);

/// Smallest sample count for which var_indices(n, beta, delta) is defined.
std::size_t required_samples(double beta, double delta);

struct VarBounds {
  double lower = 0.0;
  double upper = 0.0;
};

VarBounds var_bounds(const SampleSet& z, double beta, double delta);

/// A finite distribution given by support points and probabilities.
struct Pmf {
  std::vector<double> support;
  std::vector<double> prob;
};

/// inf{a : P(Z <= a) >= beta} for a finite distribution.
double var_exact(const Pmf& pmf, double beta);

double cvar_estimate(const SampleSet& z, double beta);

double expectation(const SampleSet& z);

/// Empirical beta-quantile: the ceil(beta N)-th order statistic.
double empirical_quantile(const SampleSet& z, double beta);

struct VarEntry {
  double beta = 0.0;
  double delta = 0.0;
  std::size_t lower_index = 0;
  std::size_t upper_index = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct CvarEntry {
  double beta = 0.0;
  double value = 0.0;
};

struct RiskReport {
  std::size_t n = 0;
  std::vector<VarEntry> var;
  std::vector<CvarEntry> cvar;
  double expectation = 0.0;
  std::size_t violation_count = 0;
  std::size_t saturated_count = 0;
};

/// VaR bounds for every beta at one delta, CVaR for every beta, and the mean.
/// Throws InsufficientSamplesError when any (beta, delta) pair is not estimable.
RiskReport make_report(const SampleSet& z, const std::vector<double>& betas, double delta);

}  // namespace temprisk
