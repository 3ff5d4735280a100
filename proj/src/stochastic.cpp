#include "temprisk/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace temprisk {

namespace {

constexpr std::uint64_t kParamStream = 0;
constexpr std::uint64_t kShiftStream = 1;

}  // namespace

ShiftDistribution ShiftDistribution::deterministic(int k) {
  ShiftDistribution s;
  s.kind_ = Kind::Deterministic;
  s.offset_ = k;
  return s;
}

ShiftDistribution ShiftDistribution::uniform(int d) {
  if (d < 0) throw ValidationError("uniform shift half-width must be non-negative");
  ShiftDistribution s;
  s.kind_ = Kind::UniformInt;
  s.half_width_ = d;
  return s;
}

ShiftDistribution ShiftDistribution::poisson_delay(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("poisson delay rate must be positive and finite");
  }
  ShiftDistribution s;
  s.kind_ = Kind::Poisson;
  s.rate_ = lambda;
  return s;
}

int ShiftDistribution::draw(Rng& rng) const {
  switch (kind_) {
    case Kind::Deterministic: return offset_;
    case Kind::UniformInt: return static_cast<int>(rng.uniform_int(-half_width_, half_width_));
    case Kind::Poisson: return -static_cast<int>(rng.poisson(rate_));
  }
  return 0;
}

std::optional<int> ShiftDistribution::bound() const {
  switch (kind_) {
    case Kind::Deterministic: return std::abs(offset_);
    case Kind::UniformInt: return half_width_;
    case Kind::Poisson: return std::nullopt;
  }
  return std::nullopt;
}

std::string ShiftDistribution::str() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Deterministic: os << "deterministic(" << offset_ << ")"; break;
    case Kind::UniformInt: os << "uniform(" << -half_width_ << "," << half_width_ << ")"; break;
    case Kind::Poisson: os << "poisson_delay(" << rate_ << ")"; break;
  }
  return os.str();
}

bool ProcessModel::shift_only() const {
  return std::all_of(noise.begin(), noise.end(), [](const ParamNoise& p) { return p.sigma == 0.0; });
}

void ProcessModel::validate() const {
  if (!generator) throw ValidationError("process model has no generator");
  if (shifts.size() != groups.size()) {
    throw ValidationError("process model has " + std::to_string(shifts.size()) +
                          " shift distributions for " + std::to_string(groups.size()) + " groups");
  }
  for (const auto& p : noise) {
    if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) {
      throw ValidationError("noise sigma for '" + p.name + "' must be finite and non-negative");
    }
    if (!nominal.contains(p.name)) {
      throw ValidationError("noise applied to unknown parameter '" + p.name + "'");
    }
  }
}

RealizationDraw draw(const ProcessModel& m, std::size_t i) {
  RealizationDraw d;
  d.params = m.nominal;
  Rng params(m.seed, i, kParamStream);
  for (const auto& p : m.noise) d.params[p.name] += p.sigma * params.normal();
  Rng shifts(m.seed, i, kShiftStream);
  d.shifts.reserve(m.shifts.size());
  for (const auto& s : m.shifts) d.shifts.push_back(s.draw(shifts));
  return d;
}

Signal realize(const ProcessModel& m, std::size_t i) {
  m.validate();
  const auto d = draw(m, i);
  return shift_grouped(m.generator(d.params), m.groups, d.shifts);
}

// Adding 0.0 turns -0 into 0.
double cost_of(const RobustnessValue& v) { return -static_cast<double>(v.signed_value()) + 0.0; }

unsigned worker_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("TEMPRISK_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v > 0) n = static_cast<unsigned>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

McResult mc_risk(const ProcessModel& m, const McConfig& cfg) {
  m.validate();
  if (cfg.n == 0) throw ValidationError("realization count N must be at least 1");
  if (cfg.r < 0) throw ValidationError("robustness bound r must be non-negative");
  if (!cfg.checker) throw ValidationError("Monte Carlo configuration has no checker");

  McResult res;
  res.costs.resize(cfg.n);
  res.signs.resize(cfg.n, Sign::Positive);
  std::vector<std::uint8_t> saturated(cfg.n, 0);

  std::optional<Signal> shared_base;
  if (m.shift_only()) shared_base.emplace(m.generator(m.nominal));

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> calls{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    std::optional<ShiftLattice> lattice;
    if (shared_base) lattice.emplace(*shared_base, *cfg.checker, m.groups);
    std::size_t local_calls = 0;
    try {
      for (std::size_t i = next++; i < cfg.n; i = next++) {
        const auto d = draw(m, i);
        RobustnessValue v;
        if (shared_base) {
          v = cfg.kind == RobustnessKind::Eta ? lattice->eta_at(d.shifts, cfg.r)
                                              : lattice->theta_at(d.shifts, cfg.r);
        } else {
          const Signal base = m.generator(d.params);
          ShiftLattice own(base, *cfg.checker, m.groups);
          v = cfg.kind == RobustnessKind::Eta ? own.eta_at(d.shifts, cfg.r)
                                              : own.theta_at(d.shifts, cfg.r);
          local_calls += own.checker_calls();
        }
        res.costs[i] = cost_of(v);
        res.signs[i] = v.sign;
        saturated[i] = v.saturated ? 1 : 0;
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = cfg.n;
    }
    if (lattice) local_calls += lattice->checker_calls();
    calls += local_calls;
  };

  const unsigned workers = std::min<std::size_t>(worker_count(cfg.threads), cfg.n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  res.checker_calls = calls;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    res.saturated_count += saturated[i];
    res.violation_count += res.signs[i] == Sign::Negative;
  }
  try {
    RiskReport rep = make_report(SampleSet(res.costs), cfg.betas, cfg.delta);
    rep.violation_count = res.violation_count;
    rep.saturated_count = res.saturated_count;
    res.report = std::move(rep);
  } catch (const InsufficientSamplesError& e) {
    res.risk_error = e.what();
    res.required_samples = e.required_samples();
  }
  return res;
}

}  // namespace temprisk
