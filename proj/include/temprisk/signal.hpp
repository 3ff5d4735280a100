#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "temprisk/error.hpp"

namespace temprisk {

/// Integer time index (one sampling step).
using Step = std::int64_t;

/// Per-component integer time shifts.
using ShiftVector = Eigen::VectorXi;

/**
 * Discrete-time multivariate signal stored on the window [t_min, t_max].
 *
 * Samples outside the stored window repeat the nearest endpoint column, so a
 * signal is defined on all integer times. `dt` only records the sampling
 * period; every operation here works in integer steps.
 */
template <typename Scalar>
class BasicSignal {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicSignal(Matrix values, Step t_min, double dt = 1.0)
      : values_(std::move(values)), t_min_(t_min), dt_(dt) {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw ValidationError("signal needs at least one component and one sample");
    }
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
      throw ValidationError("signal dt must be positive and finite");
    }
    if (!values_.allFinite()) {
      throw ValidationError("signal values must be finite");
    }
  }

  Eigen::Index components() const { return values_.rows(); }
  Eigen::Index length() const { return values_.cols(); }
  Step t_min() const { return t_min_; }
  Step t_max() const { return t_min_ + static_cast<Step>(values_.cols()) - 1; }
  double dt() const { return dt_; }
  const Matrix& values() const { return values_; }

  /// Column index used for time t under endpoint hold.
  Eigen::Index column(Step t) const {
    return static_cast<Eigen::Index>(std::clamp(t, t_min_, t_max()) - t_min_);
  }

  Scalar value(Eigen::Index i, Step t) const { return values_(i, column(t)); }

  Vector sample(Step t) const { return values_.col(column(t)); }

  bool operator==(const BasicSignal& o) const {
    return t_min_ == o.t_min_ && dt_ == o.dt_ && values_.rows() == o.values_.rows() &&
           values_.cols() == o.values_.cols() && values_ == o.values_;
  }

 private:
  Matrix values_;
  Step t_min_;
  double dt_;
};

using Signal = BasicSignal<double>;

template <typename Scalar>
typename BasicSignal<Scalar>::Vector sample(const BasicSignal<Scalar>& s, Step t) {
  return s.sample(t);
}

/**
 * Partition of the components {0..n-1} into groups that are shifted together.
 * Component indices are 0-based here; text forms use 1-based indices.
 */
class GroupPartition {
 public:
  GroupPartition(Eigen::Index n, std::vector<std::vector<int>> groups);

  /// Every component in its own group.
  static GroupPartition per_component(Eigen::Index n);
  /// All components in one group.
  static GroupPartition single(Eigen::Index n);
  /// Parses "1,2;3,4" (1-based component lists separated by ';').
  static GroupPartition parse(Eigen::Index n, const std::string& text);

  Eigen::Index components() const { return n_; }
  std::size_t size() const { return groups_.size(); }
  const std::vector<int>& group(std::size_t j) const { return groups_[j]; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }

  /// Expands one shift per group into one shift per component.
  ShiftVector expand(std::span<const int> group_shifts) const;

  /// Canonical 1-based text form, e.g. "1,2;3,4".
  std::string str() const;

  bool operator==(const GroupPartition&) const = default;

 private:
  Eigen::Index n_;
  std::vector<std::vector<int>> groups_;
};

/**
 * Lightweight read-only view of a signal with per-component shifts applied:
 * component i at time t reads the base component i at t + offsets[i].
 */
template <typename Scalar>
class BasicSignalView {
 public:
  explicit BasicSignalView(const BasicSignal<Scalar>& base)
      : base_(&base), offsets_(ShiftVector::Zero(base.components())) {}

  BasicSignalView(const BasicSignal<Scalar>& base, ShiftVector offsets)
      : base_(&base), offsets_(std::move(offsets)) {
    if (offsets_.size() != base.components()) {
      throw ShapeError("shift vector has " + std::to_string(offsets_.size()) +
                       " entries, signal has " + std::to_string(base.components()) +
                       " components");
    }
  }

  const BasicSignal<Scalar>& base() const { return *base_; }
  const ShiftVector& offsets() const { return offsets_; }
  Eigen::Index components() const { return base_->components(); }

  Scalar value(Eigen::Index i, Step t) const { return base_->value(i, t + offsets_[i]); }

  /// Writes the shifted sample at t into out (size components()).
  void sample_into(Step t, std::span<Scalar> out) const {
    for (Eigen::Index i = 0; i < components(); ++i) out[i] = value(i, t);
  }

  /// Smallest window outside of which every component is constant.
  Step support_min() const { return base_->t_min() - offsets_.maxCoeff(); }
  Step support_max() const { return base_->t_max() - offsets_.minCoeff(); }

 private:
  const BasicSignal<Scalar>* base_;
  ShiftVector offsets_;
};

using SignalView = BasicSignalView<double>;

/// Materializes a view over its support window. Exact under endpoint hold.
template <typename Scalar>
BasicSignal<Scalar> materialize(const BasicSignalView<Scalar>& v) {
  const Step lo = v.support_min();
  const Step hi = v.support_max();
  typename BasicSignal<Scalar>::Matrix m(v.components(), hi - lo + 1);
  for (Step t = lo; t <= hi; ++t) {
    for (Eigen::Index i = 0; i < v.components(); ++i) m(i, t - lo) = v.value(i, t);
  }
  return BasicSignal<Scalar>(std::move(m), lo, v.base().dt());
}

/// x_k(t) = x(t + k) for every component.
template <typename Scalar>
BasicSignal<Scalar> shift_sync(const BasicSignal<Scalar>& s, int k) {
  return BasicSignal<Scalar>(s.values(), s.t_min() - k, s.dt());
}

/// Component i of the result at t equals component i of s at t + k[i].
template <typename Scalar>
BasicSignal<Scalar> shift_async(const BasicSignal<Scalar>& s, const ShiftVector& k) {
  return materialize(BasicSignalView<Scalar>(s, k));
}

/// shift_async with every component of group j shifted by g[j].
template <typename Scalar>
BasicSignal<Scalar> shift_grouped(const BasicSignal<Scalar>& s, const GroupPartition& p,
                                  std::span<const int> g) {
  if (p.components() != s.components()) {
    throw ShapeError("partition covers " + std::to_string(p.components()) +
                     " components, signal has " + std::to_string(s.components()));
  }
  return shift_async(s, p.expand(g));
}

/// True when a and b agree at every t in [lo, hi].
template <typename Scalar>
bool sample_equal(const BasicSignal<Scalar>& a, const BasicSignal<Scalar>& b, Step lo, Step hi) {
  if (a.components() != b.components()) return false;
  for (Step t = lo; t <= hi; ++t) {
    if (a.sample(t) != b.sample(t)) return false;
  }
  return true;
}

}  // namespace temprisk
