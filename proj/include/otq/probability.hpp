#pragma once

// Normalized distributions over the state index space.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace otq {

/// Tolerance on the unit-mass invariant of a ProbabilityVector.
inline constexpr double kMassTolerance = 1e-9;

/// Looser tolerance applied when validating user-supplied distributions.
inline constexpr double kInputMassTolerance = 1e-6;

/// A probability distribution over n states: nonnegative mass summing to 1.
struct ProbabilityVector {
  std::vector<double> mass;

  int size() const { return static_cast<int>(mass.size()); }

  double sum() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

  /// Checks the type invariants (entries >= 0, total mass 1 within tol).
  void validate(double tol = kMassTolerance) const {
    if (mass.empty()) {
      throw std::invalid_argument("ProbabilityVector: empty mass vector");
    }
    for (std::size_t i = 0; i < mass.size(); ++i) {
      if (!(mass[i] >= 0.0)) {
        throw std::invalid_argument("ProbabilityVector: negative mass at index " +
                                    std::to_string(i));
      }
    }
    const double total = sum();
    if (std::abs(total - 1.0) > tol) {
      throw std::invalid_argument("ProbabilityVector: mass sums to " +
                                  std::to_string(total) + ", expected 1");
    }
  }

  /// Wraps an already-normalized mass vector, enforcing the invariants.
  static ProbabilityVector from_mass(std::vector<double> m, double tol = kMassTolerance) {
    ProbabilityVector v{std::move(m)};
    v.validate(tol);
    return v;
  }

  /// Normalizes nonnegative raw weights to unit mass.
  static ProbabilityVector normalized(std::vector<double> raw) {
    double total = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!(raw[i] >= 0.0)) {
        throw std::invalid_argument("ProbabilityVector: negative weight at index " +
                                    std::to_string(i));
      }
      total += raw[i];
    }
    if (!(total > 0.0)) {
      throw std::invalid_argument("ProbabilityVector: weights sum to zero");
    }
    for (double& w : raw) w /= total;
    return ProbabilityVector{std::move(raw)};
  }
};

/// Total-variation distance, 0.5 * L1.
inline double total_variation(const ProbabilityVector& a, const ProbabilityVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("total_variation: dimension mismatch");
  }
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i) acc += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * acc;
}

}  // namespace otq
