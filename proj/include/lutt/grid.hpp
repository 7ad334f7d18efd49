#ifndef LUTT_GRID_HPP
#define LUTT_GRID_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "model.hpp"

namespace lutt {

/// Finite-volume momentum discretization p_n = 2 pi n / L, n = 1..n_max,
/// with the vertex regulator delta. There is no zero mode.
class ModeGrid {
public:
  ModeGrid(double L, std::size_t n_max, double delta) : L_(L), n_max_(n_max), delta_(delta) {
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("ModeGrid: L must be positive");
    if (n_max < 1) throw std::invalid_argument("ModeGrid: n_max must be >= 1");
    if (!(delta > 0.0) || !std::isfinite(delta))
      throw std::invalid_argument("ModeGrid: delta must be positive");
  }

  /// Smallest grid whose highest momentum reaches p_max.
  static ModeGrid covering(double L, double delta, double p_max) {
    const auto n = static_cast<std::size_t>(std::ceil(p_max * L / two_pi));
    return ModeGrid(L, n < 1 ? 1 : n, delta);
  }

  double L() const { return L_; }
  std::size_t n_max() const { return n_max_; }
  double delta() const { return delta_; }

  /// n is 1-based.
  double momentum(std::size_t n) const { return two_pi * static_cast<double>(n) / L_; }
  double p_max() const { return momentum(n_max_); }
  bool covers(double p_cut) const { return p_max() >= p_cut; }

  std::vector<double> momenta() const {
    std::vector<double> p(n_max_);
    for (std::size_t n = 1; n <= n_max_; ++n) p[n - 1] = momentum(n);
    return p;
  }

  /// Same modes (L and n_max); the regulator does not enter commutators.
  bool same_modes(const ModeGrid& other) const { return L_ == other.L_ && n_max_ == other.n_max_; }

  friend bool operator==(const ModeGrid&, const ModeGrid&) = default;

private:
  double L_;
  std::size_t n_max_;
  double delta_;
};

inline void require_covers(const ModeGrid& grid, const ModelParams& params) {
  if (!grid.covers(params.p_cut()))
    throw std::invalid_argument("ModeGrid does not cover the potential support (p_max < p_cut)");
}

} // namespace lutt

#endif
