#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "laakso/dyadic.hpp"

namespace laakso {

/// Four labeled points x1, x2, x3, x4 with the diamond pattern: diagonals
/// {x1,x3} and {x2,x4} of length C, and the four sides of length C/2.
struct Quadruple {
  // Pair slots, in this order, for `domain` and `image`. The four sides are
  // listed in the canonical tie-break order (x1,x2) < (x1,x4) < (x3,x2) < (x3,x4).
  enum Slot : int { kDiag13 = 0, kDiag24, kSide12, kSide14, kSide32, kSide34 };
  static constexpr std::array<std::pair<int, int>, 6> kPairs{
      {{0, 2}, {1, 3}, {0, 1}, {0, 3}, {2, 1}, {2, 3}}};
  static constexpr std::array<Slot, 4> kSides{kSide12, kSide14, kSide32, kSide34};

  std::array<std::string, 4> ids;
  std::array<std::size_t, 4> index{};
  std::array<Dyadic, 6> domain;
  std::optional<std::array<double, 6>> image;

  Dyadic diagonal() const { return domain[kDiag13]; }

  /// Exact check of the diamond distance pattern.
  bool is_diamond() const;

  /// Fills `image` from four image points (x1..x4 order) in the p-norm.
  void set_image_points(std::span<const std::span<const double>, 4> points, double p);
};

}  // namespace laakso
