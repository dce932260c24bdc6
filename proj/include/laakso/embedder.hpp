#pragma once

// Numerical search for low-distortion embeddings of finite metric spaces into
// d-dimensional p-norm spaces. Only upper bounds come out of this module.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "laakso/metric_space.hpp"

namespace laakso {

struct TargetNorm {
  double p = 2.0;
  int dimension = 1;
};

struct DistortionStats {
  double expansion = 0.0;    // max image/domain ratio
  double contraction = 0.0;  // min image/domain ratio
  double distortion = 0.0;   // expansion / contraction
  double l_sym = 0.0;        // sqrt(distortion)
  std::array<std::size_t, 2> argmax{0, 0};
  std::array<std::size_t, 2> argmin{0, 0};
  bool degenerate = false;   // some distinct points share an image
};

struct Provenance {
  std::uint64_t seed = 0;
  int restarts = 0;
  int iterations = 0;
  int best_restart = -1;
  int abandoned_restarts = 0;
};

/// Coordinates of every point, row-major |ids|×dimension.
struct Embedding {
  std::vector<std::string> ids;
  std::vector<double> coords;
  TargetNorm target;
  DistortionStats stats;
  Provenance provenance;

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * target.dimension, static_cast<std::size_t>(target.dimension)};
  }
};

struct OptimizerConfig {
  int restarts = 20;
  int iterations_per_stage = 200;
  double initial_step = 0.05;  // relative to the mean domain distance
  double beta_start = 2.0;
  double beta_max = 256.0;
  double beta_factor = 2.0;
  double floor_factor = 1e-8;  // η = floor_factor × min domain distance
  std::uint64_t seed = 0;
  // Restart 0 starts from classical multidimensional scaling of the domain
  // metric; the rest start from seeded Gaussians.
  bool mds_start = true;

  void validate() const;
};

/// Exact max/min pair ratios. Points are matched by id; throws
/// Error(kValidation) naming the first space id missing from `e`. Coincident
/// images give contraction 0, infinite distortion and `degenerate` set.
DistortionStats distortion(const FiniteMetricSpace& space, const Embedding& e);

/// Same, for coordinates already in the space's point order.
DistortionStats distortion(const FiniteMetricSpace& space, std::span<const double> coords,
                           TargetNorm target);

/// Value and gradient of the smoothed objective
///   F_β = (1/β)·log Σ exp(β·ℓ) + (1/β)·log Σ exp(−β·ℓ),  ℓ = log(‖x_u−x_v‖_p / d(u,v)),
/// with image distances floored at `floor`.
struct ObjectiveValue {
  double value = 0.0;
  double max_log_ratio = 0.0;
  double min_log_ratio = 0.0;
  bool floored = false;
};

ObjectiveValue smoothed_objective(const FiniteMetricSpace& space, std::span<const double> coords,
                                  TargetNorm target, double beta, double floor,
                                  std::vector<double>* gradient = nullptr);

/// Multi-start annealed gradient descent on F_β; returns the restart with the
/// smallest exact distortion (ties to the lowest restart index).
Embedding minimize_distortion(const FiniteMetricSpace& space, TargetNorm target,
                              const OptimizerConfig& config = {});

/// Seeded isotropic Gaussian start scaled so the mean pair ratio is 1.
std::vector<double> gaussian_start(const FiniteMetricSpace& space, int dimension, std::uint64_t seed);

/// Classical multidimensional scaling into `dimension` coordinates.
std::vector<double> mds_start(const FiniteMetricSpace& space, int dimension);

}  // namespace laakso
