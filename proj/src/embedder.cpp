#include "laakso/embedder.hpp"

#include <omp.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "laakso/error.hpp"
#include "laakso/kernels.hpp"
#include "laakso/norms.hpp"

namespace laakso {

void OptimizerConfig::validate() const {
  auto bad = [](const char* what) { return Error(ErrorKind::kInvalidArgument, std::string("optimizer config: ") + what); };
  if (restarts < 1) throw bad("restarts must be at least 1");
  if (iterations_per_stage < 1) throw bad("iterations must be at least 1");
  if (!(initial_step > 0.0)) throw bad("initial step must be positive");
  if (!(beta_start > 0.0) || !(beta_max >= beta_start)) throw bad("beta schedule must be positive and increasing");
  if (!(beta_factor > 1.0)) throw bad("beta factor must exceed 1");
  if (!(floor_factor > 0.0)) throw bad("coincidence floor must be positive");
}

// ------------------------------------------------------------- statistics

DistortionStats distortion(const FiniteMetricSpace& space, std::span<const double> coords,
                           TargetNorm target) {
  if (coords.size() != space.size() * static_cast<std::size_t>(target.dimension)) {
    throw Error(ErrorKind::kValidation, "coordinate matrix does not match the space size");
  }
  DistortionStats s;
  if (space.size() < 2) {
    s.expansion = s.contraction = s.distortion = s.l_sym = 1.0;
    return s;
  }
  const auto ext = kernels::parallel::pair_ratio_extrema(space, coords, target.dimension, target.p);
  s.expansion = ext.max_ratio;
  s.contraction = ext.min_ratio;
  s.argmax = ext.argmax;
  s.argmin = ext.argmin;
  if (ext.min_ratio <= 0.0) {
    s.degenerate = true;
    s.distortion = s.l_sym = kInfinity;
  } else {
    s.distortion = ext.max_ratio / ext.min_ratio;
    s.l_sym = std::sqrt(s.distortion);
  }
  return s;
}

DistortionStats distortion(const FiniteMetricSpace& space, const Embedding& e) {
  const std::size_t dim = static_cast<std::size_t>(e.target.dimension);
  if (e.ids == space.ids()) return distortion(space, e.coords, e.target);
  std::unordered_map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < e.ids.size(); ++i) row.emplace(e.ids[i], i);
  std::vector<double> ordered(space.size() * dim);
  for (std::size_t i = 0; i < space.size(); ++i) {
    auto it = row.find(space.id(i));
    if (it == row.end()) {
      throw Error(ErrorKind::kValidation, "embedding has no coordinates for id '" + space.id(i) + "'");
    }
    std::copy_n(e.coords.begin() + static_cast<std::ptrdiff_t>(it->second * dim), dim,
                ordered.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  return distortion(space, ordered, e.target);
}

// -------------------------------------------------------------- objective

namespace {

class Objective {
 public:
  Objective(const FiniteMetricSpace& space, TargetNorm target, double floor)
      : n_(space.size()), dim_(static_cast<std::size_t>(target.dimension)), p_(target.p), floor_(floor) {
    log_d_.reserve(n_ * (n_ - 1) / 2);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) log_d_.push_back(std::log(space.value(i, j)));
    }
    ell_.resize(log_d_.size());
    floored_.resize(log_d_.size());
  }

  ObjectiveValue operator()(std::span<const double> x, double beta, std::vector<double>* grad) {
    ObjectiveValue out;
    double hi = -kInfinity, lo = kInfinity;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const auto xi = x.subspan(i * dim_, dim_);
      for (std::size_t j = i + 1; j < n_; ++j, ++k) {
        double r = lp_distance(xi, x.subspan(j * dim_, dim_), p_);
        floored_[k] = r < floor_;
        if (floored_[k]) {
          r = floor_;
          out.floored = true;
        }
        const double l = std::log(r) - log_d_[k];
        ell_[k] = l;
        hi = std::max(hi, l);
        lo = std::min(lo, l);
      }
    }
    double sum_hi = 0.0, sum_lo = 0.0;
    for (double l : ell_) {
      sum_hi += std::exp(beta * (l - hi));
      sum_lo += std::exp(beta * (lo - l));
    }
    out.max_log_ratio = hi;
    out.min_log_ratio = lo;
    out.value = (hi + std::log(sum_hi) / beta) + (-lo + std::log(sum_lo) / beta);
    if (grad == nullptr) return out;

    grad->assign(x.size(), 0.0);
    k = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const auto xi = x.subspan(i * dim_, dim_);
      for (std::size_t j = i + 1; j < n_; ++j, ++k) {
        if (floored_[k]) continue;
        const double weight =
            std::exp(beta * (ell_[k] - hi)) / sum_hi - std::exp(beta * (lo - ell_[k])) / sum_lo;
        if (weight == 0.0) continue;
        const auto xj = x.subspan(j * dim_, dim_);
        double* gi = grad->data() + i * dim_;
        double* gj = grad->data() + j * dim_;
        if (p_ == 2.0) {
          double rr = 0.0;
          for (std::size_t c = 0; c < dim_; ++c) rr += (xi[c] - xj[c]) * (xi[c] - xj[c]);
          const double scale = weight / rr;
          for (std::size_t c = 0; c < dim_; ++c) {
            const double t = scale * (xi[c] - xj[c]);
            gi[c] += t;
            gj[c] -= t;
          }
        } else {
          // ∂ log‖z‖_p / ∂z = sign(z)|z|^{p−1} / ‖z‖_p^p
          const double r = std::exp(ell_[k] + log_d_[k]);
          for (std::size_t c = 0; c < dim_; ++c) {
            const double z = xi[c] - xj[c];
            const double t = weight * std::copysign(std::pow(std::abs(z) / r, p_ - 1.0), z) / r;
            gi[c] += t;
            gj[c] -= t;
          }
        }
      }
    }
    return out;
  }

 private:
  std::size_t n_, dim_;
  double p_, floor_;
  std::vector<double> log_d_;
  std::vector<double> ell_;
  std::vector<char> floored_;
};

void check_target(const FiniteMetricSpace& space, TargetNorm target) {
  if (!(target.p >= 2.0) || std::isinf(target.p)) {
    throw Error(ErrorKind::kDispatch, "embedding targets need p in [2, inf)");
  }
  if (target.dimension < 1) throw Error(ErrorKind::kInvalidArgument, "target dimension must be positive");
  if (space.size() < 2) throw Error(ErrorKind::kInvalidArgument, "space needs at least two points");
}

double mean_distance(const FiniteMetricSpace& space) {
  double s = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j, ++c) s += space.value(i, j);
  }
  return c == 0 ? 1.0 : s / static_cast<double>(c);
}

}  // namespace

ObjectiveValue smoothed_objective(const FiniteMetricSpace& space, std::span<const double> coords,
                                  TargetNorm target, double beta, double floor,
                                  std::vector<double>* gradient) {
  if (!(beta > 0.0)) throw Error(ErrorKind::kInvalidArgument, "beta must be positive");
  if (coords.size() != space.size() * static_cast<std::size_t>(target.dimension)) {
    throw Error(ErrorKind::kValidation, "coordinate matrix does not match the space size");
  }
  Objective f(space, target, floor);
  return f(coords, beta, gradient);
}

// ----------------------------------------------------------------- starts

std::vector<double> gaussian_start(const FiniteMetricSpace& space, int dimension, std::uint64_t seed) {
  const std::size_t n = space.size();
  const auto dim = static_cast<std::size_t>(dimension);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(n * dim);
  for (double& v : x) v = gauss(rng);
  double ratio = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++c) {
      ratio += lp_distance(std::span<const double>(x).subspan(i * dim, dim),
                           std::span<const double>(x).subspan(j * dim, dim), 2.0) /
               space.value(i, j);
    }
  }
  if (c > 0 && ratio > 0.0) {
    const double scale = static_cast<double>(c) / ratio;
    for (double& v : x) v *= scale;
  }
  return x;
}

std::vector<double> mds_start(const FiniteMetricSpace& space, int dimension) {
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = space.value(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      b(i, j) = -0.5 * d * d;
    }
  }
  const Eigen::VectorXd row_mean = b.rowwise().mean();
  const double total_mean = b.mean();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) += total_mean - row_mean(i) - row_mean(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const auto dim = static_cast<std::size_t>(dimension);
  std::vector<double> x(space.size() * dim, 0.0);
  const Eigen::Index used = std::min<Eigen::Index>(n, dimension);
  for (Eigen::Index c = 0; c < used; ++c) {
    const Eigen::Index col = n - 1 - c;  // eigenvalues ascend
    const double lambda = std::max(eig.eigenvalues()(col), 0.0);
    const double s = std::sqrt(lambda);
    for (Eigen::Index i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(c)] = s * eig.eigenvectors()(i, col);
    }
  }
  return x;
}

// -------------------------------------------------------------- optimizer

namespace {

struct RestartResult {
  std::vector<double> coords;
  double log_distortion = kInfinity;
  int iterations = 0;
  bool abandoned = false;
};

RestartResult run_restart(const FiniteMetricSpace& space, TargetNorm target,
                          const OptimizerConfig& config, std::vector<double> x, double floor,
                          double step0) {
  Objective objective(space, target, floor);
  RestartResult out;
  std::vector<double> grad, trial_grad, trial(x.size());

  auto record = [&](const std::vector<double>& at, const ObjectiveValue& v) {
    if (v.floored) return;
    const double logd = v.max_log_ratio - v.min_log_ratio;
    if (logd < out.log_distortion) {
      out.log_distortion = logd;
      out.coords = at;
    }
  };

  double step = step0;
  for (double beta = config.beta_start; beta <= config.beta_max * (1.0 + 1e-12); beta *= config.beta_factor) {
    ObjectiveValue current = objective(x, beta, &grad);
    if (!std::isfinite(current.value)) {
      out.abandoned = true;
      return out;
    }
    record(x, current);
    for (int it = 0; it < config.iterations_per_stage; ++it) {
      double gnorm = 0.0;
      for (double g : grad) gnorm += g * g;
      gnorm = std::sqrt(gnorm);
      if (!(gnorm > 1e-14)) break;
      bool accepted = false;
      for (int tries = 0; tries < 50 && step > 1e-14 * step0; ++tries) {
        for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - step * grad[k] / gnorm;
        const ObjectiveValue v = objective(trial, beta, &trial_grad);
        if (std::isfinite(v.value) && v.value < current.value) {
          x.swap(trial);
          grad.swap(trial_grad);
          current = v;
          step *= 1.25;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      ++out.iterations;
      if (!accepted) break;
      record(x, current);
    }
    // Later stages start from a moderate step again.
    step = std::max(step, 1e-3 * step0);
  }
  if (out.coords.empty()) out.abandoned = true;
  return out;
}

}  // namespace

Embedding minimize_distortion(const FiniteMetricSpace& space, TargetNorm target,
                              const OptimizerConfig& config) {
  check_target(space, target);
  config.validate();
  const double floor = config.floor_factor * space.min_positive_distance();
  const double step0 = config.initial_step * mean_distance(space);

  std::vector<RestartResult> results(static_cast<std::size_t>(config.restarts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < config.restarts; ++r) {
    std::vector<double> start;
    if (r == 0 && config.mds_start) {
      start = mds_start(space, target.dimension);
      // Break exact coincidences so every pair has a usable gradient.
      std::mt19937_64 rng(config.seed);
      std::normal_distribution<double> gauss(0.0, 1e-6 * mean_distance(space));
      for (double& v : start) v += gauss(rng);
    } else {
      start = gaussian_start(space, target.dimension, config.seed + static_cast<std::uint64_t>(r));
    }
    results[static_cast<std::size_t>(r)] = run_restart(space, target, config, std::move(start), floor, step0);
  }

  Embedding best;
  best.ids = space.ids();
  best.target = target;
  best.provenance.seed = config.seed;
  best.provenance.restarts = config.restarts;
  double best_d = kInfinity;
  for (int r = 0; r < config.restarts; ++r) {
    auto& res = results[static_cast<std::size_t>(r)];
    best.provenance.iterations += res.iterations;
    if (res.abandoned) {
      ++best.provenance.abandoned_restarts;
      continue;
    }
    const DistortionStats s = distortion(space, res.coords, target);
    if (s.distortion < best_d) {
      best_d = s.distortion;
      best.coords = res.coords;
      best.stats = s;
      best.provenance.best_restart = r;
    }
  }
  if (best.provenance.best_restart < 0) {
    throw Error(ErrorKind::kOptimization, "all " + std::to_string(config.restarts) + " restarts were abandoned");
  }
  return best;
}

}  // namespace laakso
