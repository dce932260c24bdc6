#pragma once

// Round-ball moduli: given ε, the radius inflation δ_ε such that two balls of
// radius (1+δ_ε)/2·d(x,y) around x and y meet in a set of diameter at most
// ε·d(x,y). Analytic for Hilbert targets, estimated numerically for
// finite-dimensional p-norms.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace laakso {

/// Target normed space: "hilbert" or "lp:<p>:<d>" with p a number or "inf".
struct TargetDescriptor {
  enum class Kind { kHilbert, kLp };
  Kind kind = Kind::kHilbert;
  double p = 2.0;
  int dimension = 0;  // 0 for Hilbert (any dimension)

  static TargetDescriptor parse(const std::string& text);
  std::string to_string() const;
};

/// δ(ε) with ε ↦ δ nondecreasing and nonnegative.
class RoundBallModulus {
 public:
  enum class Kind { kAnalyticHilbert, kTabulated };

  struct Entry {
    double epsilon = 0.0;
    double delta = 0.0;
    double error_bar = 0.0;
  };

  static RoundBallModulus hilbert();

  /// Table entries must have strictly increasing ε. Values are regularized by
  /// a running maximum so the table is nondecreasing. Between entries the
  /// value of the largest entry with ε_i <= ε is used; below the first entry
  /// the modulus is 0.
  static RoundBallModulus tabulated(std::vector<Entry> entries, std::string descriptor);

  Kind kind() const { return kind_; }
  const std::vector<Entry>& table() const { return table_; }
  const std::string& descriptor() const { return descriptor_; }

  double delta(double epsilon) const;

  /// True when δ is zero everywhere it can be evaluated.
  bool identically_zero() const;

 private:
  Kind kind_ = Kind::kAnalyticHilbert;
  std::vector<Entry> table_;
  std::string descriptor_ = "hilbert";
};

/// sqrt(1+ε²) − 1. Throws Error(kDomain) for ε <= 0.
double hilbert_modulus(double epsilon);

struct EstimatorConfig {
  int starts = 64;
  int iterations = 500;
  double bisection_tolerance = 1e-9;
  // Allowance for the local maximizer stopping short of the true maximum,
  // added to the error bar.
  double inner_tolerance = 1e-6;
  std::uint64_t seed = 20240601;
  // Directions y = (1,..,1,0,..,0)/‖·‖_p with this many leading ones, for
  // every count up to the cap. Ignored for p = 2 where e_1 suffices.
  int max_directions = 8;
};

struct WitnessPair {
  std::vector<double> center;  // y; the other center is the origin
  std::vector<double> z;
  std::vector<double> w;
  double separation = 0.0;     // ‖z − w‖_p
};

struct ModulusEstimate {
  double delta = 0.0;
  double error_bar = 0.0;
  bool round_ball = true;
  std::optional<WitnessPair> witness;
};

/// Largest ‖z − w‖_p over z, w in B(0, R) ∩ B(y, R), R = (1+δ)/2, ‖y‖_p = 1,
/// found by multi-start projected ascent. Stops early once a pair with
/// separation above `stop_above` is found.
double max_intersection_diameter(double p, const std::vector<double>& center, double delta,
                                 const EstimatorConfig& config,
                                 double stop_above = std::numeric_limits<double>::infinity(),
                                 WitnessPair* best = nullptr);

/// Largest δ with M(δ) <= ε, by bisection on δ ∈ [0, ε]. For p ∈ {1, ∞} and
/// ε < 1 returns δ = 0 flagged as not round-ball, with an explicit witness.
ModulusEstimate estimate_modulus(double p, int dimension, double epsilon,
                                 const EstimatorConfig& config = {});

/// 0.1, 0.2, ..., 1.0.
std::vector<double> default_epsilon_grid();

/// Analytic modulus for "hilbert"; for lp:p:d a table estimated on `grid`,
/// shrunk by each entry's error bar. Throws Error(kNotUniformlyConvex) for
/// p ∈ {1, ∞}.
RoundBallModulus modulus_for_target(const TargetDescriptor& target,
                                    const std::vector<double>& grid = default_epsilon_grid(),
                                    const EstimatorConfig& config = {});

}  // namespace laakso
