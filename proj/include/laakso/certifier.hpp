#pragma once

// Distortion lower bounds for embeddings into round-ball targets: the diamond
// inequality on single quadruples, its iteration down the sub-copy hierarchy
// of Gamma_n, the closed-form bound that iteration forces, and the two
// reductions that turn quasi-isometries into biLipschitz maps.

#include <array>
#include <string>
#include <vector>

#include "laakso/convexity.hpp"
#include "laakso/embedder.hpp"
#include "laakso/metric_space.hpp"
#include "laakso/quadruple.hpp"
#include "laakso/spaces.hpp"

namespace laakso {

// Slack on every certified inequality.
inline constexpr double kCertifySlack = 1e-12;

/// Image distance over domain distance. Throws Error(kDomain) unless the
/// domain distance is positive.
double pair_lipschitz(double domain, double image);

struct QuadrupleReport {
  bool holds = false;
  double lhs = 0.0;            // largest side pair constant
  double rhs = 0.0;            // (1 + δ(L⁻²))·L_{x1,x3}
  double l_restriction = 0.0;  // sqrt(max ratio / min ratio) over the six pairs
  double l_diagonal = 0.0;     // L_{x1,x3}
  int best_side = 0;           // index into Quadruple::kSides
};

/// Requires the diamond pattern and images. Throws Error(kValidation) for a
/// non-diamond domain and Error(kDegenerate) when two images coincide.
/// `holds` false means the modulus is not valid for the image space.
QuadrupleReport check_quadruple(const Quadruple& q, const RoundBallModulus& modulus);

struct AmplificationStep {
  std::string address;
  std::array<std::string, 2> pair;  // selected side pair (ids)
  VertexPair pair_index;
  double l_pair = 0.0;              // constant of the selected side
  double l_diagonal = 0.0;          // constant of the quadruple's {x1,x3}
  double factor = 0.0;              // l_pair / l_diagonal
  Quadruple quadruple;
};

struct AmplificationTrace {
  std::vector<AmplificationStep> steps;
  double l_glob = 0.0;      // symmetric constant of the whole embedding
  double l_start = 0.0;     // constant of the root's {x1,x3}
  double threshold = 0.0;   // 1 + δ(L_glob⁻²)
  std::string modulus;
  bool passed = false;      // every factor and the chained growth met the threshold
};

/// Walks from the root quadruple of `g`, each time into the sub-copy glued
/// along the side pair with the largest constant (ties to the canonical side
/// order), until the selected pair is an edge. Throws Error(kValidation)
/// naming the first vertex without coordinates in `e`.
AmplificationTrace amplify(const LevelGraph& g, const Embedding& e, const RoundBallModulus& modulus);

struct LowerBound {
  int n = 0;
  double l_star = 1.0;    // solves (1 + δ(L⁻²))ⁿ = L²
  double d_star = 1.0;    // l_star²
  double residual = 0.0;  // (1 + δ(L*⁻²))ⁿ − L*²
  bool vacuous = false;   // modulus vanishes at ε = 1
};

/// Smallest symmetric constant any embedding of Gamma_n into a space with
/// this modulus can have. Throws Error(kInvalidArgument) for n < 1.
LowerBound lower_bound(int n, const RoundBallModulus& modulus);

struct QuasiIsometryParams {
  double l = 1.0;        // multiplicative constant
  double c_add = 0.0;    // additive constant
  double s = 0.0;        // pairs with d >= s are biLipschitz ...
  double l_large = 2.0;  // ... with this constant
};

/// S = 2·L·C and L_large = 2L after normalizing L to at least 1. Throws
/// Error(kInvalidArgument) for L <= 0 or C < 0.
QuasiIsometryParams large_scale_reduction(double l, double c_add);

/// Least n >= 1 with (1 + δ(L⁻²))ⁿ / L > L. Throws Error(kDispatch) when
/// δ(L⁻²) = 0 since no level suffices.
int required_level(double l_large, const RoundBallModulus& modulus);

/// f̃(x) = f(x) ⊕ e_x, measured as ‖f(x) − f(y)‖_p + ‖e_x − e_y‖_2.
struct PromotionReport {
  double upper_asserted = 1.0;  // L + (√2 + C)/m
  double lower_asserted = 1.0;  // min over d in [m, diam] of (√2 + max(0, d/L − C))/d
  double upper_actual = 1.0;    // exhaustive max ratio
  double lower_actual = 1.0;    // exhaustive min ratio
  std::array<std::size_t, 2> argmax{0, 0};
  std::array<std::size_t, 2> argmin{0, 0};
  bool holds = true;
};

struct PromotedMap {
  std::vector<std::string> ids;
  std::vector<double> base;  // f(x), row-major, in the order of `ids`
  TargetNorm target;
  PromotionReport report;

  double distance(std::size_t i, std::size_t j) const;
};

/// Verifies f is an (L, C) quasi-isometry on every pair of X (Error(kValidation)
/// naming the first violating pair otherwise), then builds f̃ and checks the
/// asserted constants against all pairs.
PromotedMap promote_to_bilipschitz(const FiniteMetricSpace& x, const Embedding& f,
                                   const QuasiIsometryParams& qi);

}  // namespace laakso
