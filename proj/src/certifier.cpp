#include "laakso/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "laakso/error.hpp"
#include "laakso/norms.hpp"

namespace laakso {

double pair_lipschitz(double domain, double image) {
  if (!(domain > 0.0)) throw Error(ErrorKind::kDomain, "pair constant needs a positive domain distance");
  return image / domain;
}

QuadrupleReport check_quadruple(const Quadruple& q, const RoundBallModulus& modulus) {
  if (!q.is_diamond()) {
    throw Error(ErrorKind::kValidation, "quadruple (" + q.ids[0] + ", " + q.ids[1] + ", " + q.ids[2] +
                                            ", " + q.ids[3] + ") does not have the diamond pattern");
  }
  if (!q.image) throw Error(ErrorKind::kInvalidArgument, "quadruple has no image distances");
  std::array<double, 6> ratio{};
  for (std::size_t s = 0; s < 6; ++s) {
    const double img = (*q.image)[s];
    if (!(img > 0.0)) {
      const auto [a, b] = Quadruple::kPairs[s];
      throw Error(ErrorKind::kDegenerate, "images of " + q.ids[a] + " and " + q.ids[b] + " coincide");
    }
    ratio[s] = pair_lipschitz(q.domain[s].to_double(), img);
  }
  QuadrupleReport r;
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  r.l_restriction = std::sqrt(*hi / *lo);
  r.l_diagonal = ratio[Quadruple::kDiag13];
  r.lhs = -kInfinity;
  for (int k = 0; k < 4; ++k) {
    if (ratio[Quadruple::kSides[k]] > r.lhs) {
      r.lhs = ratio[Quadruple::kSides[k]];
      r.best_side = k;
    }
  }
  r.rhs = (1.0 + modulus.delta(1.0 / (r.l_restriction * r.l_restriction))) * r.l_diagonal;
  r.holds = r.lhs >= r.rhs - kCertifySlack;
  return r;
}

AmplificationTrace amplify(const LevelGraph& g, const Embedding& e, const RoundBallModulus& modulus) {
  if (g.level() < 1) throw Error(ErrorKind::kInvalidArgument, "amplification needs level >= 1");
  const Graph& graph = g.graph();
  const std::size_t dim = static_cast<std::size_t>(e.target.dimension);
  std::unordered_map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < e.ids.size(); ++i) row.emplace(e.ids[i], i);
  std::vector<std::size_t> where(graph.vertex_count());
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    auto it = row.find(graph.id(v));
    if (it == row.end()) {
      throw Error(ErrorKind::kValidation, "embedding has no coordinates for id '" + graph.id(v) + "'");
    }
    where[v] = it->second;
  }
  auto point = [&](VertexId v) {
    return std::span<const double>(e.coords.data() + where[v] * dim, dim);
  };

  const FiniteMetricSpace metric = path_metric(g);
  std::vector<double> ordered(metric.size() * dim);
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    std::copy_n(point(v).begin(), dim, ordered.begin() + static_cast<std::ptrdiff_t>(v * dim));
  }
  const DistortionStats stats = distortion(metric, ordered, e.target);
  if (stats.degenerate) {
    throw Error(ErrorKind::kDegenerate, "images of " + metric.id(stats.argmin[0]) + " and " +
                                            metric.id(stats.argmin[1]) + " coincide");
  }

  AmplificationTrace t;
  t.l_glob = stats.l_sym;
  t.threshold = 1.0 + modulus.delta(1.0 / stats.distortion);
  t.modulus = modulus.descriptor();
  t.passed = true;

  std::string address;
  for (;;) {
    AmplificationStep step;
    step.address = address;
    step.quadruple = primary_quadruple(g, address, &metric);
    std::array<std::span<const double>, 4> pts;
    for (int k = 0; k < 4; ++k) pts[k] = point(static_cast<VertexId>(step.quadruple.index[k]));
    step.quadruple.set_image_points(std::span<const std::span<const double>, 4>(pts), e.target.p);
    const QuadrupleReport rep = check_quadruple(step.quadruple, modulus);
    const auto [a, b] = Quadruple::kPairs[Quadruple::kSides[rep.best_side]];
    step.pair = {step.quadruple.ids[a], step.quadruple.ids[b]};
    step.pair_index = {static_cast<VertexId>(step.quadruple.index[a]),
                       static_cast<VertexId>(step.quadruple.index[b])};
    step.l_pair = rep.lhs;
    step.l_diagonal = rep.l_diagonal;
    step.factor = rep.lhs / rep.l_diagonal;
    if (t.steps.empty()) t.l_start = rep.l_diagonal;
    const double k = static_cast<double>(t.steps.size() + 1);
    if (step.factor < t.threshold - 1e-9) t.passed = false;
    if (step.l_pair < std::pow(t.threshold, k) * t.l_start - 1e-6) t.passed = false;
    const bool last = g.copy_level(address) < 2;
    const VertexPair next = step.pair_index;
    t.steps.push_back(std::move(step));
    if (last) break;
    address = child_address(g, address, next);
  }
  return t;
}

LowerBound lower_bound(int n, const RoundBallModulus& modulus) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "level must be at least 1");
  LowerBound b;
  b.n = n;
  auto excess = [&](double l) { return std::pow(1.0 + modulus.delta(1.0 / (l * l)), n) - l * l; };
  if (modulus.identically_zero() || modulus.delta(1.0) <= 0.0) {
    b.vacuous = true;
    b.residual = excess(1.0);
    return b;
  }
  double lo = 1.0, hi = 2.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  b.l_star = 0.5 * (lo + hi);
  b.d_star = b.l_star * b.l_star;
  b.residual = excess(b.l_star);
  return b;
}

QuasiIsometryParams large_scale_reduction(double l, double c_add) {
  if (!(l > 0.0)) throw Error(ErrorKind::kInvalidArgument, "multiplicative constant must be positive");
  if (!(c_add >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "additive constant must be nonnegative");
  QuasiIsometryParams q;
  q.l = std::max(l, 1.0);
  q.c_add = c_add;
  q.s = 2.0 * q.l * c_add;
  q.l_large = 2.0 * q.l;
  return q;
}

int required_level(double l_large, const RoundBallModulus& modulus) {
  if (!(l_large > 0.0)) throw Error(ErrorKind::kInvalidArgument, "constant must be positive");
  const double delta = modulus.delta(1.0 / (l_large * l_large));
  if (!(delta > 0.0)) {
    throw Error(ErrorKind::kDispatch, "unreachable: the modulus vanishes at " +
                                          std::to_string(1.0 / (l_large * l_large)));
  }
  const double growth = std::log1p(delta);
  // (1+δ)ⁿ / L > L, evaluated directly so an exact tie stays a tie.
  auto crosses = [&](int n) { return std::pow(1.0 + delta, n) > l_large * l_large; };
  int n = std::max(1, static_cast<int>(std::ceil(2.0 * std::log(l_large) / growth)));
  while (!crosses(n)) ++n;
  while (n > 1 && crosses(n - 1)) --n;
  return n;
}

double PromotedMap::distance(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const auto d = static_cast<std::size_t>(target.dimension);
  return lp_distance(std::span<const double>(base).subspan(i * d, d),
                     std::span<const double>(base).subspan(j * d, d), target.p) +
         std::numbers::sqrt2;
}

PromotedMap promote_to_bilipschitz(const FiniteMetricSpace& x, const Embedding& f,
                                   const QuasiIsometryParams& qi) {
  if (!(qi.l > 0.0) || !(qi.c_add >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "quasi-isometry constants out of range");
  }
  const auto dim = static_cast<std::size_t>(f.target.dimension);
  std::unordered_map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < f.ids.size(); ++i) row.emplace(f.ids[i], i);

  PromotedMap out;
  out.ids = x.ids();
  out.target = f.target;
  out.base.resize(x.size() * dim);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = row.find(x.id(i));
    if (it == row.end()) {
      throw Error(ErrorKind::kValidation, "embedding has no coordinates for id '" + x.id(i) + "'");
    }
    std::copy_n(f.coords.begin() + static_cast<std::ptrdiff_t>(it->second * dim), dim,
                out.base.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  if (x.size() < 2) return out;

  const std::span<const double> base(out.base);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d = x.value(i, j);
      const double r = lp_distance(base.subspan(i * dim, dim), base.subspan(j * dim, dim), f.target.p);
      const double tol = kCertifySlack * std::max({1.0, d, r});
      if (r > qi.l * d + qi.c_add + tol || r < d / qi.l - qi.c_add - tol) {
        throw Error(ErrorKind::kValidation, "pair (" + x.id(i) + ", " + x.id(j) + ") violates the (" +
                                                std::to_string(qi.l) + ", " + std::to_string(qi.c_add) +
                                                ") quasi-isometry bounds");
      }
    }
  }

  const double m = x.min_positive_distance();
  const double diam = x.diameter();
  PromotionReport& rep = out.report;
  rep.upper_asserted = qi.l + (std::numbers::sqrt2 + qi.c_add) / m;
  auto h = [&](double d) { return (std::numbers::sqrt2 + std::max(0.0, d / qi.l - qi.c_add)) / d; };
  rep.lower_asserted = std::min(h(diam), h(std::clamp(qi.l * qi.c_add, m, diam)));

  rep.upper_actual = -kInfinity;
  rep.lower_actual = kInfinity;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double ratio = out.distance(i, j) / x.value(i, j);
      if (ratio > rep.upper_actual) {
        rep.upper_actual = ratio;
        rep.argmax = {i, j};
      }
      if (ratio < rep.lower_actual) {
        rep.lower_actual = ratio;
        rep.argmin = {i, j};
      }
    }
  }
  const double slack = 1e-12 * std::max(1.0, rep.upper_asserted);
  rep.holds = rep.upper_actual <= rep.upper_asserted + slack &&
              rep.lower_actual >= rep.lower_asserted - 1e-12 * std::max(1.0, rep.lower_asserted);
  return out;
}

}  // namespace laakso
