#include "laakso/convexity.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <span>

#include "laakso/error.hpp"
#include "laakso/norms.hpp"

namespace laakso {

// ------------------------------------------------------------- descriptor

TargetDescriptor TargetDescriptor::parse(const std::string& text) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorKind::kParse, "bad target '" + text + "': " + why);
  };
  if (text == "hilbert") return {};
  if (text.rfind("lp:", 0) != 0) throw fail("expected 'hilbert' or 'lp:<p>:<d>'");
  const std::size_t colon = text.find(':', 3);
  if (colon == std::string::npos) throw fail("missing dimension");
  const std::string p_text = text.substr(3, colon - 3);
  const std::string d_text = text.substr(colon + 1);
  TargetDescriptor t;
  t.kind = Kind::kLp;
  if (p_text == "inf" || p_text == "infinity") {
    t.p = kInfinity;
  } else {
    char* end = nullptr;
    t.p = std::strtod(p_text.c_str(), &end);
    if (p_text.empty() || *end != '\0' || !std::isfinite(t.p)) throw fail("p is not a number");
    if (t.p < 1.0) throw fail("p must be at least 1");
  }
  char* end = nullptr;
  const long d = std::strtol(d_text.c_str(), &end, 10);
  if (d_text.empty() || *end != '\0' || d < 1) throw fail("dimension must be a positive integer");
  t.dimension = static_cast<int>(d);
  return t;
}

std::string TargetDescriptor::to_string() const {
  if (kind == Kind::kHilbert) return "hilbert";
  char buf[64];
  if (std::isinf(p)) {
    std::snprintf(buf, sizeof buf, "lp:inf:%d", dimension);
  } else {
    std::snprintf(buf, sizeof buf, "lp:%g:%d", p, dimension);
  }
  return buf;
}

// ---------------------------------------------------------------- modulus

double hilbert_modulus(double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kDomain, "hilbert_modulus: epsilon must be positive");
  // sqrt(1+ε²) − 1 without cancellation for small ε.
  return epsilon * epsilon / (std::sqrt(1.0 + epsilon * epsilon) + 1.0);
}

RoundBallModulus RoundBallModulus::hilbert() { return RoundBallModulus{}; }

RoundBallModulus RoundBallModulus::tabulated(std::vector<Entry> entries, std::string descriptor) {
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (!(entries[i].epsilon > entries[i - 1].epsilon)) {
      throw Error(ErrorKind::kInvalidArgument, "modulus table epsilons must be strictly increasing");
    }
  }
  double running = 0.0;
  for (auto& e : entries) {
    if (!(e.epsilon > 0.0)) throw Error(ErrorKind::kInvalidArgument, "modulus table epsilon must be positive");
    running = std::max(running, std::max(e.delta, 0.0));
    e.delta = running;
  }
  RoundBallModulus m;
  m.kind_ = Kind::kTabulated;
  m.table_ = std::move(entries);
  m.descriptor_ = std::move(descriptor);
  return m;
}

double RoundBallModulus::delta(double epsilon) const {
  if (!(epsilon > 0.0)) return 0.0;
  if (kind_ == Kind::kAnalyticHilbert) return hilbert_modulus(epsilon);
  auto it = std::upper_bound(table_.begin(), table_.end(), epsilon,
                             [](double e, const Entry& entry) { return e < entry.epsilon; });
  if (it == table_.begin()) return 0.0;
  return std::prev(it)->delta;
}

bool RoundBallModulus::identically_zero() const {
  if (kind_ == Kind::kAnalyticHilbert) return false;
  return std::all_of(table_.begin(), table_.end(), [](const Entry& e) { return e.delta <= 0.0; });
}

// -------------------------------------------------------------- estimator

namespace {

struct Lens {
  double p;
  std::vector<double> center;  // y, with ‖y‖_p = 1
  std::vector<double> mid;     // y / 2
  double radius;
  std::vector<double> origin = std::vector<double>(center.size(), 0.0);

  bool contains(std::span<const double> z) const {
    const double slack = 1e-15 * radius;
    return lp_distance(z, origin, p) <= radius + slack && lp_distance(z, center, p) <= radius + slack;
  }

  // Largest s >= 0 with ‖mid + s·u − c‖_p <= radius.
  double radial(std::span<const double> u, std::span<const double> c) const {
    const std::size_t d = u.size();
    if (p == 2.0) {
      double au = 0.0, uu = 0.0, aa = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double a = mid[k] - c[k];
        au += a * u[k];
        uu += u[k] * u[k];
        aa += a * a;
      }
      if (uu == 0.0) return kInfinity;
      const double disc = au * au - uu * (aa - radius * radius);
      return std::max(0.0, (-au + std::sqrt(std::max(disc, 0.0))) / uu);
    }
    // φ(s) = ‖mid + s·u − c‖_p − radius is convex with φ(0) <= 0, so Newton
    // from a point right of the root decreases monotonically onto it.
    const double un = lp_norm(u, p);
    if (un == 0.0) return kInfinity;
    std::vector<double> v(d);
    double s = (radius + lp_distance(mid, c, p)) / un;
    for (int it = 0; it < 60; ++it) {
      double scale = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        v[k] = mid[k] + s * u[k] - c[k];
        scale = std::max(scale, std::abs(v[k]));
      }
      if (scale == 0.0) break;
      double sum = 0.0, slope = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double a = std::abs(v[k]) / scale;
        const double a1 = std::pow(a, p - 1.0);
        sum += a1 * a;
        slope += std::copysign(a1, v[k]) * u[k];
      }
      const double norm = scale * std::pow(sum, 1.0 / p);
      slope /= std::pow(sum, (p - 1.0) / p);  // d‖v‖_p/ds
      const double phi = norm - radius;
      if (phi <= 0.0 || slope <= 0.0) break;
      const double next = s - phi / slope;
      if (!(next < s) || s - next <= 1e-16 * s) {
        s = std::max(0.0, next);
        break;
      }
      s = std::max(0.0, next);
    }
    return s;
  }

  // Radial retraction toward mid: the identity on the lens, otherwise the
  // boundary point on the segment from mid.
  void retract(std::vector<double>& z) const {
    if (contains(z)) return;
    const std::size_t d = z.size();
    std::vector<double> u(d);
    for (std::size_t k = 0; k < d; ++k) u[k] = z[k] - mid[k];
    const double s = std::min({1.0, radial(u, origin), radial(u, center)});
    for (std::size_t k = 0; k < d; ++k) z[k] = mid[k] + s * u[k];
  }
};

// Euclidean-normalized ascent direction of ‖v‖_p.
void norm_gradient(std::span<const double> v, double p, std::vector<double>& g) {
  const std::size_t d = v.size();
  g.assign(d, 0.0);
  if (std::isinf(p)) {
    std::size_t arg = 0;
    for (std::size_t k = 1; k < d; ++k) {
      if (std::abs(v[k]) > std::abs(v[arg])) arg = k;
    }
    g[arg] = v[arg] >= 0.0 ? 1.0 : -1.0;
    return;
  }
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return;
  double nrm = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double a = std::abs(v[k]) / scale;
    g[k] = std::copysign(p == 2.0 ? a : std::pow(a, p - 1.0), v[k]);
    nrm += g[k] * g[k];
  }
  nrm = std::sqrt(nrm);
  if (nrm > 0.0) {
    for (double& x : g) x /= nrm;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Projects v onto the cone {u : <u, n> <= 0 for every active outward normal n}
// (at most two normals, each of unit length).
void tangent_project(std::vector<double>& v, const std::vector<std::vector<double>>& normals) {
  auto remove = [&](const std::vector<double>& n, double c) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * n[k];
  };
  if (normals.empty()) return;
  const std::vector<double> original = v;
  // Single-constraint candidates first.
  for (std::size_t i = 0; i < normals.size(); ++i) {
    v = original;
    const double c = dot(v, normals[i]);
    if (c > 0.0) remove(normals[i], c);
    bool feasible = true;
    for (const auto& n : normals) feasible = feasible && dot(v, n) <= 1e-14;
    if (feasible) return;
  }
  // Both constraints bind: project onto the orthogonal complement of both.
  v = original;
  std::vector<double> e1 = normals[0], e2 = normals[1];
  const double c12 = dot(e2, e1);
  for (std::size_t k = 0; k < e2.size(); ++k) e2[k] -= c12 * e1[k];
  const double n2 = std::sqrt(dot(e2, e2));
  remove(e1, dot(v, e1));
  if (n2 > 1e-12) {
    for (double& x : e2) x /= n2;
    remove(e2, dot(v, e2));
  }
}

}  // namespace

double max_intersection_diameter(double p, const std::vector<double>& center, double delta,
                                 const EstimatorConfig& config, double stop_above,
                                 WitnessPair* best) {
  const std::size_t d = center.size();
  Lens lens{p, center, std::vector<double>(d), (1.0 + delta) / 2.0};
  for (std::size_t k = 0; k < d; ++k) lens.mid[k] = center[k] / 2.0;

  const int starts = std::max(1, config.starts);
  std::vector<double> values(starts, -1.0);
  std::vector<std::vector<double>> zs(starts), ws(starts);
  int stop_flag = 0;

#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < starts; ++s) {
    int stopped = 0;
#pragma omp atomic read
    stopped = stop_flag;
    if (stopped) continue;
    std::mt19937_64 rng(config.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s + 1));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> z(d), w(d), zt(d), wt(d), diff(d), g;
    for (std::size_t k = 0; k < d; ++k) {
      z[k] = lens.mid[k] + lens.radius * gauss(rng);
      w[k] = lens.mid[k] + lens.radius * gauss(rng);
    }
    lens.retract(z);
    lens.retract(w);
    double f = lp_distance(z, w, p);
    double step = lens.radius;
    std::vector<double> vz(d), vw(d);
    std::vector<std::vector<double>> normals;
    // Outward unit normals of the active ball constraints at x.
    auto active_normals = [&](const std::vector<double>& x) {
      normals.clear();
      std::vector<double> n;
      const std::vector<double>* centers[2] = {&lens.origin, &lens.center};
      for (const auto* c : centers) {
        for (std::size_t k = 0; k < d; ++k) diff[k] = x[k] - (*c)[k];
        if (lp_norm(diff, p) >= lens.radius * (1.0 - 1e-9)) {
          norm_gradient(diff, p, n);
          normals.push_back(n);
        }
      }
    };
    for (int it = 0; it < config.iterations && step > 1e-13 * lens.radius; ++it) {
      if (f > stop_above) break;
      for (std::size_t k = 0; k < d; ++k) diff[k] = z[k] - w[k];
      norm_gradient(diff, p, g);
      if (f == 0.0) {
        // Coincident start: push apart along a random direction.
        for (auto& x : g) x = gauss(rng);
      }
      vz = g;
      for (std::size_t k = 0; k < d; ++k) vw[k] = -g[k];
      active_normals(z);
      tangent_project(vz, normals);
      active_normals(w);
      tangent_project(vw, normals);
      for (std::size_t k = 0; k < d; ++k) {
        zt[k] = z[k] + step * vz[k];
        wt[k] = w[k] + step * vw[k];
      }
      lens.retract(zt);
      lens.retract(wt);
      const double ft = lp_distance(zt, wt, p);
      if (ft > f) {
        z.swap(zt);
        w.swap(wt);
        f = ft;
        step = std::min(step * 1.5, 2.0 * lens.radius);
      } else {
        step *= 0.5;
      }
    }
    values[s] = f;
    zs[s] = std::move(z);
    ws[s] = std::move(w);
    if (f > stop_above) {
#pragma omp atomic write
      stop_flag = 1;
    }
  }

  double result = -1.0;
  int arg = -1;
  for (int s = 0; s < starts; ++s) {
    if (!std::isfinite(values[s]) && values[s] != -1.0) {
      throw Error(ErrorKind::kOptimization, "intersection-diameter search produced a non-finite value");
    }
    if (values[s] > result) {
      result = values[s];
      arg = s;
    }
  }
  if (arg < 0) throw Error(ErrorKind::kOptimization, "intersection-diameter search ran no starts");
  if (best != nullptr) {
    *best = WitnessPair{center, zs[arg], ws[arg], result};
  }
  return result;
}

namespace {

std::optional<WitnessPair> flat_witness(double p, int dimension) {
  // Two centers at distance 1 and two points at distance 1 inside both
  // radius-1/2 balls: the intersection never shrinks.
  WitnessPair wp;
  wp.center.assign(dimension, 0.0);
  wp.z.assign(dimension, 0.0);
  wp.w.assign(dimension, 0.0);
  if (std::isinf(p)) {
    wp.center[0] = 1.0;
    wp.z[0] = 0.5;
    wp.z[1] = 0.5;
    wp.w[0] = 0.5;
    wp.w[1] = -0.5;
  } else if (p == 1.0) {
    wp.center[0] = 0.5;
    wp.center[1] = 0.5;
    wp.z[0] = 0.5;
    wp.w[1] = 0.5;
  } else {
    return std::nullopt;
  }
  const std::vector<double> origin(dimension, 0.0);
  const bool inside = lp_distance(wp.z, origin, p) <= 0.5 && lp_distance(wp.z, wp.center, p) <= 0.5 &&
                      lp_distance(wp.w, origin, p) <= 0.5 && lp_distance(wp.w, wp.center, p) <= 0.5 &&
                      lp_distance(wp.center, origin, p) == 1.0;
  if (!inside) throw Error(ErrorKind::kValidation, "flat-norm witness failed its own check");
  wp.separation = lp_distance(wp.z, wp.w, p);
  return wp;
}

}  // namespace

ModulusEstimate estimate_modulus(double p, int dimension, double epsilon,
                                 const EstimatorConfig& config) {
  if (!(p >= 1.0)) throw Error(ErrorKind::kDomain, "estimate_modulus: p must be in [1, inf]");
  if (dimension < 2) throw Error(ErrorKind::kDomain, "estimate_modulus: dimension must be at least 2");
  if (!(epsilon > 0.0 && epsilon < 2.0)) {
    throw Error(ErrorKind::kDomain, "estimate_modulus: epsilon must be in (0, 2)");
  }

  if (auto witness = flat_witness(p, dimension); witness && witness->separation > epsilon) {
    return ModulusEstimate{0.0, 0.0, false, witness};
  }

  std::vector<std::vector<double>> directions;
  const int count = p == 2.0 ? 1 : std::clamp(config.max_directions, 1, dimension);
  for (int j = 1; j <= count; ++j) {
    std::vector<double> y(dimension, 0.0);
    const double entry = std::isinf(p) ? 1.0 : std::pow(static_cast<double>(j), -1.0 / p);
    for (int k = 0; k < j; ++k) y[k] = entry;
    directions.push_back(std::move(y));
  }

  ModulusEstimate out;
  out.delta = kInfinity;
  for (const auto& y : directions) {
    WitnessPair at_zero;
    const double m0 = max_intersection_diameter(p, y, 0.0, config, epsilon, &at_zero);
    if (m0 > epsilon) {
      return ModulusEstimate{0.0, config.inner_tolerance, false, at_zero};
    }
    // M(δ) >= δ (the axial pair), so the answer lies in [0, ε].
    double lo = 0.0;
    double hi = epsilon;
    while (hi - lo > config.bisection_tolerance) {
      const double mid = 0.5 * (lo + hi);
      if (max_intersection_diameter(p, y, mid, config, epsilon) > epsilon) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    if (lo < out.delta) {
      out.delta = lo;
      out.error_bar = (hi - lo) + config.inner_tolerance;
    }
  }
  return out;
}

std::vector<double> default_epsilon_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 10; ++i) g.push_back(0.1 * i);
  return g;
}

RoundBallModulus modulus_for_target(const TargetDescriptor& target, const std::vector<double>& grid,
                                    const EstimatorConfig& config) {
  if (target.kind == TargetDescriptor::Kind::kHilbert) return RoundBallModulus::hilbert();
  if (target.p == 1.0 || std::isinf(target.p)) {
    throw Error(ErrorKind::kNotUniformlyConvex,
                "target " + target.to_string() + " is not uniformly convex; no round-ball modulus exists");
  }
  if (target.dimension < 2) {
    // On a line every p-norm is Euclidean and the planar Hilbert modulus
    // under-estimates the true one (δ = ε there).
    std::vector<RoundBallModulus::Entry> entries;
    for (double e : grid) entries.push_back({e, hilbert_modulus(e), 0.0});
    return RoundBallModulus::tabulated(std::move(entries), target.to_string());
  }
  std::vector<RoundBallModulus::Entry> entries;
  for (double e : grid) {
    const ModulusEstimate est = estimate_modulus(target.p, target.dimension, e, config);
    entries.push_back({e, std::max(0.0, est.delta - est.error_bar), est.error_bar});
  }
  return RoundBallModulus::tabulated(std::move(entries), target.to_string());
}

}  // namespace laakso
