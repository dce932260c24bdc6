#include "laakso/spaces.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>

#include "laakso/norms.hpp"

namespace laakso {
namespace {

std::size_t pow4(int n) { return std::size_t{1} << (2 * n); }

void require_budget(int level, std::size_t budget, const char* what) {
  if (level < 0) throw Error(ErrorKind::kInvalidArgument, std::string(what) + ": negative level");
  if (level > 30 || pow4(level) > budget) {
    throw Error(ErrorKind::kCapacity, std::string(what) + ": 4^" + std::to_string(level) +
                                          " edges exceeds the budget of " +
                                          std::to_string(budget));
  }
}

std::string vertex_id(const std::string& address, int joint) {
  return "v" + address + "." + std::to_string(joint);
}

struct GammaBuilder {
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  std::vector<std::array<VertexId, 4>> joints;

  VertexId add_vertex(const std::string& address, int joint) {
    ids.push_back(vertex_id(address, joint));
    return static_cast<VertexId>(ids.size() - 1);
  }

  // Pre-order: a node creates its own vertices before any child does, and
  // children are visited 0..3, which keeps ids in lexicographic order.
  void build(std::size_t node, int level, std::string& address, VertexId p, VertexId q) {
    if (level == 0) {
      joints[node] = {p, p, q, q};
      edges.push_back({p, q, 1});
      return;
    }
    const VertexId j1 = add_vertex(address, 1);
    const VertexId j3 = add_vertex(address, 3);
    const std::array<VertexId, 4> j{p, j1, q, j3};
    joints[node] = j;
    for (int i = 0; i < 4; ++i) {
      address.push_back(static_cast<char>('0' + i));
      build(4 * node + 1 + i, level - 1, address, j[(i + 3) % 4], j[i]);
      address.pop_back();
    }
  }
};

std::size_t tree_node_count(int level) { return (pow4(level + 1) - 1) / 3; }

}  // namespace

// ---------------------------------------------------------------- Gamma_n

LevelGraph build_gamma(int n, std::size_t budget) {
  require_budget(n, budget, "build_gamma");
  GammaBuilder b;
  b.joints.resize(tree_node_count(n));
  b.ids.reserve((2 * pow4(n) + 4) / 3);
  b.edges.reserve(pow4(n));
  std::string address;
  if (n == 0) {
    const VertexId p = b.add_vertex(address, 0);
    const VertexId q = b.add_vertex(address, 2);
    b.build(0, 0, address, p, q);
  } else {
    const VertexId j0 = b.add_vertex(address, 0);
    const VertexId j1 = b.add_vertex(address, 1);
    const VertexId j2 = b.add_vertex(address, 2);
    const VertexId j3 = b.add_vertex(address, 3);
    const std::array<VertexId, 4> j{j0, j1, j2, j3};
    b.joints[0] = j;
    for (int i = 0; i < 4; ++i) {
      address.push_back(static_cast<char>('0' + i));
      b.build(1 + static_cast<std::size_t>(i), n - 1, address, j[(i + 3) % 4], j[i]);
      address.pop_back();
    }
  }
  LevelGraph g;
  g.level_ = n;
  g.graph_ = Graph(std::move(b.ids), std::move(b.edges));
  g.joints_ = std::move(b.joints);
  return g;
}

std::size_t LevelGraph::node_of(std::string_view address) const {
  if (static_cast<int>(address.size()) > level_) {
    throw Error(ErrorKind::kValidation, "address '" + std::string(address) + "' is deeper than level " +
                                            std::to_string(level_));
  }
  std::size_t node = 0;
  for (char c : address) {
    if (c < '0' || c > '3') {
      throw Error(ErrorKind::kValidation, "address '" + std::string(address) + "' has a digit outside 0..3");
    }
    node = 4 * node + 1 + static_cast<std::size_t>(c - '0');
  }
  return node;
}

bool LevelGraph::has_address(std::string_view address) const {
  if (static_cast<int>(address.size()) > level_) return false;
  return std::all_of(address.begin(), address.end(), [](char c) { return c >= '0' && c <= '3'; });
}

int LevelGraph::copy_level(std::string_view address) const {
  node_of(address);
  return level_ - static_cast<int>(address.size());
}

std::array<VertexId, 4> LevelGraph::copy_joints(std::string_view address) const {
  return joints_[node_of(address)];
}

std::array<VertexPair, 2> LevelGraph::copy_primary_pairs(std::string_view address) const {
  const auto j = copy_joints(address);
  return {VertexPair{j[0], j[2]}, VertexPair{j[1], j[3]}};
}

void LevelGraph::collect(std::size_t node, int level, std::vector<VertexId>& out) const {
  if (level == 0) return;
  out.push_back(joints_[node][1]);
  out.push_back(joints_[node][3]);
  for (std::size_t i = 0; i < 4; ++i) collect(4 * node + 1 + i, level - 1, out);
}

std::vector<VertexId> LevelGraph::copy_embedding(std::string_view address) const {
  const std::size_t node = node_of(address);
  const int level = level_ - static_cast<int>(address.size());
  const auto& j = joints_[node];
  if (level == 0) return {j[0], j[2]};
  // Mirrors the creation order of build_gamma on a standalone copy.
  std::vector<VertexId> out{j[0], j[1], j[2], j[3]};
  for (std::size_t i = 0; i < 4; ++i) collect(4 * node + 1 + i, level - 1, out);
  return out;
}

std::vector<VertexId> LevelGraph::copy_vertices(std::string_view address) const {
  auto v = copy_embedding(address);
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::string> LevelGraph::addresses() const {
  std::vector<std::string> out;
  std::string a;
  std::function<void(int)> walk = [&](int depth) {
    out.push_back(a);
    if (depth == level_) return;
    for (int i = 0; i < 4; ++i) {
      a.push_back(static_cast<char>('0' + i));
      walk(depth + 1);
      a.pop_back();
    }
  };
  walk(0);
  return out;
}

// ------------------------------------------------------------------ chain

ChainGraph build_chain(int blocks, std::size_t budget, bool scale_by_level) {
  if (blocks < 1) throw Error(ErrorKind::kInvalidArgument, "build_chain: need at least one block");
  require_budget(blocks, budget, "build_chain");
  ChainGraph c;
  c.scaled_ = scale_by_level;
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  for (int k = 1; k <= blocks; ++k) {
    LevelGraph block = build_gamma(k, budget);
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "b%02d:", k);
    const auto& local_ids = block.graph().ids();
    std::vector<VertexId> map(local_ids.size());
    const VertexId entry = block.primary_pairs()[0].first;
    for (VertexId v = 0; v < local_ids.size(); ++v) {
      if (k > 1 && v == entry) {
        map[v] = c.joints_.back();
        continue;
      }
      map[v] = static_cast<VertexId>(ids.size());
      ids.push_back(prefix + local_ids[v]);
    }
    for (const auto& e : block.graph().edges()) {
      edges.push_back({map[e.u], map[e.v], scale_by_level ? k : 1});
    }
    if (k < blocks) c.joints_.push_back(map[block.primary_pairs()[0].second]);
    c.maps_.push_back(std::move(map));
    c.blocks_.push_back(std::move(block));
  }
  c.graph_ = Graph(std::move(ids), std::move(edges));
  return c;
}

std::array<VertexPair, 2> ChainGraph::block_primary_pairs(int k) const {
  const auto local = block(k).primary_pairs();
  return {VertexPair{to_chain(k, local[0].first), to_chain(k, local[0].second)},
          VertexPair{to_chain(k, local[1].first), to_chain(k, local[1].second)}};
}

ChainGraph build_scaled_union(int blocks, std::size_t budget) {
  return build_chain(blocks, budget, true);
}

FiniteMetricSpace scaled_union_metric(const ChainGraph& chain) {
  return path_metric(chain.graph(), "scaled union of Gamma_1..Gamma_" + std::to_string(chain.blocks()));
}

std::size_t max_ball_cardinality(const ChainGraph& chain, std::int64_t radius,
                                 kernels::BallKind kind) {
  return kernels::parallel::max_ball(chain.graph(), radius, kind).max_cardinality;
}

// ------------------------------------------------------------------- tree

Tree build_tree(int n, std::size_t budget) {
  if (n < 0) throw Error(ErrorKind::kInvalidArgument, "build_tree: negative depth");
  if (n > 40 || (std::size_t{1} << (n + 1)) - 2 > budget) {
    throw Error(ErrorKind::kCapacity, "build_tree: depth " + std::to_string(n) + " exceeds the edge budget");
  }
  Tree t;
  t.depth_ = n;
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  std::string label;
  std::function<VertexId()> grow = [&]() -> VertexId {
    const auto v = static_cast<VertexId>(ids.size());
    ids.push_back("t" + label);
    t.labels_.push_back(label);
    if (static_cast<int>(label.size()) < n) {
      for (char c : {'+', '-'}) {
        label.push_back(c);
        edges.push_back({v, grow(), 1});
        label.pop_back();
      }
    }
    return v;
  };
  grow();
  t.graph_ = Graph(std::move(ids), std::move(edges));
  return t;
}

std::int64_t Tree::prefix_distance(VertexId u, VertexId v) const {
  const std::string& a = labels_[u];
  const std::string& b = labels_[v];
  std::size_t common = 0;
  while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
  return static_cast<std::int64_t>(a.size() + b.size() - 2 * common);
}

FiniteMetricSpace tree_metric(const Tree& tree) {
  const std::size_t n = tree.graph().vertex_count();
  std::vector<std::int64_t> d(n * n);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = 0; v < n; ++v) d[u * n + v] = tree.prefix_distance(u, v);
  }
  return FiniteMetricSpace(tree.graph().ids(), std::move(d), 0, "tree T_" + std::to_string(tree.depth()));
}

// ------------------------------------------------------------ path metric

FiniteMetricSpace path_metric(const Graph& g, std::string scale_note) {
  auto dist = kernels::parallel::all_pairs(g);
  const std::size_t n = g.vertex_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i * n + j] == kernels::kUnreachable) {
        throw Error(ErrorKind::kDisconnected,
                    "graph is disconnected: no path between " + g.id(i) + " and " + g.id(j));
      }
    }
  }
  return FiniteMetricSpace(g.ids(), std::move(dist), 0, std::move(scale_note));
}

FiniteMetricSpace path_metric(const LevelGraph& g) {
  return path_metric(g.graph(), "Gamma_" + std::to_string(g.level()));
}

// ------------------------------------------------------------- quadruples

Quadruple primary_quadruple(const LevelGraph& g, std::string_view address,
                            const FiniteMetricSpace* metric) {
  if (g.copy_level(address) < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "sub-copy '" + std::string(address) + "' is a single edge and has no quadruple");
  }
  const auto j = g.copy_joints(address);
  Quadruple q;
  // x1 = J0, x2 = J1, x3 = J2, x4 = J3.
  for (int k = 0; k < 4; ++k) {
    q.index[k] = j[k];
    q.ids[k] = g.graph().id(j[k]);
  }
  if (metric != nullptr) {
    for (std::size_t s = 0; s < 6; ++s) {
      const auto [a, b] = Quadruple::kPairs[s];
      q.domain[s] = metric->distance(q.index[a], q.index[b]);
    }
  } else {
    std::vector<std::int64_t> row1(g.graph().vertex_count());
    std::vector<std::int64_t> row2(g.graph().vertex_count());
    std::vector<std::int64_t> row3(g.graph().vertex_count());
    auto bfs = [&](VertexId s, std::vector<std::int64_t>& row) {
      std::fill(row.begin(), row.end(), kernels::kUnreachable);
      std::vector<VertexId> frontier{s}, next;
      row[s] = 0;
      for (std::int64_t depth = 1; !frontier.empty(); ++depth) {
        next.clear();
        for (VertexId u : frontier) {
          for (VertexId v : g.graph().neighbors(u)) {
            if (row[v] == kernels::kUnreachable) {
              row[v] = depth;
              next.push_back(v);
            }
          }
        }
        frontier.swap(next);
      }
    };
    bfs(j[0], row1);
    bfs(j[1], row2);
    bfs(j[2], row3);
    q.domain[Quadruple::kDiag13] = Dyadic(row1[j[2]]);
    q.domain[Quadruple::kDiag24] = Dyadic(row2[j[3]]);
    q.domain[Quadruple::kSide12] = Dyadic(row1[j[1]]);
    q.domain[Quadruple::kSide14] = Dyadic(row1[j[3]]);
    q.domain[Quadruple::kSide32] = Dyadic(row3[j[1]]);
    q.domain[Quadruple::kSide34] = Dyadic(row3[j[3]]);
  }
  return q;
}

std::string child_address(const LevelGraph& g, std::string_view address, VertexPair side) {
  const int level = g.copy_level(address);
  if (level < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "children of sub-copy '" + std::string(address) + "' are single edges");
  }
  const auto j = g.copy_joints(address);
  // Side slot -> child digit: child i spans J[i-1] .. J[i].
  const std::array<std::pair<VertexPair, char>, 4> table{{
      {VertexPair{j[0], j[1]}, '1'},
      {VertexPair{j[0], j[3]}, '0'},
      {VertexPair{j[2], j[1]}, '2'},
      {VertexPair{j[2], j[3]}, '3'},
  }};
  for (const auto& [pair, digit] : table) {
    if (pair.same_unordered(side)) return std::string(address) + digit;
  }
  throw Error(ErrorKind::kInvalidArgument, "pair {" + g.graph().id(side.first) + ", " +
                                               g.graph().id(side.second) +
                                               "} is not a side pair of sub-copy '" +
                                               std::string(address) + "'");
}

// ------------------------------------------------------------ sup-norm set

Dyadic sup_distance(std::span<const Dyadic> a, std::span<const Dyadic> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kInvalidArgument, "dimension mismatch");
  Dyadic m;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, (a[k] - b[k]).abs());
  return m;
}

LinfSplit linf_split(std::span<const Dyadic> v, std::span<const Dyadic> w) {
  if (v.size() != w.size() || v.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "linf_split: vectors must share a positive dimension");
  }
  const Dyadic norm = sup_distance(v, w);
  if (norm.is_zero()) throw Error(ErrorKind::kDegenerate, "linf_split: v equals w");
  LinfSplit s;
  s.v.assign(v.begin(), v.end());
  s.w.assign(w.begin(), w.end());
  s.v.emplace_back();
  s.w.emplace_back();
  for (std::size_t k = 0; k < v.size(); ++k) s.x.push_back((v[k] + w[k]).half());
  s.y = s.x;
  s.x.push_back(norm.half());
  s.y.push_back(-norm.half());
  s.diagonal = norm;
  const Dyadic side = norm.half();
  const bool ok = sup_distance(s.v, s.w) == norm && sup_distance(s.x, s.y) == norm &&
                  sup_distance(s.v, s.x) == side && sup_distance(s.v, s.y) == side &&
                  sup_distance(s.w, s.x) == side && sup_distance(s.w, s.y) == side;
  if (!ok) throw Error(ErrorKind::kValidation, "linf_split: diamond pattern check failed");
  return s;
}

LinfPointSet build_linf_set(int depth, std::size_t budget) {
  require_budget(depth, budget, "build_linf_set");
  LinfPointSet set;
  set.depth = depth;
  set.dimension = 1;
  set.points = {{Dyadic(0)}, {Dyadic(1)}};
  set.generation = {0, 0};
  std::vector<std::array<std::size_t, 2>> pending{{0, 1}};
  for (int gen = 1; gen <= depth; ++gen) {
    for (auto& p : set.points) p.emplace_back();
    std::vector<std::array<std::size_t, 2>> next;
    for (const auto& [a, b] : pending) {
      std::span<const Dyadic> va(set.points[a].data(), set.dimension);
      std::span<const Dyadic> vb(set.points[b].data(), set.dimension);
      LinfSplit s = linf_split(va, vb);
      const std::size_t x = set.points.size();
      set.points.push_back(std::move(s.x));
      set.points.push_back(std::move(s.y));
      set.generation.push_back(gen);
      set.generation.push_back(gen);
      const std::array<std::size_t, 4> quad{a, x, b, x + 1};
      set.quadruples.push_back(quad);
      for (auto slot : Quadruple::kSides) {
        const auto [i, j] = Quadruple::kPairs[slot];
        next.push_back({quad[i], quad[j]});
      }
    }
    pending = std::move(next);
    ++set.dimension;
  }
  const std::size_t width = std::to_string(set.points.size() - 1).size();
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    std::string digits = std::to_string(i);
    set.ids.push_back("p" + std::string(width - digits.size(), '0') + digits);
  }
  return set;
}

FiniteMetricSpace linf_metric(const LinfPointSet& set) {
  const std::size_t n = set.points.size();
  std::vector<Dyadic> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i * n + j] = d[j * n + i] = sup_distance(set.points[i], set.points[j]);
    }
  }
  return FiniteMetricSpace::from_dyadic(set.ids, d, "sup-norm set, depth " + std::to_string(set.depth));
}

Quadruple linf_quadruple(const LinfPointSet& set, std::size_t q) {
  const auto& idx = set.quadruples.at(q);
  Quadruple out;
  for (int k = 0; k < 4; ++k) {
    out.index[k] = idx[k];
    out.ids[k] = set.ids[idx[k]];
  }
  for (std::size_t s = 0; s < 6; ++s) {
    const auto [a, b] = Quadruple::kPairs[s];
    out.domain[s] = sup_distance(set.points[idx[a]], set.points[idx[b]]);
  }
  return out;
}

// -------------------------------------------------------------- Quadruple

bool Quadruple::is_diamond() const {
  const Dyadic c = domain[kDiag13];
  if (c <= Dyadic(0) || domain[kDiag24] != c) return false;
  const Dyadic half = c.half();
  return std::all_of(kSides.begin(), kSides.end(), [&](Slot s) { return domain[s] == half; });
}

void Quadruple::set_image_points(std::span<const std::span<const double>, 4> points, double p) {
  std::array<double, 6> img{};
  for (std::size_t s = 0; s < 6; ++s) {
    const auto [a, b] = kPairs[s];
    img[s] = lp_distance(points[a], points[b], p);
  }
  image = img;
}

}  // namespace laakso
