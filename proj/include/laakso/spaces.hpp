#pragma once

// Exact constructions of the obstruction spaces: the Laakso-type graphs
// Gamma_n with their hierarchy of sub-copies, the glued chain
// Gamma_1 ∪ ... ∪ Gamma_N, the level-scaled union, binary trees, and the
// recursive sup-norm point sets.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laakso/dyadic.hpp"
#include "laakso/error.hpp"
#include "laakso/graph.hpp"
#include "laakso/kernels.hpp"
#include "laakso/metric_space.hpp"
#include "laakso/quadruple.hpp"

namespace laakso {

struct VertexPair {
  VertexId first = 0;
  VertexId second = 0;

  bool same_unordered(const VertexPair& o) const {
    return (first == o.first && second == o.second) || (first == o.second && second == o.first);
  }
  friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

/// Gamma_n: four copies of Gamma_{n-1} glued in a cycle, down to single
/// edges at level 0.
///
/// Every sub-copy is addressed by a string over {0,1,2,3} (the empty string
/// is the whole graph). A sub-copy of level k >= 1 has four joints J0..J3 in
/// cyclic order; its primary pairs are {J0,J2} (listed first, and the pair
/// its parent glues along) and {J1,J3}. Child i spans J[i-1 mod 4] .. J[i]
/// and is glued along its own {J0,J2}. A level-0 sub-copy is one edge whose
/// two primary pairs coincide.
///
/// Vertex ids are "v<address>.<joint>" naming the sub-copy that created the
/// vertex, so vertex index order equals lexicographic id order.
class LevelGraph {
 public:
  int level() const { return level_; }
  const Graph& graph() const { return graph_; }

  std::array<VertexPair, 2> primary_pairs() const { return copy_primary_pairs(""); }

  bool has_address(std::string_view address) const;
  int copy_level(std::string_view address) const;
  std::array<VertexId, 4> copy_joints(std::string_view address) const;
  std::array<VertexPair, 2> copy_primary_pairs(std::string_view address) const;

  /// Ambient vertex of every vertex of the standalone Gamma_{level-|a|}, indexed
  /// by the standalone vertex index.
  std::vector<VertexId> copy_embedding(std::string_view address) const;

  /// Sorted ambient vertices of the sub-copy.
  std::vector<VertexId> copy_vertices(std::string_view address) const;

  /// All addresses in canonical (pre-order) order.
  std::vector<std::string> addresses() const;

 private:
  friend LevelGraph build_gamma(int n, std::size_t budget);

  std::size_t node_of(std::string_view address) const;
  void collect(std::size_t node, int level, std::vector<VertexId>& out) const;

  int level_ = 0;
  Graph graph_;
  std::vector<std::array<VertexId, 4>> joints_;  // heap order: child i of k is 4k+1+i
};

/// Builds Gamma_n. Throws Error(kCapacity) when 4^n exceeds `budget`.
LevelGraph build_gamma(int n, std::size_t budget = edge_budget());

/// Gamma_1, ..., Gamma_N glued in sequence: the second vertex of block k's
/// first primary pair (its J2) is identified with block k+1's J0. With
/// `scale_by_level`, block k's edges have length k (the bounded-geometry
/// union); otherwise all edges are unit.
class ChainGraph {
 public:
  int blocks() const { return static_cast<int>(blocks_.size()); }
  const Graph& graph() const { return graph_; }
  bool scaled() const { return scaled_; }

  /// Block k, 1-based, as a standalone Gamma_k.
  const LevelGraph& block(int k) const { return blocks_.at(k - 1); }
  VertexId to_chain(int k, VertexId local) const { return maps_.at(k - 1).at(local); }

  /// Primary pairs of block k, in chain vertex indices.
  std::array<VertexPair, 2> block_primary_pairs(int k) const;

  /// Joint vertices; joints()[k-1] glues block k to block k+1.
  const std::vector<VertexId>& joints() const { return joints_; }

 private:
  friend ChainGraph build_chain(int blocks, std::size_t budget, bool scale_by_level);

  Graph graph_;
  std::vector<LevelGraph> blocks_;
  std::vector<std::vector<VertexId>> maps_;
  std::vector<VertexId> joints_;
  bool scaled_ = false;
};

/// The budget bounds the largest block (4^N edges).
ChainGraph build_chain(int blocks, std::size_t budget = edge_budget(), bool scale_by_level = false);

/// Vertex sets of Gamma_1..Gamma_N with block n's metric multiplied by n,
/// glued as in the chain.
ChainGraph build_scaled_union(int blocks, std::size_t budget = edge_budget());
FiniteMetricSpace scaled_union_metric(const ChainGraph& chain);

/// Largest ball cardinality at `radius` in a (possibly scaled) chain.
std::size_t max_ball_cardinality(const ChainGraph& chain, std::int64_t radius,
                                 kernels::BallKind kind = kernels::BallKind::kOpen);

/// Binary tree T_n: all ±1 strings of length 0..n, the empty string being the
/// root. Ids are "t" followed by '+'/'-' letters.
class Tree {
 public:
  int depth() const { return depth_; }
  const Graph& graph() const { return graph_; }
  const std::string& label(VertexId v) const { return labels_[v]; }

  /// depth(u) + depth(v) − 2·depth(common prefix).
  std::int64_t prefix_distance(VertexId u, VertexId v) const;

 private:
  friend Tree build_tree(int n, std::size_t budget);
  int depth_ = 0;
  Graph graph_;
  std::vector<std::string> labels_;
};

Tree build_tree(int n, std::size_t budget = edge_budget());
FiniteMetricSpace tree_metric(const Tree& tree);

/// Exact shortest-path metric (BFS for unit edges, Dijkstra otherwise).
/// Throws Error(kDisconnected) naming an unreachable pair.
FiniteMetricSpace path_metric(const Graph& g, std::string scale_note = {});
FiniteMetricSpace path_metric(const LevelGraph& g);

/// The diamond of sub-copy `address`: (x1,x3) = its first primary pair and
/// (x2,x4) = its second, with distances measured in the ambient graph. When
/// `metric` is null the four needed distances are computed by BFS.
Quadruple primary_quadruple(const LevelGraph& g, std::string_view address,
                            const FiniteMetricSpace* metric = nullptr);

/// The child address whose sub-copy has `side` as its first primary pair.
/// Throws when `side` is not a side pair of the quadruple at `address` or the
/// child would be a single edge.
std::string child_address(const LevelGraph& g, std::string_view address, VertexPair side);

using DyadicVector = std::vector<Dyadic>;

Dyadic sup_distance(std::span<const Dyadic> a, std::span<const Dyadic> b);

struct LinfSplit {
  DyadicVector v, w, x, y;  // all of dimension d+1
  Dyadic diagonal;
};

/// Pads v, w with a zero coordinate and adds x, y = (v+w)/2 ⊕ ±‖v−w‖_∞/2.
/// The diamond pattern is verified exactly before returning.
LinfSplit linf_split(std::span<const Dyadic> v, std::span<const Dyadic> w);

struct LinfPointSet {
  int depth = 0;
  std::size_t dimension = 1;
  std::vector<std::string> ids;
  std::vector<DyadicVector> points;
  std::vector<int> generation;
  std::vector<std::array<std::size_t, 4>> quadruples;  // x1, x2, x3, x4
};

/// Starts from (0), (1) and splits every side pair of the previous
/// generation's quadruples, `depth` times.
LinfPointSet build_linf_set(int depth, std::size_t budget = edge_budget());
FiniteMetricSpace linf_metric(const LinfPointSet& set);
Quadruple linf_quadruple(const LinfPointSet& set, std::size_t q);

}  // namespace laakso
