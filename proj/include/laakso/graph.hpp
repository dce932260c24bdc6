#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace laakso {

using VertexId = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  std::int64_t weight = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph with string ids and a CSR adjacency built once at
/// construction. Edges are stored with u < v in canonical (sorted) order.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<std::string> ids, std::vector<Edge> edges);

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(VertexId v) const { return ids_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::span<const std::int64_t> neighbor_weights(VertexId v) const {
    return {adj_weight_.data() + offsets_[v], adj_weight_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  bool unit_weights() const { return unit_; }

  /// Index of an id; throws Error(kValidation) when absent.
  VertexId index_of(const std::string& id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adj_;
  std::vector<std::int64_t> adj_weight_;
  bool unit_ = true;
  bool sorted_ids_ = false;
};

}  // namespace laakso
