#pragma once

// File formats. JSON documents carry format_version 1 and are written with
// sorted keys; CSV tables have a header row. Everything is deterministic for
// identical inputs.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "laakso/certifier.hpp"
#include "laakso/convexity.hpp"
#include "laakso/embedder.hpp"
#include "laakso/metric_space.hpp"
#include "laakso/spaces.hpp"

namespace laakso::io {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string dump(const Json& j);  // two-space indent, trailing newline
Json parse_json(const std::string& text, const std::string& what);

std::string sha256_hex(const std::string& bytes);

// ----------------------------------------------------------------- graphs

Json graph_json(const LevelGraph& g);
Json graph_json(const ChainGraph& c);
Json graph_json(const Tree& t);

struct GraphFile {
  std::string kind;  // "gamma", "chain" or "tree"
  int level = 0;     // level, block count or depth
  Graph graph;
};

GraphFile parse_graph(const Json& j);

/// Rebuilds Gamma_level and checks the file's vertices and edges match it.
LevelGraph load_level_graph(const GraphFile& file);

// ---------------------------------------------------------------- metrics

/// Header "id,<ids...>", then one row per point with exact decimal entries.
std::string metric_csv(const FiniteMetricSpace& space);
FiniteMetricSpace parse_metric_csv(const std::string& text);

Json linf_json(const LinfPointSet& set);
FiniteMetricSpace parse_linf(const Json& j);

/// Metric of any space file: graph JSON, sup-norm point-set JSON, or metric CSV.
FiniteMetricSpace load_space(const std::filesystem::path& path);

// ------------------------------------------------------------- embeddings

/// Header "id,c1,...,cd"; coordinates in %.17g.
std::string embedding_csv(const Embedding& e);
Embedding parse_embedding_csv(const std::string& text, double p);

Json stats_json(const DistortionStats& s, const std::vector<std::string>& ids);
Json embedding_sidecar(const Embedding& e, const OptimizerConfig& config, const Json& space);

// ----------------------------------------------------------------- tables

std::string modulus_csv(const RoundBallModulus& m);
std::string bound_csv(const std::vector<LowerBound>& rows, const std::string& descriptor);
Json trace_json(const AmplificationTrace& t);

// --------------------------------------------------------------- manifest

struct Manifest {
  std::string command;
  Json params = Json::object();
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  double duration_seconds = 0.0;
};

/// Digests every listed file as it is on disk now.
Json manifest_json(const Manifest& m);

}  // namespace laakso::io
