#include "laakso/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "laakso/error.hpp"

#ifndef LAAKSO_VERSION
#define LAAKSO_VERSION "0.0.0"
#endif

namespace laakso::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, "cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw Error(ErrorKind::kInvalidArgument, "failed writing '" + path.string() + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, what + ": " + e.what());
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kValidation, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 15]);
  }
  return out;
}

// ----------------------------------------------------------------- graphs

namespace {

Json pair_json(const Graph& g, VertexPair p) {
  return Json::array({g.id(p.first), g.id(p.second)});
}

// Vertices sorted by id, edges as id pairs with the smaller id first, sorted.
void put_vertices_and_edges(Json& j, const Graph& g) {
  std::vector<std::string> ids = g.ids();
  std::sort(ids.begin(), ids.end());
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    auto a = g.id(e.u), b = g.id(e.v);
    if (b < a) std::swap(a, b);
    edges.emplace_back(std::move(a), std::move(b));
  }
  std::sort(edges.begin(), edges.end());
  j["vertices"] = std::move(ids);
  Json ej = Json::array();
  for (auto& [a, b] : edges) ej.push_back(Json::array({a, b}));
  j["edges"] = std::move(ej);
}

Json copy_entry(const LevelGraph& g, const std::string& address, const Graph& ids_from,
                const std::vector<VertexId>* map) {
  std::vector<std::string> vs;
  for (VertexId v : g.copy_vertices(address)) vs.push_back(ids_from.id(map ? (*map)[v] : v));
  std::sort(vs.begin(), vs.end());
  Json pp = Json::array();
  for (VertexPair p : g.copy_primary_pairs(address)) {
    if (map) p = {(*map)[p.first], (*map)[p.second]};
    pp.push_back(pair_json(ids_from, p));
  }
  return Json{{"level", g.copy_level(address)}, {"vertices", std::move(vs)}, {"primary_pairs", std::move(pp)}};
}

}  // namespace

Json graph_json(const LevelGraph& g) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "gamma";
  j["level"] = g.level();
  put_vertices_and_edges(j, g.graph());
  Json pp = Json::array();
  for (VertexPair p : g.primary_pairs()) pp.push_back(pair_json(g.graph(), p));
  j["primary_pairs"] = std::move(pp);
  Json index = Json::object();
  for (const std::string& a : g.addresses()) index[a] = copy_entry(g, a, g.graph(), nullptr);
  j["copy_index"] = std::move(index);
  return j;
}

Json graph_json(const ChainGraph& c) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "chain";
  j["level"] = c.blocks();
  j["blocks"] = c.blocks();
  put_vertices_and_edges(j, c.graph());
  Json pp = Json::array();
  Json index = Json::object();
  for (int k = 1; k <= c.blocks(); ++k) {
    for (VertexPair p : c.block_primary_pairs(k)) pp.push_back(pair_json(c.graph(), p));
    const LevelGraph& b = c.block(k);
    std::vector<VertexId> map(b.graph().vertex_count());
    for (VertexId v = 0; v < map.size(); ++v) map[v] = c.to_chain(k, v);
    for (const std::string& a : b.addresses()) {
      index[std::to_string(k) + "/" + a] = copy_entry(b, a, c.graph(), &map);
    }
  }
  j["primary_pairs"] = std::move(pp);
  j["copy_index"] = std::move(index);
  return j;
}

Json graph_json(const Tree& t) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "tree";
  j["level"] = t.depth();
  j["depth"] = t.depth();
  put_vertices_and_edges(j, t.graph());
  j["primary_pairs"] = Json::array();
  j["copy_index"] = Json::object();
  return j;
}

GraphFile parse_graph(const Json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw Error(ErrorKind::kParse, "unsupported graph format_version");
    }
    GraphFile f;
    f.kind = j.value("kind", std::string("gamma"));
    f.level = j.at("level").get<int>();
    std::vector<std::string> ids = j.at("vertices").get<std::vector<std::string>>();
    std::map<std::string, VertexId> index;
    for (VertexId v = 0; v < ids.size(); ++v) {
      if (!index.emplace(ids[v], v).second) throw Error(ErrorKind::kParse, "duplicate vertex '" + ids[v] + "'");
    }
    std::vector<Edge> edges;
    for (const Json& e : j.at("edges")) {
      const auto a = e.at(0).get<std::string>(), b = e.at(1).get<std::string>();
      auto ia = index.find(a), ib = index.find(b);
      if (ia == index.end() || ib == index.end()) {
        throw Error(ErrorKind::kParse, "edge names unknown vertex '" + (ia == index.end() ? a : b) + "'");
      }
      edges.push_back({ia->second, ib->second, 1});
    }
    f.graph = Graph(std::move(ids), std::move(edges));
    return f;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("graph file: ") + e.what());
  }
}

LevelGraph load_level_graph(const GraphFile& file) {
  if (file.kind != "gamma") {
    throw Error(ErrorKind::kInvalidArgument, "expected a gamma graph file, got '" + file.kind + "'");
  }
  LevelGraph g = build_gamma(file.level);
  const Graph& a = g.graph();
  const Graph& b = file.graph;
  bool same = a.vertex_count() == b.vertex_count() && a.edge_count() == b.edge_count();
  if (same) {
    std::vector<std::string> sa = a.ids(), sb = b.ids();
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    same = sa == sb;
  }
  if (same) {
    for (const Edge& e : b.edges()) {
      const VertexId u = a.index_of(b.id(e.u)), v = a.index_of(b.id(e.v));
      const auto nb = a.neighbors(u);
      if (std::find(nb.begin(), nb.end(), v) == nb.end()) {
        same = false;
        break;
      }
    }
  }
  if (!same) {
    throw Error(ErrorKind::kValidation,
                "graph file does not match Gamma_" + std::to_string(file.level));
  }
  return g;
}

// ---------------------------------------------------------------- metrics

std::string metric_csv(const FiniteMetricSpace& space) {
  std::string out = "id";
  for (const auto& id : space.ids()) out += "," + id;
  out += "\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    out += space.id(i);
    for (std::size_t j = 0; j < space.size(); ++j) out += "," + space.distance(i, j).to_decimal();
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

}  // namespace

FiniteMetricSpace parse_metric_csv(const std::string& text) {
  const auto rows = read_csv(text);
  if (rows.empty() || rows[0].empty() || rows[0][0] != "id") {
    throw Error(ErrorKind::kParse, "metric file must start with an 'id' header");
  }
  std::vector<std::string> ids(rows[0].begin() + 1, rows[0].end());
  const std::size_t n = ids.size();
  if (rows.size() != n + 1) throw Error(ErrorKind::kParse, "metric file is not square");
  std::vector<Dyadic> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rows[i + 1];
    if (r.size() != n + 1) throw Error(ErrorKind::kParse, "metric row " + std::to_string(i + 1) + " has the wrong width");
    if (r[0] != ids[i]) throw Error(ErrorKind::kParse, "metric row '" + r[0] + "' is out of order");
    for (std::size_t k = 1; k <= n; ++k) entries.push_back(Dyadic::parse(r[k]));
  }
  FiniteMetricSpace space = FiniteMetricSpace::from_dyadic(std::move(ids), entries);
  space.validate();
  return space;
}

Json linf_json(const LinfPointSet& set) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "linf";
  j["depth"] = set.depth;
  j["dimension"] = set.dimension;
  j["ids"] = set.ids;
  Json pts = Json::array();
  for (const auto& p : set.points) {
    Json row = Json::array();
    for (const Dyadic& c : p) row.push_back(c.to_decimal());
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  j["generation"] = set.generation;
  Json quads = Json::array();
  for (const auto& q : set.quadruples) {
    quads.push_back(Json::array({set.ids[q[0]], set.ids[q[1]], set.ids[q[2]], set.ids[q[3]]}));
  }
  j["quadruples"] = std::move(quads);
  return j;
}

FiniteMetricSpace parse_linf(const Json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw Error(ErrorKind::kParse, "unsupported point-set format_version");
    }
    std::vector<std::string> ids = j.at("ids").get<std::vector<std::string>>();
    std::vector<DyadicVector> pts;
    for (const Json& row : j.at("points")) {
      DyadicVector p;
      for (const Json& c : row) p.push_back(Dyadic::parse(c.get<std::string>()));
      pts.push_back(std::move(p));
    }
    if (pts.size() != ids.size()) throw Error(ErrorKind::kParse, "point count does not match id count");
    const std::size_t n = ids.size();
    std::vector<Dyadic> entries(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) entries[a * n + b] = sup_distance(pts[a], pts[b]);
    }
    return FiniteMetricSpace::from_dyadic(std::move(ids), entries, "sup-norm");
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("point-set file: ") + e.what());
  }
}

FiniteMetricSpace load_space(const fs::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") {
    const Json j = parse_json(text, path.string());
    if (j.value("kind", std::string()) == "linf") return parse_linf(j);
    return path_metric(parse_graph(j).graph);
  }
  return parse_metric_csv(text);
}

// ------------------------------------------------------------- embeddings

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string embedding_csv(const Embedding& e) {
  std::string out = "id";
  for (int c = 1; c <= e.target.dimension; ++c) out += ",c" + std::to_string(c);
  out += "\n";
  for (std::size_t i = 0; i < e.ids.size(); ++i) {
    out += e.ids[i];
    for (double v : e.point(i)) out += "," + fmt17(v);
    out += "\n";
  }
  return out;
}

Embedding parse_embedding_csv(const std::string& text, double p) {
  const auto rows = read_csv(text);
  if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "id") {
    throw Error(ErrorKind::kParse, "embedding file must start with an 'id,c1,...' header");
  }
  Embedding e;
  e.target = {p, static_cast<int>(rows[0].size() - 1)};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      throw Error(ErrorKind::kParse, "embedding row " + std::to_string(r) + " has the wrong width");
    }
    e.ids.push_back(rows[r][0]);
    for (std::size_t c = 1; c < rows[r].size(); ++c) {
      try {
        std::size_t used = 0;
        e.coords.push_back(std::stod(rows[r][c], &used));
        if (used != rows[r][c].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw Error(ErrorKind::kParse, "bad coordinate '" + rows[r][c] + "' for id '" + rows[r][0] + "'");
      }
    }
  }
  return e;
}

Json stats_json(const DistortionStats& s, const std::vector<std::string>& ids) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json("inf"); };
  return Json{{"expansion", num(s.expansion)},
              {"contraction", num(s.contraction)},
              {"distortion", num(s.distortion)},
              {"l_sym", num(s.l_sym)},
              {"argmax", {ids.at(s.argmax[0]), ids.at(s.argmax[1])}},
              {"argmin", {ids.at(s.argmin[0]), ids.at(s.argmin[1])}},
              {"degenerate", s.degenerate}};
}

Json embedding_sidecar(const Embedding& e, const OptimizerConfig& config, const Json& space) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["space"] = space;
  j["target"] = {{"p", e.target.p}, {"dimension", e.target.dimension}};
  j["seed"] = config.seed;
  j["config"] = {{"restarts", config.restarts},
                 {"iterations_per_stage", config.iterations_per_stage},
                 {"initial_step", config.initial_step},
                 {"beta_start", config.beta_start},
                 {"beta_max", config.beta_max},
                 {"beta_factor", config.beta_factor},
                 {"floor_factor", config.floor_factor},
                 {"mds_start", config.mds_start}};
  j["statistics"] = stats_json(e.stats, e.ids);
  j["provenance"] = {{"seed", e.provenance.seed},
                     {"restarts", e.provenance.restarts},
                     {"iterations", e.provenance.iterations},
                     {"best_restart", e.provenance.best_restart},
                     {"abandoned_restarts", e.provenance.abandoned_restarts}};
  return j;
}

// ----------------------------------------------------------------- tables

std::string modulus_csv(const RoundBallModulus& m) {
  std::string out = "epsilon,delta,error_bar\n";
  for (const auto& e : m.table()) {
    out += fmt17(e.epsilon) + "," + fmt17(e.delta) + "," + fmt17(e.error_bar) + "\n";
  }
  return out;
}

std::string bound_csv(const std::vector<LowerBound>& rows, const std::string& descriptor) {
  std::string out = "n,L_star,D_star,modulus_descriptor,residual\n";
  for (const auto& b : rows) {
    out += std::to_string(b.n) + "," + fmt17(b.l_star) + "," + fmt17(b.d_star) + "," + descriptor +
           "," + fmt17(b.residual) + "\n";
  }
  return out;
}

Json trace_json(const AmplificationTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"address", s.address},
                     {"pair", {s.pair[0], s.pair[1]}},
                     {"L_pair", s.l_pair},
                     {"L_diagonal", s.l_diagonal},
                     {"factor", s.factor}});
  }
  return Json{{"format_version", kFormatVersion},
              {"steps", std::move(steps)},
              {"L_glob", t.l_glob},
              {"L_start", t.l_start},
              {"threshold", t.threshold},
              {"modulus", t.modulus},
              {"passed", t.passed}};
}

// --------------------------------------------------------------- manifest

Json manifest_json(const Manifest& m) {
  auto digest_list = [](const std::vector<fs::path>& files) {
    Json list = Json::array();
    for (const auto& f : files) list.push_back({{"path", f.string()}, {"sha256", sha256_hex(read_file(f))}});
    return list;
  };
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return Json{{"format_version", kFormatVersion},
              {"command", m.command},
              {"params", m.params},
              {"inputs", digest_list(m.inputs)},
              {"outputs", digest_list(m.outputs)},
              {"duration_seconds", m.duration_seconds},
              {"finished_at", stamp},
              {"version", LAAKSO_VERSION}};
}

}  // namespace laakso::io
