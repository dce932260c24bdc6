// Batch front end. Every command writes its outputs plus <out>.manifest.json;
// failures print {"error":{"kind","message"}} on stderr and exit nonzero.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "laakso/certifier.hpp"
#include "laakso/convexity.hpp"
#include "laakso/embedder.hpp"
#include "laakso/error.hpp"
#include "laakso/io.hpp"
#include "laakso/spaces.hpp"

namespace fs = std::filesystem;
using laakso::Error;
using laakso::ErrorKind;
using laakso::io::Json;

namespace {

struct Run {
  laakso::io::Manifest manifest;
  fs::path manifest_path;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void output(const fs::path& path, const std::string& bytes) {
    laakso::io::write_file(path, bytes);
    manifest.outputs.push_back(path);
  }

  void finish() {
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    laakso::io::write_file(manifest_path, laakso::io::dump(laakso::io::manifest_json(manifest)));
  }
};

fs::path manifest_for(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

std::pair<int, int> parse_levels(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::kParse, "bad level range '" + text + "'");
    }
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int n = to_int(text);
    return {n, n};
  }
  const int a = to_int(text.substr(0, dots)), b = to_int(text.substr(dots + 2));
  if (a < 1 || b < a) throw Error(ErrorKind::kInvalidArgument, "level range must satisfy 1 <= a <= b");
  return {a, b};
}

double target_p(const laakso::TargetDescriptor& t) {
  return t.kind == laakso::TargetDescriptor::Kind::kHilbert ? 2.0 : t.p;
}

// Describes a space file for the embedding sidecar.
Json describe_space(const fs::path& path) {
  Json d{{"source", path.filename().string()}};
  if (path.extension() == ".json") {
    const Json j = laakso::io::parse_json(laakso::io::read_file(path), path.string());
    d["kind"] = j.value("kind", std::string("gamma"));
    d["level"] = j.contains("level") ? j["level"] : j.value("depth", Json(0));
  } else {
    d["kind"] = "metric";
  }
  return d;
}

// ---------------------------------------------------------------- commands

void cmd_gamma(std::optional<int> level, std::optional<int> chain, const fs::path& out) {
  if (level.has_value() == chain.has_value()) {
    throw Error(ErrorKind::kInvalidArgument, "give exactly one of --level and --chain");
  }
  Run run;
  run.manifest.command = "gamma";
  run.manifest_path = manifest_for(out);
  if (level) {
    run.manifest.params = {{"level", *level}, {"out", out.string()}};
    run.output(out, laakso::io::dump(laakso::io::graph_json(laakso::build_gamma(*level))));
  } else {
    run.manifest.params = {{"chain", *chain}, {"out", out.string()}};
    run.output(out, laakso::io::dump(laakso::io::graph_json(laakso::build_chain(*chain))));
  }
  run.finish();
}

void cmd_metric(const fs::path& in, const fs::path& out) {
  Run run;
  run.manifest = {"metric", {{"in", in.string()}, {"out", out.string()}}, {in}, {}, 0.0};
  run.manifest_path = manifest_for(out);
  run.output(out, laakso::io::metric_csv(laakso::io::load_space(in)));
  run.finish();
}

void cmd_tree(int depth, const fs::path& out) {
  Run run;
  run.manifest = {"tree", {{"depth", depth}, {"out", out.string()}}, {}, {}, 0.0};
  run.manifest_path = manifest_for(out);
  run.output(out, laakso::io::dump(laakso::io::graph_json(laakso::build_tree(depth))));
  run.finish();
}

void cmd_linf(int depth, const fs::path& out) {
  Run run;
  run.manifest = {"linf", {{"depth", depth}, {"out", out.string()}}, {}, {}, 0.0};
  run.manifest_path = manifest_for(out);
  run.output(out, laakso::io::dump(laakso::io::linf_json(laakso::build_linf_set(depth))));
  run.finish();
}

void cmd_scaled(int levels, const fs::path& out) {
  Run run;
  run.manifest = {"scaled", {{"levels", levels}, {"out", out.string()}}, {}, {}, 0.0};
  run.manifest_path = manifest_for(out);
  run.output(out, laakso::io::metric_csv(laakso::scaled_union_metric(laakso::build_scaled_union(levels))));
  run.finish();
}

void cmd_modulus(const std::string& target, const std::vector<double>& eps, int starts,
                 std::uint64_t seed, const fs::path& out) {
  Run run;
  run.manifest = {"modulus",
                  {{"target", target}, {"eps", eps}, {"starts", starts}, {"seed", seed}, {"out", out.string()}},
                  {}, {}, 0.0};
  run.manifest_path = manifest_for(out);
  const auto t = laakso::TargetDescriptor::parse(target);
  laakso::RoundBallModulus m;
  if (t.kind == laakso::TargetDescriptor::Kind::kHilbert) {
    std::vector<laakso::RoundBallModulus::Entry> entries;
    for (double e : eps) entries.push_back({e, laakso::hilbert_modulus(e), 0.0});
    m = laakso::RoundBallModulus::tabulated(std::move(entries), "hilbert");
  } else {
    laakso::EstimatorConfig config;
    config.starts = starts;
    config.seed = seed;
    m = laakso::modulus_for_target(t, eps, config);
  }
  run.output(out, laakso::io::modulus_csv(m));
  run.finish();
}

void cmd_bound(const std::string& target, const std::string& levels, const fs::path& out) {
  Run run;
  run.manifest = {"bound", {{"target", target}, {"levels", levels}, {"out", out.string()}}, {}, {}, 0.0};
  run.manifest_path = manifest_for(out);
  const auto [a, b] = parse_levels(levels);
  const auto modulus = laakso::modulus_for_target(laakso::TargetDescriptor::parse(target));
  std::vector<laakso::LowerBound> rows;
  for (int n = a; n <= b; ++n) rows.push_back(laakso::lower_bound(n, modulus));
  run.output(out, laakso::io::bound_csv(rows, modulus.descriptor()));
  run.finish();
}

void cmd_embed(const fs::path& space_path, double p, std::optional<int> dim, int restarts,
               std::uint64_t seed, std::optional<int> iterations, const fs::path& prefix) {
  Run run;
  run.manifest.command = "embed";
  run.manifest.inputs = {space_path};
  run.manifest_path = manifest_for(prefix);
  const auto space = laakso::io::load_space(space_path);
  laakso::OptimizerConfig config;
  config.restarts = restarts;
  config.seed = seed;
  if (iterations) config.iterations_per_stage = *iterations;
  const laakso::TargetNorm target{p, dim.value_or(static_cast<int>(space.size()))};
  run.manifest.params = {{"space", space_path.string()}, {"p", p},          {"dim", target.dimension},
                         {"restarts", restarts},         {"seed", seed},    {"out", prefix.string()},
                         {"iterations", config.iterations_per_stage}};
  const auto e = laakso::minimize_distortion(space, target, config);
  run.output(prefix.string() + ".csv", laakso::io::embedding_csv(e));
  run.output(prefix.string() + ".json",
             laakso::io::dump(laakso::io::embedding_sidecar(e, config, describe_space(space_path))));
  run.finish();
}

void cmd_certify(const fs::path& graph_path, const fs::path& embedding_path, const std::string& target,
                 const fs::path& out) {
  Run run;
  run.manifest = {"certify",
                  {{"graph", graph_path.string()}, {"embedding", embedding_path.string()},
                   {"target", target}, {"out", out.string()}},
                  {graph_path, embedding_path}, {}, 0.0};
  run.manifest_path = manifest_for(out);
  const auto t = laakso::TargetDescriptor::parse(target);
  const auto modulus = laakso::modulus_for_target(t);
  const auto g = laakso::io::load_level_graph(laakso::io::parse_graph(
      laakso::io::parse_json(laakso::io::read_file(graph_path), graph_path.string())));
  const auto e = laakso::io::parse_embedding_csv(laakso::io::read_file(embedding_path), target_p(t));
  if (t.kind == laakso::TargetDescriptor::Kind::kLp && e.target.dimension > t.dimension) {
    throw Error(ErrorKind::kValidation, "embedding has " + std::to_string(e.target.dimension) +
                                            " coordinates but the target has dimension " +
                                            std::to_string(t.dimension));
  }
  run.output(out, laakso::io::dump(laakso::io::trace_json(laakso::amplify(g, e, modulus))));
  run.finish();
}

// Juxtaposes empirical distortions from embedding sidecars with the forced
// lower bounds, taken from bound tables when given and from the Hilbert
// modulus for p = 2 otherwise.
void cmd_report(const std::vector<fs::path>& inputs, const fs::path& dir) {
  Run run;
  run.manifest.command = "report";
  run.manifest.inputs = inputs;
  run.manifest_path = dir / "manifest.json";
  Json names = Json::array();
  for (const auto& in : inputs) names.push_back(in.string());
  run.manifest.params = {{"inputs", names}, {"out", dir.string()}};

  std::map<int, std::pair<double, std::string>> bounds;  // n -> (L*, descriptor)
  std::vector<Json> rows;
  for (const auto& in : inputs) {
    const std::string text = laakso::io::read_file(in);
    if (in.extension() == ".csv") {
      std::istringstream s(text);
      std::string line;
      std::getline(s, line);
      if (line.rfind("n,L_star", 0) != 0) throw Error(ErrorKind::kParse, in.string() + " is not a bound table");
      while (std::getline(s, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) throw Error(ErrorKind::kParse, in.string() + ": malformed row '" + line + "'");
        bounds[std::stoi(cells[0])] = {std::stod(cells[1]), cells[3]};
      }
      continue;
    }
    const Json j = laakso::io::parse_json(text, in.string());
    if (!j.contains("statistics")) throw Error(ErrorKind::kParse, in.string() + " is not an embedding sidecar");
    rows.push_back(Json{{"source", in.filename().string()},
                        {"kind", j["space"].value("kind", std::string("metric"))},
                        {"level", j["space"].value("level", Json(0))},
                        {"p", j["target"]["p"]},
                        {"dimension", j["target"]["dimension"]},
                        {"distortion", j["statistics"]["distortion"]},
                        {"l_sym", j["statistics"]["l_sym"]}});
  }
  std::string csv = "source,kind,level,p,dimension,empirical_distortion,empirical_l_sym,L_star,D_star,modulus\n";
  Json out = Json::array();
  for (Json& r : rows) {
    r["L_star"] = nullptr;
    r["D_star"] = nullptr;
    r["modulus"] = nullptr;
    const int level = r["level"].is_number() ? r["level"].get<int>() : 0;
    if (r["kind"] == "gamma" && level >= 1) {
      if (auto it = bounds.find(level); it != bounds.end()) {
        r["L_star"] = it->second.first;
        r["D_star"] = it->second.first * it->second.first;
        r["modulus"] = it->second.second;
      } else if (r["p"].get<double>() == 2.0) {
        const auto b = laakso::lower_bound(level, laakso::RoundBallModulus::hilbert());
        r["L_star"] = b.l_star;
        r["D_star"] = b.d_star;
        r["modulus"] = "hilbert";
      }
    }
    auto cell = [](const Json& v) {
      if (v.is_null()) return std::string();
      if (v.is_string()) return v.get<std::string>();
      return v.dump();
    };
    csv += cell(r["source"]) + "," + cell(r["kind"]) + "," + cell(r["level"]) + "," + cell(r["p"]) + "," +
           cell(r["dimension"]) + "," + cell(r["distortion"]) + "," + cell(r["l_sym"]) + "," +
           cell(r["L_star"]) + "," + cell(r["D_star"]) + "," + cell(r["modulus"]) + "\n";
    out.push_back(r);
  }
  run.output(dir / "report.csv", csv);
  run.output(dir / "report.json", laakso::io::dump(Json{{"format_version", 1}, {"rows", out}}));
  run.finish();
}

int fail(std::string_view kind, const std::string& message) {
  std::cerr << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laakso graph distortion laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LAAKSO_VERSION);

  std::optional<int> level, chain, dim, iterations;
  int depth = 0, levels_n = 0, restarts = 20, starts = 64;
  std::uint64_t seed = 0, modulus_seed = 20240601;
  double p = 2.0;
  std::string target = "hilbert", levels;
  std::vector<double> eps;
  fs::path in, out, space, graph, embedding;
  std::vector<fs::path> inputs;

  auto* gamma = app.add_subcommand("gamma", "Write Gamma_n or the glued chain as a graph file");
  gamma->add_option("--level", level, "Level n");
  gamma->add_option("--chain", chain, "Number of chained blocks");
  gamma->add_option("--out", out, "Output graph file")->required();

  auto* metric = app.add_subcommand("metric", "Write the exact metric of a space file as CSV");
  metric->add_option("--in", in, "Graph, point-set or metric file")->required();
  metric->add_option("--out", out, "Output CSV")->required();

  auto* tree = app.add_subcommand("tree", "Write the binary tree of a given depth");
  tree->add_option("--depth", depth, "Depth")->required();
  tree->add_option("--out", out, "Output graph file")->required();

  auto* linf = app.add_subcommand("linf", "Write the recursive sup-norm point set");
  linf->add_option("--depth", depth, "Splitting generations")->required();
  linf->add_option("--out", out, "Output point-set file")->required();

  auto* scaled = app.add_subcommand("scaled", "Write the level-scaled union metric");
  scaled->add_option("--levels", levels_n, "Number of blocks N")->required();
  scaled->add_option("--out", out, "Output CSV")->required();

  auto* modulus = app.add_subcommand("modulus", "Tabulate the round-ball modulus of a target");
  modulus->add_option("--target", target, "hilbert or lp:<p>:<d>")->required();
  modulus->add_option("--eps", eps, "Epsilon values")->delimiter(',')->required();
  modulus->add_option("--starts", starts, "Estimator starts");
  modulus->add_option("--seed", modulus_seed, "Estimator seed");
  modulus->add_option("--out", out, "Output CSV")->required();

  auto* bound = app.add_subcommand("bound", "Tabulate forced distortion lower bounds");
  bound->add_option("--target", target, "hilbert or lp:<p>:<d>")->required();
  bound->add_option("--levels", levels, "Level range a..b")->required();
  bound->add_option("--out", out, "Output CSV")->required();

  auto* embed = app.add_subcommand("embed", "Search for a low-distortion embedding");
  embed->add_option("--space", space, "Graph, point-set or metric file")->required();
  embed->add_option("--p", p, "Target norm exponent in [2, inf)");
  embed->add_option("--dim", dim, "Target dimension (default: number of points)");
  embed->add_option("--restarts", restarts, "Restarts");
  embed->add_option("--seed", seed, "Base seed");
  embed->add_option("--iterations", iterations, "Iterations per smoothing stage");
  embed->add_option("--out", out, "Output prefix")->required();

  auto* certify = app.add_subcommand("certify", "Run the amplification trace of an embedding");
  certify->add_option("--graph", graph, "Gamma_n graph file")->required();
  certify->add_option("--embedding", embedding, "Embedding CSV")->required();
  certify->add_option("--target", target, "hilbert or lp:<p>:<d>");
  certify->add_option("--out", out, "Output JSON")->required();

  auto* report = app.add_subcommand("report", "Compare lower bounds with empirical distortions");
  report->add_option("--inputs", inputs, "Embedding sidecars and bound tables")->required();
  report->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("parse", e.what());
  }

  try {
    if (*gamma) cmd_gamma(level, chain, out);
    if (*metric) cmd_metric(in, out);
    if (*tree) cmd_tree(depth, out);
    if (*linf) cmd_linf(depth, out);
    if (*scaled) cmd_scaled(levels_n, out);
    if (*modulus) cmd_modulus(target, eps, starts, modulus_seed, out);
    if (*bound) cmd_bound(target, levels, out);
    if (*embed) cmd_embed(space, p, dim, restarts, seed, iterations, out);
    if (*certify) cmd_certify(graph, embedding, target, out);
    if (*report) cmd_report(inputs, out);
  } catch (const Error& e) {
    return fail(laakso::to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
