#include "flatsc/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "flatsc/cylinder.hpp"
#include "flatsc/rigidity.hpp"
#include "json.hpp"

namespace flatsc {

using nlohmann::json;

std::vector<std::string> split_ids(const std::string& text) {
  static const std::regex head(R"(^v\d+:h)");
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (out.empty() || std::regex_search(part, head)) {
      out.push_back(part);
    } else {
      out.back() += "," + part;
    }
  }
  return out;
}

namespace {

struct RunConfig {
  std::string builtin_name;
  std::string surface_file;
  std::string output;
  long budget = 10000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

json vec_json(const Vec2& v) { return {v.x.str(), v.y.str()}; }

json anchor_json(const Anchor& a) { return {{"poly", a.corner.poly}, {"corner", a.corner.idx}, {"sign", a.sign}}; }

json connection_json(const SaddleConnection& sc) {
  return {{"id", sc.id},
          {"hol", vec_json(sc.hol)},
          {"len2", sc.len2.str()},
          {"start_class", sc.start_class},
          {"end_class", sc.end_class},
          {"crossings", sc.crossings.size()}};
}

json ids_json(const std::vector<SaddleConnection>& v) {
  json out = json::array();
  for (const SaddleConnection& sc : v) out.push_back(sc.id);
  return out;
}

json polygon_json(const AdmissiblePolygon& p) {
  json v = json::array();
  for (const Vec2& x : p.vertices) v.push_back(vec_json(x));
  return {{"vertices", v}, {"side_ids", p.side_ids}, {"anchor", anchor_json(p.anchor)}, {"area", p.area().str()}};
}

json triangulation_json(const Triangulation& t) {
  json faces = json::array();
  for (const Face& f : t.faces) faces.push_back(f.side_ids());
  return {{"edges", t.edge_ids()}, {"faces", faces}};
}

json derivative_json(const DerivativeReport& d) {
  json j{{"consistent", d.consistent},
         {"matrix", d.A.str()},
         {"orientation", d.orientation},
         {"triangles", d.triangles},
         {"preserving", d.preserving},
         {"reversing", d.reversing}};
  if (d.offending) j["offending"] = {d.offending->first, d.offending->second};
  if (!d.detail.empty()) j["detail"] = d.detail;
  return j;
}

json iso_json(const GraphIso& iso) {
  json map = json::array();
  for (std::size_t i = 0; i < iso.map.size(); ++i) {
    map.push_back({iso.source.graph.ids[i], iso.map[i] < 0 ? json(nullptr) : json(iso.target.graph.ids[iso.map[i]])});
  }
  return {{"provenance", iso.provenance}, {"valid", iso.valid}, {"vertices", iso.map.size()},
          {"problems", iso.problems}, {"map", map}};
}

json triangle_report_json(const TriangleReport& r) {
  json fails = json::array();
  for (const TriangleFailure& f : r.failures) fails.push_back({{"sides", f.sides}, {"reason", f.reason}});
  return {{"checked", r.checked}, {"complete", r.complete}, {"failures", fails}};
}

Mat2 matrix_of(const json& j, int d) {
  if (j.is_string()) return Mat2::parse(j.get<std::string>(), d);
  auto entry = [&](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
      j[1].size() != 2) {
    throw Error(ErrorCode::ParseError, "matrix must be \"a,b;c,d\" or [[a,b],[c,d]]");
  }
  return Mat2::parse(entry(j[0][0]) + "," + entry(j[0][1]) + ";" + entry(j[1][0]) + "," + entry(j[1][1]), d);
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  const Surface& surface() {
    if (!surface_) {
      if (cfg_.builtin_name.empty() == cfg_.surface_file.empty()) {
        throw CLI::ValidationError("exactly one of --builtin and --surface is required");
      }
      surface_ = std::make_shared<const Surface>(cfg_.builtin_name.empty() ? parse_surface(read_file(cfg_.surface_file))
                                                                            : builtin(cfg_.builtin_name));
      catalog_ = std::make_shared<Catalog>(*surface_);
    }
    return *surface_;
  }
  Catalog& catalog() {
    surface();
    return *catalog_;
  }
  std::shared_ptr<const Surface> surface_ptr() {
    surface();
    return surface_;
  }
  Scalar scalar(const std::string& text) { return Scalar::parse(text, surface().field()); }
  Scalar bound(const std::string& text) {
    const Scalar x = scalar(text);
    if (x.sign() <= 0) throw CLI::ValidationError("--len2 must be positive");
    return x;
  }

  void emit(const json& j) { out_ << j.dump() << "\n"; }
  void emit_text(const std::string& s) { out_ << s; }

  long budget() const { return cfg_.budget; }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  std::shared_ptr<const Surface> surface_;
  std::shared_ptr<Catalog> catalog_;
};

void error_json(std::ostream& err, const std::string& code, const std::string& detail) {
  err << json{{"error", code}, {"detail", detail}}.dump() << "\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Saddle connection graphs of flat surfaces", "flatsc"};
  app.require_subcommand(1);
  app.add_option("--builtin", cfg.builtin_name, "Builtin surface (square_torus, regular_octagon, L_shape_2x1)");
  app.add_option("--surface", cfg.surface_file, "Surface JSON file");
  app.add_option("--output,-o", cfg.output, "Write output to this file");
  app.add_option("--budget", cfg.budget, "Crossing budget")->check(CLI::PositiveNumber);

  std::string len2 = "1", from, to, format = "jsonl", seed, dir, triangle, matrix, iso_file, gen_file,
              factor = "4";
  int depth = 1;
  auto* info = app.add_subcommand("info", "Genus, marked points, stratum, area");
  auto* en = app.add_subcommand("enum", "Saddle connections up to a squared length (JSON lines)");
  en->add_option("--len2", len2)->required();
  auto* gr = app.add_subcommand("graph", "Truncated saddle connection graph");
  gr->add_option("--len2", len2)->required();
  gr->add_option("--format", format)->check(CLI::IsMember({"dot", "jsonl"}));
  auto* di = app.add_subcommand("distance", "Graph distance in a truncation (an upper bound)");
  di->add_option("--from", from)->required();
  di->add_option("--to", to)->required();
  di->add_option("--len2", len2)->required();
  auto* tri = app.add_subcommand("triangulate", "Complete a disjoint seed to a triangulation");
  tri->add_option("--seed", seed, "Comma-separated connection ids");
  auto* fl = app.add_subcommand("flips", "Flip graph around the canonical triangulation");
  fl->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  auto* cy = app.add_subcommand("cylinders", "Cylinder decomposition in a direction");
  cy->add_option("--dir", dir, "\"x,y\"")->required();
  auto* pe = app.add_subcommand("pentagon", "Admissible pentagon (or cylinder case) for a triangle");
  pe->add_option("--triangle", triangle, "ID,ID,ID")->required();
  auto* va = app.add_subcommand("verify-affine", "Vertex map induced by a matrix");
  va->add_option("--matrix", matrix, "\"a,b;c,d\"")->required();
  va->add_option("--len2", len2)->required();
  auto* de = app.add_subcommand("derivative", "Derivative of a user vertex map");
  de->add_option("--iso", iso_file, "JSON id map")->required();
  auto* ob = app.add_subcommand("orbits", "Vertex and edge orbits under affine automorphisms");
  ob->add_option("--generators", gen_file, "JSON list of matrices")->required();
  ob->add_option("--len2", len2)->required();
  ob->add_option("--ambient-factor", factor);
  auto* we = app.add_subcommand("wedges", "Edge wedge histogram");
  we->add_option("--len2", len2)->required();

  std::vector<std::string> argv_store{"flatsc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_json(err, "UsageError", e.what());
    return 2;
  }

  std::ostringstream buffer;
  Runner run(cfg, buffer);
  try {
    if (*info) {
      const Surface& s = run.surface();
      const SurfaceInfo i = s.info();
      run.emit({{"genus", i.genus},
                {"marked_points", i.num_marked},
                {"stratum", i.stratum},
                {"area", i.total_area.str()},
                {"translation", i.is_translation},
                {"field", s.field()},
                {"polygons", s.num_polygons()},
                {"triangulation_edges", expected_edges(s)},
                {"triangulation_faces", expected_faces(s)}});
    } else if (*en) {
      for (const SaddleConnection* sc : run.catalog().upto(run.bound(len2))) run.emit(connection_json(*sc));
    } else if (*gr) {
      run.emit_text(export_graph(build_graph(run.catalog(), run.bound(len2)), format));
    } else if (*di) {
      const SCGraph g = build_graph(run.catalog(), run.bound(len2));
      run.emit({{"from", from}, {"to", to}, {"len2", g.L2.str()}, {"distance", distance(g, from, to)},
                {"upper_bound", true}});
    } else if (*tri) {
      run.emit(triangulation_json(complete_triangulation(run.catalog(), seed.empty() ? std::vector<std::string>{}
                                                                                       : split_ids(seed))));
    } else if (*fl) {
      const FlipGraph fg = flip_bfs(run.catalog(), complete_triangulation(run.catalog()), depth);
      json nodes = json::array(), edges = json::array(), stuck = json::array();
      for (std::size_t i = 0; i < fg.nodes.size(); ++i) {
        nodes.push_back({{"index", i}, {"depth", fg.depth[i]}, {"edges", fg.nodes[i].edge_ids()}});
      }
      for (const auto& [a, b, id] : fg.edges) edges.push_back({a, b, id});
      for (const auto& [n, id] : fg.not_flippable) stuck.push_back({n, id});
      run.emit({{"nodes", nodes}, {"edges", edges}, {"not_flippable", stuck}});
    } else if (*cy) {
      const std::size_t comma = dir.find(',');
      if (comma == std::string::npos) throw CLI::ValidationError("--dir must be \"x,y\"");
      const Vec2 v(run.scalar(dir.substr(0, comma)), run.scalar(dir.substr(comma + 1)));
      const Decomposition d = direction_decomposition(run.surface(), v, run.budget());
      json cyls = json::array();
      for (const Cylinder& c : d.cylinders) {
        cyls.push_back({{"circumference", c.circumference.str()},
                        {"height", c.height.str()},
                        {"area", c.area().str()},
                        {"simple", c.simple()},
                        {"bottom", ids_json(c.bottom)},
                        {"top", ids_json(c.top)}});
      }
      run.emit({{"direction", vec_json(v.canonical())}, {"periodic", d.periodic}, {"cylinders", cyls},
                {"connections", ids_json(d.connections)}});
    } else if (*pe) {
      const std::vector<std::string> ids = split_ids(triangle);
      if (ids.size() != 3) throw CLI::ValidationError("--triangle needs three ids");
      const auto faces = bounds_triangle(run.catalog(), ids[0], ids[1], ids[2]);
      if (faces.empty()) throw Error(ErrorCode::PreconditionViolated, "the connections bound no triangle");
      json results = json::array();
      for (const TriangleWitness& tw : faces) {
        const PentagonResult r = pentagon_of_triangle(run.surface(), tw, run.budget());
        json j = polygon_json(r.polygon);
        j["kind"] = pentagon_kind_name(r.kind);
        j["face"] = tw.face_key;
        j["side"] = r.side;
        results.push_back(j);
      }
      run.emit({{"triangle", faces[0].sides}, {"results", results}});
    } else if (*va) {
      const Mat2 A = Mat2::parse(matrix, run.surface().field());
      GraphIso iso = induced_vertex_map(run.surface(), A, run.bound(len2));
      json j{{"matrix", A.str()}, {"iso", iso_json(iso)}};
      j["triangles"] = triangle_report_json(check_triangle_preserving(iso, 200));
      j["derivative"] = derivative_json(derivative_of_iso(iso));
      run.emit(j);
    } else if (*de) {
      const json m = parse_json(iso_file);
      std::vector<std::pair<std::string, std::string>> pairs;
      if (m.is_object()) {
        for (const auto& [k, v] : m.items()) pairs.push_back({k, v.get<std::string>()});
      } else if (m.is_array()) {
        for (const json& p : m) pairs.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
      } else {
        throw Error(ErrorCode::ParseError, "iso file must be an object or a list of pairs");
      }
      GraphIso iso = iso_from_map(run.surface_ptr(), pairs);
      json j{{"iso", iso_json(iso)}};
      j["triangles"] = triangle_report_json(check_triangle_preserving(iso, 200));
      j["derivative"] = derivative_json(derivative_of_iso(iso));
      run.emit(j);
    } else if (*ob) {
      const json gens = parse_json(gen_file);
      if (!gens.is_array()) throw Error(ErrorCode::ParseError, "generator file must be a JSON list");
      std::vector<Mat2> mats;
      for (const json& g : gens) mats.push_back(matrix_of(g, run.surface().field()));
      const SCGraph g = build_graph(run.catalog(), run.bound(len2));
      const QuotientReport q = orbits(run.catalog(), g, mats, run.scalar(factor));
      json wedges = json::array();
      for (const auto& [w, n] : q.wedge_values) wedges.push_back({{"wedge", w.str()}, {"count", n}});
      run.emit({{"len2", g.L2.str()},
                {"ambient_len2", q.ambient_L2.str()},
                {"vertices", g.num_vertices()},
                {"edges", g.num_edges()},
                {"vertex_orbits", q.vertex_orbit_count},
                {"edge_orbits", q.edge_orbit_count},
                {"vertex_lower_bound", q.vertex_lower_bound},
                {"edge_lower_bound", q.edge_lower_bound},
                {"vertex_certified", q.vertex_certified},
                {"edge_certified", q.edge_certified},
                {"escaped", q.escaped},
                {"wedge_consistent", q.wedge_consistent},
                {"maps", q.maps},
                {"wedges", wedges}});
    } else if (*we) {
      const SCGraph g = build_graph(run.catalog(), run.bound(len2));
      json h = json::array();
      for (const auto& [w, n] : wedge_histogram(g)) h.push_back({{"wedge", w.str()}, {"count", n}});
      run.emit({{"len2", g.L2.str()}, {"edges", g.num_edges()}, {"histogram", h}});
    }
  } catch (const CLI::Error& e) {
    error_json(err, "UsageError", e.what());
    return 2;
  } catch (const Error& e) {
    error_json(err, error_code_name(e.code()), e.what());
    return 1;
  } catch (const json::exception& e) {
    error_json(err, "ParseError", e.what());
    return 1;
  }

  if (cfg.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.output);
    if (!file) {
      error_json(err, "ParseError", "cannot write " + cfg.output);
      return 1;
    }
    file << buffer.str();
  }
  return 0;
}

}  // namespace flatsc
