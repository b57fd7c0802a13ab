#include "flatsc/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "json.hpp"

namespace flatsc {

int SCGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& a : adj) n += a.size();
  return static_cast<int>(n / 2);
}

int SCGraph::index_of(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

bool SCGraph::adjacent(int i, int j) const {
  return std::binary_search(adj[i].begin(), adj[i].end(), j);
}

std::vector<std::pair<std::string, std::string>> SCGraph::edge_list() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (int i = 0; i < num_vertices(); ++i) {
    for (int j : adj[i]) {
      if (i < j) out.emplace_back(std::min(ids[i], ids[j]), std::max(ids[i], ids[j]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void SCGraph::reindex() {
  index_.clear();
  for (int i = 0; i < num_vertices(); ++i) index_[ids[i]] = i;
}

SCGraph build_graph(Catalog& cat, const Scalar& L2) {
  if (L2.sign() <= 0) throw Error(ErrorCode::PreconditionViolated, "L2 must be positive");
  SCGraph g;
  g.L2 = L2;
  g.conns = cat.upto(L2);
  for (const SaddleConnection* sc : g.conns) g.ids.push_back(sc->id);
  g.adj.assign(g.conns.size(), {});
  const Surface& s = cat.surface();
  for (std::size_t i = 0; i < g.conns.size(); ++i) {
    for (std::size_t j = i + 1; j < g.conns.size(); ++j) {
      if (disjoint(s, *g.conns[i], *g.conns[j])) {
        g.adj[i].push_back(static_cast<int>(j));
        g.adj[j].push_back(static_cast<int>(i));
      }
    }
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  g.reindex();
  return g;
}

const SaddleConnection& resolve_id(Catalog& cat, const std::string& id) {
  if (const SaddleConnection* sc = cat.find(id)) return *sc;
  const auto h = id.find(":h");
  const auto w = id.find(":w");
  const auto comma = id.find(',', h == std::string::npos ? 0 : h);
  if (h == std::string::npos || w == std::string::npos || comma == std::string::npos || comma > w) {
    throw Error(ErrorCode::UnknownVertex, "malformed saddle connection id " + id);
  }
  const int d = cat.surface().field();
  Vec2 hol;
  try {
    hol = Vec2(Scalar::parse(id.substr(h + 2, comma - h - 2), d),
               Scalar::parse(id.substr(comma + 1, w - comma - 1), d));
  } catch (const Error&) {
    throw Error(ErrorCode::UnknownVertex, "malformed saddle connection id " + id);
  }
  cat.ensure(hol.norm2());
  return cat.get(id);
}

SCGraph induced_graph(Catalog& cat, const std::vector<std::string>& ids) {
  SCGraph g;
  for (const std::string& id : ids) {
    const SaddleConnection& sc = resolve_id(cat, id);
    g.conns.push_back(&sc);
    g.ids.push_back(sc.id);
    if (g.L2 < sc.len2) g.L2 = sc.len2;
  }
  g.adj.assign(g.conns.size(), {});
  const Surface& s = cat.surface();
  for (std::size_t i = 0; i < g.conns.size(); ++i) {
    for (std::size_t j = i + 1; j < g.conns.size(); ++j) {
      if (g.ids[i] != g.ids[j] && disjoint(s, *g.conns[i], *g.conns[j])) {
        g.adj[i].push_back(static_cast<int>(j));
        g.adj[j].push_back(static_cast<int>(i));
      }
    }
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  g.reindex();
  return g;
}

std::vector<int> distances_from(const SCGraph& g, int source) {
  std::vector<int> dist(g.num_vertices(), -1);
  dist[source] = 0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[u]) {
      if (dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

int distance(const SCGraph& g, const std::string& from, const std::string& to) {
  const int a = g.index_of(from);
  const int b = g.index_of(to);
  if (a < 0) throw Error(ErrorCode::UnknownVertex, "unknown vertex " + from);
  if (b < 0) throw Error(ErrorCode::UnknownVertex, "unknown vertex " + to);
  const int d = distances_from(g, a)[b];
  if (d < 0) throw Error(ErrorCode::UnreachableInTruncation, from + " and " + to + " are not connected");
  return d;
}

TriangleScan triangles(Catalog& cat, const SCGraph& g, int max_count) {
  TriangleScan out;
  const int n = g.num_vertices();
  for (int i = 0; i < n; ++i) {
    for (int j : g.adj[i]) {
      if (j <= i) continue;
      for (int k : g.adj[j]) {
        if (k <= j || !g.adjacent(i, k)) continue;
        for (TriangleWitness& w : bounds_triangle(cat, g.ids[i], g.ids[j], g.ids[k])) {
          if (static_cast<int>(out.witnesses.size()) >= max_count) {
            out.complete = false;
            return out;
          }
          out.witnesses.push_back(std::move(w));
        }
      }
    }
  }
  return out;
}

std::string export_graph(const SCGraph& g, const std::string& format) {
  std::ostringstream os;
  if (format == "dot") {
    os << "graph sc {\n";
    for (const std::string& id : g.ids) os << "  \"" << id << "\";\n";
    for (const auto& [a, b] : g.edge_list()) os << "  \"" << a << "\" -- \"" << b << "\";\n";
    os << "}\n";
    return os.str();
  }
  if (format == "jsonl") {
    os << nlohmann::json{{"type", "graph"}, {"len2", g.L2.str()}, {"field", g.L2.field()}}.dump() << "\n";
    for (int i = 0; i < g.num_vertices(); ++i) {
      nlohmann::json v{{"type", "vertex"}, {"id", g.ids[i]}};
      if (!g.conns.empty()) {
        const Vec2 h = g.conns[i]->canonical_hol();
        v["hol"] = {h.x.str(), h.y.str()};
        v["len2"] = g.conns[i]->len2.str();
      }
      os << v.dump() << "\n";
    }
    for (const auto& [a, b] : g.edge_list()) {
      os << nlohmann::json{{"type", "edge"}, {"a", a}, {"b", b}}.dump() << "\n";
    }
    return os.str();
  }
  throw Error(ErrorCode::UnknownFormat, "unknown graph format " + format);
}

SCGraph import_graph(const std::string& text, const std::string& format) {
  if (format != "jsonl") throw Error(ErrorCode::UnknownFormat, "cannot import " + format);
  SCGraph g;
  std::vector<std::pair<std::string, std::string>> edges;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "graph") {
        g.L2 = Scalar::parse(j.at("len2").get<std::string>(), j.value("field", 1));
      } else if (type == "vertex") {
        g.ids.push_back(j.at("id").get<std::string>());
      } else if (type == "edge") {
        edges.emplace_back(j.at("a").get<std::string>(), j.at("b").get<std::string>());
      } else {
        throw Error(ErrorCode::ParseError, "unknown record type " + type);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
  }
  g.reindex();
  g.adj.assign(g.ids.size(), {});
  for (const auto& [a, b] : edges) {
    const int i = g.index_of(a), k = g.index_of(b);
    if (i < 0 || k < 0) throw Error(ErrorCode::UnknownVertex, "edge endpoint not listed");
    g.adj[i].push_back(k);
    g.adj[k].push_back(i);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

}  // namespace flatsc
