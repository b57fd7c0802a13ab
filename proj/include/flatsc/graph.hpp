#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flatsc/triangulation.hpp"

namespace flatsc {

/// Truncated saddle connection graph: vertices are the connections with
/// len2 <= L2, edges join disjoint pairs.
struct SCGraph {
  Scalar L2;
  std::vector<std::string> ids;
  /// Empty for graphs read back from an export.
  std::vector<const SaddleConnection*> conns;
  /// Sorted neighbour lists.
  std::vector<std::vector<int>> adj;

  int num_vertices() const { return static_cast<int>(ids.size()); }
  int num_edges() const;
  /// -1 if absent.
  int index_of(const std::string& id) const;
  bool adjacent(int i, int j) const;
  /// Unordered id pairs, each sorted, in lexicographic order.
  std::vector<std::pair<std::string, std::string>> edge_list() const;

 private:
  friend SCGraph build_graph(Catalog& cat, const Scalar& L2);
/// The graph on the listed connections, in the given order. L2 is their
/// largest len2. Throws UnknownVertex.
SCGraph induced_graph(Catalog& cat, const std::vector<std::string>& ids);

/// Finds a connection by id, enumerating up to the length its id records.
/// Throws UnknownVertex.
const SaddleConnection& resolve_id(Catalog& cat, const std::string& id);
  friend SCGraph import_graph(const std::string& text, const std::string& format);
  friend SCGraph induced_graph(Catalog& cat, const std::vector<std::string>& ids);
  std::map<std::string, int> index_;
  void reindex();
};

SCGraph build_graph(Catalog& cat, const Scalar& L2);
/// The graph on the listed connections, in the given order. L2 is their
/// largest len2. Throws UnknownVertex.
SCGraph induced_graph(Catalog& cat, const std::vector<std::string>& ids);

/// Finds a connection by id, enumerating up to the length its id records.
/// Throws UnknownVertex.
const SaddleConnection& resolve_id(Catalog& cat, const std::string& id);

/// BFS distance in the truncation, an upper bound for the distance in the
/// full graph. Throws UnknownVertex, UnreachableInTruncation.
int distance(const SCGraph& g, const std::string& from, const std::string& to);
/// All BFS distances from one vertex (-1 when unreachable).
std::vector<int> distances_from(const SCGraph& g, int source);

struct TriangleScan {
  std::vector<TriangleWitness> witnesses;
  /// False when max_count stopped the scan early.
  bool complete = true;
};

/// Witnesses for every mutually adjacent triple, in vertex order.
TriangleScan triangles(Catalog& cat, const SCGraph& g, int max_count);

/// "dot" or "jsonl"; throws UnknownFormat.
std::string export_graph(const SCGraph& g, const std::string& format);
/// Reads the jsonl export back (ids and edges only).
SCGraph import_graph(const std::string& text, const std::string& format);

}  // namespace flatsc
