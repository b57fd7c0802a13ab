#pragma once

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "flatsc/saddle.hpp"

namespace flatsc {

/// Triangular face with the surface on the left of each oriented side.
/// vertex[k] is the start of half[k] in a common developed plane and
/// kappa[k] * half[k]->hol = vertex[k+1] - vertex[k].
struct Face {
  std::array<const SaddleConnection*, 3> half{};
  std::array<Vec2, 3> vertex;
  std::array<int, 3> kappa{1, 1, 1};
  Scalar area;

  /// Side ids, sorted.
  std::array<std::string, 3> side_ids() const;
  /// Distinguishes faces with the same sides.
  std::string key() const;
};

struct Triangulation {
  /// Canonical orientations in canonical order.
  std::vector<const SaddleConnection*> edges;
  std::vector<Face> faces;

  std::vector<std::string> edge_ids() const;
  /// Sorted edge ids joined by ';'.
  std::string key() const;
};

int expected_edges(const Surface& s);
int expected_faces(const Surface& s);

/// Faces from the rotation system of a maximal disjoint set; checks the
/// cardinality, Euler and area invariants (Internal on failure).
Triangulation triangulation_from_edges(Catalog& cat, std::vector<const SaddleConnection*> edges);

/// Greedy completion in (len2, id) order with doubling bounds.
/// Throws SeedNotDisjoint, UnknownVertex.
Triangulation complete_triangulation(Catalog& cat, const std::vector<std::string>& seed = {});

/// Elementary move on `edge_id`. Throws UnknownEdge, NotFlippable.
Triangulation flip(Catalog& cat, const Triangulation& t, const std::string& edge_id);

struct FlipGraph {
  std::vector<Triangulation> nodes;
  /// (from, to, flipped edge id).
  std::vector<std::tuple<int, int, std::string>> edges;
  /// (node, edge id) pairs that are not flippable.
  std::vector<std::pair<int, std::string>> not_flippable;
  std::vector<int> depth;
};

FlipGraph flip_bfs(Catalog& cat, const Triangulation& t0, int depth);

/// A face bounded by the given sides.
struct TriangleWitness {
  std::array<std::string, 3> sides;  // sorted
  Face face;
  std::string face_key;
};

/// All faces bounded by the three connections (empty when they bound no
/// triangle). Throws NotPairwiseDisjoint when they are not distinct and
/// pairwise disjoint.
std::vector<TriangleWitness> bounds_triangle(Catalog& cat, const std::string& a,
                                             const std::string& b, const std::string& c);

}  // namespace flatsc
