#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatsc/admissible.hpp"
#include "flatsc/graph.hpp"

namespace flatsc {

/// An affine map between two surfaces with derivative A, stored as the
/// developed image of every polygon of the source (polygon p goes to the
/// admissible polygon A * p in the target).
class AffineMap {
 public:
  const Mat2& matrix() const { return A_; }
  const Surface& source() const { return *src_; }
  const Surface& target() const { return *dst_; }
  /// Image germ and sign with image.dir = sign * A * g.dir.
  std::pair<Germ, int> image(const Germ& g) const;
  /// Throws Internal when the image does not trace to a saddle connection.
  SaddleConnection image(const SaddleConnection& sc) const;
  /// Anchor of each polygon image (germ of its side 0).
  std::vector<Anchor> polygon_anchors() const;

 private:
  friend std::optional<AffineMap> develop_affine(const Surface& src, const Surface& dst, const Mat2& A,
                                                 const Anchor& anchor);
  const Surface* src_ = nullptr;
  const Surface* dst_ = nullptr;
  Mat2 A_;
  bool flip_ = false;
  std::vector<AdmissiblePolygon> images_;
  int plane_index(int poly, int idx) const;
};

/// The affine map sending polygon 0 of src to A * (polygon 0) anchored at
/// `anchor` in dst, continued across the gluings. Empty when the pieces do
/// not fit together.
std::optional<AffineMap> develop_affine(const Surface& src, const Surface& dst, const Mat2& A,
                                        const Anchor& anchor);

/// The tautological map from s onto apply_matrix(s, A) (same polygons).
AffineMap transport_map(const Surface& s, const Surface& image, const Mat2& A);

/// Every affine automorphism of s with derivative +-A. Throws FieldMismatch,
/// SingularMatrix.
std::vector<AffineMap> affine_automorphisms(const Surface& s, const Mat2& A);

/// A surface with its catalog and one truncated graph.
struct GraphSide {
  std::shared_ptr<const Surface> surface;
  std::shared_ptr<Catalog> catalog;
  SCGraph graph;
};

/// A vertex map between two truncations.
struct GraphIso {
  GraphSide source;
  GraphSide target;
  /// source vertex index -> target vertex index
  std::vector<int> map;
  /// "affine" or "user"
  std::string provenance;
  std::optional<Mat2> matrix;
  /// Injective and adjacency-preserving in both directions.
  bool valid = false;
  std::vector<std::string> problems;

  std::string image_of(const std::string& id) const;
};

/// Images of the connections up to L2 on apply_matrix(s, A); the target
/// graph is built up to the largest image. Throws FieldMismatch,
/// SingularMatrix.
GraphIso induced_vertex_map(const Surface& s, const Mat2& A, const Scalar& L2);

/// The vertex map of an automorphism on the truncation at L2.
GraphIso automorphism_iso(const std::shared_ptr<const Surface>& s, const std::shared_ptr<Catalog>& cat,
                          const AffineMap& f, const Scalar& L2);

/// A user-supplied id map on one surface. Throws UnknownVertex.
GraphIso iso_from_map(const std::shared_ptr<const Surface>& s,
                      const std::vector<std::pair<std::string, std::string>>& pairs);

/// Checks adjacency in both directions and fills valid/problems.
void validate(GraphIso& iso);

struct TriangleFailure {
  std::array<std::string, 3> sides;
  std::string reason;
};

struct TriangleReport {
  int checked = 0;
  /// False when the witness budget cut the scan.
  bool complete = true;
  std::vector<TriangleFailure> failures;
};

TriangleReport check_triangle_preserving(GraphIso& iso, int budget);

struct DerivativeReport {
  bool consistent = false;
  /// Normalised so that its first non-zero entry is positive.
  Mat2 A;
  /// +1 every triangle preserves orientation, -1 every one reverses it,
  /// 0 mixed.
  int orientation = 0;
  int triangles = 0;
  int preserving = 0;
  int reversing = 0;
  /// First pair of triangles (witness indices) that disagree, if any.
  std::optional<std::pair<int, int>> offending;
  std::string detail;
};

/// Throws NoTriangleInTruncation.
DerivativeReport derivative_of_iso(GraphIso& iso, int budget = 200);

/// +-A with the first non-zero entry positive.
Mat2 sign_normalized(const Mat2& A);

/// |hol(a) ^ hol(b)| for an edge {a, b}. Throws NotAnEdge, UnknownVertex.
Scalar edge_wedge(Catalog& cat, const std::string& a, const std::string& b);

/// Wedge values over the edges of g with multiplicities, increasing.
std::vector<std::pair<Scalar, long>> wedge_histogram(const SCGraph& g);

struct QuotientReport {
  int vertex_orbit_count = 0;
  int edge_orbit_count = 0;
  /// Distinct invariants among the orbits found (endpoint cone angles for
  /// vertices, wedge values for edges); a lower bound for the true counts.
  int vertex_lower_bound = 0;
  int edge_lower_bound = 0;
  /// Counts are exact when upper and lower bounds meet or no orbit left the
  /// ambient truncation; otherwise they are upper bounds.
  bool vertex_certified = false;
  bool edge_certified = false;
  bool escaped = false;
  /// Every merged edge orbit carries a single wedge value.
  bool wedge_consistent = true;
  std::vector<std::pair<Scalar, long>> wedge_values;
  Scalar ambient_L2;
  /// Number of affine maps applied (all lifts of every generator and inverse).
  int maps = 0;
};

/// Orbits of the vertices and edges of g under the affine automorphisms with
/// the given derivatives, explored inside len2 <= ambient_factor * g.L2.
/// Throws BadGenerator.
QuotientReport orbits(Catalog& cat, const SCGraph& g, const std::vector<Mat2>& generators,
                      const Scalar& ambient_factor);

struct AffineCandidate {
  Mat2 A;
  /// Every matrix found that induces the same vertex map (A and -A on a torus).
  std::vector<Mat2> matrices;
  int det_sign = 1;
  bool orientation_preserving = true;
  /// Images of the polygons (anchor of side 0 of each).
  std::vector<Anchor> surface_map;
  bool iso_valid = false;
  bool derivative_matches = false;
  /// Number of lifts (automorphisms with derivative +-A), and how many of
  /// them induce the same vertex map (2 on a torus: f and -f).
  int lifts = 0;
  int lifts_same_map = 0;
};

/// Matrices carrying one truncation triangle onto another, kept when they
/// are derivatives of automorphisms whose vertex maps pass the truncation
/// checks. Deduplicated by vertex map.
std::vector<AffineCandidate> automorphism_candidates(const Surface& s, const Scalar& L2, int budget);

}  // namespace flatsc
