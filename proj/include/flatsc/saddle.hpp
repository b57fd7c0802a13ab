#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "flatsc/flow.hpp"
#include "flatsc/surface.hpp"

namespace flatsc {

/// Oriented saddle connection. Geometry is developed in the frame of the
/// start polygon: the start vertex sits at its own polygon coordinates and
/// piece k is place(poly coords).
struct SaddleConnection {
  Germ start;
  /// Germ at the far end pointing back along the connection.
  Germ end;
  int start_class = -1;
  int end_class = -1;
  /// Developed holonomy in the start polygon's frame.
  Vec2 hol;
  Scalar len2;
  std::vector<DevelopedPiece> pieces;
  std::vector<EdgeRef> crossings;
  /// "c{P}.{i}" then "|{P}.{e}" per crossed edge.
  std::string word;
  /// Canonical id, shared by both orientations.
  std::string id;

  Vec2 canonical_hol() const { return hol.canonical(); }
  /// Developed start point (= the start vertex in polygon coordinates).
  Vec2 origin() const;
  Transversal transversal() const;
};

/// Builds the oriented connection traced from `start`.
SaddleConnection connection_from_trace(const Surface& s, const Germ& start, const Trajectory& tr);

/// Same connection traversed backwards (recomputed by tracing).
SaddleConnection reversed(const Surface& s, const SaddleConnection& sc);

/// Canonical order: len2, then the angle of the canonical holonomy in
/// [0, pi), then id.
bool canonical_less(const SaddleConnection& a, const SaddleConnection& b);

/// Exact squared-length-bounded enumeration, one record per unoriented
/// connection in the orientation that defines its id, in canonical order.
std::vector<SaddleConnection> enumerate(const Surface& s, const Scalar& L2);

/// Every oriented connection from the given corner sector with len2 <= L2.
std::vector<SaddleConnection> enumerate_from_corner(const Surface& s, const Corner& c,
                                                     const Scalar& L2);

/// Interior intersection count; 0 for equal connections.
int intersections(const Surface& s, const SaddleConnection& a, const SaddleConnection& b);
/// Stops at the first interior meeting point.
bool disjoint(const Surface& s, const SaddleConnection& a, const SaddleConnection& b);

std::string sc_id(const SaddleConnection& sc);

/// Positive rescaling of v with |x| = 1 (or |y| = 1 when x = 0); equal for
/// two vectors iff they point the same way.
Vec2 direction_key(const Vec2& v);

/// Both orientations of every connection up to L2, with lookups by id and by
/// start germ. Grows on demand.
class Catalog {
 public:
  explicit Catalog(const Surface& s) : s_(s) {}

  const Surface& surface() const { return s_; }
  /// Ensures every connection with len2 <= L2 is present.
  void ensure(const Scalar& L2);
  const Scalar& bound() const { return bound_; }
  /// Canonical-orientation connections with len2 <= L2 (sorted).
  std::vector<const SaddleConnection*> upto(const Scalar& L2);
  /// Canonical orientation by id, nullptr if unknown at the current bound.
  const SaddleConnection* find(const std::string& id) const;
  /// Same as find but throws UnknownVertex.
  const SaddleConnection& get(const std::string& id) const;
  /// Orientation leaving this germ (germ must be normalized).
  const SaddleConnection* by_germ(const Germ& g) const;
  /// The other orientation of sc.
  const SaddleConnection& reverse_of(const SaddleConnection& sc) const;
  /// Registers a connection found by tracing (both orientations).
  const SaddleConnection& add(const SaddleConnection& sc);

 private:
  const Surface& s_;
  Scalar bound_;
  bool any_ = false;
  std::vector<std::unique_ptr<SaddleConnection>> store_;
  std::map<std::string, std::pair<const SaddleConnection*, const SaddleConnection*>> by_id_;
  std::map<std::pair<Corner, Vec2>, const SaddleConnection*> by_germ_;
  std::vector<const SaddleConnection*> sorted_;
  void insert_pair(SaddleConnection a, SaddleConnection b);
  void resort();
};

}  // namespace flatsc
