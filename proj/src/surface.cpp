#include "flatsc/surface.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

#include "json.hpp"

namespace flatsc {

namespace {

Error gluing_error(const std::string& msg) { return Error(ErrorCode::GluingMismatch, msg); }

std::string edge_str(const EdgeRef& e) {
  return "[" + std::to_string(e.poly) + "," + std::to_string(e.edge) + "]";
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

bool ray_in_arc(const Vec2& a, const Vec2& b, const Vec2& r) {
  if (wedge(a, r).sign() <= 0) return false;
  const int s = wedge(r, b).sign();
  if (s > 0) return true;
  return s == 0 && dot(r, b).sign() > 0;
}

Surface::Surface(SurfaceData data) : data_(std::move(data)) {
  validate_and_index();
  build_classes();
}

const Vec2& Surface::vertex(int poly, int idx) const {
  const auto& vs = data_.polygons[poly].vertices;
  const int n = static_cast<int>(vs.size());
  return vs[((idx % n) + n) % n];
}

Vec2 Surface::edge_vector(const EdgeRef& e) const {
  return vertex(e.poly, e.edge + 1) - vertex(e.poly, e.edge);
}

Vec2 Surface::out_dir(const Corner& c) const {
  return vertex(c.poly, c.idx + 1) - vertex(c.poly, c.idx);
}

Vec2 Surface::in_dir(const Corner& c) const {
  return vertex(c.poly, c.idx - 1) - vertex(c.poly, c.idx);
}

bool Surface::in_sector(const Corner& c, const Vec2& d) const {
  const Vec2 out = out_dir(c);
  const int s = wedge(out, d).sign();
  if (s < 0) return false;
  if (s == 0 && dot(out, d).sign() <= 0) return false;
  return wedge(d, in_dir(c)).sign() > 0;
}

bool Surface::in_closed_sector(const Corner& c, const Vec2& d) const {
  if (in_sector(c, d)) return true;
  const Vec2 in = in_dir(c);
  return wedge(in, d).is_zero() && dot(in, d).sign() > 0;
}

std::pair<Corner, int> Surface::step(const Corner& c, Rotation sense) const {
  const int n = num_vertices(c.poly);
  if (sense == Rotation::CCW) {
    // Cross the incoming edge (i-1); its partner edge j starts at our vertex.
    const EdgeRef in{c.poly, (c.idx + n - 1) % n};
    const EdgeRef p = partner(in);
    return {Corner{p.poly, p.edge}, gluing_sign(in)};
  }
  const EdgeRef out{c.poly, c.idx};
  const EdgeRef p = partner(out);
  const int m = num_vertices(p.poly);
  return {Corner{p.poly, (p.edge + 1) % m}, gluing_sign(out)};
}

Germ Surface::normalize_germ(const Corner& c, const Vec2& d) const {
  if (in_sector(c, d)) return {c, d};
  const Vec2 in = in_dir(c);
  if (wedge(in, d).is_zero() && dot(in, d).sign() > 0) {
    auto [next, sigma] = step(c, Rotation::CCW);
    return {next, sigma * d};
  }
  throw Error(ErrorCode::Internal, "direction is not in the closed corner sector");
}

std::pair<Germ, int> Surface::rotate_to_signed(const Germ& from, const Vec2& d, Rotation sense) const {
  Corner c = from.corner;
  Vec2 cur = d;
  int sign = 1;
  const bool same_sector_ok = sense == Rotation::CCW ? wedge(from.dir, d).sign() > 0
                                                      : wedge(d, from.dir).sign() > 0;
  if (same_sector_ok && in_sector(c, cur)) return {{c, cur}, sign};
  const int limit = static_cast<int>(vclass(vertex_class(c)).corners.size()) * 2 + 2;
  for (int i = 0; i < limit; ++i) {
    auto [next, sigma] = step(c, sense);
    c = next;
    cur = sigma * cur;
    sign *= sigma;
    if (in_sector(c, cur)) return {{c, cur}, sign};
  }
  throw Error(ErrorCode::Internal, "rotate_to did not find the direction");
}

Germ Surface::rotate_to(const Germ& from, const Vec2& d, Rotation sense) const {
  return rotate_to_signed(from, d, sense).first;
}

int Surface::frame_sign_between(const Corner& a, const Corner& b, Rotation sense) const {
  const int cls = vertex_class(a);
  if (cls != vertex_class(b)) throw Error(ErrorCode::Internal, "corners of different classes");
  const VertexClass& vc = classes_[cls];
  const int i = walk_index(a);
  const int j = walk_index(b);
  int s = vc.frame_sign[i] * vc.frame_sign[j];
  const bool wraps = sense == Rotation::CCW ? j < i : j > i;
  if (wraps) s *= vc.loop_sign;
  return s;
}

void Surface::validate_and_index() {
  check_field(data_.field_d);
  const int np = num_polygons();
  if (np == 0) throw Error(ErrorCode::ParseError, "surface has no polygons");
  offset_.assign(np + 1, 0);
  for (int p = 0; p < np; ++p) {
    const auto& vs = data_.polygons[p].vertices;
    const int n = static_cast<int>(vs.size());
    if (n < 3) {
      throw Error(ErrorCode::NonConvexPolygon,
                  "polygon " + std::to_string(p) + " has fewer than 3 vertices");
    }
    for (const Vec2& v : vs) {
      if ((v.x.field() != 1 && v.x.field() != data_.field_d) ||
          (v.y.field() != 1 && v.y.field() != data_.field_d)) {
        throw Error(ErrorCode::FieldMismatch, "vertex outside the surface field");
      }
    }
    // Strict convexity: every vertex strictly left of every non-incident edge.
    for (int i = 0; i < n; ++i) {
      const Vec2& a = vs[i];
      const Vec2& b = vs[(i + 1) % n];
      for (int k = 0; k < n; ++k) {
        if (k == i || k == (i + 1) % n) continue;
        if (orient(a, b, vs[k]) <= 0) {
          throw Error(ErrorCode::NonConvexPolygon,
                      "polygon " + std::to_string(p) + " is not strictly convex counterclockwise");
        }
      }
    }
    offset_[p + 1] = offset_[p] + n;
  }
  num_edges_ = offset_[np];
  partner_.assign(num_edges_, EdgeRef{-1, -1});
  sign_.assign(num_edges_, 0);
  transition_.assign(num_edges_, Placement{});

  auto check_ref = [&](const EdgeRef& e) {
    if (e.poly < 0 || e.poly >= np || e.edge < 0 || e.edge >= num_vertices(e.poly)) {
      throw gluing_error("gluing refers to missing edge " + edge_str(e));
    }
  };
  for (const Gluing& g : data_.gluings) {
    check_ref(g.from);
    check_ref(g.to);
    if (g.sign != 1 && g.sign != -1) throw gluing_error("gluing sign must be +1 or -1");
    if (g.from == g.to) throw gluing_error("edge " + edge_str(g.from) + " glued to itself");
    for (const EdgeRef& e : {g.from, g.to}) {
      if (partner_[flat(e)].poly != -1) {
        throw gluing_error("edge " + edge_str(e) + " glued more than once");
      }
    }
    const Vec2 u = edge_vector(g.from);
    const Vec2 w = edge_vector(g.to);
    const bool ok = g.sign == 1 ? (w == -u) : (w == u);
    if (!ok) {
      throw gluing_error("edge vectors of " + edge_str(g.from) + " and " + edge_str(g.to) +
                         " do not match for sign " + std::to_string(g.sign));
    }
    partner_[flat(g.from)] = g.to;
    partner_[flat(g.to)] = g.from;
    sign_[flat(g.from)] = g.sign;
    sign_[flat(g.to)] = g.sign;
  }
  for (int p = 0; p < np; ++p) {
    for (int i = 0; i < num_vertices(p); ++i) {
      const EdgeRef e{p, i};
      if (partner_[flat(e)].poly == -1) throw gluing_error("edge " + edge_str(e) + " is unglued");
      const EdgeRef q = partner_[flat(e)];
      const int sigma = sign_[flat(e)];
      // g(z) = sigma z + c sends q's end to e's start.
      const Vec2 c = vertex(e.poly, e.edge) - sigma * vertex(q.poly, q.edge + 1);
      transition_[flat(e)] = Placement{sigma, c};
    }
  }
  // Connectivity of the polygon adjacency graph.
  std::vector<bool> seen(np, false);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = true;
  while (!bfs.empty()) {
    const int p = bfs.front();
    bfs.pop();
    for (int i = 0; i < num_vertices(p); ++i) {
      const int q = partner({p, i}).poly;
      if (!seen[q]) {
        seen[q] = true;
        bfs.push(q);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorCode::Disconnected, "glued complex is disconnected");
  }
}

void Surface::build_classes() {
  const int np = num_polygons();
  class_of_.assign(num_edges_, -1);
  walk_index_.assign(num_edges_, -1);
  classes_.clear();
  for (int p = 0; p < np; ++p) {
    for (int i = 0; i < num_vertices(p); ++i) {
      const Corner start{p, i};
      if (class_of_[flat_corner(start)] != -1) continue;
      VertexClass vc;
      const int cls = static_cast<int>(classes_.size());
      const Vec2 ref = out_dir(start);
      Corner c = start;
      int sign = 1;  // vector in frame of c = sign * vector in frame of start
      int half_turns = 0;
      while (true) {
        if (class_of_[flat_corner(c)] != -1) {
          throw Error(ErrorCode::BadConeAngle, "corner walk revisited a corner");
        }
        class_of_[flat_corner(c)] = cls;
        walk_index_[flat_corner(c)] = static_cast<int>(vc.corners.size());
        vc.corners.push_back(c);
        vc.frame_sign.push_back(sign);
        // Express the corner arc in the start frame and count passes of +-ref.
        const Vec2 a = sign * out_dir(c);
        const Vec2 b = sign * in_dir(c);
        if (ray_in_arc(a, b, ref)) ++half_turns;
        if (ray_in_arc(a, b, -ref)) ++half_turns;
        auto [next, sigma] = step(c, Rotation::CCW);
        sign *= sigma;
        c = next;
        if (c == start) break;
      }
      vc.loop_sign = sign;
      vc.angle_pi = half_turns;
      // After a full loop the start direction must come back as +-ref.
      if (half_turns <= 0 || (half_turns % 2 == 0) != (sign == 1)) {
        throw Error(ErrorCode::BadConeAngle, "cone angle is not an integer multiple of pi");
      }
      classes_.push_back(std::move(vc));
    }
  }
  // Stratum and Euler characteristic.
  const int V = num_classes();
  const int E = num_edges_ / 2;
  const int F = np;
  const int chi = V - E + F;
  if (chi % 2 != 0 || chi > 2) throw Error(ErrorCode::StratumError, "odd Euler characteristic");
  const int genus = (2 - chi) / 2;
  int total = 0;
  for (const auto& vc : classes_) {
    const int k = vc.angle_pi - 2;
    if (k < -1) throw Error(ErrorCode::StratumError, "cone angle below pi");
    total += k;
  }
  if (total != 4 * genus - 4) {
    throw Error(ErrorCode::StratumError,
                "sum of k_i is " + std::to_string(total) + ", expected " +
                    std::to_string(4 * genus - 4));
  }
}

Scalar Surface::polygon_area(int poly) const {
  const auto& vs = data_.polygons[poly].vertices;
  Scalar twice;
  for (std::size_t i = 0; i < vs.size(); ++i) twice += wedge(vs[i], vs[(i + 1) % vs.size()]);
  return twice / Scalar(2);
}

Scalar Surface::total_area() const {
  Scalar a;
  for (int p = 0; p < num_polygons(); ++p) a += polygon_area(p);
  return a;
}

SurfaceInfo Surface::info() const {
  SurfaceInfo info;
  const int chi = num_classes() - num_edges_ / 2 + num_polygons();
  info.genus = (2 - chi) / 2;
  info.num_marked = num_classes();
  for (const auto& vc : classes_) info.stratum.push_back(vc.angle_pi - 2);
  std::sort(info.stratum.rbegin(), info.stratum.rend());
  info.total_area = total_area();
  // Two-colour the polygons so every transition becomes a translation.
  std::vector<int> colour(num_polygons(), 0);
  colour[0] = 1;
  std::queue<int> bfs;
  bfs.push(0);
  bool ok = true;
  while (!bfs.empty() && ok) {
    const int p = bfs.front();
    bfs.pop();
    for (int i = 0; i < num_vertices(p); ++i) {
      const EdgeRef e{p, i};
      const int q = partner(e).poly;
      const int want = colour[p] * gluing_sign(e);
      if (colour[q] == 0) {
        colour[q] = want;
        bfs.push(q);
      } else if (colour[q] != want) {
        ok = false;
        break;
      }
    }
  }
  info.is_translation = ok;
  return info;
}

// ---------------------------------------------------------------------------
// JSON file format

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed, const char* what) {
  if (!obj.is_object()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool found = false;
    for (const char* a : allowed) found |= key == a;
    if (!found) throw Error(ErrorCode::ParseError, "unknown key \"" + key + "\" in " + what);
  }
  for (const char* a : allowed) {
    if (!obj.contains(a)) throw Error(ErrorCode::ParseError, std::string("missing key \"") + a + "\" in " + what);
  }
}

Scalar parse_coord(const json& j, int d) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    throw Error(ErrorCode::ParseError, "coordinate must be [\"p/q\", \"p/q\"]");
  }
  const mpq_class a = Scalar::parse_rational(j[0].get<std::string>());
  const mpq_class b = Scalar::parse_rational(j[1].get<std::string>());
  if (d == 1) return Scalar(a + b);
  return Scalar(a, b, d);
}

EdgeRef parse_edge(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw Error(ErrorCode::ParseError, "edge reference must be [poly, edge]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

json coord_json(const Scalar& s) {
  return json::array({Scalar::rational_str(s.rational()), Scalar::rational_str(s.irrational())});
}

}  // namespace

Surface parse_surface(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  require_keys(doc, {"field_d", "polygons", "gluings"}, "surface");
  if (!doc["field_d"].is_number_integer()) throw Error(ErrorCode::ParseError, "field_d must be an integer");
  SurfaceData data;
  data.field_d = doc["field_d"].get<int>();
  if (!is_square_free(data.field_d)) throw Error(ErrorCode::ParseError, "field_d must be square-free and positive");
  if (!doc["polygons"].is_array() || !doc["gluings"].is_array()) {
    throw Error(ErrorCode::ParseError, "polygons and gluings must be arrays");
  }
  for (const auto& pj : doc["polygons"]) {
    require_keys(pj, {"name", "vertices"}, "polygon");
    if (!pj["name"].is_string() || !pj["vertices"].is_array()) {
      throw Error(ErrorCode::ParseError, "polygon needs a string name and a vertex array");
    }
    Polygon poly;
    poly.name = pj["name"].get<std::string>();
    for (const auto& vj : pj["vertices"]) {
      if (!vj.is_array() || vj.size() != 2) throw Error(ErrorCode::ParseError, "vertex must be [x, y]");
      poly.vertices.emplace_back(parse_coord(vj[0], data.field_d), parse_coord(vj[1], data.field_d));
    }
    data.polygons.push_back(std::move(poly));
  }
  for (const auto& gj : doc["gluings"]) {
    require_keys(gj, {"from", "to", "sign"}, "gluing");
    if (!gj["sign"].is_number_integer()) throw Error(ErrorCode::ParseError, "sign must be an integer");
    data.gluings.push_back({parse_edge(gj["from"]), parse_edge(gj["to"]), gj["sign"].get<int>()});
  }
  return Surface(std::move(data));
}

std::string surface_to_json(const Surface& s) {
  json doc;
  doc["field_d"] = s.field();
  doc["polygons"] = json::array();
  for (const auto& p : s.polygons()) {
    json vs = json::array();
    for (const auto& v : p.vertices) vs.push_back(json::array({coord_json(v.x), coord_json(v.y)}));
    doc["polygons"].push_back({{"name", p.name}, {"vertices", vs}});
  }
  doc["gluings"] = json::array();
  for (const auto& g : s.data().gluings) {
    doc["gluings"].push_back({{"from", {g.from.poly, g.from.edge}},
                              {"to", {g.to.poly, g.to.edge}},
                              {"sign", g.sign}});
  }
  return doc.dump();
}

// ---------------------------------------------------------------------------

Corner image_corner(const Surface& s, const Corner& c, const Mat2& m) {
  if (m.det().sign() > 0) return c;
  const int n = s.num_vertices(c.poly);
  return {c.poly, (n - c.idx) % n};
}

Surface apply_matrix(const Surface& s, const Mat2& m) {
  const Scalar det = m.det();
  if (det.is_zero()) throw Error(ErrorCode::SingularMatrix, "matrix " + m.str() + " is singular");
  const int mf = m.field();
  if (mf != 1 && mf != s.field()) {
    throw Error(ErrorCode::FieldMismatch, "matrix entries lie outside the surface field");
  }
  const bool flip = det.sign() < 0;
  SurfaceData data;
  data.field_d = s.field();
  for (const auto& p : s.polygons()) {
    Polygon q;
    q.name = p.name;
    const int n = static_cast<int>(p.vertices.size());
    for (int j = 0; j < n; ++j) {
      const int src = flip ? (n - j) % n : j;
      q.vertices.push_back(m.apply(p.vertices[src]));
    }
    data.polygons.push_back(std::move(q));
  }
  for (const auto& g : s.data().gluings) {
    Gluing h = g;
    if (flip) {
      h.from.edge = s.num_vertices(g.from.poly) - 1 - g.from.edge;
      h.to.edge = s.num_vertices(g.to.poly) - 1 - g.to.edge;
    }
    data.gluings.push_back(h);
  }
  return Surface(std::move(data));
}

// ---------------------------------------------------------------------------

namespace {

Polygon square(const std::string& name, long x0, long y0) {
  return {name, {Vec2(x0, y0), Vec2(x0 + 1, y0), Vec2(x0 + 1, y0 + 1), Vec2(x0, y0 + 1)}};
}

}  // namespace

std::vector<std::string> builtin_names() { return {"square_torus", "regular_octagon", "L_shape_2x1"}; }

Surface builtin(std::string_view name) {
  SurfaceData data;
  if (name == "square_torus") {
    data.polygons.push_back(square("square", 0, 0));
    data.gluings = {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}};
  } else if (name == "regular_octagon") {
    data.field_d = 2;
    const Scalar big(mpq_class(1), mpq_class(1), 2);  // 1 + sqrt 2
    const Scalar one(1);
    data.polygons.push_back({"octagon",
                             {Vec2(big, -one), Vec2(big, one), Vec2(one, big), Vec2(-one, big),
                              Vec2(-big, one), Vec2(-big, -one), Vec2(-one, -big),
                              Vec2(one, -big)}});
    for (int i = 0; i < 4; ++i) data.gluings.push_back({{0, i}, {0, i + 4}, 1});
  } else if (name == "L_shape_2x1") {
    data.polygons = {square("A", 0, 0), square("B", 1, 0), square("C", 0, 1)};
    // Squares: edge 0 bottom, 1 right, 2 top, 3 left.
    data.gluings = {{{0, 1}, {1, 3}, 1}, {{1, 1}, {0, 3}, 1}, {{2, 1}, {2, 3}, 1},
                    {{0, 2}, {2, 0}, 1}, {{2, 2}, {0, 0}, 1}, {{1, 2}, {1, 0}, 1}};
  } else {
    throw Error(ErrorCode::UnknownName, "unknown builtin surface \"" + std::string(name) + "\"");
  }
  return Surface(std::move(data));
}

}  // namespace flatsc
