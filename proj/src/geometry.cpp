#include "robin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <unordered_map>

#include "robin/error.hpp"

namespace robin {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw GeometryError(std::string(what) + " must be a positive finite number");
  }
}

void validate_polygon(const Polygon& polygon) {
  const auto& v = polygon.vertices;
  if (v.size() < 3) throw GeometryError("degenerate polygon: fewer than 3 vertices");
  double scale = 0.0;
  for (const auto& p : v) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("polygon vertex is not finite");
    scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  }
  const std::size_t n = v.size();
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    const Point& c = v[(i + 2) % n];
    const double e1 = distance(a, b);
    const double e2 = distance(b, c);
    if (e1 <= 1e-12 * scale || e2 <= 1e-12 * scale) throw GeometryError("degenerate polygon: repeated vertex");
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (cross <= 1e-12 * e1 * e2) {
      throw GeometryError("polygon must be strictly convex and counterclockwise (vertex " +
                          std::to_string((i + 1) % n) + " is reflex or collinear)");
    }
    const double dot = (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y);
    turning += std::atan2(cross, dot);
  }
  // All left turns but winding twice (a pentagram) is not a simple loop.
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw GeometryError("polygon boundary is not simple (total turning " + std::to_string(turning) + ")");
  }
}

double polygon_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

void finalize(TriMesh& mesh) {
  mesh.h = max_edge_length(mesh);
  validate(mesh);
}

TriMesh mesh_rectangle(const Rectangle& r, double h_target) {
  const auto nx = static_cast<std::size_t>(std::max(1.0, std::ceil(r.l / h_target - 1e-12)));
  const auto ny = static_cast<std::size_t>(std::max(1.0, std::ceil(r.L / h_target - 1e-12)));
  TriMesh mesh;
  auto id = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  mesh.nodes.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) {
      // Exact endpoints so the boundary nodes lie on the sides.
      const double x = i == nx ? r.l : r.l * static_cast<double>(i) / static_cast<double>(nx);
      const double y = j == ny ? r.L : r.L * static_cast<double>(j) / static_cast<double>(ny);
      mesh.nodes.push_back({x, y});
    }
  }
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const auto p00 = id(i, j), p10 = id(i + 1, j), p11 = id(i + 1, j + 1), p01 = id(i, j + 1);
      mesh.triangles.push_back({p00, p10, p11});
      mesh.triangles.push_back({p00, p11, p01});
    }
  }
  for (std::size_t i = 0; i < nx; ++i) mesh.boundary_edges.push_back({id(i, 0), id(i + 1, 0), 0});
  for (std::size_t j = 0; j < ny; ++j) mesh.boundary_edges.push_back({id(nx, j), id(nx, j + 1), 1});
  for (std::size_t i = nx; i > 0; --i) mesh.boundary_edges.push_back({id(i, ny), id(i - 1, ny), 2});
  for (std::size_t j = ny; j > 0; --j) mesh.boundary_edges.push_back({id(0, j), id(0, j - 1), 3});
  finalize(mesh);
  return mesh;
}

// Rings r_j = j R / J with 6 j nodes each, neighbouring rings zipped together
// by angle.
TriMesh mesh_disk_rings(const Disk& d, std::size_t rings) {
  TriMesh mesh;
  mesh.circle_radius = d.R;
  mesh.nodes.push_back({0.0, 0.0});
  std::vector<std::size_t> ring_start{0};
  std::vector<std::size_t> ring_size{1};
  for (std::size_t j = 1; j <= rings; ++j) {
    const std::size_t count = 6 * j;
    const double radius = j == rings ? d.R : d.R * static_cast<double>(j) / static_cast<double>(rings);
    ring_start.push_back(mesh.nodes.size());
    ring_size.push_back(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      mesh.nodes.push_back({radius * std::cos(t), radius * std::sin(t)});
    }
  }
  for (std::size_t i = 0; i < 6; ++i) {
    mesh.triangles.push_back({0, ring_start[1] + i, ring_start[1] + (i + 1) % 6});
  }
  for (std::size_t j = 2; j <= rings; ++j) {
    const std::size_t ni = ring_size[j - 1];
    const std::size_t no = ring_size[j];
    auto inner = [&](std::size_t i) { return ring_start[j - 1] + i % ni; };
    auto outer = [&](std::size_t k) { return ring_start[j] + k % no; };
    std::size_t i = 0;
    std::size_t k = 0;
    while (i < ni || k < no) {
      const double next_inner = static_cast<double>(i + 1) / static_cast<double>(ni);
      const double next_outer = static_cast<double>(k + 1) / static_cast<double>(no);
      if (i == ni || (k < no && next_outer <= next_inner)) {
        mesh.triangles.push_back({inner(i), outer(k), outer(k + 1)});
        ++k;
      } else {
        mesh.triangles.push_back({inner(i), outer(k), inner(i + 1)});
        ++i;
      }
    }
  }
  const std::size_t nb = ring_size[rings];
  for (std::size_t i = 0; i < nb; ++i) {
    mesh.boundary_edges.push_back({ring_start[rings] + i, ring_start[rings] + (i + 1) % nb, 0});
  }
  finalize(mesh);
  return mesh;
}

TriMesh mesh_disk(const Disk& d, double h_target) {
  auto rings = static_cast<std::size_t>(std::max(1.0, std::ceil(d.R / h_target - 1e-12)));
  while (2.0 * d.R * std::sin(std::numbers::pi / (6.0 * static_cast<double>(rings))) > h_target) ++rings;
  for (;;) {
    TriMesh mesh = mesh_disk_rings(d, rings);
    if (mesh.h <= 1.5 * h_target) return mesh;
    ++rings;
  }
}

// Centroid fan; fan triangle i = (c, v_i, v_{i+1}) carries the lattice
// (a, b, c') with a + b + c' = k. Lattice points on shared spokes are keyed
// so neighbouring fan triangles reuse them.
TriMesh mesh_polygon(const Polygon& poly, double h_target) {
  const auto& v = poly.vertices;
  const std::size_t nv = v.size();
  Point centre{0.0, 0.0};
  for (const auto& p : v) {
    centre.x += p.x / static_cast<double>(nv);
    centre.y += p.y / static_cast<double>(nv);
  }
  double longest = 0.0;
  for (std::size_t i = 0; i < nv; ++i) {
    longest = std::max({longest, distance(centre, v[i]), distance(v[i], v[(i + 1) % nv])});
  }
  const auto k = static_cast<std::size_t>(std::max(1.0, std::ceil(longest / h_target - 1e-12)));

  TriMesh mesh;
  // key: (kind, a, b) with kind 0 = centre, 1 = spoke i at distance step s,
  // 2 = interior of fan triangle.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, std::size_t> index;
  auto node = [&](std::size_t fan, std::size_t b, std::size_t c) {
    const std::size_t a = k - b - c;
    std::tuple<std::size_t, std::size_t, std::size_t, std::size_t> key;
    if (a == k) {
      key = {0, 0, 0, 0};
    } else if (c == 0) {
      key = {1, fan, b, 0};  // spoke towards v_fan, b steps out
    } else if (b == 0) {
      key = {1, (fan + 1) % nv, c, 0};
    } else {
      key = {2, fan, b, c};
    }
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const Point& p = v[fan];
    const Point& q = v[(fan + 1) % nv];
    const double kk = static_cast<double>(k);
    Point x{(static_cast<double>(a) * centre.x + static_cast<double>(b) * p.x + static_cast<double>(c) * q.x) / kk,
            (static_cast<double>(a) * centre.y + static_cast<double>(b) * p.y + static_cast<double>(c) * q.y) / kk};
    if (b == k) x = p;
    if (c == k) x = q;
    const std::size_t id = mesh.nodes.size();
    mesh.nodes.push_back(x);
    index.emplace(key, id);
    return id;
  };
  for (std::size_t fan = 0; fan < nv; ++fan) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t c = 0; b + c < k; ++c) {
        mesh.triangles.push_back({node(fan, b, c), node(fan, b + 1, c), node(fan, b, c + 1)});
        if (b + c + 2 <= k) {
          mesh.triangles.push_back({node(fan, b + 1, c), node(fan, b + 1, c + 1), node(fan, b, c + 1)});
        }
      }
    }
  }
  for (std::size_t fan = 0; fan < nv; ++fan) {
    for (std::size_t s = 0; s < k; ++s) {
      mesh.boundary_edges.push_back({node(fan, k - s, s), node(fan, k - s - 1, s + 1), static_cast<int>(fan)});
    }
  }
  finalize(mesh);
  return mesh;
}

}  // namespace

void validate_domain(const DomainSpec& domain) {
  std::visit(Overloaded{
                 [](const Interval& i) { require_positive(i.length, "interval length"); },
                 [](const Rectangle& r) {
                   require_positive(r.l, "rectangle side l");
                   require_positive(r.L, "rectangle side L");
                 },
                 [](const Disk& d) { require_positive(d.R, "disk radius"); },
                 [](const Polygon& p) { validate_polygon(p); },
             },
             domain);
}

double domain_measure(const DomainSpec& domain) {
  return std::visit(Overloaded{
                        [](const Interval& i) { return i.length; },
                        [](const Rectangle& r) { return r.l * r.L; },
                        [](const Disk& d) { return std::numbers::pi * d.R * d.R; },
                        [](const Polygon& p) { return polygon_area(p.vertices); },
                    },
                    domain);
}

double boundary_measure(const DomainSpec& domain) {
  return std::visit(Overloaded{
                        [](const Interval&) { return 2.0; },  // counting measure of {0, length}
                        [](const Rectangle& r) { return 2.0 * (r.l + r.L); },
                        [](const Disk& d) { return 2.0 * std::numbers::pi * d.R; },
                        [](const Polygon& p) {
                          double s = 0.0;
                          for (std::size_t i = 0; i < p.vertices.size(); ++i) {
                            s += distance(p.vertices[i], p.vertices[(i + 1) % p.vertices.size()]);
                          }
                          return s;
                        },
                    },
                    domain);
}

const char* domain_name(const DomainSpec& domain) {
  return std::visit(Overloaded{
                        [](const Interval&) { return "interval"; },
                        [](const Rectangle&) { return "rectangle"; },
                        [](const Disk&) { return "disk"; },
                        [](const Polygon&) { return "polygon"; },
                    },
                    domain);
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double max_edge_length(const TriMesh& mesh) {
  double h = 0.0;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      h = std::max(h, distance(mesh.nodes[t[e]], mesh.nodes[t[(e + 1) % 3]]));
    }
  }
  return h;
}

double TriMesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles) a += signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
  return a;
}

double TriMesh::boundary_length() const {
  double s = 0.0;
  for (const auto& e : boundary_edges) s += distance(nodes[e.a], nodes[e.b]);
  return s;
}

std::vector<std::size_t> TriMesh::boundary_loop() const {
  std::vector<std::size_t> loop;
  loop.reserve(boundary_edges.size());
  for (const auto& e : boundary_edges) loop.push_back(e.a);
  return loop;
}

void validate(const TriMesh& mesh) {
  const std::size_t n = mesh.nodes.size();
  if (n == 0) throw GeometryError("no nodes");
  if (mesh.triangles.empty()) throw GeometryError("no triangles");
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (auto i : tri) {
      if (i >= n) throw GeometryError("triangle " + std::to_string(t) + " references node out of range");
    }
    if (!(signed_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]) > 0.0)) {
      throw GeometryError("triangle " + std::to_string(t) + " has non-positive signed area");
    }
  }
  // Directed edge -> use count; an undirected edge seen once is on the boundary.
  auto key = [n](std::size_t a, std::size_t b) { return a * n + b; };
  std::unordered_map<std::size_t, int> directed;
  directed.reserve(3 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      if (++directed[key(tri[e], tri[(e + 1) % 3])] > 1) {
        throw GeometryError("edge (" + std::to_string(tri[e]) + "," + std::to_string(tri[(e + 1) % 3]) +
                            ") is traversed twice in the same direction (inconsistent orientation)");
      }
    }
  }
  std::size_t boundary_count = 0;
  for (const auto& [k, count] : directed) {
    if (!directed.contains((k % n) * n + k / n)) ++boundary_count;
  }
  if (boundary_count != mesh.boundary_edges.size()) {
    throw GeometryError("boundary edge list has " + std::to_string(mesh.boundary_edges.size()) +
                        " edges but the triangulation has " + std::to_string(boundary_count));
  }
  if (mesh.boundary_edges.empty()) throw GeometryError("no boundary edges");
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
    const auto& e = mesh.boundary_edges[i];
    if (e.a >= n || e.b >= n) throw GeometryError("boundary edge " + std::to_string(i) + " out of range");
    if (e.marker < 0) throw GeometryError("boundary edge " + std::to_string(i) + " has a negative marker");
    if (!directed.contains(key(e.a, e.b)) || directed.contains(key(e.b, e.a))) {
      throw GeometryError("boundary edge " + std::to_string(i) + " does not belong to exactly one triangle");
    }
    if (seen[e.a]++) throw GeometryError("boundary node " + std::to_string(e.a) + " visited twice");
    const auto& next = mesh.boundary_edges[(i + 1) % mesh.boundary_edges.size()];
    if (next.a != e.b) throw GeometryError("boundary edges do not form a closed loop at edge " + std::to_string(i));
  }
}

TriMesh build_mesh(const DomainSpec& domain, double h_target) {
  if (!(h_target > 0.0)) throw GeometryError("h_target must be positive");
  validate_domain(domain);
  return std::visit(Overloaded{
                        [](const Interval&) -> TriMesh {
                          throw GeometryError("interval domains are one-dimensional and are never meshed");
                        },
                        [h_target](const Rectangle& r) { return mesh_rectangle(r, h_target); },
                        [h_target](const Disk& d) { return mesh_disk(d, h_target); },
                        [h_target](const Polygon& p) { return mesh_polygon(p, h_target); },
                    },
                    domain);
}

TriMesh refine(const TriMesh& mesh) {
  validate(mesh);
  TriMesh out;
  out.circle_radius = mesh.circle_radius;
  out.nodes = mesh.nodes;
  const std::size_t n = mesh.nodes.size();
  std::unordered_map<std::size_t, std::size_t> midpoint;
  midpoint.reserve(3 * mesh.triangles.size());
  std::unordered_map<std::size_t, char> on_boundary;
  for (const auto& e : mesh.boundary_edges) on_boundary[std::min(e.a, e.b) * n + std::max(e.a, e.b)] = 1;

  auto mid = [&](std::size_t a, std::size_t b) {
    const std::size_t k = std::min(a, b) * n + std::max(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    Point p{0.5 * (mesh.nodes[a].x + mesh.nodes[b].x), 0.5 * (mesh.nodes[a].y + mesh.nodes[b].y)};
    if (out.circle_radius > 0.0 && on_boundary.contains(k)) {
      const double r = std::hypot(p.x, p.y);
      p = {p.x * out.circle_radius / r, p.y * out.circle_radius / r};
    }
    const std::size_t id = out.nodes.size();
    out.nodes.push_back(p);
    midpoint.emplace(k, id);
    return id;
  };

  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const auto ab = mid(t[0], t[1]);
    const auto bc = mid(t[1], t[2]);
    const auto ca = mid(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  for (const auto& e : mesh.boundary_edges) {
    const auto m = mid(e.a, e.b);
    out.boundary_edges.push_back({e.a, m, e.marker});
    out.boundary_edges.push_back({m, e.b, e.marker});
  }
  finalize(out);
  return out;
}

}  // namespace robin
