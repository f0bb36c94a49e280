#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

namespace robin {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// (0, length).
struct Interval {
  double length = 1.0;
};

/// (0, l) x (0, L).
struct Rectangle {
  double l = 1.0;
  double L = 1.0;
};

/// Disk of radius R centred at the origin.
struct Disk {
  double R = 1.0;
};

/// Convex polygon, vertices listed counterclockwise.
struct Polygon {
  std::vector<Point> vertices;
};

using DomainSpec = std::variant<Interval, Rectangle, Disk, Polygon>;

/// Throws GeometryError unless the domain satisfies its invariants
/// (positive sizes; polygons simple, counterclockwise and strictly convex).
void validate_domain(const DomainSpec& domain);

[[nodiscard]] double domain_measure(const DomainSpec& domain);
[[nodiscard]] double boundary_measure(const DomainSpec& domain);
[[nodiscard]] const char* domain_name(const DomainSpec& domain);

struct BoundaryEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  int marker = 0;
  friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

using Triangle = std::array<std::size_t, 3>;

/// P1 triangulation. Triangles are counterclockwise; boundary edges are
/// stored in loop order (edge[i].b == edge[i+1].a) and follow the
/// orientation of the triangle that owns them.
struct TriMesh {
  std::vector<Point> nodes;
  std::vector<Triangle> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;
  // Radius of the circle the boundary approximates (disk meshes); refine()
  // projects new boundary nodes onto it. Zero for straight-sided domains.
  // Not persisted by the mesh file format.
  double circle_radius = 0.0;

  [[nodiscard]] double area() const;
  [[nodiscard]] double boundary_length() const;
  [[nodiscard]] std::vector<std::size_t> boundary_loop() const;

  /// Coordinates and connectivity only; circle_radius is not compared.
  friend bool operator==(const TriMesh& a, const TriMesh& b) {
    return a.nodes == b.nodes && a.triangles == b.triangles && a.boundary_edges == b.boundary_edges;
  }
};

[[nodiscard]] double signed_area(const Point& a, const Point& b, const Point& c);
[[nodiscard]] double max_edge_length(const TriMesh& mesh);

/// Throws GeometryError naming the first violated topology invariant.
void validate(const TriMesh& mesh);

/// Rectangles: structured grid, each cell split along its (0,0)-(1,1) diagonal.
/// Disks: concentric rings inscribed in the circle. Polygons: centroid fan with
/// uniform subdivision of each fan triangle. Guarantees mesh.h <= 1.5 h_target.
[[nodiscard]] TriMesh build_mesh(const DomainSpec& domain, double h_target);

/// Uniform red refinement (every triangle split into four).
[[nodiscard]] TriMesh refine(const TriMesh& mesh);

// Text format: `v x y`, `t i j k`, `e i j marker`, `#` comments.
void write_mesh(std::ostream& out, const TriMesh& mesh);
[[nodiscard]] TriMesh read_mesh(std::istream& in);
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path);
[[nodiscard]] TriMesh load_mesh(const std::filesystem::path& path);

}  // namespace robin
