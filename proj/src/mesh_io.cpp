#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "robin/error.hpp"
#include "robin/geometry.hpp"

namespace robin {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Boundary edges may be listed in any order in a file; put them in loop order.
void order_boundary_loop(TriMesh& mesh) {
  if (mesh.boundary_edges.empty()) return;
  std::unordered_map<std::size_t, std::size_t> by_start;
  for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
    if (!by_start.emplace(mesh.boundary_edges[i].a, i).second) {
      throw GeometryError("boundary node " + std::to_string(mesh.boundary_edges[i].a) + " starts two boundary edges");
    }
  }
  std::vector<BoundaryEdge> ordered;
  ordered.reserve(mesh.boundary_edges.size());
  std::size_t cur = 0;
  for (std::size_t step = 0; step < mesh.boundary_edges.size(); ++step) {
    ordered.push_back(mesh.boundary_edges[cur]);
    auto it = by_start.find(mesh.boundary_edges[cur].b);
    if (it == by_start.end()) throw GeometryError("boundary edges do not form a closed loop");
    cur = it->second;
    if (cur == 0 && step + 1 < mesh.boundary_edges.size()) {
      throw GeometryError("boundary edges form more than one loop");
    }
  }
  mesh.boundary_edges = std::move(ordered);
}

}  // namespace

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << "# robin-limit mesh: " << mesh.nodes.size() << " nodes, " << mesh.triangles.size() << " triangles, "
      << mesh.boundary_edges.size() << " boundary edges\n";
  for (const auto& p : mesh.nodes) out << "v " << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  for (const auto& t : mesh.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : mesh.boundary_edges) out << "e " << e.a << ' ' << e.b << ' ' << e.marker << '\n';
}

TriMesh read_mesh(std::istream& in) {
  TriMesh mesh;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> triangle_lines;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line.substr(first));
    std::string tag;
    ss >> tag;
    auto fail = [&](const std::string& what) { throw MeshParseError(lineno, what); };
    auto read_index = [&]() {
      long long v = -1;
      if (!(ss >> v)) fail("expected an integer index in '" + line + "'");
      if (v < 0) fail("negative index " + std::to_string(v));
      return static_cast<std::size_t>(v);
    };
    if (tag == "v") {
      std::string xs, ys;
      if (!(ss >> xs >> ys)) fail("vertex record needs two coordinates");
      Point p;
      try {
        std::size_t used = 0;
        p.x = std::stod(xs, &used);
        if (used != xs.size()) fail("bad coordinate '" + xs + "'");
        p.y = std::stod(ys, &used);
        if (used != ys.size()) fail("bad coordinate '" + ys + "'");
      } catch (const std::logic_error&) {
        fail("bad coordinate in '" + line + "'");
      }
      mesh.nodes.push_back(p);
    } else if (tag == "t") {
      Triangle t{read_index(), read_index(), read_index()};
      mesh.triangles.push_back(t);
      triangle_lines.push_back(lineno);
    } else if (tag == "e") {
      const auto a = read_index();
      const auto b = read_index();
      const auto marker = read_index();
      mesh.boundary_edges.push_back({a, b, static_cast<int>(marker)});
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (ss >> extra) fail("trailing token '" + extra + "'");
  }
  if (mesh.nodes.empty()) throw MeshParseError(0, "no nodes");
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    for (auto v : mesh.triangles[i]) {
      if (v >= mesh.nodes.size()) {
        throw MeshParseError(triangle_lines[i], "triangle index " + std::to_string(v) + " out of range (" +
                                                    std::to_string(mesh.nodes.size()) + " nodes)");
      }
    }
  }
  try {
    order_boundary_loop(mesh);
    mesh.h = max_edge_length(mesh);
    validate(mesh);
  } catch (const GeometryError& e) {
    throw MeshParseError(0, std::string("invalid mesh topology: ") + e.what());
  }
  return mesh;
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_mesh(out, mesh);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_mesh(in);
}

}  // namespace robin
