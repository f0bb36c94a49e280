// robin-limit: run | explain | mesh
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "robin/cli/run.hpp"
#include "robin/error.hpp"
#include "robin/geometry.hpp"

namespace {

robin::Polygon parse_polygon(const std::string& text) {
  robin::Polygon p;
  std::istringstream in(text);
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw robin::Error("polygon vertex '" + pair + "' is not of the form x,y");
    try {
      p.vertices.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw robin::Error("polygon vertex '" + pair + "' is not numeric");
    }
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robin/Dirichlet spectra, boundary torsional rigidity and large-alpha asymptotics"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "execute the checks of a JSON config");
  run->add_option("config", config_path, "config file")->required();

  std::string check_id;
  auto* explain = app.add_subcommand("explain", "print a check's anchor and pass criteria");
  explain->add_option("check", check_id, "check id")->required();

  std::vector<double> rect;
  double disk_r = 0.0;
  std::string polygon;
  double h = 0.0;
  int refinements = 0;
  std::string out_path;
  auto* mesh = app.add_subcommand("mesh", "write a triangulation in the text mesh format");
  mesh->set_help_flag("--help", "print this help message and exit");
  auto* o_rect = mesh->add_option("--rectangle", rect, "side lengths l L")->expected(2);
  auto* o_disk = mesh->add_option("--disk", disk_r, "radius R");
  auto* o_poly = mesh->add_option("--polygon", polygon, "counterclockwise vertices \"x,y x,y ...\"");
  o_rect->excludes(o_disk)->excludes(o_poly);
  o_disk->excludes(o_poly);
  mesh->add_option("--h", h, "target mesh size")->required()->check(CLI::PositiveNumber);
  mesh->add_option("--refine", refinements, "uniform refinements after meshing")->check(CLI::Range(0, 8));
  mesh->add_option("-o,--output", out_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : robin::cli::kExitUsage;
  }

  if (*run) return robin::cli::run_command(config_path, std::cout, std::cerr);
  if (*explain) return robin::cli::explain_command(check_id, std::cout, std::cerr);

  try {
    robin::DomainSpec domain;
    if (*o_rect) {
      domain = robin::Rectangle{rect[0], rect[1]};
    } else if (*o_disk) {
      domain = robin::Disk{disk_r};
    } else if (*o_poly) {
      domain = parse_polygon(polygon);
    } else {
      std::cerr << "robin-limit mesh: one of --rectangle, --disk, --polygon is required\n";
      return robin::cli::kExitUsage;
    }
    robin::validate_domain(domain);
    auto m = robin::build_mesh(domain, h);
    for (int i = 0; i < refinements; ++i) m = robin::refine(m);
    robin::save_mesh(m, out_path);
    std::cout << m.nodes.size() << " nodes, " << m.triangles.size() << " triangles, " << m.boundary_edges.size()
              << " boundary edges, h = " << m.h << '\n';
  } catch (const robin::Error& e) {
    std::cerr << "robin-limit mesh: " << e.what() << '\n';
    return robin::cli::kExitUsage;
  }
  return 0;
}
