#include "ribfront/meshio.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ribfront {

void DomainSpec::validate() const {
  if (nu < 2 || nv < 2) throw std::invalid_argument("grid counts must be at least 2");
  if (!(exclusion_radius > 0.0)) throw std::invalid_argument("exclusion radius must be positive");
  if (kind == DomainKind::Annulus && !(r_in > 0.0 && r_out > r_in))
    throw std::invalid_argument("annulus needs 0 < r_in < r_out");
  if (kind == DomainKind::Disk && !(r_out > exclusion_radius))
    throw std::invalid_argument("disk radius must exceed the exclusion radius");
  if (kind == DomainKind::Rect && !(z_max.real() > z_min.real() && z_max.imag() > z_min.imag()))
    throw std::invalid_argument("rect needs z_min < z_max componentwise");
}

Grid sample_grid(const DomainSpec& d) {
  d.validate();
  Grid g;
  g.nu = d.nu;
  g.nv = d.nv;
  g.points.reserve(static_cast<std::size_t>(d.nu * d.nv));
  if (d.kind == DomainKind::Rect) {
    const double dx = (d.z_max.real() - d.z_min.real()) / (d.nu - 1);
    const double dy = (d.z_max.imag() - d.z_min.imag()) / (d.nv - 1);
    for (int i = 0; i < d.nu; ++i)
      for (int j = 0; j < d.nv; ++j) g.points.emplace_back(d.z_min.real() + i * dx, d.z_min.imag() + j * dy);
  } else {
    g.periodic_v = true;
    const double a = d.kind == DomainKind::Annulus ? d.r_in : d.exclusion_radius;
    const double b = d.r_out;
    const double la = std::log(a);
    const double lb = std::log(b);
    for (int i = 0; i < d.nu; ++i) {
      const double r = std::exp(la + (lb - la) * i / (d.nu - 1));
      for (int j = 0; j < d.nv; ++j)
        g.points.push_back(d.center + std::polar(r, 2.0 * std::numbers::pi * j / d.nv));
    }
  }
  g.kept.assign(g.points.size(), true);
  for (std::size_t n = 0; n < g.points.size(); ++n)
    for (const Cplx p : d.punctures)
      if (std::abs(g.points[n] - p) < d.exclusion_radius) g.kept[n] = false;
  return g;
}

std::vector<Cplx> sample_domain(const DomainSpec& d) {
  const Grid g = sample_grid(d);
  std::vector<Cplx> out;
  for (std::size_t n = 0; n < g.points.size(); ++n)
    if (g.kept[n]) out.push_back(g.points[n]);
  return out;
}

std::vector<bool> sign_change_flags(const Grid& grid, const std::vector<double>& density) {
  if (density.size() != grid.points.size()) throw std::invalid_argument("density must cover the grid");
  std::vector<bool> out(grid.points.size(), false);
  auto at = [&](int i, int j) { return static_cast<std::size_t>(i * grid.nv + j); };
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const std::size_t n = at(i, j);
      if (!grid.kept[n]) continue;
      const int nbr[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (const auto& q : nbr) {
        int a = q[0];
        int b = q[1];
        if (a < 0 || a >= grid.nu) continue;
        if (b < 0 || b >= grid.nv) {
          if (!grid.periodic_v) continue;
          b = (b + grid.nv) % grid.nv;
        }
        const std::size_t m = at(a, b);
        if (grid.kept[m] && density[n] * density[m] < 0.0) out[n] = true;
      }
    }
  }
  return out;
}

SurfaceMesh build_mesh(const VertexEvaluator& eval, const Grid& grid) {
  SurfaceMesh mesh;
  std::vector<int> index(grid.points.size(), -1);
  std::vector<double> density(grid.points.size(), 0.0);
  int kept = 0;
  std::string first_error;
  for (std::size_t n = 0; n < grid.points.size(); ++n) {
    if (!grid.kept[n]) continue;
    ++kept;
    try {
      const VertexEval v = eval(grid.points[n]);
      if (!std::isfinite(v.p.x) || !std::isfinite(v.p.y) || !std::isfinite(v.p.z))
        throw std::runtime_error("non-finite vertex");
      index[n] = static_cast<int>(mesh.vertices.size());
      density[n] = v.density;
      mesh.vertices.push_back(v.p);
      mesh.singular.push_back(v.singular);
      mesh.params.push_back(grid.points[n]);
    } catch (const std::exception& e) {
      ++mesh.failed;
      if (first_error.empty()) first_error = e.what();
    }
  }
  if (kept > 0 && 2 * mesh.failed > kept) {
    throw MeshError("mesh aborted: " + std::to_string(mesh.failed) + " of " + std::to_string(kept) +
                    " vertices failed; first error: " + first_error);
  }
  // Failed vertices have density 0 and never flag a neighbor.
  const std::vector<bool> flags = sign_change_flags(grid, density);
  for (std::size_t n = 0; n < grid.points.size(); ++n)
    if (index[n] >= 0 && flags[n]) mesh.singular[static_cast<std::size_t>(index[n])] = true;
  const int vmax = grid.periodic_v ? grid.nv : grid.nv - 1;
  for (int i = 0; i + 1 < grid.nu; ++i) {
    for (int j = 0; j < vmax; ++j) {
      const int j1 = (j + 1) % grid.nv;
      const int a = index[static_cast<std::size_t>(i * grid.nv + j)];
      const int b = index[static_cast<std::size_t>((i + 1) * grid.nv + j)];
      const int c = index[static_cast<std::size_t>((i + 1) * grid.nv + j1)];
      const int d = index[static_cast<std::size_t>(i * grid.nv + j1)];
      if (a >= 0 && b >= 0 && c >= 0) mesh.faces.push_back({a, b, c});
      if (a >= 0 && c >= 0 && d >= 0) mesh.faces.push_back({a, c, d});
    }
  }
  return mesh;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string obj_text(const SurfaceMesh& mesh) {
  std::string out;
  for (const auto& v : mesh.vertices)
    out += "v " + format_real(v.x) + " " + format_real(v.y) + " " + format_real(v.z) + "\n";
  for (const auto& f : mesh.faces)
    out += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " + std::to_string(f[2] + 1) + "\n";
  return out;
}

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  os << text;
  os.close();
  if (!os) throw std::runtime_error("write failed for " + path + ": " + std::strerror(errno));
}

}  // namespace

void export_obj(const SurfaceMesh& mesh, const std::string& path) { write_file(path, obj_text(mesh)); }

std::vector<R3Vec> parse_obj_vertices(const std::string& text) {
  std::vector<R3Vec> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("v ", 0) != 0) continue;
    R3Vec v;
    if (std::sscanf(line.c_str() + 2, "%lf %lf %lf", &v.x, &v.y, &v.z) == 3) out.push_back(v);
  }
  return out;
}

std::string csv_text(const CsvTable& t) {
  std::string out;
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  row(t.header);
  for (const auto& r : t.rows) row(r);
  return out;
}

void export_csv(const CsvTable& t, const std::string& path) { write_file(path, csv_text(t)); }

void export_json(const nlohmann::json& report, const std::string& path) { write_file(path, report.dump(2) + "\n"); }

nlohmann::json mesh_summary(const SurfaceMesh& mesh) {
  nlohmann::json singular = nlohmann::json::array();
  for (std::size_t i = 0; i < mesh.singular.size(); ++i)
    if (mesh.singular[i]) singular.push_back(i);
  return {{"vertices", mesh.vertices.size()},
          {"faces", mesh.faces.size()},
          {"failed_vertices", mesh.failed},
          {"singular_vertices", singular}};
}

}  // namespace ribfront
