#pragma once

// Parameter-domain sampling, triangle meshes with per-vertex flags, and file export.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ribfront/geom.hpp"

namespace ribfront {

enum class DomainKind { Annulus, Disk, Rect };

struct DomainSpec {
  DomainKind kind = DomainKind::Annulus;
  Cplx center{0.0, 0.0};  // annulus and disk
  double r_in = 0.5;      // annulus
  double r_out = 2.0;     // annulus outer radius, disk radius
  Cplx z_min{-1.0, -1.0};  // rect
  Cplx z_max{1.0, 1.0};    // rect
  std::vector<Cplx> punctures;
  double exclusion_radius = 0.05;
  int nu = 50;
  int nv = 50;

  void validate() const;
};

/// Grid in parameter space: index i*nv + j; `kept` is false within the exclusion radius of a puncture.
struct Grid {
  int nu = 0;
  int nv = 0;
  bool periodic_v = false;
  std::vector<Cplx> points;
  std::vector<bool> kept;
};

/// Log-polar grid for annulus and disk (the disk starts at the exclusion radius), row-major for rect.
Grid sample_grid(const DomainSpec& d);

/// Kept points of sample_grid, in grid order.
std::vector<Cplx> sample_domain(const DomainSpec& d);

struct SurfaceMesh {
  std::vector<R3Vec> vertices;
  std::vector<std::array<int, 3>> faces;  // 0-based
  std::vector<bool> singular;
  std::vector<Cplx> params;
  int failed = 0;  // grid points whose evaluation failed
};

struct VertexEval {
  R3Vec p;
  bool singular = false;
  double density = 1.0;  // signed area density; a sign change between grid neighbors flags both
};

using VertexEvaluator = std::function<VertexEval(Cplx)>;

class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Kept grid vertices with a kept neighbor of opposite density sign (the singular curve passes between them).
std::vector<bool> sign_change_flags(const Grid& grid, const std::vector<double>& density);

/// Quad-split triangulation over grid adjacency. Vertices whose evaluation throws are
/// dropped with their faces; more than half failing aborts. A vertex is singular when the evaluator
/// says so or when its density sign differs from a neighbor's.
SurfaceMesh build_mesh(const VertexEvaluator& eval, const Grid& grid);

/// 17 significant digits ("%.17g").
std::string format_real(double v);

void export_obj(const SurfaceMesh& mesh, const std::string& path);
std::string obj_text(const SurfaceMesh& mesh);
std::vector<R3Vec> parse_obj_vertices(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_text(const CsvTable& t);
void export_csv(const CsvTable& t, const std::string& path);

void export_json(const nlohmann::json& report, const std::string& path);

/// Vertex/face counts and the indices of singular vertices.
nlohmann::json mesh_summary(const SurfaceMesh& mesh);

}  // namespace ribfront
