#pragma once

// Named invariant checks with tiered tolerances and deterministic sampling.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ribfront/hfront.hpp"
#include "ribfront/meshio.hpp"
#include "ribfront/ribaucour.hpp"

namespace ribfront {

struct CheckReport {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int points_tested = 0;
  int failures = 0;  // points where evaluation failed
  bool pass = false;

  nlohmann::json to_json() const;
};

namespace tier {
inline constexpr double algebraic = 1e-10;
inline constexpr double quadrature = 1e-6;
inline constexpr double finite_difference = 1e-3;
inline constexpr double fd_step = 1e-3;
}  // namespace tier

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  double tol_scale = 1.0;
  int points = 1000;     // pointwise algebraic checks
  int path_points = 100;  // checks that integrate from the base point
};

/// Annulus |z - center| in [r_in, r_out] (or the rectangle [z_min, z_max] when `rect`)
/// minus disks of radius `clearance` around `avoid`.
struct SampleRegion {
  Cplx center{0.0, 0.0};
  double r_in = 0.5;
  double r_out = 2.0;
  bool rect = false;
  Cplx z_min{-1.0, -1.0};
  Cplx z_max{1.0, 1.0};
  std::vector<Cplx> avoid;
  double clearance = 0.05;

  /// Same region as the domain (a disk starts at its exclusion radius), clearance = exclusion radius.
  static SampleRegion from_domain(const DomainSpec& d);
};

/// Uniform-by-area samples from a seeded 64-bit Mersenne Twister (platform independent).
std::vector<Cplx> sample_points(const SampleRegion& region, int n, std::uint64_t seed);

CheckReport check_riccati(const WeierstrassData& w, double k, const Expr& h, std::span<const Cplx> pts,
                          double tol_scale = 1.0);
/// Self-convergence of a numeric solution: re-solving at half the tolerance moves it by less than the tolerance tier.
CheckReport check_riccati_numeric(const WeierstrassData& w, double k, Cplx z0, Cplx h0, const PathSpec& path,
                                  double tol_scale = 1.0, RiccatiSolution* out = nullptr);
/// Numeric solution from h(z0) against the closed form at every accepted sample, compared in the sample's chart
/// with error |delta| / max(1, |value|). The solution is stored in `out` when given.
CheckReport check_riccati_against(const WeierstrassData& w, const ClosedForm& cf, Cplx z0, const PathSpec& path,
                                  double tol_scale = 1.0, RiccatiSolution* out = nullptr);
CheckReport check_hopf(const RibaucourPair& pair, std::span<const Cplx> pts, double tol_scale = 1.0);
CheckReport check_minimal(const WeierstrassData& w, std::span<const Cplx> pts, double tol_scale = 1.0);
CheckReport check_sphere_congruence(const RibaucourPair& pair, std::span<const Cplx> pts, double tol_scale = 1.0);
CheckReport check_ribaucour_data(const RibaucourPair& pair, std::span<const Cplx> pts, double tol_scale = 1.0);

/// Finite-difference form identities at every kept grid vertex; vertices flagged singular
/// (rank drop or density sign change against a neighbor) skip Theta and Brioschi.
FormReport grid_form_report(const FlatFrontData& ff, const DomainSpec& domain, double step = tier::fd_step);
/// Theta and Brioschi K_I.
CheckReport flatness_report(const FormReport& rep, double tol_scale = 1.0);
/// The three form identities between X and its envelopes, and the curvature identities.
CheckReport form_relations_report(const FormReport& rep, double tol_scale = 1.0);
CheckReport check_flatness(const FlatFrontData& ff, const DomainSpec& domain, double tol_scale = 1.0);
CheckReport check_form_relations(const FlatFrontData& ff, const DomainSpec& domain, double tol_scale = 1.0);

CheckReport check_hyperboloid(const FlatFrontData& ff, std::span<const Cplx> pts, double tol_scale = 1.0);
CheckReport check_symmetry(const FlatFrontData& ff, std::span<const Cplx> pts, double tol_scale = 1.0);
CheckReport check_envelope_roundtrip(const FlatFrontData& ff, std::span<const Cplx> pts, double tol_scale = 1.0);
CheckReport check_periods(const RibaucourPair& pair, std::span<const LoopSpec> loops, double tol_scale = 1.0);
CheckReport check_periods(const FlatFrontData& ff, std::span<const LoopSpec> loops, double tol_scale = 1.0);

/// Every check above for a pair and its flat front, ordered by name. Pointwise checks sample
/// the region; finite-difference checks run on the domain grid.
std::vector<CheckReport> run_suite(const RibaucourPair& pair, std::span<const LoopSpec> loops,
                                   const SampleRegion& region, const DomainSpec& domain,
                                   const VerifyOptions& opts = {});

nlohmann::json reports_json(const std::vector<CheckReport>& reports);

}  // namespace ribfront
