#pragma once

#include "bitime/multifunction.hpp"
#include "bitime/varcalc.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bitime::theorems {

using varcalc::CandidateCovector;

/// A system under test: F for the Hamiltonian and a source of T.
struct System {
  std::string name;
  vfield::Multifunction F;
  std::shared_ptr<const minitime::ValueSource> T;
};

struct Tolerances {
  double eps = 0.05;
  double delta = 0.1;
  /// Tolerance on Hamiltonian values; 0.02 for exact T, 0.1 for grid T.
  double tol_h = 0.02;
  double rank_tol = 0.25;
  std::size_t samples = 2000;
  std::size_t directions = 4096;
  double fd_step = 1e-4;
  std::uint64_t seed = 1;

  /// Defaults with tol_h matched to the source.
  static Tolerances for_source(const minitime::ValueSource& T);
};

struct Subcheck {
  std::string name;
  bool pass = true;
  /// Nothing to test (empty panel, ambiguous band); counts as a pass.
  bool vacuous = false;
  std::string detail;
};

struct TheoremReport {
  std::string theorem_id;
  std::string system;
  Vector alpha;
  Vector beta;
  std::optional<double> level;
  Tolerances tol;
  std::string panel;
  std::vector<Subcheck> subchecks;
  /// The statement had nothing to bite on at this point.
  bool vacuous = false;
  /// Candidates accepted by one side of a characterization and rejected by
  /// the other.
  std::size_t inconsistencies = 0;
  std::optional<int> kappa;
  std::optional<int> ell;

  bool overall() const;
  std::size_t failures() const;
};

/// Known theorem ids, in report order.
const std::vector<std::string>& theorem_ids();
bool is_theorem_id(const std::string& id);

/// Subgradients at (alpha, alpha): (zeta, -zeta) passes iff h(alpha,zeta) >= -1.
/// Candidates within tol_h of the threshold are ambiguous and skipped.
/// Candidates with theta perturbed away from -zeta must fail.
TheoremReport verify_diagonal_sub(const System& sys, const Vector& alpha, const std::vector<Vector>& zetas,
                                  const Tolerances& tol);

/// Every normal generator of R(r) at (alpha, beta) has
/// h(alpha,zeta) = h(beta,-theta) <= 0.
TheoremReport verify_eqH(const System& sys, const Vector& alpha, const Vector& beta, const Tolerances& tol);

/// Subgradients at (alpha, beta) are the normals of R(r) with both
/// Hamiltonians equal to -1. Panel: the finite-difference gradient and the
/// normal generators rescaled to h(alpha,zeta) = -1. Generators with
/// h >= -tol_h are routed to the singular test.
TheoremReport verify_PN(const System& sys, const Vector& alpha, const Vector& beta, const Tolerances& tol);

/// Singular subgradients at (alpha, alpha): (zeta, -zeta) passes iff
/// h(alpha,zeta) >= 0 (within tol_h); perturbed candidates must fail.
TheoremReport verify_diagonal_singular(const System& sys, const Vector& alpha, const std::vector<Vector>& zetas,
                                       const Tolerances& tol);

/// Singular subgradients at (alpha, beta) are the normals of R(r) with both
/// Hamiltonians equal to 0. Panel: `analytic` plus normal generators with
/// |h| <= tol_h. Vacuous when the panel has no nonzero candidate.
TheoremReport verify_HPN(const System& sys, const Vector& alpha, const Vector& beta,
                         const std::vector<CandidateCovector>& analytic, const Tolerances& tol);

/// Returns the RE_i and RE_ii reports.
std::vector<TheoremReport> verify_RE(const System& sys, const Vector& alpha, const Vector& beta,
                                     const Tolerances& tol);

/// Returns the RE1 and ZN reports. `level`, when given, replaces
/// r = T(alpha,beta); a level above T makes (alpha,beta) an interior point.
std::vector<TheoremReport> verify_RE1_ZN(const System& sys, const Vector& alpha, const Vector& beta,
                                         const Tolerances& tol, std::optional<double> level = std::nullopt);

/// kappa = dim of the sub-level normal cone, ell = dim of the epigraph
/// normal cone; requires alpha != beta and 0 < T < inf.
TheoremReport verify_dim(const System& sys, const Vector& alpha, const Vector& beta, const Tolerances& tol);

/// Candidate panels used when none is given.
std::vector<Vector> default_diagonal_panel(std::size_t dim, double tol_h);
std::vector<Vector> unit_panel(std::size_t dim, std::size_t count);

nlohmann::json to_json(const TheoremReport& r);
/// Fixed-width table, one row per report.
std::string summary_table(const std::vector<TheoremReport>& reports);

/// Writes +inf as "inf" so the output stays valid JSON.
nlohmann::json number_json(double v);
nlohmann::json vector_json(const Vector& v);

}  // namespace bitime::theorems
