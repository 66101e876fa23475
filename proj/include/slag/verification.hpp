#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slag/momentmap_slag.hpp"
#include "slag/symmetric_pairs.hpp"

namespace slag::verify {

using geometry::Complex;

/** @brief Tolerances for the property harness, all strictly positive. */
struct Tolerances {
  double moment = 1e-9;       ///< moment-level membership
  double im_omega = 1e-8;     ///< volume-form phase alignment
  double omega = 1e-5;        ///< finite-difference symplectic checks
  double equivariance = 1e-9; ///< group-action transport checks
};

/**
 * @brief Configuration shared by all checks.  Every check is a pure
 * function of (case, config), so fixed seeds give identical reports.
 */
struct SuiteConfig {
  std::uint64_t seed = 2026;
  Tolerances tol;
  int n_samples = 8;   ///< random draws in the pointwise checks
  int n_points = 20;   ///< curve samples in the theorem suite
  int n_group = 10;    ///< random group elements in the theorem suite
  double fd_first = 1e-5;   ///< first-difference step
  double fd_second = 1e-4;  ///< second-difference step
  Complex tau0{0.0, 0.0};   ///< theorem-suite start; zero picks a default
  double step = 1e-2;       ///< profile integration step
  int max_steps = 400;      ///< profile integration budget
  double psi_offset = 0.0;  ///< deliberate check-phase error (control)
  double w_perturbation = 0.0;  ///< relative w noise at samples (control)

  /// @throws Error when a tolerance or step is nonpositive or a count < 1.
  void validate() const;
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Report {
  std::string suite;
  std::string case_name;
  std::string params;
  double psi = 0.0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool pass = false;
};

/** @brief Lowercase case tag, e.g. "aiii-aiii". */
std::string case_label(const pairs::SymmetricPairCase& c);

/** @brief Parameter string, e.g. "p=2,q=1" or "m=3"; empty when fixed. */
std::string params_label(const pairs::SymmetricPairCase& c);

/**
 * @brief Hamiltonian property of the moment components: at random generic
 * points and random generators X, Y the directional derivative of
 * mu_X = alpha(X*) along Y* must match omega(X*, Y*).
 *
 * Checks: "hamiltonian-fd" (finite-difference match, refined once by
 * halving the step when within 10x of tolerance), "zero-element" (X = 0
 * gives exactly zero on both sides), "linearity-in-generator".
 */
Report check_hamiltonian(const pairs::SymmetricPairCase& c,
                         const SuiteConfig& cfg);

/**
 * @brief Equivariance of the moment components and the bundle chart map.
 *
 * Checks: "identity" (k = 1 is exact), "moment-equivariance"
 * (mu(k.p) paired with Ad(k)X equals mu(p) paired with X, where Ad(k)X is
 * re-expressed in the Lie-algebra basis), "chart-intertwine" (the bundle
 * map commutes with the linear action on fibers), and
 * "non-group-control" (the same identity with a generic unitary outside
 * the represented group must break; its pass flag records that it did).
 */
Report check_action_equivariance(const pairs::SymmetricPairCase& c,
                                 const SuiteConfig& cfg);

/**
 * @brief End-to-end suite: orbit-rank screening of the start angle,
 * profile integration, special-Lagrangian verification on the curve, and
 * an orbit-rank sweep over sampled curve points.
 *
 * A rank-deficient start angle short-circuits into a failing
 * "orbit-rank" check (degenerate orbit); integration failures are
 * reported as a failing "profile-start" check.  Never throws for valid
 * configs: the report carries failures.
 */
Report run_theorem_suite(const pairs::SymmetricPairCase& c, double psi,
                         const SuiteConfig& cfg);

/**
 * @brief Serialize as JSON: {suite, case, params, psi, seed,
 * checks: [{name, residual, tol, pass}], pass}.  Byte-stable for a fixed
 * report.
 */
void write_json(const Report& rep, std::ostream& os);

}  // namespace slag::verify
