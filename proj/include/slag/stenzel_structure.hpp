#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "slag/complex_geometry.hpp"
#include "slag/errors.hpp"
#include "slag/symmetric_pairs.hpp"

namespace slag::stenzel {

using geometry::Complex;
using geometry::CVector;
using geometry::ProjectivePair;
using geometry::TangentRep;

/// Which first-order equation the radial potential solver integrates.
///
/// AsPrinted:
///   (2N) N^{n-1} h^{2n} + 2(N-1) N^n h^{2n} h' = 1,   h(1) = 2^{-1/(2n)}.
/// DeterminantCompatible:
///   (2N-1) N^{n-1} h^{2n} + 2(N-1) N^n h^{2n-1} h' = 1,   h(1) = 1.
///
/// The two differ in the coefficient of the algebraic term and in one power
/// of h on the derivative term.  Only the second variant makes the complex
/// Hessian identity det(ddbar f) = |B|^{-2(n+1)} hold, so consumers that
/// feed check_cy_condition should solve with DeterminantCompatible; the
/// first variant is kept as the default transcription.
enum class OdeForm { AsPrinted, DeterminantCompatible };

/// @brief Tabulated radial potential: h = f'(N) and h' = f''(N) on a grid
/// covering [1, N_max].
///
/// Between nodes h is evaluated by cubic Hermite interpolation (values plus
/// stored derivatives), which makes h continuously differentiable and its
/// antiderivative f twice continuously differentiable.  f is normalized by
/// f(1) = 0; only derivatives of f enter any downstream formula.
struct PotentialTable {
  int n = 0;
  OdeForm form = OdeForm::AsPrinted;
  std::vector<double> grid;    ///< strictly increasing, grid.front() == 1
  std::vector<double> h;       ///< f'(N) at grid nodes, positive
  std::vector<double> hprime;  ///< f''(N) at grid nodes
  std::vector<double> fcum;    ///< cumulative integral of h at grid nodes

  /// @brief Interpolated f'(N).  Throws OutOfTable outside [grid.front(),
  /// grid.back()] beyond rounding slack.
  double h_at(double N) const;

  /// @brief Interpolated f''(N) (derivative of the Hermite interpolant).
  double hprime_at(double N) const;

  /// @brief f(N) with f(1) = 0, by exact integration of the interpolant.
  double f_at(double N) const;
};

/// @brief Calibration angle, reduced to [0, 2*pi).
struct CalibrationPhase {
  double psi = 0.0;
  CalibrationPhase() = default;
  explicit CalibrationPhase(double angle);
};

/// @brief Integrate the radial potential equation from the regular seed at
/// N = 1 out to N_max with a fixed-step classical Runge-Kutta scheme.
///
/// The seed value h(1) is forced by finiteness of h' at the N = 1
/// singularity; integration starts at N = 1 + 1e-6 with a first-order
/// series step.  The result is audited by re-integrating at half step:
/// if the two tables disagree by more than 1e-9 anywhere, StepTooLarge is
/// thrown.  NonPositive is thrown if h reaches zero.
///
/// @param n     base complex dimension, n >= 2
/// @param N_max right end of the table, > 1
/// @param step  nominal grid spacing
PotentialTable solve_potential(int n, double N_max, double step,
                               OdeForm form = OdeForm::AsPrinted);

/// @brief Algebraic residual of the chosen equation at one sample,
/// |lhs(N, h, h') - 1|.  Exposed for audits and reporting.
double ode_residual(int n, OdeForm form, double N, double h, double hprime);

/// @brief Tautological 1-form evaluated on a tangent representative, with
/// the radial scalar frozen to 1.
///
/// alpha(v) = Im( sum_j dN/dzbar_j conj(dz_j) + dN/dwbar_j conj(dw_j) )
/// where N = |z|^2 |w|^2 / |B|^2.  The value is gauge-blind in the
/// directions (i z, 0) and (0, i w) and scale-covariant in the radial
/// ones; zero-set statements are unaffected by dropping the positive
/// factor f'(N).  Throws DegeneratePoint when B is numerically zero.
double liouville(const TangentRep& v);

/// @brief Tautological 1-form scaled by the interpolated factor f'(N).
double liouville(const TangentRep& v, const PotentialTable& pt);

/// Options shared by the 2-form evaluators.
struct TwoFormOptions {
  double fd_step = 1e-5;                  ///< step for directional derivatives
  const PotentialTable* table = nullptr;  ///< scale alpha by f' when present
};

/// @brief Symplectic 2-form on a pair of fundamental vector fields,
/// omega(X*, Y*) = -(X* alpha(Y*) - Y* alpha(X*) - alpha([X*, Y*])).
///
/// The two directional derivatives are centered finite differences along
/// the one-parameter linear flows of X and Y; the bracket term is exact,
/// using [X*, Y*] = -[X, Y]* and the homomorphism property of the induced
/// operators.
double kahler_two_form(const pairs::LieAlgebraElement& X,
                       const pairs::LieAlgebraElement& Y,
                       const ProjectivePair& p, const TwoFormOptions& opt = {});

/// One-parameter family of tangent representatives along a coordinate line
/// of a two-parameter surface through a point.
using SurfaceTangent = std::function<TangentRep(double)>;

/// @brief Independent 2-form evaluation from a parametrized surface.
///
/// For a surface phi(t, u) with phi(0,0) = p, pass du_at_t(t) = d/du
/// phi(t, 0) and dt_at_u(u) = d/dt phi(0, u).  Returns
/// omega(d/dt, d/du) = -[ d/dt alpha(du) - d/du alpha(dt) ] at (0, 0),
/// both outer derivatives taken as centered differences.  This touches no
/// Lie-algebra structure and serves as a cross-check for kahler_two_form.
double two_form_from_surface(const SurfaceTangent& du_at_t,
                             const SurfaceTangent& dt_at_u,
                             const TwoFormOptions& opt = {});

/// @brief Holomorphic volume form evaluated on a frame of 2n tangent
/// representatives sharing one base point.
///
/// Pushes every vector to the affine chart, assembles the 2n x 2n complex
/// matrix of (dz-chart, dw-chart) components, and returns
/// B_chart^{-(n+1)} det, where B_chart = B / (z_c w_c) is the pairing in
/// chart normalization.  Throws FrameSizeMismatch unless exactly 2n
/// vectors are supplied and ChartSingular when the chart is invalid.
Complex holomorphic_volume(const std::vector<TangentRep>& frame, int chart);

/// @brief Relative defect of the Monge-Ampere identity
/// det( ddbar f(N) ) = |B_chart|^{-2(n+1)} at p.
///
/// The complex Hessian of f(N) in chart coordinates is built from second
/// centered finite differences of the scalar function; the determinant is
/// compared with the closed-form right side.  Meaningful accuracy requires
/// a table solved with OdeForm::DeterminantCompatible.
/// @param fd_step real coordinate perturbation, default 1e-4
double check_cy_condition(const ProjectivePair& p, const PotentialTable& pt,
                          double fd_step = 1e-4);

/// @brief Write a table as CSV with header `N,h,hprime`, one row per node,
/// full double precision.
void write_csv(const PotentialTable& pt, std::ostream& os);

}  // namespace slag::stenzel
