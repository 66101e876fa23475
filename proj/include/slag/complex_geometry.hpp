#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "slag/errors.hpp"

namespace slag::geometry {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

/** @brief Relative epsilon for |B| degeneracy and chart pivots. */
inline constexpr double kPivotEps = 1e-12;

/**
 * @brief A point of M inside CP^n x CP^n, held in homogeneous coordinates.
 *
 * The pair (z; w) is kept as two nonzero complex (n+1)-vectors. Rescaling
 * z -> lambda z, w -> nu w represents the same point (gauge freedom). The
 * pairing B(z;w) = sum_j z_j w_j must be nonzero for the point to lie on M;
 * that is checked lazily by eval_B so that deliberately degenerate pairs can
 * still be constructed for negative tests.
 */
struct ProjectivePair {
  CVector z;
  CVector w;

  ProjectivePair(CVector z_in, CVector w_in);

  /** @brief Complex dimension n of each projective factor. */
  int n() const { return static_cast<int>(z.size()) - 1; }
};

/**
 * @brief A tangent vector at a ProjectivePair in homogeneous velocities.
 *
 * Two representatives differing by the gauge directions (lambda z, nu w)
 * describe the same tangent vector of CP^n x CP^n; push_tangent_to_chart
 * annihilates those directions exactly.
 */
struct TangentRep {
  ProjectivePair base;
  CVector dz;
  CVector dw;

  TangentRep(ProjectivePair base_in, CVector dz_in, CVector dw_in);
};

/** @brief A(z;w) = |z|^2 |w|^2 = sum_{j,k} |z_j w_k|^2. Strictly positive. */
double eval_A(const ProjectivePair& p);

/**
 * @brief B(z;w) = sum_j z_j w_j (complex bilinear, no conjugation).
 * @throws DegeneratePoint when |B| < kPivotEps * |z| |w|.
 */
Complex eval_B(const ProjectivePair& p);

/**
 * @brief N(z;w) = A / |B|^2. Scale-invariant; N >= 1 with equality exactly
 * on the zero section (w proportional to conj(z)).
 */
double eval_N(const ProjectivePair& p);

/** @brief sinh(mu)/mu with a series branch below mu = 1e-4. */
double sinhc(double mu);

/**
 * @brief The bundle chart map: (zeta, xi) with xi . conj(zeta) = 0 goes to
 * ((cosh mu) zeta + i (sinh mu / mu) xi ; (cosh mu) conj(zeta) + i (sinh mu / mu) conj(xi))
 * where mu = |xi| / |zeta|. xi = 0 lands on the zero section (z; conj(z)).
 *
 * @throws NotInBundle when |xi . conj(zeta)| > tol * |xi| |zeta|.
 */
ProjectivePair phi_hat(const CVector& zeta, const CVector& xi, double tol = 1e-10);

/**
 * @brief Deterministic chart fallback: the index maximizing min(|z_j|, |w_j|),
 * so both pivots are simultaneously usable.
 */
int select_chart(const ProjectivePair& p);

/**
 * @brief Inhomogeneous coordinates in the given chart: the n ratios z_j / z_c
 * (j != c, ascending) and likewise for w. Gauge-invariant.
 * @throws ChartSingular when either pivot is below kPivotEps * norm.
 */
std::pair<CVector, CVector> to_inhomogeneous(const ProjectivePair& p, int chart);

/**
 * @brief Chain rule for the chart map: dz~_j = (z_c dz_j - z_j dz_c) / z_c^2
 * and the analogous dw~. Gauge directions (lambda z, nu w) map to zero.
 * @throws ChartSingular
 */
std::pair<CVector, CVector> push_tangent_to_chart(const TangentRep& v, int chart);

}  // namespace slag::geometry
