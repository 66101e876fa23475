#pragma once

#include <string>
#include <vector>

#include "slag/complex_geometry.hpp"

namespace slag::pairs {

using geometry::Complex;
using geometry::CVector;
using geometry::ProjectivePair;
using geometry::TangentRep;
using CMatrix = Eigen::MatrixXcd;

/** @brief The four implemented isotropy cases. */
enum class CaseKind { AIIIAIII, AIII, BDI, DIII };

/**
 * @brief One cohomogeneity-one case: ambient matrix model dimensions, the
 * identification of the -1 eigenspace with C^{n+1}, and the admissible strip.
 *
 * Construct through the factory functions below; they validate the parameter
 * ranges (AIII+AIII: p >= q >= 1, p > 1; AIII and BDI: m >= 3).
 */
struct SymmetricPairCase {
  CaseKind kind;
  int p = 0;  // AIII+AIII only
  int q = 0;  // AIII+AIII only
  int m = 0;  // AIII / BDI only

  /** @brief Complex dimension n+1 of the coordinate space of the slice rep. */
  int ncoord() const;
  /** @brief Base complex dimension n of each projective factor. */
  int n() const { return ncoord() - 1; }
  /** @brief Side length of the ambient matrices. */
  int ambient_rows() const;
  /** @brief Dimension of the isotropy algebra. */
  int dim_k() const;
  /** @brief Half-width of the admissible strip for Re(tau). */
  double strip_halfwidth() const;
  /** @brief Spacing of the degenerate angle lattice (equals the half-width). */
  double lattice_spacing() const { return strip_halfwidth(); }
  /** @brief CLI-facing case label: aiii-aiii | aiii | bdi | diii. */
  std::string label() const;
};

SymmetricPairCase aiii_aiii_case(int p, int q);
SymmetricPairCase aiii_case(int m);
SymmetricPairCase bdi_case(int m);
SymmetricPairCase diii_case();

/**
 * @brief A named isotropy-algebra basis element.
 *
 * `matrix` is the ambient skew representative; `induced` is the operator of
 * its adjoint action on the coordinate space C^{n+1}, computed mechanically as
 * project_p of the commutator with embed_p of each coordinate direction.
 */
struct LieAlgebraElement {
  std::string label;
  CMatrix matrix;
  CMatrix induced;
};

/**
 * @brief Coordinates-to-matrix identification of the slice representation.
 * @throws DimensionMismatch when v does not have length n+1.
 */
CMatrix embed_p(const SymmetricPairCase& c, const CVector& v);

/**
 * @brief Inverse of embed_p.
 * @throws NotInP when X is not (numerically) in the image of embed_p.
 */
CVector project_p(const SymmetricPairCase& c, const CMatrix& X);

/**
 * @brief Operator of ad(K) on the coordinate space C^{n+1}, one column per
 * coordinate direction: project_p(K * embed_p(e_j) - embed_p(e_j) * K).
 */
CMatrix induced_operator(const SymmetricPairCase& c, const CMatrix& K);

/**
 * @brief The full named basis of the isotropy algebra, central elements
 * included, with induced operators attached. Length equals dim_k().
 */
std::vector<LieAlgebraElement> basis_k(const SymmetricPairCase& c);

/** @brief Locate a basis element by label. Throws Error when absent. */
const LieAlgebraElement& find_element(const std::vector<LieAlgebraElement>& basis,
                                      const std::string& label);

/** @brief Unit slice vector at angle theta (the real-axis trace of sigma). */
CVector slice_point(const SymmetricPairCase& c, double theta);

/**
 * @brief The profile pair sigma(tau) for complex tau in the open strip
 * 0 < |Re tau| < strip half-width.
 * @throws OutOfStrip
 */
ProjectivePair sigma_curve(const SymmetricPairCase& c, Complex tau);

/** @brief d/dtau of sigma_curve as a TangentRep at sigma_curve(tau). */
TangentRep sigma_velocity(const SymmetricPairCase& c, Complex tau);

/**
 * @brief Fundamental vector of the action at p: (induced z ; conj(induced) w).
 * @throws DimensionMismatch
 */
TangentRep fundamental_vector(const LieAlgebraElement& X, const ProjectivePair& p);

/**
 * @brief Group element of the slice representation: exp of an induced
 * operator (unitary on C^{n+1}).
 */
CMatrix rho_exp(const CMatrix& induced_op);

/** @brief Transport a point by k: (U z ; conj(U) w). */
ProjectivePair act(const CMatrix& U, const ProjectivePair& p);

/**
 * @brief Real rank of the span of all basis fundamental vectors at p, after
 * pushing to the fallback chart (gauge directions die there). Equals 2n-1
 * exactly when the orbit through p is a hypersurface of the level set.
 */
int orbit_tangent_rank(const SymmetricPairCase& c, const ProjectivePair& p);

}  // namespace slag::pairs
