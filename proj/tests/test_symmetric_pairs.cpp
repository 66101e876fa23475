#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "slag/rng.hpp"
#include "slag/symmetric_pairs.hpp"

using namespace slag;
using namespace slag::geometry;
using namespace slag::pairs;

namespace {

std::vector<SymmetricPairCase> all_cases() {
  return {aiii_aiii_case(2, 1), aiii_aiii_case(3, 2), aiii_case(3),
          bdi_case(3),          bdi_case(4),          diii_case()};
}

CVector random_coords(Rng& rng, int len) {
  CVector v(len);
  for (int j = 0; j < len; ++j) v[j] = Complex(rng.gaussian(), rng.gaussian());
  return v;
}

ProjectivePair zero_section_pair(const SymmetricPairCase& c, double theta) {
  const CVector z = slice_point(c, theta);
  return ProjectivePair(z, z.conjugate());
}

}  // namespace

TEST_CASE("factories validate parameter ranges") {
  CHECK_THROWS_AS(aiii_aiii_case(1, 1), Error);
  CHECK_THROWS_AS(aiii_aiii_case(2, 3), Error);
  CHECK_THROWS_AS(aiii_aiii_case(2, 0), Error);
  CHECK_THROWS_AS(aiii_case(2), Error);
  CHECK_THROWS_AS(bdi_case(2), Error);
  CHECK(aiii_aiii_case(2, 1).ncoord() == 3);
  CHECK(aiii_case(3).ncoord() == 6);
  CHECK(bdi_case(4).ncoord() == 4);
  CHECK(diii_case().ncoord() == 10);
  CHECK(diii_case().n() == 9);
  CHECK(aiii_aiii_case(2, 1).strip_halfwidth() == doctest::Approx(M_PI / 2));
  CHECK(bdi_case(3).strip_halfwidth() == doctest::Approx(M_PI / 4));
}

TEST_CASE("embed_p places the first coordinate of the orthogonal model") {
  const auto c = bdi_case(3);
  CVector v = CVector::Zero(3);
  v[0] = 1.0;
  const CMatrix M = embed_p(c, v);
  CHECK(std::abs(M(0, 2) - Complex(1.0)) == 0.0);
  CHECK(std::abs(M(2, 0) - Complex(-1.0)) == 0.0);
  CHECK(M.norm() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("project_p inverts embed_p") {
  Rng rng(31);
  for (const auto& c : all_cases()) {
    for (int trial = 0; trial < 5; ++trial) {
      const CVector v = random_coords(rng, c.ncoord());
      const CVector back = project_p(c, embed_p(c, v));
      CHECK((back - v).norm() < 1e-14 * v.norm());
    }
  }
}

TEST_CASE("embed_p intertwines i with the central commutator") {
  Rng rng(32);
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    const CMatrix& J0 = find_element(basis, "J0").matrix;
    const CVector v = random_coords(rng, c.ncoord());
    const CMatrix lhs = embed_p(c, Complex(0.0, 1.0) * v);
    const CMatrix rhs = J0 * embed_p(c, v) - embed_p(c, v) * J0;
    CHECK((lhs - rhs).norm() < 1e-12 * lhs.norm());
  }
}

TEST_CASE("project_p rejects isotropy matrices and accepts zero") {
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    CHECK_THROWS_AS(project_p(c, basis.front().matrix), NotInP);
    const CVector zero =
        project_p(c, CMatrix::Zero(c.ambient_rows(), c.ambient_rows()));
    CHECK(zero.norm() == 0.0);
  }
}

TEST_CASE("basis cardinalities match the dimension formulas") {
  CHECK(basis_k(aiii_aiii_case(2, 1)).size() == 5);
  CHECK(basis_k(aiii_aiii_case(3, 2)).size() == 13);
  CHECK(basis_k(aiii_case(3)).size() == 12);
  CHECK(basis_k(bdi_case(3)).size() == 4);
  CHECK(basis_k(bdi_case(4)).size() == 7);
  CHECK(basis_k(diii_case()).size() == 25);
  for (const auto& c : all_cases()) {
    CHECK(static_cast<int>(basis_k(c).size()) == c.dim_k());
  }
}

TEST_CASE("basis matrices are linearly independent") {
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    const int rows = c.ambient_rows();
    Eigen::MatrixXd mat(2 * rows * rows, static_cast<int>(basis.size()));
    for (int col = 0; col < static_cast<int>(basis.size()); ++col) {
      int r = 0;
      for (int a = 0; a < rows; ++a) {
        for (int b = 0; b < rows; ++b) {
          mat(r++, col) = basis[col].matrix(a, b).real();
          mat(r++, col) = basis[col].matrix(a, b).imag();
        }
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
    const auto& s = svd.singularValues();
    CHECK(s[s.size() - 1] > 1e-10 * s[0]);
  }
}

TEST_CASE("induced operators are complex-linear and skew-Hermitian") {
  Rng rng(33);
  for (const auto& c : all_cases()) {
    for (const auto& e : basis_k(c)) {
      CHECK((e.induced + e.induced.adjoint()).norm() < 1e-12);
      // complex linearity: the mechanically built matrix must reproduce the
      // commutator action on an i-rotated random vector
      const CVector v = random_coords(rng, c.ncoord());
      const CMatrix P = embed_p(c, Complex(0.0, 1.0) * v);
      const CVector lhs = project_p(c, e.matrix * P - P * e.matrix);
      const CVector rhs = Complex(0.0, 1.0) * (e.induced * v);
      CHECK((lhs - rhs).norm() < 1e-12 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("induced operators are traceless away from the center") {
  for (const auto& c : all_cases()) {
    for (const auto& e : basis_k(c)) {
      if (e.label == "J0" || e.label == "J1") continue;
      CHECK(std::abs(e.induced.trace()) < 1e-12);
    }
  }
}

TEST_CASE("central element acts as i times the identity") {
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    const CMatrix& op = find_element(basis, "J0").induced;
    const CMatrix expect =
        Complex(0.0, 1.0) * CMatrix::Identity(c.ncoord(), c.ncoord());
    CHECK((op - expect).norm() < 1e-12);
  }
}

TEST_CASE("second central trace for the double-block case") {
  for (const auto& c : {aiii_aiii_case(2, 1), aiii_aiii_case(3, 2)}) {
    const auto basis = basis_k(c);
    const Complex tr = find_element(basis, "J1").induced.trace();
    CHECK(std::abs(tr - Complex(0.0, c.p - c.q)) < 1e-12);
  }
}

TEST_CASE("commutators of basis matrices stay in the isotropy algebra") {
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    const int rows = c.ambient_rows();
    const int nb = static_cast<int>(basis.size());
    Eigen::MatrixXd span(2 * rows * rows, nb);
    for (int col = 0; col < nb; ++col) {
      int r = 0;
      for (int a = 0; a < rows; ++a) {
        for (int b = 0; b < rows; ++b) {
          span(r++, col) = basis[col].matrix(a, b).real();
          span(r++, col) = basis[col].matrix(a, b).imag();
        }
      }
    }
    const auto solver = span.colPivHouseholderQr();
    Rng rng(34);
    for (int trial = 0; trial < 8; ++trial) {
      const int i = static_cast<int>(rng.uniform(0.0, nb));
      const int j = static_cast<int>(rng.uniform(0.0, nb));
      const CMatrix bracket =
          basis[i].matrix * basis[j].matrix - basis[j].matrix * basis[i].matrix;
      Eigen::VectorXd target(2 * rows * rows);
      int r = 0;
      for (int a = 0; a < rows; ++a) {
        for (int b = 0; b < rows; ++b) {
          target(r++) = bracket(a, b).real();
          target(r++) = bracket(a, b).imag();
        }
      }
      const Eigen::VectorXd coeffs = solver.solve(target);
      CHECK((span * coeffs - target).norm() < 1e-12 * std::max(1.0, target.norm()));
    }
  }
}

TEST_CASE("isotropy bracket with the coordinate space stays in it") {
  Rng rng(35);
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    const CVector v = random_coords(rng, c.ncoord());
    const CMatrix P = embed_p(c, v);
    for (const auto& e : basis) {
      const CMatrix bracket = e.matrix * P - P * e.matrix;
      CHECK_NOTHROW(project_p(c, bracket));
    }
  }
}

TEST_CASE("slice generators commute exactly") {
  for (const auto& c : all_cases()) {
    CVector u = CVector::Zero(c.ncoord()), v = CVector::Zero(c.ncoord());
    switch (c.kind) {
      case CaseKind::AIIIAIII:
        u[0] = 1.0;
        v[c.p] = 1.0;
        break;
      case CaseKind::AIII:
        u[0] = 1.0;
        v[c.m + 1] = 1.0;
        break;
      case CaseKind::BDI:
        u[0] = 1.0;
        v[1] = Complex(0.0, 1.0);
        break;
      case CaseKind::DIII:
        u[0] = Complex(0.0, 1.0);
        v[7] = Complex(0.0, 1.0);
        break;
    }
    const CMatrix A = embed_p(c, u), B = embed_p(c, v);
    CHECK((A * B - B * A).norm() == 0.0);
  }
}

TEST_CASE("central element commutes with the whole basis") {
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    const CMatrix& J0 = find_element(basis, "J0").matrix;
    for (const auto& e : basis) {
      CHECK((J0 * e.matrix - e.matrix * J0).norm() < 1e-14);
    }
  }
}

TEST_CASE("slice_point values and normalization") {
  const auto bdi = bdi_case(3);
  const CVector s0 = slice_point(bdi, 0.0);
  CHECK(std::abs(s0[0] - Complex(1.0)) == 0.0);
  CHECK(std::abs(s0[1]) == 0.0);
  const auto aiii = aiii_case(3);
  const CVector s = slice_point(aiii, M_PI / 6);
  CHECK(std::abs(s[0] - std::cos(M_PI / 6)) < 1e-15);
  CHECK(std::abs(s[4] - std::sin(M_PI / 6)) < 1e-15);
  for (const auto& c : all_cases()) {
    for (double theta : {0.1, 0.4, 0.7}) {
      CHECK(slice_point(c, theta).norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("sigma_curve at real tau sits on the zero section") {
  for (const auto& c : all_cases()) {
    for (double t : {0.2, 0.5, 0.7 * c.strip_halfwidth()}) {
      const ProjectivePair p = sigma_curve(c, Complex(t, 0.0));
      CHECK((p.w - p.z.conjugate()).norm() < 1e-15);
      CHECK(eval_N(p) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("sigma_curve pairing equals one across the strip") {
  Rng rng(36);
  for (const auto& c : all_cases()) {
    for (int trial = 0; trial < 25; ++trial) {
      const Complex tau(rng.uniform(0.02, c.strip_halfwidth() - 0.02),
                        rng.uniform(-2.0, 2.0));
      const ProjectivePair p = sigma_curve(c, tau);
      CHECK(std::abs(eval_B(p) - Complex(1.0)) < 1e-10);
    }
  }
}

TEST_CASE("sigma_curve rejects tau outside the strip") {
  const auto c = bdi_case(3);
  CHECK_THROWS_AS(sigma_curve(c, Complex(0.0, 0.3)), OutOfStrip);
  CHECK_THROWS_AS(sigma_curve(c, Complex(M_PI / 4 + 0.01, 0.0)), OutOfStrip);
  CHECK_NOTHROW(sigma_curve(c, Complex(-0.3, 0.5)));
  const auto big = aiii_aiii_case(2, 1);
  CHECK_NOTHROW(sigma_curve(big, Complex(1.2, -0.4)));
  CHECK_THROWS_AS(sigma_curve(big, Complex(1.8, 0.0)), OutOfStrip);
}

TEST_CASE("sigma_velocity differentiates sigma_curve") {
  for (const auto& c : all_cases()) {
    const Complex tau(0.37, 0.21);
    const TangentRep v = sigma_velocity(c, tau);
    const double h = 1e-6;
    const ProjectivePair plus = sigma_curve(c, tau + h);
    const ProjectivePair minus = sigma_curve(c, tau - h);
    CHECK((v.dz - (plus.z - minus.z) / (2.0 * h)).norm() < 1e-9);
    CHECK((v.dw - (plus.w - minus.w) / (2.0 * h)).norm() < 1e-9);
  }
}

TEST_CASE("fundamental_vector of the center on the zero section") {
  Rng rng(37);
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    const auto& J0 = find_element(basis, "J0");
    const ProjectivePair p = zero_section_pair(c, 0.4);
    const TangentRep v = fundamental_vector(J0, p);
    CHECK((v.dz - Complex(0.0, 1.0) * p.z).norm() < 1e-12);
    CHECK((v.dw + Complex(0.0, 1.0) * p.w).norm() < 1e-12);
  }
}

TEST_CASE("induced_operator is linear in the ambient matrix") {
  const auto c = aiii_case(3);
  const auto basis = basis_k(c);
  const CMatrix& A = basis[1].matrix;
  const CMatrix& B = basis[5].matrix;
  const CMatrix combo = induced_operator(c, 0.7 * A - 1.3 * B);
  const CMatrix expect = 0.7 * basis[1].induced - 1.3 * basis[5].induced;
  CHECK((combo - expect).norm() < 1e-13);
}

TEST_CASE("fundamental_vector matches the exponential flow") {
  Rng rng(38);
  for (const auto& c : all_cases()) {
    const auto basis = basis_k(c);
    const auto& e = basis[static_cast<size_t>(rng.uniform(0.0, basis.size()))];
    const ProjectivePair p = sigma_curve(c, Complex(0.5, 0.2));
    const TangentRep v = fundamental_vector(e, p);
    const double t = 1e-6;
    const CMatrix Up = rho_exp(t * e.induced);
    const CMatrix Um = rho_exp(-t * e.induced);
    const CVector dz_fd = (Up * p.z - Um * p.z) / (2.0 * t);
    const CVector dw_fd = (Up.conjugate() * p.w - Um.conjugate() * p.w) / (2.0 * t);
    CHECK((v.dz - dz_fd).norm() < 1e-8);
    CHECK((v.dw - dw_fd).norm() < 1e-8);
  }
}

TEST_CASE("rho_exp of a skew operator is unitary") {
  const auto c = diii_case();
  const auto basis = basis_k(c);
  CMatrix gen = CMatrix::Zero(c.ncoord(), c.ncoord());
  Rng rng(39);
  for (const auto& e : basis) gen += rng.gaussian() * e.induced;
  const CMatrix U = rho_exp(gen);
  CHECK((U * U.adjoint() - CMatrix::Identity(10, 10)).norm() < 1e-12);
}

TEST_CASE("orbit rank is full away from the lattice") {
  Rng rng(40);
  for (const auto& c : all_cases()) {
    for (double frac : {1.0 / 3.0, 0.77}) {
      const double theta = frac * c.lattice_spacing();
      CHECK(orbit_tangent_rank(c, zero_section_pair(c, theta)) == 2 * c.n() - 1);
    }
  }
}

TEST_CASE("orbit rank drops on the degenerate lattice") {
  const std::vector<int> at_lattice = {0, 2, 7, 2, 4, 13};
  const std::vector<int> at_zero = {2, 4, 6, 2, 3, 12};
  const auto cases = all_cases();
  for (size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const int r_lattice =
        orbit_tangent_rank(c, zero_section_pair(c, c.lattice_spacing()));
    const int r_zero = orbit_tangent_rank(c, zero_section_pair(c, 0.0));
    CHECK(r_lattice == at_lattice[i]);
    CHECK(r_zero == at_zero[i]);
    CHECK(r_lattice < 2 * c.n() - 1);
    CHECK(r_zero < 2 * c.n() - 1);
  }
}

TEST_CASE("orbit rank is invariant under gauge rescaling") {
  const auto c = bdi_case(4);
  const ProjectivePair p = zero_section_pair(c, 0.3);
  const ProjectivePair q(Complex(3.0, -1.0) * p.z, Complex(0.1, 0.2) * p.w);
  CHECK(orbit_tangent_rank(c, p) == orbit_tangent_rank(c, q));
}
