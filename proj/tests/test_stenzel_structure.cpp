#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "slag/rng.hpp"
#include "slag/stenzel_structure.hpp"
#include "slag/symmetric_pairs.hpp"

using namespace slag;
using namespace slag::geometry;
using namespace slag::pairs;
using namespace slag::stenzel;

namespace {

ProjectivePair random_zero_section(Rng& rng, int len) {
  CVector z(len);
  for (int j = 0; j < len; ++j) z[j] = Complex(rng.gaussian(), rng.gaussian());
  return ProjectivePair(z, z.conjugate());
}

TangentRep random_tangent(Rng& rng, const ProjectivePair& p) {
  CVector dz(p.z.size()), dw(p.w.size());
  for (int j = 0; j < p.z.size(); ++j) {
    dz[j] = Complex(rng.gaussian(), rng.gaussian());
    dw[j] = Complex(rng.gaussian(), rng.gaussian());
  }
  return TangentRep{p, dz, dw};
}

double fd5(const std::vector<double>& v, size_t k, double step) {
  return (-v[k + 2] + 8.0 * v[k + 1] - 8.0 * v[k - 1] + v[k - 2]) /
         (12.0 * step);
}

}  // namespace

TEST_CASE("regular seeds of both potential equations") {
  const auto printed = solve_potential(2, 1.5, 1e-3);
  CHECK(printed.h[0] == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-15));
  CHECK(printed.h[0] == doctest::Approx(0.84089641525371454).epsilon(1e-14));
  const auto det = solve_potential(2, 1.5, 1e-3, OdeForm::DeterminantCompatible);
  CHECK(det.h[0] == 1.0);
  CHECK(det.hprime[0] == -0.5);
  for (int n : {2, 3, 5}) {
    const auto t = solve_potential(n, 1.2, 1e-3);
    CHECK(t.h[0] == doctest::Approx(std::pow(2.0, -1.0 / (2.0 * n))));
  }
}

TEST_CASE("stored second derivative matches finite differences of h") {
  for (OdeForm form : {OdeForm::AsPrinted, OdeForm::DeterminantCompatible}) {
    const auto pt = solve_potential(3, 4.0, 1e-3, form);
    // uniform interior: skip the series node and the two ends
    int checked = 0;
    for (size_t k = 6; k + 6 < pt.grid.size(); k += 97) {
      const double fd =
          (pt.h[k + 1] - pt.h[k - 1]) / (pt.grid[k + 1] - pt.grid[k - 1]);
      CHECK(std::abs(fd - pt.hprime[k]) < 1e-6);
      ++checked;
    }
    CHECK(checked > 20);
  }
}

TEST_CASE("equation residual vanishes on the solved table") {
  for (int n : {2, 3, 5}) {
    for (OdeForm form : {OdeForm::AsPrinted, OdeForm::DeterminantCompatible}) {
      const auto pt = solve_potential(n, 4.0, 1e-3, form);
      for (size_t k = 0; k < pt.grid.size(); k += 31) {
        CHECK(ode_residual(n, form, pt.grid[k], pt.h[k], pt.hprime[k]) < 1e-9);
      }
      // non-circular check: rebuild h' by wide finite differences on the
      // uniform part of the grid and re-evaluate the equation
      double worst = 0.0;
      for (size_t k = 6; k + 6 < pt.grid.size(); k += 13) {
        const double step = pt.grid[k + 1] - pt.grid[k];
        const double hp = fd5(pt.h, k, step);
        worst = std::max(worst,
                         ode_residual(n, form, pt.grid[k], pt.h[k], hp));
      }
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("potential stays positive and the table is monotone") {
  const auto pt = solve_potential(5, 4.0, 1e-3);
  for (size_t k = 0; k < pt.h.size(); ++k) CHECK(pt.h[k] > 0.0);
  for (size_t k = 0; k + 1 < pt.grid.size(); ++k) {
    CHECK(pt.grid[k + 1] > pt.grid[k]);
  }
}

TEST_CASE("interpolation reproduces nodes and refines consistently") {
  const auto coarse = solve_potential(2, 3.0, 1e-3);
  const auto shifted = solve_potential(2, 3.0, 7.3e-4);
  CHECK(coarse.h_at(coarse.grid[500]) == coarse.h[500]);
  Rng rng(50);
  for (int trial = 0; trial < 40; ++trial) {
    const double N = rng.uniform(1.0, 3.0);
    CHECK(std::abs(coarse.h_at(N) - shifted.h_at(N)) < 1e-9);
    CHECK(std::abs(coarse.f_at(N) - shifted.f_at(N)) < 1e-9);
  }
}

TEST_CASE("f_at integrates h_at") {
  const auto pt = solve_potential(3, 3.0, 1e-3);
  CHECK(pt.f_at(1.0) == 0.0);
  // Simpson oracle over [1, N]
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const double N = rng.uniform(1.1, 3.0);
    const int panels = 4000;
    const double w = (N - 1.0) / panels;
    double acc = pt.h_at(1.0) + pt.h_at(N);
    for (int j = 1; j < panels; ++j) {
      acc += (j % 2 == 1 ? 4.0 : 2.0) * pt.h_at(1.0 + j * w);
    }
    acc *= w / 3.0;
    CHECK(std::abs(pt.f_at(N) - acc) < 1e-10);
  }
  // derivative of f is h
  for (double N : {1.3, 2.1, 2.8}) {
    const double fd = (pt.f_at(N + 1e-6) - pt.f_at(N - 1e-6)) / 2e-6;
    CHECK(std::abs(fd - pt.h_at(N)) < 1e-9);
  }
}

TEST_CASE("solver rejects bad requests and out-of-range lookups") {
  CHECK_THROWS_AS(solve_potential(1, 4.0, 1e-3), Error);
  CHECK_THROWS_AS(solve_potential(2, 0.9, 1e-3), Error);
  CHECK_THROWS_AS(solve_potential(2, 4.0, 1.5), StepTooLarge);
  const auto pt = solve_potential(2, 4.0, 1e-3);
  CHECK_THROWS_AS(pt.h_at(0.5), OutOfTable);
  CHECK_THROWS_AS(pt.h_at(4.5), OutOfTable);
  CHECK_THROWS_AS(pt.f_at(4.0 + 1e-6), OutOfTable);
  CHECK_NOTHROW(pt.h_at(4.0));
  CHECK_NOTHROW(pt.h_at(1.0));
}

TEST_CASE("phase constructor reduces modulo a full turn") {
  CHECK(CalibrationPhase(0.3).psi == doctest::Approx(0.3));
  CHECK(CalibrationPhase(-0.3).psi == doctest::Approx(2.0 * M_PI - 0.3));
  CHECK(CalibrationPhase(7.0).psi == doctest::Approx(7.0 - 2.0 * M_PI));
}

TEST_CASE("tautological form kills scalar directions") {
  Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectivePair p = random_zero_section(rng, 4);
    const Complex lam(rng.gaussian(), rng.gaussian());
    const Complex nu(rng.gaussian(), rng.gaussian());
    const TangentRep v{p, lam * p.z, nu * p.w};
    CHECK(std::abs(liouville(v)) < 1e-12);
  }
  // also at points far from the zero section
  const auto c = aiii_case(3);
  const ProjectivePair q = sigma_curve(c, Complex(0.4, 0.9));
  const TangentRep gauge{q, Complex(0.0, 1.0) * q.z, CVector::Zero(q.z.size())};
  CHECK(std::abs(liouville(gauge)) < 1e-12);
}

TEST_CASE("tautological form vanishes on the central field at the zero section") {
  for (const auto& c : {aiii_aiii_case(2, 1), bdi_case(4)}) {
    const auto basis = basis_k(c);
    const auto& J0 = find_element(basis, "J0");
    const ProjectivePair p(slice_point(c, 0.35),
                           slice_point(c, 0.35).conjugate());
    CHECK(std::abs(liouville(fundamental_vector(J0, p))) < 1e-14);
  }
}

TEST_CASE("tautological form is real-linear in the vector") {
  Rng rng(53);
  const ProjectivePair p = random_zero_section(rng, 5);
  const TangentRep v1 = random_tangent(rng, p);
  const TangentRep v2 = random_tangent(rng, p);
  const double a = 1.7, b = -0.4;
  const TangentRep combo{p, a * v1.dz + b * v2.dz, a * v1.dw + b * v2.dw};
  CHECK(liouville(combo) ==
        doctest::Approx(a * liouville(v1) + b * liouville(v2)).epsilon(1e-12));
}

TEST_CASE("scaled mode multiplies by the interpolated factor") {
  const auto pt = solve_potential(2, 10.0, 1e-3);
  const auto c = aiii_aiii_case(2, 1);
  const ProjectivePair p = sigma_curve(c, Complex(0.6, 0.5));
  Rng rng(54);
  const TangentRep v = random_tangent(rng, p);
  const double unit = liouville(v);
  const double scaled = liouville(v, pt);
  CHECK(scaled == doctest::Approx(unit * pt.h_at(eval_N(p))).epsilon(1e-13));
}

TEST_CASE("tautological form is invariant under the group flows") {
  Rng rng(55);
  const auto pt = solve_potential(3, 12.0, 1e-3);
  for (const auto& c : {aiii_aiii_case(3, 2), bdi_case(3), diii_case()}) {
    const auto basis = basis_k(c);
    for (int trial = 0; trial < 5; ++trial) {
      CMatrix gen = CMatrix::Zero(c.ncoord(), c.ncoord());
      for (const auto& e : basis) gen += rng.gaussian() * e.induced;
      gen /= std::max(1.0, gen.operatorNorm());
      const Complex tau(rng.uniform(0.05, c.strip_halfwidth() - 0.05),
                        rng.uniform(-0.7, 0.7));
      const ProjectivePair p = sigma_curve(c, tau);
      const TangentRep v = random_tangent(rng, p);
      for (double t : {0.03, 0.1}) {
        const CMatrix U = rho_exp(t * gen);
        const ProjectivePair q = act(U, p);
        const TangentRep moved{q, U * v.dz, U.conjugate() * v.dw};
        CHECK(std::abs(liouville(moved) - liouville(v)) < 1e-8);
        if (c.ncoord() == 4) continue;
        CHECK(std::abs(liouville(moved, pt) - liouville(v, pt)) < 1e-8);
      }
    }
  }
}

TEST_CASE("two-form is antisymmetric") {
  const auto c = aiii_case(3);
  const auto basis = basis_k(c);
  const ProjectivePair p = sigma_curve(c, Complex(0.5, 0.3));
  const auto& X = basis[2];
  const auto& Y = basis[7];
  CHECK(kahler_two_form(X, X, p) == 0.0);
  CHECK(std::abs(kahler_two_form(X, Y, p) + kahler_two_form(Y, X, p)) < 1e-12);
}

TEST_CASE("bracket evaluation of the two-form matches the surface stencil") {
  Rng rng(56);
  for (const auto& c : {aiii_aiii_case(2, 1), bdi_case(4)}) {
    const auto basis = basis_k(c);
    for (int trial = 0; trial < 6; ++trial) {
      const size_t i = static_cast<size_t>(rng.uniform(0.0, basis.size()));
      const size_t j = static_cast<size_t>(rng.uniform(0.0, basis.size()));
      const ProjectivePair p(slice_point(c, 0.4),
                             slice_point(c, 0.4).conjugate());
      const auto& X = basis[i];
      const auto& Y = basis[j];
      const auto du = [&](double t) {
        const CMatrix U = rho_exp(t * X.induced);
        return TangentRep{act(U, p), U * (Y.induced * p.z),
                          (U * Y.induced).conjugate() * p.w};
      };
      const auto dt = [&](double u) {
        const CMatrix U = rho_exp(u * Y.induced);
        return TangentRep{act(U, p), X.induced * (U * p.z),
                          (X.induced * U).conjugate() * p.w};
      };
      const double via_surface = two_form_from_surface(du, dt);
      const double via_bracket = kahler_two_form(X, Y, p);
      CHECK(std::abs(via_surface - via_bracket) < 1e-6);
    }
  }
}

TEST_CASE("volume form vanishes on degenerate frames") {
  Rng rng(57);
  const ProjectivePair p = random_zero_section(rng, 3);
  const int n = p.n();
  std::vector<TangentRep> frame;
  for (int j = 0; j < 2 * n; ++j) frame.push_back(random_tangent(rng, p));
  const int chart = select_chart(p);
  const Complex full = holomorphic_volume(frame, chart);
  CHECK(std::abs(full) > 1e-12);

  auto gauge_frame = frame;
  gauge_frame[1] = TangentRep{p, Complex(0.0, 1.0) * p.z,
                              CVector::Zero(p.w.size())};
  CHECK(std::abs(holomorphic_volume(gauge_frame, chart)) < 1e-12);

  auto repeated = frame;
  repeated[3] = repeated[0];
  CHECK(std::abs(holomorphic_volume(repeated, chart)) < 1e-12);
}

TEST_CASE("volume form is alternating and multilinear") {
  Rng rng(58);
  const ProjectivePair p = random_zero_section(rng, 4);
  const int n = p.n();
  std::vector<TangentRep> frame;
  for (int j = 0; j < 2 * n; ++j) frame.push_back(random_tangent(rng, p));
  const int chart = select_chart(p);
  const Complex base = holomorphic_volume(frame, chart);

  auto swapped = frame;
  std::swap(swapped[0], swapped[4]);
  CHECK(std::abs(holomorphic_volume(swapped, chart) + base) <
        1e-12 * std::abs(base));

  auto scaled = frame;
  const Complex cfac(0.7, -1.2);
  scaled[2] = TangentRep{p, cfac * frame[2].dz, cfac * frame[2].dw};
  CHECK(std::abs(holomorphic_volume(scaled, chart) - cfac * base) <
        1e-12 * std::abs(base));

  auto sheared = frame;
  sheared[5] = TangentRep{p, frame[5].dz + 2.5 * frame[1].dz,
                          frame[5].dw + 2.5 * frame[1].dw};
  CHECK(std::abs(holomorphic_volume(sheared, chart) - base) <
        1e-11 * std::abs(base));
}

TEST_CASE("volume form rejects wrong frame sizes") {
  Rng rng(59);
  const ProjectivePair p = random_zero_section(rng, 3);
  std::vector<TangentRep> frame;
  for (int j = 0; j < 3; ++j) frame.push_back(random_tangent(rng, p));
  CHECK_THROWS_AS(holomorphic_volume(frame, 0), FrameSizeMismatch);
  CHECK_THROWS_AS(holomorphic_volume({}, 0), FrameSizeMismatch);
}

TEST_CASE("determinant identity holds for the compatible equation") {
  const auto pt = solve_potential(2, 10.0, 1e-3, OdeForm::DeterminantCompatible);
  Rng rng(60);
  const auto c = aiii_aiii_case(2, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const ProjectivePair p = random_zero_section(rng, 3);
    CHECK(check_cy_condition(p, pt) < 1e-4);
  }
  for (int trial = 0; trial < 5; ++trial) {
    const Complex tau(rng.uniform(0.1, M_PI / 2 - 0.1), rng.uniform(-0.8, 0.8));
    CHECK(check_cy_condition(sigma_curve(c, tau), pt) < 1e-4);
  }
}

TEST_CASE("determinant identity fails for perturbed or mismatched tables") {
  const auto good =
      solve_potential(2, 10.0, 1e-3, OdeForm::DeterminantCompatible);
  Rng rng(61);
  const ProjectivePair p = random_zero_section(rng, 3);

  auto perturbed = good;
  for (auto& value : perturbed.h) value *= 1.01;
  CHECK(check_cy_condition(p, perturbed) > 1e-2);

  const auto printed = solve_potential(2, 10.0, 1e-3, OdeForm::AsPrinted);
  CHECK(check_cy_condition(p, printed) > 1e-2);
}

TEST_CASE("determinant residual is insensitive to the representative") {
  const auto pt = solve_potential(2, 10.0, 1e-3, OdeForm::DeterminantCompatible);
  Rng rng(62);
  const ProjectivePair p = random_zero_section(rng, 3);
  const ProjectivePair q(Complex(2.0, 1.0) * p.z, Complex(0.3, -0.7) * p.w);
  const double r1 = check_cy_condition(p, pt);
  const double r2 = check_cy_condition(q, pt);
  CHECK(r1 < 1e-4);
  CHECK(std::abs(r1 - r2) < 1e-5);
}

TEST_CASE("table serializes with full precision") {
  const auto pt = solve_potential(2, 1.01, 1e-3);
  std::ostringstream os;
  write_csv(pt, os);
  const std::string text = os.str();
  CHECK(text.rfind("N,h,hprime\n", 0) == 0);
  CHECK(text.find("0.84089641525371") != std::string::npos);
}
