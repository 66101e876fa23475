#include "slag/momentmap_slag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "slag/rng.hpp"

namespace slag::moment {

namespace {

constexpr double kBoundaryMargin = 1e-3;
constexpr double kPoleGuard = 1e-6;
constexpr double kZeroGuard = 1e-10;
constexpr double kLatticeGuard = 1e-9;

Complex ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Complex(1.0, 0.0);
    case 1: return Complex(0.0, 1.0);
    case 2: return Complex(-1.0, 0.0);
    default: return Complex(0.0, -1.0);
  }
}

Complex cpow(Complex z, int k) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

FrameSpec frame_spec(const pairs::SymmetricPairCase& c) {
  FrameSpec fs{c, {}};
  auto pair_label = [](const char* stem, int i, int j) {
    return std::string(stem) + "_" + std::to_string(i) + std::to_string(j);
  };
  switch (c.kind) {
    case pairs::CaseKind::AIIIAIII: {
      for (int j = 2; j <= c.p; ++j) fs.labels.push_back(pair_label("Z", 1, j));
      for (int j = 2; j <= c.p; ++j) fs.labels.push_back(pair_label("W", 1, j));
      fs.labels.push_back("J1");
      for (int t = 2; t <= c.q; ++t) fs.labels.push_back(pair_label("Zp", 1, t));
      for (int t = 2; t <= c.q; ++t) fs.labels.push_back(pair_label("Wp", 1, t));
      break;
    }
    case pairs::CaseKind::AIII: {
      fs.labels.push_back("X1");
      fs.labels.push_back("X2");
      for (int j = 2; j <= c.m; ++j) fs.labels.push_back(pair_label("Z", 1, j));
      for (int j = 3; j <= c.m; ++j) fs.labels.push_back(pair_label("Z", 2, j));
      for (int j = 2; j <= c.m; ++j) fs.labels.push_back(pair_label("W", 1, j));
      for (int j = 3; j <= c.m; ++j) fs.labels.push_back(pair_label("W", 2, j));
      fs.labels.push_back("W_2");
      break;
    }
    case pairs::CaseKind::BDI: {
      for (int j = 2; j <= c.m; ++j) fs.labels.push_back(pair_label("Y", 1, j));
      for (int j = 3; j <= c.m; ++j) fs.labels.push_back(pair_label("Y", 2, j));
      break;
    }
    case pairs::CaseKind::DIII: {
      const int eight[8][2] = {{1, 3}, {1, 4}, {1, 5}, {2, 3},
                               {2, 4}, {2, 5}, {3, 5}, {4, 5}};
      for (const auto& ij : eight) {
        fs.labels.push_back(pair_label("Zt", ij[0], ij[1]));
      }
      for (const auto& ij : eight) {
        fs.labels.push_back(pair_label("Wt", ij[0], ij[1]));
      }
      fs.labels.push_back("Wt_2");
      break;
    }
  }
  if (static_cast<int>(fs.labels.size()) != 2 * c.n() - 1) {
    throw DimensionMismatch("frame label list has the wrong length");
  }
  return fs;
}

double moment_residual(const pairs::SymmetricPairCase& c,
                       const ProjectivePair& p) {
  double worst = 0.0;
  for (const auto& e : pairs::basis_k(c)) {
    worst = std::max(
        worst, std::abs(stenzel::liouville(pairs::fundamental_vector(e, p))));
  }
  return worst;
}

FiberSolution bundle_fiber_solution(const pairs::SymmetricPairCase& c,
                                    double theta, double lambda) {
  const double spacing = c.lattice_spacing();
  const double offset =
      std::abs(theta / spacing - std::round(theta / spacing)) * spacing;
  if (offset < kLatticeGuard) {
    throw DegenerateSlice("theta sits on the degenerate lattice");
  }
  FiberSolution sol;
  sol.zeta = pairs::slice_point(c, theta);
  sol.xi = CVector::Zero(c.ncoord());
  const double sn = std::sin(theta);
  const double cs = std::cos(theta);
  switch (c.kind) {
    case pairs::CaseKind::AIIIAIII:
      sol.xi[0] = lambda * sn;
      sol.xi[c.p] = -lambda * cs;
      break;
    case pairs::CaseKind::AIII:
      sol.xi[0] = lambda * sn;
      sol.xi[c.m + 1] = -lambda * cs;
      break;
    case pairs::CaseKind::BDI:
      sol.xi[0] = -lambda * sn;
      sol.xi[1] = Complex(0.0, lambda * cs);
      break;
    case pairs::CaseKind::DIII:
      sol.xi[0] = Complex(0.0, lambda * sn);
      sol.xi[7] = Complex(0.0, -lambda * cs);
      break;
  }
  return sol;
}

Complex closed_form_G(const pairs::SymmetricPairCase& c, Complex tau,
                      GForm form, BdiPower bdi_power) {
  const Complex ct = std::cos(tau);
  const Complex st = std::sin(tau);
  const Complex c2t = std::cos(2.0 * tau);
  const Complex s2t = std::sin(2.0 * tau);
  if (form == GForm::Calibrated) {
    switch (c.kind) {
      case pairs::CaseKind::AIIIAIII:
        return ipow(c.p + c.q - 1) * cpow(st, 2 * c.q - 1) *
               cpow(ct, 2 * c.p - 1);
      case pairs::CaseKind::AIII:
        return ipow(2 * c.m - 1) * cpow(0.5 * s2t, 2 * c.m - 3) * c2t * c2t;
      case pairs::CaseKind::BDI: {
        const int power = bdi_power == BdiPower::ProofFrame ? c.m - 1 : c.m - 2;
        return ipow(power) * cpow(s2t, c.m - 3) * std::sin(4.0 * tau);
      }
      case pairs::CaseKind::DIII:
        return Complex(0.0, 1.0) * cpow(c2t, 4) * cpow(0.5 * s2t, 5);
    }
  }
  if (c.kind != pairs::CaseKind::BDI && std::abs(ct) < kPoleGuard) {
    throw PoleProximity("tan tau pole too close");
  }
  const Complex tt = st / ct;
  switch (c.kind) {
    case pairs::CaseKind::AIIIAIII:
      return ipow(c.p + c.q - 1) * (1.0 + tt * tt) * cpow(tt, 2 * c.q - 1);
    case pairs::CaseKind::AIII:
      return ipow(2 * c.m - 1) * cpow(tt, 2 * c.m - 3) *
             cpow(1.0 + tt * tt, 3) * c2t * c2t;
    case pairs::CaseKind::BDI: {
      const int power = bdi_power == BdiPower::ProofFrame ? c.m - 1 : c.m - 2;
      return ipow(power) * cpow(s2t, c.m - 3) * std::sin(4.0 * tau);
    }
    case pairs::CaseKind::DIII:
      return Complex(0.0, 1.0) * cpow(1.0 - tt * tt, 4) * (1.0 + tt * tt) *
             cpow(tt, 5);
  }
  throw Error("unreachable case kind");
}

Complex frame_volume(const pairs::SymmetricPairCase& c, Complex tau,
                     Complex dtau) {
  const ProjectivePair p = pairs::sigma_curve(c, tau);
  const TangentRep vel = pairs::sigma_velocity(c, tau);
  std::vector<TangentRep> frame;
  frame.push_back(TangentRep{p, vel.dz * dtau, vel.dw * dtau});
  const auto basis = pairs::basis_k(c);
  for (const auto& label : frame_spec(c).labels) {
    frame.push_back(
        pairs::fundamental_vector(pairs::find_element(basis, label), p));
  }
  return stenzel::holomorphic_volume(frame, geometry::select_chart(p));
}

ProfileCurve integrate_profile(const pairs::SymmetricPairCase& c, double psi,
                               Complex tau0, double step, int max_steps) {
  if (!(step > 0.0)) throw Error("integrate_profile requires step > 0");
  if (max_steps < 1) throw Error("integrate_profile requires max_steps >= 1");
  const double hw = c.strip_halfwidth();
  const double xr0 = std::abs(tau0.real());
  if (!(xr0 > 0.0) || !(xr0 < hw)) {
    throw OutOfStrip("initial tau outside the open strip");
  }
  if (std::abs(closed_form_G(c, tau0)) < kZeroGuard) {
    throw StagnationAtZeroOfG("G vanishes at the initial tau");
  }

  ProfileCurve curve;
  curve.c = c;
  curve.psi = stenzel::CalibrationPhase(psi);
  curve.step = step;
  const Complex phase = std::exp(Complex(0.0, curve.psi.psi));
  const auto rhs = [&](Complex tau) {
    return std::conj(phase * closed_form_G(c, tau));
  };

  Complex tau = tau0;
  double s = 0.0;
  curve.samples.push_back({s, tau});
  curve.halt = HaltReason::MaxSteps;
  for (int k = 0; k < max_steps; ++k) {
    const double xr = std::abs(tau.real());
    if (xr < kBoundaryMargin || xr > hw - kBoundaryMargin) {
      curve.halt = HaltReason::Boundary;
      break;
    }
    if (std::abs(std::cos(tau)) < kPoleGuard) {
      curve.halt = HaltReason::PoleProximity;
      break;
    }
    const Complex G = closed_form_G(c, tau);
    if (std::abs(G) < kZeroGuard) {
      curve.halt = HaltReason::ZeroOfG;
      break;
    }
    const double ds = step / std::max(1.0, std::abs(G));
    const Complex k1 = rhs(tau);
    const Complex k2 = rhs(tau + 0.5 * ds * k1);
    const Complex k3 = rhs(tau + 0.5 * ds * k2);
    const Complex k4 = rhs(tau + ds * k3);
    tau += ds * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    s += ds;
    curve.samples.push_back({s, tau});
  }
  return curve;
}

SpecialReport verify_special_on_curve(const ProfileCurve& curve,
                                      int n_orbit_samples, double tol,
                                      const VerifyOptions& opt) {
  if (curve.samples.empty()) throw Error("verify on an empty curve");
  const auto& c = curve.c;
  const auto basis = pairs::basis_k(c);
  const auto fs = frame_spec(c);
  const Complex tangent_phase = std::exp(Complex(0.0, curve.psi.psi));
  const Complex check_phase =
      std::exp(Complex(0.0, curve.psi.psi + opt.psi_offset));
  Rng rng(opt.seed);

  SpecialReport rep;
  rep.tol = tol;
  rep.tol_imomega = opt.tol_imomega;
  rep.tol_omega = opt.tol_omega;
  rep.n_group = n_orbit_samples + 1;

  const int navail = static_cast<int>(curve.samples.size());
  const int npts = std::min(opt.n_points, navail);
  rep.n_points = npts;

  for (int ip = 0; ip < npts; ++ip) {
    const int idx =
        npts == 1 ? 0 : static_cast<int>((navail - 1) * (double(ip) / (npts - 1)));
    const Complex tau = curve.samples[idx].tau;
    const Complex tprime = std::conj(tangent_phase * closed_form_G(c, tau));
    const ProjectivePair base_pt = pairs::sigma_curve(c, tau);
    const TangentRep vel = pairs::sigma_velocity(c, tau);

    for (int ig = 0; ig <= n_orbit_samples; ++ig) {
      pairs::CMatrix U =
          pairs::CMatrix::Identity(c.ncoord(), c.ncoord());
      if (ig > 0) {
        pairs::CMatrix gen =
            pairs::CMatrix::Zero(c.ncoord(), c.ncoord());
        for (const auto& e : basis) gen += rng.gaussian() * e.induced;
        gen /= std::max(1.0, gen.operatorNorm());
        U = pairs::rho_exp(opt.group_time * gen);
      }
      ProjectivePair p = pairs::act(U, base_pt);
      if (opt.w_perturbation > 0.0) {
        CVector noise(c.ncoord());
        for (int j = 0; j < c.ncoord(); ++j) {
          noise[j] = Complex(rng.gaussian(), rng.gaussian());
        }
        p = ProjectivePair(p.z, p.w + opt.w_perturbation * p.w.norm() * noise);
      }

      // The curves leave every compact set, and the raw coefficient amplitude
      // of the one-form grows like N^{3/2} along the way, so residuals are
      // reported relative to that local scale.
      const double nscale =
          std::max(1.0, std::pow(geometry::eval_N(p), 1.5));
      rep.residual_moment =
          std::max(rep.residual_moment, moment_residual(c, p) / nscale);

      const Complex uhat = tprime / std::abs(tprime);
      const CVector curve_dz = U * (vel.dz * uhat);
      const CVector curve_dw = U.conjugate() * (vel.dw * uhat);
      std::vector<TangentRep> frame;
      frame.push_back(TangentRep{p, curve_dz, curve_dw});
      std::vector<pairs::LieAlgebraElement> moved;
      for (const auto& label : fs.labels) {
        const auto& e = pairs::find_element(basis, label);
        moved.push_back({e.label, e.matrix, U * e.induced * U.adjoint()});
        frame.push_back(TangentRep{p, U * (e.induced * base_pt.z),
                                   U.conjugate() *
                                       (e.induced.conjugate() * base_pt.w)});
      }
      const Complex vol =
          stenzel::holomorphic_volume(frame, geometry::select_chart(p));
      rep.residual_imomega =
          std::max(rep.residual_imomega,
                   std::abs((check_phase * vol).imag()) / std::abs(vol));

      for (size_t i = 0; i < moved.size(); ++i) {
        for (size_t j = i + 1; j < moved.size(); ++j) {
          rep.residual_omega = std::max(
              rep.residual_omega,
              std::abs(stenzel::kahler_two_form(moved[i], moved[j], p)) /
                  nscale);
        }
      }
      for (size_t j = 0; j < moved.size(); ++j) {
        const auto& el = moved[j];
        const auto du_at_t = [&](double t) {
          const pairs::CMatrix W = pairs::rho_exp(t * el.induced);
          return TangentRep{pairs::act(W, p), W * curve_dz,
                            W.conjugate() * curve_dw};
        };
        const auto dt_at_u = [&](double u) {
          const ProjectivePair q =
              pairs::act(U, pairs::sigma_curve(c, tau + u * uhat));
          return TangentRep{q, el.induced * q.z,
                            el.induced.conjugate() * q.w};
        };
        rep.residual_omega =
            std::max(rep.residual_omega,
                     std::abs(stenzel::two_form_from_surface(du_at_t, dt_at_u)) /
                         nscale);
      }
    }
  }
  rep.pass = rep.residual_moment < rep.tol &&
             rep.residual_imomega < rep.tol_imomega &&
             rep.residual_omega < rep.tol_omega;
  return rep;
}

void write_csv(const ProfileCurve& curve, std::ostream& os) {
  os << "s,re_tau,im_tau\n";
  char buf[128];
  for (const auto& sample : curve.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", sample.s,
                  sample.tau.real(), sample.tau.imag());
    os << buf;
  }
}

}  // namespace slag::moment
