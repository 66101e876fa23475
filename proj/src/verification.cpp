#include "slag/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "slag/errors.hpp"
#include "slag/rng.hpp"
#include "slag/stenzel_structure.hpp"

namespace slag::verify {

using geometry::CVector;
using geometry::ProjectivePair;
using geometry::TangentRep;
using pairs::CMatrix;
using pairs::LieAlgebraElement;

namespace {

constexpr double kControlFloor = 1e-3;

void require(bool ok, const char* what) {
  if (!ok) throw Error(what);
}

LieAlgebraElement synthetic(const std::string& label, const CMatrix& induced) {
  return LieAlgebraElement{label, CMatrix::Zero(induced.rows(), induced.cols()),
                           induced};
}

double mu_component(const LieAlgebraElement& e, const ProjectivePair& p) {
  return stenzel::liouville(pairs::fundamental_vector(e, p));
}

CMatrix random_generator(Rng& rng,
                         const std::vector<LieAlgebraElement>& basis) {
  CMatrix gen = CMatrix::Zero(basis.front().induced.rows(),
                              basis.front().induced.cols());
  for (const auto& e : basis) gen += rng.gaussian() * e.induced;
  const double scale = gen.operatorNorm();
  if (scale > 0.0) gen /= std::max(1.0, scale);
  return gen;
}

/// A generic point of the manifold: a slice point pushed off the zero level
/// by a deterministic w-direction perturbation.
ProjectivePair generic_point(Rng& rng, const pairs::SymmetricPairCase& c) {
  const Complex tau(rng.uniform(0.1, c.strip_halfwidth() - 0.1),
                    rng.uniform(-0.5, 0.5));
  const ProjectivePair base = pairs::sigma_curve(c, tau);
  CVector noise(c.ncoord());
  for (int j = 0; j < c.ncoord(); ++j) {
    noise[j] = Complex(rng.gaussian(), rng.gaussian());
  }
  return ProjectivePair(base.z, base.w + 0.3 * base.w.norm() * noise);
}

/// Frobenius-orthogonal re-expression of an operator in the algebra basis.
struct AlgebraProjector {
  Eigen::MatrixXd columns;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;

  explicit AlgebraProjector(const std::vector<LieAlgebraElement>& basis) {
    const int d = static_cast<int>(basis.front().induced.rows());
    columns.resize(2 * d * d, static_cast<int>(basis.size()));
    for (size_t k = 0; k < basis.size(); ++k) {
      columns.col(static_cast<int>(k)) = vectorize(basis[k].induced);
    }
    qr.compute(columns);
  }

  static Eigen::VectorXd vectorize(const CMatrix& op) {
    const int d = static_cast<int>(op.rows());
    Eigen::VectorXd v(2 * d * d);
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        v[2 * (j * d + i)] = op(i, j).real();
        v[2 * (j * d + i) + 1] = op(i, j).imag();
      }
    }
    return v;
  }

  CMatrix project(const CMatrix& op) const {
    const Eigen::VectorXd x = qr.solve(vectorize(op));
    const Eigen::VectorXd back = columns * x;
    const int d = static_cast<int>(op.rows());
    CMatrix out(d, d);
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        out(i, j) = Complex(back[2 * (j * d + i)], back[2 * (j * d + i) + 1]);
      }
    }
    return out;
  }
};

double hamiltonian_sweep(const pairs::SymmetricPairCase& c,
                         const SuiteConfig& cfg, double h) {
  Rng rng(cfg.seed);
  const auto basis = pairs::basis_k(c);
  double worst = 0.0;
  for (int trial = 0; trial < cfg.n_samples; ++trial) {
    const ProjectivePair p = generic_point(rng, c);
    const auto X = synthetic("X", random_generator(rng, basis));
    const auto Y = synthetic("Y", random_generator(rng, basis));
    const CMatrix flow_p = pairs::rho_exp(h * Y.induced);
    const CMatrix flow_m = pairs::rho_exp(-h * Y.induced);
    const double mu_plus = mu_component(X, pairs::act(flow_p, p));
    const double mu_minus = mu_component(X, pairs::act(flow_m, p));
    const double lhs = (mu_plus - mu_minus) / (2.0 * h);
    stenzel::TwoFormOptions opt;
    opt.fd_step = h;
    const double rhs = stenzel::kahler_two_form(X, Y, p, opt);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

void append(Report& rep, const std::string& name, double residual, double tol,
            bool pass) {
  rep.checks.push_back({name, residual, tol, pass});
  rep.pass = rep.pass && pass;
}

int sample_index(int navail, int npts, int ip) {
  if (npts <= 1) return 0;
  return static_cast<int>((navail - 1) * (double(ip) / (npts - 1)));
}

Complex tau0_or_default(const SuiteConfig& cfg, double hw) {
  if (cfg.tau0 == Complex(0.0, 0.0)) return Complex(0.55 * hw, 0.3 * hw);
  return cfg.tau0;
}

}  // namespace

void SuiteConfig::validate() const {
  require(tol.moment > 0.0 && tol.im_omega > 0.0 && tol.omega > 0.0 &&
              tol.equivariance > 0.0,
          "tolerances must be positive");
  require(n_samples >= 1 && n_points >= 1 && n_group >= 1,
          "sample counts must be at least 1");
  require(fd_first > 0.0 && fd_second > 0.0,
          "finite-difference steps must be positive");
  require(step > 0.0 && max_steps >= 1,
          "integration step and budget must be positive");
}

std::string case_label(const pairs::SymmetricPairCase& c) { return c.label(); }

std::string params_label(const pairs::SymmetricPairCase& c) {
  char buf[48];
  switch (c.kind) {
    case pairs::CaseKind::AIIIAIII:
      std::snprintf(buf, sizeof(buf), "p=%d,q=%d", c.p, c.q);
      return buf;
    case pairs::CaseKind::AIII:
    case pairs::CaseKind::BDI:
      std::snprintf(buf, sizeof(buf), "m=%d", c.m);
      return buf;
    case pairs::CaseKind::DIII:
      return "";
  }
  return "";
}

Report check_hamiltonian(const pairs::SymmetricPairCase& c,
                         const SuiteConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = "hamiltonian";
  rep.case_name = case_label(c);
  rep.params = params_label(c);
  rep.seed = cfg.seed;
  rep.pass = true;

  double fd = hamiltonian_sweep(c, cfg, cfg.fd_first);
  if (fd > 0.1 * cfg.tol.omega) {
    // one refinement pass when the margin is thin
    fd = std::min(fd, hamiltonian_sweep(c, cfg, 0.5 * cfg.fd_first));
  }
  append(rep, "hamiltonian-fd", fd, cfg.tol.omega, fd < cfg.tol.omega);

  // the zero generator gives exactly zero on both sides
  Rng rng(cfg.seed + 1);
  const auto basis = pairs::basis_k(c);
  const ProjectivePair p0 = generic_point(rng, c);
  const auto zero = synthetic("0", CMatrix::Zero(c.ncoord(), c.ncoord()));
  const auto Y0 = synthetic("Y", random_generator(rng, basis));
  const double mu0 = std::abs(mu_component(zero, p0));
  const double om0 = std::abs(stenzel::kahler_two_form(zero, Y0, p0));
  append(rep, "zero-element", mu0 + om0, 1e-14, mu0 + om0 < 1e-14);

  // mu_X is linear in X, so its directional derivative is too
  const auto X0 = synthetic("X", random_generator(rng, basis));
  const auto Xs = synthetic("sX", 3.7 * X0.induced);
  const CMatrix fp = pairs::rho_exp(cfg.fd_first * Y0.induced);
  const CMatrix fm = pairs::rho_exp(-cfg.fd_first * Y0.induced);
  const ProjectivePair pp = pairs::act(fp, p0);
  const ProjectivePair pm = pairs::act(fm, p0);
  const double d1 =
      (mu_component(X0, pp) - mu_component(X0, pm)) / (2.0 * cfg.fd_first);
  const double ds =
      (mu_component(Xs, pp) - mu_component(Xs, pm)) / (2.0 * cfg.fd_first);
  const double lin = std::abs(ds - 3.7 * d1) / (std::abs(3.7 * d1) + 1.0);
  append(rep, "linearity-in-generator", lin, cfg.tol.equivariance,
         lin < cfg.tol.equivariance);
  return rep;
}

Report check_action_equivariance(const pairs::SymmetricPairCase& c,
                                 const SuiteConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = "equivariance";
  rep.case_name = case_label(c);
  rep.params = params_label(c);
  rep.seed = cfg.seed;
  rep.pass = true;

  Rng rng(cfg.seed);
  const auto basis = pairs::basis_k(c);
  const AlgebraProjector proj(basis);
  const int d = c.ncoord();

  // k = identity is exact
  {
    const ProjectivePair p = generic_point(rng, c);
    const auto X = synthetic("X", random_generator(rng, basis));
    const double r = std::abs(mu_component(X, p) - mu_component(X, p));
    append(rep, "identity", r, 1e-15, r <= 0.0);
  }

  double worst_moment = 0.0;
  double worst_chart = 0.0;
  for (int trial = 0; trial < cfg.n_samples; ++trial) {
    const ProjectivePair p = generic_point(rng, c);
    const auto X = synthetic("X", random_generator(rng, basis));
    const CMatrix U = pairs::rho_exp(0.6 * random_generator(rng, basis));

    const CMatrix adx = proj.project(U * X.induced * U.adjoint());
    const double lhs = mu_component(synthetic("AdX", adx), pairs::act(U, p));
    const double rhs = mu_component(X, p);
    worst_moment = std::max(worst_moment, std::abs(lhs - rhs));

    const double theta =
        rng.uniform(0.1, c.lattice_spacing() - 0.1);
    const double lambda = rng.uniform(-0.7, 0.7);
    const auto sol = moment::bundle_fiber_solution(c, theta, lambda);
    const ProjectivePair a =
        geometry::phi_hat(CVector(U * sol.zeta), CVector(U * sol.xi));
    const ProjectivePair b0 = geometry::phi_hat(sol.zeta, sol.xi);
    const ProjectivePair b(CVector(U * b0.z),
                           CVector(U.conjugate() * b0.w));
    worst_chart = std::max(worst_chart,
                           std::max((a.z - b.z).norm(), (a.w - b.w).norm()));
  }
  append(rep, "moment-equivariance", worst_moment, cfg.tol.equivariance,
         worst_moment < cfg.tol.equivariance);
  append(rep, "chart-intertwine", worst_chart, cfg.tol.equivariance,
         worst_chart < cfg.tol.equivariance);

  // a generic special-unitary conjugation is not an isotropy motion: the
  // re-expression step discards part of Ad(V)X and the identity must break
  double control = 0.0;
  for (int trial = 0; trial < cfg.n_samples; ++trial) {
    const ProjectivePair p = generic_point(rng, c);
    const auto X = synthetic("X", random_generator(rng, basis));
    CMatrix herm(d, d);
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        herm(i, j) = Complex(rng.gaussian(), rng.gaussian());
      }
    }
    herm = CMatrix(0.5 * (herm + herm.adjoint()));
    herm -= (herm.trace() / double(d)) * CMatrix::Identity(d, d);
    herm /= std::max(1.0, herm.operatorNorm());
    const CMatrix V = pairs::rho_exp(CMatrix(Complex(0.0, 1.0) * herm));
    const CMatrix adx = proj.project(V * X.induced * V.adjoint());
    const double lhs = mu_component(synthetic("AdX", adx), pairs::act(V, p));
    const double rhs = mu_component(X, p);
    control = std::max(control, std::abs(lhs - rhs));
  }
  append(rep, "non-group-control", control, kControlFloor,
         control > kControlFloor);
  return rep;
}

Report run_theorem_suite(const pairs::SymmetricPairCase& c, double psi,
                         const SuiteConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = "theorem";
  rep.case_name = case_label(c);
  rep.params = params_label(c);
  rep.psi = psi;
  rep.seed = cfg.seed;
  rep.pass = true;

  const double hw = c.strip_halfwidth();
  const Complex tau0 = tau0_or_default(cfg, hw);
  const int target = 2 * c.n() - 1;

  // screen the start angle before integrating: a degenerate slice cannot
  // carry a codimension-one orbit family
  const CVector v0 = pairs::slice_point(c, tau0.real());
  const ProjectivePair p0(v0, v0.conjugate());
  const int r0 = pairs::orbit_tangent_rank(c, p0);
  if (r0 != target) {
    append(rep, "orbit-rank", std::abs(double(r0 - target)), 0.5, false);
    return rep;
  }

  moment::ProfileCurve curve;
  try {
    curve = moment::integrate_profile(c, psi, tau0, cfg.step, cfg.max_steps);
  } catch (const Error&) {
    append(rep, "profile-start", 1.0, 0.5, false);
    return rep;
  }

  moment::VerifyOptions opt;
  opt.n_points = cfg.n_points;
  opt.tol_imomega = cfg.tol.im_omega;
  opt.tol_omega = cfg.tol.omega;
  opt.seed = cfg.seed;
  opt.psi_offset = cfg.psi_offset;
  opt.w_perturbation = cfg.w_perturbation;
  const moment::SpecialReport srep =
      moment::verify_special_on_curve(curve, cfg.n_group, cfg.tol.moment, opt);
  append(rep, "moment", srep.residual_moment, cfg.tol.moment,
         srep.residual_moment < cfg.tol.moment);
  append(rep, "im-omega", srep.residual_imomega, cfg.tol.im_omega,
         srep.residual_imomega < cfg.tol.im_omega);
  append(rep, "omega", srep.residual_omega, cfg.tol.omega,
         srep.residual_omega < cfg.tol.omega);

  const int navail = static_cast<int>(curve.samples.size());
  const int npts = std::min(cfg.n_points, navail);
  double deficit = 0.0;
  for (int ip = 0; ip < npts; ++ip) {
    const Complex tau = curve.samples[sample_index(navail, npts, ip)].tau;
    const int r = pairs::orbit_tangent_rank(c, pairs::sigma_curve(c, tau));
    deficit = std::max(deficit, std::abs(double(r - target)));
  }
  append(rep, "orbit-rank", deficit, 0.5, deficit < 0.5);
  return rep;
}

void write_json(const Report& rep, std::ostream& os) {
  char buf[96];
  os << "{\n  \"suite\": \"" << rep.suite << "\",\n  \"case\": \""
     << rep.case_name << "\",\n  \"params\": \"" << rep.params << "\",\n";
  std::snprintf(buf, sizeof(buf), "  \"psi\": %.17g,\n", rep.psi);
  os << buf;
  std::snprintf(buf, sizeof(buf), "  \"seed\": %llu,\n",
                static_cast<unsigned long long>(rep.seed));
  os << buf;
  os << "  \"checks\": [";
  for (size_t k = 0; k < rep.checks.size(); ++k) {
    const auto& ch = rep.checks[k];
    os << (k == 0 ? "\n" : ",\n");
    os << "    {\"name\": \"" << ch.name << "\", ";
    std::snprintf(buf, sizeof(buf), "\"residual\": %.17g, \"tol\": %.17g, ",
                  ch.residual, ch.tol);
    os << buf << "\"pass\": " << (ch.pass ? "true" : "false") << "}";
  }
  os << "\n  ],\n  \"pass\": " << (rep.pass ? "true" : "false") << "\n}\n";
}

}  // namespace slag::verify
