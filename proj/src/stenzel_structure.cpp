#include "slag/stenzel_structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace slag::stenzel {

namespace {

constexpr double kSeriesDelta = 1e-6;
constexpr double kAuditTol = 1e-9;
constexpr double kTableSlack = 1e-9;

double ode_lhs(int n, OdeForm form, double N, double h, double hp) {
  const double Npow = std::pow(N, n - 1);
  const double h2n = std::pow(h, 2 * n);
  if (form == OdeForm::AsPrinted) {
    return 2.0 * N * Npow * h2n + 2.0 * (N - 1.0) * N * Npow * h2n * hp;
  }
  const double h2nm1 = h2n / h;
  return (2.0 * N - 1.0) * Npow * h2n +
         2.0 * (N - 1.0) * N * Npow * h2nm1 * hp;
}

// h' isolated from the equation; regular for N > 1
double ode_rhs(int n, OdeForm form, double N, double h) {
  const double Npow = std::pow(N, n - 1);
  const double h2n = std::pow(h, 2 * n);
  if (form == OdeForm::AsPrinted) {
    return (1.0 - 2.0 * N * Npow * h2n) /
           (2.0 * (N - 1.0) * N * Npow * h2n);
  }
  const double h2nm1 = h2n / h;
  return (1.0 - (2.0 * N - 1.0) * Npow * h2n) /
         (2.0 * (N - 1.0) * N * Npow * h2nm1);
}

double seed_value(int n, OdeForm form) {
  if (form == OdeForm::AsPrinted) return std::pow(2.0, -1.0 / (2.0 * n));
  return 1.0;
}

// limit of h' as N -> 1, from the first-order series of the solution
double seed_slope(int n, OdeForm form) {
  if (form == OdeForm::AsPrinted) {
    const double h0 = seed_value(n, form);
    return -n * h0 / (h0 + 2.0 * n);
  }
  return -0.5;
}

double rk4_advance(int n, OdeForm form, double N, double h, double width,
                   int substeps, double sing_frac) {
  // Off the solution curve the isolated h' carries a 1/(N-1) factor, so the
  // equation is stiff near the left end; cap each step by a fraction of the
  // distance from the singular point in addition to the nominal subdivision.
  const double target = N + width;
  const double nominal = width / substeps;
  while (N < target - 1e-15) {
    double dt = std::min(nominal, std::max(sing_frac * (N - 1.0), 1e-9));
    dt = std::min(dt, target - N);
    const double k1 = ode_rhs(n, form, N, h);
    const double k2 = ode_rhs(n, form, N + 0.5 * dt, h + 0.5 * dt * k1);
    const double k3 = ode_rhs(n, form, N + 0.5 * dt, h + 0.5 * dt * k2);
    const double k4 = ode_rhs(n, form, N + dt, h + dt * k3);
    h += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    N += dt;
    if (!(h > 0.0)) throw NonPositive("potential derivative reached zero");
  }
  return h;
}

std::vector<double> integrate_on_nodes(int n, OdeForm form,
                                       const std::vector<double>& nodes,
                                       int substeps, double sing_frac) {
  std::vector<double> values(nodes.size());
  values[0] = seed_value(n, form);
  if (nodes.size() == 1) return values;
  values[1] = values[0] + seed_slope(n, form) * (nodes[1] - nodes[0]);
  for (size_t k = 2; k < nodes.size(); ++k) {
    values[k] = rk4_advance(n, form, nodes[k - 1], values[k - 1],
                            nodes[k] - nodes[k - 1], substeps, sing_frac);
  }
  return values;
}

struct Cell {
  size_t idx;
  double sigma;
  double width;
};

Cell locate(const std::vector<double>& grid, double N) {
  if (N < grid.front() - kTableSlack || N > grid.back() + kTableSlack) {
    throw OutOfTable("N outside tabulated range");
  }
  const double clamped = std::clamp(N, grid.front(), grid.back());
  auto it = std::upper_bound(grid.begin(), grid.end(), clamped);
  size_t idx = static_cast<size_t>(it - grid.begin());
  if (idx > 0) --idx;
  if (idx + 1 >= grid.size()) idx = grid.size() - 2;
  const double width = grid[idx + 1] - grid[idx];
  return {idx, (clamped - grid[idx]) / width, width};
}

double alpha_raw(const TangentRep& v) {
  const CVector& z = v.base.z;
  const CVector& w = v.base.w;
  const Complex B = geometry::eval_B(v.base);
  const double Bsq = std::norm(B);
  const Complex Bbar = std::conj(B);
  const double z2 = z.squaredNorm();
  const double w2 = w.squaredNorm();
  const double A = z2 * w2;
  const CVector c1 = (w2 / Bsq) * z - (A / Bsq / Bbar) * w.conjugate();
  const CVector c2 = (z2 / Bsq) * w - (A / Bsq / Bbar) * z.conjugate();
  // dz.dot(c1) = sum_j conj(dz_j) c1_j
  return (v.dz.dot(c1) + v.dw.dot(c2)).imag();
}

double alpha_value(const TangentRep& v, const PotentialTable* pt) {
  const double raw = alpha_raw(v);
  if (pt == nullptr) return raw;
  return pt->h_at(geometry::eval_N(v.base)) * raw;
}

TangentRep operator_vector(const pairs::CMatrix& op,
                           const ProjectivePair& p) {
  return TangentRep{p, op * p.z, op.conjugate() * p.w};
}

}  // namespace

double PotentialTable::h_at(double N) const {
  const Cell c = locate(grid, N);
  const double s = c.sigma;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double H00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double H10 = s3 - 2.0 * s2 + s;
  const double H01 = -2.0 * s3 + 3.0 * s2;
  const double H11 = s3 - s2;
  return h[c.idx] * H00 + c.width * hprime[c.idx] * H10 + h[c.idx + 1] * H01 +
         c.width * hprime[c.idx + 1] * H11;
}

double PotentialTable::hprime_at(double N) const {
  const Cell c = locate(grid, N);
  const double s = c.sigma;
  const double s2 = s * s;
  const double d00 = 6.0 * s2 - 6.0 * s;
  const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
  const double d01 = -6.0 * s2 + 6.0 * s;
  const double d11 = 3.0 * s2 - 2.0 * s;
  return (h[c.idx] * d00 + h[c.idx + 1] * d01) / c.width +
         hprime[c.idx] * d10 + hprime[c.idx + 1] * d11;
}

double PotentialTable::f_at(double N) const {
  const Cell c = locate(grid, N);
  const double s = c.sigma;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s3 * s;
  const double I00 = 0.5 * s4 - s3 + s;
  const double I10 = 0.25 * s4 - (2.0 / 3.0) * s3 + 0.5 * s2;
  const double I01 = -0.5 * s4 + s3;
  const double I11 = 0.25 * s4 - s3 / 3.0;
  return fcum[c.idx] +
         c.width * (h[c.idx] * I00 + c.width * hprime[c.idx] * I10 +
                    h[c.idx + 1] * I01 + c.width * hprime[c.idx + 1] * I11);
}

CalibrationPhase::CalibrationPhase(double angle) {
  const double two_pi = 2.0 * M_PI;
  psi = std::fmod(angle, two_pi);
  if (psi < 0.0) psi += two_pi;
}

double ode_residual(int n, OdeForm form, double N, double h, double hprime) {
  return std::abs(ode_lhs(n, form, N, h, hprime) - 1.0);
}

PotentialTable solve_potential(int n, double N_max, double step,
                               OdeForm form) {
  if (n < 2) throw Error("solve_potential requires n >= 2");
  if (!(N_max > 1.0)) throw Error("solve_potential requires N_max > 1");
  if (!(step > 0.0)) throw Error("solve_potential requires step > 0");

  std::vector<double> nodes{1.0};
  const double N0 = 1.0 + kSeriesDelta;
  if (N_max > N0) {
    nodes.push_back(N0);
    for (int j = 1;; ++j) {
      const double g = 1.0 + j * step;
      if (g >= N_max - 1e-12) break;
      if (g > N0 + 1e-12) nodes.push_back(g);
    }
  }
  nodes.push_back(N_max);

  const std::vector<double> coarse = integrate_on_nodes(n, form, nodes, 4, 0.1);
  const std::vector<double> fine = integrate_on_nodes(n, form, nodes, 8, 0.05);
  for (size_t k = 0; k < nodes.size(); ++k) {
    if (std::abs(coarse[k] - fine[k]) > kAuditTol) {
      throw StepTooLarge("half-step audit of the potential solve failed");
    }
  }

  PotentialTable pt;
  pt.n = n;
  pt.form = form;
  pt.grid = nodes;
  pt.h = fine;
  pt.hprime.resize(nodes.size());
  pt.hprime[0] = seed_slope(n, form);
  for (size_t k = 1; k < nodes.size(); ++k) {
    pt.hprime[k] = ode_rhs(n, form, nodes[k], pt.h[k]);
  }
  pt.fcum.resize(nodes.size());
  pt.fcum[0] = 0.0;
  for (size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double w = nodes[k + 1] - nodes[k];
    pt.fcum[k + 1] =
        pt.fcum[k] + w * (0.5 * (pt.h[k] + pt.h[k + 1]) +
                          w * (pt.hprime[k] - pt.hprime[k + 1]) / 12.0);
  }
  return pt;
}

double liouville(const TangentRep& v) { return alpha_value(v, nullptr); }

double liouville(const TangentRep& v, const PotentialTable& pt) {
  return alpha_value(v, &pt);
}

double kahler_two_form(const pairs::LieAlgebraElement& X,
                       const pairs::LieAlgebraElement& Y,
                       const ProjectivePair& p, const TwoFormOptions& opt) {
  const double s = opt.fd_step;
  const auto directional = [&](const pairs::LieAlgebraElement& flow,
                               const pairs::LieAlgebraElement& field) {
    const pairs::CMatrix Up = pairs::rho_exp(s * flow.induced);
    const pairs::CMatrix Um = pairs::rho_exp(-s * flow.induced);
    const ProjectivePair qp = pairs::act(Up, p);
    const ProjectivePair qm = pairs::act(Um, p);
    const double ap = alpha_value(pairs::fundamental_vector(field, qp), opt.table);
    const double am = alpha_value(pairs::fundamental_vector(field, qm), opt.table);
    return (ap - am) / (2.0 * s);
  };
  const double t1 = directional(X, Y);
  const double t2 = directional(Y, X);
  // [X*, Y*] = -[X, Y]*, with the commutator taken on induced operators
  const pairs::CMatrix C = X.induced * Y.induced - Y.induced * X.induced;
  const double bracket_term = -alpha_value(operator_vector(C, p), opt.table);
  return -(t1 - t2 - bracket_term);
}

double two_form_from_surface(const SurfaceTangent& du_at_t,
                             const SurfaceTangent& dt_at_u,
                             const TwoFormOptions& opt) {
  const double s = opt.fd_step;
  const double d_t =
      (alpha_value(du_at_t(s), opt.table) - alpha_value(du_at_t(-s), opt.table)) /
      (2.0 * s);
  const double d_u =
      (alpha_value(dt_at_u(s), opt.table) - alpha_value(dt_at_u(-s), opt.table)) /
      (2.0 * s);
  return -(d_t - d_u);
}

Complex holomorphic_volume(const std::vector<TangentRep>& frame, int chart) {
  if (frame.empty()) throw FrameSizeMismatch("empty frame");
  const ProjectivePair& base = frame.front().base;
  const int n = base.n();
  if (static_cast<int>(frame.size()) != 2 * n) {
    throw FrameSizeMismatch("frame must contain exactly 2n vectors");
  }
  geometry::to_inhomogeneous(base, chart);  // chart validity check
  const Complex B = geometry::eval_B(base);
  const Complex B_chart = B / (base.z[chart] * base.w[chart]);

  pairs::CMatrix cols(2 * n, 2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    const auto pushed = geometry::push_tangent_to_chart(frame[j], chart);
    cols.col(j).head(n) = pushed.first;
    cols.col(j).tail(n) = pushed.second;
  }
  Complex Bpow = 1.0;
  for (int k = 0; k <= n; ++k) Bpow *= B_chart;
  return cols.determinant() / Bpow;
}

double check_cy_condition(const ProjectivePair& p, const PotentialTable& pt,
                          double fd_step) {
  const int chart = geometry::select_chart(p);
  const auto inhom = geometry::to_inhomogeneous(p, chart);
  const int n = p.n();
  const int dim = 2 * n;
  CVector zeta(dim);
  zeta.head(n) = inhom.first;
  zeta.tail(n) = inhom.second;

  const auto F = [&](const CVector& c) {
    const double z2 = 1.0 + c.head(n).squaredNorm();
    const double w2 = 1.0 + c.tail(n).squaredNorm();
    const Complex B = 1.0 + (c.head(n).transpose() * c.tail(n))(0, 0);
    const double Bsq = std::norm(B);
    if (Bsq < geometry::kPivotEps * z2 * w2) {
      throw DegeneratePoint("pairing vanished during Hessian sampling");
    }
    return pt.f_at(z2 * w2 / Bsq);
  };

  const double s = fd_step;
  const auto second_diff = [&](int a, bool a_imag, int b, bool b_imag) {
    const Complex da = a_imag ? Complex(0.0, s) : Complex(s, 0.0);
    const Complex db = b_imag ? Complex(0.0, s) : Complex(s, 0.0);
    CVector c = zeta;
    c[a] += da;
    c[b] += db;
    const double fpp = F(c);
    c = zeta;
    c[a] += da;
    c[b] -= db;
    const double fpm = F(c);
    c = zeta;
    c[a] -= da;
    c[b] += db;
    const double fmp = F(c);
    c = zeta;
    c[a] -= da;
    c[b] -= db;
    const double fmm = F(c);
    return (fpp - fpm - fmp + fmm) / (4.0 * s * s);
  };

  pairs::CMatrix H(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const double dxx = second_diff(a, false, b, false);
      const double dyy = second_diff(a, true, b, true);
      const double dxy = second_diff(a, false, b, true);
      const double dyx = second_diff(a, true, b, false);
      H(a, b) = 0.25 * Complex(dxx + dyy, dxy - dyx);
    }
  }
  const pairs::CMatrix Hs = 0.5 * (H + H.adjoint());

  const Complex B = eval_B(p) / (p.z[chart] * p.w[chart]);
  double target = 1.0;
  const double Bsq = std::norm(B);
  for (int k = 0; k <= n; ++k) target /= Bsq;
  return std::abs(Hs.determinant() - target) / target;
}

void write_csv(const PotentialTable& pt, std::ostream& os) {
  os << "N,h,hprime\n";
  char buf[128];
  for (size_t k = 0; k < pt.grid.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", pt.grid[k], pt.h[k],
                  pt.hprime[k]);
    os << buf;
  }
}

}  // namespace slag::stenzel
