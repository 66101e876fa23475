#include "slag/complex_geometry.hpp"

#include <cmath>

namespace slag::geometry {

namespace {

void require_finite(const CVector& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(std::string(what) + ": non-finite entries");
  }
}

}  // namespace

ProjectivePair::ProjectivePair(CVector z_in, CVector w_in)
    : z(std::move(z_in)), w(std::move(w_in)) {
  if (z.size() != w.size() || z.size() < 2) {
    throw DimensionMismatch("ProjectivePair: z and w must share length >= 2");
  }
  require_finite(z, "ProjectivePair z");
  require_finite(w, "ProjectivePair w");
  if (z.norm() == 0.0 || w.norm() == 0.0) {
    throw Error("ProjectivePair: homogeneous vectors must be nonzero");
  }
}

TangentRep::TangentRep(ProjectivePair base_in, CVector dz_in, CVector dw_in)
    : base(std::move(base_in)), dz(std::move(dz_in)), dw(std::move(dw_in)) {
  if (dz.size() != base.z.size() || dw.size() != base.w.size()) {
    throw DimensionMismatch("TangentRep: velocity lengths must match the base");
  }
  require_finite(dz, "TangentRep dz");
  require_finite(dw, "TangentRep dw");
}

double eval_A(const ProjectivePair& p) { return p.z.squaredNorm() * p.w.squaredNorm(); }

Complex eval_B(const ProjectivePair& p) {
  const Complex b = p.z.transpose() * p.w;  // bilinear: no conjugation
  if (std::abs(b) < kPivotEps * p.z.norm() * p.w.norm()) {
    throw DegeneratePoint("eval_B: |B| below degeneracy epsilon");
  }
  return b;
}

double eval_N(const ProjectivePair& p) {
  const Complex b = eval_B(p);
  return eval_A(p) / std::norm(b);
}

double sinhc(double mu) {
  if (mu < 1e-4) {
    const double m2 = mu * mu;
    return 1.0 + m2 / 6.0 + m2 * m2 / 120.0;
  }
  return std::sinh(mu) / mu;
}

ProjectivePair phi_hat(const CVector& zeta, const CVector& xi, double tol) {
  if (zeta.size() != xi.size()) {
    throw DimensionMismatch("phi_hat: zeta and xi must share length");
  }
  const double nz = zeta.norm();
  if (nz == 0.0) {
    throw NotInBundle("phi_hat: zeta must be nonzero");
  }
  const double nxi = xi.norm();
  const Complex pairing = xi.transpose() * zeta.conjugate();
  if (std::abs(pairing) > tol * std::max(nxi * nz, 1e-300)) {
    throw NotInBundle("phi_hat: xi . conj(zeta) != 0");
  }
  const double mu = nxi / nz;
  const Complex i_unit(0.0, 1.0);
  const double ch = std::cosh(mu);
  const double sc = sinhc(mu);
  CVector z = ch * zeta + i_unit * sc * xi;
  CVector w = ch * zeta.conjugate() + i_unit * sc * xi.conjugate();
  return ProjectivePair(std::move(z), std::move(w));
}

int select_chart(const ProjectivePair& p) {
  int best = 0;
  double best_score = -1.0;
  for (int j = 0; j < p.z.size(); ++j) {
    const double score = std::min(std::abs(p.z[j]), std::abs(p.w[j]));
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

namespace {

void check_pivot(const ProjectivePair& p, int chart) {
  if (chart < 0 || chart >= p.z.size()) {
    throw ChartSingular("chart index out of range");
  }
  if (std::abs(p.z[chart]) < kPivotEps * p.z.norm() ||
      std::abs(p.w[chart]) < kPivotEps * p.w.norm()) {
    throw ChartSingular("chart pivot coordinate too small");
  }
}

}  // namespace

std::pair<CVector, CVector> to_inhomogeneous(const ProjectivePair& p, int chart) {
  check_pivot(p, chart);
  const int n = p.n();
  CVector zt(n), wt(n);
  int k = 0;
  for (int j = 0; j < n + 1; ++j) {
    if (j == chart) continue;
    zt[k] = p.z[j] / p.z[chart];
    wt[k] = p.w[j] / p.w[chart];
    ++k;
  }
  return {zt, wt};
}

std::pair<CVector, CVector> push_tangent_to_chart(const TangentRep& v, int chart) {
  const ProjectivePair& p = v.base;
  check_pivot(p, chart);
  const int n = p.n();
  const Complex zc = p.z[chart], wc = p.w[chart];
  const Complex dzc = v.dz[chart], dwc = v.dw[chart];
  CVector dzt(n), dwt(n);
  int k = 0;
  for (int j = 0; j < n + 1; ++j) {
    if (j == chart) continue;
    dzt[k] = (zc * v.dz[j] - p.z[j] * dzc) / (zc * zc);
    dwt[k] = (wc * v.dw[j] - p.w[j] * dwc) / (wc * wc);
    ++k;
  }
  return {dzt, dwt};
}

}  // namespace slag::geometry
