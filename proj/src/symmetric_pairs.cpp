#include "slag/symmetric_pairs.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <utility>

namespace slag::pairs {

namespace {

constexpr Complex kI(0.0, 1.0);

// Lexicographic index pairs (i, j), 1 <= i < j <= 5, used as the coordinate
// order of the antisymmetric 5x5 model.
constexpr std::array<std::pair<int, int>, 10> kPairs5 = {{{1, 2},
                                                         {1, 3},
                                                         {1, 4},
                                                         {1, 5},
                                                         {2, 3},
                                                         {2, 4},
                                                         {2, 5},
                                                         {3, 4},
                                                         {3, 5},
                                                         {4, 5}}};

int pair5_index(int i, int j) {
  for (int k = 0; k < 10; ++k) {
    if (kPairs5[k].first == i && kPairs5[k].second == j) return k;
  }
  throw Error("pair5_index: bad pair");
}

CMatrix zero_matrix(int rows) { return CMatrix::Zero(rows, rows); }

}  // namespace

int SymmetricPairCase::ncoord() const {
  switch (kind) {
    case CaseKind::AIIIAIII:
      return p + q;
    case CaseKind::AIII:
      return 2 * m;
    case CaseKind::BDI:
      return m;
    case CaseKind::DIII:
      return 10;
  }
  throw Error("ncoord: bad kind");
}

int SymmetricPairCase::ambient_rows() const {
  switch (kind) {
    case CaseKind::AIIIAIII:
      return p + q + 2;
    case CaseKind::AIII:
    case CaseKind::BDI:
      return m + 2;
    case CaseKind::DIII:
      return 10;
  }
  throw Error("ambient_rows: bad kind");
}

int SymmetricPairCase::dim_k() const {
  switch (kind) {
    case CaseKind::AIIIAIII:
      return p * p + q * q;
    case CaseKind::AIII:
      return m * m + 3;
    case CaseKind::BDI:
      return m * (m - 1) / 2 + 1;
    case CaseKind::DIII:
      return 25;
  }
  throw Error("dim_k: bad kind");
}

double SymmetricPairCase::strip_halfwidth() const {
  return kind == CaseKind::AIIIAIII ? M_PI / 2.0 : M_PI / 4.0;
}

std::string SymmetricPairCase::label() const {
  switch (kind) {
    case CaseKind::AIIIAIII:
      return "aiii-aiii";
    case CaseKind::AIII:
      return "aiii";
    case CaseKind::BDI:
      return "bdi";
    case CaseKind::DIII:
      return "diii";
  }
  return "?";
}

SymmetricPairCase aiii_aiii_case(int p, int q) {
  if (q < 1 || p < q || p <= 1) {
    throw Error("aiii-aiii requires p >= q >= 1 and p > 1");
  }
  SymmetricPairCase c;
  c.kind = CaseKind::AIIIAIII;
  c.p = p;
  c.q = q;
  return c;
}

SymmetricPairCase aiii_case(int m) {
  if (m < 3) throw Error("aiii requires m >= 3");
  SymmetricPairCase c;
  c.kind = CaseKind::AIII;
  c.m = m;
  return c;
}

SymmetricPairCase bdi_case(int m) {
  if (m < 3) throw Error("bdi requires m >= 3");
  SymmetricPairCase c;
  c.kind = CaseKind::BDI;
  c.m = m;
  return c;
}

SymmetricPairCase diii_case() {
  SymmetricPairCase c;
  c.kind = CaseKind::DIII;
  return c;
}

CMatrix embed_p(const SymmetricPairCase& c, const CVector& v) {
  if (v.size() != c.ncoord()) {
    throw DimensionMismatch("embed_p: coordinate length mismatch");
  }
  const int rows = c.ambient_rows();
  CMatrix M = zero_matrix(rows);
  switch (c.kind) {
    case CaseKind::AIIIAIII: {
      const int p = c.p, q = c.q, o = p + 1;
      for (int j = 0; j < p; ++j) {
        M(0, 1 + j) = v[j];
        M(1 + j, 0) = -std::conj(v[j]);
      }
      for (int j = 0; j < q; ++j) {
        M(o, o + 1 + j) = v[p + j];
        M(o + 1 + j, o) = -std::conj(v[p + j]);
      }
      return M;
    }
    case CaseKind::AIII: {
      const int m = c.m;
      for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < m; ++k) {
          const Complex x = v[r * m + k];
          M(r, 2 + k) = x;
          M(2 + k, r) = -std::conj(x);
        }
      }
      return M;
    }
    case CaseKind::BDI: {
      const int m = c.m;
      for (int k = 0; k < m; ++k) {
        M(0, 2 + k) = v[k].real();
        M(1, 2 + k) = v[k].imag();
        M(2 + k, 0) = -v[k].real();
        M(2 + k, 1) = -v[k].imag();
      }
      return M;
    }
    case CaseKind::DIII: {
      Eigen::Matrix<double, 5, 5> X = Eigen::Matrix<double, 5, 5>::Zero();
      Eigen::Matrix<double, 5, 5> Y = Eigen::Matrix<double, 5, 5>::Zero();
      for (int k = 0; k < 10; ++k) {
        const auto [i, j] = kPairs5[k];
        X(i - 1, j - 1) = v[k].real();
        X(j - 1, i - 1) = -v[k].real();
        Y(i - 1, j - 1) = v[k].imag();
        Y(j - 1, i - 1) = -v[k].imag();
      }
      M.block(0, 0, 5, 5) = Y.cast<Complex>();
      M.block(0, 5, 5, 5) = X.cast<Complex>();
      M.block(5, 0, 5, 5) = X.cast<Complex>();
      M.block(5, 5, 5, 5) = -Y.cast<Complex>();
      return M;
    }
  }
  throw Error("embed_p: bad kind");
}

namespace {

// Raw inverse of embed_p without the membership check.
CVector project_p_raw(const SymmetricPairCase& c, const CMatrix& X) {
  CVector v(c.ncoord());
  switch (c.kind) {
    case CaseKind::AIIIAIII: {
      const int p = c.p, q = c.q, o = p + 1;
      for (int j = 0; j < p; ++j) v[j] = X(0, 1 + j);
      for (int j = 0; j < q; ++j) v[p + j] = X(o, o + 1 + j);
      return v;
    }
    case CaseKind::AIII: {
      const int m = c.m;
      for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < m; ++k) v[r * m + k] = X(r, 2 + k);
      }
      return v;
    }
    case CaseKind::BDI: {
      const int m = c.m;
      for (int k = 0; k < m; ++k) {
        v[k] = Complex(X(0, 2 + k).real(), X(1, 2 + k).real());
      }
      return v;
    }
    case CaseKind::DIII: {
      for (int k = 0; k < 10; ++k) {
        const auto [i, j] = kPairs5[k];
        v[k] = Complex(X(i - 1, j + 4).real(), X(i - 1, j - 1).real());
      }
      return v;
    }
  }
  throw Error("project_p: bad kind");
}

}  // namespace

CVector project_p(const SymmetricPairCase& c, const CMatrix& X) {
  if (X.rows() != c.ambient_rows() || X.cols() != c.ambient_rows()) {
    throw DimensionMismatch("project_p: ambient size mismatch");
  }
  CVector v = project_p_raw(c, X);
  const double scale = std::max(X.norm(), 1.0);
  if ((embed_p(c, v) - X).norm() > 1e-10 * scale) {
    throw NotInP("project_p: matrix is not in the embedded coordinate space");
  }
  return v;
}

CMatrix induced_operator(const SymmetricPairCase& c, const CMatrix& K) {
  if (K.rows() != c.ambient_rows() || K.cols() != c.ambient_rows()) {
    throw DimensionMismatch("induced_operator: ambient size mismatch");
  }
  const int n1 = c.ncoord();
  CMatrix op(n1, n1);
  for (int j = 0; j < n1; ++j) {
    CVector e = CVector::Zero(n1);
    e[j] = 1.0;
    const CMatrix P = embed_p(c, e);
    op.col(j) = project_p_raw(c, K * P - P * K);
  }
  return op;
}

namespace {

void push_named(const SymmetricPairCase& c, std::vector<LieAlgebraElement>& out,
                std::string label, CMatrix M) {
  out.push_back({std::move(label), M, induced_operator(c, M)});
}

}  // namespace

std::vector<LieAlgebraElement> basis_k(const SymmetricPairCase& c) {
  std::vector<LieAlgebraElement> out;
  const int rows = c.ambient_rows();
  switch (c.kind) {
    case CaseKind::AIIIAIII: {
      const int p = c.p, q = c.q, o = p + 1;
      for (int i = 1; i <= p; ++i) {
        for (int j = i + 1; j <= p; ++j) {
          CMatrix Z = zero_matrix(rows);
          Z(i, j) = -1.0;
          Z(j, i) = 1.0;
          push_named(c, out, "Z_" + std::to_string(i) + std::to_string(j), Z);
          CMatrix W = zero_matrix(rows);
          W(i, j) = kI;
          W(j, i) = kI;
          push_named(c, out, "W_" + std::to_string(i) + std::to_string(j), W);
        }
      }
      for (int k = 1; k < p; ++k) {
        CMatrix W = zero_matrix(rows);
        W(k, k) = kI;
        W(k + 1, k + 1) = -kI;
        push_named(c, out, "W_" + std::to_string(k), W);
      }
      for (int i = 1; i <= q; ++i) {
        for (int j = i + 1; j <= q; ++j) {
          CMatrix Z = zero_matrix(rows);
          Z(o + i, o + j) = -1.0;
          Z(o + j, o + i) = 1.0;
          push_named(c, out, "Zp_" + std::to_string(i) + std::to_string(j), Z);
          CMatrix W = zero_matrix(rows);
          W(o + i, o + j) = kI;
          W(o + j, o + i) = kI;
          push_named(c, out, "Wp_" + std::to_string(i) + std::to_string(j), W);
        }
      }
      for (int k = 1; k < q; ++k) {
        CMatrix W = zero_matrix(rows);
        W(o + k, o + k) = kI;
        W(o + k + 1, o + k + 1) = -kI;
        push_named(c, out, "Wp_" + std::to_string(k), W);
      }
      CMatrix J0 = zero_matrix(rows);
      J0(0, 0) = kI * static_cast<double>(p) / (p + 1.0);
      for (int i = 1; i <= p; ++i) J0(i, i) = -kI / (p + 1.0);
      J0(o, o) = kI * static_cast<double>(q) / (q + 1.0);
      for (int i = 1; i <= q; ++i) J0(o + i, o + i) = -kI / (q + 1.0);
      push_named(c, out, "J0", J0);
      CMatrix J1 = zero_matrix(rows);
      J1(0, 0) = kI * static_cast<double>(p) / (p + 1.0);
      for (int i = 1; i <= p; ++i) J1(i, i) = -kI / (p + 1.0);
      J1(o, o) = -kI * static_cast<double>(q) / (q + 1.0);
      for (int i = 1; i <= q; ++i) J1(o + i, o + i) = kI / (q + 1.0);
      push_named(c, out, "J1", J1);
      break;
    }
    case CaseKind::AIII: {
      const int m = c.m;
      CMatrix X1 = zero_matrix(rows);
      X1(0, 1) = -1.0;
      X1(1, 0) = 1.0;
      push_named(c, out, "X1", X1);
      CMatrix X2 = zero_matrix(rows);
      X2(0, 1) = kI;
      X2(1, 0) = kI;
      push_named(c, out, "X2", X2);
      CMatrix X3 = zero_matrix(rows);
      X3(0, 0) = kI;
      X3(1, 1) = -kI;
      push_named(c, out, "X3", X3);
      for (int i = 1; i <= m; ++i) {
        for (int j = i + 1; j <= m; ++j) {
          CMatrix Z = zero_matrix(rows);
          Z(1 + i, 1 + j) = -1.0;
          Z(1 + j, 1 + i) = 1.0;
          push_named(c, out, "Z_" + std::to_string(i) + std::to_string(j), Z);
          CMatrix W = zero_matrix(rows);
          W(1 + i, 1 + j) = kI;
          W(1 + j, 1 + i) = kI;
          push_named(c, out, "W_" + std::to_string(i) + std::to_string(j), W);
        }
      }
      for (int k = 1; k < m; ++k) {
        CMatrix W = zero_matrix(rows);
        W(1 + k, 1 + k) = kI;
        W(2 + k, 2 + k) = -kI;
        push_named(c, out, "W_" + std::to_string(k), W);
      }
      CMatrix J0 = zero_matrix(rows);
      for (int i = 0; i < 2; ++i) J0(i, i) = kI * static_cast<double>(m) / (m + 2.0);
      for (int i = 2; i < rows; ++i) J0(i, i) = -2.0 * kI / (m + 2.0);
      push_named(c, out, "J0", J0);
      break;
    }
    case CaseKind::BDI: {
      const int m = c.m;
      CMatrix J0 = zero_matrix(rows);
      J0(0, 1) = -1.0;
      J0(1, 0) = 1.0;
      push_named(c, out, "J0", J0);
      for (int i = 1; i <= m; ++i) {
        for (int j = i + 1; j <= m; ++j) {
          CMatrix Y = zero_matrix(rows);
          Y(1 + i, 1 + j) = -1.0;
          Y(1 + j, 1 + i) = 1.0;
          push_named(c, out, "Y_" + std::to_string(i) + std::to_string(j), Y);
        }
      }
      break;
    }
    case CaseKind::DIII: {
      const auto k_of = [](const Eigen::Matrix<double, 5, 5>& a,
                           const Eigen::Matrix<double, 5, 5>& s) {
        CMatrix M = CMatrix::Zero(10, 10);
        M.block(0, 0, 5, 5) = a.cast<Complex>();
        M.block(0, 5, 5, 5) = s.cast<Complex>();
        M.block(5, 0, 5, 5) = -s.cast<Complex>();
        M.block(5, 5, 5, 5) = a.cast<Complex>();
        return M;
      };
      using R5 = Eigen::Matrix<double, 5, 5>;
      for (const auto& [i, j] : kPairs5) {
        R5 S = R5::Zero();
        S(i - 1, j - 1) = -1.0;
        S(j - 1, i - 1) = 1.0;
        push_named(c, out, "Zt_" + std::to_string(i) + std::to_string(j),
                   k_of(S, R5::Zero()));
        R5 T = R5::Zero();
        T(i - 1, j - 1) = 1.0;
        T(j - 1, i - 1) = 1.0;
        push_named(c, out, "Wt_" + std::to_string(i) + std::to_string(j),
                   k_of(R5::Zero(), T));
      }
      for (int k = 1; k < 5; ++k) {
        R5 D = R5::Zero();
        D(k - 1, k - 1) = 1.0;
        D(k, k) = -1.0;
        push_named(c, out, "Wt_" + std::to_string(k), k_of(R5::Zero(), D));
      }
      push_named(c, out, "J0", k_of(R5::Zero(), 0.5 * R5::Identity()));
      break;
    }
  }
  return out;
}

const LieAlgebraElement& find_element(const std::vector<LieAlgebraElement>& basis,
                                      const std::string& label) {
  for (const auto& e : basis) {
    if (e.label == label) return e;
  }
  throw Error("find_element: no basis element named " + label);
}

namespace {

// sigma in homogeneous coordinates, no strip gate; used by slice_point and,
// behind the gate, by sigma_curve.
std::pair<CVector, CVector> sigma_raw(const SymmetricPairCase& c, Complex tau) {
  const int n1 = c.ncoord();
  CVector z = CVector::Zero(n1), w = CVector::Zero(n1);
  const Complex ct = std::cos(tau), st = std::sin(tau);
  switch (c.kind) {
    case CaseKind::AIIIAIII:
      z[0] = ct;
      z[c.p] = st;
      w = z;
      break;
    case CaseKind::AIII:
      z[0] = ct;
      z[c.m + 1] = st;
      w = z;
      break;
    case CaseKind::BDI:
      z[0] = ct;
      z[1] = kI * st;
      w[0] = ct;
      w[1] = -kI * st;
      break;
    case CaseKind::DIII: {
      const int a = pair5_index(1, 2), b = pair5_index(3, 4);
      z[a] = kI * ct;
      z[b] = kI * st;
      w[a] = -kI * ct;
      w[b] = -kI * st;
      break;
    }
  }
  return {z, w};
}

std::pair<CVector, CVector> dsigma_raw(const SymmetricPairCase& c, Complex tau) {
  const int n1 = c.ncoord();
  CVector dz = CVector::Zero(n1), dw = CVector::Zero(n1);
  const Complex ct = std::cos(tau), st = std::sin(tau);
  switch (c.kind) {
    case CaseKind::AIIIAIII:
      dz[0] = -st;
      dz[c.p] = ct;
      dw = dz;
      break;
    case CaseKind::AIII:
      dz[0] = -st;
      dz[c.m + 1] = ct;
      dw = dz;
      break;
    case CaseKind::BDI:
      dz[0] = -st;
      dz[1] = kI * ct;
      dw[0] = -st;
      dw[1] = -kI * ct;
      break;
    case CaseKind::DIII: {
      const int a = pair5_index(1, 2), b = pair5_index(3, 4);
      dz[a] = -kI * st;
      dz[b] = kI * ct;
      dw[a] = kI * st;
      dw[b] = -kI * ct;
      break;
    }
  }
  return {dz, dw};
}

void check_strip(const SymmetricPairCase& c, Complex tau) {
  const double re = std::abs(tau.real());
  if (!(re > 0.0 && re < c.strip_halfwidth())) {
    throw OutOfStrip("tau outside the open strip 0 < |Re tau| < halfwidth");
  }
}

}  // namespace

CVector slice_point(const SymmetricPairCase& c, double theta) {
  return sigma_raw(c, Complex(theta, 0.0)).first;
}

ProjectivePair sigma_curve(const SymmetricPairCase& c, Complex tau) {
  check_strip(c, tau);
  auto [z, w] = sigma_raw(c, tau);
  return ProjectivePair(std::move(z), std::move(w));
}

TangentRep sigma_velocity(const SymmetricPairCase& c, Complex tau) {
  check_strip(c, tau);
  auto [z, w] = sigma_raw(c, tau);
  auto [dz, dw] = dsigma_raw(c, tau);
  return TangentRep(ProjectivePair(std::move(z), std::move(w)), std::move(dz),
                    std::move(dw));
}

TangentRep fundamental_vector(const LieAlgebraElement& X, const ProjectivePair& p) {
  if (X.induced.rows() != p.z.size()) {
    throw DimensionMismatch("fundamental_vector: operator size mismatch");
  }
  return TangentRep(p, X.induced * p.z, X.induced.conjugate() * p.w);
}

CMatrix rho_exp(const CMatrix& induced_op) { return induced_op.exp(); }

ProjectivePair act(const CMatrix& U, const ProjectivePair& p) {
  if (U.rows() != p.z.size()) {
    throw DimensionMismatch("act: operator size mismatch");
  }
  return ProjectivePair(U * p.z, U.conjugate() * p.w);
}

int orbit_tangent_rank(const SymmetricPairCase& c, const ProjectivePair& p) {
  const auto basis = basis_k(c);
  // Normalize the representatives so column magnitudes carry the natural
  // O(1) scale of the unit-size induced operators; the threshold floor below
  // then separates genuine directions from rounding noise even at fixed
  // points, where every column is numerically zero.
  const ProjectivePair pn(p.z / p.z.norm(), p.w / p.w.norm());
  const int chart = geometry::select_chart(pn);
  const int n = pn.n();
  Eigen::MatrixXd mat(4 * n, static_cast<int>(basis.size()));
  for (int col = 0; col < static_cast<int>(basis.size()); ++col) {
    const TangentRep v = fundamental_vector(basis[col], pn);
    auto [dzt, dwt] = geometry::push_tangent_to_chart(v, chart);
    for (int j = 0; j < n; ++j) {
      mat(j, col) = dzt[j].real();
      mat(n + j, col) = dwt[j].real();
      mat(2 * n + j, col) = dzt[j].imag();
      mat(3 * n + j, col) = dwt[j].imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double cutoff = 1e-8 * std::max(s[0], 1.0);
  int rank = 0;
  for (int j = 0; j < s.size(); ++j) {
    if (s[j] > cutoff) ++rank;
  }
  return rank;
}

}  // namespace slag::pairs
