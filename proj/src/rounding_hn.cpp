#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qcc/report.hpp"
#include "qcc/rounding.hpp"

namespace qcc {

namespace {

/// op on (R_m, B) inside R_1 ⋯ R_{M'} B, with `rest` on each other R register.
CMatrix place_pair(const CMatrix& op, const CMatrix& rest, int m, int M_prime, int dR, int dB) {
  std::vector<CMatrix> factors{op};
  for (int l = 0; l < M_prime - 1; ++l) factors.push_back(rest);
  const CMatrix x = kron_all(factors);
  std::vector<int> in_dims{dR, dB};
  for (int l = 0; l < M_prime - 1; ++l) in_dims.push_back(dR);
  std::vector<int> perm;
  for (int k = 0, other = 2; k < M_prime; ++k) perm.push_back(k == m ? 0 : other++);
  perm.push_back(1);
  return permute_subsystems(x, SubsystemShape(in_dims), perm);
}

/// Square factor g with g g† = P for P ≽ 0 (negative eigenvalues clipped).
CMatrix psd_factor(const CMatrix& p) {
  const Spectrum sp = eigh(p);
  return sp.vectors * sp.values.cwiseMax(0.0).cwiseSqrt().cast<cplx>().asDiagonal();
}

}  // namespace

double hn_error_bound(double eps, int M, int M_prime, double c) {
  if (c <= 0.0) throw InputError("hn_error_bound: c must be positive");
  return (1.0 + c) * eps + (2.0 + c + 1.0 / c) * (M_prime - 1) / static_cast<double>(M);
}

InequalityCheck hn_inequality_check(const CMatrix& A, const CMatrix& B, double c) {
  if (c <= 0.0) throw InputError("hn_inequality_check: c must be positive");
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw InputError("hn_inequality_check: size mismatch");
  require_hermitian(A, "hn_inequality_check A");
  require_hermitian(B, "hn_inequality_check B");
  const int d = static_cast<int>(A.rows());
  const CMatrix s = frac_power(hermitize(A + B), -0.5);
  const CMatrix lhs = identity(d) - s * A * s;
  const CMatrix rhs = (1.0 + c) * (identity(d) - A) + (2.0 + c + 1.0 / c) * B;
  InequalityCheck out;
  out.min_eig = min_eigenvalue(hermitize(rhs - lhs));
  out.pass = out.min_eig >= -1e-9;
  return out;
}

ProtocolReport hn_protocol(const ChoiMatrix& J, const NsSolution& ns, int M_prime, double c) {
  if (!is_ns_like(ns.tag)) throw InputError("hn_protocol: expects an NS solution");
  if (M_prime < 1) throw InputError("hn_protocol: M' must be positive");
  if (ns.dim_in != J.dim_in || ns.dim_out != J.dim_out)
    throw InputError("hn_protocol: solution dimensions do not match the channel");
  const int dR = ns.dim_in, dB = ns.dim_out, M = ns.M;
  double D = dB;
  for (int l = 0; l < M_prime; ++l) D *= dR;
  if (D > kMaxDenseDim) throw InputError("hn_protocol: |R|^M' |B| exceeds the dense simulation limit");
  if (!check_feasible(ns).feasible) throw InputError("hn_protocol: input solution is not NS-feasible");

  ProtocolReport rep;
  rep.protocol = "hn";
  rep.channel = J.source;
  rep.M = M;
  rep.M_prime = M_prime;

  // Square-root measurement from a factorization S = G G†, G = [G_1 ⋯ G_M'] with G_m G_m† = O_m.
  // With the thin SVD G = U Σ W†, the elements are U W_m† W_m U†, so Σ_m Ξ_m = U U† without
  // forming S^{-1/2}.
  const CMatrix g = psd_factor(test_operator(ns));
  const CMatrix tau = channel_state(J, ns.rho);
  const CMatrix I_R = identity(dR);
  const int n = static_cast<int>(D);
  CMatrix G(n, n * M_prime);
  for (int m = 0; m < M_prime; ++m) G.middleCols(m * n, n) = place_pair(g, I_R, m, M_prime, dR, dB);
  const Eigen::BDCSVD<CMatrix> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-7 * sv(0)) ++rank;
  const CMatrix U = svd.matrixU().leftCols(rank);
  const CMatrix W = svd.matrixV().leftCols(rank);

  rep.per_message.resize(M_prime);
  CMatrix povm_sum = CMatrix::Zero(n, n);
  for (int m = 0; m < M_prime; ++m) {
    const CMatrix zeta = place_pair(tau, ns.rho, m, M_prime, dR, dB);
    const CMatrix Wm = W.middleRows(m * n, n);
    const CMatrix xi = hermitize(U * (Wm.adjoint() * Wm) * U.adjoint());
    rep.per_message[m] = inner_re(zeta, xi);
    povm_sum += xi;
  }
  const double povm_excess = std::max(0.0, max_eigenvalue(hermitize(povm_sum)) - 1.0);
  finalize_averages(rep);

  const double eps = 1.0 - ns.value;
  rep.bound = hn_error_bound(eps, M, M_prime, c);
  const double floor = ns.value - 5.0 * std::sqrt(static_cast<double>(M_prime) / M);
  rep.max_residual = std::max(povm_excess, std::max(0.0, rep.avg_error - rep.bound));
  rep.pass = rep.avg_error <= rep.bound + 1e-8 && rep.avg_success >= floor - 1e-8 && povm_excess <= 1e-9;
  if (!rep.pass) {
    rep.diagnostic = "error " + format_number(rep.avg_error) + " vs bound " + format_number(rep.bound) +
                     ", success floor " + format_number(floor) +
                     ", povm excess " + format_number(povm_excess);
  }
  return rep;
}

}  // namespace qcc
