#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qcc/report.hpp"
#include "qcc/rounding.hpp"

namespace qcc {

namespace {

CMatrix clamp_unit_interval(const CMatrix& o, double* moved) {
  Spectrum s = eigh(o);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double c = std::clamp(s.values(i), 0.0, 1.0);
    worst = std::max(worst, std::abs(c - s.values(i)));
    s.values(i) = c;
  }
  *moved = worst;
  return s.reconstruct();
}

CMatrix output_block(const CMatrix& x, int y, int dR, int dB) {
  CMatrix b(dR, dR);
  for (int i = 0; i < dR; ++i)
    for (int j = 0; j < dR; ++j) b(i, j) = x(i * dB + y, j * dB + y);
  return b;
}

CMatrix sqrt_complement(const CMatrix& o) {
  Spectrum s = eigh(o);
  for (Eigen::Index i = 0; i < s.values.size(); ++i) s.values(i) = std::sqrt(std::max(0.0, 1.0 - s.values(i)));
  return s.reconstruct();
}

}  // namespace

ProtocolReport qc_sequential_protocol(const ChoiMatrix& J, const NsSolution& ns, int M_prime) {
  if (!is_ns_like(ns.tag)) throw InputError("qc_sequential_protocol: expects an NS solution");
  if (M_prime < 1) throw InputError("qc_sequential_protocol: M' must be positive");
  if (ns.dim_in != J.dim_in || ns.dim_out != J.dim_out)
    throw InputError("qc_sequential_protocol: solution dimensions do not match the channel");
  if (!has_classical_output(J))
    throw InputError("qc_sequential_protocol: channel output is not classical, decoder tests would not commute");
  const int dR = ns.dim_in, dB = ns.dim_out, M = ns.M;
  double D = 1.0;
  for (int l = 0; l < M_prime; ++l) D *= dR;
  if (D > kMaxDenseDim) throw InputError("qc_sequential_protocol: |R|^M' exceeds the dense simulation limit");

  ProtocolReport rep;
  rep.protocol = "qc";
  rep.channel = J.source;
  rep.M = M;
  rep.M_prime = M_prime;

  NsSolution deph = ns;
  deph.lambda = dephase(ns.lambda, 1, ns.shape());
  const auto feas = check_feasible(deph);
  if (!feas.feasible) throw InputError("qc_sequential_protocol: input solution is not NS-feasible");
  const CMatrix O = test_operator(deph);
  const CMatrix tau = channel_state(J, ns.rho);

  std::vector<CMatrix> O_y(dB), tau_y(dB);
  double clamp_residual = 0.0;
  double value = 0.0, marginal_residual = 0.0;
  for (int y = 0; y < dB; ++y) {
    double moved = 0.0;
    O_y[y] = clamp_unit_interval(output_block(O, y, dR, dB), &moved);
    clamp_residual = std::max(clamp_residual, moved);
    tau_y[y] = output_block(tau, y, dR, dB);
    value += inner_re(tau_y[y], O_y[y]);
    marginal_residual = std::max(marginal_residual, std::abs(inner_re(ns.rho, O_y[y]) - 1.0 / M));
  }

  CMatrix O_full = CMatrix::Zero(dR * dB, dR * dB);
  for (int y = 0; y < dB; ++y)
    for (int i = 0; i < dR; ++i)
      for (int j = 0; j < dR; ++j) O_full(i * dB + y, j * dB + y) = O_y[y](i, j);
  const SubsystemShape three{dR, dB, dR};
  const CMatrix O1 = permute_subsystems(kron(O_full, identity(dR)), three, {0, 2, 1});
  const CMatrix O2 = kron(identity(dR), O_full);
  const double commutator = operator_norm(O1 * O2 - O2 * O1);
  if (commutator > 1e-9) {
    throw InputError("qc_sequential_protocol: decoder tests do not commute (norm " + format_number(commutator) + ")");
  }

  const SubsystemShape regs(std::vector<int>(M_prime, dR));
  const bool dense_povm_check = D <= 256;
  rep.per_message.assign(M_prime, 0.0);
  double povm_residual = 0.0;
  for (int y = 0; y < dB; ++y) {
    const CMatrix A = sqrt_complement(O_y[y]);
    for (int m = 0; m < M_prime; ++m) {
      std::vector<CMatrix> factors(M_prime, ns.rho);
      factors[m] = tau_y[y];
      CMatrix state = kron_all(factors);
      for (int l = 0; l < m; ++l) state = conjugate_local(A, l, regs, state);
      rep.per_message[m] += apply_local_left(O_y[y], m, regs, state).trace().real();
    }
    if (dense_povm_check) {
      const int d = static_cast<int>(D);
      CMatrix K = identity(d);
      CMatrix total = CMatrix::Zero(d, d);
      for (int m = 0; m < M_prime; ++m) {
        const CMatrix xi = K.adjoint() * embed(O_y[y], m, regs) * K;
        povm_residual = std::max(povm_residual, std::max(0.0, -min_eigenvalue(hermitize(xi))));
        total += xi;
        K = embed(A, m, regs) * K;
      }
      const CMatrix none = K.adjoint() * K;
      povm_residual = std::max(povm_residual, std::max(0.0, -min_eigenvalue(hermitize(none))));
      total += none;
      povm_residual = std::max(povm_residual, (total - identity(d)).cwiseAbs().maxCoeff());
    }
  }
  finalize_averages(rep);

  const double q = 1.0 - 1.0 / M;
  double worst = 0.0;
  for (int m = 0; m < M_prime; ++m)
    worst = std::max(worst, std::abs(rep.per_message[m] - std::pow(q, m) * value));
  rep.bound = static_cast<double>(M) / M_prime * (1.0 - std::pow(q, M_prime)) * value;
  worst = std::max(worst, std::abs(rep.avg_success - rep.bound));
  rep.max_residual = std::max({worst, povm_residual, marginal_residual, clamp_residual});
  rep.pass = rep.max_residual <= 1e-9;
  if (!rep.pass) {
    rep.diagnostic = "success residual " + format_number(worst) + ", povm residual " + format_number(povm_residual) +
                     ", marginal residual " + format_number(marginal_residual);
  } else if (!dense_povm_check) {
    rep.diagnostic = "povm validity not checked densely above dimension 256";
  }
  return rep;
}

}  // namespace qcc
