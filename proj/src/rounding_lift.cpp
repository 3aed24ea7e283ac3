#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qcc/report.hpp"
#include "qcc/rounding.hpp"

namespace qcc {

void finalize_averages(ProtocolReport& r) {
  if (r.per_message.empty()) {
    r.avg_success = 0.0;
  } else {
    r.avg_success = std::accumulate(r.per_message.begin(), r.per_message.end(), 0.0) /
                    static_cast<double>(r.per_message.size());
  }
  r.avg_error = 1.0 - r.avg_success;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

CMatrix test_operator(const NsSolution& ns) {
  const CMatrix w = kron(frac_power(ns.rho, -0.5), identity(ns.dim_out));
  return hermitize(w * ns.lambda * w);
}

CMatrix channel_state(const ChoiMatrix& J, const CMatrix& rho) {
  const CMatrix w = kron(frac_power(rho, 0.5), identity(J.dim_out));
  return hermitize(w * J.op * w);
}

bool has_classical_output(const ChoiMatrix& J, double tol) {
  const CMatrix d = dephase(J.op, 1, J.shape());
  return (d - J.op).cwiseAbs().maxCoeff() <= tol;
}

LiftResult mc_to_ns_lift(const NsSolution& mc, int M, const ChoiMatrix& J) {
  if (M < 2) throw InputError("mc_to_ns_lift: M must be at least 2");
  if (mc.M != M - 1) {
    throw InputError("mc_to_ns_lift: expected an MC solution at size " + std::to_string(M - 1) + ", got " +
                     std::to_string(mc.M));
  }
  if (mc.dim_in != J.dim_in || mc.dim_out != J.dim_out)
    throw InputError("mc_to_ns_lift: solution dimensions do not match the channel");
  NsSolution as_mc = mc;
  as_mc.tag = ProgramTag::mc;
  const auto feas = check_feasible(as_mc);
  if (!feas.feasible) {
    throw InputError("mc_to_ns_lift: input is not MC-feasible (lambda_min " + format_number(feas.lambda_min_eig) +
                     ", upper_min " + format_number(feas.upper_min_eig) + ", marginal " +
                     format_number(feas.marginal_error) + ")");
  }

  const auto shape = mc.shape();
  const int dB = mc.dim_out;
  const CMatrix pre = static_cast<double>(M - 1) * mc.lambda;
  const CMatrix marginal = partial_trace(pre, shape, {1});
  const CMatrix lifted_pre = hermitize(pre + kron(mc.rho, identity(dB) - marginal));

  LiftResult out;
  out.dominance_min_eig = min_eigenvalue(lifted_pre - pre);
  out.marginal_error = (partial_trace(lifted_pre, shape, {1}) - identity(dB)).cwiseAbs().maxCoeff();
  NsSolution& ns = out.ns;
  ns = mc;
  ns.tag = ProgramTag::ns;
  ns.M = M;
  ns.lambda = lifted_pre / static_cast<double>(M);
  ns.value = inner_re(ns.lambda, J.op);
  ns.solver_value = ns.dual_value = ns.gap = ns.residual = 0.0;
  ns.iterations = 0;
  return out;
}

}  // namespace qcc
