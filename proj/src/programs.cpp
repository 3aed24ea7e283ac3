#include "qcc/programs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcc {

const char* to_string(ProgramTag t) {
  switch (t) {
    case ProgramTag::ns: return "ns";
    case ProgramTag::mc: return "mc";
    case ProgramTag::ns_fixed: return "ns-fixed";
    case ProgramTag::mc_fixed: return "mc-fixed";
  }
  return "unknown";
}

namespace {

void check_M(int M) {
  if (M < 1) throw InputError("M must be a positive integer");
}

void check_state(const CMatrix& rho, int d) {
  if (rho.rows() != d || rho.cols() != d) throw InputError("rho: dimension does not match channel input");
  require_hermitian(rho, "rho");
  if (std::abs(trace_re(rho) - 1.0) > 1e-9 || min_eigenvalue(rho) < -1e-9)
    throw InputError("rho: not a density matrix");
}

// ρ = V diag(r) V† restricted to eigenvalues above a cutoff.
struct Frame {
  CMatrix V;
  RVector r;
};

Frame support_frame(const CMatrix& rho, double cutoff, bool renormalize) {
  const Spectrum s = eigh(rho);
  int k = 0;
  while (k < s.values.size() && s.values(k) > cutoff) ++k;
  Frame f{s.vectors.leftCols(k), s.values.head(k)};
  if (renormalize && k > 0) f.r /= f.r.sum();
  return f;
}

CMatrix diag(const RVector& v) { return v.cast<cplx>().asDiagonal(); }

CMatrix reduced_marginal(const CMatrix& O, const RVector& r, int dB) {
  const SubsystemShape sh{static_cast<int>(r.size()), dB};
  return hermitize(partial_trace(kron(diag(r), identity(dB)) * O, sh, {1}));
}

// Repairs a near-feasible O on supp(ρ)⊗B so that the resulting Λ is exactly feasible.
NsSolution assemble(const ChoiMatrix& J, int M, ProgramTag tag, const Frame& f, CMatrix O) {
  const int dB = J.dim_out;
  const int k = static_cast<int>(f.r.size());
  O = hermitize(O);
  const double a0 = is_ns_like(tag) ? 1.0 / M : 1.0 / (M + 1);
  if (is_ns_like(tag)) {
    const CMatrix D = identity(dB) / static_cast<double>(M) - reduced_marginal(O, f.r, dB);
    O += kron(identity(k), D);
  }
  const Spectrum s = eigh(O);
  const double lo = std::max(0.0, -s.values.minCoeff());
  const double hi = std::max(0.0, s.values.maxCoeff() - 1.0);
  double t = 0;
  if (lo > 0) t = std::max(t, lo / (lo + a0));
  if (hi > 0) t = std::max(t, 1.0 - a0 > 0 ? hi / (hi + 1.0 - a0) : 1.0);
  if (t > 0) O = (1.0 - t) * O + t * a0 * identity(k * dB);
  if (!is_ns_like(tag)) {
    const double lm = max_eigenvalue(reduced_marginal(O, f.r, dB));
    if (lm > 1.0 / M) O *= (1.0 / M) / lm;
  }
  const CMatrix half = kron(f.V * diag(f.r.cwiseSqrt()), identity(dB));
  NsSolution sol;
  sol.lambda = hermitize(half * O * half.adjoint());
  sol.rho = hermitize(f.V * diag(f.r) * f.V.adjoint());
  sol.value = inner_re(sol.lambda, J.op);
  sol.tag = tag;
  sol.M = M;
  sol.dim_in = J.dim_in;
  sol.dim_out = J.dim_out;
  sol.channel = J.source;
  return sol;
}

void attach(NsSolution& s, const SdpSolution& sdp) {
  s.solver_value = sdp.primal_value;
  s.dual_value = sdp.dual_value;
  s.gap = sdp.gap;
  s.residual = std::max(sdp.primal_residual, sdp.dual_residual);
  s.iterations = sdp.iterations;
}

void require_optimal(const SdpSolution& s, const char* what) {
  if (s.status != SdpStatus::optimal)
    throw SolverError(std::string(what) + ": solver stopped with status " + to_string(s.status) +
                      " (gap " + std::to_string(s.gap) + ")");
}

NsSolution trivial_solution(const ChoiMatrix& J, int M, ProgramTag tag, const CMatrix& rho) {
  const Frame f = support_frame(rho, kRankTol * std::max(1.0, operator_norm(rho)), false);
  const int k = static_cast<int>(f.r.size());
  NsSolution s = assemble(J, M, tag, f, identity(k * J.dim_out));
  s.rho = rho;
  s.solver_value = s.dual_value = s.value;
  return s;
}

NsSolution solve_free(const ChoiMatrix& J, int M, ProgramTag tag, const SolverOptions& opts) {
  check_M(M);
  const int dR = J.dim_in, dB = J.dim_out;
  if (tag == ProgramTag::ns && M == 1) return trivial_solution(J, M, tag, identity(dR) / static_cast<double>(dR));

  HermitianSdp sdp;
  const int rho = sdp.add_block("rho", dR);
  const int lam = sdp.add_block("lambda", dR * dB);
  sdp.add_objective(lam, J.op);
  const SubsystemShape sh{dR, dB};
  sdp.add_psd(AffineExpr(dR * dB).add(lam, maps::identity()), "lambda >= 0");
  sdp.add_psd(AffineExpr(dR * dB).add(rho, maps::kron_identity_right(dB)).add(lam, maps::scaled(-1, maps::identity())),
              "rho x I - lambda >= 0");
  sdp.add_equality(AffineExpr(CMatrix::Constant(1, 1, -1.0)).add(rho, maps::trace()), "tr rho = 1");
  const CMatrix target = identity(dB) / static_cast<double>(M);
  if (tag == ProgramTag::ns) {
    sdp.add_equality(AffineExpr(CMatrix(-target)).add(lam, maps::partial_trace(sh, {1})), "tr_R lambda = I/M");
  } else {
    sdp.add_psd(AffineExpr(target).add(lam, maps::scaled(-1, maps::partial_trace(sh, {1}))), "tr_R lambda <= I/M");
  }
  const CMatrix rho0 = identity(dR) / static_cast<double>(dR);
  sdp.set_initial(rho, rho0);
  sdp.set_initial(lam, kron(rho0, identity(dB)) / static_cast<double>(M + 1));

  const SdpSolution res = solve(sdp, opts);
  require_optimal(res, to_string(tag));

  // The solver's ρ carries interior-point noise on its kernel; try a few cutoffs and keep the best repair.
  NsSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  for (double cutoff : {1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5}) {
    const Frame f = support_frame(res.blocks[rho], cutoff, true);
    if (f.r.size() == 0) continue;
    const CMatrix inv_half = kron(diag(f.r.cwiseSqrt().cwiseInverse()) * f.V.adjoint(), identity(dB));
    const CMatrix O = inv_half * res.blocks[lam] * inv_half.adjoint();
    NsSolution cand = assemble(J, M, tag, f, O);
    if (cand.value > best.value) best = std::move(cand);
  }
  attach(best, res);
  return best;
}

NsSolution solve_fixed(const ChoiMatrix& J, int M, const CMatrix& rho_in, ProgramTag tag, const SolverOptions& opts) {
  check_M(M);
  check_state(rho_in, J.dim_in);
  const int dB = J.dim_out;
  if (M == 1) return trivial_solution(J, M, tag, rho_in);

  const Frame f = support_frame(rho_in, kRankTol * std::max(1.0, operator_norm(rho_in)), false);
  const int k = static_cast<int>(f.r.size());
  const CMatrix half = kron(f.V * diag(f.r.cwiseSqrt()), identity(dB));
  const CMatrix K = hermitize(half.adjoint() * J.op * half);
  const SubsystemShape sh{k, dB};
  const CMatrix weight = kron(diag(f.r), identity(dB));

  HermitianSdp sdp;
  const int o = sdp.add_block("O", k * dB);
  sdp.add_objective(o, K);
  sdp.add_psd(AffineExpr(k * dB).add(o, maps::identity()), "O >= 0");
  sdp.add_psd(AffineExpr(identity(k * dB)).add(o, maps::scaled(-1, maps::identity())), "O <= I");
  LinearMap marg = [weight, sh](const CMatrix& x) {
    return hermitize(partial_trace(CMatrix(weight * x), sh, {1}));
  };
  const CMatrix target = identity(dB) / static_cast<double>(M);
  if (is_ns_like(tag)) {
    sdp.add_equality(AffineExpr(CMatrix(-target)).add(o, marg), "tr_R (rho x I) O = I/M");
    sdp.set_initial(o, identity(k * dB) / static_cast<double>(M));
  } else {
    sdp.add_psd(AffineExpr(target).add(o, maps::scaled(-1, marg)), "tr_R (rho x I) O <= I/M");
    sdp.set_initial(o, identity(k * dB) / static_cast<double>(M + 1));
  }
  const SdpSolution res = solve(sdp, opts);
  require_optimal(res, to_string(tag));
  NsSolution s = assemble(J, M, tag, f, res.blocks[o]);
  s.rho = rho_in;
  attach(s, res);
  return s;
}

}  // namespace

FeasibilityReport check_feasible(const NsSolution& s, double tol) {
  FeasibilityReport r;
  const int dB = s.dim_out;
  r.lambda_min_eig = min_eigenvalue(s.lambda);
  r.upper_min_eig = min_eigenvalue(kron(s.rho, identity(dB)) - s.lambda);
  const CMatrix marg = partial_trace(s.lambda, s.shape(), {1});
  const CMatrix target = identity(dB) / static_cast<double>(s.M);
  if (is_ns_like(s.tag))
    r.marginal_error = (marg - target).cwiseAbs().maxCoeff();
  else
    r.marginal_error = std::max(0.0, max_eigenvalue(marg - target));
  r.rho_error = std::max(std::abs(trace_re(s.rho) - 1.0), std::max(0.0, -min_eigenvalue(s.rho)));
  r.feasible = r.lambda_min_eig >= -tol && r.upper_min_eig >= -tol && r.marginal_error <= tol && r.rho_error <= tol;
  return r;
}

NsSolution ns_success(const ChoiMatrix& J, int M, const SolverOptions& opts) {
  return solve_free(J, M, ProgramTag::ns, opts);
}

NsSolution mc_success(const ChoiMatrix& J, int M, const SolverOptions& opts) {
  return solve_free(J, M, ProgramTag::mc, opts);
}

NsSolution ns_success_fixed(const ChoiMatrix& J, int M, const CMatrix& rho, const SolverOptions& opts) {
  return solve_fixed(J, M, rho, ProgramTag::ns_fixed, opts);
}

NsSolution mc_success_fixed(const ChoiMatrix& J, int M, const CMatrix& rho, const SolverOptions& opts) {
  return solve_fixed(J, M, rho, ProgramTag::mc_fixed, opts);
}

double mc_dual_objective(const ChoiMatrix& J, int M, const CMatrix& rho, const CMatrix& Z) {
  const CMatrix h = kron(frac_power(rho, 0.5), identity(J.dim_out));
  const CMatrix op = h * J.op * h - static_cast<double>(M) * kron(rho, Z);
  return trace_re(positive_part(hermitize(op))) + trace_re(Z);
}

DualResult mc_success_dual_fixed(const ChoiMatrix& J, int M, const CMatrix& rho, const SolverOptions& opts) {
  check_M(M);
  check_state(rho, J.dim_in);
  const int dR = J.dim_in, dB = J.dim_out, n = dR * dB;
  const CMatrix h = kron(frac_power(rho, 0.5), identity(dB));
  const CMatrix K = hermitize(h * J.op * h);

  HermitianSdp sdp;
  const int t = sdp.add_block("T", n);
  const int z = sdp.add_block("Z", dB);
  sdp.add_objective(t, -identity(n));
  sdp.add_objective(z, -identity(dB));
  sdp.add_psd(AffineExpr(n).add(t, maps::identity()), "T >= 0");
  sdp.add_psd(AffineExpr(dB).add(z, maps::identity()), "Z >= 0");
  const CMatrix rhoM = static_cast<double>(M) * rho;
  sdp.add_psd(AffineExpr(CMatrix(-K))
                  .add(t, maps::identity())
                  .add(z, [rhoM](const CMatrix& x) { return kron(rhoM, x); }),
              "T - K + M rho x Z >= 0");
  sdp.set_initial(t, (1.0 + operator_norm(K)) * identity(n));
  sdp.set_initial(z, identity(dB));
  const SdpSolution res = solve(sdp, opts);
  require_optimal(res, "mc-dual");
  DualResult out;
  out.Z = positive_part(res.blocks[z]);
  // Evaluate the dual expression at the returned Z so the value is an exact upper bound.
  out.value = mc_dual_objective(J, M, rho, out.Z);
  out.gap = res.gap;
  out.iterations = res.iterations;
  return out;
}

double hypothesis_test_value(const CMatrix& rho, const CMatrix& sigma, double eps, const SolverOptions& opts) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("eps must lie in [0, 1)");
  if (rho.rows() != sigma.rows()) throw InputError("rho and sigma have different dimensions");
  check_state(rho, static_cast<int>(rho.rows()));
  check_state(sigma, static_cast<int>(sigma.rows()));
  const int d = static_cast<int>(rho.rows());
  const CMatrix ker = identity(d) - support_projector(sigma);
  if (trace_re(rho * ker) >= 1.0 - eps - 1e-12) return std::numeric_limits<double>::infinity();
  if (eps == 0.0) {
    const double v = trace_re(sigma * support_projector(rho));
    return v > 0 ? -std::log(v) : std::numeric_limits<double>::infinity();
  }
  HermitianSdp sdp;
  const int o = sdp.add_block("O", d);
  sdp.add_objective(o, -sigma);
  sdp.add_psd(AffineExpr(d).add(o, maps::identity()), "O >= 0");
  sdp.add_psd(AffineExpr(identity(d)).add(o, maps::scaled(-1, maps::identity())), "O <= I");
  sdp.add_psd(AffineExpr(CMatrix::Constant(1, 1, -(1.0 - eps))).add(o, maps::pairing(rho)), "tr rho O >= 1 - eps");
  sdp.set_initial(o, (1.0 - eps / 2) * identity(d));
  const SdpSolution res = solve(sdp, opts);
  require_optimal(res, "dh");
  const double v = -res.primal_value;
  return v > 0 ? -std::log(v) : std::numeric_limits<double>::infinity();
}

SymmetrizeReport symmetrize_check(const KrausChannel& channel, int M, const SolverOptions& opts) {
  const KrausChannel n2 = power(channel, 2);
  const ChoiMatrix J = choi_of(n2);
  const NsSolution s = ns_success(J, M, opts);
  const int dA = channel.dim_in, dB = channel.dim_out;
  const SubsystemShape rr{dA, dA};
  const SubsystemShape rrbb{dA, dA, dB, dB};
  const CMatrix rho = 0.5 * (s.rho + permute_subsystems(s.rho, rr, {1, 0}));
  const CMatrix lam = 0.5 * (s.lambda + permute_subsystems(s.lambda, rrbb, {1, 0, 3, 2}));
  NsSolution sym = s;
  sym.rho = hermitize(rho);
  sym.lambda = hermitize(lam);
  sym.value = inner_re(sym.lambda, J.op);
  const FeasibilityReport f = check_feasible(sym, 1e-9);
  SymmetrizeReport r;
  r.value = s.value;
  r.symmetrized_value = sym.value;
  r.lambda_min_eig = f.lambda_min_eig;
  r.upper_min_eig = f.upper_min_eig;
  r.marginal_error = f.marginal_error;
  r.pass = f.feasible && std::abs(sym.value - s.value) <= 1e-6;
  return r;
}

}  // namespace qcc
