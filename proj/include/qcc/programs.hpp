#pragma once

#include <string>

#include "qcc/channel.hpp"
#include "qcc/sdp.hpp"

namespace qcc {

enum class ProgramTag { ns, mc, ns_fixed, mc_fixed };
const char* to_string(ProgramTag t);
inline bool is_ns_like(ProgramTag t) { return t == ProgramTag::ns || t == ProgramTag::ns_fixed; }

/// Feasible pair (ρ_R, Λ_RB) with objective Tr[Λ J].
struct NsSolution {
  CMatrix rho;
  CMatrix lambda;
  double value = 0.0;
  ProgramTag tag = ProgramTag::ns;
  int M = 1;
  int dim_in = 0;
  int dim_out = 0;
  std::string channel;
  // Solver diagnostics; zero for closed-form cases.
  double solver_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double residual = 0.0;
  int iterations = 0;

  SubsystemShape shape() const { return {dim_in, dim_out}; }
};

struct FeasibilityReport {
  double lambda_min_eig = 0.0;   // λ_min(Λ)
  double upper_min_eig = 0.0;    // λ_min(ρ⊗I − Λ)
  double marginal_error = 0.0;   // NS: ‖Tr_R Λ − I/M‖_max; MC: max(λ_max(Tr_R Λ) − 1/M, 0)
  double rho_error = 0.0;        // |Tr ρ − 1| and negativity of ρ
  bool feasible = false;
};

FeasibilityReport check_feasible(const NsSolution& s, double tol = 1e-8);

NsSolution ns_success(const ChoiMatrix& J, int M, const SolverOptions& opts = {});
NsSolution mc_success(const ChoiMatrix& J, int M, const SolverOptions& opts = {});
NsSolution ns_success_fixed(const ChoiMatrix& J, int M, const CMatrix& rho, const SolverOptions& opts = {});
NsSolution mc_success_fixed(const ChoiMatrix& J, int M, const CMatrix& rho, const SolverOptions& opts = {});

struct DualResult {
  double value = 0.0;
  double gap = 0.0;
  int iterations = 0;
  CMatrix Z;
};
/// inf_{Z ≽ 0} Tr[(ρ^{1/2} J ρ^{1/2} − M ρ⊗Z)_+] + Tr Z
DualResult mc_success_dual_fixed(const ChoiMatrix& J, int M, const CMatrix& rho, const SolverOptions& opts = {});
/// Value of the dual expression at a given Z (no optimization).
double mc_dual_objective(const ChoiMatrix& J, int M, const CMatrix& rho, const CMatrix& Z);

/// −log min{Tr[σO] : 0 ≼ O ≼ I, Tr[ρO] ≥ 1 − ε}; +∞ when the minimum is 0.
double hypothesis_test_value(const CMatrix& rho, const CMatrix& sigma, double eps, const SolverOptions& opts = {});

struct SymmetrizeReport {
  bool pass = false;
  double value = 0.0;
  double symmetrized_value = 0.0;
  double lambda_min_eig = 0.0;
  double upper_min_eig = 0.0;
  double marginal_error = 0.0;
};
/// Swap-averages an optimal NS pair of N⊗N and checks it stays optimal and feasible.
SymmetrizeReport symmetrize_check(const KrausChannel& channel, int M, const SolverOptions& opts = {});

}  // namespace qcc
