#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcc/channel.hpp"
#include "qcc/programs.hpp"
#include "qcc/random.hpp"

namespace qcc {

/// Outcome of a simulated entanglement-assisted coding strategy.
struct ProtocolReport {
  std::string protocol;
  std::string channel;
  int M = 0;
  int M_prime = 0;
  std::vector<double> per_message;
  double avg_success = 0.0;
  double avg_error = 0.0;
  double bound = 0.0;
  bool hypothesis_ok = true;
  int samples = 0;
  std::uint64_t seed = 0;
  double max_residual = 0.0;
  bool pass = false;
  std::string diagnostic;
};

/// Sets per-message list, average success and error.
void finalize_averages(ProtocolReport& r);

// --- MC → NS lift -----------------------------------------------------------

struct LiftResult {
  NsSolution ns;             // feasible for the NS program at size M
  double dominance_min_eig;  // λ_min(Λ′_pre − Λ_pre)
  double marginal_error;     // ‖Tr_R Λ′_pre − I‖_max
};
/// Turns an MC solution at size M−1 into an NS solution at size M with value ≥ (M−1)/M · mc.
LiftResult mc_to_ns_lift(const NsSolution& mc, int M, const ChoiMatrix& J);

// --- operator helpers shared by the decoders --------------------------------

/// O = (ρ^{-1/2} ⊗ I) Λ (ρ^{-1/2} ⊗ I) with the Moore-Penrose convention.
CMatrix test_operator(const NsSolution& ns);
/// ρ^{1/2} J ρ^{1/2}, the joint state of R and B when half of a purification of ρ is sent.
CMatrix channel_state(const ChoiMatrix& J, const CMatrix& rho);
/// True when J is block diagonal in the canonical output basis.
bool has_classical_output(const ChoiMatrix& J, double tol = 1e-10);

// --- quantum-classical sequential decoder -----------------------------------

inline constexpr int kMaxDenseDim = 4096;

/// Position-based coding with M′ candidate registers and a first-detection decoder.
ProtocolReport qc_sequential_protocol(const ChoiMatrix& J, const NsSolution& ns, int M_prime);

// --- square-root decoder ----------------------------------------------------

/// (1 + c)ε + (2 + c + 1/c)(M′ − 1)/M
double hn_error_bound(double eps, int M, int M_prime, double c);
ProtocolReport hn_protocol(const ChoiMatrix& J, const NsSolution& ns, int M_prime, double c = 1.0);

struct InequalityCheck {
  bool pass = false;
  double min_eig = 0.0;
};
/// I − (A+B)^{-1/2} A (A+B)^{-1/2} ≼ (1+c)(I − A) + (2 + c + 1/c) B
InequalityCheck hn_inequality_check(const CMatrix& A, const CMatrix& B, double c);

// --- flattening and twirling ------------------------------------------------

struct FlatteningDecomposition {
  int v = 0;
  std::vector<double> weights;    // p_j
  std::vector<double> levels;     // λ_j
  std::vector<int> dims;          // |R_j|
  std::vector<CMatrix> bases;     // orthonormal columns spanning R_j
  std::vector<CMatrix> projectors;
};
FlatteningDecomposition flattening(const CMatrix& rho);

/// The d² Weyl-Heisenberg unitaries; the uniform average of U X U† is Tr[X]·I/d.
std::vector<CMatrix> pauli_one_design(int d);

/// 1 / (2v ln(2 v M e^v |A|^v |B|))
double multiplicative_prefactor(int v, int M, int dim_in, int dim_out);

struct DesignSample {
  std::vector<int> subspaces;  // j_m
  std::vector<int> unitaries;  // index into the design of R_{j_m}
  std::uint64_t seed = 0;
};

/// Decoder operators O^{j,U}(m) of a fixed design sample on B¹⋯B^v B.
class MultiplicativeCode {
 public:
  MultiplicativeCode(const ChoiMatrix& J, const NsSolution& ns_fixed);

  int v() const { return flat_.v; }
  int total_dim() const { return total_dim_; }
  const FlatteningDecomposition& flat() const { return flat_; }

  DesignSample draw(int M, std::uint64_t seed) const;
  /// O^{j,U} for subspace j and design element u.
  CMatrix decoder_operator(int j, int u) const;
  /// Exact average over j ∼ p and the design.
  CMatrix design_average() const;
  /// (1/(Z p_j)) Tr[Π_j Λ Π_j J] for each message of the sample; also returns Z.
  std::vector<double> closed_form_success(const DesignSample& s, double* Z) const;
  /// Bob's full state for message m and the resulting success, simulated from the Kraus form.
  double simulated_success(const KrausChannel& channel, const DesignSample& s, int m, double Z) const;

 private:
  ChoiMatrix J_;
  NsSolution ns_;
  FlatteningDecomposition flat_;
  std::vector<std::vector<CMatrix>> designs_;  // unitaries on R acting inside R_j
  std::vector<double> block_values_;           // Tr[Π_j Λ Π_j J]
  int total_dim_ = 0;
};

struct MultiplicativeOptions {
  int samples = 64;
  std::uint64_t seed = 1;
  int cross_checks = 16;
};
ProtocolReport multiplicative_protocol(const KrausChannel& channel, const ChoiMatrix& J, const NsSolution& ns_fixed,
                                       const MultiplicativeOptions& opts = {});

// --- matrix Chernoff --------------------------------------------------------

struct ChernoffFamily {
  std::function<CMatrix(Rng&)> sample;  // one draw of X_k
  CMatrix mean;                          // exact E[X_k]
  double L = 1.0;                        // λ_max(X_k) ≤ L
  int terms = 1;                         // number of summands
};

struct ChernoffReport {
  double delta = 0.0;
  double mu_max = 0.0;
  double threshold = 0.0;  // (1+δ) μ_max
  double bound = 0.0;      // d [e^δ / (1+δ)^{1+δ}]^{μ_max/L}
  double frequency = 0.0;
  double std_error = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

double chernoff_bound(int dim, double delta, double mu_max, double L);
ChernoffReport matrix_chernoff_check(const ChernoffFamily& family, double delta, int trials, std::uint64_t seed);

/// The decoder-operator family of the multiplicative protocol, one draw per message.
ChernoffFamily multiplicative_family(const MultiplicativeCode& code, int M);
/// δ with (1+δ)μ_max = log(2 v M |R|^v |B|).
double event_delta(const MultiplicativeCode& code, int M, double mu_max);

/// Stream seed for Monte Carlo sample `index` derived from a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qcc
