#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcc/linalg.hpp"

namespace qcc {

/// CPTP map A → B given by Kraus operators of shape dim_out × dim_in.
struct KrausChannel {
  std::string name;
  int dim_in = 0;
  int dim_out = 0;
  std::vector<CMatrix> kraus;
};

/// Unnormalized Choi operator Σ |i⟩⟨j| ⊗ N(|i⟩⟨j|) on R ⊗ B, trace |A|.
struct ChoiMatrix {
  CMatrix op;
  int dim_in = 0;
  int dim_out = 0;
  std::string source;

  SubsystemShape shape() const { return {dim_in, dim_out}; }
};

/// Measurement on A with outcomes 0..|X|-1.
struct QCChannel {
  int dim_in = 0;
  std::vector<CMatrix> povm;

  int outcomes() const { return static_cast<int>(povm.size()); }
};

struct CptpReport {
  bool valid = false;
  double tp_error = 0.0;       // max entry of |Σ K†K − I|
  double choi_min_eig = 0.0;
  std::string message;
};

inline constexpr double kCptpTol = 1e-9;
inline constexpr int kMaxPower = 3;

ChoiMatrix choi_of(const KrausChannel& channel);
CMatrix apply(const KrausChannel& channel, const CMatrix& rho);
/// N(X) from the Choi operator: Tr_R[(X^T ⊗ I) J].
CMatrix apply_choi(const ChoiMatrix& choi, const CMatrix& x);
/// Adjoint map N†(Y) = Σ K† Y K.
CMatrix apply_adjoint(const KrausChannel& channel, const CMatrix& y);
CptpReport validate_cptp(const KrausChannel& channel);
void require_cptp(const KrausChannel& channel);

void validate_povm(const QCChannel& qc);
KrausChannel measurement_channel(const QCChannel& qc);

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);
KrausChannel power(const KrausChannel& a, int n);

/// Kraus operators read off the eigendecomposition of a Choi operator.
KrausChannel kraus_from_choi(const ChoiMatrix& choi, const std::string& name);

/// Weyl-Heisenberg displacement e^{iπab/d} X^a Z^b; for d = 2 this is I, Z, X, Y up to phase.
CMatrix weyl(int d, int a, int b);

namespace zoo {

KrausChannel identity(int d);
KrausChannel depolarizing(int d, double p);
KrausChannel dephasing(int d, double p);
KrausChannel amplitude_damping(double gamma);
KrausChannel replacer(int dim_in, const CMatrix& sigma);
/// w[x][y] = probability of output y given input x.
KrausChannel classical(const std::vector<std::vector<double>>& w);
KrausChannel random_cptp(std::uint64_t seed, int dim_in, int dim_out);

/// Trine measurement on a qubit (three symmetric outcomes).
QCChannel trine();
QCChannel computational_basis(int d);
QCChannel random_povm(std::uint64_t seed, int dim_in, int outcomes);

}  // namespace zoo

/// Dispatch by name: identity(d), depolarizing(d,p), dephasing(d,p), amplitude_damping(g),
/// replacer_mixed(d_in,d_out), random_cptp(seed,d_in,d_out), bsc(p), symmetric_classical(k,p),
/// trine, basis_measurement(d), random_povm(seed,d_in,outcomes).
KrausChannel standard(const std::string& name, const std::vector<double>& params);
/// Parses "name" or "name(p1,p2,...)".
KrausChannel standard_from_spec(const std::string& spec);

}  // namespace qcc
