#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised when an operand violates a documented precondition
/// (non-Hermitian input, inconsistent shapes, out-of-range parameters).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigen-decomposition of a Hermitian operator, eigenvalues in descending order.
struct Spectrum {
  RVector values;
  CMatrix vectors;  // columns are eigenvectors

  CMatrix reconstruct() const;
};

/// Tensor factorization of a composite space, e.g. {|R|, |B|}.
struct SubsystemShape {
  std::vector<int> dims;

  SubsystemShape() = default;
  SubsystemShape(std::initializer_list<int> d) : dims(d) {}
  explicit SubsystemShape(std::vector<int> d) : dims(std::move(d)) {}

  int total() const;
  int size() const { return static_cast<int>(dims.size()); }
};

/// A block of (numerically) equal eigenvalues.
struct EigenGroup {
  double value = 0.0;    // mean of the grouped eigenvalues
  CMatrix basis;         // orthonormal columns spanning the eigenspace
  CMatrix projector() const { return basis * basis.adjoint(); }
  int dim() const { return static_cast<int>(basis.cols()); }
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kRankTol = 1e-10;    // relative to the largest |eigenvalue|
inline constexpr double kGroupTol = 1e-8;    // relative to the operator norm

bool is_hermitian(const CMatrix& h, double tol = kHermitianTol);
void require_hermitian(const CMatrix& h, const char* what);
CMatrix hermitize(const CMatrix& x);

CMatrix identity(int d);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(std::span<const CMatrix> factors);
double trace_re(const CMatrix& x);
/// Re Tr[a b]
double inner_re(const CMatrix& a, const CMatrix& b);

Spectrum eigh(const CMatrix& h);
double min_eigenvalue(const CMatrix& h);
double max_eigenvalue(const CMatrix& h);

CMatrix positive_part(const CMatrix& h);
CMatrix pseudo_inverse(const CMatrix& h);
/// P^t on the support of P; negative eigenvalues of P (numerical noise) are clipped to 0.
CMatrix frac_power(const CMatrix& p, double t);
/// log on the support, 0 on the kernel.
CMatrix log_on_support(const CMatrix& p);
CMatrix support_projector(const CMatrix& p);

CMatrix partial_trace(const CMatrix& x, const SubsystemShape& shape, std::span<const int> keep);
CMatrix partial_trace(const CMatrix& x, const SubsystemShape& shape, std::initializer_list<int> keep);

/// Reorder tensor factors: factor k of the result is factor perm[k] of the input.
CMatrix permute_subsystems(const CMatrix& x, const SubsystemShape& shape, std::span<const int> perm);
CMatrix permute_subsystems(const CMatrix& x, const SubsystemShape& shape, std::initializer_list<int> perm);

/// I ⊗ op ⊗ I with op on factor k.
CMatrix embed(const CMatrix& op, int k, const SubsystemShape& shape);
/// (I ⊗ op ⊗ I) · x without materializing the embedded operator.
CMatrix apply_local_left(const CMatrix& op, int k, const SubsystemShape& shape, const CMatrix& x);
/// (I ⊗ op ⊗ I) · x · (I ⊗ op ⊗ I)†
CMatrix conjugate_local(const CMatrix& op, int k, const SubsystemShape& shape, const CMatrix& x);

/// Groups eigenvalues whose consecutive gaps are below tol·‖h‖ (tol = kGroupTol by default).
std::vector<EigenGroup> eigen_groups(const CMatrix& h, double rel_tol = kGroupTol);

struct Pinched {
  CMatrix op;
  int blocks = 0;
};
/// P_σ(ρ) = Σ_i Π_i ρ Π_i over the spectral projections of sigma.
Pinched pinching(const CMatrix& sigma, const CMatrix& rho);

double operator_norm(const CMatrix& h);
/// True iff λ_min(y − x) ≥ −tol.
bool psd_order_leq(const CMatrix& x, const CMatrix& y, double tol);

/// Dephasing in the canonical basis of factor k.
CMatrix dephase(const CMatrix& x, int k, const SubsystemShape& shape);

}  // namespace qcc
