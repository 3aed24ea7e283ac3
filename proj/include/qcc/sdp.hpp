#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcc/linalg.hpp"

namespace qcc {

/// Raised when an SDP cannot be solved to the requested accuracy.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real-linear map between Hermitian operators.
using LinearMap = std::function<CMatrix(const CMatrix&)>;

namespace maps {
LinearMap identity();
LinearMap scaled(double s, LinearMap f);
/// X ↦ X ⊗ I_d
LinearMap kron_identity_right(int d);
/// X ↦ K X K†
LinearMap conjugate(CMatrix k);
LinearMap partial_trace(SubsystemShape shape, std::vector<int> keep);
/// X ↦ [Tr X] as a 1×1 operator.
LinearMap trace();
/// X ↦ [Re Tr[C X]] as a 1×1 operator.
LinearMap pairing(CMatrix c);
}  // namespace maps

/// constant + Σ map_k(block_k), an operator of size dim × dim.
struct AffineExpr {
  int dim = 0;
  CMatrix constant;
  std::vector<std::pair<int, LinearMap>> terms;

  explicit AffineExpr(int d) : dim(d), constant(CMatrix::Zero(d, d)) {}
  explicit AffineExpr(CMatrix c) : dim(static_cast<int>(c.rows())), constant(std::move(c)) {}
  AffineExpr& add(int block, LinearMap f) {
    terms.emplace_back(block, std::move(f));
    return *this;
  }
};

/// maximize Σ_b Re Tr[C_b X_b] over Hermitian blocks X_b, subject to
/// affine expressions being PSD or equal to zero.
class HermitianSdp {
 public:
  struct Block {
    std::string name;
    int dim;
    CMatrix objective;
    CMatrix initial;  // empty when unset
  };
  struct Constraint {
    std::string label;
    AffineExpr expr;
  };

  int add_block(const std::string& name, int dim);
  void add_objective(int block, const CMatrix& c);
  /// expr ≽ 0
  void add_psd(AffineExpr expr, const std::string& label);
  /// expr = 0
  void add_equality(AffineExpr expr, const std::string& label);
  void set_initial(int block, const CMatrix& value);

  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Constraint>& psd() const { return psd_; }
  const std::vector<Constraint>& equalities() const { return eq_; }

 private:
  void check_expr(const AffineExpr& e) const;
  std::vector<Block> blocks_;
  std::vector<Constraint> psd_;
  std::vector<Constraint> eq_;
};

enum class SdpStatus { optimal, infeasible, max_iter };
const char* to_string(SdpStatus s);

struct SolverOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iter = 200;
};

struct SdpSolution {
  std::vector<CMatrix> blocks;  // optimal values of the variable blocks
  std::vector<CMatrix> duals;   // one multiplier per PSD constraint
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;             // max(|primal − dual|, Σ⟨X, S⟩)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  SdpStatus status = SdpStatus::max_iter;
  int iterations = 0;
};

/// Primal-dual interior point method with Nesterov-Todd scaling and a
/// Mehrotra-type centering heuristic. Starts from set_initial values when
/// given; the start does not need to be feasible.
SdpSolution solve(const HermitianSdp& sdp, const SolverOptions& opts = {});

/// Orthonormal basis of n×n Hermitian matrices under Re Tr[AB].
std::vector<CMatrix> hermitian_basis(int n);
/// Coordinates of a Hermitian matrix in hermitian_basis(n).
RVector hermitian_coords(const CMatrix& x);
CMatrix from_hermitian_coords(const RVector& y, int n);

}  // namespace qcc
