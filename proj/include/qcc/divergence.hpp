#pragma once

#include <cstdint>
#include <vector>

#include "qcc/channel.hpp"

namespace qcc {

/// Rényi order: a finite α > 1, or one of the limits α → 1 and α → ∞.
struct RenyiOrder {
  enum class Kind { finite, one, infinity };
  Kind kind = Kind::finite;
  double alpha = 2.0;

  static RenyiOrder of(double a);
  static RenyiOrder one() { return {Kind::one, 1.0}; }
  static RenyiOrder infinity() { return {Kind::infinity, 0.0}; }
};

/// Sandwiched Rényi divergence in nats; +∞ when supp ρ ⊄ supp σ.
double sandwiched(const CMatrix& rho, const CMatrix& sigma, double alpha);
double sandwiched(const CMatrix& rho, const CMatrix& sigma, RenyiOrder order);
/// log λ_max(σ^{-1/2} ρ σ^{-1/2}); +∞ on support violation.
double max_divergence(const CMatrix& rho, const CMatrix& sigma);
/// Tr[ρ(log ρ − log σ)]; +∞ on support violation.
double umegaki(const CMatrix& rho, const CMatrix& sigma);
double von_neumann_entropy(const CMatrix& rho);

/// Largest order used for channel quantities; the α → ∞ limit is evaluated here.
inline constexpr double kMaxOrder = 51.0;

struct MutualInfoOptions {
  int random_starts = 8;
  std::uint64_t seed = 1;
  double inner_tol = 1e-11;
  int inner_max_iter = 5000;
  int outer_max_iter = 300;
  double outer_grad_tol = 1e-9;
};

struct MutualInfoResult {
  double value = 0.0;  // nats
  CMatrix rho;
  CMatrix sigma;
  int iterations = 0;   // outer iterations of the accepted start
  double residual = 0.0;  // inner fixed-point residual at the optimum
  bool converged = false;
};

/// Value of D̃_α(ρ^{1/2} J ρ^{1/2} ‖ ρ ⊗ σ) for given ρ, σ (α = 1 gives the Umegaki version).
double channel_objective(const ChoiMatrix& J, const CMatrix& rho, const CMatrix& sigma, double alpha);

struct InnerResult {
  double value = 0.0;
  CMatrix sigma;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};
/// inf over output states σ of D̃_α(ρ^{1/2} J ρ^{1/2} ‖ ρ ⊗ σ), α > 1.
InnerResult inner_minimize(const ChoiMatrix& J, const CMatrix& rho, double alpha, const MutualInfoOptions& opts = {},
                           const CMatrix* warm_start = nullptr);

/// sup_ρ inf_σ D̃_α(ρ^{1/2} J ρ^{1/2} ‖ ρ ⊗ σ).
MutualInfoResult channel_mutual_info(const ChoiMatrix& J, RenyiOrder order, const MutualInfoOptions& opts = {});

/// α grid for the exponent: 0 plus log-spaced points in [0.02, 50].
std::vector<double> exponent_alpha_grid(int points = 40);

/// Strong converse exponent sup_{α ≥ 0} α/(1+α)(r − Ĩ_{1+α}) on a fixed α grid,
/// plus the α → ∞ candidate r − Ĩ_{1+α_max}.
class ScExponent {
 public:
  ScExponent(const ChoiMatrix& J, std::vector<double> alphas, const MutualInfoOptions& opts = {});
  ScExponent(std::vector<double> alphas, std::vector<double> info_values, double info_one);

  double operator()(double r) const;
  const std::vector<double>& alphas() const { return alphas_; }
  /// Ĩ_{1+α} for each grid α.
  const std::vector<double>& info() const { return info_; }
  double info_one() const { return info_one_; }

 private:
  std::vector<double> alphas_;
  std::vector<double> info_;
  double info_one_ = 0.0;
};

double sc_exponent(const ChoiMatrix& J, double r, const MutualInfoOptions& opts = {});

struct ConverseRow {
  double alpha = 0.0;
  double info = 0.0;   // Ĩ_{1+α}
  double bound = 0.0;  // exp(−α/(1+α)(log M − Ĩ_{1+α}))
  double mc = 0.0;
  double slack = 0.0;  // bound − mc
  bool pass = false;
};
struct ConverseReport {
  int M = 0;
  double mc = 0.0;
  std::vector<ConverseRow> rows;
  bool pass = false;
};

/// Checks mc_success(N, M) ≤ exp(−α/(1+α)(log M − Ĩ_{1+α}(N))) + 1e-5 for each α.
ConverseReport converse_bound_check(const ChoiMatrix& J, int M, const std::vector<double>& alphas,
                                    const MutualInfoOptions& opts = {});
/// Same check with a precomputed MC value and Ĩ values (aligned with alphas).
ConverseReport converse_bound_rows(int M, double mc, const std::vector<double>& alphas, const std::vector<double>& info);

}  // namespace qcc
