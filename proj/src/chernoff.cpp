#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "qcc/parallel.hpp"
#include "qcc/rounding.hpp"

namespace qcc {

double chernoff_bound(int dim, double delta, double mu_max, double L) {
  if (delta < 0.0) throw InputError("chernoff_bound: delta must be nonnegative");
  if (L <= 0.0) throw InputError("chernoff_bound: L must be positive");
  return dim * std::exp((mu_max / L) * (delta - (1.0 + delta) * std::log1p(delta)));
}

ChernoffReport matrix_chernoff_check(const ChernoffFamily& family, double delta, int trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("matrix_chernoff_check: need at least one trial");
  if (family.terms < 1) throw InputError("matrix_chernoff_check: need at least one summand");
  if (delta < 0.0) throw InputError("matrix_chernoff_check: delta must be nonnegative");
  require_hermitian(family.mean, "matrix_chernoff_check mean");
  const int dim = static_cast<int>(family.mean.rows());

  ChernoffReport rep;
  rep.delta = delta;
  rep.trials = trials;
  rep.seed = seed;
  rep.mu_max = max_eigenvalue(static_cast<double>(family.terms) * family.mean);
  rep.threshold = (1.0 + delta) * rep.mu_max;
  rep.bound = chernoff_bound(dim, delta, rep.mu_max, family.L);

  const auto hits = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (int k = 0; k < family.terms; ++k) {
      const CMatrix x = family.sample(rng);
      const Spectrum s = eigh(x);
      if (s.values(s.values.size() - 1) < -1e-9 || s.values(0) > family.L + 1e-9)
        throw InputError("matrix_chernoff_check: sample violates 0 <= X <= L");
      sum += x;
    }
    return max_eigenvalue(hermitize(sum)) >= rep.threshold ? 1 : 0;
  });
  int count = 0;
  for (int h : hits) count += h;
  rep.frequency = static_cast<double>(count) / trials;
  const double b = std::min(rep.bound, 1.0);
  rep.std_error = std::sqrt(b * (1.0 - b) / trials);
  rep.pass = rep.frequency <= rep.bound + 3.0 * rep.std_error;
  return rep;
}

ChernoffFamily multiplicative_family(const MultiplicativeCode& code, int M) {
  const auto& flat = code.flat();
  auto ops = std::make_shared<std::vector<std::vector<CMatrix>>>();
  double L = 0.0;
  for (int j = 0; j < flat.v; ++j) {
    std::vector<CMatrix> row;
    for (int u = 0; u < flat.dims[j] * flat.dims[j]; ++u) {
      row.push_back(code.decoder_operator(j, u));
      L = std::max(L, max_eigenvalue(row.back()));
    }
    ops->push_back(std::move(row));
  }
  ChernoffFamily f;
  f.mean = code.design_average();
  f.L = std::max(L, 1e-12);
  f.terms = M;
  const std::vector<double> weights = flat.weights;
  f.sample = [ops, weights](Rng& rng) -> CMatrix {
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    const int j = pick(rng);
    std::uniform_int_distribution<int> u(0, static_cast<int>((*ops)[j].size()) - 1);
    return (*ops)[j][u(rng)];
  };
  return f;
}

double event_delta(const MultiplicativeCode& code, int M, double mu_max) {
  if (mu_max <= 0.0) throw InputError("event_delta: mu_max must be positive");
  const double gamma = std::log(2.0 * code.v() * M * static_cast<double>(code.total_dim()));
  return gamma / mu_max - 1.0;
}

}  // namespace qcc
