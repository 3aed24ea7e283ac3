#pragma once

// Generators and brute-force oracles shared by the unit tests.

#include <algorithm>
#include <random>
#include <vector>

#include "qcc/channel.hpp"
#include "qcc/linalg.hpp"
#include "qcc/random.hpp"

namespace qcc::testing {

inline int draw_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double draw_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline double max_abs(const CMatrix& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

inline CMatrix random_psd(Rng& rng, int d, int rank = -1) {
  const CMatrix g = gaussian_matrix(rng, d, rank < 0 ? d : rank);
  return g * g.adjoint();
}

/// Random diagonal state, optionally with some zero entries.
inline CMatrix random_diagonal_state(Rng& rng, int d, bool allow_zeros = false) {
  CMatrix x = CMatrix::Zero(d, d);
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    double v = draw_real(rng, 0.05, 1.0);
    if (allow_zeros && i > 0 && draw_int(rng, 0, 2) == 0) v = 0.0;
    x(i, i) = v;
    total += v;
  }
  return x / total;
}

/// Tr over all factors except `keep`, by explicit index loops.
inline CMatrix naive_partial_trace(const CMatrix& x, const std::vector<int>& dims, const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  int kept_dim = 1;
  for (int k : keep) kept_dim *= dims[k];
  CMatrix out = CMatrix::Zero(kept_dim, kept_dim);
  const int total = static_cast<int>(x.rows());
  auto digits = [&](int idx) {
    std::vector<int> d(n);
    for (int k = n - 1; k >= 0; --k) {
      d[k] = idx % dims[k];
      idx /= dims[k];
    }
    return d;
  };
  auto kept_index = [&](const std::vector<int>& d) {
    int idx = 0;
    for (int k : keep) idx = idx * dims[k] + d[k];
    return idx;
  };
  for (int i = 0; i < total; ++i) {
    const auto di = digits(i);
    for (int j = 0; j < total; ++j) {
      const auto dj = digits(j);
      bool traced_equal = true;
      for (int k = 0; k < n && traced_equal; ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end() && di[k] != dj[k]) traced_equal = false;
      if (traced_equal) out(kept_index(di), kept_index(dj)) += x(i, j);
    }
  }
  return out;
}

/// Σ_ij |i⟩⟨j| ⊗ N(|i⟩⟨j|) straight from the definition.
inline CMatrix naive_choi(const KrausChannel& ch) {
  const int a = ch.dim_in, b = ch.dim_out;
  CMatrix J = CMatrix::Zero(a * b, a * b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) {
      CMatrix e = CMatrix::Zero(a, a);
      e(i, j) = 1.0;
      CMatrix out = CMatrix::Zero(b, b);
      for (const auto& K : ch.kraus) out += K * e * K.adjoint();
      J.block(i * b, j * b, b, b) = out;
    }
  return J;
}

}  // namespace qcc::testing
