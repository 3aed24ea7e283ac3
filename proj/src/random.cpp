#include "qcc/random.hpp"

#include <cmath>

namespace qcc {

CMatrix gaussian_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n01(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      g(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  return g;
}

CMatrix haar_unitary(Rng& rng, int d) {
  const CMatrix g = gaussian_matrix(rng, d, d);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const cplx rk = r(k, k);
    if (std::abs(rk) > 0) q.col(k) *= rk / std::abs(rk);
  }
  return q;
}

CMatrix random_hermitian(Rng& rng, int d) {
  const CMatrix g = gaussian_matrix(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

CMatrix random_density(Rng& rng, int d, int rank) {
  if (rank <= 0) rank = d;
  const CMatrix g = gaussian_matrix(rng, d, rank);
  CMatrix rho = g * g.adjoint();
  return hermitize(rho / rho.trace().real());
}

}  // namespace qcc
