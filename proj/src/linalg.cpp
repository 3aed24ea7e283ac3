#include "qcc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcc {

CMatrix Spectrum::reconstruct() const {
  return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

int SubsystemShape::total() const {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

bool is_hermitian(const CMatrix& h, double tol) {
  if (h.rows() != h.cols()) return false;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

void require_hermitian(const CMatrix& h, const char* what) {
  if (h.rows() != h.cols())
    throw InputError(std::string(what) + ": matrix is not square");
  if (!is_hermitian(h, 1e-9))
    throw InputError(std::string(what) + ": matrix is not Hermitian");
}

CMatrix hermitize(const CMatrix& x) { return 0.5 * (x + x.adjoint()); }

CMatrix identity(int d) { return CMatrix::Identity(d, d); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix kron_all(std::span<const CMatrix> factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

double trace_re(const CMatrix& x) { return x.trace().real(); }

double inner_re(const CMatrix& a, const CMatrix& b) {
  // Re Tr[ab] = Re Σ_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum().real();
}

Spectrum eigh(const CMatrix& h) {
  require_hermitian(h, "eigh");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(h));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigh: decomposition failed");
  Spectrum s;
  s.values = es.eigenvalues().reverse();
  s.vectors = es.eigenvectors().rowwise().reverse();
  return s;
}

double min_eigenvalue(const CMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(hermitize(h), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

double max_eigenvalue(const CMatrix& h) {
  auto ev = Eigen::SelfAdjointEigenSolver<CMatrix>(hermitize(h), Eigen::EigenvaluesOnly).eigenvalues();
  return ev(ev.size() - 1);
}

namespace {

template <class F>
CMatrix spectral_map(const CMatrix& h, F f) {
  const Spectrum s = eigh(h);
  RVector mapped(s.values.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(s.values(i), s.values);
  return s.vectors * mapped.cast<cplx>().asDiagonal() * s.vectors.adjoint();
}

double rank_cutoff(const RVector& values) {
  return kRankTol * std::max(values.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace

CMatrix positive_part(const CMatrix& h) {
  return spectral_map(h, [](double v, const RVector&) { return v > 0 ? v : 0.0; });
}

CMatrix pseudo_inverse(const CMatrix& h) {
  return spectral_map(h, [](double v, const RVector& all) {
    return std::abs(v) > rank_cutoff(all) ? 1.0 / v : 0.0;
  });
}

CMatrix frac_power(const CMatrix& p, double t) {
  if (t == 0.0) return support_projector(p);
  return spectral_map(p, [t](double v, const RVector& all) {
    if (v <= rank_cutoff(all)) return 0.0;
    return std::pow(v, t);
  });
}

CMatrix log_on_support(const CMatrix& p) {
  return spectral_map(p, [](double v, const RVector& all) {
    return v > rank_cutoff(all) ? std::log(v) : 0.0;
  });
}

CMatrix support_projector(const CMatrix& p) {
  return spectral_map(p, [](double v, const RVector& all) {
    return v > rank_cutoff(all) ? 1.0 : 0.0;
  });
}

namespace {

// Maps each composite index of the permuted space to the original composite index.
std::vector<int> permutation_index_map(const SubsystemShape& shape, std::span<const int> perm) {
  const int n = shape.size();
  if (static_cast<int>(perm.size()) != n) throw InputError("permute_subsystems: bad permutation length");
  std::vector<int> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]++) throw InputError("permute_subsystems: not a permutation");
  }
  std::vector<int> in_stride(n, 1);
  for (int k = n - 2; k >= 0; --k) in_stride[k] = in_stride[k + 1] * shape.dims[k + 1];
  std::vector<int> out_dims(n);
  for (int k = 0; k < n; ++k) out_dims[k] = shape.dims[perm[k]];
  const int total = shape.total();
  std::vector<int> map(total);
  std::vector<int> digit(n, 0);
  for (int idx = 0; idx < total; ++idx) {
    int src = 0;
    for (int k = 0; k < n; ++k) src += digit[k] * in_stride[perm[k]];
    map[idx] = src;
    for (int k = n - 1; k >= 0; --k) {
      if (++digit[k] < out_dims[k]) break;
      digit[k] = 0;
    }
  }
  return map;
}

void check_shape(const CMatrix& x, const SubsystemShape& shape, const char* what) {
  if (x.rows() != shape.total() || x.cols() != shape.total())
    throw InputError(std::string(what) + ": operator dimension does not match subsystem shape");
}

}  // namespace

CMatrix permute_subsystems(const CMatrix& x, const SubsystemShape& shape, std::span<const int> perm) {
  check_shape(x, shape, "permute_subsystems");
  const auto map = permutation_index_map(shape, perm);
  const int d = shape.total();
  CMatrix out(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) out(i, j) = x(map[i], map[j]);
  return out;
}

CMatrix permute_subsystems(const CMatrix& x, const SubsystemShape& shape, std::initializer_list<int> perm) {
  return permute_subsystems(x, shape, std::span<const int>(perm.begin(), perm.size()));
}

CMatrix partial_trace(const CMatrix& x, const SubsystemShape& shape, std::span<const int> keep) {
  check_shape(x, shape, "partial_trace");
  const int n = shape.size();
  std::vector<int> kept(keep.begin(), keep.end());
  if (!std::is_sorted(kept.begin(), kept.end()) ||
      std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw InputError("partial_trace: keep list must be strictly increasing");
  std::vector<int> perm = kept;
  for (int k = 0; k < n; ++k)
    if (!std::binary_search(kept.begin(), kept.end(), k)) perm.push_back(k);
  for (int k : kept)
    if (k < 0 || k >= n) throw InputError("partial_trace: subsystem index out of range");
  int dk = 1;
  for (int k : kept) dk *= shape.dims[k];
  const int dt = shape.total() / dk;
  const CMatrix y = permute_subsystems(x, shape, perm);
  CMatrix out = CMatrix::Zero(dk, dk);
  for (int t = 0; t < dt; ++t)
    for (int b = 0; b < dk; ++b)
      for (int a = 0; a < dk; ++a) out(a, b) += y(a * dt + t, b * dt + t);
  return out;
}

CMatrix partial_trace(const CMatrix& x, const SubsystemShape& shape, std::initializer_list<int> keep) {
  return partial_trace(x, shape, std::span<const int>(keep.begin(), keep.size()));
}

namespace {

struct Split {
  int left, d, right;
};

Split split_at(int k, const SubsystemShape& shape) {
  if (k < 0 || k >= shape.size()) throw InputError("local operator: subsystem index out of range");
  Split s{1, shape.dims[k], 1};
  for (int i = 0; i < k; ++i) s.left *= shape.dims[i];
  for (int i = k + 1; i < shape.size(); ++i) s.right *= shape.dims[i];
  return s;
}

}  // namespace

CMatrix embed(const CMatrix& op, int k, const SubsystemShape& shape) {
  const Split s = split_at(k, shape);
  return kron(kron(identity(s.left), op), identity(s.right));
}

CMatrix apply_local_left(const CMatrix& op, int k, const SubsystemShape& shape, const CMatrix& x) {
  const Split s = split_at(k, shape);
  if (op.rows() != s.d || op.cols() != s.d) throw InputError("apply_local_left: operator dimension mismatch");
  if (x.rows() != shape.total()) throw InputError("apply_local_left: operand dimension mismatch");
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  const int block = s.d * s.right;
  for (int l = 0; l < s.left; ++l)
    for (int a = 0; a < s.d; ++a)
      for (int b = 0; b < s.d; ++b) {
        const cplx c = op(a, b);
        if (c == cplx(0.0)) continue;
        out.middleRows(l * block + a * s.right, s.right) += c * x.middleRows(l * block + b * s.right, s.right);
      }
  return out;
}

CMatrix conjugate_local(const CMatrix& op, int k, const SubsystemShape& shape, const CMatrix& x) {
  const CMatrix y = apply_local_left(op, k, shape, x);
  return apply_local_left(op, k, shape, y.adjoint()).adjoint();
}

std::vector<EigenGroup> eigen_groups(const CMatrix& h, double rel_tol) {
  const Spectrum s = eigh(h);
  const Eigen::Index n = s.values.size();
  std::vector<EigenGroup> groups;
  if (n == 0) return groups;
  const double tol = rel_tol * std::max(s.values.cwiseAbs().maxCoeff(), 1.0);
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || s.values(i - 1) - s.values(i) > tol) {
      EigenGroup g;
      g.value = s.values.segment(start, i - start).mean();
      g.basis = s.vectors.middleCols(start, i - start);
      groups.push_back(std::move(g));
      start = i;
    }
  }
  return groups;
}

Pinched pinching(const CMatrix& sigma, const CMatrix& rho) {
  if (sigma.rows() != rho.rows()) throw InputError("pinching: dimension mismatch");
  const auto groups = eigen_groups(sigma);
  Pinched p{CMatrix::Zero(rho.rows(), rho.cols()), static_cast<int>(groups.size())};
  for (const auto& g : groups) {
    const CMatrix block = g.basis.adjoint() * rho * g.basis;
    p.op += g.basis * block * g.basis.adjoint();
  }
  return p;
}

double operator_norm(const CMatrix& h) {
  if (is_hermitian(h, 1e-9)) {
    auto ev = Eigen::SelfAdjointEigenSolver<CMatrix>(hermitize(h), Eigen::EigenvaluesOnly).eigenvalues();
    return ev.cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<CMatrix> svd(h);
  return svd.singularValues()(0);
}

bool psd_order_leq(const CMatrix& x, const CMatrix& y, double tol) {
  return min_eigenvalue(y - x) >= -tol;
}

CMatrix dephase(const CMatrix& x, int k, const SubsystemShape& shape) {
  check_shape(x, shape, "dephase");
  const Split s = split_at(k, shape);
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  const int total = shape.total();
  for (int j = 0; j < total; ++j)
    for (int i = 0; i < total; ++i) {
      const int ai = (i / s.right) % s.d;
      const int aj = (j / s.right) % s.d;
      if (ai == aj) out(i, j) = x(i, j);
    }
  return out;
}

}  // namespace qcc
