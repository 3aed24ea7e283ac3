#include "qcc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcc {

using RMatrix = Eigen::MatrixXd;

namespace maps {

LinearMap identity() {
  return [](const CMatrix& x) { return x; };
}

LinearMap scaled(double s, LinearMap f) {
  return [s, f = std::move(f)](const CMatrix& x) -> CMatrix { return s * f(x); };
}

LinearMap kron_identity_right(int d) {
  return [d](const CMatrix& x) { return kron(x, qcc::identity(d)); };
}

LinearMap conjugate(CMatrix k) {
  return [k = std::move(k)](const CMatrix& x) -> CMatrix { return k * x * k.adjoint(); };
}

LinearMap partial_trace(SubsystemShape shape, std::vector<int> keep) {
  return [shape = std::move(shape), keep = std::move(keep)](const CMatrix& x) {
    return qcc::partial_trace(x, shape, std::span<const int>(keep));
  };
}

LinearMap trace() {
  return [](const CMatrix& x) { return CMatrix::Constant(1, 1, cplx(trace_re(x), 0.0)); };
}

LinearMap pairing(CMatrix c) {
  return [c = std::move(c)](const CMatrix& x) -> CMatrix {
    return CMatrix::Constant(1, 1, cplx(inner_re(c, x), 0.0));
  };
}

}  // namespace maps

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::max_iter: return "max-iter";
  }
  return "unknown";
}

std::vector<CMatrix> hermitian_basis(int n) {
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < n; ++k) {
    CMatrix e = CMatrix::Zero(n, n);
    e(k, k) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      CMatrix s = CMatrix::Zero(n, n);
      s(k, l) = s(l, k) = r;
      basis.push_back(std::move(s));
      CMatrix a = CMatrix::Zero(n, n);
      a(k, l) = cplx(0.0, r);
      a(l, k) = cplx(0.0, -r);
      basis.push_back(std::move(a));
    }
  return basis;
}

RVector hermitian_coords(const CMatrix& x) {
  const int n = static_cast<int>(x.rows());
  RVector c(static_cast<Eigen::Index>(n) * n);
  Eigen::Index i = 0;
  for (int k = 0; k < n; ++k) c(i++) = x(k, k).real();
  const double s = std::sqrt(2.0);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const cplx z = 0.5 * (x(k, l) + std::conj(x(l, k)));
      c(i++) = s * z.real();
      c(i++) = s * z.imag();
    }
  return c;
}

CMatrix from_hermitian_coords(const RVector& y, int n) {
  CMatrix x = CMatrix::Zero(n, n);
  Eigen::Index i = 0;
  for (int k = 0; k < n; ++k) x(k, k) = y(i++);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const cplx z(r * y(i), r * y(i + 1));
      i += 2;
      x(k, l) = z;
      x(l, k) = std::conj(z);
    }
  return x;
}

int HermitianSdp::add_block(const std::string& name, int dim) {
  if (dim < 1) throw InputError("add_block: dimension must be positive");
  blocks_.push_back({name, dim, CMatrix::Zero(dim, dim), CMatrix()});
  return static_cast<int>(blocks_.size()) - 1;
}

void HermitianSdp::add_objective(int block, const CMatrix& c) {
  if (block < 0 || block >= static_cast<int>(blocks_.size())) throw InputError("add_objective: bad block");
  auto& b = blocks_[block];
  if (c.rows() != b.dim || c.cols() != b.dim) throw InputError("add_objective: dimension mismatch");
  b.objective += hermitize(c);
}

void HermitianSdp::check_expr(const AffineExpr& e) const {
  if (e.constant.rows() != e.dim || e.constant.cols() != e.dim) throw InputError("constraint: constant has wrong size");
  require_hermitian(e.constant, "constraint constant");
  for (const auto& [b, f] : e.terms) {
    if (b < 0 || b >= static_cast<int>(blocks_.size())) throw InputError("constraint: bad block index");
    if (!f) throw InputError("constraint: empty map");
  }
}

void HermitianSdp::add_psd(AffineExpr expr, const std::string& label) {
  check_expr(expr);
  psd_.push_back({label, std::move(expr)});
}

void HermitianSdp::add_equality(AffineExpr expr, const std::string& label) {
  check_expr(expr);
  eq_.push_back({label, std::move(expr)});
}

void HermitianSdp::set_initial(int block, const CMatrix& value) {
  if (block < 0 || block >= static_cast<int>(blocks_.size())) throw InputError("set_initial: bad block");
  if (value.rows() != blocks_[block].dim) throw InputError("set_initial: dimension mismatch");
  blocks_[block].initial = hermitize(value);
}

namespace {

CVector vec(const CMatrix& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

CMatrix unvec(const CVector& v, int n) { return Eigen::Map<const CMatrix>(v.data(), n, n); }

// S = C − Σ_w w_k A_k over the reduced variables w; the full variable is y = y0 + N w.
struct Cone {
  int n = 0;
  CMatrix C;
  CMatrix A;  // n² × m
  RMatrix Ar, Ai;
};

struct Model {
  int full_dim = 0;
  int m = 0;
  std::vector<int> offset;
  RVector y0;
  RMatrix N;  // orthonormal basis of the equality nullspace
  RVector b;
  double b_const = 0.0;
  std::vector<Cone> cones;
  bool equalities_consistent = true;
};

Model build(const HermitianSdp& sdp) {
  Model md;
  const auto& blocks = sdp.blocks();
  std::vector<std::vector<CMatrix>> bases;
  int full = 0;
  for (const auto& blk : blocks) {
    md.offset.push_back(full);
    full += blk.dim * blk.dim;
    bases.push_back(hermitian_basis(blk.dim));
  }
  md.full_dim = full;
  RVector b = RVector::Zero(full);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    b.segment(md.offset[k], blocks[k].dim * blocks[k].dim) = hermitian_coords(blocks[k].objective);

  // Columns: image of each basis element under the expression's linear part.
  auto images = [&](const AffineExpr& e) {
    CMatrix cols = CMatrix::Zero(static_cast<Eigen::Index>(e.dim) * e.dim, full);
    for (const auto& [blk, f] : e.terms)
      for (std::size_t k = 0; k < bases[blk].size(); ++k) {
        const CMatrix img = f(bases[blk][k]);
        if (img.rows() != e.dim || img.cols() != e.dim)
          throw InputError("constraint map produces an operator of the wrong size");
        if (!is_hermitian(img, 1e-9)) throw InputError("constraint map is not Hermitian-preserving");
        cols.col(md.offset[blk] + static_cast<int>(k)) += vec(hermitize(img));
      }
    return cols;
  };

  std::vector<RVector> rows;
  std::vector<double> rhs;
  for (const auto& c : sdp.equalities()) {
    const CMatrix cols = images(c.expr);
    const auto basis = hermitian_basis(c.expr.dim);
    const RVector k0 = hermitian_coords(hermitize(c.expr.constant));
    for (std::size_t r = 0; r < basis.size(); ++r) {
      rows.push_back((vec(basis[r]).adjoint() * cols).real().transpose());
      rhs.push_back(-k0(static_cast<Eigen::Index>(r)));
    }
  }
  if (rows.empty()) {
    md.N = RMatrix::Identity(full, full);
    md.y0 = RVector::Zero(full);
  } else {
    RMatrix G(static_cast<Eigen::Index>(rows.size()), full);
    RVector h(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      G.row(r) = rows[r].transpose();
      h(r) = rhs[r];
    }
    Eigen::ColPivHouseholderQR<RMatrix> qr(G.transpose());
    qr.setThreshold(1e-10);
    const auto rank = qr.rank();
    const RMatrix Q = qr.householderQ();
    md.N = Q.rightCols(full - rank);
    md.y0 = G.completeOrthogonalDecomposition().solve(h);
    const double scale = 1.0 + h.cwiseAbs().maxCoeff();
    md.equalities_consistent = (G * md.y0 - h).cwiseAbs().maxCoeff() <= 1e-9 * scale;
  }
  md.m = static_cast<int>(md.N.cols());
  md.b = md.N.transpose() * b;
  md.b_const = b.dot(md.y0);
  const CMatrix Nc = md.N.cast<cplx>();
  const CVector y0c = md.y0.cast<cplx>();
  for (const auto& c : sdp.psd()) {
    const CMatrix cols = images(c.expr);
    Cone cone;
    cone.n = c.expr.dim;
    cone.C = hermitize(c.expr.constant + unvec(cols * y0c, cone.n));
    cone.A = -(cols * Nc);
    cone.Ar = cone.A.real();
    cone.Ai = cone.A.imag();
    md.cones.push_back(std::move(cone));
  }
  return md;
}

CMatrix apply_A(const Cone& c, const RVector& w) { return unvec(c.A * w.cast<cplx>(), c.n); }

void add_A_adjoint(const Cone& c, const CMatrix& x, RVector& out) { out += (c.A.adjoint() * vec(x)).real(); }

struct Scaling {
  CMatrix W;
  CMatrix Sinv;
  CMatrix LSinv;  // inverse Cholesky factor of S
  CMatrix LXinv;  // inverse Cholesky factor of X
};

CMatrix lower_inverse(const Eigen::LLT<CMatrix>& llt, int n) {
  return llt.matrixL().solve(CMatrix::Identity(n, n));
}

bool nt_scaling(const CMatrix& X, const CMatrix& S, Scaling& sc) {
  const int n = static_cast<int>(X.rows());
  Eigen::LLT<CMatrix> lx(X), ls(S);
  if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return false;
  const CMatrix R = lx.matrixL();
  const CMatrix L = ls.matrixL();
  Eigen::JacobiSVD<CMatrix> svd(R.adjoint() * L, Eigen::ComputeFullU);
  const RVector sv = svd.singularValues();
  if (!(sv.minCoeff() > 0)) return false;
  const CMatrix RU = R * svd.matrixU();
  sc.W = hermitize(RU * sv.cwiseInverse().cast<cplx>().asDiagonal() * RU.adjoint());
  sc.LSinv = lower_inverse(ls, n);
  sc.LXinv = lower_inverse(lx, n);
  sc.Sinv = hermitize(sc.LSinv.adjoint() * sc.LSinv);
  return true;
}

// Largest α with P + α dP ≽ 0, given the inverse Cholesky factor of P.
double max_step(const CMatrix& Linv, const CMatrix& dP) {
  const double lmin = min_eigenvalue(hermitize(Linv * dP * Linv.adjoint()));
  return lmin < 0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

}  // namespace

SdpSolution solve(const HermitianSdp& sdp, const SolverOptions& opts) {
  const Model md = build(sdp);
  const int m = md.m;
  const int nc = static_cast<int>(md.cones.size());
  if (nc == 0) throw InputError("solve: program has no PSD constraints");
  const auto& blocks = sdp.blocks();

  SdpSolution sol;
  auto finish = [&](const RVector& w, std::vector<CMatrix> duals) {
    const RVector y = md.y0 + md.N * w;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const int n = blocks[k].dim;
      sol.blocks.push_back(from_hermitian_coords(y.segment(md.offset[k], n * n), n));
    }
    sol.duals = std::move(duals);
    return sol;
  };

  RVector w = RVector::Zero(m);
  {
    RVector yinit = md.y0;
    for (std::size_t k = 0; k < blocks.size(); ++k)
      if (blocks[k].initial.size() > 0)
        yinit.segment(md.offset[k], blocks[k].dim * blocks[k].dim) = hermitian_coords(blocks[k].initial);
    w = md.N.transpose() * (yinit - md.y0);
  }
  if (!md.equalities_consistent) {
    sol.status = SdpStatus::infeasible;
    std::vector<CMatrix> none;
    return finish(w, none);
  }

  std::vector<CMatrix> X(nc), S(nc);
  int total_dim = 0;
  double cnorm = 0;
  for (int j = 0; j < nc; ++j) {
    const Cone& c = md.cones[j];
    total_dim += c.n;
    cnorm = std::max(cnorm, c.C.cwiseAbs().maxCoeff());
    const CMatrix sy = hermitize(c.C - apply_A(c, w));
    const double lmin = min_eigenvalue(sy);
    S[j] = lmin > 1e-3 ? sy : CMatrix(sy + (1.0 - lmin) * identity(c.n));
    X[j] = identity(c.n);
  }
  const double bnorm = m ? md.b.cwiseAbs().maxCoeff() : 0.0;

  std::vector<CMatrix> Rd(nc);
  RVector best_w = w;
  std::vector<CMatrix> best_X = X;
  int stalls = 0;
  for (int iter = 0;; ++iter) {
    RVector rb = md.b;
    double pinf = 0, comp = 0, dobj = md.b_const;
    for (int j = 0; j < nc; ++j) {
      const Cone& c = md.cones[j];
      Rd[j] = hermitize(c.C - apply_A(c, w) - S[j]);
      pinf = std::max(pinf, Rd[j].cwiseAbs().maxCoeff());
      add_A_adjoint(c, -X[j], rb);
      comp += inner_re(X[j], S[j]);
      dobj += inner_re(c.C, X[j]);
    }
    const double dinf = m ? rb.cwiseAbs().maxCoeff() : 0.0;
    const double pobj = md.b_const + md.b.dot(w);
    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.gap = std::max(std::abs(pobj - dobj), comp);
    sol.primal_residual = pinf / (1.0 + cnorm);
    sol.dual_residual = dinf / (1.0 + bnorm);
    sol.iterations = iter;
    best_w = w;
    best_X = X;

    if (sol.gap <= opts.gap_tol && sol.primal_residual <= opts.feas_tol && sol.dual_residual <= opts.feas_tol) {
      sol.status = SdpStatus::optimal;
      break;
    }
    if (iter >= opts.max_iter || stalls >= 5) {
      sol.status = SdpStatus::max_iter;
      break;
    }
    double xnorm = 0;
    for (const auto& x : X) xnorm = std::max(xnorm, x.cwiseAbs().maxCoeff());
    if ((m && w.cwiseAbs().maxCoeff() > 1e10) || xnorm > 1e10) {
      sol.status = SdpStatus::infeasible;
      break;
    }

    const double mu = comp / total_dim;
    std::vector<Scaling> sc(nc);
    bool ok = true;
    for (int j = 0; j < nc && ok; ++j) ok = nt_scaling(X[j], S[j], sc[j]);
    if (!ok) {
      sol.status = SdpStatus::max_iter;
      break;
    }
    RMatrix M = RMatrix::Zero(m, m);
    for (int j = 0; j < nc; ++j) {
      const Cone& c = md.cones[j];
      CMatrix WAW(c.A.rows(), m);
      for (int k = 0; k < m; ++k) WAW.col(k) = vec(sc[j].W * unvec(c.A.col(k), c.n) * sc[j].W);
      M.noalias() += c.Ar.transpose() * WAW.real();
      M.noalias() += c.Ai.transpose() * WAW.imag();
    }
    M = 0.5 * (M + M.transpose());
    Eigen::LLT<RMatrix> mfac;
    double reg = 0;
    const double diag_scale = m ? std::max(M.diagonal().cwiseAbs().maxCoeff(), 1e-300) : 1.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      mfac.compute(reg > 0 ? RMatrix(M + reg * RMatrix::Identity(m, m)) : M);
      if (mfac.info() == Eigen::Success) break;
      reg = reg > 0 ? reg * 100 : 1e-14 * diag_scale;
    }
    if (mfac.info() != Eigen::Success) {
      sol.status = SdpStatus::max_iter;
      break;
    }

    struct Direction {
      RVector dw;
      std::vector<CMatrix> dX, dS;
      double ap = 0, ad = 0;
    };
    auto direction = [&](const std::vector<CMatrix>& Rc) {
      Direction d;
      RVector r1 = rb;
      for (int j = 0; j < nc; ++j) add_A_adjoint(md.cones[j], -(Rc[j] - sc[j].W * Rd[j] * sc[j].W), r1);
      d.dw = mfac.solve(r1);
      for (int refine = 0; refine < 2; ++refine) d.dw += mfac.solve(r1 - M * d.dw);
      d.dX.resize(nc);
      d.dS.resize(nc);
      d.ap = d.ad = std::numeric_limits<double>::infinity();
      for (int j = 0; j < nc; ++j) {
        d.dS[j] = hermitize(Rd[j] - apply_A(md.cones[j], d.dw));
        d.dX[j] = hermitize(Rc[j] - sc[j].W * d.dS[j] * sc[j].W);
        d.ap = std::min(d.ap, max_step(sc[j].LXinv, d.dX[j]));
        d.ad = std::min(d.ad, max_step(sc[j].LSinv, d.dS[j]));
      }
      return d;
    };

    std::vector<CMatrix> Rc(nc);
    for (int j = 0; j < nc; ++j) Rc[j] = -X[j];
    const Direction pred = direction(Rc);
    const double ap0 = std::min(1.0, pred.ap), ad0 = std::min(1.0, pred.ad);
    double comp_aff = 0;
    for (int j = 0; j < nc; ++j) comp_aff += inner_re(X[j] + ap0 * pred.dX[j], S[j] + ad0 * pred.dS[j]);
    const double sigma = std::clamp(std::pow(std::max(comp_aff, 0.0) / comp, 3.0), 0.0, 1.0);

    for (int j = 0; j < nc; ++j) Rc[j] = sigma * mu * sc[j].Sinv - X[j];
    const Direction corr = direction(Rc);
    const double tau = 0.9 + 0.09 * std::min(ap0, ad0);
    const double ap = std::min(1.0, tau * corr.ap);
    const double ad = std::min(1.0, tau * corr.ad);
    stalls = (std::min(ap, ad) < 1e-8) ? stalls + 1 : 0;
    for (int j = 0; j < nc; ++j) {
      X[j] = hermitize(X[j] + ap * corr.dX[j]);
      S[j] = hermitize(S[j] + ad * corr.dS[j]);
    }
    w += ad * corr.dw;
  }
  return finish(best_w, best_X);
}

}  // namespace qcc
