#include "qcc/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "qcc/parallel.hpp"
#include "qcc/programs.hpp"
#include "qcc/random.hpp"

namespace qcc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportTol = 1e-12;

// log Tr[Y^α] for PSD Y, computed without overflow.
struct PowerTrace {
  double log_q = -kInf;
  double scale = 0.0;  // λ_max(Y)
  double sum = 0.0;    // Σ (λ/λ_max)^α
};

PowerTrace log_trace_power(const RVector& eig, double alpha) {
  PowerTrace p;
  p.scale = std::max(eig.maxCoeff(), 0.0);
  if (p.scale <= 0) return p;
  for (Eigen::Index i = 0; i < eig.size(); ++i)
    if (eig(i) > 0) p.sum += std::pow(eig(i) / p.scale, alpha);
  p.log_q = alpha * std::log(p.scale) + std::log(p.sum);
  return p;
}

CMatrix spectral_apply(const Spectrum& s, const std::function<double(double)>& f) {
  RVector v(s.values.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(s.values(i));
  return s.vectors * v.cast<cplx>().asDiagonal() * s.vectors.adjoint();
}

bool support_violated(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix ker = identity(static_cast<int>(sigma.rows())) - support_projector(sigma);
  return trace_re(rho * ker) > kSupportTol * std::max(1.0, trace_re(rho));
}

void check_pair(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.rows() != rho.cols() || sigma.rows() != sigma.cols())
    throw InputError("divergence: operands must be square and of equal dimension");
  require_hermitian(rho, "rho");
  require_hermitian(sigma, "sigma");
}

double entropy_of(const RVector& ev) {
  double s = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-300) s -= ev(i) * std::log(ev(i));
  return s;
}

// Pulls a gradient H with respect to f(ρ) back to a gradient with respect to ρ.
CMatrix daleckii_krein(const Spectrum& s, const CMatrix& H, const std::function<double(double)>& f,
                       const std::function<double(double)>& fp) {
  CMatrix hb = s.vectors.adjoint() * H * s.vectors;
  const Eigen::Index n = s.values.size();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double li = std::max(s.values(i), 1e-14), lj = std::max(s.values(j), 1e-14);
      const double coef = std::abs(li - lj) > 1e-9 * std::max(li, lj) ? (f(li) - f(lj)) / (li - lj) : fp(0.5 * (li + lj));
      hb(i, j) *= coef;
    }
  return hermitize(s.vectors * hb * s.vectors.adjoint());
}

}  // namespace

RenyiOrder RenyiOrder::of(double a) {
  if (std::isinf(a)) return infinity();
  if (a == 1.0) return one();
  if (!(a > 1.0)) throw InputError("Renyi order must be ≥ 1");
  return {Kind::finite, a};
}

double sandwiched(const CMatrix& rho, const CMatrix& sigma, double alpha) {
  if (!(alpha > 1.0)) throw InputError("sandwiched: alpha must exceed 1");
  check_pair(rho, sigma);
  if (std::isinf(alpha)) return max_divergence(rho, sigma);
  if (support_violated(rho, sigma)) return kInf;
  const double gamma = (1.0 - alpha) / (2.0 * alpha);
  const CMatrix s = frac_power(sigma, gamma);
  const RVector ev = eigh(hermitize(s * rho * s)).values;
  const PowerTrace p = log_trace_power(ev, alpha);
  return p.log_q / (alpha - 1.0);
}

double sandwiched(const CMatrix& rho, const CMatrix& sigma, RenyiOrder order) {
  switch (order.kind) {
    case RenyiOrder::Kind::one: return umegaki(rho, sigma);
    case RenyiOrder::Kind::infinity: return max_divergence(rho, sigma);
    case RenyiOrder::Kind::finite: break;
  }
  return sandwiched(rho, sigma, order.alpha);
}

double max_divergence(const CMatrix& rho, const CMatrix& sigma) {
  check_pair(rho, sigma);
  if (support_violated(rho, sigma)) return kInf;
  const CMatrix s = frac_power(sigma, -0.5);
  return std::log(max_eigenvalue(hermitize(s * rho * s)));
}

double umegaki(const CMatrix& rho, const CMatrix& sigma) {
  check_pair(rho, sigma);
  if (support_violated(rho, sigma)) return kInf;
  return inner_re(rho, log_on_support(rho)) - inner_re(rho, log_on_support(sigma));
}

double von_neumann_entropy(const CMatrix& rho) { return entropy_of(eigh(rho).values); }

// ---------------------------------------------------------------------------
// Channel quantities

namespace {

struct ChannelContext {
  const ChoiMatrix& J;
  CMatrix Jh;  // J^{1/2}
  int dR, dB;
  SubsystemShape shape;

  explicit ChannelContext(const ChoiMatrix& j)
      : J(j), Jh(frac_power(j.op, 0.5)), dR(j.dim_in), dB(j.dim_out), shape{j.dim_in, j.dim_out} {}
};

// Value and ρ-gradient of I(ρ) = S(ρ) + S(ω) − S(ρ_RB) with ω = Tr_R[(ρ⊗I)J].
double mutual_info_alpha_one(const ChannelContext& c, const CMatrix& rho, CMatrix* grad, CMatrix* sigma_out) {
  const Spectrum sr = eigh(rho);
  const CMatrix omega = hermitize(partial_trace(kron(rho, identity(c.dB)) * c.J.op, c.shape, {1}));
  const Spectrum so = eigh(omega);
  const CMatrix x = hermitize(c.Jh * kron(rho, identity(c.dB)) * c.Jh);
  const Spectrum sx = eigh(x);
  const double value = entropy_of(sr.values) + entropy_of(so.values) - entropy_of(sx.values);
  if (sigma_out) *sigma_out = omega;
  if (grad) {
    auto logp = [](const Spectrum& s) {
      const double cut = kRankTol * std::max(s.values.maxCoeff(), 1e-300);
      return spectral_apply(s, [cut](double v) { return v > cut ? std::log(v) + 1.0 : 0.0; });
    };
    const CMatrix lr = logp(sr);
    const CMatrix lo = logp(so);
    const CMatrix lx = logp(sx);
    *grad = hermitize(-lr - partial_trace(kron(identity(c.dR), lo) * c.J.op, c.shape, {0}) +
                      partial_trace(c.Jh * lx * c.Jh, c.shape, {0}));
  }
  return value;
}

InnerResult inner_fixed_point(const ChannelContext& c, const CMatrix& rho, double alpha, const MutualInfoOptions& opts,
                              const CMatrix* warm) {
  const double gamma = (1.0 - alpha) / (2.0 * alpha);
  const CMatrix a = kron(frac_power(rho, 1.0 / (2.0 * alpha)), identity(c.dB));
  CMatrix sigma = (warm && warm->rows() == c.dB) ? *warm : CMatrix(identity(c.dB) / static_cast<double>(c.dB));
  InnerResult r;
  // In log coordinates the undamped update has slope 1 − α near the fixed point, so damp by 1/α.
  const double theta0 = std::min(0.5, 1.0 / alpha);
  double theta = theta0;
  double prev = kInf;
  for (int it = 0;; ++it) {
    const CMatrix k = a * kron(identity(c.dR), frac_power(sigma, gamma));
    const Spectrum sy = eigh(hermitize(k * c.J.op * k.adjoint()));
    const PowerTrace p = log_trace_power(sy.values, alpha);
    r.value = p.log_q / (alpha - 1.0);
    r.iterations = it;
    r.sigma = sigma;
    const double scale = p.scale;
    const CMatrix ya = spectral_apply(sy, [scale, alpha](double v) { return v > 0 ? std::pow(v / scale, alpha) : 0.0; });
    CMatrix t = hermitize(partial_trace(ya, c.shape, {1}));
    t /= trace_re(t);
    r.residual = (t - sigma).cwiseAbs().maxCoeff();
    if (r.residual <= opts.inner_tol) {
      r.converged = true;
      break;
    }
    if (it >= opts.inner_max_iter) break;
    if (r.value > prev + 1e-13 && theta > theta0 / 64) theta *= 0.5;
    prev = std::min(prev, r.value);
    sigma = hermitize((1.0 - theta) * sigma + theta * t);
  }
  return r;
}

// Gradient of log Tr[(J^{1/2}(ρ^{1/α} ⊗ σ^{2γ})J^{1/2})^α] / (α − 1) with respect to ρ at fixed σ.
CMatrix sandwiched_gradient(const ChannelContext& c, const CMatrix& rho, const CMatrix& sigma, double alpha) {
  const double gamma = (1.0 - alpha) / (2.0 * alpha);
  const Spectrum sr = eigh(rho);
  const CMatrix P = spectral_apply(sr, [alpha](double v) { return v > 0 ? std::pow(v, 1.0 / alpha) : 0.0; });
  const CMatrix ch = frac_power(sigma, gamma);  // c^{1/2}
  const CMatrix x = hermitize(c.Jh * kron(P, ch * ch) * c.Jh);
  const Spectrum sx = eigh(x);
  const PowerTrace p = log_trace_power(sx.values, alpha);
  const double scale = p.scale;
  const CMatrix xa1 =
      spectral_apply(sx, [scale, alpha](double v) { return v > 0 ? std::pow(v / scale, alpha - 1.0) : 0.0; });
  const CMatrix side = kron(identity(c.dR), ch);
  CMatrix H = partial_trace(side * c.Jh * xa1 * c.Jh * side, c.shape, {0});
  H = hermitize(H) * (alpha / (scale * p.sum));
  const CMatrix g = daleckii_krein(
      sr, H, [alpha](double v) { return std::pow(v, 1.0 / alpha); },
      [alpha](double v) { return std::pow(v, 1.0 / alpha - 1.0) / alpha; });
  return g / (alpha - 1.0);
}

struct OuterProblem {
  const ChannelContext* ctx;
  double alpha;  // 1 for the Umegaki case
  const MutualInfoOptions* opts;
  CMatrix warm;
  int d;
};

CMatrix t_from_params(const gsl_vector* x, int d) {
  CMatrix t(d, d);
  const int n = d * d;
  for (int i = 0; i < n; ++i) t(i % d, i / d) = cplx(gsl_vector_get(x, i), gsl_vector_get(x, n + i));
  return t;
}

CMatrix rho_from_t(const CMatrix& t) {
  CMatrix r = t * t.adjoint();
  return hermitize(r / trace_re(r));
}

// Returns the objective; fills grad with d(objective)/dρ when requested.
double outer_eval(OuterProblem& prob, const CMatrix& rho, CMatrix* grad) {
  if (prob.alpha == 1.0) return mutual_info_alpha_one(*prob.ctx, rho, grad, nullptr);
  const InnerResult in = inner_fixed_point(*prob.ctx, rho, prob.alpha, *prob.opts, &prob.warm);
  prob.warm = in.sigma;
  if (grad) *grad = sandwiched_gradient(*prob.ctx, rho, in.sigma, prob.alpha);
  return in.value;
}

double gsl_f(const gsl_vector* x, void* params) {
  auto& prob = *static_cast<OuterProblem*>(params);
  return -outer_eval(prob, rho_from_t(t_from_params(x, prob.d)), nullptr);
}

void gsl_fdf(const gsl_vector* x, void* params, double* f, gsl_vector* g) {
  auto& prob = *static_cast<OuterProblem*>(params);
  const int d = prob.d, n = d * d;
  const CMatrix t = t_from_params(x, d);
  const CMatrix rt = t * t.adjoint();
  const double tr = trace_re(rt);
  const CMatrix rho = hermitize(rt / tr);
  CMatrix grad;
  const double val = outer_eval(prob, rho, &grad);
  if (f) *f = -val;
  if (g) {
    const CMatrix G = (2.0 / tr) * (grad - inner_re(grad, rho) * identity(d)) * t;
    for (int i = 0; i < n; ++i) {
      gsl_vector_set(g, i, -G(i % d, i / d).real());
      gsl_vector_set(g, n + i, -G(i % d, i / d).imag());
    }
  }
}

void gsl_df(const gsl_vector* x, void* params, gsl_vector* g) { gsl_fdf(x, params, nullptr, g); }

struct StartResult {
  double value = -kInf;
  CMatrix rho;
  int iterations = 0;
  bool converged = false;
};

StartResult run_start(const ChannelContext& ctx, double alpha, const MutualInfoOptions& opts, const CMatrix& t0) {
  const int d = ctx.dR, n = d * d;
  OuterProblem prob{&ctx, alpha, &opts, CMatrix(), d};
  gsl_multimin_function_fdf fn;
  fn.n = 2 * n;
  fn.f = gsl_f;
  fn.df = gsl_df;
  fn.fdf = gsl_fdf;
  fn.params = &prob;
  gsl_vector* x = gsl_vector_alloc(2 * n);
  for (int i = 0; i < n; ++i) {
    gsl_vector_set(x, i, t0(i % d, i / d).real());
    gsl_vector_set(x, n + i, t0(i % d, i / d).imag());
  }
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, 2 * n);
  gsl_multimin_fdfminimizer_set(s, &fn, x, 0.05, 0.1);
  StartResult res;
  int status = GSL_CONTINUE;
  int it = 0;
  for (; it < opts.outer_max_iter && status == GSL_CONTINUE; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
    status = gsl_multimin_test_gradient(s->gradient, opts.outer_grad_tol);
  }
  res.converged = status == GSL_SUCCESS;
  res.iterations = it;
  res.rho = rho_from_t(t_from_params(s->x, d));
  res.value = -s->f;
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(x);
  return res;
}

struct GslErrorsOff {
  gsl_error_handler_t* prev;
  GslErrorsOff() : prev(gsl_set_error_handler_off()) {}
  ~GslErrorsOff() { gsl_set_error_handler(prev); }
};

}  // namespace

double channel_objective(const ChoiMatrix& J, const CMatrix& rho, const CMatrix& sigma, double alpha) {
  const CMatrix h = kron(frac_power(rho, 0.5), identity(J.dim_out));
  const CMatrix rho_rb = hermitize(h * J.op * h);
  const CMatrix ref = kron(rho, sigma);
  if (alpha == 1.0) return umegaki(rho_rb, ref);
  return sandwiched(rho_rb, ref, alpha);
}

InnerResult inner_minimize(const ChoiMatrix& J, const CMatrix& rho, double alpha, const MutualInfoOptions& opts,
                           const CMatrix* warm_start) {
  if (!(alpha > 1.0)) throw InputError("inner_minimize: alpha must exceed 1");
  const ChannelContext ctx(J);
  return inner_fixed_point(ctx, rho, alpha, opts, warm_start);
}

MutualInfoResult channel_mutual_info(const ChoiMatrix& J, RenyiOrder order, const MutualInfoOptions& opts) {
  double alpha = 1.0;
  if (order.kind == RenyiOrder::Kind::finite) {
    if (!(order.alpha > 1.0)) throw InputError("channel_mutual_info: alpha must be ≥ 1");
    alpha = order.alpha;
  } else if (order.kind == RenyiOrder::Kind::infinity) {
    alpha = kMaxOrder;
  }
  const ChannelContext ctx(J);
  const int d = J.dim_in;
  const int starts = 1 + std::max(0, opts.random_starts);
  const GslErrorsOff guard;
  auto runs = parallel_map(static_cast<std::size_t>(starts), [&](std::size_t k) {
    CMatrix t0 = identity(d);
    if (k > 0) {
      Rng rng(opts.seed * 1000003ULL + k);
      t0 = gaussian_matrix(rng, d, d);
    }
    return run_start(ctx, alpha, opts, t0);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k].value > runs[best].value) best = k;
  MutualInfoResult out;
  out.rho = runs[best].rho;
  out.iterations = runs[best].iterations;
  if (alpha == 1.0) {
    out.value = mutual_info_alpha_one(ctx, out.rho, nullptr, &out.sigma);
    out.converged = runs[best].converged;
    out.residual = 0.0;
  } else {
    const InnerResult in = inner_fixed_point(ctx, out.rho, alpha, opts, nullptr);
    out.value = in.value;
    out.sigma = in.sigma;
    out.residual = in.residual;
    out.converged = in.converged;
  }
  out.value = std::max(out.value, 0.0);
  return out;
}

std::vector<double> exponent_alpha_grid(int points) {
  std::vector<double> g{0.0};
  const double lo = std::log(0.02), hi = std::log(kMaxOrder - 1.0);
  for (int k = 0; k < points; ++k) g.push_back(std::exp(lo + (hi - lo) * k / (points - 1)));
  return g;
}

ScExponent::ScExponent(const ChoiMatrix& J, std::vector<double> alphas, const MutualInfoOptions& opts)
    : alphas_(std::move(alphas)) {
  std::sort(alphas_.begin(), alphas_.end());
  if (alphas_.empty() || alphas_.front() < 0) throw InputError("exponent: alpha grid must be nonempty and ≥ 0");
  info_one_ = channel_mutual_info(J, RenyiOrder::one(), opts).value;
  info_ = parallel_map(alphas_.size(), [&](std::size_t k) {
    return alphas_[k] == 0.0 ? info_one_ : channel_mutual_info(J, RenyiOrder::of(1.0 + alphas_[k]), opts).value;
  });
  // Ĩ_α is nondecreasing in α; enforce it so numerical under-optimization cannot create spurious kinks.
  double run = info_one_;
  for (auto& v : info_) v = run = std::max(run, v);
}

ScExponent::ScExponent(std::vector<double> alphas, std::vector<double> info_values, double info_one)
    : alphas_(std::move(alphas)), info_(std::move(info_values)), info_one_(info_one) {
  if (alphas_.size() != info_.size() || alphas_.empty()) throw InputError("exponent: grid and values differ in length");
}

double ScExponent::operator()(double r) const {
  if (!(r >= 0)) throw InputError("exponent: rate must be ≥ 0");
  if (r <= info_one_) return 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k < alphas_.size(); ++k)
    best = std::max(best, alphas_[k] / (1.0 + alphas_[k]) * (r - info_[k]));
  best = std::max(best, r - info_.back());
  return best;
}

double sc_exponent(const ChoiMatrix& J, double r, const MutualInfoOptions& opts) {
  return ScExponent(J, exponent_alpha_grid(), opts)(r);
}

ConverseReport converse_bound_rows(int M, double mc, const std::vector<double>& alphas, const std::vector<double>& info) {
  if (alphas.size() != info.size()) throw InputError("converse: alphas and values differ in length");
  ConverseReport rep;
  rep.M = M;
  rep.mc = mc;
  rep.pass = true;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    ConverseRow row;
    row.alpha = alphas[k];
    row.info = info[k];
    row.bound = std::exp(-(alphas[k] / (1.0 + alphas[k])) * (std::log(static_cast<double>(M)) - info[k]));
    row.mc = mc;
    row.slack = row.bound - mc;
    row.pass = mc <= row.bound + 1e-5;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

ConverseReport converse_bound_check(const ChoiMatrix& J, int M, const std::vector<double>& alphas,
                                    const MutualInfoOptions& opts) {
  for (double a : alphas)
    if (!(a > 0)) throw InputError("converse: alphas must be positive");
  const double mc = mc_success(J, M).value;
  const auto info = parallel_map(alphas.size(), [&](std::size_t k) {
    return channel_mutual_info(J, RenyiOrder::of(1.0 + alphas[k]), opts).value;
  });
  return converse_bound_rows(M, mc, alphas, info);
}

}  // namespace qcc
