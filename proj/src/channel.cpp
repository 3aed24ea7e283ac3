#include "qcc/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qcc/random.hpp"

namespace qcc {

namespace {

void check_dims(const KrausChannel& ch) {
  if (ch.dim_in < 1 || ch.dim_out < 1) throw InputError("channel: dimensions must be positive");
  if (ch.kraus.empty()) throw InputError("channel: empty Kraus list");
  for (const auto& k : ch.kraus)
    if (k.rows() != ch.dim_out || k.cols() != ch.dim_in)
      throw InputError("channel '" + ch.name + "': Kraus operator has wrong shape");
}

}  // namespace

ChoiMatrix choi_of(const KrausChannel& channel) {
  require_cptp(channel);
  const int a = channel.dim_in;
  const int b = channel.dim_out;
  CMatrix j = CMatrix::Zero(a * b, a * b);
  for (const auto& k : channel.kraus) {
    // |w_k⟩ = Σ_i |i⟩ ⊗ K|i⟩
    CVector w(a * b);
    for (int i = 0; i < a; ++i) w.segment(i * b, b) = k.col(i);
    j.noalias() += w * w.adjoint();
  }
  return {hermitize(j), a, b, channel.name};
}

CMatrix apply(const KrausChannel& channel, const CMatrix& rho) {
  check_dims(channel);
  if (rho.rows() != channel.dim_in || rho.cols() != channel.dim_in)
    throw InputError("apply: input dimension mismatch");
  CMatrix out = CMatrix::Zero(channel.dim_out, channel.dim_out);
  for (const auto& k : channel.kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

CMatrix apply_choi(const ChoiMatrix& choi, const CMatrix& x) {
  if (x.rows() != choi.dim_in) throw InputError("apply_choi: input dimension mismatch");
  const CMatrix xt = x.transpose();
  const CMatrix prod = kron(xt, identity(choi.dim_out)) * choi.op;
  return partial_trace(prod, choi.shape(), {1});
}

CMatrix apply_adjoint(const KrausChannel& channel, const CMatrix& y) {
  CMatrix out = CMatrix::Zero(channel.dim_in, channel.dim_in);
  for (const auto& k : channel.kraus) out.noalias() += k.adjoint() * y * k;
  return out;
}

CptpReport validate_cptp(const KrausChannel& channel) {
  CptpReport r;
  try {
    check_dims(channel);
  } catch (const InputError& e) {
    r.message = e.what();
    return r;
  }
  CMatrix s = CMatrix::Zero(channel.dim_in, channel.dim_in);
  for (const auto& k : channel.kraus) s.noalias() += k.adjoint() * k;
  r.tp_error = (s - identity(channel.dim_in)).cwiseAbs().maxCoeff();
  const int a = channel.dim_in, b = channel.dim_out;
  CMatrix j = CMatrix::Zero(a * b, a * b);
  for (const auto& k : channel.kraus) {
    CVector w(a * b);
    for (int i = 0; i < a; ++i) w.segment(i * b, b) = k.col(i);
    j.noalias() += w * w.adjoint();
  }
  r.choi_min_eig = min_eigenvalue(j);
  std::ostringstream msg;
  if (r.tp_error > kCptpTol) msg << "not trace preserving (max |ΣK†K − I| = " << r.tp_error << ")";
  if (r.choi_min_eig < -kCptpTol) {
    if (msg.tellp() > 0) msg << "; ";
    msg << "Choi operator not PSD (min eigenvalue " << r.choi_min_eig << ")";
  }
  r.message = msg.str();
  r.valid = r.message.empty();
  return r;
}

void require_cptp(const KrausChannel& channel) {
  const auto r = validate_cptp(channel);
  if (!r.valid) throw InputError("channel '" + channel.name + "': " + r.message);
}

void validate_povm(const QCChannel& qc) {
  if (qc.dim_in < 1 || qc.povm.empty()) throw InputError("povm: empty or zero-dimensional");
  CMatrix s = CMatrix::Zero(qc.dim_in, qc.dim_in);
  for (const auto& m : qc.povm) {
    if (m.rows() != qc.dim_in || m.cols() != qc.dim_in) throw InputError("povm: element has wrong shape");
    require_hermitian(m, "povm element");
    if (min_eigenvalue(m) < -1e-10) throw InputError("povm: element is not PSD");
    s += m;
  }
  if ((s - identity(qc.dim_in)).cwiseAbs().maxCoeff() > 1e-10) throw InputError("povm: elements do not sum to identity");
}

KrausChannel measurement_channel(const QCChannel& qc) {
  validate_povm(qc);
  KrausChannel ch{"measurement", qc.dim_in, qc.outcomes(), {}};
  for (int x = 0; x < qc.outcomes(); ++x) {
    const Spectrum s = eigh(qc.povm[x]);
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
      if (s.values(i) <= kRankTol * std::max(1.0, s.values(0))) continue;
      CMatrix k = CMatrix::Zero(qc.outcomes(), qc.dim_in);
      k.row(x) = std::sqrt(s.values(i)) * s.vectors.col(i).adjoint();
      ch.kraus.push_back(std::move(k));
    }
  }
  return ch;
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  check_dims(a);
  check_dims(b);
  const long din = static_cast<long>(a.dim_in) * b.dim_in;
  const long dout = static_cast<long>(a.dim_out) * b.dim_out;
  if (din * dout > 4096) throw InputError("tensor: composite dimension exceeds guard (|A||B| ≤ 4096)");
  KrausChannel out{a.name + "⊗" + b.name, static_cast<int>(din), static_cast<int>(dout), {}};
  out.kraus.reserve(a.kraus.size() * b.kraus.size());
  for (const auto& ka : a.kraus)
    for (const auto& kb : b.kraus) out.kraus.push_back(kron(ka, kb));
  return out;
}

KrausChannel power(const KrausChannel& a, int n) {
  if (n < 1 || n > kMaxPower) throw InputError("power: n must be in {1, 2, 3}");
  KrausChannel out = a;
  for (int i = 1; i < n; ++i) out = tensor(out, a);
  // Keep the Kraus list minimal so products stay cheap.
  if (static_cast<long>(out.kraus.size()) > static_cast<long>(out.dim_in) * out.dim_out)
    out = kraus_from_choi(choi_of(out), out.name);
  out.name = a.name + "^" + std::to_string(n);
  return out;
}

KrausChannel kraus_from_choi(const ChoiMatrix& choi, const std::string& name) {
  const Spectrum s = eigh(choi.op);
  KrausChannel ch{name, choi.dim_in, choi.dim_out, {}};
  const double cut = kRankTol * std::max(1.0, s.values(0));
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) <= cut) continue;
    const CVector w = std::sqrt(s.values(i)) * s.vectors.col(i);
    CMatrix k(choi.dim_out, choi.dim_in);
    for (int r = 0; r < choi.dim_in; ++r) k.col(r) = w.segment(r * choi.dim_out, choi.dim_out);
    ch.kraus.push_back(std::move(k));
  }
  return ch;
}

CMatrix weyl(int d, int a, int b) {
  CMatrix xa = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) xa((j + a) % d, j) = 1.0;
  CMatrix zb = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) zb(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * b * j / d);
  return std::polar(1.0, std::numbers::pi * a * b / d) * xa * zb;
}

namespace zoo {

KrausChannel identity(int d) {
  if (d < 1) throw InputError("identity: d must be positive");
  return {"identity" + std::to_string(d), d, d, {qcc::identity(d)}};
}

KrausChannel depolarizing(int d, double p) {
  if (d < 1 || !(p >= 0.0 && p <= 1.0)) throw InputError("depolarizing: need d ≥ 1 and p ∈ [0, 1]");
  std::ostringstream name;
  name << "depolarizing" << d << "(" << p << ")";
  KrausChannel ch{name.str(), d, d, {}};
  const double d2 = static_cast<double>(d) * d;
  ch.kraus.push_back(std::sqrt(1.0 - p + p / d2) * qcc::identity(d));
  if (p > 0)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (a != 0 || b != 0) ch.kraus.push_back(std::sqrt(p / d2) * weyl(d, a, b));
  return ch;
}

KrausChannel dephasing(int d, double p) {
  if (d < 1 || !(p >= 0.0 && p <= 1.0)) throw InputError("dephasing: need d ≥ 1 and p ∈ [0, 1]");
  std::ostringstream name;
  name << "dephasing" << d << "(" << p << ")";
  KrausChannel ch{name.str(), d, d, {std::sqrt(1.0 - p) * qcc::identity(d)}};
  if (p > 0)
    for (int i = 0; i < d; ++i) {
      CMatrix k = CMatrix::Zero(d, d);
      k(i, i) = std::sqrt(p);
      ch.kraus.push_back(std::move(k));
    }
  return ch;
}

KrausChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("amplitude_damping: gamma must be in [0, 1]");
  std::ostringstream name;
  name << "amplitude_damping(" << gamma << ")";
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return {name.str(), 2, 2, {k0, k1}};
}

KrausChannel replacer(int dim_in, const CMatrix& sigma) {
  require_hermitian(sigma, "replacer");
  if (std::abs(trace_re(sigma) - 1.0) > 1e-10 || min_eigenvalue(sigma) < -1e-10)
    throw InputError("replacer: sigma must be a density matrix");
  const int dout = static_cast<int>(sigma.rows());
  KrausChannel ch{"replacer", dim_in, dout, {}};
  const Spectrum s = eigh(sigma);
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.values(k) <= kRankTol) continue;
    for (int i = 0; i < dim_in; ++i) {
      CMatrix op = CMatrix::Zero(dout, dim_in);
      op.col(i) = std::sqrt(s.values(k)) * s.vectors.col(k);
      ch.kraus.push_back(std::move(op));
    }
  }
  return ch;
}

KrausChannel classical(const std::vector<std::vector<double>>& w) {
  if (w.empty()) throw InputError("classical: empty transition matrix");
  const int nx = static_cast<int>(w.size());
  const int ny = static_cast<int>(w[0].size());
  KrausChannel ch{"classical", nx, ny, {}};
  for (int x = 0; x < nx; ++x) {
    if (static_cast<int>(w[x].size()) != ny) throw InputError("classical: ragged transition matrix");
    double total = 0;
    for (int y = 0; y < ny; ++y) {
      if (w[x][y] < 0) throw InputError("classical: negative transition probability");
      total += w[x][y];
      if (w[x][y] == 0) continue;
      CMatrix k = CMatrix::Zero(ny, nx);
      k(y, x) = std::sqrt(w[x][y]);
      ch.kraus.push_back(std::move(k));
    }
    if (std::abs(total - 1.0) > 1e-10) throw InputError("classical: rows must sum to 1");
  }
  return ch;
}

KrausChannel random_cptp(std::uint64_t seed, int dim_in, int dim_out) {
  if (dim_in < 1 || dim_out < 1) throw InputError("random_cptp: dimensions must be positive");
  Rng rng(seed);
  const int env = dim_in * dim_out;
  const CMatrix g = gaussian_matrix(rng, dim_out * env, dim_in);
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix v = qr.householderQ() * CMatrix::Identity(dim_out * env, dim_in);
  KrausChannel ch{"random_cptp(" + std::to_string(seed) + "," + std::to_string(dim_in) + "," +
                      std::to_string(dim_out) + ")",
                  dim_in, dim_out, {}};
  for (int e = 0; e < env; ++e) {
    CMatrix k(dim_out, dim_in);
    for (int b = 0; b < dim_out; ++b) k.row(b) = v.row(b * env + e);
    ch.kraus.push_back(std::move(k));
  }
  return ch;
}

QCChannel trine() {
  QCChannel qc{2, {}};
  for (int k = 0; k < 3; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 3.0;
    CVector psi(2);
    psi << std::cos(th / 2.0), std::sin(th / 2.0);
    qc.povm.push_back((2.0 / 3.0) * psi * psi.adjoint());
  }
  return qc;
}

QCChannel computational_basis(int d) {
  QCChannel qc{d, {}};
  for (int i = 0; i < d; ++i) {
    CMatrix m = CMatrix::Zero(d, d);
    m(i, i) = 1.0;
    qc.povm.push_back(std::move(m));
  }
  return qc;
}

QCChannel random_povm(std::uint64_t seed, int dim_in, int outcomes) {
  if (dim_in < 1 || outcomes < 1) throw InputError("random_povm: bad dimensions");
  Rng rng(seed);
  std::vector<CMatrix> raw;
  CMatrix s = CMatrix::Zero(dim_in, dim_in);
  for (int x = 0; x < outcomes; ++x) {
    const CMatrix g = gaussian_matrix(rng, dim_in, dim_in);
    raw.push_back(g * g.adjoint());
    s += raw.back();
  }
  const CMatrix t = frac_power(hermitize(s), -0.5);
  QCChannel qc{dim_in, {}};
  for (const auto& m : raw) qc.povm.push_back(hermitize(t * m * t));
  return qc;
}

}  // namespace zoo

namespace {

void need(const std::string& name, const std::vector<double>& p, std::size_t n) {
  if (p.size() != n)
    throw InputError("channel '" + name + "' expects " + std::to_string(n) + " parameter(s)");
}

int as_int(double v, const char* what) {
  if (v != std::floor(v) || v < 1 || v > 64) throw InputError(std::string(what) + " must be a small positive integer");
  return static_cast<int>(v);
}

}  // namespace

KrausChannel standard(const std::string& name, const std::vector<double>& p) {
  KrausChannel ch;
  if (name == "identity") {
    need(name, p, 1);
    ch = zoo::identity(as_int(p[0], "d"));
  } else if (name == "depolarizing") {
    need(name, p, 2);
    ch = zoo::depolarizing(as_int(p[0], "d"), p[1]);
  } else if (name == "dephasing") {
    need(name, p, 2);
    ch = zoo::dephasing(as_int(p[0], "d"), p[1]);
  } else if (name == "amplitude_damping") {
    need(name, p, 1);
    ch = zoo::amplitude_damping(p[0]);
  } else if (name == "replacer_mixed") {
    need(name, p, 2);
    const int dout = as_int(p[1], "d_out");
    ch = zoo::replacer(as_int(p[0], "d_in"), qcc::identity(dout) / static_cast<double>(dout));
  } else if (name == "random_cptp") {
    need(name, p, 3);
    if (p[0] < 0 || p[0] != std::floor(p[0])) throw InputError("random_cptp: seed must be a nonnegative integer");
    ch = zoo::random_cptp(static_cast<std::uint64_t>(p[0]), as_int(p[1], "d_in"), as_int(p[2], "d_out"));
  } else if (name == "bsc") {
    need(name, p, 1);
    if (!(p[0] >= 0 && p[0] <= 1)) throw InputError("bsc: p must be in [0, 1]");
    ch = zoo::classical({{1 - p[0], p[0]}, {p[0], 1 - p[0]}});
  } else if (name == "symmetric_classical") {
    need(name, p, 2);
    const int k = as_int(p[0], "k");
    if (k < 2) throw InputError("symmetric_classical: alphabet size must be at least 2");
    if (!(p[1] >= 0 && p[1] <= 1)) throw InputError("symmetric_classical: p must be in [0, 1]");
    std::vector<std::vector<double>> w(k, std::vector<double>(k, p[1] / (k - 1)));
    for (int x = 0; x < k; ++x) w[x][x] = 1 - p[1];
    ch = zoo::classical(w);
  } else if (name == "random_povm") {
    need(name, p, 3);
    if (p[0] < 0 || p[0] != std::floor(p[0])) throw InputError("random_povm: seed must be a nonnegative integer");
    ch = measurement_channel(
        zoo::random_povm(static_cast<std::uint64_t>(p[0]), as_int(p[1], "d_in"), as_int(p[2], "outcomes")));
  } else if (name == "trine") {
    need(name, p, 0);
    ch = measurement_channel(zoo::trine());
  } else if (name == "basis_measurement") {
    need(name, p, 1);
    ch = measurement_channel(zoo::computational_basis(as_int(p[0], "d")));
  } else {
    throw InputError("unknown channel name '" + name + "'");
  }
  return ch;
}

KrausChannel standard_from_spec(const std::string& spec) {
  const auto open = spec.find('(');
  std::vector<double> params;
  std::string name = spec;
  if (open != std::string::npos) {
    if (spec.back() != ')') throw InputError("channel spec '" + spec + "': missing ')'");
    name = spec.substr(0, open);
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        params.push_back(std::stod(tok, &used));
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw InputError("channel spec '" + spec + "': bad number '" + tok + "'");
      }
    }
  }
  KrausChannel ch = standard(name, params);
  ch.name = spec;
  return ch;
}

}  // namespace qcc
