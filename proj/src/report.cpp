#include <charconv>
#include <cmath>
#include <limits>

#include "qcc/report.hpp"

namespace qcc {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

/// JSON has no infinity; store it as a string so records stay valid JSON.
Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

Json spectrum(const CMatrix& h) {
  Json out = Json::array();
  if (h.size() == 0) return out;
  const auto s = eigh(h);
  for (Eigen::Index i = 0; i < s.values.size(); ++i) out.push_back(s.values(i));
  return out;
}

}  // namespace

Json solution_record(const NsSolution& s) {
  const auto f = check_feasible(s);
  return Json{{"program", to_string(s.tag)},
              {"channel", s.channel},
              {"M", s.M},
              {"value", number(s.value)},
              {"dual_value", number(s.dual_value)},
              {"gap", number(s.gap)},
              {"iterations", s.iterations},
              {"residuals",
               {{"solver", number(s.residual)},
                {"lambda_min_eig", number(f.lambda_min_eig)},
                {"upper_min_eig", number(f.upper_min_eig)},
                {"marginal_error", number(f.marginal_error)},
                {"rho_error", number(f.rho_error)}}},
              {"feasible", f.feasible},
              {"rho", matrix_to_json(s.rho)}};
}

Json dual_record(const std::string& channel, int M, const DualResult& d) {
  return Json{{"program", "mc-dual"}, {"channel", channel},   {"M", M},
              {"value", number(d.value)}, {"gap", number(d.gap)}, {"iterations", d.iterations},
              {"Z", matrix_to_json(d.Z)}};
}

Json hypothesis_record(double eps, double value) {
  return Json{{"program", "dh"}, {"eps", eps}, {"value", number(value)}};
}

Json info_record(const std::string& channel, double alpha, const MutualInfoResult& r) {
  return Json{{"channel", channel},
              {"alpha", number(alpha)},
              {"value", number(r.value)},
              {"rho_spectrum", spectrum(r.rho)},
              {"sigma_spectrum", spectrum(r.sigma)},
              {"residual", number(r.residual)},
              {"converged", r.converged}};
}

Json protocol_to_json(const ProtocolReport& r, double tol) {
  Json per = Json::array();
  for (double x : r.per_message) per.push_back(x);
  return Json{{"protocol", r.protocol},
              {"channel", r.channel},
              {"M", r.M},
              {"M_prime", r.M_prime},
              {"per_message", per},
              {"avg_success", r.avg_success},
              {"avg_error", r.avg_error},
              {"bound", number(r.bound)},
              {"hypothesis_ok", r.hypothesis_ok},
              {"samples", r.samples},
              {"seed", r.seed},
              {"max_residual", number(r.max_residual)},
              {"tol", tol},
              {"pass", r.pass},
              {"diagnostic", r.diagnostic}};
}

std::string protocol_csv_header() {
  return "protocol,channel,M,M_prime,samples,seed,avg_success,bound,hypothesis_ok,max_residual,tol,pass";
}

std::string protocol_csv_row(const ProtocolReport& r, double tol) {
  return csv_line({r.protocol, r.channel, std::to_string(r.M), std::to_string(r.M_prime), std::to_string(r.samples),
                   std::to_string(r.seed), format_number(r.avg_success), format_number(r.bound),
                   r.hypothesis_ok ? "true" : "false", format_number(r.max_residual), format_number(tol),
                   r.pass ? "true" : "false"});
}

Json chernoff_to_json(const ChernoffReport& r) {
  return Json{{"delta", number(r.delta)},         {"mu_max", number(r.mu_max)}, {"threshold", number(r.threshold)},
              {"bound", number(r.bound)},         {"frequency", r.frequency},   {"std_error", r.std_error},
              {"trials", r.trials},               {"seed", r.seed},             {"pass", r.pass}};
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const auto& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out += c;
    } else {
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
  }
  return out;
}

}  // namespace qcc
