#include "qcc/io.hpp"

#include <cmath>
#include <fstream>

namespace qcc {

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix literal: expected a non-empty array of rows");
  const auto rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw InputError("matrix literal: rows must be non-empty arrays");
  const auto cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix literal: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw InputError("matrix literal: entries must be [re, im] number pairs");
      const double re = e[0].get<double>(), im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw InputError("matrix literal: non-finite entry");
      m(r, c) = cplx(re, im);
    }
  }
  return m;
}

Json channel_to_json(const KrausChannel& ch) {
  Json ks = Json::array();
  for (const auto& k : ch.kraus) ks.push_back(matrix_to_json(k));
  return {{"name", ch.name}, {"dim_in", ch.dim_in}, {"dim_out", ch.dim_out}, {"kraus", ks}};
}

namespace {

int positive_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<int>() < 1)
    throw InputError(std::string("missing or invalid '") + key + "'");
  return j[key].get<int>();
}

}  // namespace

KrausChannel channel_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("channel spec: expected an object");
  KrausChannel ch;
  ch.name = j.value("name", std::string("channel"));
  ch.dim_in = positive_int(j, "dim_in");
  ch.dim_out = positive_int(j, "dim_out");
  if (!j.contains("kraus") || !j["kraus"].is_array()) throw InputError("channel spec: missing 'kraus' list");
  for (const auto& k : j["kraus"]) ch.kraus.push_back(matrix_from_json(k));
  require_cptp(ch);
  return ch;
}

Json qc_to_json(const QCChannel& qc) {
  Json ps = Json::array();
  for (const auto& m : qc.povm) ps.push_back(matrix_to_json(m));
  return {{"dim_in", qc.dim_in}, {"povm", ps}};
}

QCChannel qc_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("qc spec: expected an object");
  QCChannel qc;
  qc.dim_in = positive_int(j, "dim_in");
  if (!j.contains("povm") || !j["povm"].is_array()) throw InputError("qc spec: missing 'povm' list");
  for (const auto& m : j["povm"]) qc.povm.push_back(matrix_from_json(m));
  validate_povm(qc);
  return qc;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path.string() + "': " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

KrausChannel load_channel(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  if (j.is_object() && j.contains("povm")) {
    KrausChannel ch = measurement_channel(qc_from_json(j));
    ch.name = path.stem().string();
    return ch;
  }
  return channel_from_json(j);
}

CMatrix load_state(const std::filesystem::path& path) {
  const CMatrix rho = matrix_from_json(read_json_file(path));
  if (rho.rows() != rho.cols()) throw InputError("state: matrix is not square");
  require_hermitian(rho, "state");
  if (std::abs(trace_re(rho) - 1.0) > 1e-9) throw InputError("state: trace must be 1");
  if (min_eigenvalue(rho) < -1e-9) throw InputError("state: matrix is not PSD");
  return rho;
}

}  // namespace qcc
