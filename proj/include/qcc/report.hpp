#pragma once

#include <string>
#include <vector>

#include "qcc/divergence.hpp"
#include "qcc/io.hpp"
#include "qcc/programs.hpp"
#include "qcc/rounding.hpp"

namespace qcc {

/// Shortest decimal form that round-trips a double; used for every CSV cell.
std::string format_number(double x);

/// {program, channel, M, value, dual_value, gap, iterations, residuals{...}}
Json solution_record(const NsSolution& s);
Json dual_record(const std::string& channel, int M, const DualResult& d);
Json hypothesis_record(double eps, double value);
/// {channel, alpha, value, rho_spectrum, sigma_spectrum, residual}
Json info_record(const std::string& channel, double alpha, const MutualInfoResult& r);

Json protocol_to_json(const ProtocolReport& r, double tol);
std::string protocol_csv_header();
std::string protocol_csv_row(const ProtocolReport& r, double tol);

Json chernoff_to_json(const ChernoffReport& r);

/// Joins cells with commas; cells containing a comma or quote are quoted.
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace qcc
