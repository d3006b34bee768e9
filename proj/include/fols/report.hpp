#pragma once

#include "fols/adaptivity.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fols {

/// Column names of the convergence table. The error columns are present only
/// when the problem has a known solution.
std::vector<std::string> csv_columns(bool with_errors);

/// One header line and one row per level; numbers in %.16e so reruns are byte-identical.
void write_csv(std::ostream& out, const std::vector<LevelRecord>& levels, bool with_errors);

/// Parsed convergence table, column name -> values.
using Table = std::map<std::string, std::vector<double>>;
Table read_csv(std::istream& in);

/// Rate of `column` against nE over the last `tail` rows. Throws
/// std::invalid_argument for a missing column or too few rows.
double table_rate(const Table& table, const std::string& column, int tail);

} // namespace fols
