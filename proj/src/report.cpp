#include "fols/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fols {

std::vector<std::string> csv_columns(bool with_errors)
{
    std::vector<std::string> cols{"nE", "nDof", "est", "eta", "estContact", "oscF"};
    if (with_errors)
        for (const char* c : {"errNormU", "errNormV", "errU", "errSigma", "errDivSigmaLambda"}) cols.emplace_back(c);
    cols.emplace_back("iters");
    return cols;
}

namespace {

std::string format_value(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_value(*v) : "nan"; }

} // namespace

void write_csv(std::ostream& out, const std::vector<LevelRecord>& levels, bool with_errors)
{
    const auto cols = csv_columns(with_errors);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : levels) {
        out << r.nE << ',' << r.nDof << ',' << format_value(r.est) << ',' << format_value(r.eta) << ','
            << format_value(r.estContact) << ',' << format_value(r.oscF);
        if (with_errors) {
            out << ',' << format_optional(r.errNormU) << ',' << format_optional(r.errNormV) << ','
                << format_optional(r.errU) << ',' << format_optional(r.errSigma) << ','
                << format_optional(r.errDivSigmaLambda);
        }
        out << ',' << r.iters << '\n';
    }
}

Table read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty input");
    std::vector<std::string> names;
    {
        std::stringstream header(line);
        std::string name;
        while (std::getline(header, name, ',')) names.push_back(name);
    }
    Table table;
    for (const auto& n : names) table[n];
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(row, cell, ',')) {
            if (col >= names.size()) throw std::invalid_argument("read_csv: row has too many cells");
            table[names[col++]].push_back(std::stod(cell));
        }
        if (col != names.size()) throw std::invalid_argument("read_csv: row has too few cells");
    }
    return table;
}

double table_rate(const Table& table, const std::string& column, int tail)
{
    const auto x = table.find("nE");
    const auto y = table.find(column);
    if (x == table.end()) throw std::invalid_argument("table has no nE column");
    if (y == table.end()) throw std::invalid_argument("table has no column named " + column);
    return fitted_rate(x->second, y->second, tail);
}

} // namespace fols
