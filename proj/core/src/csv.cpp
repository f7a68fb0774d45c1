#include "sideband/csv.hpp"

#include <cstdio>

#include "sideband/errors.hpp"

namespace sideband::csv {

Writer::Writer(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
  if (!out_) throw Error("csv: cannot open " + path + " for writing");
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

std::string Writer::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Writer::row(const std::vector<double>& values) {
  if (values.size() != n_cols_) throw Error("csv: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format(values[i]);
  out_ << '\n';
}

void Writer::row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw Error("csv: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

void Writer::metadata(const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) out_ << "# " << k << '=' << v << '\n';
  out_.flush();
}

}  // namespace sideband::csv
