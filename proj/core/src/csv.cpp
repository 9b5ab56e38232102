#include "rsa/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rsa {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

// Splits one logical CSV record; `line` may be extended from `in` when a
// quoted field spans newlines.
std::vector<std::string> split_record(std::string line, std::istream& in,
                                      int row_for_errors) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  std::size_t i = 0;
  while (true) {
    if (i >= line.size()) {
      if (in_quotes) {
        std::string more;
        if (!std::getline(in, more)) {
          throw invalid_input("row " + std::to_string(row_for_errors) +
                              ": unterminated quoted field");
        }
        line += "\n" + more;
        continue;
      }
      break;
    }
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // trailing CR of a CRLF line
    } else {
      field += c;
    }
    ++i;
  }
  fields.push_back(field);
  return fields;
}

double parse_double_strict(const std::string& s, int row, const std::string& col) {
  if (s.empty()) {
    throw invalid_input("row " + std::to_string(row) + ", column " + col +
                        ": empty numeric field");
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw invalid_input("row " + std::to_string(row) + ", column " + col +
                        ": cannot parse '" + s + "' as a number");
  }
  return v;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    std::vector<std::string> fields = split_record(line, in, row);
    if (row == 1) {
      table.header = std::move(fields);
      if (table.header.empty() || (table.header.size() == 1 && table.header[0].empty())) {
        throw invalid_input("header row is empty");
      }
      continue;
    }
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != table.header.size()) {
      throw invalid_input("row " + std::to_string(row) + ": expected " +
                          std::to_string(table.header.size()) + " columns, got " +
                          std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw invalid_input("'" + path + "' has no header row");
  return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& comment_lines) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write '" + path + "'");
  for (const std::string& c : comment_lines) out << "# " << c << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ",";
    out << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ",";
      out << row[i];
    }
    out << "\n";
  }
}

NumericFrame parse_numeric_frame(const CsvTable& table, const std::string& y_col,
                                 const std::string& date_col) {
  const int y_idx = table.column_index(y_col);
  if (y_idx < 0) throw invalid_input("missing response column '" + y_col + "'");
  int date_idx = -1;
  if (!date_col.empty()) {
    date_idx = table.column_index(date_col);
    if (date_idx < 0) throw invalid_input("missing date column '" + date_col + "'");
  }

  NumericFrame frame;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (static_cast<int>(j) == y_idx || static_cast<int>(j) == date_idx) continue;
    frame.covariate_names.push_back(table.header[j]);
  }
  const Eigen::Index N = static_cast<Eigen::Index>(table.rows.size());
  const Eigen::Index K = static_cast<Eigen::Index>(frame.covariate_names.size());
  if (N < 1) throw invalid_input("no data rows");
  if (K < 1) throw invalid_input("no covariate columns");

  Eigen::MatrixXd X(N, K);
  Eigen::VectorXd y(N);
  for (Eigen::Index r = 0; r < N; ++r) {
    const auto& row = table.rows[static_cast<std::size_t>(r)];
    const int file_row = static_cast<int>(r) + 2;  // 1-based, after header
    y(r) = parse_double_strict(row[static_cast<std::size_t>(y_idx)], file_row, y_col);
    Eigen::Index c = 0;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (static_cast<int>(j) == y_idx || static_cast<int>(j) == date_idx) continue;
      X(r, c++) = parse_double_strict(row[j], file_row, table.header[j]);
    }
    if (date_idx >= 0) frame.dates.push_back(row[static_cast<std::size_t>(date_idx)]);
  }
  frame.data = make_dataset(std::move(X), std::move(y));
  return frame;
}

}  // namespace rsa
