#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rsa/linalg.hpp"

namespace rsa {

// Double formatted with 17 significant digits; round-trips exactly.
std::string fmt17(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
};

// RFC-4180-style reader: header row required, quoted fields with ""
// escapes, every row must match the header width. Errors carry row and
// column positions.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& comment_lines = {});

// Numeric view of a CSV table: the named response column becomes y, an
// optional date column is carried through as strings, every other column is
// a covariate (strictly parsed as a decimal number).
struct NumericFrame {
  Dataset data;
  std::vector<std::string> covariate_names;
  std::vector<std::string> dates;  // empty when no date column was named
};

NumericFrame parse_numeric_frame(const CsvTable& table, const std::string& y_col,
                                 const std::string& date_col = "");

}  // namespace rsa
