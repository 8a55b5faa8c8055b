#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gsense::app {

/// Rendering with 12 significant digits, independent
/// of the C locale. Infinities print as "inf" / "-inf", NaN as "nan".
std::string format_number(double v);
std::string format_number(long long v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

  /// Throws std::logic_error if the width differs from the header.
  void add_row(std::vector<std::string> cells);

  /// One "# " provenance line, the header, then the rows.
  void write(std::ostream& out, const std::string& provenance) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace gsense::app
