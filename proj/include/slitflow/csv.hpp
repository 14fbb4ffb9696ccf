#pragma once

#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace slitflow {

/// 17 significant digits, '.' decimal, no locale.
std::string format_number(double x);

/// Writes one CSV row at a time. Optional cells left empty print as blanks.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream &out) : out_(&out) {}

  void header(std::initializer_list<std::string_view> names);
  CsvWriter &cell(double x);
  CsvWriter &cell(std::optional<double> x);
  CsvWriter &cell(long long x);
  CsvWriter &cell(std::string_view text);
  CsvWriter &blank();
  void end_row();

 private:
  void sep();
  std::ostream *out_;
  bool row_started_ = false;
};

}  // namespace slitflow
