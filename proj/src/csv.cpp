#include "slitflow/csv.hpp"

#include <array>
#include <charconv>

namespace slitflow {

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  for (auto n : names) cell(n);
  end_row();
}

void CsvWriter::sep() {
  if (row_started_) *out_ << ',';
  row_started_ = true;
}

CsvWriter &CsvWriter::cell(double x) {
  sep();
  *out_ << format_number(x);
  return *this;
}

CsvWriter &CsvWriter::cell(std::optional<double> x) {
  if (x) return cell(*x);
  return blank();
}

CsvWriter &CsvWriter::cell(long long x) {
  sep();
  *out_ << x;
  return *this;
}

CsvWriter &CsvWriter::cell(std::string_view text) {
  sep();
  *out_ << text;
  return *this;
}

CsvWriter &CsvWriter::blank() {
  sep();
  return *this;
}

void CsvWriter::end_row() {
  *out_ << '\n';
  row_started_ = false;
}

}  // namespace slitflow
