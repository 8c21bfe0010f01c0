#include "mifade/csv.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mifade/error.hpp"

namespace mifade::csv {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

Writer::Writer(std::ostream& out, std::string_view kind, std::vector<std::string> columns)
    : out_(out), columns_(columns.size()) {
  out_ << "# mifade-csv v" << kCsvSchemaVersion << ' ' << kind << '\n';
  for (const auto& c : columns) field(c);
  end_row();
  rows_ = 0;
}

void Writer::separator() {
  if (in_row_ > 0) out_ << ',';
  ++in_row_;
}

Writer& Writer::field(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    out_ << text;
  } else {
    out_ << '"';
    for (char c : text) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  return *this;
}

Writer& Writer::field(double value) { return field(std::string_view(format_number(value))); }

Writer& Writer::field(std::int64_t value) {
  separator();
  out_ << value;
  return *this;
}

Writer& Writer::field(std::uint64_t value) {
  separator();
  out_ << value;
  return *this;
}

void Writer::end_row() {
  if (in_row_ != columns_) {
    throw DomainError(fmt::format("CSV row has {} fields, header has {}", in_row_, columns_));
  }
  out_ << '\n';
  in_row_ = 0;
  ++rows_;
}

}  // namespace mifade::csv
