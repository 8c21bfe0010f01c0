#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mifade::csv {

inline constexpr int kCsvSchemaVersion = 1;

/// Shortest decimal text that parses back to the same double ("." separator).
std::string format_number(double value);

/// Tidy CSV: a "# mifade-csv v<version> <kind>" line, then the header row,
/// then data rows. Fields containing separators or quotes are quoted.
class Writer {
 public:
  Writer(std::ostream& out, std::string_view kind, std::vector<std::string> columns);

  Writer& field(std::string_view text);
  Writer& field(double value);
  Writer& field(std::int64_t value);
  Writer& field(std::uint64_t value);
  Writer& field(int value) { return field(static_cast<std::int64_t>(value)); }
  /// Ends the current row; throws DomainError if the field count is wrong.
  void end_row();

  std::size_t rows_written() const { return rows_; }

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::size_t rows_ = 0;
};

}  // namespace mifade::csv
