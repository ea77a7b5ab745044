#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rsa::io {

enum class Quantity { density, correlation, gamma, p_pair, identity };
enum class Source { exact, mc, oracle };

/// One row of output. `std_error` is present exactly when source == mc.
struct OutputRecord {
  Quantity quantity = Quantity::density;
  std::optional<int> s;
  double t = 0.0;
  double value = 0.0;
  std::optional<double> std_error;
  Source source = Source::exact;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

std::string_view to_string(Quantity q);
std::string_view to_string(Source s);
Quantity parse_quantity(std::string_view text);
Source parse_source(std::string_view text);

// Throws std::invalid_argument if the std_error/source pairing is violated.
void validate(const OutputRecord& record);

inline constexpr std::string_view kCsvHeader = "quantity,s,t,value,stderr,source";

/// Header line plus one row per record; floats with 17 significant digits,
/// absent fields left empty.
std::string to_csv(std::span<const OutputRecord> records);
std::vector<OutputRecord> from_csv(std::string_view text);

/// JSON array of objects with the same field names as the CSV header;
/// absent fields are null.
std::string to_json(std::span<const OutputRecord> records);
std::vector<OutputRecord> from_json(std::string_view text);

}  // namespace rsa::io
