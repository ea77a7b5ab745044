#include "rsa/records.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rsa::io {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text) {
  // strtod handles "inf"/"nan" and the %.17g output alike.
  const std::string owned(text);
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size())
    throw std::invalid_argument("bad number: '" + owned + "'");
  return v;
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("bad integer: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::density: return "density";
    case Quantity::correlation: return "correlation";
    case Quantity::gamma: return "gamma";
    case Quantity::p_pair: return "p_pair";
    case Quantity::identity: return "identity";
  }
  return "?";
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::exact: return "exact";
    case Source::mc: return "mc";
    case Source::oracle: return "oracle";
  }
  return "?";
}

Quantity parse_quantity(std::string_view text) {
  for (auto q : {Quantity::density, Quantity::correlation, Quantity::gamma, Quantity::p_pair,
                 Quantity::identity})
    if (to_string(q) == text) return q;
  throw std::invalid_argument("unknown quantity '" + std::string(text) + "'");
}

Source parse_source(std::string_view text) {
  for (auto s : {Source::exact, Source::mc, Source::oracle})
    if (to_string(s) == text) return s;
  throw std::invalid_argument("unknown source '" + std::string(text) + "'");
}

void validate(const OutputRecord& r) {
  if (r.std_error.has_value() != (r.source == Source::mc))
    throw std::invalid_argument("stderr must be present exactly for Monte Carlo records");
}

std::string to_csv(std::span<const OutputRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    validate(r);
    out += to_string(r.quantity);
    out += ',';
    if (r.s) out += std::to_string(*r.s);
    out += ',';
    out += format_double(r.t);
    out += ',';
    out += format_double(r.value);
    out += ',';
    if (r.std_error) out += format_double(*r.std_error);
    out += ',';
    out += to_string(r.source);
    out += '\n';
  }
  return out;
}

std::vector<OutputRecord> from_csv(std::string_view text) {
  std::vector<OutputRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("missing or unexpected CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 6) throw std::invalid_argument("CSV row needs 6 fields: " + line);
    OutputRecord r;
    r.quantity = parse_quantity(cells[0]);
    if (!cells[1].empty()) r.s = parse_int(cells[1]);
    r.t = parse_double(cells[2]);
    r.value = parse_double(cells[3]);
    if (!cells[4].empty()) r.std_error = parse_double(cells[4]);
    r.source = parse_source(cells[5]);
    validate(r);
    out.push_back(r);
  }
  return out;
}

std::string to_json(std::span<const OutputRecord> records) {
  auto arr = nlohmann::json::array();
  for (const auto& r : records) {
    validate(r);
    nlohmann::json obj;
    obj["quantity"] = to_string(r.quantity);
    obj["s"] = r.s ? nlohmann::json(*r.s) : nlohmann::json(nullptr);
    obj["t"] = r.t;
    obj["value"] = r.value;
    obj["stderr"] = r.std_error ? nlohmann::json(*r.std_error) : nlohmann::json(nullptr);
    obj["source"] = to_string(r.source);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<OutputRecord> from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("expected a JSON array of records");
  std::vector<OutputRecord> out;
  for (const auto& obj : doc) {
    OutputRecord r;
    r.quantity = parse_quantity(obj.at("quantity").get<std::string>());
    if (!obj.at("s").is_null()) r.s = obj.at("s").get<int>();
    r.t = obj.at("t").get<double>();
    r.value = obj.at("value").get<double>();
    if (!obj.at("stderr").is_null()) r.std_error = obj.at("stderr").get<double>();
    r.source = parse_source(obj.at("source").get<std::string>());
    validate(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace rsa::io
