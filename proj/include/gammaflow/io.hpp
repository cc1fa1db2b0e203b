#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "gammaflow/grid.hpp"
#include "gammaflow/sbv.hpp"

namespace gammaflow {

/// Shortest decimal that round-trips; integral values keep a ".0".
std::string format_number(double x);

/// RFC 4180 writer: fields with comma, quote, CR or LF are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

std::string csv_escape(const std::string& field);

/// "x,value" rows with a header.
void write_signal_csv(std::ostream& out, const Signal& u);
Signal read_signal_csv(std::istream& in);

nlohmann::json to_json(const SbvSignal& u);
SbvSignal sbv_from_json(const nlohmann::json& j);

/// Writes text to path; throws std::runtime_error naming the path on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace gammaflow
