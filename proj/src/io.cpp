#include "gammaflow/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gammaflow/error.hpp"

namespace gammaflow {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  std::string s(buf.data(), res.ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << csv_escape(fields[i]);
  }
  out_ << "\r\n";
}

void write_signal_csv(std::ostream& out, const Signal& u) {
  CsvWriter w(out);
  w.row({"x", "value"});
  for (std::size_t i = 0; i < u.size(); ++i) w.row({format_number(u.grid.x(i)), format_number(u.values[i])});
}

Signal read_signal_csv(std::istream& in) {
  std::string line;
  std::vector<double> xs, vs;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("signal CSV row without a comma: " + line);
    xs.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 2) throw DomainError("signal CSV needs at least two rows");
  const Grid1D g{xs.size(), xs.front(), xs.back() - xs.front()};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(g.x(i) - xs[i]) > 1e-9 * std::max(1.0, std::abs(g.length))) {
      throw DomainError("signal CSV nodes are not uniformly spaced");
    }
  }
  return Signal(g, std::move(vs));
}

nlohmann::json to_json(const SbvSignal& u) {
  nlohmann::json ac = nlohmann::json::array();
  for (const auto& s : u.segments()) ac.push_back({{"x0", s.x0}, {"x1", s.x1}, {"coeffs", s.coeffs}});
  nlohmann::json jumps = nlohmann::json::array();
  for (const auto& j : u.jumps()) jumps.push_back({{"t", j.t}, {"z", j.z}, {"eta", j.eta}});
  return {{"ac", ac}, {"jumps", jumps}};
}

SbvSignal sbv_from_json(const nlohmann::json& j) {
  try {
    std::vector<PolySegment> segs;
    for (const auto& s : j.at("ac")) {
      segs.push_back(PolySegment{s.at("x0").get<double>(), s.at("x1").get<double>(),
                                 s.at("coeffs").get<std::vector<double>>()});
    }
    std::vector<Jump> jumps;
    if (j.contains("jumps")) {
      for (const auto& x : j.at("jumps")) {
        jumps.push_back(Jump{x.at("t").get<double>(), x.at("z").get<double>(), x.value("eta", 0.0)});
      }
    }
    return SbvSignal(std::move(segs), std::move(jumps));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed signal JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gammaflow
