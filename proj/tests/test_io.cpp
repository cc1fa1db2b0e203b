#include <sstream>

#include "doctest.h"

#include "gammaflow/error.hpp"
#include "gammaflow/io.hpp"

using namespace gammaflow;

TEST_SUITE("io") {

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1.0");
  CHECK(format_number(-2.0) == "-2.0");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(0.15625) == "0.15625");
  CHECK(std::stod(format_number(3.2659863237109037)) == 3.2659863237109037);
  CHECK(std::stod(format_number(1e-12)) == 1e-12);
}

TEST_CASE("csv quoting") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  std::ostringstream ss;
  CsvWriter w(ss);
  w.row({"x", "y,z"});
  CHECK(ss.str() == "x,\"y,z\"\r\n");
}

TEST_CASE("signal round trip") {
  const Signal u = Signal::sample(Grid1D::unit(11), [](double x) { return x * x - 0.3; });
  std::stringstream ss;
  write_signal_csv(ss, u);
  const Signal v = read_signal_csv(ss);
  REQUIRE(v.size() == 11);
  CHECK(v.values == u.values);
  CHECK(v.grid.h() == doctest::Approx(0.1));
}

TEST_CASE("sbv json round trip") {
  const SbvSignal u = staircase_signal({{0.3, 1.0, 0.1}, {0.7, -4.0, 0.05}}, 0.5);
  const SbvSignal v = sbv_from_json(to_json(u));
  CHECK(to_json(v) == to_json(u));
  CHECK(v.value(0.8) == 0.5 + 1.0 - 4.0);
  CHECK_THROWS_AS(sbv_from_json(nlohmann::json::parse(R"({"jumps": []})")), DomainError);
}

TEST_CASE("file errors name the path") {
  CHECK_THROWS_WITH(read_text_file("/no/such/file.json"), doctest::Contains("/no/such/file.json"));
  CHECK_THROWS_WITH(write_text_file("/no/such/dir/x.csv", "x"), doctest::Contains("/no/such/dir/x.csv"));
}

}
