#include "cylcert/config_io.hpp"

#include <doctest.h>

using namespace cylcert;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("round trip is byte identical") {
  for (const auto& cfg : {build_O6(), build_C6(), build_O6_alternative()}) {
    const std::string text = serialize_config(cfg);
    const LineConfiguration back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.labels() == cfg.labels());
    CHECK(back.parallel_pairs() == cfg.parallel_pairs());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      CHECK(back[i].touch_point() == cfg[i].touch_point());
      CHECK(back[i].direction() == cfg[i].direction());
    }
  }
}

TEST_CASE("negative zero is written as zero") {
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(0.1) == "0.10000000000000001");
  const LineConfiguration cfg({{Vec3d(-0.0, 1, 0), Vec3d(0, -0.0, 1)}}, {"a"});
  CHECK(serialize_config(cfg).find("-0,") == std::string::npos);
}

TEST_CASE("empty configuration") {
  const std::string text = serialize_config(LineConfiguration());
  CHECK(parse_config(text).size() == 0);
  CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("errors carry a location") {
  CHECK(error_of("{\n  \"schema_version\": \"1\",\n  \"lines\": [\n") .find("line 4") != std::string::npos);
  CHECK(error_of("[]").find("top level") != std::string::npos);
  CHECK(error_of(R"({"schema_version": "2", "lines": []})").find("schema_version") == 0);
  CHECK(error_of(R"({"lines": []})").find("schema_version") != std::string::npos);
  CHECK(error_of(R"({"schema_version": "1", "lines": [{"label": "a", "point": [1, 0], "direction": [0, 0, 1]}]})")
            .find("lines[0].point") == 0);
  CHECK(error_of(R"({"schema_version": "1", "lines": [{"label": "a", "point": [1, 0, 0], "direction": [0, "x", 1]}]})")
            .find("lines[0].direction[1]") == 0);
  CHECK(error_of(R"({"schema_version": "1", "lines": [{"label": "a", "point": [2, 0, 0], "direction": [0, 0, 1]}]})")
            .find("lines[0]") == 0);
  CHECK(error_of(R"({"schema_version": "1", "lines": [{"label": "a", "point": [1, 0, 0], "direction": [0, 0, 1]}],
                     "parallel_pairs": [["a", "b"]]})")
            .find("unknown label 'b'") != std::string::npos);
  CHECK(error_of(R"({"schema_version": "1", "lines": [{"point": [1, 0, 0], "direction": [0, 0, 1]}]})")
            .find("missing field 'label'") != std::string::npos);
}

TEST_CASE("digest") {
  CHECK(digest("") == "cbf29ce484222325");
  CHECK(digest("a") == "af63dc4c8601ec8c");
  CHECK(digest(serialize_config(build_O6())) != digest(serialize_config(build_C6())));
}

TEST_CASE("file io") {
  const std::string path = "config_io_test.json";
  write_config(build_C6(), path);
  CHECK(serialize_config(read_config(path)) == serialize_config(build_C6()));
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_config("does/not/exist.json"), ConfigError);
}

}
