#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ecplab/io.hpp"

using namespace ecplab;
using namespace ecplab::io;

namespace {
std::filesystem::path tmp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ecplab_io_test_" + name);
}
}  // namespace

TEST_CASE("fnv1a is stable") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") != fnv1a("b"));
  CHECK(fnv1a("config") == fnv1a("config"));
}

TEST_CASE("manifest hash depends on the config only") {
  const nlohmann::json cfg = {{"h", 0.05}, {"kind", "omega"}};
  const auto m1 = make_manifest(cfg);
  const auto m2 = make_manifest(cfg);
  CHECK(m1.at("hash") == m2.at("hash"));
  CHECK(m1.at("config") == cfg);
  const auto m3 = make_manifest({{"h", 0.06}, {"kind", "omega"}});
  CHECK(m1.at("hash") != m3.at("hash"));
}

TEST_CASE("json round trip") {
  const auto p = tmp("round.json");
  const nlohmann::json j = {{"a", 1}, {"b", {1.5, 2.5}}};
  write_json(p, j);
  CHECK(read_json(p) == j);
  std::filesystem::remove(p);
  CHECK_THROWS_AS(read_json(p), Error);

  const auto bad = tmp("bad.json");
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(read_json(bad), Error);
  std::filesystem::remove(bad);
}

TEST_CASE("vector file round trip") {
  const auto p = tmp("vecs.bin");
  Eigen::MatrixXd m(3, 2);
  m << 1.0, 4.0, 2.0, 5.0, 3.0, 6.5;
  write_vectors(p, m);
  const Eigen::MatrixXd back = read_vectors(p);
  CHECK(back.rows() == 3);
  CHECK(back.cols() == 2);
  CHECK((back - m).norm() == 0.0);
  std::filesystem::remove(p);
  std::filesystem::remove(p.string() + ".json");
}

TEST_CASE("csv output") {
  const auto p = tmp("table.csv");
  const std::vector<std::string> header{"x", "y"};
  const std::vector<std::vector<double>> rows{{1.0, 2.0}, {3.0, 4.0}};
  write_csv(p, header, rows, "manifest=0xdead");
  std::ifstream is(p);
  std::string line;
  std::getline(is, line);
  CHECK(line == "# manifest=0xdead");
  std::getline(is, line);
  CHECK(line == "x,y");
  int data_lines = 0;
  while (std::getline(is, line)) ++data_lines;
  CHECK(data_lines == 2);
  std::filesystem::remove(p);
}

TEST_CASE("svg output contains the polylines") {
  const auto p = tmp("art.svg");
  const std::vector<SvgCurve> curves{{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, "crimson", 0.01}};
  write_svg(p, curves);
  std::ifstream is(p);
  std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK(all.find("<svg") != std::string::npos);
  CHECK(all.find("polyline") != std::string::npos);
  CHECK(all.find("crimson") != std::string::npos);
  std::filesystem::remove(p);
}

TEST_CASE("object validation") {
  const nlohmann::json j = {{"h", 0.1}, {"name", "x"}, {"flags", {1, 2}}};
  const FieldSpec fields[] = {{"h", FieldType::number, true},
                              {"name", FieldType::string, true},
                              {"flags", FieldType::array, false},
                              {"missing_ok", FieldType::number, false}};
  CHECK_NOTHROW(validate_object(j, fields, "test"));

  const FieldSpec wrong[] = {{"h", FieldType::string, true}};
  CHECK_THROWS_AS(validate_object(j, wrong, "test"), Error);

  const FieldSpec required[] = {{"nope", FieldType::number, true}};
  CHECK_THROWS_AS(validate_object(j, required, "test"), Error);

  CHECK_THROWS_AS(validate_object(nlohmann::json::array(), fields, "test"), Error);
}
