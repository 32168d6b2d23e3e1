#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "pssv/io.hpp"
#include "pssv/synth.hpp"

using pssv::Index;
using pssv::Matrix;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("matrix CSV round-trip is exact") {
  pssv::PrngStream stream(8, 0);
  Matrix X(7, 5);
  for (Index j = 0; j < 5; ++j) {
    for (Index i = 0; i < 7; ++i) {
      X(i, j) = 1e3 * stream.uniform_signed() * std::pow(10.0, -3.0 * stream.uniform());
    }
  }
  X(0, 0) = 0.0;
  X(1, 1) = -1.0 / 3.0;

  const auto path = temp_file("pssv_roundtrip.csv");
  pssv::write_matrix_csv(X, path.string());
  const Matrix Y = pssv::read_matrix_csv(path.string());
  REQUIRE(Y.rows() == X.rows());
  REQUIRE(Y.cols() == X.cols());
  CHECK((X - Y).norm() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("matrix CSV errors name the offending line") {
  const auto path = temp_file("pssv_bad.csv");
  {
    std::ofstream out(path);
    out << "1,2,3\n1,2\n";
  }
  try {
    pssv::read_matrix_csv(path.string());
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  {
    std::ofstream out(path);
    out << "1,2\n1,oops\n";
  }
  try {
    pssv::read_matrix_csv(path.string());
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
  }
  std::filesystem::remove(path);

  CHECK_THROWS_AS(pssv::read_matrix_csv("/nonexistent/file.csv"), std::runtime_error);
}

TEST_CASE("PGM round-trip is exact for integer images, both raster kinds") {
  pssv::PrngStream stream(9, 0);
  Matrix img(12, 9);
  for (Index j = 0; j < 9; ++j) {
    for (Index i = 0; i < 12; ++i) {
      img(i, j) = static_cast<double>(stream.bounded(256));
    }
  }

  for (const bool binary : {true, false}) {
    const auto path = temp_file(binary ? "pssv_p5.pgm" : "pssv_p2.pgm");
    pssv::write_pgm(img, path.string(), binary);
    const Matrix back = pssv::read_pgm(path.string());
    REQUIRE(back.rows() == img.rows());
    REQUIRE(back.cols() == img.cols());
    CHECK((back - img).norm() == 0.0);
    std::filesystem::remove(path);
  }
}

TEST_CASE("PGM writing clamps and rounds") {
  Matrix img(1, 4);
  img << -5.0, 12.49, 12.51, 400.0;
  const auto path = temp_file("pssv_clamp.pgm");
  pssv::write_pgm(img, path.string());
  const Matrix back = pssv::read_pgm(path.string());
  CHECK(back(0, 0) == 0.0);
  CHECK(back(0, 1) == 12.0);
  CHECK(back(0, 2) == 13.0);
  CHECK(back(0, 3) == 255.0);
  std::filesystem::remove(path);
}

TEST_CASE("PGM reader accepts comments and rejects junk") {
  const auto path = temp_file("pssv_comment.pgm");
  {
    std::ofstream out(path);
    out << "P2\n# a comment\n2 2\n255\n0 128\n# another\n255 7\n";
  }
  const Matrix img = pssv::read_pgm(path.string());
  CHECK(img(0, 1) == 128.0);
  CHECK(img(1, 1) == 7.0);
  std::filesystem::remove(path);

  const auto bad = temp_file("pssv_notpgm.pgm");
  {
    std::ofstream out(bad);
    out << "P9\n2 2\n255\n";
  }
  CHECK_THROWS_AS(pssv::read_pgm(bad.string()), std::runtime_error);
  std::filesystem::remove(bad);
}

TEST_CASE("pgm extension detection") {
  CHECK(pssv::has_pgm_extension("image.pgm"));
  CHECK(pssv::has_pgm_extension("IMAGE.PGM"));
  CHECK_FALSE(pssv::has_pgm_extension("matrix.csv"));
  CHECK_FALSE(pssv::has_pgm_extension("pgm"));
}
