#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "spectemp/graph.hpp"
#include "util.hpp"

using namespace spectemp;
using testutil::frob_rel;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

Mat triangle_adjacency() {
  Mat a = Mat::Ones(3, 3) - Mat::Identity(3, 3);
  return a;
}

bool has_violation(const ValidationReport& report, const std::string& name) {
  for (const auto& v : report.constraints)
    if (v.name == name && v.magnitude > 1e-8) return true;
  return false;
}

}  // namespace

TEST_CASE("validate accepts a scaled triangle and rejects degenerate cases") {
  Gso tri{0.5 * triangle_adjacency(), GsoKind::adjacency};
  ConstraintSet cs{ConstraintVariant::adjacency, 0};
  CHECK(validate(tri, cs).pass);

  Gso zero{Mat::Zero(3, 3), GsoKind::adjacency};
  ValidationReport rz = validate(zero, cs);
  CHECK_FALSE(rz.pass);
  CHECK(has_violation(rz, "unit degree at scale node"));

  Mat bad = 0.5 * triangle_adjacency();
  bad(0, 0) = 0.5;
  ValidationReport rd = validate(Gso{bad, GsoKind::adjacency}, cs);
  CHECK_FALSE(rd.pass);
  CHECK(has_violation(rd, "zero diagonal"));
}

TEST_CASE("validate_kind checks the structural tag") {
  Gso tri{triangle_adjacency(), GsoKind::adjacency};
  CHECK(validate_kind(tri).pass);

  Mat neg = triangle_adjacency();
  neg(0, 1) = neg(1, 0) = -1.0;
  CHECK_FALSE(validate_kind(Gso{neg, GsoKind::adjacency}).pass);
}

TEST_CASE("normalized laplacian of a single edge") {
  Mat a(2, 2);
  a << 0, 1, 1, 0;
  Mat ln = normalized_laplacian(a);
  Mat expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(frob_rel(ln, expected) < 1e-14);
  CHECK_THROWS_AS(normalized_laplacian(Mat::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("shift from a single-edge normalized laplacian is the averaging map") {
  Mat ln(2, 2);
  ln << 1, -1, -1, 1;
  Gso s = shift_from_normalized_laplacian(ln);
  CHECK(s.matrix(0, 0) == doctest::Approx(0.5));
  CHECK(s.matrix(0, 1) == doctest::Approx(0.5));
  CHECK(s.matrix(1, 0) == doctest::Approx(0.5));
  CHECK(s.matrix(1, 1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(shift_from_normalized_laplacian(Mat::Zero(3, 3)), std::invalid_argument);
  Mat indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(shift_from_normalized_laplacian(indefinite), std::invalid_argument);
}

TEST_CASE("karate shift commutes with its laplacian and hits zero at the top mode") {
  Gso karate = load_edge_list("data/karate.edges");
  REQUIRE(karate.n() == 34);
  Mat ln = normalized_laplacian(karate.matrix);
  Gso s = shift_from_normalized_laplacian(ln);

  CHECK((s.matrix * ln - ln * s.matrix).norm() < 1e-8);

  SymEig es = eigh(s.matrix);
  SymEig el = eigh(ln);
  CHECK(std::abs(es.values(0)) < 1e-10);
  CHECK(es.values(33) <= 1.0 + 1e-12);
  Vec top = el.vectors.col(33);
  CHECK((s.matrix * top).norm() < 1e-8);
}

TEST_CASE("erdos renyi fixtures and determinism") {
  Gso edge = erdos_renyi(2, 1.0, 0);
  CHECK(edge.matrix(0, 1) == 1.0);
  CHECK(edge.matrix(0, 0) == 0.0);

  Gso complete = erdos_renyi(10, 1.0, 1);
  for (int i = 0; i < 10; ++i) CHECK(complete.matrix.row(i).sum() == doctest::Approx(9));

  Gso a = erdos_renyi(20, 0.3, 7), b = erdos_renyi(20, 0.3, 7);
  CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.matrix - a.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.matrix.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_connected(a.matrix));

  CHECK_THROWS_AS(erdos_renyi(5, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(erdos_renyi(30, 0.01, 0, 3), std::runtime_error);
}

TEST_CASE("connectivity check") {
  Mat path(3, 3);
  path << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(is_connected(path));
  Mat split = Mat::Zero(4, 4);
  split(0, 1) = split(1, 0) = 1.0;
  split(2, 3) = split(3, 2) = 1.0;
  CHECK_FALSE(is_connected(split));
}

TEST_CASE("edge list loading fixtures") {
  std::string p3 = write_temp("spectemp-p3.edges", "0 1\n1 2\n");
  Gso g = load_edge_list(p3);
  REQUIRE(g.n() == 3);
  CHECK(g.matrix(0, 1) == 1.0);
  CHECK(g.matrix(1, 2) == 1.0);
  CHECK(g.matrix(0, 2) == 0.0);

  Gso karate = load_edge_list("data/karate.edges");
  CHECK(karate.n() == 34);
  CHECK(karate.matrix.sum() == doctest::Approx(2 * 78));

  std::string oob = write_temp("spectemp-oob.edges", "0 5\n");
  CHECK_THROWS_AS(load_edge_list(oob, false, 3), std::runtime_error);

  std::string dup = write_temp("spectemp-dup.edges", "0 1\n1 0\n");
  CHECK_THROWS_AS(load_edge_list(dup), std::runtime_error);

  std::string junk = write_temp("spectemp-junk.edges", "0 x\n");
  CHECK_THROWS_AS(load_edge_list(junk), std::runtime_error);

  std::string one = write_temp("spectemp-one.edges", "1 2\n2 3\n");
  Gso g1 = load_edge_list(one, false, -1, true);
  CHECK(g1.n() == 3);
  CHECK(g1.matrix(0, 1) == 1.0);

  std::string w = write_temp("spectemp-w.edges", "0 1 0.25\n");
  Gso gw = load_edge_list(w, true);
  CHECK(gw.matrix(0, 1) == doctest::Approx(0.25));
}

TEST_CASE("edge list save round trip") {
  Gso g = erdos_renyi(9, 0.4, 33);
  auto path = std::filesystem::temp_directory_path() / "spectemp-roundtrip.edges";
  save_edge_list(path.string(), g);
  Gso back = load_edge_list(path.string(), false, g.n());
  CHECK((back.matrix - g.matrix).cwiseAbs().maxCoeff() < 1e-12);

  Gso scaled{0.5 * g.matrix, GsoKind::adjacency};
  save_edge_list(path.string(), scaled);
  Gso backw = load_edge_list(path.string(), true, g.n());
  CHECK((backw.matrix - scaled.matrix).cwiseAbs().maxCoeff() < 1e-12);
  std::filesystem::remove(path);
}

TEST_CASE("recovery error fixtures") {
  Mat s = triangle_adjacency();
  CHECK(recovery_error(s, s) == 0.0);
  CHECK(recovery_error(Mat::Zero(3, 3), s) == doctest::Approx(1));
  CHECK(recovery_error(2 * s, s) == doctest::Approx(1));
  CHECK_THROWS_AS(recovery_error(s, Mat::Zero(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(recovery_error(Mat::Zero(2, 2), s), std::invalid_argument);
}

TEST_CASE("scale normalization pins the anchor column degree") {
  Rng rng(23);
  Gso g = erdos_renyi(8, 0.5, 5);
  Mat n0 = normalize_scale(g.matrix, 0);
  CHECK(n0.col(0).sum() == doctest::Approx(1));
  Mat n3 = normalize_scale(g.matrix, 3);
  CHECK(n3.col(3).sum() == doctest::Approx(1));
  CHECK_THROWS_AS(normalize_scale(Mat::Zero(4, 4), 0), std::invalid_argument);
}
