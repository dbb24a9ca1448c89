#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "lsmat/cloud.hpp"
#include "lsmat/rng.hpp"
#include "lsmat/shapes.hpp"

using namespace lsmat;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

/// Brute-force radius query with the same comparison the index must match.
std::vector<int> scan_within(const Cloud2& cloud, const Vec2& x, double radius) {
  std::vector<int> out;
  for (int i = 0; i < cloud.size(); ++i)
    if ((cloud.point(i) - x).squaredNorm() <= radius * radius) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("load_cloud parses records, renormalizes, computes bbox") {
  const std::string path = temp_path("lsmat_two_points.txt");
  write_file(path, "# comment\n0 0 1 0\n\n1 0 -1 0\n");
  const Cloud2 cloud = load_cloud<2>(path);
  CHECK(cloud.size() == 2);
  CHECK(cloud.diag() == doctest::Approx(1.0));
  CHECK(cloud.normal(0).x() == doctest::Approx(1.0));
  CHECK(cloud.normal(1).x() == doctest::Approx(-1.0));
}

TEST_CASE("load_cloud rejects malformed input with line numbers") {
  const std::string path = temp_path("lsmat_bad.txt");

  SUBCASE("zero-length normal") {
    write_file(path, "0 0 1 0\n1 0 0 0\n2 0 1 0\n");
    CHECK_THROWS_WITH_AS(load_cloud<2>(path),
                         doctest::Contains("zero-length normal"), ParseError);
  }
  SUBCASE("wrong field count") {
    write_file(path, "0 0 1 0\n1 0 1\n");
    CHECK_THROWS_AS(load_cloud<2>(path), ParseError);
  }
  SUBCASE("trailing fields") {
    write_file(path, "0 0 1 0 9\n");
    CHECK_THROWS_AS(load_cloud<2>(path), ParseError);
  }
  SUBCASE("too few records") {
    write_file(path, "0 0 1 0\n");
    CHECK_THROWS_AS(load_cloud<2>(path), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_cloud<2>(temp_path("lsmat_nope.txt")), ParseError);
  }
}

TEST_CASE("unit circle bbox diagonal matches brute force") {
  const Cloud2 cloud = to_cloud(make_circle(512));
  Vec2 lo = cloud.point(0), hi = cloud.point(0);
  for (int i = 0; i < cloud.size(); ++i) {
    lo = lo.cwiseMin(cloud.point(i));
    hi = hi.cwiseMax(cloud.point(i));
  }
  CHECK(cloud.diag() == doctest::Approx((hi - lo).norm()).epsilon(1e-15));
  // A full circle sampling spans its diameter on both axes.
  CHECK(cloud.diag() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("save/load round-trips bit-identically") {
  Cloud2 cloud = to_cloud(make_star(128));
  NoiseSpec spec;
  spec.sigma_p = 1.3;
  spec.seed = 11;
  cloud = perturb(cloud, spec);
  const std::string path = temp_path("lsmat_roundtrip.txt");
  save_cloud(cloud, path);
  const Cloud2 copy = load_cloud<2>(path);
  REQUIRE(copy.size() == cloud.size());
  CHECK(copy.checksum() == cloud.checksum());
}

TEST_CASE("perturb with zero noise is the identity") {
  const Cloud2 cloud = to_cloud(make_circle(64));
  NoiseSpec spec;
  spec.sigma_p = 0.0;
  spec.outlier_fraction = 0.0;
  const Cloud2 out = perturb(cloud, spec);
  CHECK(out.checksum() == cloud.checksum());
}

TEST_CASE("perturb is a pure function of (cloud, spec)") {
  const Cloud2 cloud = to_cloud(make_ellipse(256));
  NoiseSpec spec;
  spec.sigma_p = 2.0;
  spec.outlier_fraction = 0.1;
  spec.seed = 7;
  const Cloud2 a = perturb(cloud, spec);
  const Cloud2 b = perturb(cloud, spec);
  CHECK(a.checksum() == b.checksum());
  spec.seed = 8;
  const Cloud2 c = perturb(cloud, spec);
  CHECK(a.checksum() != c.checksum());
}

TEST_CASE("along-normal noise has the requested standard deviation") {
  // Segment along x so the normal direction is +y everywhere.
  const int n = 10000;
  std::vector<Vec2> pts, nrm;
  for (int i = 0; i < n; ++i) {
    pts.push_back(Vec2(static_cast<double>(i) / (n - 1), 0.0));
    nrm.push_back(Vec2(0.0, 1.0));
  }
  const Cloud2 cloud(pts, nrm);
  REQUIRE(cloud.diag() == doctest::Approx(1.0));

  NoiseSpec spec;
  spec.sigma_p = 1.0;
  spec.mode = NoiseSpec::Mode::kAlongNormal;
  spec.seed = 3;
  const Cloud2 noisy = perturb(cloud, spec);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = (noisy.point(i) - cloud.point(i)).dot(cloud.normal(i));
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sum_sq / n - mean * mean);
  const double target = 0.01 * cloud.diag();
  CHECK(stddev == doctest::Approx(target).epsilon(0.05));
}

TEST_CASE("outlier replacement count and support") {
  const Cloud2 cloud = to_cloud(make_circle(500));
  NoiseSpec spec;
  spec.sigma_p = 0.0;
  spec.outlier_fraction = 0.1;
  spec.seed = 5;
  const Cloud2 out = perturb(cloud, spec);
  int moved = 0;
  for (int i = 0; i < cloud.size(); ++i) {
    if ((out.point(i) - cloud.point(i)).norm() > 0.0) {
      ++moved;
      for (int k = 0; k < 2; ++k) {
        CHECK(out.point(i)[k] >= cloud.bbox_min()[k]);
        CHECK(out.point(i)[k] <= cloud.bbox_max()[k]);
      }
      CHECK(out.normal(i).norm() == doctest::Approx(1.0));
    }
  }
  CHECK(moved == 50);
}

TEST_CASE("neighbors_within equals the linear scan on 1000 random queries") {
  Cloud2 cloud = to_cloud(make_star(700));
  NoiseSpec spec;
  spec.sigma_p = 3.0;
  spec.seed = 2;
  cloud = perturb(cloud, spec);
  Rng rng(99);
  for (int q = 0; q < 1000; ++q) {
    Vec2 x(rng.uniform(cloud.bbox_min().x(), cloud.bbox_max().x()),
           rng.uniform(cloud.bbox_min().y(), cloud.bbox_max().y()));
    const double radius = rng.uniform(0.0, 0.3 * cloud.diag());
    const auto got = cloud.neighbors_within(x, radius);
    const auto want = scan_within(cloud, x, radius);
    REQUIRE(got == want);
  }
}

TEST_CASE("neighbors_within edge radii") {
  std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 0}, {0, 1}};
  std::vector<Vec2> nrm = {{1, 0}, {1, 0}, {1, 0}, {0, 1}};
  const Cloud2 cloud(pts, nrm);

  SUBCASE("radius 0 at an exact location returns that index and duplicates") {
    const auto idx = cloud.neighbors_within(Vec2(1, 0), 0.0);
    CHECK(idx == std::vector<int>{1, 2});
  }
  SUBCASE("radius >= diag*sqrt(d) returns everything") {
    const auto idx = cloud.neighbors_within(Vec2(0.3, 0.4), cloud.diag() * std::sqrt(2.0));
    CHECK(static_cast<int>(idx.size()) == cloud.size());
  }
}

TEST_CASE("3d cloud basics") {
  const Cloud3 cloud = to_cloud(make_sphere3(256));
  CHECK(cloud.size() == 256);
  CHECK(cloud.diag() == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(0.05));
  // Radius query against a scan.
  Rng rng(4);
  for (int q = 0; q < 100; ++q) {
    Vec3 x(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double radius = rng.uniform(0.0, 1.0);
    std::vector<int> want;
    for (int i = 0; i < cloud.size(); ++i)
      if ((cloud.point(i) - x).squaredNorm() <= radius * radius) want.push_back(i);
    CHECK(cloud.neighbors_within(x, radius) == want);
  }
}
