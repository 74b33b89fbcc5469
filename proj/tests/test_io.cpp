#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "wavemaps/io.hpp"

using namespace wavemaps;

namespace {
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/wavemaps_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

GridField make_field() {
  NullGrid g;
  g.u0 = g.v0 = -1.0;
  g.h = 0.25;
  g.nu = 9;
  g.nv = 7;
  GridField phi(g, 2);
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      phi.at(i, j)[0] = 0.5 * i - 1.25 * j;
      phi.at(i, j)[1] = i * j + 0.125;
    }
  return phi;
}
} // namespace

TEST_CASE("grid field save/load: bit-exact payload and metadata round trip") {
  TempFile tf("field.bin");
  GridField phi = make_field();
  save_grid_field(phi, tf.path, "sphere_extrinsic(2)", "leapfrog");
  std::string target, scheme;
  GridField back = load_grid_field(tf.path, &target, &scheme);
  CHECK(target == "sphere_extrinsic(2)");
  CHECK(scheme == "leapfrog");
  CHECK(back.grid.u0 == phi.grid.u0);
  CHECK(back.grid.h == phi.grid.h);
  CHECK(back.grid.nu == phi.grid.nu);
  CHECK(back.grid.nv == phi.grid.nv);
  CHECK(back.dim == phi.dim);
  REQUIRE(back.data.size() == phi.data.size());
  for (size_t k = 0; k < phi.data.size(); ++k) CHECK(back.data[k] == phi.data[k]);
}

TEST_CASE("grid field load: errors on missing file and corrupt header") {
  CHECK_THROWS_AS(load_grid_field("/tmp/does_not_exist_wavemaps.bin"), std::runtime_error);
  TempFile tf("corrupt.bin");
  {
    std::ofstream out(tf.path);
    out << "not a json header\n1234";
  }
  CHECK_THROWS_AS(load_grid_field(tf.path), std::runtime_error);
  TempFile tr("truncated.bin");
  {
    GridField phi = make_field();
    save_grid_field(phi, tr.path);
    std::ifstream in(tr.path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string all = ss.str();
    std::ofstream out(tr.path, std::ios::binary);
    out.write(all.data(), (std::streamsize)(all.size() - 16)); // drop tail bytes
  }
  CHECK_THROWS_AS(load_grid_field(tr.path), std::runtime_error);
}

TEST_CASE("time slice CSV has header and one row per slice node") {
  TempFile tf("slices.csv");
  GridField phi = make_field();
  export_time_slices_csv(phi, {0}, tf.path);
  std::ifstream in(tf.path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line.find("x") != std::string::npos);
  CHECK(line.find("t") != std::string::npos);
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 7); // diagonal d=0 has min(nu, nv) nodes
}

TEST_CASE("estimate report JSON carries the verification verdict") {
  EstimateReport rep;
  rep.estimate_id = "easy-mult";
  rep.ensemble = "test";
  rep.cutoffs = {16, 32};
  rep.samples_per_cutoff = 5;
  rep.max_ratio = {1.5, 1.4};
  rep.median_ratio = {0.7, 0.6};
  rep.p90_ratio = {1.1, 1.0};
  rep.cutoff_scaling_slope = -0.02;
  rep.slope_residual = 0.003;
  rep.verified = true;
  std::string js = estimate_report_json(rep);
  CHECK(js.find("\"estimate_id\"") != std::string::npos);
  CHECK(js.find("easy-mult") != std::string::npos);
  CHECK(js.find("\"verified\"") != std::string::npos);
  CHECK(js.find("true") != std::string::npos);
  TempFile tf("report.json");
  save_estimate_report(rep, tf.path);
  std::ifstream in(tf.path);
  CHECK(in.good());
}

TEST_CASE("profile CSV: header line plus one row per coordinate") {
  TempFile tf("profile.csv");
  std::vector<double> x = {0.0, 0.5, 1.0};
  std::vector<double> v = {1, 2, 3, 4, 5, 6}; // dim 2
  save_profile_csv(x, v, 2, tf.path, "lambda");
  std::ifstream in(tf.path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line.rfind("#", 0) == 0); // JSON header comment line
  CHECK(line.find("lambda") != std::string::npos);
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3); // one data row per coordinate
}
