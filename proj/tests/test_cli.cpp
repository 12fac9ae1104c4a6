#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fingap/fingap.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = FINGAP_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fingap_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const int rc = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  json j;
  in >> j;
  return j;
}

std::string circle_json() {
  return fingap::potential_to_json(
      fingap::Potential::constant(2 * fingap::kPi, std::sqrt(2.0)));
}

std::string vacuum_json() {
  return fingap::potential_to_json(fingap::Potential::constant(2 * fingap::kPi, 0.0));
}

}  // namespace

TEST_CASE("analyze subcommand") {
  TempDir tmp;

  SECTION("circle: closure passes, small z tail") {
    write(tmp.file("circle.json"), circle_json());
    const std::string out = tmp.file("report.json");
    REQUIRE(run("analyze " + tmp.file("circle.json") + " --k-max 3 --out " + out) == 0);
    const json rep = read_json(out);
    CHECK(rep["closure"]["semisimple"].get<bool>());
    CHECK(std::abs(rep["closure"]["delta"][0].get<double>() + 2.0) < 1e-8);
    for (const auto& zk : rep["z_k"]) {
      const double mag = std::hypot(zk[1].get<double>(), zk[2].get<double>());
      if (zk[0].get<int>() != 0) CHECK(mag < 1e-7);
    }
    CHECK(rep["order_reports"][0]["n"].get<int>() == 2);
    CHECK(rep["order_reports"][0]["j0"].get<int>() == 1);
  }

  SECTION("vacuum: closure failure still exits 0") {
    write(tmp.file("vac.json"), vacuum_json());
    const std::string out = tmp.file("vrep.json");
    REQUIRE(run("analyze " + tmp.file("vac.json") + " --k-max 2 --out " + out) == 0);
    const json rep = read_json(out);
    CHECK_FALSE(rep["closure"]["semisimple"].get<bool>());
  }

  SECTION("corrupt JSON exits 1") {
    write(tmp.file("bad.json"), "{\"T\": 6.28, \"modes\": [[0, 1.4");
    CHECK(run("analyze " + tmp.file("bad.json")) == 1);
  }
}

TEST_CASE("reconstruct subcommand") {
  TempDir tmp;
  write(tmp.file("circle.json"), circle_json());

  SECTION("256-row CSV in both charts") {
    const std::string out = tmp.file("curve.csv");
    REQUIRE(run("reconstruct " + tmp.file("circle.json") + " --samples 256 --out " + out) == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x0,x1,x2,x3,b1,b2,b3");
    int rows = 0;
    while (std::getline(in, line))
      if (!line.empty()) ++rows;
    CHECK(rows == 256);
  }

  SECTION("ball chart stays inside the unit ball") {
    const std::string out = tmp.file("ball.csv");
    REQUIRE(run("reconstruct " + tmp.file("circle.json") + " --samples 64 --ball --out " + out) == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,b1,b2,b3");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string cell;
      std::vector<double> v;
      while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
      REQUIRE(v.size() == 4);
      CHECK(v[1] * v[1] + v[2] * v[2] + v[3] * v[3] < 1.0);
    }
  }

  SECTION("too few samples exits 1") {
    CHECK(run("reconstruct " + tmp.file("circle.json") + " --samples 4") == 1);
  }
}

TEST_CASE("dress subcommand") {
  TempDir tmp;
  write(tmp.file("vac.json"), vacuum_json());

  SECTION("soliton: non-eigenline warns, c = -2 sech t in provenance") {
    const std::string out = tmp.file("dressed.json");
    REQUIRE(run("dress " + tmp.file("vac.json") +
                " --lambda-star 0,1 --line 1,1 --out " + out) == 0);
    const json j = read_json(out);
    REQUIRE(j.contains("warning"));
    for (const auto& row : j["provenance"]["c_samples"]) {
      const double t = row[0].get<double>();
      const double cre = row[1].get<double>();
      const double cim = row[2].get<double>();
      CHECK(std::abs(cre - (-2.0 / std::cosh(t))) < 1e-8);
      CHECK(std::abs(cim) < 1e-10);
    }
  }

  SECTION("vacuum eigenline leaves the potential unchanged") {
    const std::string out = tmp.file("same.json");
    REQUIRE(run("dress " + tmp.file("vac.json") +
                " --lambda-star 0,1 --line 1,0 --out " + out) == 0);
    const json j = read_json(out);
    CHECK_FALSE(j.contains("warning"));
    const fingap::Potential q = fingap::potential_from_json(j.dump());
    CHECK(fingap::l2_norm(q) < 1e-10);
  }

  SECTION("real pole exits 1") {
    CHECK(run("dress " + tmp.file("vac.json") + " --lambda-star 0.5,0 --line 1,0") == 1);
  }
}

TEST_CASE("close subcommand") {
  TempDir tmp;

  SECTION("non-closed input exits 2") {
    write(tmp.file("vac.json"), vacuum_json());
    CHECK(run("close " + tmp.file("vac.json") + " --n 2") == 2);
  }

  SECTION("circle: truncation is a no-op, provenance recorded") {
    write(tmp.file("circle.json"), circle_json());
    const std::string out = tmp.file("closed.json");
    REQUIRE(run("close " + tmp.file("circle.json") + " --n 2 --out " + out) == 0);
    const json j = read_json(out);
    CHECK(j["provenance"]["closure_residual"].get<double>() <= 1e-7);
    CHECK(j["provenance"]["l2_distance_to_input"].get<double>() <= 1e-6);
  }
}

TEST_CASE("determinism: identical bytes across runs") {
  TempDir tmp;
  write(tmp.file("circle.json"), circle_json());
  const std::string o1 = tmp.file("r1.json"), o2 = tmp.file("r2.json");
  REQUIRE(run("analyze " + tmp.file("circle.json") + " --k-max 2 --out " + o1) == 0);
  REQUIRE(run("analyze " + tmp.file("circle.json") + " --k-max 2 --threads 4 --out " + o2) == 0);
  CHECK(fingap::read_file(o1) == fingap::read_file(o2));
}
