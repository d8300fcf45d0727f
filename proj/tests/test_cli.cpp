#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "minsurf/balance.hpp"
#include "minsurf/config_io.hpp"

using namespace minsurf;
namespace fs = std::filesystem;

namespace {

const std::string kExe = MINSURF_EXE;
const std::string kData = MINSURF_DATA_DIR;

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("minsurf_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = kExe + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST_CASE("roots writes the Legendre configuration") {
  const fs::path f1 = scratch() / "r1.json";
  Run r = run("roots --n 1 --out " + f1.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("max|F_k|") != std::string::npos);
  const Configuration c1 = read_config(f1.string());
  CHECK(c1.necksizes == std::vector<double>{1.0, -1.0});
  CHECK(std::abs(c1.points[0] + 1.0) < 1e-15);
  CHECK(c1.points[1] == cplx{1.0});

  const fs::path f2 = scratch() / "r2.json";
  CHECK(run("roots --n 2 --out " + f2.string()).code == 0);
  const Configuration c2 = read_config(f2.string());
  CHECK(root_set_distance({c2.points[0], c2.points[1]}, {-2.0 - std::sqrt(3.0), -2.0 + std::sqrt(3.0)}) < 1e-14);
}

TEST_CASE("roots rejects n out of range with exit 2") {
  CHECK(run("roots --n 26").code == 2);
  CHECK(run("roots --n 0").code == 2);
  CHECK(run("roots").code == 2);
}

TEST_CASE("verify: three-end example passes, perturbed fails, piped roots pass") {
  Run r = run("verify " + kData + "/asymmetric_three_ends.json");
  CHECK(r.code == 0);
  CHECK(number_after(r.out, "max |F_k|") <= 1e-12);

  Configuration bad = read_config(kData + "/asymmetric_three_ends.json");
  bad.points[0] *= 1.01;
  const fs::path fb = scratch() / "bad.json";
  write_config(fb.string(), bad);
  r = run("verify " + fb.string());
  CHECK(r.code == 1);
  CHECK(number_after(r.out, "max |F_k|") > 1e-6);
  CHECK(r.out.find("FAIL") != std::string::npos);

  const std::string cmd = kExe + " roots --n 5 2>/dev/null | " + kExe + " verify - > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);

  CHECK(run("verify /nonexistent.json").code == 2);
  const fs::path junk = scratch() / "junk.json";
  std::ofstream(junk) << "{ not json";
  CHECK(run("verify " + junk.string()).code == 2);
}

TEST_CASE("verify --csv schema") {
  const fs::path csv = scratch() / "report.csv";
  CHECK(run("verify " + kData + "/asymmetric_three_ends.json --csv " + csv.string()).code == 0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,re_p,im_p,alpha,abs_F,period_x1,period_x2,period_x3");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(rows == 4);
  CHECK(last.rfind("summary,", 0) == 0);
}

TEST_CASE("solve: perturbed f_3 roots return to roots --n 3") {
  const fs::path ref = scratch() / "r3.json";
  REQUIRE(run("roots --n 3 --out " + ref.string()).code == 0);
  Configuration c = read_config(ref.string());
  for (std::size_t k = 0; k < 3; ++k) c.points[k] *= 1.0 + 0.05 * (k % 2 ? -1.0 : 1.0);
  const fs::path init = scratch() / "p3.json";
  write_config(init.string(), c);
  const fs::path out = scratch() / "s3.json";
  const Run r = run("solve " + init.string() + " --fixed 3 --out " + out.string());
  CHECK(r.code == 0);
  CHECK(root_set_distance(read_config(out.string()).points, read_config(ref.string()).points) <= 1e-8);
}

TEST_CASE("solve: balanced input takes at most one iteration") {
  const fs::path ref = scratch() / "r4.json";
  REQUIRE(run("roots --n 4 --out " + ref.string()).code == 0);
  const Run r = run("solve " + ref.string() + " --fixed 4 --out " + (scratch() / "s4.json").string());
  CHECK(r.code == 0);
  CHECK(number_after(r.out, "iterations") <= 1.0);
}

TEST_CASE("solve: asymmetric necksizes from the symmetric start") {
  Configuration c = legendre_config(2);
  c.necksizes = {0.25, 0.75, -1.0};
  const fs::path init = scratch() / "sym.json";
  write_config(init.string(), c);
  const fs::path out = scratch() / "asym.json";
  CHECK(run("solve " + init.string() + " --fixed 2 --out " + out.string()).code == 0);
  CHECK(root_set_distance(read_config(out.string()).points,
                          read_config(kData + "/asymmetric_three_ends.json").points) <= 1e-8);
}

TEST_CASE("solve: non-convergence exits 4 and writes the best iterate") {
  Configuration c = legendre_config(4);
  for (std::size_t k = 0; k < 4; ++k) c.points[k] *= cplx{1.5, 0.4};
  const fs::path init = scratch() / "far.json";
  write_config(init.string(), c);
  const fs::path out = scratch() / "far_out.json";
  fs::remove(out.string() + ".partial");
  CHECK(run("solve " + init.string() + " --fixed 4 --max-iter 1 --out " + out.string()).code == 4);
  CHECK(fs::exists(out.string() + ".partial"));
  CHECK(read_config(out.string() + ".partial").size() == 5);
  CHECK(run("solve " + init.string() + " --out " + out.string()).code == 2);  // --fixed is required
}

TEST_CASE("mesh: Legendre n = 2 with defaults") {
  const fs::path cfg = scratch() / "m2.json";
  REQUIRE(run("roots --n 2 --out " + cfg.string()).code == 0);
  const fs::path obj = scratch() / "m2.obj";
  const Run r = run("mesh " + cfg.string() + " --out " + obj.string());
  CHECK(r.code == 0);
  CHECK(number_after(r.out, "|seam - (0,+-pi,0)|") <= 1e-6);
  const std::string first = slurp(obj);
  CHECK(first.rfind("v ", 0) == 0);

  // byte-identical on rerun
  const fs::path obj2 = scratch() / "m2b.obj";
  CHECK(run("mesh " + cfg.string() + " --out " + obj2.string()).code == 0);
  CHECK(slurp(obj2) == first);
}

TEST_CASE("mesh: unbalanced input needs --force") {
  Configuration c = legendre_config(2);
  c.points[0] *= 1.1;
  const fs::path cfg = scratch() / "unbal.json";
  write_config(cfg.string(), c);
  const fs::path obj = scratch() / "unbal.obj";
  CHECK(run("mesh " + cfg.string() + " --out " + obj.string()).code == 1);
  CHECK(run("mesh " + cfg.string() + " --out " + obj.string() + " --force --nr 16 --ntheta 32").code == 0);
}

TEST_CASE("mesh: asymmetric example and custom grid flags") {
  const fs::path obj = scratch() / "asym.obj";
  const Run r = run("mesh " + kData + "/asymmetric_three_ends.json --out " + obj.string() +
                    " --rmin 0.05 --rmax 40 --nr 30 --ntheta 60 --cut 0.03");
  CHECK(r.code == 0);
  CHECK(number_after(r.out, "|seam - (0,+-pi,0)|") <= 1e-6);
  CHECK(number_after(r.out, "puncture loop defect") <= 1e-6);
}

TEST_CASE("deterministic JSON output") {
  const fs::path a = scratch() / "d1.json", b = scratch() / "d2.json";
  REQUIRE(run("roots --n 7 --out " + a.string()).code == 0);
  REQUIRE(run("roots --n 7 --out " + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
}
