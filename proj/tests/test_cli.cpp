#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "txlaw/cli.hpp"
#include "txlaw/config.hpp"
#include "txlaw/error.hpp"
#include "txlaw/io.hpp"

using namespace txlaw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("txlaw_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

std::string first_line(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "sigma.cfg";
  std::ofstream(p) << text;
  return p;
}

const std::string kFig2 = "s = [32/17, 2/17]\nl = [50, 50]\nN = 100\nM = 100\n";

int run(std::vector<std::string> args) { return run_cli(args); }

}  // namespace

TEST_CASE("config parsing") {
  const KeyValues kv = parse_key_values("# comment\ns = [32/17,\n  2/17]  # trailing\nl = [3, 3]\nN = 6\n");
  CHECK(kv.at("N") == "6");
  const std::vector<double> s = parse_list(kv.at("s"));
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(32.0 / 17.0));
  CHECK(parse_number("1/4") == 0.25);
  CHECK(parse_number("2.5e-1") == 0.25);

  const SigmaSpectrum spec = sigma_from_config(kv);
  CHECK(spec.N == 6);
  CHECK(spec.M == 6);
  CHECK(spec.l == std::vector<long>{3, 3});

  const SigmaSpectrum even = sigma_from_config(parse_key_values("s = [32/17, 2/17]\nN = 10\nM = 12\n"));
  CHECK(even.l == std::vector<long>{5, 5});

  const SigmaSpectrum fromd = sigma_from_config(parse_key_values("d = [1, 1, 1]\n"));
  CHECK(fromd.s == std::vector<double>{1.0});
  CHECK(fromd.K() == 3);

  CHECK_THROWS_AS(parse_key_values("s = 1\ns = 2\n"), InputError);
  CHECK_THROWS_AS(parse_key_values("s 1\n"), InputError);
  CHECK_THROWS_AS(parse_key_values("s = [1, 2\n"), InputError);
  CHECK_THROWS_AS(parse_number("1/0"), InputError);
  CHECK_THROWS_AS(parse_number("abc"), InputError);
  CHECK_THROWS_AS(sigma_from_config(parse_key_values("s = [1]\nd = [1]\n")), InputError);
  CHECK_THROWS_AS(sigma_from_config(parse_key_values("s = [1]\nq = 3\n")), InputError);
  CHECK_THROWS_AS(sigma_from_config(parse_key_values("s = [2]\nl = [4]\n")), InputError);
}

TEST_CASE("FNV-1a and number formatting") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("density and edges") {
  const fs::path dir = scratch("density");
  const fs::path cfg = write_config(dir, kFig2);
  const fs::path out = dir / "out";
  CHECK(run({"density", "--sigma", cfg.string(), "--z", "1.5", "--out", out.string()}) == kExitOk);
  CHECK(first_line(out / "density.csv") == "x,rho2c");
  CHECK(fs::exists(out / "bands.json"));
  const nlohmann::json m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m["command"] == "density");
  CHECK(m["version"] == kVersion);
  CHECK(m["inputs_hash"].get<std::string>().size() == 16);
  CHECK(m["settings"].contains("zband"));
  CHECK(m["settings"]["spectrum"]["N"] == 100);
  CHECK(m.contains("seed"));
  CHECK(m.contains("wall_seconds"));

  CHECK(run({"edges", "--sigma", cfg.string(), "--z", "1.5", "--out", out.string()}) == kExitOk);
  const nlohmann::json e = nlohmann::json::parse(slurp(out / "edges.json"));
  CHECK(e["bands"].size() >= 1);
  CHECK(e["edges"].size() >= 2);
}

TEST_CASE("quantiles and chi") {
  const fs::path dir = scratch("quantiles");
  const fs::path cfg = write_config(dir, kFig2);
  const fs::path out = dir / "out";
  CHECK(run({"quantiles", "--sigma", cfg.string(), "--z", "1.5", "--N", "100", "--out", out.string()}) == kExitOk);
  CHECK(first_line(out / "quantiles.csv") == "j,gamma_j");
  CHECK(run({"chi", "--sigma", cfg.string(), "--rmin", "1.9", "--rmax", "2.0", "--out", out.string()}) == kExitOk);
  CHECK(first_line(out / "radial.csv") == "r,U,chi,F");
}

TEST_CASE("simulate is reproducible") {
  const fs::path dir = scratch("simulate");
  const fs::path cfg = write_config(dir, kFig2);
  const std::vector<std::string> base = {"simulate", "--sigma", cfg.string(), "--z", "1.5", "--N", "20",
                                         "--M", "20", "--runs", "3", "--seed", "9", "--dist", "rademacher"};
  auto with_out = [&](const fs::path& o, const std::string& threads) {
    std::vector<std::string> a = base;
    a.insert(a.end(), {"--out", o.string(), "--threads", threads});
    return a;
  };
  CHECK(run(with_out(dir / "a", "1")) == kExitOk);
  CHECK(run(with_out(dir / "b", "2")) == kExitOk);
  CHECK(first_line(dir / "a" / "eigenvalues.csv") == "run,j,re,im");
  CHECK(first_line(dir / "a" / "singular.csv") == "run,j,lambda");
  for (const char* f : {"eigenvalues.csv", "singular.csv"}) CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  const nlohmann::json ma = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  const nlohmann::json mb = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  CHECK(ma["inputs_hash"] == mb["inputs_hash"]);
  CHECK(ma["seed"] == 9);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  const fs::path cfg = write_config(dir, kFig2);
  const std::string out = (dir / "out").string();
  CHECK(run({"density", "--sigma", cfg.string(), "--z", "1.02", "--out", out}) == kExitDomain);
  CHECK(run({"density", "--sigma", cfg.string(), "--z", "1.5", "--bogus", "1"}) == kExitUsage);
  CHECK(run({"density", "--z", "1.5", "--out", out}) == kExitUsage);
  CHECK(run({"density", "--sigma", (dir / "missing.cfg").string(), "--z", "1.5", "--out", out}) == kExitUsage);
  CHECK(run({"simulate", "--sigma", cfg.string(), "--dist", "cauchy"}) == kExitUsage);
  CHECK(run({}) == kExitUsage);
  CHECK(run({"--help"}) == kExitOk);
  const fs::path bad = dir / "bad.cfg";
  std::ofstream(bad) << "s = [2]\nl = [4]\n";
  CHECK(run({"density", "--sigma", bad.string(), "--z", "1.5", "--out", out}) == kExitUsage);
}
