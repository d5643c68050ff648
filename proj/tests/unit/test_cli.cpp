#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spreadlab/cli/app.hpp"

namespace fs = std::filesystem;
using spreadlab::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("spreadlab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Drops '#' lines.
std::string data_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() != '#') out += line + '\n';
  }
  return out;
}

std::string data_path(const char* name) { return std::string(SPREADLAB_TEST_DATA) + "/" + name; }

std::vector<std::string> small_sim(const std::string& out) {
  return {"simulate", "--steps", "3000", "--warmup", "100", "--out", out};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
  CHECK(cli({}).code == spreadlab::cli::kUsage);
  CHECK(cli({"frobnicate"}).code == spreadlab::cli::kUsage);
  CHECK(cli({"simulate", "--no-such-flag"}).code == spreadlab::cli::kUsage);
  CHECK(cli({"simulate", "--mechanism", "zigzag"}).code == spreadlab::cli::kUsage);
  CHECK(cli({"--help"}).code == spreadlab::cli::kOk);
}

TEST_CASE("invalid parameters are config errors") {
  TempDir d;
  const auto r = cli({"simulate", "--pi", "1.5", "--out", d.path.string()});
  CHECK(r.code == spreadlab::cli::kUsage);
  CHECK(r.err.find("ConfigError") != std::string::npos);
  CHECK(cli({"simulate", "--mechanism", "nonuniform", "--alpha", "1", "--out", d.path.string()}).code ==
        spreadlab::cli::kUsage);
}

TEST_CASE("simulate writes deterministic output") {
  TempDir a, b;
  REQUIRE(cli(small_sim(a.path.string())).code == 0);
  REQUIRE(cli(small_sim(b.path.string())).code == 0);
  CHECK(data_rows(slurp(a / "trajectory.csv")) == data_rows(slurp(b / "trajectory.csv")));
  CHECK(data_rows(slurp(a / "summary.csv")) == data_rows(slurp(b / "summary.csv")));
  const auto traj = slurp(a / "trajectory.csv");
  CHECK(traj.find("# effective configuration:") != std::string::npos);
  CHECK(traj.find("seed=1") != std::string::npos);

  TempDir c;
  auto args = small_sim(c.path.string());
  args.insert(args.begin(), {"--seed", "2"});
  REQUIRE(cli(args).code == 0);
  CHECK(data_rows(slurp(a / "trajectory.csv")) != data_rows(slurp(c / "trajectory.csv")));
}

TEST_CASE("replicas do not depend on the thread count") {
  TempDir a, b;
  auto args = small_sim(a.path.string());
  args.insert(args.end(), {"--replicas", "3", "--quote-tape", "0.01"});
  REQUIRE(cli(args).code == 0);
  args = small_sim(b.path.string());
  args.insert(args.end(), {"--replicas", "3", "--quote-tape", "0.01"});
  args.insert(args.begin(), {"--threads", "3"});
  REQUIRE(cli(args).code == 0);
  for (const char* f : {"trajectory_0.csv", "trajectory_2.csv", "quotes_1.csv", "summary.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(data_rows(slurp(a / f)) == data_rows(slurp(b / f)));
  }
}

TEST_CASE("divergence exit code") {
  TempDir d;
  auto args = small_sim(d.path.string());
  args.insert(args.end(), {"--divergence-ceiling", "3"});
  const auto r = cli(args);
  CHECK(r.code == spreadlab::cli::kDiverged);
  CHECK(r.err.find("Divergence") != std::string::npos);
}

TEST_CASE("config file precedence") {
  TempDir d;
  {
    std::ofstream ini(d / "run.ini");
    ini << "[simulate]\npi=0.25\nsteps=2000\nwarmup=100\n";
  }
  const auto r = cli({"--config", d / "run.ini", "simulate", "--pi", "0.3", "--out", d / "o"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("pi=0.3\n") != std::string::npos);
  CHECK(r.out.find("steps=2000\n") != std::string::npos);
  CHECK(r.out.find("k=1.7\n") != std::string::npos);
  CHECK(r.out.find("[parity-sweep]") == std::string::npos);
  const auto header = slurp(d / "o/trajectory.csv");
  CHECK(header.find("# pi=0.3\n") != std::string::npos);

  const auto missing = cli({"--config", d / "nope.ini", "simulate"});
  CHECK(missing.code == spreadlab::cli::kIoError);
}

TEST_CASE("parity sweep rows") {
  TempDir d;
  const auto r = cli({"parity-sweep", "--samples", "20000", "--out", d.path.string()});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(slurp(d / "parity_sweep.csv"));
  std::istringstream in(rows);
  std::string line;
  std::getline(in, line);
  CHECK(line == "mean_spread,mechanism,alpha,odd_fraction,n_transitions");
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 12);
  CHECK(cli({"parity-sweep", "--means", "1", "--samples", "1000", "--out", d.path.string()}).code ==
        spreadlab::cli::kUsage);
}

TEST_CASE("analyze all writes six files") {
  TempDir d;
  auto args = small_sim(d / "sim");
  args[2] = "20000";
  REQUIRE(cli(args).code == 0);
  const auto r = cli({"analyze", "--input", d / "sim/trajectory.csv", "--all", "--acf-max-lag", "50",
                      "--out", d / "an"});
  REQUIRE(r.code == 0);
  for (const char* f : {"odd_fraction.csv", "conditional_parity.csv", "delta_s.csv", "alpha.csv", "acf.csv",
                        "relaxation.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(d / (std::string("an/") + f)));
  }
  CHECK_FALSE(fs::exists(d / "an/spread_pdf.csv"));
  CHECK(slurp(d / "an/acf.csv").find("# estimator=") != std::string::npos);
}

TEST_CASE("analyze on ingested events without mids") {
  TempDir d;
  REQUIRE(cli({"ingest", "--input", data_path("tape_small.csv"), "--out", d.path.string()}).code == 0);
  const auto r = cli({"analyze", "--input", d / "events.csv", "--all", "--out", d / "an"});
  REQUIRE(r.code == 0);
  CHECK(slurp(d / "an/acf.csv").find("skipped") != std::string::npos);
  CHECK(cli({"analyze", "--input", d / "events.csv", "--acf", "--out", d / "an2"}).code != 0);
  const auto relax = cli({"analyze", "--input", d / "events.csv", "--relax-delta", "7", "--out", d / "an3"});
  CHECK(relax.code == spreadlab::cli::kFailure);
  CHECK(relax.err.find("NoConditioningEvents") != std::string::npos);
}

TEST_CASE("analyze input errors") {
  TempDir d;
  CHECK(cli({"analyze", "--input", d / "missing.csv", "--all", "--out", d.path.string()}).code ==
        spreadlab::cli::kIoError);
  CHECK(cli({"analyze", "--all", "--out", d.path.string()}).code == spreadlab::cli::kUsage);
}

TEST_CASE("ingest golden output") {
  TempDir a, b;
  REQUIRE(cli({"ingest", "--input", data_path("tape_small.csv"), "--out", a.path.string()}).code == 0);
  REQUIRE(cli({"ingest", "--input", data_path("tape_small.csv"), "--out", a.path.string()}).code == 0);
  REQUIRE(cli({"ingest", "--input", data_path("tape_small.csv"), "--out", b.path.string()}).code == 0);
  const auto events = slurp(a / "events.csv");
  CHECK(data_rows(events) == slurp(data_path("tape_small_events.csv")));
  CHECK(events.find("# caveat=") != std::string::npos);
  CHECK(data_rows(events) == data_rows(slurp(b / "events.csv")));
}

TEST_CASE("ingest failures name the line") {
  TempDir d;
  const auto off = cli({"ingest", "--input", data_path("tape_offgrid.csv"), "--out", d.path.string()});
  CHECK(off.code == spreadlab::cli::kParseError);
  CHECK(off.err.find("OffGridPrice") != std::string::npos);
  CHECK(off.err.find("line 3") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "events.csv"));

  const auto order = cli({"ingest", "--input", data_path("tape_unordered.csv"), "--out", d.path.string()});
  CHECK(order.code == spreadlab::cli::kParseError);
  CHECK(order.err.find("OrderingError") != std::string::npos);

  const auto lenient = cli({"ingest", "--input", data_path("tape_malformed.csv"), "--lenient", "--out",
                            d.path.string()});
  CHECK(lenient.code == 0);
  CHECK(lenient.err.find("warning") != std::string::npos);
  CHECK(slurp(d / "events.csv").find("# rows_rejected=3") != std::string::npos);
  CHECK(cli({"ingest", "--input", data_path("tape_small.csv"), "--tick-size", "0", "--out", d.path.string()})
            .code == spreadlab::cli::kUsage);
}

TEST_CASE("decimal tick parsing") {
  const auto t = spreadlab::cli::parse_decimal_tick("0.01");
  CHECK(t.numerator == 1);
  CHECK(t.decimals == 2);
  const auto u = spreadlab::cli::parse_decimal_tick("0.25");
  CHECK(u.numerator == 25);
  CHECK(spreadlab::cli::parse_decimal_tick("1").decimals == 0);
  CHECK_THROWS(spreadlab::cli::parse_decimal_tick("1e-2"));
  CHECK_THROWS(spreadlab::cli::parse_decimal_tick("0.00"));
}

}  // TEST_SUITE
