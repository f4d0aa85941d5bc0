#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "channelq/cli.hpp"
#include "channelq/io.hpp"
#include "channelq/oracle.hpp"
#include "support/reference.hpp"

using namespace channelq;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "channelq");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_temp(const std::string& name, const Channel& ch) {
  const auto path = std::filesystem::temp_directory_path() / ("channelq_test_cli_" + name);
  write_channel_file(path, ch);
  return path.string();
}

std::string write_temp_text(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("channelq_test_cli_" + name);
  write_text_file(path, text);
  return path.string();
}

json without_time(json j) {
  j.erase("wall_time_ms");
  return j;
}

}  // namespace

TEST_CASE("info on the reference channel") {
  const Run r = run({"info", "--in", write_temp("example.json", ref::example_channel())});
  REQUIRE(r.code == kExitOk);
  const json j = r.report();
  CHECK(j["subcommand"] == "info");
  CHECK(j["result"]["input_size"] == 2);
  CHECK(j["result"]["output_size"] == 4);
  CHECK(j["result"]["cyclo_symmetry"]["symmetric"] == true);
  CHECK(j["input_digest"].is_string());
  CHECK(j.contains("tool_version"));
  CHECK(j.contains("wall_time_ms"));
}

TEST_CASE("info on a noiseless channel reports one bit") {
  const Run r = run({"info", "--in", write_temp("noiseless.json", ref::bsc(0.0))});
  REQUIRE(r.code == kExitOk);
  const json j = r.report();
  CHECK(j["result"]["mutual_information_bits"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["result"]["mutual_information_nats"].get<double>() == doctest::Approx(0.6931471805599453));
}

TEST_CASE("malformed row exits 2 naming the row") {
  const std::string path = write_temp_text(
      "bad_row.json", R"({"input_dist": [0.5, 0.5], "transition": [[0.5, 0.5], [0.5, null]]})");
  const Run r = run({"info", "--in", path});
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("transition row 1") != std::string::npos);
  CHECK(run({"info", "--in", "/nonexistent/channel.json"}).code == kExitInvalid);
  CHECK(run({"degrade", "--in", path}).code == kExitInvalid);
  CHECK(run({"no-such-command"}).code == kExitInvalid);
}

TEST_CASE("greedy degrade of the reference channel to two letters") {
  const Run r = run({"degrade", "--in", write_temp("example.json", ref::example_channel()), "--L", "2",
                     "--algo", "greedy"});
  REQUIRE(r.code == kExitOk);
  const json j = r.report();
  CHECK(std::abs(j["result"]["delta_i"].get<double>() - 0.16) <= 0.005);
  CHECK(j["result"]["step_log"].size() == 2);
  CHECK(j["parameters"]["L"] == 2);
}

TEST_CASE("optimal degrade and cyclo degrade") {
  const std::string path = write_temp("example.json", ref::example_channel());
  const Run opt = run({"degrade", "--in", path, "--L", "2", "--algo", "optimal-binary"});
  REQUIRE(opt.code == kExitOk);
  CHECK(opt.report()["result"]["delta_i"].get<double>() < 0.16);
  CHECK(run({"degrade", "--in", path, "--L", "2", "--algo", "cyclo"}).code == kExitOk);
  CHECK(run({"degrade", "--in", path, "--L", "3", "--algo", "cyclo"}).code == kExitInvalid);
}

TEST_CASE("upgrade with a large L changes nothing") {
  const Channel w = random_channel({.output_size = 10, .seed = 7});
  const Run r = run({"upgrade", "--in", write_temp("ten.json", w), "--L", "99", "--algo", "optimal"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.report()["result"]["delta_i"].get<double>() == 0.0);
}

TEST_CASE("bounds subcommand") {
  const Run r = run({"bounds", "--X", "2", "--L", "100", "--Y", "1000"});
  REQUIRE(r.code == kExitOk);
  const json j = r.report();
  CHECK(j["input_digest"].is_null());
  CHECK(j["result"]["nu"].get<double>() == doctest::Approx(1267.069374152493593138));
}

TEST_CASE("oracle checks agree") {
  const Run up = run({"oracle-check", "--mode", "upgrade", "--seeds", "100", "--max-y", "12"});
  CHECK(up.code == kExitOk);
  const Run down = run({"oracle-check", "--mode", "degrade", "--seeds", "40", "--max-y", "8"});
  CHECK(down.code == kExitOk);
}

TEST_CASE("polar subcommand") {
  const Run r = run({"polar", "--in", write_temp("bsc.json", ref::bsc(0.11)), "--depth", "3", "--L", "16"});
  REQUIRE(r.code == kExitOk);
  const json j = r.report();
  CHECK(j["result"]["entries"].size() == 8);
  CHECK(j["result"]["sum_lower_i"].get<double>() <= j["result"]["sum_upper_i"].get<double>() + 1e-9);
}

TEST_CASE("reports are reproducible") {
  const std::string path = write_temp("example.json", ref::example_channel());
  const std::vector<std::vector<std::string>> cases = {
      {"info", "--in", path},
      {"degrade", "--in", path, "--L", "3", "--algo", "greedy"},
      {"upgrade", "--in", path, "--L", "3", "--algo", "greedy"},
      {"bounds", "--X", "3", "--L", "100"},
      {"oracle-check", "--mode", "upgrade", "--seeds", "5", "--max-y", "8"},
      {"polar", "--in", path, "--depth", "2", "--L", "8"},
  };
  for (const auto& args : cases) {
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == kExitOk);
    CHECK(without_time(a.report()) == without_time(b.report()));
  }
}

TEST_CASE("report file and bits summary") {
  const auto out = std::filesystem::temp_directory_path() / "channelq_test_cli_report.json";
  std::filesystem::remove(out);
  const Run r = run({"--bits", "degrade", "--in", write_temp("example.json", ref::example_channel()), "--L",
                     "2", "--algo", "greedy", "--report", out.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  CHECK(r.err.find("bits") != std::string::npos);
  const json j = json::parse(read_text_file(out));
  CHECK(j["subcommand"] == "degrade");
}
