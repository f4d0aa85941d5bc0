#include "channelq/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "channelq/bounds.hpp"
#include "channelq/degrade.hpp"
#include "channelq/error.hpp"
#include "channelq/functionals.hpp"
#include "channelq/io.hpp"
#include "channelq/oracle.hpp"
#include "channelq/polar.hpp"
#include "channelq/upgrade.hpp"

namespace channelq {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Loaded {
  Channel channel;
  std::string digest;
};

Loaded load(const std::string& path) {
  const std::string text = read_text_file(path);
  return {parse_channel(text).channel, fnv1a_hex(text)};
}

class OracleMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  bool bits = false;
  std::string in;
  std::string report;
  std::size_t target_l = 0;
  std::string algo;
  bool fast_path = true;
  std::size_t input_size = 2;
  std::optional<std::size_t> alphabet_size;
  std::size_t seeds = 100;
  std::size_t max_y = 10;
  std::string mode = "degrade";
  std::string dump = "oracle_failure.json";
  std::size_t depth = 0;
  std::string degrader = "greedy";
  std::string upgrader = "greedy";
};

double to_bits(double nats) { return nats / std::numbers::ln2; }

class Runner {
 public:
  Runner(const Options& o, std::ostream& err) : o_(o), err_(err) {}

  json info(json& params, std::string& digest) {
    params = {{"in", o_.in}};
    const Loaded l = load(o_.in);
    digest = l.digest;
    const Channel& ch = l.channel;
    const double mi = mutual_information(ch);
    const std::vector<std::size_t> dup = duplicate_letter_map(ch, kValidationTol);
    const std::size_t groups = dup.empty() ? 0 : *std::max_element(dup.begin(), dup.end()) + 1;
    json cyclo = {{"symmetric", false}};
    try {
      const CycloPartition p = detect_cyclo_symmetry(ch);
      cyclo = {{"symmetric", true}, {"groups", p.groups}};
    } catch (const Error& e) {
      cyclo["reason"] = std::string(to_string(e.code()));
    }
    summary("|X| = " + std::to_string(ch.input_size()) + ", |Y| = " + std::to_string(ch.output_size()) +
            ", I(W) = " + value(mi));
    return {{"input_size", ch.input_size()},
            {"output_size", ch.output_size()},
            {"mutual_information_nats", mi},
            {"mutual_information_bits", to_bits(mi)},
            {"duplicate_letters", ch.output_size() - groups},
            {"cyclo_symmetry", cyclo}};
  }

  json degrade(json& params, std::string& digest) {
    params = {{"in", o_.in}, {"L", o_.target_l}, {"algo", o_.algo}, {"fast_path", o_.fast_path}};
    const Loaded l = load(o_.in);
    digest = l.digest;
    DegradeResult r;
    if (o_.algo == "greedy") {
      r = greedy_merge(l.channel, o_.target_l, {.binary_adjacent_fast_path = o_.fast_path});
    } else if (o_.algo == "optimal-binary") {
      r = optimal_degrade_binary(l.channel, o_.target_l);
    } else {
      r = greedy_merge_cyclo(l.channel, o_.target_l);
    }
    summary("degraded " + std::to_string(l.channel.output_size()) + " -> " +
            std::to_string(r.channel.output_size()) + " letters, delta I = " + value(r.delta_i));
    json j = to_json(r);
    j["input_mi"] = mutual_information(l.channel);
    j["output_mi"] = mutual_information(r.channel);
    return j;
  }

  json upgrade(json& params, std::string& digest) {
    params = {{"in", o_.in}, {"L", o_.target_l}, {"algo", o_.algo}};
    const Loaded l = load(o_.in);
    digest = l.digest;
    UpgradeResult r;
    if (o_.algo == "optimal") {
      r = optimal_upgrade_binary(l.channel, o_.target_l);
    } else if (o_.algo == "greedy") {
      r = greedy_split(l.channel, o_.target_l);
    } else {
      r = greedy_split_symmetric(l.channel, o_.target_l);
    }
    const double lower = upgrade_lower_bound(l.channel, r.channel);
    summary("upgraded " + std::to_string(l.channel.output_size()) + " -> " +
            std::to_string(r.channel.output_size()) + " letters, delta I = " + value(r.delta_i));
    json j = to_json(r);
    j["input_mi"] = mutual_information(l.channel);
    j["output_mi"] = mutual_information(r.channel);
    j["lower_bound"] = lower;
    j["lower_bound_ok"] = lower <= r.delta_i + 1e-10;
    j["verified"] = verify_upgraded(l.channel, r, 1e-9);
    return j;
  }

  json bounds(json& params) {
    params = {{"X", o_.input_size}, {"L", o_.target_l}};
    params["Y"] = o_.alphabet_size ? json(*o_.alphabet_size) : json(nullptr);
    const BoundReport b = bound_report(o_.input_size, o_.target_l, o_.alphabet_size);
    summary("nu = " + std::to_string(b.nu) + ", degrade envelope = " + value(b.degrade_envelope));
    return to_json(b);
  }

  json oracle_check(json& params) {
    params = {{"seeds", o_.seeds}, {"max_y", o_.max_y}, {"mode", o_.mode}};
    const bool degrade = o_.mode == "degrade";
    const std::size_t cap = degrade ? kBruteDegradeMaxLetters : kBruteUpgradeMaxLetters;
    if (o_.max_y < 2 || o_.max_y > cap) {
      throw Error(Errc::TooLarge, "--max-y must lie in [2, " + std::to_string(cap) + "]");
    }
    const std::vector<std::size_t> targets =
        degrade ? std::vector<std::size_t>{2, 3, 4} : std::vector<std::size_t>{2, 3, 4, 5};
    std::size_t comparisons = 0;
    double max_diff = 0.0;
    for (std::size_t seed = 0; seed < o_.seeds; ++seed) {
      const std::size_t ny = 2 + seed % (o_.max_y - 1);
      const Channel ch = random_channel({.input_size = 2, .output_size = ny, .seed = seed});
      for (std::size_t target : targets) {
        const double fast = degrade ? optimal_degrade_binary(ch, target).delta_i
                                    : optimal_upgrade_binary(ch, target).delta_i;
        const double brute = degrade ? brute_degrade(ch, target).delta_i
                                     : brute_upgrade_binary(ch, target).delta_i;
        const double diff = std::abs(fast - brute);
        max_diff = std::max(max_diff, diff);
        ++comparisons;
        if (diff > 1e-10) {
          write_channel_file(o_.dump, ch);
          throw OracleMismatch("seed " + std::to_string(seed) + ", L = " + std::to_string(target) +
                               ": algorithm " + value(fast) + " vs oracle " + value(brute) +
                               "; channel written to " + o_.dump);
        }
      }
    }
    summary(std::to_string(comparisons) + " comparisons agree, max difference " + std::to_string(max_diff));
    return {{"instances", o_.seeds}, {"comparisons", comparisons}, {"max_abs_diff", max_diff}};
  }

  json polar(json& params, std::string& digest) {
    params = {{"in", o_.in},
              {"depth", o_.depth},
              {"L", o_.target_l},
              {"degrader", o_.degrader},
              {"upgrader", o_.upgrader}};
    const Loaded l = load(o_.in);
    digest = l.digest;
    PolarOptions po;
    po.depth = o_.depth;
    po.target_l = o_.target_l;
    po.degrader = parse_degrader(o_.degrader);
    po.upgrader = parse_upgrader(o_.upgrader);
    const PolarReport r = polar_construct(l.channel, po);
    double width = 0.0;
    for (const PolarEntry& e : r.entries) width = std::max(width, e.upper_i - e.lower_i);
    summary(std::to_string(r.entries.size()) + " synthetic channels, widest sandwich " + value(width));
    return to_json(r);
  }

 private:
  std::string value(double nats) const {
    char buf[64];
    if (o_.bits) {
      std::snprintf(buf, sizeof buf, "%.6g bits", to_bits(nats));
    } else {
      std::snprintf(buf, sizeof buf, "%.6g nats", nats);
    }
    return buf;
  }

  void summary(const std::string& line) { err_ << line << '\n'; }

  const Options& o_;
  std::ostream& err_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Output-alphabet degrading and upgrading of discrete memoryless channels", "channelq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CHANNELQ_VERSION));
  Options o;
  app.add_flag("--bits", o.bits, "Show the stderr summary in bits instead of nats");

  auto* info = app.add_subcommand("info", "Describe a channel file");
  info->add_option("--in", o.in, "Channel file")->required();

  auto* degrade = app.add_subcommand("degrade", "Reduce the output alphabet");
  degrade->add_option("--in", o.in, "Channel file")->required();
  degrade->add_option("--L", o.target_l, "Target alphabet size")->required()->check(CLI::PositiveNumber);
  degrade->add_option("--algo", o.algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"greedy", "optimal-binary", "cyclo"}));
  degrade->add_flag("--fast-path,!--no-fast-path", o.fast_path,
                    "Binary input: only merge posterior neighbors (default on)");
  degrade->add_option("--report", o.report, "Write the report here instead of stdout");

  auto* upgrade = app.add_subcommand("upgrade", "Upgrade to a smaller output alphabet");
  upgrade->add_option("--in", o.in, "Channel file")->required();
  upgrade->add_option("--L", o.target_l, "Target alphabet size")->required()->check(CLI::PositiveNumber);
  upgrade->add_option("--algo", o.algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"optimal", "greedy", "greedy-symmetric"}));
  upgrade->add_option("--report", o.report, "Write the report here instead of stdout");

  auto* bounds = app.add_subcommand("bounds", "Evaluate the bound constants and envelopes");
  bounds->add_option("--X", o.input_size, "Input alphabet size")->required()->check(CLI::Range(2, 1 << 20));
  bounds->add_option("--L", o.target_l, "Target alphabet size")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--Y", o.alphabet_size, "Source alphabet size");
  bounds->add_option("--report", o.report, "Write the report here instead of stdout");

  auto* oracle = app.add_subcommand("oracle-check", "Compare the binary optimizers with brute force");
  oracle->add_option("--seeds", o.seeds, "Number of random instances")->check(CLI::PositiveNumber);
  oracle->add_option("--max-y", o.max_y, "Largest output alphabet");
  oracle->add_option("--mode", o.mode, "degrade or upgrade")->check(CLI::IsMember({"degrade", "upgrade"}));
  oracle->add_option("--dump", o.dump, "Where to write a disagreeing channel");
  oracle->add_option("--report", o.report, "Write the report here instead of stdout");

  auto* polar = app.add_subcommand("polar", "Sandwich the polar synthetic channels");
  polar->add_option("--in", o.in, "Channel file")->required();
  polar->add_option("--depth", o.depth, "Number of transform levels")->required()->check(CLI::Range(0, 20));
  polar->add_option("--L", o.target_l, "Target alphabet size")->required()->check(CLI::Range(2, 1 << 20));
  polar->add_option("--degrader", o.degrader, "greedy or optimal-binary");
  polar->add_option("--upgrader", o.upgrader, "greedy or optimal");
  polar->add_option("--report", o.report, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CHANNELQ_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  Runner runner(o, err);
  json params;
  std::string digest;
  json result;
  std::string name;
  const auto start = Clock::now();
  try {
    if (info->parsed()) {
      name = "info";
      result = runner.info(params, digest);
    } else if (degrade->parsed()) {
      name = "degrade";
      result = runner.degrade(params, digest);
    } else if (upgrade->parsed()) {
      name = "upgrade";
      result = runner.upgrade(params, digest);
    } else if (bounds->parsed()) {
      name = "bounds";
      result = runner.bounds(params);
    } else if (oracle->parsed()) {
      name = "oracle-check";
      result = runner.oracle_check(params);
    } else {
      name = "polar";
      result = runner.polar(params, digest);
    }
  } catch (const OracleMismatch& e) {
    err << "oracle disagreement: " << e.what() << '\n';
    return kExitOracleMismatch;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  json report = {{"subcommand", name},
                 {"tool_version", CHANNELQ_VERSION},
                 {"input_digest", digest.empty() ? json(nullptr) : json(digest)},
                 {"parameters", params},
                 {"result", result},
                 {"wall_time_ms", ms}};
  const std::string text = report.dump(2) + "\n";
  if (o.report.empty()) {
    out << text;
  } else {
    try {
      write_text_file(o.report, text);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitInvalid;
    }
  }
  return kExitOk;
}

}  // namespace channelq
