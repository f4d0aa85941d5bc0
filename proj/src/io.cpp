#include "channelq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "channelq/error.hpp"

namespace channelq {

namespace {

std::vector<double> number_array(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw Error(Errc::ParseError, where + " is not an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) {
      throw Error(Errc::ParseError, where + " entry " + std::to_string(k) + " is not a number");
    }
    out.push_back(j[k].get<double>());
  }
  return out;
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_array(std::string& out, std::span<const double> v) {
  out += '[';
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    append_number(out, v[k]);
  }
  out += ']';
}

}  // namespace

BuiltChannel parse_channel(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::ParseError, "channel document must be an object");
  if (!doc.contains("input_dist")) throw Error(Errc::ParseError, "missing \"input_dist\"");
  if (!doc.contains("transition")) throw Error(Errc::ParseError, "missing \"transition\"");
  const std::vector<double> dist = number_array(doc["input_dist"], "input_dist");
  const nlohmann::json& t = doc["transition"];
  if (!t.is_array()) throw Error(Errc::ParseError, "transition is not an array");
  std::vector<std::vector<double>> rows;
  for (std::size_t x = 0; x < t.size(); ++x) {
    rows.push_back(number_array(t[x], "transition row " + std::to_string(x)));
    if (rows.back().size() != rows.front().size()) {
      throw Error(Errc::ParseError, "transition row " + std::to_string(x) + " has " +
                                        std::to_string(rows.back().size()) + " entries, expected " +
                                        std::to_string(rows.front().size()));
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("labels") && !doc["labels"].is_null()) {
    const nlohmann::json& l = doc["labels"];
    if (!l.is_array()) throw Error(Errc::ParseError, "labels is not an array");
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (!l[k].is_string()) throw Error(Errc::ParseError, "label " + std::to_string(k) + " is not a string");
      labels.push_back(l[k].get<std::string>());
    }
  }
  return build_channel(rows, dist, std::move(labels));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::IoError, "cannot read " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

BuiltChannel read_channel_file(const std::filesystem::path& path) {
  return parse_channel(read_text_file(path));
}

std::string format_channel(const Channel& ch) {
  std::string out = "{\n  \"input_dist\": ";
  append_array(out, ch.input_dist());
  out += ",\n  \"transition\": [\n";
  for (std::size_t x = 0; x < ch.input_size(); ++x) {
    out += "    ";
    append_array(out, ch.transition().row(x));
    out += x + 1 < ch.input_size() ? ",\n" : "\n";
  }
  out += "  ]";
  if (!ch.labels().empty()) out += ",\n  \"labels\": " + nlohmann::json(ch.labels()).dump();
  out += "\n}\n";
  return out;
}

void write_channel_file(const std::filesystem::path& path, const Channel& ch) {
  write_text_file(path, format_channel(ch));
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

nlohmann::json channel_json(const Channel& ch) {
  nlohmann::json j;
  j["input_dist"] = std::vector<double>(ch.input_dist().begin(), ch.input_dist().end());
  j["transition"] = matrix_json(ch.transition());
  if (!ch.labels().empty()) j["labels"] = ch.labels();
  return j;
}

nlohmann::json to_json(const DegradeResult& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const MergeStep& s : r.step_log) {
    steps.push_back({{"first", s.first}, {"second", s.second}, {"delta_i", s.delta_i},
                     {"size_before", s.size_before}});
  }
  return {{"delta_i", r.delta_i},
          {"map", r.intermediate.map},
          {"step_log", steps},
          {"channel", channel_json(r.channel)}};
}

nlohmann::json to_json(const UpgradeResult& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const SplitStep& s : r.step_log) {
    steps.push_back({{"letter", s.letter}, {"delta_i", s.delta_i}, {"size_before", s.size_before}});
  }
  nlohmann::json j = {{"delta_i", r.delta_i},
                      {"chosen_subset", r.chosen_subset},
                      {"step_log", steps},
                      {"phi_forward", matrix_json(r.intermediate.forward)},
                      {"phi_reverse", matrix_json(r.intermediate.reverse)},
                      {"channel", channel_json(r.channel)}};
  return j;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j = {{"input_size", r.input_size},
                      {"target_l", r.target_l},
                      {"nu", r.nu},
                      {"mu", r.mu},
                      {"kappa", r.kappa},
                      {"degrade_envelope", r.degrade_envelope},
                      {"upgrade_lower_envelope", r.upgrade_lower_envelope}};
  j["alphabet_size"] = r.alphabet_size ? nlohmann::json(*r.alphabet_size) : nlohmann::json(nullptr);
  j["r_critical"] = r.r_critical ? nlohmann::json(*r.r_critical) : nlohmann::json(nullptr);
  j["upgrade_envelope"] = r.upgrade_envelope ? nlohmann::json(*r.upgrade_envelope) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const PolarReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  double lower = 0.0, upper = 0.0;
  for (const PolarEntry& e : r.entries) {
    entries.push_back({{"index", e.index}, {"lower_i", e.lower_i}, {"upper_i", e.upper_i}});
    lower += e.lower_i;
    upper += e.upper_i;
  }
  return {{"depth", r.depth},         {"target_l", r.target_l}, {"degrader", r.degrader},
          {"upgrader", r.upgrader},   {"input_mi", r.input_mi}, {"sum_lower_i", lower},
          {"sum_upper_i", upper},     {"entries", entries}};
}

}  // namespace channelq
