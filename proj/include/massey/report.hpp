#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace massey {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolName = "massey-workbench";
inline constexpr const char* kToolVersion = "0.1.0";

struct StageRecord {
  StageRecord() = default;
  explicit StageRecord(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<nlohmann::json> counterexample;
  nlohmann::json stats = nlohmann::json::object();
  std::string note;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["status"] = passed ? "pass" : "fail";
    j["checked"] = checked;
    j["violations"] = violations;
    if (counterexample) j["counterexample"] = *counterexample;
    if (!stats.empty()) j["stats"] = stats;
    if (!note.empty()) j["note"] = note;
    return j;
  }

  static StageRecord from_json(const nlohmann::json& j) {
    StageRecord s;
    s.name = j.at("name").get<std::string>();
    s.passed = j.at("status").get<std::string>() == "pass";
    s.checked = j.value("checked", std::uint64_t{0});
    s.violations = j.value("violations", std::uint64_t{0});
    if (j.contains("counterexample")) s.counterexample = j.at("counterexample");
    if (j.contains("stats")) s.stats = j.at("stats");
    s.note = j.value("note", std::string{});
    return s;
  }
};

// Outcome of a verification run. Everything that may vary between two runs
// with the same config and seed lives under the "timing" key.
struct VerificationReport {
  std::string command;
  std::vector<StageRecord> stages;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json measured = nlohmann::json::object();
  double wall_seconds = 0.0;
  std::string started_at;

  bool passed() const {
    return std::all_of(stages.begin(), stages.end(), [](const StageRecord& s) { return s.passed; });
  }

  const StageRecord* find(const std::string& name) const {
    for (const auto& s : stages)
      if (s.name == name) return &s;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["versions"] = {{"tool", kToolName}, {"tool_version", kToolVersion}};
    j["command"] = command;
    j["status"] = passed() ? "pass" : "fail";
    j["config"] = config;
    j["measured"] = measured;
    nlohmann::json stage_list = nlohmann::json::array();
    for (const auto& s : stages) stage_list.push_back(s.to_json());
    j["stages"] = stage_list;
    j["timing"] = {{"wall_seconds", wall_seconds}, {"started_at", started_at}};
    return j;
  }

  static VerificationReport from_json(const nlohmann::json& j) {
    VerificationReport r;
    r.command = j.value("command", std::string{});
    r.config = j.value("config", nlohmann::json::object());
    r.measured = j.value("measured", nlohmann::json::object());
    for (const auto& s : j.at("stages")) r.stages.push_back(StageRecord::from_json(s));
    if (j.contains("timing")) {
      r.wall_seconds = j["timing"].value("wall_seconds", 0.0);
      r.started_at = j["timing"].value("started_at", std::string{});
    }
    return r;
  }
};

// Plain-text table of a report (JSON form), one row per stage.
inline std::string render_table(const nlohmann::json& report) {
  std::ostringstream os;
  const auto& stages = report.at("stages");
  std::size_t width = 5;
  for (const auto& s : stages) width = std::max(width, s.at("name").get<std::string>().size());
  os << kToolName << " " << report.value("command", std::string{}) << ": "
     << report.value("status", std::string{"?"}) << "\n";
  os << std::left << std::setw(static_cast<int>(width)) << "stage"
     << "  status  " << std::setw(10) << "checked" << "  " << std::setw(10) << "violations"
     << "  detail\n";
  os << std::string(width + 44, '-') << "\n";
  for (const auto& s : stages) {
    std::string detail;
    if (s.contains("counterexample")) detail = "counterexample " + s["counterexample"].dump();
    else if (s.contains("note")) detail = s["note"].get<std::string>();
    os << std::left << std::setw(static_cast<int>(width)) << s.at("name").get<std::string>() << "  "
       << std::setw(6) << s.at("status").get<std::string>() << "  " << std::setw(10)
       << s.value("checked", std::uint64_t{0}) << "  " << std::setw(10) << s.value("violations", std::uint64_t{0})
       << "  " << detail << "\n";
  }
  if (report.contains("measured") && !report["measured"].empty()) {
    os << "measured:";
    for (const auto& [key, value] : report["measured"].items()) os << " " << key << "=" << value.dump();
    os << "\n";
  }
  return os.str();
}

}  // namespace massey
