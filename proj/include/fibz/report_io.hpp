#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fibz/error.hpp"
#include "fibz/verify.hpp"

namespace fibz {

using Json = nlohmann::ordered_json;

inline Json to_json(const VerificationReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["parameters"] = Json::object();
  for (const auto& [k, v] : r.parameters) j["parameters"][k] = v;
  j["covers"] = r.covers;
  j["checked"] = r.checked;
  j["passed"] = r.passed;
  j["failures"] = r.failures;
  j["counterexamples"] = Json::array();
  for (const auto& c : r.counterexamples) {
    j["counterexamples"].push_back(
        {{"input", c.input}, {"expected", c.expected}, {"actual", c.actual}});
  }
  j["findings"] = Json::object();
  for (const auto& [k, v] : r.findings) j["findings"][k] = v;
  j["notes"] = r.notes;
  return j;
}

inline VerificationReport report_from_json(const Json& j) {
  try {
    VerificationReport r;
    r.suite = j.at("suite").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) {
      r.parameters.emplace_back(k, v.get<std::string>());
    }
    r.covers = j.at("covers").get<std::vector<std::string>>();
    r.checked = j.at("checked").get<std::uint64_t>();
    r.passed = j.at("passed").get<bool>();
    r.failures = j.at("failures").get<std::uint64_t>();
    for (const auto& c : j.at("counterexamples")) {
      r.counterexamples.push_back({c.at("input").get<std::string>(),
                                   c.at("expected").get<std::string>(),
                                   c.at("actual").get<std::string>()});
    }
    for (const auto& [k, v] : j.at("findings").items()) {
      r.findings.emplace_back(k, v.get<std::string>());
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, std::string("report json: ") + e.what());
  }
}

inline void write_text(std::ostream& out, const VerificationReport& r) {
  out << (r.passed ? "PASS " : "FAIL ") << r.suite << " checked=" << r.checked
      << " failures=" << r.failures;
  if (!r.parameters.empty()) {
    out << " (";
    for (std::size_t i = 0; i < r.parameters.size(); ++i) {
      out << (i ? ", " : "") << r.parameters[i].first << '=' << r.parameters[i].second;
    }
    out << ')';
  }
  out << '\n';
  for (const auto& [k, v] : r.findings) out << "  " << k << ": " << v << '\n';
  for (const auto& n : r.notes) out << "  note: " << n << '\n';
  for (const auto& c : r.counterexamples) {
    out << "  counterexample: " << c.input << " expected " << c.expected
        << " got " << c.actual << '\n';
  }
  if (r.failures > r.counterexamples.size()) {
    out << "  (" << r.failures - r.counterexamples.size() << " more not shown)\n";
  }
}

/// Claim-to-suite listing printed ahead of `verify all`.
inline void write_coverage(std::ostream& out, const std::vector<VerificationReport>& rs) {
  out << "coverage:\n";
  for (const auto& r : rs) {
    for (const auto& claim : r.covers) out << "  " << r.suite << ": " << claim << '\n';
  }
}

inline constexpr const char* kReportCsvHeader = "suite,passed,checked,failures";

inline void write_csv_row(std::ostream& out, const VerificationReport& r) {
  out << r.suite << ',' << (r.passed ? "true" : "false") << ',' << r.checked << ','
      << r.failures << '\n';
}

}  // namespace fibz
