#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "qfcert/errors.hpp"

namespace qfcert {

// One replayable proof step.  A checker re-invokes the operation named by
// `kind` on `inputs` and compares against `outputs`; `justification` names
// the rule that makes the step sound.
struct CertStep {
  std::string id;
  std::string kind;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  std::string justification;
  std::vector<CertStep> children;

  nlohmann::json to_json() const;
  static CertStep from_json(const nlohmann::json& j);
  const CertStep* find(const std::string& step_id) const;
};

struct Certificate {
  std::string kind = "unramifiedness-certificate";
  std::string goal;
  // The finite case schema is a modeling commitment, recorded in every
  // certificate header rather than hidden in code.
  std::string commitment;
  nlohmann::json instance;  // embedded instance configuration
  nlohmann::json extension_class = nlohmann::json::array();
  std::string identification;  // optional note tying goal classes to inputs
  std::vector<std::string> axioms;
  std::string status = "incomplete";  // "complete" | "incomplete"
  std::vector<CertStep> steps;

  bool is_complete() const { return status == "complete"; }
  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);
  std::string serialize() const;  // stable, replayable text
  static Certificate deserialize(const std::string& text);
  const CertStep* find(const std::string& step_id) const;
};

struct ReplayIssue {
  std::string step_id;
  std::string message;
};

struct ReplayReport {
  bool ok = false;
  std::vector<ReplayIssue> issues;
  std::string summary() const;
};

// First json path at which two documents differ, if any ("/a/b[2]/c").
std::optional<std::string> json_diff_path(const nlohmann::json& a, const nlohmann::json& b);

}  // namespace qfcert
