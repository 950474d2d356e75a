#include "qfcert/certificate.hpp"

#include <sstream>

namespace qfcert {

using nlohmann::json;

json CertStep::to_json() const {
  json j;
  j["id"] = id;
  j["kind"] = kind;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["justification"] = justification;
  if (!children.empty()) {
    json arr = json::array();
    for (const auto& c : children) arr.push_back(c.to_json());
    j["children"] = arr;
  }
  return j;
}

CertStep CertStep::from_json(const json& j) {
  CertStep s;
  s.id = j.at("id").get<std::string>();
  s.kind = j.at("kind").get<std::string>();
  s.inputs = j.value("inputs", json::object());
  s.outputs = j.value("outputs", json::object());
  s.justification = j.value("justification", "");
  if (j.contains("children"))
    for (const auto& c : j["children"]) s.children.push_back(CertStep::from_json(c));
  return s;
}

const CertStep* CertStep::find(const std::string& step_id) const {
  if (id == step_id) return this;
  for (const auto& c : children)
    if (const CertStep* hit = c.find(step_id)) return hit;
  return nullptr;
}

json Certificate::to_json() const {
  json j;
  j["kind"] = kind;
  j["goal"] = goal;
  j["commitment"] = commitment;
  j["instance"] = instance;
  j["extension_class"] = extension_class;
  if (!identification.empty()) j["identification"] = identification;
  j["axioms"] = axioms;
  j["status"] = status;
  json arr = json::array();
  for (const auto& s : steps) arr.push_back(s.to_json());
  j["steps"] = arr;
  return j;
}

Certificate Certificate::from_json(const json& j) {
  Certificate c;
  c.kind = j.at("kind").get<std::string>();
  c.goal = j.value("goal", "");
  c.commitment = j.value("commitment", "");
  c.instance = j.value("instance", json::object());
  c.extension_class = j.value("extension_class", json::array());
  c.identification = j.value("identification", "");
  if (j.contains("axioms"))
    for (const auto& a : j["axioms"]) c.axioms.push_back(a.get<std::string>());
  c.status = j.value("status", "incomplete");
  if (j.contains("steps"))
    for (const auto& s : j["steps"]) c.steps.push_back(CertStep::from_json(s));
  return c;
}

std::string Certificate::serialize() const { return to_json().dump(2) + "\n"; }

Certificate Certificate::deserialize(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("certificate: parse error: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw Error(std::string("certificate: malformed document: ") + e.what());
  }
}

const CertStep* Certificate::find(const std::string& step_id) const {
  for (const auto& s : steps)
    if (const CertStep* hit = s.find(step_id)) return hit;
  return nullptr;
}

std::string ReplayReport::summary() const {
  if (ok) return "replay ok";
  std::ostringstream os;
  os << "replay failed (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << ")";
  for (const auto& i : issues) os << "\n  step " << i.step_id << ": " << i.message;
  return os.str();
}

static std::optional<std::string> diff_rec(const json& a, const json& b, const std::string& path) {
  // signed/unsigned integer representations of the same value are not a diff:
  // parsing a serialized document yields number_unsigned where the in-memory
  // builder used number_integer
  if (a.type() != b.type() && !(a.is_number() && b.is_number()))
    return path.empty() ? "/" : path;
  if (a.is_object()) {
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k)) return path + "/" + k;
      if (auto d = diff_rec(v, b[k], path + "/" + k)) return d;
    }
    for (const auto& [k, v] : b.items())
      if (!a.contains(k)) return path + "/" + k;
    return std::nullopt;
  }
  if (a.is_array()) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i)
      if (auto d = diff_rec(a[i], b[i], path + "[" + std::to_string(i) + "]")) return d;
    if (a.size() != b.size()) return path + "[" + std::to_string(n) + "]";
    return std::nullopt;
  }
  if (a != b) return path.empty() ? "/" : path;
  return std::nullopt;
}

std::optional<std::string> json_diff_path(const json& a, const json& b) {
  return diff_rec(a, b, "");
}

}  // namespace qfcert
