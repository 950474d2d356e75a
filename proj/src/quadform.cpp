#include "qfcert/quadform.hpp"

#include <algorithm>
#include <sstream>

#include "qfcert/errors.hpp"

namespace qfcert {

using nlohmann::json;

std::string DiagonalForm::str() const {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ", ";
    os << entries[i].str();
  }
  os << ">";
  return os.str();
}

bool DiagonalForm::operator==(const DiagonalForm& o) const {
  if (!same_instance(instance, o.instance)) return false;
  return entries == o.entries;
}

json DiagonalForm::to_json() const {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(class_to_json(e));
  json j;
  j["dim"] = entries.size();
  j["entries"] = arr;
  return j;
}

DiagonalForm DiagonalForm::from_json(const json& j, const FieldInstancePtr& inst) {
  DiagonalForm q;
  q.instance = inst;
  for (const auto& e : j.at("entries")) q.entries.push_back(class_from_json(inst, e));
  if (j.contains("dim") && j["dim"].get<std::size_t>() != q.entries.size())
    throw Error("form: declared dim does not match entry count");
  return q;
}

DiagonalForm diagonal(const FieldInstancePtr& inst, std::vector<SquareClass> entries) {
  if (entries.empty()) throw Precondition("form: at least one entry required");
  for (const auto& e : entries)
    if (!same_instance(e.instance, inst))
      throw InstanceMismatch("form: entry class belongs to a different field instance");
  DiagonalForm q;
  q.instance = inst;
  q.entries = std::move(entries);
  return q;
}

DiagonalForm scale(const SquareClass& a, const DiagonalForm& q) {
  if (!same_instance(a.instance, q.instance))
    throw InstanceMismatch("scale: class and form live over different instances");
  DiagonalForm r;
  r.instance = q.instance;
  r.entries.reserve(q.entries.size());
  for (const auto& e : q.entries) r.entries.push_back(class_mul(a, e));
  return r;
}

DiagonalForm orthogonal_sum(const DiagonalForm& a, const DiagonalForm& b) {
  if (!same_instance(a.instance, b.instance))
    throw InstanceMismatch("orthogonal_sum: forms live over different instances");
  DiagonalForm r;
  r.instance = a.instance;
  r.entries = a.entries;
  r.entries.insert(r.entries.end(), b.entries.begin(), b.entries.end());
  return r;
}

DiagonalForm tensor(const DiagonalForm& a, const DiagonalForm& b) {
  if (!same_instance(a.instance, b.instance))
    throw InstanceMismatch("tensor: forms live over different instances");
  DiagonalForm r;
  r.instance = a.instance;
  r.entries.reserve(a.entries.size() * b.entries.size());
  for (const auto& x : a.entries)
    for (const auto& y : b.entries) r.entries.push_back(class_mul(x, y));
  return r;
}

// Subsets of {0..n-1} ordered by size, then lexicographically on the sorted
// index tuples.  The empty set comes first, the full set last.
static std::vector<std::vector<std::size_t>> graded_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      out.push_back(idx);
      // next combination of size k
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t jj = i; jj < k; ++jj) idx[jj] = idx[jj - 1] + 1;
    }
  }
  return out;
}

DiagonalForm pfister(const FieldInstancePtr& inst, const std::vector<SquareClass>& slots) {
  if (slots.empty()) throw Precondition("pfister: at least one slot required");
  for (const auto& s : slots)
    if (!same_instance(s.instance, inst))
      throw InstanceMismatch("pfister: slot class belongs to a different field instance");
  const std::size_t n = slots.size();
  DiagonalForm q;
  q.instance = inst;
  q.entries.reserve(std::size_t{1} << n);
  for (const auto& T : graded_subsets(n)) {
    SquareClass e = trivial_class(inst);
    for (std::size_t i : T) e = class_mul(e, slots[i]);
    q.entries.push_back(std::move(e));
  }
  return q;
}

DiagonalForm pfister_with_disc(const FieldInstancePtr& inst,
                               const std::vector<SquareClass>& slots,
                               const SquareClass& d) {
  if (!same_instance(d.instance, inst))
    throw InstanceMismatch("pfister_with_disc: twist class belongs to a different instance");
  DiagonalForm q = pfister(inst, slots);
  q.entries.back() = class_mul(q.entries.back(), d);
  return q;
}

SquareClass discriminant(const DiagonalForm& q) {
  SquareClass d = trivial_class(q.instance);
  for (const auto& e : q.entries) d = class_mul(d, e);
  return d;
}

std::pair<Verdict, CertStep> transfer_isotropy(const DiagonalForm& q,
                                               const SquareClass& d,
                                               Verdict verdict_over_cover) {
  if (!same_instance(d.instance, q.instance))
    throw InstanceMismatch("transfer_isotropy: class and form live over different instances");
  const std::size_t m = q.dim();
  if (m < 4 || (m & (m - 1)) != 0)
    throw Precondition("transfer_isotropy: form dimension must be a power of two and at least 4");
  std::size_t n = 0;
  while ((std::size_t{1} << n) < m) ++n;

  // In the graded subset order, entries 1..n are the singleton slots.
  std::vector<SquareClass> slots(q.entries.begin() + 1, q.entries.begin() + 1 + n);
  DiagonalForm expected = pfister_with_disc(q.instance, slots, d);
  if (!(expected == q))
    throw Precondition(
        "transfer_isotropy: entries are not a discriminant-twisted multiplicative form "
        "in its singleton slots");
  if (!(discriminant(q) == d))
    throw Precondition("transfer_isotropy: discriminant of the form is not the given class");

  CertStep step;
  step.id = "transfer";
  step.kind = "isotropy-transfer";
  step.inputs["form"] = q.to_json();
  step.inputs["disc"] = class_to_json(d);
  step.inputs["verdict_over_cover"] = to_string(verdict_over_cover);
  step.outputs["verdict"] = to_string(verdict_over_cover);
  step.outputs["slots"] = [&] {
    json arr = json::array();
    for (const auto& s : slots) arr.push_back(class_to_json(s));
    return arr;
  }();
  step.justification =
      "the form is the twisted multiplicative form in its singleton slots with the stated "
      "discriminant; isotropy over the quadratic cover adjoining a square root of the "
      "discriminant transfers to isotropy of the form itself";
  return {verdict_over_cover, step};
}

}  // namespace qfcert
