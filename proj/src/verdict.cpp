#include "coarselab/verdict.hpp"

#include <algorithm>

#include "coarselab/error.hpp"

namespace coarselab {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(AxiomStatus s) {
  switch (s) {
    case AxiomStatus::Pass: return "pass";
    case AxiomStatus::Fail: return "FAIL";
    case AxiomStatus::Skipped: return "skipped";
  }
  return "?";
}

TriVerdict TriVerdict::yes(std::string note, json witness) {
  return {Outcome::Yes, std::move(note), std::move(witness), 0};
}

TriVerdict TriVerdict::no(std::string note, json witness) {
  return {Outcome::No, std::move(note), std::move(witness), 0};
}

TriVerdict TriVerdict::unknown(Nat budget, std::string note) {
  if (note.empty()) note = "budget " + std::to_string(budget) + " exhausted";
  return {Outcome::Unknown, std::move(note), json::object(), budget};
}

TriVerdict TriVerdict::of(bool b, std::string note, json witness) {
  return b ? yes(std::move(note), std::move(witness)) : no(std::move(note), std::move(witness));
}

std::string TriVerdict::text() const {
  std::string out = to_string(outcome);
  if (!note.empty()) out += " (" + note + ")";
  return out;
}

json TriVerdict::to_json() const {
  json j;
  j["outcome"] = to_string(outcome);
  if (!note.empty()) j["note"] = note;
  if (!witness.empty()) j["witness"] = witness;
  if (outcome == Outcome::Unknown) j["budget"] = budget;
  return j;
}

void AxiomReport::pass(std::string axiom, std::string note) {
  verdicts.push_back({std::move(axiom), AxiomStatus::Pass, std::move(note), json::object()});
}

void AxiomReport::fail(std::string axiom, std::string witness, json evidence) {
  verdicts.push_back({std::move(axiom), AxiomStatus::Fail, std::move(witness), std::move(evidence)});
}

void AxiomReport::skip(std::string axiom, std::string reason) {
  verdicts.push_back({std::move(axiom), AxiomStatus::Skipped, std::move(reason), json::object()});
}

bool AxiomReport::passed() const {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const AxiomVerdict& v) { return v.status == AxiomStatus::Fail; });
}

const AxiomVerdict& AxiomReport::at(const std::string& axiom) const {
  for (const auto& v : verdicts)
    if (v.axiom == axiom) return v;
  coarselab::fail(ErrorKind::Precondition, "report has no verdict for '" + axiom + "'");
}

std::string AxiomReport::text() const {
  std::string out;
  if (!subject.empty()) out += subject + "\n";
  for (const auto& v : verdicts) {
    out += "  " + v.axiom + ": " + to_string(v.status);
    if (!v.witness.empty()) out += "  " + v.witness;
    out += "\n";
  }
  return out;
}

json AxiomReport::to_json() const {
  json j;
  j["subject"] = subject;
  j["passed"] = passed();
  json arr = json::array();
  for (const auto& v : verdicts) {
    json e;
    e["axiom"] = v.axiom;
    e["status"] = to_string(v.status);
    if (!v.witness.empty()) e["witness"] = v.witness;
    if (!v.evidence.empty()) e["evidence"] = v.evidence;
    arr.push_back(std::move(e));
  }
  j["verdicts"] = std::move(arr);
  return j;
}

}  // namespace coarselab
