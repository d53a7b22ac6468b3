#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace coarselab {

using json = nlohmann::ordered_json;
using Nat = std::uint64_t;

enum class Outcome { Yes, No, Unknown };

const char* to_string(Outcome o);

/// Three-valued answer. Yes/No carry a checkable witness; Unknown carries the
/// budget that ran out.
struct TriVerdict {
  Outcome outcome = Outcome::Unknown;
  std::string note;
  json witness;
  Nat budget = 0;

  static TriVerdict yes(std::string note, json witness = json::object());
  static TriVerdict no(std::string note, json witness = json::object());
  static TriVerdict unknown(Nat budget, std::string note = {});
  static TriVerdict of(bool b, std::string note, json witness = json::object());

  bool is_yes() const { return outcome == Outcome::Yes; }
  bool is_no() const { return outcome == Outcome::No; }
  bool is_unknown() const { return outcome == Outcome::Unknown; }

  std::string text() const;
  json to_json() const;
};

enum class AxiomStatus { Pass, Fail, Skipped };

const char* to_string(AxiomStatus s);

struct AxiomVerdict {
  std::string axiom;
  AxiomStatus status = AxiomStatus::Pass;
  std::string witness;
  json evidence = json::object();

  bool passed() const { return status == AxiomStatus::Pass; }
};

/// Per-axiom results of a checker run.
struct AxiomReport {
  std::string subject;
  std::vector<AxiomVerdict> verdicts;

  void pass(std::string axiom, std::string note = {});
  void fail(std::string axiom, std::string witness, json evidence = json::object());
  void skip(std::string axiom, std::string reason);
  void add(AxiomVerdict v) { verdicts.push_back(std::move(v)); }

  /// True iff no verdict failed. Skipped verdicts do not count as failures.
  bool passed() const;
  const AxiomVerdict& at(const std::string& axiom) const;
  bool passed(const std::string& axiom) const { return at(axiom).passed(); }

  std::string text() const;
  json to_json() const;
};

}  // namespace coarselab
