#pragma once
// Machine-readable report envelope shared by every front-end command: a
// stable record schema for classified families, JSON/CSV/table rendering, a
// small schema validator, and structural comparison against committed
// golden tables.

#include <string>
#include <vector>

#include "json.hpp"

#include "isoprod/classify.hpp"

namespace isoprod {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

// One record object. Every record carries the seven identifying fields
// (label, group, order, m, n, gC, gF); classification records add pairs,
// components, components_exact, dimension, extra, and representatives;
// verification records add valid (and detail on failure) instead of the
// orbit fields. Signatures are rendered as branching strings ("2^2,4^2").
Json record_to_json(const FamilyRecord& rec);
Json record_to_json(const KnownExampleCheck& check, const std::string& label);

struct Report {
  std::string command;  // echo of the invocation
  std::string catalog;  // description of the search space this run covered
  std::vector<std::string> warnings;
  std::vector<Json> records;
  Json details = Json::object();  // command-specific sections
  double timing_seconds = 0.0;

  Json to_json() const;
  // Fixed columns label,group,order,m,n,gC,gF,components,dimension; one
  // line per record; fields a record lacks are empty cells.
  std::string to_csv() const;
  std::string to_table() const;
  // format is one of "json", "csv", "table"; anything else throws
  // std::invalid_argument.
  std::string render(const std::string& format) const;
};

// Report builders, one per pipeline.
Report report_from_abelian(const AbelianClassification& result,
                           int max_curve_genus);
Report report_from_search(const NonabelianSearchResult& result);
Report report_from_verification(const KnownExampleVerification& result);
Report report_from_orbit(const FamilyRecord& record);
// Appends the derivation replays as a details section (and their failures,
// if any, as warnings).
void append_derivations(Report& report,
                        const std::vector<DerivationCheck>& checks);

// CSV plumbing: fields holding a comma, quote, or newline are quoted with
// doubled inner quotes; parse_csv inverts to_csv (used by the round-trip
// invariant tests).
std::string csv_escape(const std::string& field);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Validates doc against the subset of JSON Schema the shipped schema file
// uses: type, properties, required, items (single schema), enum, and
// additionalProperties (bool or schema). Returns true on success, else
// false with a path-qualified reason in *error (error may be null).
bool matches_schema(const Json& doc, const Json& schema, std::string* error);

// Embedded copies of the committed data files (single source of truth
// under data/, embedded at configure time).
const char* golden_abelian_json();
const char* golden_nonabelian_json();
const char* report_schema_json();

// Structural golden comparison. golden is a parsed golden file (object
// with a "records" array); a record matches a golden row when it carries
// every field the row has, with equal values. Exact mode requires the same
// number of records, matched pairwise in order; subset mode requires every
// golden row to match at least one record. Returns true on match, else
// false with a human-readable mismatch in *error (error may be null).
bool matches_golden_exact(const std::vector<Json>& records, const Json& golden,
                          std::string* error);
bool matches_golden_subset(const std::vector<Json>& records,
                           const Json& golden, std::string* error);

}  // namespace isoprod
