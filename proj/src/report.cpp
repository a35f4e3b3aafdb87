#include "isoprod/report.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace isoprod {

namespace {

// Renders one report cell for the fixed-column formats; absent fields are
// empty cells (a verification record has no orbit columns, for example).
std::string cell(const Json& rec, const char* key) {
  if (!rec.contains(key)) return "";
  const Json& v = rec.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

constexpr const char* kCsvColumns[] = {"label", "group",      "order",
                                       "m",     "n",          "gC",
                                       "gF",    "components", "dimension"};

}  // namespace

Json record_to_json(const FamilyRecord& rec) {
  Json j = Json::object();
  j["label"] = rec.label;
  j["group"] = rec.group_name;
  j["order"] = rec.group_order;
  j["m"] = rec.fiber_sig.branching_str();
  j["n"] = rec.base_sig.branching_str();
  j["gC"] = rec.g_C;
  j["gF"] = rec.g_F;
  j["pairs"] = rec.num_pairs;
  j["components"] = rec.num_components;
  j["components_exact"] = rec.components_exact;
  j["dimension"] = rec.component_dimension;
  j["extra"] = rec.extra;
  Json reps = Json::array();
  for (std::size_t i = 0; i < rec.class_representatives.size(); ++i) {
    Json r = Json::object();
    r["fiber"] = rec.class_representatives[i].fiber_vec.str();
    r["base"] = rec.class_representatives[i].base_vec.str();
    if (i < rec.class_sizes.size())
      r["class_size"] = rec.class_sizes[i];
    reps.push_back(std::move(r));
  }
  j["representatives"] = std::move(reps);
  return j;
}

Json record_to_json(const KnownExampleCheck& check, const std::string& label) {
  Json j = Json::object();
  j["label"] = label;
  j["group"] = check.group_name;
  j["order"] = check.group_order;
  j["m"] = check.fiber_sig.branching_str();
  j["n"] = check.base_sig.branching_str();
  j["gC"] = check.g_C;
  j["gF"] = check.g_F;
  j["valid"] = check.valid;
  if (!check.detail.empty()) j["detail"] = check.detail;
  Json reps = Json::array();
  Json r = Json::object();
  r["fiber"] = check.fiber_str;
  r["base"] = check.base_str;
  reps.push_back(std::move(r));
  j["representatives"] = std::move(reps);
  return j;
}

Json Report::to_json() const {
  Json j = Json::object();
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["catalog"] = catalog;
  j["timing_seconds"] = timing_seconds;
  j["warnings"] = warnings;
  Json recs = Json::array();
  for (const Json& r : records) recs.push_back(r);
  j["records"] = std::move(recs);
  j["details"] = details;
  return j;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;  // field or row content pending
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      if (any || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
      }
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string Report::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < std::size(kCsvColumns); ++i) {
    if (i) out += ',';
    out += kCsvColumns[i];
  }
  out += '\n';
  for (const Json& rec : records) {
    for (std::size_t i = 0; i < std::size(kCsvColumns); ++i) {
      if (i) out += ',';
      out += csv_escape(cell(rec, kCsvColumns[i]));
    }
    out += '\n';
  }
  return out;
}

std::string Report::to_table() const {
  std::ostringstream out;
  out << "# " << command << "\n";
  out << "# catalog: " << catalog << "\n";
  char timing[64];
  std::snprintf(timing, sizeof(timing), "%.2f", timing_seconds);
  out << "# timing: " << timing << " s\n";

  const bool has_valid = std::any_of(
      records.begin(), records.end(),
      [](const Json& r) { return r.contains("valid"); });
  bool has_upper_bound = false;

  std::vector<std::string> header = {"label", "group", "order",      "m",
                                     "n",     "gC",    "gF",         "pairs",
                                     "components", "dimension"};
  if (has_valid) header.push_back("valid");
  std::vector<std::vector<std::string>> body;
  for (const Json& rec : records) {
    std::vector<std::string> row;
    for (const std::string& col : header) {
      std::string text = cell(rec, col.c_str());
      if (col == "components" && !text.empty() &&
          rec.contains("components_exact") &&
          !rec.at("components_exact").get<bool>()) {
        text = "<=" + text;  // upper bound, see footnote
        has_upper_bound = true;
      }
      row.push_back(std::move(text));
    }
    body.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : body)
    for (std::size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << "  ";
      out << row[i];
      if (i + 1 < row.size())
        out << std::string(width[i] - row[i].size(), ' ');
    }
    out << "\n";
  };
  emit(header);
  for (const auto& row : body) emit(row);
  if (records.empty()) out << "(no records)\n";

  for (const Json& rec : records) {
    if (!rec.contains("representatives")) continue;
    const Json& reps = rec.at("representatives");
    if (reps.empty()) continue;
    out << "\n" << cell(rec, "label") << " (" << cell(rec, "group") << ") "
        << (rec.contains("valid") ? "verified building data"
                                  : "class representatives")
        << ":\n";
    for (std::size_t i = 0; i < reps.size(); ++i) {
      out << "  class " << (i + 1);
      if (reps[i].contains("class_size"))
        out << " (size " << reps[i].at("class_size").get<long long>() << ")";
      out << ": fiber " << reps[i].at("fiber").get<std::string>() << ", base "
          << reps[i].at("base").get<std::string>() << "\n";
    }
  }

  if (details.contains("audit")) {
    const Json& audit = details.at("audit");
    out << "\ncandidate audit (" << audit.size() << " numeric candidates):\n";
    std::vector<std::pair<std::string, int>> fates;
    for (const Json& entry : audit) {
      const std::string fate = entry.at("fate").get<std::string>();
      auto it = std::find_if(fates.begin(), fates.end(),
                             [&](const auto& p) { return p.first == fate; });
      if (it == fates.end())
        fates.emplace_back(fate, 1);
      else
        ++it->second;
    }
    for (const auto& [fate, count] : fates)
      out << "  " << fate << ": " << count << "\n";
  }

  if (details.contains("derivations")) {
    out << "\nderivation replays:\n";
    for (const Json& check : details.at("derivations")) {
      out << "  " << (check.at("holds").get<bool>() ? "PASS" : "FAIL") << " ["
          << check.at("family").get<std::string>() << "] "
          << check.at("claim").get<std::string>() << "\n";
    }
  }

  for (const std::string& w : warnings) out << "\nwarning: " << w << "\n";
  if (has_upper_bound)
    out << "\nnote: components marked <= are upper bounds; the implemented "
           "move set may refine the true equivalence for nonabelian "
           "groups.\n";
  return out.str();
}

std::string Report::render(const std::string& format) const {
  if (format == "json") return to_json().dump(2) + "\n";
  if (format == "csv") return to_csv();
  if (format == "table") return to_table();
  throw std::invalid_argument("unknown format '" + format +
                              "' (expected json, csv, or table)");
}

Report report_from_abelian(const AbelianClassification& result,
                           int max_curve_genus) {
  Report report;
  report.catalog =
      "every abelian deck group with base curve genus g_C <= " +
      std::to_string(max_curve_genus) + " (group order 2(g_C - 1))";
  for (const FamilyRecord& rec : result.families)
    report.records.push_back(record_to_json(rec));
  Json audit = Json::array();
  for (const CandidateAudit& ca : result.audit) {
    Json entry = Json::object();
    entry["m"] = ca.candidate.m.branching_str();
    entry["order"] = ca.candidate.group_order;
    entry["fate"] = to_string(ca.fate);
    Json groups = Json::array();
    for (const GroupAudit& ga : ca.groups) {
      Json gj = Json::object();
      gj["group"] = ga.group_name;
      gj["fiber_vector"] = ga.has_fiber_vector;
      gj["base_vector"] = ga.has_base_vector;
      gj["free_pair"] = ga.has_free_pair;
      groups.push_back(std::move(gj));
    }
    entry["groups"] = std::move(groups);
    entry["survivors"] = ca.surviving_groups;
    audit.push_back(std::move(entry));
  }
  report.details["audit"] = std::move(audit);
  return report;
}

Report report_from_search(const NonabelianSearchResult& result) {
  Report report;
  report.catalog =
      "abelian types plus curated nonabelian families (symmetric, "
      "alternating, dihedral, dicyclic, and their small direct products) up "
      "to order " +
      std::to_string(result.catalog.max_order()) + "; " +
      std::to_string(result.catalog.size()) + " groups";
  report.warnings = result.catalog.warnings();
  for (const FamilyRecord& rec : result.families) {
    report.records.push_back(record_to_json(rec));
    if (rec.extra)
      report.warnings.push_back(
          "row " + rec.label + " (" + rec.group_name + ", m=" +
          rec.fiber_sig.branching_str() + ", n=" +
          rec.base_sig.branching_str() +
          ") is a candidate row beyond the known table");
  }
  report.details["catalog_size"] = result.catalog.size();
  return report;
}

Report report_from_verification(const KnownExampleVerification& result) {
  Report report;
  report.catalog =
      "the six known nonabelian constructions, from explicit permutation "
      "data";
  for (std::size_t i = 0; i < result.checks.size(); ++i) {
    const KnownExampleCheck& check = result.checks[i];
    report.records.push_back(
        record_to_json(check, "K" + std::to_string(i + 1)));
    if (!check.valid)
      report.warnings.push_back("known construction " + check.group_name +
                                " failed validation: " + check.detail);
  }
  return report;
}

Report report_from_orbit(const FamilyRecord& record) {
  Report report;
  report.catalog = "single pipeline: (" + record.group_name + ", " +
                   record.fiber_sig.str() + ", " + record.base_sig.str() +
                   ")";
  report.records.push_back(record_to_json(record));
  return report;
}

void append_derivations(Report& report,
                        const std::vector<DerivationCheck>& checks) {
  Json arr = Json::array();
  for (const DerivationCheck& check : checks) {
    Json j = Json::object();
    j["family"] = check.family;
    j["claim"] = check.claim;
    j["holds"] = check.holds;
    if (!check.detail.empty()) j["detail"] = check.detail;
    arr.push_back(std::move(j));
    if (!check.holds)
      report.warnings.push_back("derivation replay failed [" + check.family +
                                "] " + check.claim + ": " + check.detail);
  }
  report.details["derivations"] = std::move(arr);
}

namespace {

bool schema_fail(std::string* error, const std::string& path,
                 const std::string& reason) {
  if (error) *error = path + ": " + reason;
  return false;
}

bool validate_node(const Json& doc, const Json& schema,
                   const std::string& path, std::string* error) {
  if (schema.is_boolean()) {
    return schema.get<bool>() ||
           schema_fail(error, path, "value not allowed here");
  }
  if (!schema.is_object())
    return schema_fail(error, path, "malformed schema node");

  if (schema.contains("type")) {
    const std::string type = schema.at("type").get<std::string>();
    const bool ok = (type == "object" && doc.is_object()) ||
                    (type == "array" && doc.is_array()) ||
                    (type == "string" && doc.is_string()) ||
                    (type == "integer" && doc.is_number_integer()) ||
                    (type == "number" && doc.is_number()) ||
                    (type == "boolean" && doc.is_boolean()) ||
                    (type == "null" && doc.is_null());
    if (!ok)
      return schema_fail(error, path,
                         "expected type " + type + ", got " +
                             std::string(doc.type_name()));
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const Json& allowed : schema.at("enum"))
      if (doc == allowed) hit = true;
    if (!hit)
      return schema_fail(error, path, "value " + doc.dump() + " not in enum");
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const Json& key : schema.at("required"))
        if (!doc.contains(key.get<std::string>()))
          return schema_fail(
              error, path, "missing required key " + key.get<std::string>());
    }
    const Json* props =
        schema.contains("properties") ? &schema.at("properties") : nullptr;
    for (const auto& [key, value] : doc.items()) {
      const std::string sub = path + "." + key;
      if (props && props->contains(key)) {
        if (!validate_node(value, props->at(key), sub, error)) return false;
      } else if (schema.contains("additionalProperties")) {
        const Json& extra = schema.at("additionalProperties");
        if (extra.is_boolean()) {
          if (!extra.get<bool>())
            return schema_fail(error, sub, "unexpected key");
        } else if (!validate_node(value, extra, sub, error)) {
          return false;
        }
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!validate_node(doc[i], schema.at("items"),
                         path + "[" + std::to_string(i) + "]", error))
        return false;
    }
  }
  return true;
}

// True when rec carries every field of row with an equal value.
bool record_matches_row(const Json& rec, const Json& row) {
  for (const auto& [key, value] : row.items()) {
    if (!rec.contains(key) || rec.at(key) != value) return false;
  }
  return true;
}

std::string first_difference(const Json& rec, const Json& row) {
  for (const auto& [key, value] : row.items()) {
    if (!rec.contains(key))
      return "missing field " + key;
    if (rec.at(key) != value)
      return key + " = " + rec.at(key).dump() + ", golden expects " +
             value.dump();
  }
  return "no difference";
}

const Json& golden_rows(const Json& golden) {
  if (!golden.is_object() || !golden.contains("records") ||
      !golden.at("records").is_array())
    throw std::invalid_argument(
        "golden table must be an object with a records array");
  return golden.at("records");
}

}  // namespace

bool matches_schema(const Json& doc, const Json& schema, std::string* error) {
  return validate_node(doc, schema, "$", error);
}

bool matches_golden_exact(const std::vector<Json>& records, const Json& golden,
                          std::string* error) {
  const Json& rows = golden_rows(golden);
  if (records.size() != rows.size()) {
    if (error)
      *error = "expected " + std::to_string(rows.size()) + " records, got " +
               std::to_string(records.size());
    return false;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!record_matches_row(records[i], rows[i])) {
      if (error)
        *error = "record " + std::to_string(i + 1) + ": " +
                 first_difference(records[i], rows[i]);
      return false;
    }
  }
  return true;
}

bool matches_golden_subset(const std::vector<Json>& records,
                           const Json& golden, std::string* error) {
  for (const Json& row : golden_rows(golden)) {
    const bool hit = std::any_of(
        records.begin(), records.end(),
        [&](const Json& rec) { return record_matches_row(rec, row); });
    if (!hit) {
      if (error) *error = "no record matches golden row " + row.dump();
      return false;
    }
  }
  return true;
}

}  // namespace isoprod
