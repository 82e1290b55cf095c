#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gconj/problem.hpp"
#include "gconj/verdict.hpp"

namespace gconj {

// Text-format problem ingestion.  A file is a sequence of sections
//   [group NAME] / [morphism NAME] / [target NAME] / [problem NAME]
// of key=value lines; words are generator names with ^-1 (or ^k) joined by
// spaces, matrices are semicolon-separated rows, semidirect elements are
// written t^R : WORD.  See tests/data for worked examples.

struct ParseError {
  int line = 0;
  int column = 0;
  std::string message;
};

struct ProblemFile {
  struct Entry {
    std::string name;
    Kind kind = Kind::GCP;
    std::string group_name;
    std::string morphism_name;  // empty when absent
    std::string target_name;    // empty when absent
    GroupPtr group;
    std::optional<Morphism> morphism;
    Element subject;
    std::optional<Element> subject2;
    std::optional<Target> target;
    std::string method = "auto";  // auto | reduction | separability
    std::optional<long long> max_exponent, ball_radius, max_quotient_size, max_steps;

    Entry(Element subj) : subject(std::move(subj)) {}
    ProblemInstance instance() const;
  };

  std::vector<std::pair<std::string, GroupPtr>> groups;
  std::vector<std::pair<std::string, Morphism>> morphisms;
  std::vector<std::pair<std::string, Target>> targets;
  std::vector<Entry> problems;

  bool operator==(const ProblemFile& other) const;
};

struct ParseResult {
  std::optional<ProblemFile> file;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty() && file.has_value(); }
};

ParseResult parse_problem_text(const std::string& text);
ParseResult parse_problem_path(const std::string& path);

// Canonical text form; parsing it back yields an equal model.
std::string serialize(const ProblemFile& file);

// A structural fingerprint of a handle (family, generators, relation data),
// usable to compare groups across independent parses.
std::string group_structure_key(const GroupPtr& g);

struct RunOptions {
  Budget budget;
  bool json = false;
  bool certify = false;
};

struct ProblemRecord {
  std::string name;
  Kind kind = Kind::GCP;
  bool unsupported = false;
  std::string error;  // set for unsupported records
  std::optional<Verdict> verdict;
  std::optional<bool> certified;

  std::string to_json() const;
  std::string to_text() const;
};

std::vector<ProblemRecord> run_problems(const ProblemFile& file, const RunOptions& options);

// Full report (one line per problem plus a trailing summary unless json).
std::string render_report(const std::vector<ProblemRecord>& records, const RunOptions& options);

}  // namespace gconj
