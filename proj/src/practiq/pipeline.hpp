#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "practiq/corpus_io.hpp"
#include "practiq/database.hpp"
#include "practiq/provider.hpp"
#include "practiq/types.hpp"

namespace practiq::pipeline {

struct GenConfig {
  std::filesystem::path db_dir;
  std::filesystem::path out_path;   // JSONL; existing content is resumed, not duplicated
  std::filesystem::path workdir;    // scratch space; empty -> system temp
  std::uint64_t seed = 0;
  double helpful_fraction = 0.3;    // share of eligible ambiguous examples answered directly
  int jobs = 1;
  std::vector<CategoryLabel> categories;  // empty -> all nine
  long quota_per_category = -1;           // -1 -> unlimited
  std::string provider_spec = "mock";
};

struct CategoryStats {
  long attempted = 0;
  long emitted = 0;
  std::map<std::string, long> skipped;  // skip-reason token -> count
};

struct GenStats {
  std::map<CategoryLabel, CategoryStats> per_category;
  long total_attempted = 0;
  long total_emitted = 0;
  long resumed_existing = 0;
  std::string to_json() const;
};

struct GenResult {
  std::vector<Conversation> conversations;  // newly emitted by this run
  GenStats stats;
};

/// Stage 1 -> 2 -> 3 per example with the fixed gate order
/// executability -> mention rule -> binary category check. Per-example
/// failures become skip statistics; only corpus-level I/O is fatal.
GenResult run_generation(const std::vector<SchemaDef>& catalog,
                         const std::vector<CorpusExample>& examples, const GenConfig& config,
                         provider::Provider& provider);

/// Quality-control gate: true iff the provider classifies the (question,
/// mutated schema) pair into the designed category. Missing result tags
/// count as rejections.
bool gate_binary_category(const Conversation& conversation, provider::Provider& provider,
                          const std::string& schema_md);

// ---------------------------------------------------------------------------
// Validation (used by the `validate` command and the acceptance suite)
// ---------------------------------------------------------------------------

struct ValidationIssue {
  std::string conversation_id;
  std::string what;
};

struct ValidationReport {
  long checked = 0;
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_json() const;
};

/// Reconstructs each conversation's mutated database (checkout + deltas),
/// re-executes final and helpful SQL, and re-checks the mechanical
/// per-category invariants plus turn order and the mention rule.
ValidationReport validate_dataset(const std::vector<Conversation>& dataset,
                                  const std::filesystem::path& db_dir,
                                  const std::filesystem::path& workdir);

}  // namespace practiq::pipeline
