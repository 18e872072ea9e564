#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "practiq/database.hpp"
#include "practiq/provider.hpp"
#include "practiq/types.hpp"

namespace practiq::bench {

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct FailureCounts {
  int hallucination = 0;
  int incorrect_sql = 0;
  int partially_correct = 0;
};

struct EvalReport {
  std::string task;  // "classification" | "sql_prediction"
  std::map<CategoryLabel, int> n_per_category;
  std::map<CategoryLabel, int> correct_per_category;
  std::map<CategoryLabel, double> per_category_accuracy;
  double overall = 0.0;                       // micro (weighted by n)
  double overall_excluding_answerable = 0.0;  // micro over mutated categories
  double macro_average = 0.0;                 // unweighted category mean
  double macro_average_excluding_answerable = 0.0;
  // classification only: gold x predicted counts over the nine tokens
  int confusion[kCategoryCount][kCategoryCount] = {};
  std::map<CategoryLabel, int> invalid_predictions;  // unparseable outputs (counted wrong)
  // sql prediction only: Appendix-style taxonomy over failed predictions
  std::map<CategoryLabel, FailureCounts> failure_taxonomy;

  void finalize();  // fills accuracy/average fields from the counters
  std::string to_json() const;
  std::string confusion_csv() const;
};

enum class FailureKind { Hallucination, IncorrectSql, PartiallyCorrect };

// ---------------------------------------------------------------------------
// Prompt-side building blocks
// ---------------------------------------------------------------------------

/// First `per_column` distinct values per column, rowid order.
std::map<ColumnRef, std::vector<std::string>> collect_value_samples(corpus::DatabaseHandle& db,
                                                                    const SchemaDef& schema,
                                                                    int per_column = 3);

/// One "## table" section per table with a Column/Type/Example-values row per
/// column, in schema order. Deterministic for identical inputs.
std::string render_schema_markdown(
    const SchemaDef& schema, const std::map<ColumnRef, std::vector<std::string>>& value_samples);

/// Renders retrieved relevant values as `"table.column": ["v", ...]` lines.
std::string render_relevant_values(const std::map<ColumnRef, std::vector<std::string>>& values);

/// Execution results in the tabular form prompts embed (header, separator,
/// one line per row; capped upstream at the 30-row result limit).
std::string render_execution_results(const ResultTable& table);

struct Shot {
  CategoryLabel category = CategoryLabel::Answerable;
  std::string user_message;
  std::string assistant_message;  // step-by-step thoughts + <result> token
};

/// Hand-curated exemplars, three per category.
const std::vector<Shot>& builtin_shots();

/// Nine-way classification request: system prompt with all category
/// definitions, k exemplars per category as alternating messages, then the
/// question. Throws Error(InsufficientShots) when `shots` cannot supply k
/// exemplars for some category.
provider::ProviderRequest build_classification_prompt(const std::string& schema_md,
                                                      const std::string& question, int k,
                                                      const std::vector<Shot>& shots);

// ---------------------------------------------------------------------------
// Benchmarks
// ---------------------------------------------------------------------------

enum class ValueMode { LexicalOnly, LexicalAndOracle };

struct BenchConfig {
  int k = 0;
  ValueMode value_mode = ValueMode::LexicalOnly;
  std::filesystem::path db_dir;
  std::filesystem::path workdir;
  std::string strategy = "single";  // "single" | "dinsql" (opaque pluggable prompt)
  bool order_sensitive = false;     // execution-accuracy row order mode
  // feed each item's gold answer to the provider as the echo-mock reference
  bool pass_reference = true;
};

EvalReport run_classification(const std::vector<Conversation>& dataset,
                              provider::Provider& provider, const BenchConfig& config);

EvalReport run_sql_prediction(const std::vector<Conversation>& dataset,
                              provider::Provider& provider, const BenchConfig& config);

/// True iff `pred_sql` executes and its result matches `gold_sql`'s under
/// canonicalization: rows as multisets (unless order_sensitive), columns
/// positional, numbers within 1e-6 relative, text exact, NULL == NULL only.
/// Any prediction failure maps to false, never an exception.
bool execution_accuracy(const std::string& pred_sql, const std::string& gold_sql,
                        corpus::DatabaseHandle& db, bool order_sensitive = false);

/// Appendix-style failure taxonomy for a prediction against a mutated schema:
/// Hallucination when the prediction references any column absent from the
/// schema (including the removed one); PartiallyCorrect when an
/// ambiguous-column prediction uses one of the introduced candidates;
/// IncorrectSql otherwise. Total over all inputs.
FailureKind classify_failure(const std::string& pred_sql, const SchemaDef& mutated_schema,
                             const MutationRecord& record);

/// First fenced code block if present, else the longest substring starting
/// with SELECT.
std::string extract_sql_from_response(const std::string& text);

}  // namespace practiq::bench
