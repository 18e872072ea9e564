#pragma once

#include <map>
#include <string>
#include <vector>

#include "practiq/database.hpp"
#include "practiq/types.hpp"

namespace practiq::valuelink {

struct RetrievalConfig {
  double threshold = 0.6;
  int top_k = 4;              // values kept per column
  int max_ngram_tokens = 5;   // question n-grams of 1..N tokens
  int max_values_per_column = 2000;
};

/// Distinct text cell values per column, captured at build time.
struct ValueIndex {
  std::map<ColumnRef, std::vector<std::string>> values;
};

/// Indexes text-typed columns only; numeric columns would produce spurious
/// fuzzy hits.
ValueIndex build_value_index(corpus::DatabaseHandle& db, const SchemaDef& schema,
                             const RetrievalConfig& config = {});

/// Similarity between two strings after fuzzy normalization:
/// max(normalized edit similarity, character-trigram Jaccard).
/// Symmetric; 1.0 on exact match.
double similarity(const std::string& a, const std::string& b);

/// Per-column values whose similarity to any question n-gram reaches the
/// threshold; top-k per column by score, ties broken lexicographically.
/// Pure and deterministic.
std::map<ColumnRef, std::vector<std::string>> retrieve_values(const std::string& question,
                                                              const ValueIndex& index,
                                                              const RetrievalConfig& config = {});

/// Ground-truth relevant values implied by a mutation record: the introduced
/// ambiguous values, the surviving alternates for a removed filter value, or
/// the vaguified literal. Empty for categories whose semantics do not hinge
/// on cell values.
std::map<ColumnRef, std::vector<std::string>> oracle_values(const MutationRecord& record);

}  // namespace practiq::valuelink
