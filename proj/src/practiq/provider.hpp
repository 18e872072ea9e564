#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "practiq/errors.hpp"
#include "practiq/types.hpp"

namespace practiq::provider {

enum class ProviderTask {
  SynonymColumns,
  SimilarValues,
  VaguifyQuestion,
  DisconnectedTables,
  FillClarification,
  Refine,
  ExplainResults,
  BinaryCategoryCheck,
  NineWayClassify,
  PredictSql,
  RankCandidates,
};

const char* to_token(ProviderTask t);

struct Message {
  std::string role;  // "user" | "assistant"
  std::string content;
};

struct DecodeParams {
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 2048;
};

struct ProviderRequest {
  ProviderTask task = ProviderTask::SynonymColumns;
  std::string system_prompt;
  std::vector<Message> messages;
  DecodeParams decode;
  // Oracle hint for echo-style mocks (e.g. the gold label during benchmark
  // sanity runs). Never serialized onto the wire; live adapters ignore it.
  std::string reference;
};

struct ProviderResponse {
  std::string text;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  std::string provider_id;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse complete(const ProviderRequest& request) = 0;
  virtual std::string id() const = 0;
};

/// Inner text of the first complete <tag>...</tag> span, trimmed. With nested
/// duplicates the first span to close wins. Throws Error(TagMissing).
std::string parse_tagged(const std::string& text, const std::string& tag);
std::optional<std::string> try_parse_tagged(const std::string& text, const std::string& tag);

// ---------------------------------------------------------------------------
// Request builders. The user payload carries the structured inputs in the
// XML-tag sections the prompts describe, so mocks and live models read the
// same wire format.
// ---------------------------------------------------------------------------

ProviderRequest make_synonym_columns_request(const std::string& schema_md, const ColumnRef& column,
                                             const std::string& question, const std::string& sql);
ProviderRequest make_similar_values_request(const std::string& schema_md, const ColumnRef& column,
                                            const std::string& value, const std::string& question,
                                            const std::string& sql);
ProviderRequest make_vaguify_request(const std::string& schema_md, const ColumnRef& column,
                                     const std::string& value, const std::string& question);
ProviderRequest make_disconnected_tables_request(const std::string& schema_md,
                                                 const std::string& db_id);
ProviderRequest make_fill_clarification_request(const std::string& schema_md,
                                                const std::string& conversation_text,
                                                CategoryLabel category,
                                                const std::string& chosen_target);
ProviderRequest make_refine_request(const std::string& schema_md,
                                    const std::string& conversation_text,
                                    const std::string& clarification_response);
ProviderRequest make_explain_results_request(const std::string& schema_md,
                                             const std::string& conversation_text,
                                             const std::string& execution_results_text);
ProviderRequest make_binary_check_request(const std::string& schema_md, CategoryLabel category,
                                          const std::string& question);
ProviderRequest make_rank_candidates_request(const std::vector<std::string>& candidates);

// ---------------------------------------------------------------------------
// Response parsers shared by callers.
// ---------------------------------------------------------------------------

/// Parses a JSON (or python-style single-quoted) list of {table, column}
/// objects out of the <result/> span. Empty list -> Error(ProviderRefusal).
std::vector<ColumnRef> parse_synonym_columns(const std::string& response_text);

/// Parses a list of strings from the <result/> span.
std::vector<std::string> parse_string_list(const std::string& response_text);

struct DisconnectedTables {
  std::vector<TableDef> tables;
  std::string question;
};
DisconnectedTables parse_disconnected_tables(const std::string& response_text);

// ---------------------------------------------------------------------------
// Factory
// ---------------------------------------------------------------------------

/// spec: "mock" | "mock-answerable" | "live". Live configuration comes from
/// PRACTIQ_LLM_ENDPOINT / PRACTIQ_LLM_MODEL / PRACTIQ_LLM_KEY.
std::unique_ptr<Provider> make_provider(const std::string& spec, std::uint64_t seed);

}  // namespace practiq::provider
