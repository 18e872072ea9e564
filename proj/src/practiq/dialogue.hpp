#pragma once

// Stages 2-3: templated clarification requests, reverse-generated user
// clarifications, helpful SQL covering all interpretations, conversation
// refinement, and execution-result explanations.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "practiq/database.hpp"
#include "practiq/provider.hpp"
#include "practiq/types.hpp"

namespace practiq::dialogue {

inline constexpr const char* kTemplateVersion = "templates-v1";

/// Category-specific template instantiated with record fields. For the
/// ambiguous-column categories the two candidate columns appear verbatim.
std::string build_clarification_request(const MutationRecord& record);

struct ClarifiedChoice {
  std::string sql;
  std::string target;
  std::size_t index = 0;
};

/// Seeded pick among the candidates that (still) execute on the mutated
/// database. Empty optional when none executes; the example is discarded.
std::optional<ClarifiedChoice> select_clarified_sql(const MutationRecord& record,
                                                    corpus::DatabaseHandle& db,
                                                    std::mt19937_64& rng);

struct DraftConversation {
  std::string schema_md;  // mutated schema
  CategoryLabel category = CategoryLabel::Answerable;
  std::string initial_question;
  std::string clarification_request;
  std::string final_sql;
  std::string chosen_target;
  std::vector<std::string> rejected_targets;  // non-chosen candidates
};

/// Fills the empty user clarification turn from the surrounding conversation.
/// Throws Error(ProviderRefusal) when the provider cannot produce one.
std::string reverse_generate_clarification(const DraftConversation& draft,
                                           provider::Provider& provider);

/// Mention rule: the clarification must name the committed target and neither
/// rejected candidate. Case-insensitive substring matching after whitespace
/// (and underscore) normalization.
bool mention_rule_ok(const std::string& clarification, const std::string& chosen_target,
                     const std::vector<std::string>& rejected_targets);

/// One SQL covering all interpretations (Ambiguous SELECT/WHERE column only).
/// SELECT case: the projection carries both candidate columns with the
/// original aggregate shape. WHERE case: the predicate widens to a
/// disjunction over both candidates, which are also appended as projection
/// discriminators. Empty optional when the construction does not execute;
/// callers fall back to the clarification flow.
std::optional<std::string> build_helpful_sql(const MutationRecord& record,
                                             corpus::DatabaseHandle& db);

/// "U: ... / A: ..." transcript used inside prompt payloads.
std::string conversation_transcript(const std::vector<Turn>& turns);

/// Rephrases the user clarification turn for naturalness. Only text fields
/// change; SQL strings, category and mutation data are untouched. On provider
/// refusal the conversation keeps its unrefined text and
/// provenance.refined flips to false.
void refine_conversation(Conversation& conversation, provider::Provider& provider,
                         const std::string& schema_md);

/// At most two sentences describing the (<=30-row) execution snapshot. On
/// provider refusal falls back to "The query returned N rows."
std::string explain_results(const Conversation& conversation, provider::Provider& provider,
                            const std::string& schema_md);

/// Three-turn conversation for an already-answerable example. Empty optional
/// when the gold SQL does not execute.
std::optional<Conversation> assemble_answerable(const CorpusExample& example,
                                                corpus::DatabaseHandle& db,
                                                provider::Provider& provider);

}  // namespace practiq::dialogue
