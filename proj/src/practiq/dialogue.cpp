#include "practiq/dialogue.hpp"

#include <algorithm>

#include "practiq/bench.hpp"
#include "practiq/sqlkit.hpp"
#include "practiq/strutil.hpp"

namespace practiq::dialogue {

using strutil::humanize_identifier;

// ---------------------------------------------------------------------------
// Clarification request templates
// ---------------------------------------------------------------------------

std::string build_clarification_request(const MutationRecord& record) {
  if (record.category == CategoryLabel::Answerable)
    throw Error(Errc::InvalidArgument, "answerable conversations have no clarification request");

  auto literal = [&] { return record.target.literal.value_or(""); };
  switch (record.category) {
    case CategoryLabel::AmbiguousSelectColumn: {
      const std::string& c1 = record.introduced_columns.at(0).column;
      const std::string& c2 = record.introduced_columns.at(1).column;
      return "I find two conflicting information in the data. Which one would you like to know "
             "about? " +
             c1 + " or " + c2;
    }
    case CategoryLabel::AmbiguousWhereColumn: {
      const std::string& c1 = record.introduced_columns.at(0).column;
      const std::string& c2 = record.introduced_columns.at(1).column;
      return "I see '" + literal() + "' in two columns: " + c1 + " and " + c2 +
             ". Can you clarify which you need?";
    }
    case CategoryLabel::AmbiguousValuesWithinColumn: {
      const std::string& v1 = record.introduced_values.at(0);
      const std::string& v2 = record.introduced_values.at(1);
      return "The value '" + literal() + "' matches multiple " +
             humanize_identifier(record.target.column.column) + " values including '" + v1 +
             "' and '" + v2 + "'. Could you please specify which one you need?";
    }
    case CategoryLabel::AmbiguousFilterCriteria:
      return "That criteria could be interpreted in multiple ways. Could you clarify which "
             "specific " +
             humanize_identifier(record.target.column.column) + " value you mean?";
    case CategoryLabel::NonexistentSelectColumn:
      return "The " + humanize_identifier(record.target.column.column) +
             " is not available in the schema.";
    case CategoryLabel::NonexistentWhereColumn:
      return "There is no data on " + humanize_identifier(record.target.column.column) +
             " in the database.";
    case CategoryLabel::NonexistentFilterValue:
      return "The " + humanize_identifier(record.target.column.column) + " \"" + literal() +
             "\" does not exist in the " + humanize_identifier(record.target.column.table) +
             " table. Could you please ask about another " +
             humanize_identifier(record.target.column.column) + "?";
    case CategoryLabel::UnsupportedJoin: {
      std::string new_table =
          record.introduced_tables.empty() ? "new" : record.introduced_tables.front();
      std::string original_table =
          record.candidate_targets.empty() ? "original" : record.candidate_targets.front();
      return "The " + new_table + " and " + original_table +
             " tables are not joined in the schema, so the original query cannot be executed. "
             "Could you please rephrase your question?";
    }
    case CategoryLabel::Answerable: break;
  }
  throw Error(Errc::InvalidArgument, "unhandled category");
}

// ---------------------------------------------------------------------------
// Clarified SQL selection
// ---------------------------------------------------------------------------

std::optional<ClarifiedChoice> select_clarified_sql(const MutationRecord& record,
                                                    corpus::DatabaseHandle& db,
                                                    std::mt19937_64& rng) {
  std::vector<std::size_t> executing;
  for (std::size_t i = 0; i < record.clarified_sql_candidates.size(); ++i)
    if (sqlkit::executes_ok(db, record.clarified_sql_candidates[i])) executing.push_back(i);
  if (executing.empty()) return std::nullopt;
  std::size_t pick = executing[rng() % executing.size()];
  ClarifiedChoice choice;
  choice.sql = record.clarified_sql_candidates[pick];
  choice.index = pick;
  choice.target =
      pick < record.candidate_targets.size() ? record.candidate_targets[pick] : std::string{};
  return choice;
}

// ---------------------------------------------------------------------------
// Reverse generation + mention rule
// ---------------------------------------------------------------------------

std::string conversation_transcript(const std::vector<Turn>& turns) {
  std::string out;
  for (const auto& t : turns) {
    out += t.role == TurnRole::User ? "U: " : "A: ";
    out += t.kind == TurnKind::FinalSql && t.sql ? *t.sql : t.text;
    out += "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string reverse_generate_clarification(const DraftConversation& draft,
                                           provider::Provider& provider) {
  std::string transcript = "U: " + draft.initial_question + "\nA: " +
                           draft.clarification_request +
                           "\nU: empty_user_clarification_response\nA: " + draft.final_sql;
  auto req = provider::make_fill_clarification_request(draft.schema_md, transcript,
                                                       draft.category, draft.chosen_target);
  std::string text = provider::parse_tagged(provider.complete(req).text, "result");
  if (strutil::trim(text).empty())
    throw Error(Errc::ProviderRefusal, "empty clarification response");
  return text;
}

bool mention_rule_ok(const std::string& clarification, const std::string& chosen_target,
                     const std::vector<std::string>& rejected_targets) {
  if (!chosen_target.empty() && !strutil::contains_normalized(clarification, chosen_target))
    return false;
  for (const auto& rejected : rejected_targets) {
    if (rejected.empty()) continue;
    // a rejected candidate that is a substring of the chosen one is fine
    if (strutil::contains_normalized(chosen_target, rejected)) continue;
    if (strutil::contains_normalized(clarification, rejected)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Helpful SQL
// ---------------------------------------------------------------------------

std::optional<std::string> build_helpful_sql(const MutationRecord& record,
                                             corpus::DatabaseHandle& db) {
  if (!is_ambiguous_column_category(record.category))
    throw Error(Errc::InvalidArgument,
                "helpful SQL applies to the ambiguous column categories only");
  if (record.introduced_columns.size() != 2)
    throw Error(Errc::InvalidArgument, "expected exactly two candidate columns");

  sqlkit::SqlTree gold = sqlkit::parse(record.gold_sql);
  // resolve against the pre-mutation shape: the removed column is still the
  // one referenced by the gold SQL
  SchemaDef schema = corpus::introspect_schema(db, record.db_id);
  {
    TableDef* table = nullptr;
    for (auto& t : schema.tables)
      if (strutil::iequals(t.name, record.target.column.table)) table = &t;
    if (table) {
      ColumnDef removed;
      removed.name = record.target.column.column;
      table->columns.push_back(removed);
    }
  }

  const ColumnRef& c1 = record.introduced_columns[0];
  const ColumnRef& c2 = record.introduced_columns[1];
  std::string sql;
  try {
    if (record.category == CategoryLabel::AmbiguousSelectColumn) {
      sqlkit::SqlTree first = sqlkit::rewrite(
          gold, sqlkit::RewriteSpec::substitute_column(record.target.column, c1), schema);
      sqlkit::SqlTree second =
          sqlkit::rewrite(first, sqlkit::RewriteSpec::substitute_column(c1, c2), schema);
      // mirror every projection item that the substitution touched, keeping
      // the aggregate shape, so both interpretations come back side by side
      sqlkit::SqlTree combined = first;
      for (std::size_t i = 0; i < first.items.size() && i < second.items.size(); ++i)
        if (!(first.items[i] == second.items[i])) combined.items.push_back(second.items[i]);
      if (combined.items.size() == first.items.size())
        combined = sqlkit::rewrite(first, sqlkit::RewriteSpec::add_projection({c2}), schema);
      sql = sqlkit::render(combined);
    } else {
      sqlkit::SqlTree widened = sqlkit::rewrite(
          gold, sqlkit::RewriteSpec::widen_predicate(record.target.column, {c1, c2}), schema);
      sqlkit::SqlTree with_discriminators =
          sqlkit::rewrite(widened, sqlkit::RewriteSpec::add_projection({c1, c2}), schema);
      sql = sqlkit::render(with_discriminators);
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  if (!sqlkit::executes_ok(db, sql)) return std::nullopt;
  return sql;
}

// ---------------------------------------------------------------------------
// Refinement
// ---------------------------------------------------------------------------

void refine_conversation(Conversation& conversation, provider::Provider& provider,
                         const std::string& schema_md) {
  Turn* response = nullptr;
  for (auto& t : conversation.turns)
    if (t.kind == TurnKind::ClarificationResponse) response = &t;
  if (!response) return;  // three-turn shapes have nothing to refine

  try {
    auto req = provider::make_refine_request(
        schema_md, conversation_transcript(conversation.turns), response->text);
    std::string refined = provider::parse_tagged(provider.complete(req).text, "result");
    if (!strutil::trim(refined).empty()) response->text = refined;
  } catch (const Error& e) {
    if (e.code() == Errc::ProviderRefusal || e.code() == Errc::RateLimited ||
        e.code() == Errc::TagMissing) {
      conversation.provenance.refined = false;
      return;
    }
    throw;
  }
}

// ---------------------------------------------------------------------------
// Result explanation
// ---------------------------------------------------------------------------

std::string explain_results(const Conversation& conversation, provider::Provider& provider,
                            const std::string& schema_md) {
  try {
    auto req = provider::make_explain_results_request(
        schema_md, conversation_transcript(conversation.turns),
        bench::render_execution_results(conversation.execution));
    std::string text = provider::parse_tagged(provider.complete(req).text, "result");
    if (!strutil::trim(text).empty()) return text;
  } catch (const Error& e) {
    if (e.code() != Errc::ProviderRefusal && e.code() != Errc::RateLimited &&
        e.code() != Errc::TagMissing)
      throw;
  }
  return "The query returned " + std::to_string(conversation.execution.rows.size()) + " rows.";
}

// ---------------------------------------------------------------------------
// Answerable assembly
// ---------------------------------------------------------------------------

std::optional<Conversation> assemble_answerable(const CorpusExample& example,
                                                corpus::DatabaseHandle& db,
                                                provider::Provider& provider) {
  ResultTable execution;
  try {
    execution = sqlkit::execute(db, example.gold_sql);
  } catch (const ExecError&) {
    return std::nullopt;
  }

  Conversation conv;
  conv.id = std::string(to_token(CategoryLabel::Answerable)) + ":" + example.example_id;
  conv.db_id = example.db_id;
  conv.category = CategoryLabel::Answerable;
  conv.mutation.category = CategoryLabel::Answerable;
  conv.mutation.seed_example_id = example.example_id;
  conv.mutation.db_id = example.db_id;
  conv.mutation.original_question = example.question;
  conv.mutation.mutated_question = example.question;
  conv.mutation.gold_sql = example.gold_sql;
  conv.gold_sql = example.gold_sql;
  conv.execution = std::move(execution);
  conv.turns.push_back({TurnRole::User, TurnKind::InitialQuestion, example.question, {}});
  conv.turns.push_back(
      {TurnRole::Assistant, TurnKind::FinalSql, example.gold_sql, example.gold_sql});

  SchemaDef schema = corpus::introspect_schema(db, example.db_id);
  std::string schema_md =
      bench::render_schema_markdown(schema, bench::collect_value_samples(db, schema));
  conv.turns.push_back({TurnRole::Assistant, TurnKind::ResultExplanation,
                        explain_results(conv, provider, schema_md), {}});
  return conv;
}

}  // namespace practiq::dialogue
