#include "practiq/provider.hpp"

#include <json.hpp>

#include "practiq/prompts.hpp"
#include "practiq/strutil.hpp"

namespace practiq::provider {

using json = nlohmann::json;

const char* to_token(ProviderTask t) {
  switch (t) {
    case ProviderTask::SynonymColumns: return "synonym_columns";
    case ProviderTask::SimilarValues: return "similar_values";
    case ProviderTask::VaguifyQuestion: return "vaguify_question";
    case ProviderTask::DisconnectedTables: return "disconnected_tables";
    case ProviderTask::FillClarification: return "fill_clarification";
    case ProviderTask::Refine: return "refine";
    case ProviderTask::ExplainResults: return "explain_results";
    case ProviderTask::BinaryCategoryCheck: return "binary_category_check";
    case ProviderTask::NineWayClassify: return "nine_way_classify";
    case ProviderTask::PredictSql: return "predict_sql";
    case ProviderTask::RankCandidates: return "rank_candidates";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Tag parsing
// ---------------------------------------------------------------------------

std::optional<std::string> try_parse_tagged(const std::string& text, const std::string& tag) {
  const std::string open = "<" + tag + ">";
  const std::string close = "</" + tag + ">";
  // first span to CLOSE wins: find the first close tag, then the nearest
  // preceding open tag
  auto close_pos = text.find(close);
  if (close_pos == std::string::npos) return std::nullopt;
  auto open_pos = text.rfind(open, close_pos);
  if (open_pos == std::string::npos) return std::nullopt;
  auto start = open_pos + open.size();
  return strutil::trim(text.substr(start, close_pos - start));
}

std::string parse_tagged(const std::string& text, const std::string& tag) {
  auto v = try_parse_tagged(text, tag);
  if (!v) throw Error(Errc::TagMissing, "no <" + tag + "> span in provider output");
  return *v;
}

// ---------------------------------------------------------------------------
// Request builders
// ---------------------------------------------------------------------------

namespace {

std::string tag_block(const std::string& tag, const std::string& body) {
  return "<" + tag + ">\n" + body + "\n</" + tag + ">";
}

ProviderRequest base_request(ProviderTask task) {
  ProviderRequest req;
  req.task = task;
  req.system_prompt = system_prompt_for(task);
  return req;
}

std::string column_json(const ColumnRef& column) {
  json j;
  j["table"] = column.table;
  j["column"] = column.column;
  return j.dump();
}

}  // namespace

ProviderRequest make_synonym_columns_request(const std::string& schema_md, const ColumnRef& column,
                                             const std::string& question, const std::string& sql) {
  ProviderRequest req = base_request(ProviderTask::SynonymColumns);
  std::string body = tag_block("schema", schema_md) + "\n\n" +
                     tag_block("column", column_json(column)) + "\n\n" +
                     tag_block("question", question) + "\n\n" + tag_block("sql", sql);
  req.messages.push_back({"user", std::move(body)});
  return req;
}

ProviderRequest make_similar_values_request(const std::string& schema_md, const ColumnRef& column,
                                            const std::string& value, const std::string& question,
                                            const std::string& sql) {
  ProviderRequest req = base_request(ProviderTask::SimilarValues);
  std::string body = tag_block("schema", schema_md) + "\n\n" + tag_block("value", value) +
                     "\n\n" + tag_block("column", column_json(column)) + "\n\n" +
                     tag_block("question", question) + "\n\n" + tag_block("sql", sql);
  req.messages.push_back({"user", std::move(body)});
  return req;
}

ProviderRequest make_vaguify_request(const std::string& schema_md, const ColumnRef& column,
                                     const std::string& value, const std::string& question) {
  ProviderRequest req = base_request(ProviderTask::VaguifyQuestion);
  std::string body = tag_block("schema", schema_md) + "\n\n" + tag_block("value", value) +
                     "\n\n" + tag_block("column", column_json(column)) + "\n\n" +
                     tag_block("question", question);
  req.messages.push_back({"user", std::move(body)});
  return req;
}

ProviderRequest make_disconnected_tables_request(const std::string& schema_md,
                                                 const std::string& db_id) {
  ProviderRequest req = base_request(ProviderTask::DisconnectedTables);
  std::string body = tag_block("schema", schema_md) + "\n\n" + tag_block("db", db_id);
  req.messages.push_back({"user", std::move(body)});
  return req;
}

ProviderRequest make_fill_clarification_request(const std::string& schema_md,
                                                const std::string& conversation_text,
                                                CategoryLabel category,
                                                const std::string& chosen_target) {
  ProviderRequest req = base_request(ProviderTask::FillClarification);
  std::string body = tag_block("schema", schema_md) + "\n\n" +
                     tag_block("conversation", conversation_text) + "\n\n" +
                     tag_block("category", to_token(category)) + "\n\n" +
                     tag_block("chosen", chosen_target);
  req.messages.push_back({"user", std::move(body)});
  return req;
}

ProviderRequest make_refine_request(const std::string& schema_md,
                                    const std::string& conversation_text,
                                    const std::string& clarification_response) {
  ProviderRequest req = base_request(ProviderTask::Refine);
  std::string body = tag_block("schema", schema_md) + "\n\n" +
                     tag_block("conversation", conversation_text) + "\n\n" +
                     tag_block("response", clarification_response);
  req.messages.push_back({"user", std::move(body)});
  return req;
}

ProviderRequest make_explain_results_request(const std::string& schema_md,
                                             const std::string& conversation_text,
                                             const std::string& execution_results_text) {
  ProviderRequest req = base_request(ProviderTask::ExplainResults);
  std::string body = tag_block("schema", schema_md) + "\n\n" +
                     tag_block("conversation", conversation_text) + "\n\n" +
                     tag_block("execution_results", execution_results_text);
  req.messages.push_back({"user", std::move(body)});
  return req;
}

ProviderRequest make_binary_check_request(const std::string& schema_md, CategoryLabel category,
                                          const std::string& question) {
  ProviderRequest req = base_request(ProviderTask::BinaryCategoryCheck);
  req.system_prompt = binary_classification_prompt(category);
  std::string body = tag_block("schema", schema_md) + "\n\n" + tag_block("question", question);
  req.messages.push_back({"user", std::move(body)});
  return req;
}

ProviderRequest make_rank_candidates_request(const std::vector<std::string>& candidates) {
  ProviderRequest req = base_request(ProviderTask::RankCandidates);
  std::string body;
  for (const auto& c : candidates) {
    body += c;
    body += "\n";
  }
  if (!body.empty()) body.pop_back();
  req.messages.push_back({"user", tag_block("candidates", body)});
  return req;
}

// ---------------------------------------------------------------------------
// Response parsers
// ---------------------------------------------------------------------------

namespace {

// Models sometimes emit python-style lists with single quotes; retry after a
// naive quote swap when strict JSON parsing fails.
json parse_result_json(const std::string& response_text) {
  std::string body = parse_tagged(response_text, "result");
  json j = json::parse(body, nullptr, false);
  if (!j.is_discarded()) return j;
  std::string swapped = body;
  for (char& c : swapped)
    if (c == '\'') c = '"';
  j = json::parse(swapped, nullptr, false);
  if (j.is_discarded())
    throw Error(Errc::ProviderRefusal, "unparseable <result> payload: " + body);
  return j;
}

}  // namespace

std::vector<ColumnRef> parse_synonym_columns(const std::string& response_text) {
  json j = parse_result_json(response_text);
  if (!j.is_array()) throw Error(Errc::ProviderRefusal, "synonym result is not a list");
  std::vector<ColumnRef> out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("table") || !item.contains("column"))
      throw Error(Errc::ProviderRefusal, "synonym entry missing table/column");
    out.push_back(ColumnRef{item["table"].get<std::string>(), item["column"].get<std::string>()});
  }
  if (out.empty()) throw Error(Errc::ProviderRefusal, "provider returned no synonym columns");
  return out;
}

std::vector<std::string> parse_string_list(const std::string& response_text) {
  json j = parse_result_json(response_text);
  if (!j.is_array()) throw Error(Errc::ProviderRefusal, "result is not a list");
  std::vector<std::string> out;
  for (const auto& item : j) out.push_back(item.get<std::string>());
  return out;
}

DisconnectedTables parse_disconnected_tables(const std::string& response_text) {
  json j = parse_result_json(response_text);
  if (!j.is_object() || !j.contains("tables"))
    throw Error(Errc::ProviderRefusal, "disconnected-tables result malformed");
  DisconnectedTables out;
  out.question = j.value("question", std::string{});
  for (const auto& tj : j["tables"]) {
    TableDef t;
    t.name = tj.at("name").get<std::string>();
    for (const auto& cj : tj.at("columns")) {
      ColumnDef c;
      c.name = cj.at("name").get<std::string>();
      c.col_type = col_type_from_token(cj.value("col_type", std::string{"text"}));
      t.columns.push_back(std::move(c));
    }
    t.primary_key = tj.value("primary_key", std::vector<std::string>{});
    for (const auto& fj : tj.value("foreign_keys", json::array())) {
      auto split = [](const std::string& q) {
        auto dot = q.find('.');
        if (dot == std::string::npos)
          throw Error(Errc::ProviderRefusal, "foreign key must be table.column: " + q);
        return ColumnRef{q.substr(0, dot), q.substr(dot + 1)};
      };
      t.foreign_keys.emplace_back(split(fj.at(0).get<std::string>()),
                                  split(fj.at(1).get<std::string>()));
    }
    for (const auto& rj : tj.value("rows", json::array())) {
      std::vector<Cell> row;
      for (const auto& cj : rj) {
        if (cj.is_null())
          row.push_back(Cell::null());
        else if (cj.is_number_integer())
          row.push_back(Cell::of(cj.get<std::int64_t>()));
        else if (cj.is_number_float())
          row.push_back(Cell::of(cj.get<double>()));
        else
          row.push_back(Cell::of(cj.get<std::string>()));
      }
      t.rows.push_back(std::move(row));
    }
    out.tables.push_back(std::move(t));
  }
  if (out.tables.size() < 2)
    throw Error(Errc::ProviderRefusal, "need at least two new tables");
  return out;
}

// ---------------------------------------------------------------------------
// Factory
// ---------------------------------------------------------------------------

std::unique_ptr<Provider> make_mock_provider(std::uint64_t seed, bool constant_answerable);
std::unique_ptr<Provider> make_live_provider_from_env();

std::unique_ptr<Provider> make_provider(const std::string& spec, std::uint64_t seed) {
  if (spec == "mock") return make_mock_provider(seed, /*constant_answerable=*/false);
  if (spec == "mock-answerable") return make_mock_provider(seed, /*constant_answerable=*/true);
  if (spec == "live") return make_live_provider_from_env();
  throw Error(Errc::InvalidArgument, "unknown provider spec '" + spec + "'");
}

}  // namespace practiq::provider
