#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "practiq/provider.hpp"
#include "practiq/strutil.hpp"

namespace practiq::provider {

using json = nlohmann::json;
using strutil::to_lower;

namespace {

// Seeded with the canonical worked cases so offline runs follow the same
// paths a live model produces; unseen inputs fall back to rule-based
// generation, which keeps the mock total and deterministic.

const std::map<std::string, std::pair<std::string, std::string>>& synonym_fixture() {
  static const std::map<std::string, std::pair<std::string, std::string>> m = {
      {"capacity", {"Standing Capacity", "Seating Capacity"}},
      {"location", {"Port_of_Origin", "Destination"}},
      {"age", {"Age_at_Entry", "Current_Age"}},
      {"property_type_code", {"property_type_code", "property_type_version"}},
  };
  return m;
}

const std::map<std::string, std::pair<std::string, std::string>>& value_fixture() {
  static const std::map<std::string, std::pair<std::string, std::string>> m = {
      {"chemistry", {"Organic Chemistry", "Physical Chemistry"}},
      {"useful cv", {"useful CV 1", "useful CV 2"}},
  };
  return m;
}

const std::map<std::string, std::string>& vague_question_fixture() {
  static const std::map<std::string, std::string> m = {
      {"Who is the Chemistry teacher?", "Who teaches the molecule science class?"},
      {"How many teachers have more than 10 years of experience?",
       "How many veteran teachers are there?"},
      {"Show the names of ships in the English Channel.",
       "Show the names of ships in the busy strait."},
      {"What is the average tonnage of cargo ships?",
       "What is the average tonnage of the workhorse ships?"},
      {"What is the airport name for airport 'AKO'?",
       "What is the airport name for the small plains airport?"},
      {"What is the total surface area of the continent Asia?",
       "What is the total surface area of the largest continent?"},
      {"What is the total surface area of the Caribbean region?",
       "What is the total surface area of the tropical island region?"},
      {"How many car models were produced by the maker with full name American Motor Company?",
       "How many car models were produced by the defunct maker everyone remembers?"},
      {"How many underage patients were examined during the three years from 1990 to 1993?",
       "How many underage patients were examined during the three years from 1990 to 1993?"},
  };
  return m;
}

std::string wrap_result(const std::string& body) {
  return "<scratch>mock</scratch>\n<result>" + body + "</result>";
}

std::string user_payload(const ProviderRequest& req) {
  for (auto it = req.messages.rbegin(); it != req.messages.rend(); ++it)
    if (it->role == "user") return it->content;
  return {};
}

std::string json_str(const std::string& s) { return json(s).dump(); }

std::string handle_synonym_columns(const ProviderRequest& req) {
  std::string payload = user_payload(req);
  json col = json::parse(parse_tagged(payload, "column"));
  std::string table = col.value("table", std::string{});
  std::string column = col.value("column", std::string{});
  std::string c1, c2;
  auto it = synonym_fixture().find(to_lower(column));
  if (it != synonym_fixture().end()) {
    c1 = it->second.first;
    c2 = it->second.second;
  } else {
    c1 = column + " (variant A)";
    c2 = column + " (variant B)";
  }
  std::string body = "[{\"table\": " + json_str(table) + ", \"column\": " + json_str(c1) +
                     "}, {\"table\": " + json_str(table) + ", \"column\": " + json_str(c2) + "}]";
  return wrap_result(body);
}

std::string handle_similar_values(const ProviderRequest& req) {
  std::string payload = user_payload(req);
  std::string value = parse_tagged(payload, "value");
  std::string v1, v2;
  auto it = value_fixture().find(to_lower(value));
  if (it != value_fixture().end()) {
    v1 = it->second.first;
    v2 = it->second.second;
  } else {
    v1 = value + " 1";
    v2 = value + " 2";
  }
  return wrap_result("[" + json_str(v1) + ", " + json_str(v2) + "]");
}

std::string handle_vaguify(const ProviderRequest& req) {
  std::string payload = user_payload(req);
  std::string question = parse_tagged(payload, "question");
  std::string value = parse_tagged(payload, "value");
  json col = json::parse(parse_tagged(payload, "column"));
  std::string column = col.value("column", std::string{});

  auto it = vague_question_fixture().find(question);
  if (it != vague_question_fixture().end()) return wrap_result(it->second);

  std::string vague = question;
  std::string replacement = "the relevant " + strutil::humanize_identifier(column);
  if (strutil::replace_all_ci(vague, "'" + value + "'", replacement) == 0 &&
      strutil::replace_all_ci(vague, value, replacement) == 0) {
    vague = "Regarding the " + strutil::humanize_identifier(column) +
            " that matters here: " + question;
  }
  return wrap_result(vague);
}

std::string handle_disconnected_tables(const ProviderRequest& req) {
  std::string payload = user_payload(req);
  std::string db_id = parse_tagged(payload, "db");
  std::string schema_md = try_parse_tagged(payload, "schema").value_or("");

  json result;
  if (db_id == "concert_hall") {
    result = json::parse(R"({
      "tables": [
        {"name": "albums",
         "columns": [{"name": "albumId", "col_type": "number"},
                     {"name": "singerId", "col_type": "number"},
                     {"name": "albumName", "col_type": "text"},
                     {"name": "yearReleased", "col_type": "number"}],
         "primary_key": ["albumId"],
         "foreign_keys": [],
         "rows": [[1, 1, "Midnight Road", 2019], [2, 2, "Golden Hour", 2021]]},
        {"name": "songs",
         "columns": [{"name": "songId", "col_type": "number"},
                     {"name": "albumId", "col_type": "number"},
                     {"name": "songName", "col_type": "text"}],
         "primary_key": ["songId"],
         "foreign_keys": [["songs.albumId", "albums.albumId"]],
         "rows": [[1, 1, "Night Drive"], [2, 1, "Red Light"], [3, 2, "Dawn"]]}
      ],
      "question": "What is the name of the singer whose album is 'Thriller'?"
    })");
  } else {
    // first table mentioned in the schema markdown anchors the question
    std::string first_table = "record";
    std::istringstream is(schema_md);
    std::string line;
    while (std::getline(is, line)) {
      if (line.rfind("## ", 0) == 0) {
        first_table = strutil::trim(line.substr(3));
        break;
      }
    }
    result = json::parse(R"({
      "tables": [
        {"name": "library",
         "columns": [{"name": "library_id", "col_type": "number"},
                     {"name": "library_name", "col_type": "text"},
                     {"name": "city", "col_type": "text"}],
         "primary_key": ["library_id"],
         "foreign_keys": [],
         "rows": [[1, "XYZ", "Easton"], [2, "Central", "Weston"]]},
        {"name": "books",
         "columns": [{"name": "book_id", "col_type": "number"},
                     {"name": "library_id", "col_type": "number"},
                     {"name": "title", "col_type": "text"}],
         "primary_key": ["book_id"],
         "foreign_keys": [["books.library_id", "library.library_id"]],
         "rows": [[1, 1, "ABC"], [2, 1, "On Rivers"], [3, 2, "Field Notes"]]}
      ],
      "question": ""
    })");
    result["question"] = "Which " + strutil::humanize_identifier(first_table) +
                         " borrowed the book titled 'ABC' from the library 'XYZ'?";
  }
  return wrap_result(result.dump());
}

std::string handle_fill_clarification(const ProviderRequest& req) {
  std::string payload = user_payload(req);
  std::string chosen = parse_tagged(payload, "chosen");
  std::string category = try_parse_tagged(payload, "category").value_or("");
  auto label = category_from_token(category);
  std::string text;
  if (!label) {
    text = "I'm looking for " + chosen + ".";
  } else {
    switch (*label) {
      case CategoryLabel::AmbiguousSelectColumn: text = "I'm looking for the " + chosen + "."; break;
      case CategoryLabel::AmbiguousWhereColumn: text = "I meant the " + chosen + "."; break;
      case CategoryLabel::AmbiguousValuesWithinColumn: text = "I meant '" + chosen + "'."; break;
      case CategoryLabel::NonexistentSelectColumn:
        text = "Can you provide the " + chosen + " instead?";
        break;
      case CategoryLabel::NonexistentWhereColumn:
        text = "Could you use " + chosen + " instead?";
        break;
      case CategoryLabel::NonexistentFilterValue:
        text = "What about '" + chosen + "' instead?";
        break;
      case CategoryLabel::UnsupportedJoin:
        text = "Could you tell me about the " + chosen + " instead?";
        break;
      default: text = "I'm looking for " + chosen + "."; break;
    }
  }
  return wrap_result(text);
}

std::string handle_refine(const ProviderRequest& req) {
  // identity refinement: return the clarification response unchanged
  std::string payload = user_payload(req);
  return wrap_result(parse_tagged(payload, "response"));
}

std::string handle_explain_results(const ProviderRequest& req) {
  std::string payload = user_payload(req);
  std::string results = parse_tagged(payload, "execution_results");
  // execution results arrive as a markdown-style table: header, separator,
  // then one line per row
  std::vector<std::string> lines;
  std::istringstream is(results);
  std::string line;
  while (std::getline(is, line))
    if (!strutil::trim(line).empty()) lines.push_back(line);
  std::size_t nrows = lines.size() > 2 ? lines.size() - 2 : 0;
  if (nrows == 0) return wrap_result("The query returned no matching rows.");
  auto cells_of = [](const std::string& row_line) {
    std::vector<std::string> cells;
    for (auto& c : strutil::split(row_line, '|')) {
      std::string t = strutil::trim(c);
      if (!t.empty()) cells.push_back(t);
    }
    return cells;
  };
  auto first_row = cells_of(lines[2]);
  if (nrows == 1 && first_row.size() == 1)
    return wrap_result("The answer is " + first_row[0] + ".");
  std::ostringstream os;
  os << "The query returned " << nrows << " rows";
  if (!first_row.empty()) {
    os << "; the first is ";
    for (std::size_t i = 0; i < first_row.size(); ++i) {
      if (i) os << ", ";
      os << first_row[i];
    }
  }
  os << ".";
  return wrap_result(os.str());
}

std::string handle_binary_check(const ProviderRequest& req) {
  // the designed category leads the system prompt's category list
  std::istringstream is(req.system_prompt);
  std::string line;
  while (std::getline(is, line)) {
    line = strutil::trim(line);
    if (line.rfind("- ", 0) == 0) {
      auto colon = line.find(':');
      if (colon != std::string::npos) return wrap_result(strutil::trim(line.substr(2, colon - 2)));
    }
  }
  return wrap_result("answerable");
}

std::string handle_rank_candidates(const ProviderRequest& req) {
  std::string payload = user_payload(req);
  std::string block = parse_tagged(payload, "candidates");
  std::vector<std::string> candidates;
  std::istringstream is(block);
  std::string line;
  while (std::getline(is, line))
    if (!strutil::trim(line).empty()) candidates.push_back(strutil::trim(line));
  std::sort(candidates.begin(), candidates.end());
  json j = candidates;
  return wrap_result(j.dump());
}

class MockProvider final : public Provider {
 public:
  MockProvider(std::uint64_t seed, bool constant_answerable)
      : seed_(seed), constant_answerable_(constant_answerable) {}

  ProviderResponse complete(const ProviderRequest& req) override {
    ProviderResponse resp;
    resp.provider_id = id();
    switch (req.task) {
      case ProviderTask::SynonymColumns: resp.text = handle_synonym_columns(req); break;
      case ProviderTask::SimilarValues: resp.text = handle_similar_values(req); break;
      case ProviderTask::VaguifyQuestion: resp.text = handle_vaguify(req); break;
      case ProviderTask::DisconnectedTables: resp.text = handle_disconnected_tables(req); break;
      case ProviderTask::FillClarification: resp.text = handle_fill_clarification(req); break;
      case ProviderTask::Refine: resp.text = handle_refine(req); break;
      case ProviderTask::ExplainResults: resp.text = handle_explain_results(req); break;
      case ProviderTask::BinaryCategoryCheck: resp.text = handle_binary_check(req); break;
      case ProviderTask::NineWayClassify:
        if (constant_answerable_)
          resp.text = wrap_result("answerable");
        else if (!req.reference.empty())
          resp.text = wrap_result(req.reference);
        else
          resp.text = wrap_result("answerable");
        break;
      case ProviderTask::PredictSql:
        if (!req.reference.empty() && !constant_answerable_)
          resp.text = "```sql\n" + req.reference + "\n```";
        else
          resp.text = "```sql\nSELECT 1\n```";
        break;
      case ProviderTask::RankCandidates: resp.text = handle_rank_candidates(req); break;
    }
    resp.prompt_tokens = static_cast<long>(req.system_prompt.size() / 4);
    resp.completion_tokens = static_cast<long>(resp.text.size() / 4);
    return resp;
  }

  std::string id() const override {
    return constant_answerable_ ? "mock-answerable" : "mock";
  }

 private:
  std::uint64_t seed_;
  bool constant_answerable_;
};

}  // namespace

std::unique_ptr<Provider> make_mock_provider(std::uint64_t seed, bool constant_answerable) {
  return std::make_unique<MockProvider>(seed, constant_answerable);
}

}  // namespace practiq::provider
