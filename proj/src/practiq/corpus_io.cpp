#include "practiq/corpus_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "practiq/sqlkit.hpp"
#include "practiq/strutil.hpp"
#include "practiq/version.hpp"

namespace practiq::corpus {

using json = nlohmann::ordered_json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error(Errc::ParseError, "malformed JSON in " + what);
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

std::vector<SchemaDef> parse_catalog_json(const std::string& text) {
  json root = parse_json(text, "catalog");
  if (!root.is_array()) throw Error(Errc::ParseError, "catalog is not a JSON array");

  std::vector<SchemaDef> out;
  for (const auto& entry : root) {
    SchemaDef schema;
    schema.db_id = entry.value("db_id", std::string{});
    if (schema.db_id.empty()) throw Error(Errc::ParseError, "catalog entry missing db_id");

    const auto& table_names = entry.at("table_names_original");
    const auto& columns = entry.at("column_names_original");
    const auto& types = entry.at("column_types");

    for (const auto& name : table_names) {
      TableDef t;
      t.name = name.get<std::string>();
      schema.tables.push_back(std::move(t));
    }

    // column index -> ColumnRef, with the leading "*" pseudo-column blank
    std::vector<ColumnRef> by_index;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      int table_idx = columns[i].at(0).get<int>();
      std::string col_name = columns[i].at(1).get<std::string>();
      if (table_idx < 0) {
        by_index.push_back(ColumnRef{});
        continue;
      }
      if (static_cast<std::size_t>(table_idx) >= schema.tables.size())
        throw Error(Errc::ResolutionError, schema.db_id + ": column table index out of range");
      ColumnDef col;
      col.name = col_name;
      if (i < types.size()) col.col_type = col_type_from_token(types[i].get<std::string>());
      schema.tables[static_cast<std::size_t>(table_idx)].columns.push_back(col);
      by_index.push_back(
          ColumnRef{schema.tables[static_cast<std::size_t>(table_idx)].name, col_name});
    }

    auto resolve = [&](int idx) -> ColumnRef {
      if (idx < 0 || static_cast<std::size_t>(idx) >= by_index.size() ||
          by_index[static_cast<std::size_t>(idx)].column.empty())
        throw Error(Errc::ResolutionError, schema.db_id + ": key column index " +
                                               std::to_string(idx) + " out of range");
      return by_index[static_cast<std::size_t>(idx)];
    };

    for (const auto& pk : entry.value("primary_keys", json::array())) {
      if (pk.is_array()) {  // composite keys appear as nested arrays in some dumps
        for (const auto& p : pk) schema.primary_keys.push_back(resolve(p.get<int>()));
      } else {
        schema.primary_keys.push_back(resolve(pk.get<int>()));
      }
    }
    for (const auto& fk : entry.value("foreign_keys", json::array()))
      schema.foreign_keys.emplace_back(resolve(fk.at(0).get<int>()),
                                       resolve(fk.at(1).get<int>()));
    out.push_back(std::move(schema));
  }
  return out;
}

std::vector<SchemaDef> load_catalog(const std::filesystem::path& path) {
  return parse_catalog_json(slurp(path));
}

// ---------------------------------------------------------------------------
// Examples
// ---------------------------------------------------------------------------

LoadedExamples parse_examples_json(const std::string& text) {
  json root = parse_json(text, "examples");
  if (!root.is_array()) throw Error(Errc::ParseError, "examples file is not a JSON array");

  LoadedExamples out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const auto& entry = root[i];
    auto skip = [&](std::string reason) {
      out.skipped.push_back(ExampleDiagnostic{i, std::move(reason)});
    };
    if (!entry.is_object()) {
      skip("not an object");
      continue;
    }
    if (!entry.contains("db_id") || !entry.contains("question") || !entry.contains("query")) {
      skip("missing db_id/question/query field");
      continue;
    }
    CorpusExample ex;
    char buf[16];
    std::snprintf(buf, sizeof buf, "ex%04zu", i);
    ex.example_id = buf;
    ex.db_id = entry.at("db_id").get<std::string>();
    ex.question = entry.at("question").get<std::string>();
    ex.gold_sql = entry.at("query").get<std::string>();
    try {
      sqlkit::parse(ex.gold_sql);
    } catch (const SqlParseError& e) {
      skip(std::string("gold SQL outside supported grammar: ") + e.what());
      continue;
    }
    out.examples.push_back(std::move(ex));
  }
  return out;
}

LoadedExamples load_examples(const std::filesystem::path& path) {
  return parse_examples_json(slurp(path));
}

// ---------------------------------------------------------------------------
// Conversation JSONL
// ---------------------------------------------------------------------------

namespace {

json cell_to_json(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Null: return nullptr;
    case Cell::Kind::Int: return c.i;
    case Cell::Kind::Real: return c.r;
    case Cell::Kind::Text: return c.s;
  }
  return nullptr;
}

Cell cell_from_json(const json& j) {
  if (j.is_null()) return Cell::null();
  if (j.is_number_integer()) return Cell::of(j.get<std::int64_t>());
  if (j.is_number_float()) return Cell::of(j.get<double>());
  if (j.is_boolean()) return Cell::of(static_cast<std::int64_t>(j.get<bool>() ? 1 : 0));
  return Cell::of(j.get<std::string>());
}

json delta_to_json(const DbDelta& d) {
  json j;
  switch (d.kind) {
    case DbDelta::Kind::RemoveColumn:
      j["kind"] = "remove_column";
      j["table"] = d.column.table;
      j["column"] = d.column.column;
      break;
    case DbDelta::Kind::AddColumn: {
      j["kind"] = "add_column";
      j["table"] = d.column.table;
      j["column"] = d.column.column;
      j["col_type"] = to_token(d.col_type);
      json vals = json::array();
      for (const auto& v : d.values) vals.push_back(cell_to_json(v));
      j["values"] = std::move(vals);
      break;
    }
    case DbDelta::Kind::ReplaceCellValues: {
      j["kind"] = "replace_cell_values";
      j["table"] = d.column.table;
      j["column"] = d.column.column;
      j["old_value"] = cell_to_json(d.old_value);
      json vals = json::array();
      for (const auto& v : d.new_values) vals.push_back(cell_to_json(v));
      j["new_values"] = std::move(vals);
      break;
    }
    case DbDelta::Kind::DeleteRowsByValue:
      j["kind"] = "delete_rows_by_value";
      j["table"] = d.column.table;
      j["column"] = d.column.column;
      j["value"] = cell_to_json(d.old_value);
      break;
    case DbDelta::Kind::CreateTables: {
      j["kind"] = "create_tables";
      json tables = json::array();
      for (const auto& t : d.new_tables) {
        json tj;
        tj["name"] = t.name;
        json cols = json::array();
        for (const auto& c : t.columns)
          cols.push_back(json{{"name", c.name}, {"col_type", to_token(c.col_type)}});
        tj["columns"] = std::move(cols);
        tj["primary_key"] = t.primary_key;
        json fks = json::array();
        for (const auto& [child, parent] : t.foreign_keys)
          fks.push_back(json::array({child.qualified(), parent.qualified()}));
        tj["foreign_keys"] = std::move(fks);
        json rows = json::array();
        for (const auto& row : t.rows) {
          json rj = json::array();
          for (const auto& cell : row) rj.push_back(cell_to_json(cell));
          rows.push_back(std::move(rj));
        }
        tj["rows"] = std::move(rows);
        tables.push_back(std::move(tj));
      }
      j["tables"] = std::move(tables);
      break;
    }
  }
  return j;
}

ColumnRef qualified_to_ref(const std::string& qualified) {
  auto dot = qualified.find('.');
  if (dot == std::string::npos)
    throw Error(Errc::ParseError, "expected table.column, got '" + qualified + "'");
  return ColumnRef{qualified.substr(0, dot), qualified.substr(dot + 1)};
}

DbDelta delta_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "remove_column")
    return DbDelta::remove_column(ColumnRef{j.at("table"), j.at("column")});
  if (kind == "add_column") {
    std::vector<Cell> values;
    for (const auto& v : j.at("values")) values.push_back(cell_from_json(v));
    return DbDelta::add_column(ColumnRef{j.at("table"), j.at("column")},
                               col_type_from_token(j.at("col_type").get<std::string>()),
                               std::move(values));
  }
  if (kind == "replace_cell_values") {
    std::vector<Cell> values;
    for (const auto& v : j.at("new_values")) values.push_back(cell_from_json(v));
    return DbDelta::replace_cell_values(ColumnRef{j.at("table"), j.at("column")},
                                        cell_from_json(j.at("old_value")), std::move(values));
  }
  if (kind == "delete_rows_by_value")
    return DbDelta::delete_rows_by_value(ColumnRef{j.at("table"), j.at("column")},
                                         cell_from_json(j.at("value")));
  if (kind == "create_tables") {
    std::vector<TableDef> tables;
    for (const auto& tj : j.at("tables")) {
      TableDef t;
      t.name = tj.at("name").get<std::string>();
      for (const auto& cj : tj.at("columns")) {
        ColumnDef c;
        c.name = cj.at("name").get<std::string>();
        c.col_type = col_type_from_token(cj.at("col_type").get<std::string>());
        t.columns.push_back(std::move(c));
      }
      t.primary_key = tj.value("primary_key", std::vector<std::string>{});
      for (const auto& fj : tj.value("foreign_keys", json::array()))
        t.foreign_keys.emplace_back(qualified_to_ref(fj.at(0).get<std::string>()),
                                    qualified_to_ref(fj.at(1).get<std::string>()));
      for (const auto& rj : tj.value("rows", json::array())) {
        std::vector<Cell> row;
        for (const auto& cj : rj) row.push_back(cell_from_json(cj));
        t.rows.push_back(std::move(row));
      }
      tables.push_back(std::move(t));
    }
    return DbDelta::create_tables(std::move(tables));
  }
  throw Error(Errc::SchemaVersionMismatch, "unknown delta kind '" + kind + "'");
}

json mutation_to_json(const MutationRecord& m) {
  json j;
  json removed = json::array(), added = json::array();
  json value_map = json::object();
  for (const auto& d : m.deltas) {
    switch (d.kind) {
      case DbDelta::Kind::RemoveColumn: removed.push_back(d.column.qualified()); break;
      case DbDelta::Kind::AddColumn: added.push_back(d.column.qualified()); break;
      case DbDelta::Kind::ReplaceCellValues: {
        json news = json::array();
        for (const auto& v : d.new_values) news.push_back(cell_to_json(v));
        value_map[d.old_value.display()] = std::move(news);
        break;
      }
      case DbDelta::Kind::DeleteRowsByValue:
        value_map[d.old_value.display()] = json::array();
        break;
      case DbDelta::Kind::CreateTables:
        for (const auto& t : d.new_tables) added.push_back(t.name);
        break;
    }
  }
  j["removed"] = std::move(removed);
  j["added"] = std::move(added);
  j["value_map"] = std::move(value_map);
  json target;
  target["table"] = m.target.column.table;
  target["column"] = m.target.column.column;
  if (m.target.literal) target["literal"] = *m.target.literal;
  j["target"] = std::move(target);
  json icols = json::array();
  for (const auto& c : m.introduced_columns) icols.push_back(c.qualified());
  j["introduced_columns"] = std::move(icols);
  j["introduced_values"] = m.introduced_values;
  j["introduced_tables"] = m.introduced_tables;
  j["original_question"] = m.original_question;
  j["mutated_question"] = m.mutated_question;
  json deltas = json::array();
  for (const auto& d : m.deltas) deltas.push_back(delta_to_json(d));
  j["deltas"] = std::move(deltas);
  j["candidates"] = m.clarified_sql_candidates;
  j["candidate_targets"] = m.candidate_targets;
  return j;
}

MutationRecord mutation_from_json(const json& j) {
  MutationRecord m;
  if (j.contains("target")) {
    m.target.column.table = j["target"].value("table", std::string{});
    m.target.column.column = j["target"].value("column", std::string{});
    if (j["target"].contains("literal"))
      m.target.literal = j["target"]["literal"].get<std::string>();
  }
  for (const auto& c : j.value("introduced_columns", json::array()))
    m.introduced_columns.push_back(qualified_to_ref(c.get<std::string>()));
  m.introduced_values = j.value("introduced_values", std::vector<std::string>{});
  m.introduced_tables = j.value("introduced_tables", std::vector<std::string>{});
  m.original_question = j.value("original_question", std::string{});
  m.mutated_question = j.value("mutated_question", std::string{});
  for (const auto& dj : j.value("deltas", json::array())) m.deltas.push_back(delta_from_json(dj));
  m.clarified_sql_candidates = j.value("candidates", std::vector<std::string>{});
  m.candidate_targets = j.value("candidate_targets", std::vector<std::string>{});
  return m;
}

json result_table_to_json(const ResultTable& t) {
  json j;
  j["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json rj = json::array();
    for (const auto& cell : row) rj.push_back(cell_to_json(cell));
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  j["truncated"] = t.truncated;
  return j;
}

ResultTable result_table_from_json(const json& j) {
  ResultTable t;
  t.columns = j.value("columns", std::vector<std::string>{});
  for (const auto& rj : j.value("rows", json::array())) {
    std::vector<Cell> row;
    for (const auto& cj : rj) row.push_back(cell_from_json(cj));
    t.rows.push_back(std::move(row));
  }
  t.truncated = j.value("truncated", false);
  return t;
}

}  // namespace

std::string conversation_to_json_line(const Conversation& c) {
  json j;
  j["format_version"] = kConversationFormatVersion;
  j["id"] = c.id;
  j["db_id"] = c.db_id;
  j["category"] = to_token(c.category);
  j["mutation"] = mutation_to_json(c.mutation);
  json turns = json::array();
  for (const auto& t : c.turns) {
    json tj;
    tj["role"] = to_token(t.role);
    tj["kind"] = to_token(t.kind);
    tj["text"] = t.text;
    if (t.sql) tj["sql"] = *t.sql;
    turns.push_back(std::move(tj));
  }
  j["turns"] = std::move(turns);
  j["gold_sql"] = c.gold_sql;
  if (c.helpful_sql) j["helpful_sql"] = *c.helpful_sql;
  j["execution"] = result_table_to_json(c.execution);
  json prov;
  prov["seed_example_id"] = c.provenance.seed_example_id;
  prov["pipeline_version"] = c.provenance.pipeline_version;
  prov["provider_id"] = c.provenance.provider_id;
  prov["seed"] = c.provenance.seed;
  prov["refined"] = c.provenance.refined;
  j["provenance"] = std::move(prov);
  return j.dump();
}

Conversation conversation_from_json_line(const std::string& line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error(Errc::ParseError, "malformed conversation JSON line");
  int version = j.value("format_version", -1);
  if (version != kConversationFormatVersion)
    throw Error(Errc::SchemaVersionMismatch,
                "unsupported conversation format_version " + std::to_string(version));

  Conversation c;
  c.id = j.value("id", std::string{});
  c.db_id = j.value("db_id", std::string{});
  std::string cat = j.value("category", std::string{});
  auto label = category_from_token(cat);
  if (!label) throw Error(Errc::SchemaVersionMismatch, "unknown category token '" + cat + "'");
  c.category = *label;
  c.mutation = mutation_from_json(j.value("mutation", json::object()));
  for (const auto& tj : j.value("turns", json::array())) {
    Turn t;
    auto role = turn_role_from_token(tj.value("role", std::string{}));
    auto kind = turn_kind_from_token(tj.value("kind", std::string{}));
    if (!role || !kind)
      throw Error(Errc::SchemaVersionMismatch, "unknown turn role/kind in conversation " + c.id);
    t.role = *role;
    t.kind = *kind;
    t.text = tj.value("text", std::string{});
    if (tj.contains("sql")) t.sql = tj["sql"].get<std::string>();
    c.turns.push_back(std::move(t));
  }
  c.gold_sql = j.value("gold_sql", std::string{});
  if (j.contains("helpful_sql")) c.helpful_sql = j["helpful_sql"].get<std::string>();
  c.execution = result_table_from_json(j.value("execution", json::object()));
  const json prov = j.value("provenance", json::object());
  c.provenance.seed_example_id = prov.value("seed_example_id", std::string{});
  c.provenance.pipeline_version = prov.value("pipeline_version", std::string{});
  c.provenance.provider_id = prov.value("provider_id", std::string{});
  c.provenance.seed = prov.value("seed", std::uint64_t{0});
  c.provenance.refined = prov.value("refined", true);

  c.mutation.category = c.category;
  c.mutation.db_id = c.db_id;
  c.mutation.seed_example_id = c.provenance.seed_example_id;
  c.mutation.gold_sql = c.gold_sql;
  return c;
}

void write_conversations(const std::filesystem::path& path,
                         const std::vector<Conversation>& conversations) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  for (const auto& c : conversations) out << conversation_to_json_line(c) << "\n";
}

void append_conversations(const std::filesystem::path& path,
                          const std::vector<Conversation>& conversations) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(Errc::IoError, "cannot append to " + path.string());
  for (const auto& c : conversations) out << conversation_to_json_line(c) << "\n";
}

std::vector<Conversation> read_conversations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<Conversation> out;
  std::string line;
  while (std::getline(in, line)) {
    if (strutil::trim(line).empty()) continue;
    out.push_back(conversation_from_json_line(line));
  }
  return out;
}

}  // namespace practiq::corpus
