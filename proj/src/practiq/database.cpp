#include "practiq/database.hpp"

#include <sqlite3.h>

#include <atomic>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

#include "practiq/strutil.hpp"

namespace practiq::corpus {

using strutil::iequals;

namespace {

std::string quote_ident(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  out.push_back('"');
  return out;
}

Cell column_cell(sqlite3_stmt* stmt, int idx) {
  switch (sqlite3_column_type(stmt, idx)) {
    case SQLITE_NULL: return Cell::null();
    case SQLITE_INTEGER: return Cell::of(static_cast<std::int64_t>(sqlite3_column_int64(stmt, idx)));
    case SQLITE_FLOAT: return Cell::of(sqlite3_column_double(stmt, idx));
    default: {
      const unsigned char* p = sqlite3_column_text(stmt, idx);
      return Cell::of(std::string(p ? reinterpret_cast<const char*>(p) : ""));
    }
  }
}

void bind_cell(sqlite3_stmt* stmt, int idx, const Cell& cell) {
  switch (cell.kind) {
    case Cell::Kind::Null: sqlite3_bind_null(stmt, idx); break;
    case Cell::Kind::Int: sqlite3_bind_int64(stmt, idx, cell.i); break;
    case Cell::Kind::Real: sqlite3_bind_double(stmt, idx, cell.r); break;
    case Cell::Kind::Text:
      sqlite3_bind_text(stmt, idx, cell.s.c_str(), static_cast<int>(cell.s.size()),
                        SQLITE_TRANSIENT);
      break;
  }
}

struct StmtGuard {
  sqlite3_stmt* stmt = nullptr;
  ~StmtGuard() {
    if (stmt) sqlite3_finalize(stmt);
  }
};

sqlite3_stmt* prepare_or_throw(sqlite3* db, const std::string& sql) {
  sqlite3_stmt* stmt = nullptr;
  if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK) {
    std::string msg = sqlite3_errmsg(db);
    throw ExecError(classify_exec_error(msg), msg + " [sql: " + sql + "]");
  }
  return stmt;
}

}  // namespace

// Engine error classification. Message patterns are versioned with the
// library; extend here when supporting new engine versions.
const char* const kExecErrorPatternVersion = "sqlite3-v1";

ExecErrorKind classify_exec_error(const std::string& message) {
  std::string m = strutil::to_lower(message);
  if (m.find("no such column") != std::string::npos) return ExecErrorKind::UnknownColumn;
  if (m.find("has no column named") != std::string::npos) return ExecErrorKind::UnknownColumn;
  if (m.find("ambiguous column name") != std::string::npos) return ExecErrorKind::UnknownColumn;
  if (m.find("no such table") != std::string::npos) return ExecErrorKind::UnknownTable;
  if (m.find("syntax error") != std::string::npos) return ExecErrorKind::SyntaxError;
  if (m.find("incomplete input") != std::string::npos) return ExecErrorKind::SyntaxError;
  if (m.find("unrecognized token") != std::string::npos) return ExecErrorKind::SyntaxError;
  return ExecErrorKind::Other;
}

// ---------------------------------------------------------------------------
// DatabaseHandle
// ---------------------------------------------------------------------------

DatabaseHandle::DatabaseHandle(std::filesystem::path file) : file_(std::move(file)) {}

DatabaseHandle::~DatabaseHandle() {
  if (db_) sqlite3_close_v2(db_);
}

DatabaseHandle::DatabaseHandle(DatabaseHandle&& o) noexcept : file_(std::move(o.file_)), db_(o.db_) {
  o.db_ = nullptr;
}

DatabaseHandle& DatabaseHandle::operator=(DatabaseHandle&& o) noexcept {
  if (this != &o) {
    if (db_) sqlite3_close_v2(db_);
    file_ = std::move(o.file_);
    db_ = o.db_;
    o.db_ = nullptr;
  }
  return *this;
}

sqlite3* DatabaseHandle::raw() {
  if (!db_) {
    if (sqlite3_open_v2(file_.string().c_str(), &db_,
                        SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE, nullptr) != SQLITE_OK) {
      std::string msg = db_ ? sqlite3_errmsg(db_) : "cannot open database";
      if (db_) sqlite3_close_v2(db_);
      db_ = nullptr;
      throw Error(Errc::IoError, "open " + file_.string() + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
  }
  return db_;
}

void DatabaseHandle::exec(const std::string& sql) {
  char* err = nullptr;
  if (sqlite3_exec(raw(), sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "exec failed";
    sqlite3_free(err);
    throw ExecError(classify_exec_error(msg), msg + " [sql: " + sql + "]");
  }
}

Cell DatabaseHandle::query_scalar(const std::string& sql) {
  StmtGuard g{prepare_or_throw(raw(), sql)};
  int rc = sqlite3_step(g.stmt);
  if (rc == SQLITE_ROW) return column_cell(g.stmt, 0);
  if (rc == SQLITE_DONE) return Cell::null();
  std::string msg = sqlite3_errmsg(raw());
  throw ExecError(classify_exec_error(msg), msg);
}

std::vector<Cell> DatabaseHandle::query_column(const std::string& sql) {
  StmtGuard g{prepare_or_throw(raw(), sql)};
  std::vector<Cell> out;
  int rc;
  while ((rc = sqlite3_step(g.stmt)) == SQLITE_ROW) out.push_back(column_cell(g.stmt, 0));
  if (rc != SQLITE_DONE) {
    std::string msg = sqlite3_errmsg(raw());
    throw ExecError(classify_exec_error(msg), msg);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CorpusStore
// ---------------------------------------------------------------------------

std::filesystem::path CorpusStore::source_path(const std::string& db_id) const {
  return db_root_ / db_id / (db_id + ".sqlite");
}

bool CorpusStore::has_database(const std::string& db_id) const {
  return std::filesystem::exists(source_path(db_id));
}

DatabaseHandle CorpusStore::checkout_database(const std::string& db_id,
                                              const std::filesystem::path& workdir) const {
  std::filesystem::path src = source_path(db_id);
  if (!std::filesystem::exists(src))
    throw Error(Errc::MissingDatabase, "no database file for db_id '" + db_id + "'");
  static std::atomic<std::uint64_t> counter{0};
  std::uint64_t n = counter.fetch_add(1);
  std::error_code ec;
  std::filesystem::create_directories(workdir, ec);
  std::filesystem::path dst = workdir / (db_id + "." + std::to_string(n) + ".sqlite");
  if (!std::filesystem::copy_file(src, dst, std::filesystem::copy_options::overwrite_existing, ec) ||
      ec)
    throw Error(Errc::IoError, "copy " + src.string() + " -> " + dst.string() + ": " + ec.message());
  return DatabaseHandle(dst);
}

// ---------------------------------------------------------------------------
// Introspection
// ---------------------------------------------------------------------------

SchemaDef introspect_schema(DatabaseHandle& db, const std::string& db_id) {
  SchemaDef schema;
  schema.db_id = db_id;
  sqlite3* raw = db.raw();

  std::vector<std::string> table_names;
  {
    StmtGuard g{prepare_or_throw(
        raw, "SELECT name FROM sqlite_master WHERE type='table' AND name NOT LIKE 'sqlite_%' "
             "ORDER BY rowid")};
    while (sqlite3_step(g.stmt) == SQLITE_ROW)
      table_names.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(g.stmt, 0)));
  }

  for (const auto& tname : table_names) {
    TableDef table;
    table.name = tname;
    std::vector<std::pair<int, std::string>> pk_cols;  // (pk ordinal, name)
    {
      StmtGuard g{prepare_or_throw(raw, "PRAGMA table_info(" + quote_ident(tname) + ")")};
      while (sqlite3_step(g.stmt) == SQLITE_ROW) {
        ColumnDef col;
        col.name = reinterpret_cast<const char*>(sqlite3_column_text(g.stmt, 1));
        const unsigned char* type_text = sqlite3_column_text(g.stmt, 2);
        col.col_type = col_type_from_sql_decl(
            type_text ? reinterpret_cast<const char*>(type_text) : "");
        int pk = sqlite3_column_int(g.stmt, 5);
        if (pk > 0) pk_cols.emplace_back(pk, col.name);
        table.columns.push_back(std::move(col));
      }
    }
    std::sort(pk_cols.begin(), pk_cols.end());
    for (auto& [ord, name] : pk_cols)
      schema.primary_keys.push_back(ColumnRef{tname, name});
    schema.tables.push_back(std::move(table));
  }

  for (const auto& tname : table_names) {
    StmtGuard g{prepare_or_throw(raw, "PRAGMA foreign_key_list(" + quote_ident(tname) + ")")};
    while (sqlite3_step(g.stmt) == SQLITE_ROW) {
      std::string parent_table = reinterpret_cast<const char*>(sqlite3_column_text(g.stmt, 2));
      std::string child_col = reinterpret_cast<const char*>(sqlite3_column_text(g.stmt, 3));
      const unsigned char* to = sqlite3_column_text(g.stmt, 4);
      std::string parent_col = to ? reinterpret_cast<const char*>(to) : "";
      ColumnRef child{tname, child_col};
      if (parent_col.empty()) {
        // implicit reference to the parent's primary key
        for (const auto& pk : schema.primary_keys)
          if (iequals(pk.table, parent_table)) {
            parent_col = pk.column;
            break;
          }
      }
      ColumnRef parent{parent_table, parent_col};
      if (schema.find_column(child) && schema.find_column(parent))
        schema.foreign_keys.emplace_back(std::move(child), std::move(parent));
    }
  }
  return schema;
}

std::vector<Cell> read_column_values(DatabaseHandle& db, const ColumnRef& ref) {
  return db.query_column("SELECT " + quote_ident(ref.column) + " FROM " +
                         quote_ident(ref.table) + " ORDER BY rowid");
}

std::size_t table_row_count(DatabaseHandle& db, const std::string& table) {
  Cell c = db.query_scalar("SELECT count(*) FROM " + quote_ident(table));
  return c.kind == Cell::Kind::Int ? static_cast<std::size_t>(c.i) : 0;
}

// ---------------------------------------------------------------------------
// apply_delta
// ---------------------------------------------------------------------------

namespace {

struct LiveColumn {
  std::string name;
  std::string decl_type;
  bool pk = false;
};

std::vector<LiveColumn> live_columns(DatabaseHandle& db, const std::string& table) {
  std::vector<LiveColumn> cols;
  StmtGuard g{prepare_or_throw(db.raw(), "PRAGMA table_info(" + quote_ident(table) + ")")};
  while (sqlite3_step(g.stmt) == SQLITE_ROW) {
    LiveColumn c;
    c.name = reinterpret_cast<const char*>(sqlite3_column_text(g.stmt, 1));
    const unsigned char* t = sqlite3_column_text(g.stmt, 2);
    c.decl_type = t ? reinterpret_cast<const char*>(t) : "";
    c.pk = sqlite3_column_int(g.stmt, 5) > 0;
    cols.push_back(std::move(c));
  }
  if (cols.empty())
    throw Error(Errc::DeltaConflict, "no such table: " + table);
  return cols;
}

bool table_exists(DatabaseHandle& db, const std::string& name) {
  Cell c = db.query_scalar(
      "SELECT count(*) FROM sqlite_master WHERE type='table' AND lower(name) = lower(" +
      Cell::of(name).sql_literal() + ")");
  return c.kind == Cell::Kind::Int && c.i > 0;
}

struct LiveFk {
  std::string from_col, parent_table, parent_col;
};

std::vector<LiveFk> live_fks(DatabaseHandle& db, const std::string& table) {
  std::vector<LiveFk> fks;
  StmtGuard g{prepare_or_throw(db.raw(), "PRAGMA foreign_key_list(" + quote_ident(table) + ")")};
  while (sqlite3_step(g.stmt) == SQLITE_ROW) {
    LiveFk fk;
    fk.parent_table = reinterpret_cast<const char*>(sqlite3_column_text(g.stmt, 2));
    fk.from_col = reinterpret_cast<const char*>(sqlite3_column_text(g.stmt, 3));
    const unsigned char* to = sqlite3_column_text(g.stmt, 4);
    fk.parent_col = to ? reinterpret_cast<const char*>(to) : "";
    fks.push_back(std::move(fk));
  }
  return fks;
}

// Column removal by table rebuild: create a replacement table without the
// column, copy surviving data, then swap names. Works on engine versions
// without native column dropping.
void remove_column(DatabaseHandle& db, const ColumnRef& ref) {
  auto cols = live_columns(db, ref.table);
  auto it = std::find_if(cols.begin(), cols.end(),
                         [&](const LiveColumn& c) { return iequals(c.name, ref.column); });
  if (it == cols.end())
    throw Error(Errc::DeltaConflict, "RemoveColumn: no column " + ref.qualified());

  std::vector<LiveColumn> survivors;
  for (const auto& c : cols)
    if (!iequals(c.name, ref.column)) survivors.push_back(c);
  if (survivors.empty())
    throw Error(Errc::DeltaConflict, "RemoveColumn would leave table empty: " + ref.table);

  std::vector<std::string> pk_names;
  for (const auto& c : survivors)
    if (c.pk) pk_names.push_back(c.name);

  std::string ddl = "CREATE TABLE \"__practiq_rebuild\" (";
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    if (i) ddl += ", ";
    ddl += quote_ident(survivors[i].name);
    if (!survivors[i].decl_type.empty()) ddl += " " + survivors[i].decl_type;
    // single INTEGER pk keeps rowid-alias behaviour when declared inline
    if (survivors[i].pk && pk_names.size() == 1 &&
        strutil::to_lower(survivors[i].decl_type).find("int") != std::string::npos)
      ddl += " PRIMARY KEY";
  }
  if (pk_names.size() > 1 ||
      (pk_names.size() == 1 &&
       strutil::to_lower(survivors[std::distance(
                             survivors.begin(),
                             std::find_if(survivors.begin(), survivors.end(),
                                          [&](const LiveColumn& c) { return c.pk; }))]
                             .decl_type)
               .find("int") == std::string::npos)) {
    ddl += ", PRIMARY KEY (";
    for (std::size_t i = 0; i < pk_names.size(); ++i) {
      if (i) ddl += ", ";
      ddl += quote_ident(pk_names[i]);
    }
    ddl += ")";
  }
  for (const auto& fk : live_fks(db, ref.table)) {
    if (iequals(fk.from_col, ref.column)) continue;
    ddl += ", FOREIGN KEY (" + quote_ident(fk.from_col) + ") REFERENCES " +
           quote_ident(fk.parent_table);
    if (!fk.parent_col.empty()) ddl += " (" + quote_ident(fk.parent_col) + ")";
  }
  ddl += ")";

  std::string col_list;
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    if (i) col_list += ", ";
    col_list += quote_ident(survivors[i].name);
  }

  db.exec("BEGIN");
  try {
    db.exec(ddl);
    db.exec("INSERT INTO \"__practiq_rebuild\" (" + col_list + ") SELECT " + col_list +
            " FROM " + quote_ident(ref.table) + " ORDER BY rowid");
    db.exec("DROP TABLE " + quote_ident(ref.table));
    db.exec("ALTER TABLE \"__practiq_rebuild\" RENAME TO " + quote_ident(ref.table));
    db.exec("COMMIT");
  } catch (...) {
    db.exec("ROLLBACK");
    throw;
  }
}

void add_column(DatabaseHandle& db, const DbDelta& delta) {
  auto cols = live_columns(db, delta.column.table);
  for (const auto& c : cols)
    if (iequals(c.name, delta.column.column))
      throw Error(Errc::DeltaConflict, "AddColumn: column already exists: " + delta.column.qualified());

  db.exec("ALTER TABLE " + quote_ident(delta.column.table) + " ADD COLUMN " +
          quote_ident(delta.column.column) + " " + to_sql_decl(delta.col_type));
  if (delta.values.empty()) return;

  std::vector<Cell> rowids =
      db.query_column("SELECT rowid FROM " + quote_ident(delta.column.table) + " ORDER BY rowid");
  std::string update = "UPDATE " + quote_ident(delta.column.table) + " SET " +
                       quote_ident(delta.column.column) + " = ? WHERE rowid = ?";
  StmtGuard g{prepare_or_throw(db.raw(), update)};
  db.exec("BEGIN");
  try {
    for (std::size_t i = 0; i < rowids.size() && i < delta.values.size(); ++i) {
      sqlite3_reset(g.stmt);
      sqlite3_clear_bindings(g.stmt);
      bind_cell(g.stmt, 1, delta.values[i]);
      bind_cell(g.stmt, 2, rowids[i]);
      if (sqlite3_step(g.stmt) != SQLITE_DONE) {
        std::string msg = sqlite3_errmsg(db.raw());
        throw ExecError(classify_exec_error(msg), msg);
      }
    }
    db.exec("COMMIT");
  } catch (...) {
    db.exec("ROLLBACK");
    throw;
  }
}

// Matching rows take the new values round-robin in rowid order. When there
// are fewer matching rows than new values, clones (fresh integer keys) are
// inserted so that every new value is present.
void replace_cell_values(DatabaseHandle& db, const DbDelta& delta) {
  const std::string table_q = quote_ident(delta.column.table);
  const std::string col_q = quote_ident(delta.column.column);
  auto cols = live_columns(db, delta.column.table);
  bool col_found = std::any_of(cols.begin(), cols.end(), [&](const LiveColumn& c) {
    return iequals(c.name, delta.column.column);
  });
  if (!col_found)
    throw Error(Errc::DeltaConflict, "ReplaceCellValues: no column " + delta.column.qualified());
  if (delta.new_values.empty())
    throw Error(Errc::DeltaConflict, "ReplaceCellValues: no replacement values");

  std::vector<Cell> rowids = db.query_column("SELECT rowid FROM " + table_q + " WHERE " + col_q +
                                             " = " + delta.old_value.sql_literal() +
                                             " ORDER BY rowid");
  if (rowids.empty())
    throw Error(Errc::DeltaConflict,
                "ReplaceCellValues: value not present: " + delta.old_value.display());

  db.exec("BEGIN");
  try {
    for (std::size_t i = 0; i < rowids.size(); ++i) {
      const Cell& nv = delta.new_values[i % delta.new_values.size()];
      db.exec("UPDATE " + table_q + " SET " + col_q + " = " + nv.sql_literal() +
              " WHERE rowid = " + rowids[i].sql_literal());
    }
    if (rowids.size() < delta.new_values.size()) {
      // clone the first matching row once per uncovered value
      std::string src_rowid = rowids.front().sql_literal();
      for (std::size_t vi = rowids.size(); vi < delta.new_values.size(); ++vi) {
        std::string insert_cols, select_cols;
        for (const auto& c : cols) {
          bool is_int_pk = c.pk && strutil::to_lower(c.decl_type).find("int") != std::string::npos;
          if (is_int_pk) continue;  // let the engine assign a fresh key
          if (!insert_cols.empty()) {
            insert_cols += ", ";
            select_cols += ", ";
          }
          insert_cols += quote_ident(c.name);
          if (iequals(c.name, delta.column.column))
            select_cols += delta.new_values[vi].sql_literal();
          else
            select_cols += quote_ident(c.name);
        }
        db.exec("INSERT INTO " + table_q + " (" + insert_cols + ") SELECT " + select_cols +
                " FROM " + table_q + " WHERE rowid = " + src_rowid);
      }
    }
    db.exec("COMMIT");
  } catch (...) {
    db.exec("ROLLBACK");
    throw;
  }
}

void delete_rows_by_value(DatabaseHandle& db, const DbDelta& delta) {
  auto cols = live_columns(db, delta.column.table);
  bool col_found = std::any_of(cols.begin(), cols.end(), [&](const LiveColumn& c) {
    return iequals(c.name, delta.column.column);
  });
  if (!col_found)
    throw Error(Errc::DeltaConflict, "DeleteRowsByValue: no column " + delta.column.qualified());
  db.exec("DELETE FROM " + quote_ident(delta.column.table) + " WHERE " +
          quote_ident(delta.column.column) + " = " + delta.old_value.sql_literal());
}

void create_tables(DatabaseHandle& db, const DbDelta& delta) {
  if (delta.new_tables.empty())
    throw Error(Errc::DeltaConflict, "CreateTables: empty table list");
  for (const auto& t : delta.new_tables)
    if (table_exists(db, t.name))
      throw Error(Errc::DeltaConflict, "CreateTables: table already exists: " + t.name);
  // internal FKs only: every parent must be one of the new tables
  for (const auto& t : delta.new_tables) {
    for (const auto& [child, parent] : t.foreign_keys) {
      bool internal = false;
      for (const auto& nt : delta.new_tables)
        if (iequals(nt.name, parent.table)) internal = true;
      if (!internal)
        throw Error(Errc::DeltaConflict,
                    "CreateTables: foreign key escapes the new tables: " + parent.qualified());
    }
  }

  db.exec("BEGIN");
  try {
    for (const auto& t : delta.new_tables) {
      std::string ddl = "CREATE TABLE " + quote_ident(t.name) + " (";
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) ddl += ", ";
        ddl += quote_ident(t.columns[i].name);
        ddl += " ";
        ddl += to_sql_decl(t.columns[i].col_type);
        if (t.primary_key.size() == 1 && iequals(t.primary_key.front(), t.columns[i].name) &&
            t.columns[i].col_type == ColType::Number)
          ddl += " PRIMARY KEY";
      }
      for (const auto& [child, parent] : t.foreign_keys) {
        if (!iequals(child.table, t.name)) continue;
        ddl += ", FOREIGN KEY (" + quote_ident(child.column) + ") REFERENCES " +
               quote_ident(parent.table) + " (" + quote_ident(parent.column) + ")";
      }
      ddl += ")";
      db.exec(ddl);
      for (const auto& row : t.rows) {
        std::string ins = "INSERT INTO " + quote_ident(t.name) + " VALUES (";
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) ins += ", ";
          ins += row[i].sql_literal();
        }
        ins += ")";
        db.exec(ins);
      }
    }
    db.exec("COMMIT");
  } catch (...) {
    db.exec("ROLLBACK");
    throw;
  }
}

}  // namespace

SchemaDef apply_delta(DatabaseHandle& db, const DbDelta& delta) {
  switch (delta.kind) {
    case DbDelta::Kind::RemoveColumn: remove_column(db, delta.column); break;
    case DbDelta::Kind::AddColumn: add_column(db, delta); break;
    case DbDelta::Kind::ReplaceCellValues: replace_cell_values(db, delta); break;
    case DbDelta::Kind::DeleteRowsByValue: delete_rows_by_value(db, delta); break;
    case DbDelta::Kind::CreateTables: create_tables(db, delta); break;
  }
  std::filesystem::path file = db.file();
  std::string db_id = file.stem().string();
  // working copies are named <db_id>.<n>; strip the checkout counter
  auto dot = db_id.find('.');
  if (dot != std::string::npos) db_id = db_id.substr(0, dot);
  return introspect_schema(db, db_id);
}

}  // namespace practiq::corpus

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace practiq::sqlkit {

ResultTable execute(corpus::DatabaseHandle& db, const std::string& sql) {
  sqlite3* raw = db.raw();
  sqlite3_stmt* stmt = nullptr;
  if (sqlite3_prepare_v2(raw, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK) {
    std::string msg = sqlite3_errmsg(raw);
    throw ExecError(corpus::classify_exec_error(msg), msg + " [sql: " + sql + "]");
  }
  ResultTable table;
  int ncols = sqlite3_column_count(stmt);
  for (int i = 0; i < ncols; ++i) {
    const char* name = sqlite3_column_name(stmt, i);
    table.columns.emplace_back(name ? name : "");
  }
  int rc;
  while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) {
    if (table.rows.size() >= kResultRowCap) {
      table.truncated = true;
      break;
    }
    std::vector<Cell> row;
    row.reserve(static_cast<std::size_t>(ncols));
    for (int i = 0; i < ncols; ++i) {
      switch (sqlite3_column_type(stmt, i)) {
        case SQLITE_NULL: row.push_back(Cell::null()); break;
        case SQLITE_INTEGER:
          row.push_back(Cell::of(static_cast<std::int64_t>(sqlite3_column_int64(stmt, i))));
          break;
        case SQLITE_FLOAT: row.push_back(Cell::of(sqlite3_column_double(stmt, i))); break;
        default: {
          const unsigned char* p = sqlite3_column_text(stmt, i);
          row.push_back(Cell::of(std::string(p ? reinterpret_cast<const char*>(p) : "")));
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (rc != SQLITE_DONE && rc != SQLITE_ROW) {
    std::string msg = sqlite3_errmsg(raw);
    sqlite3_finalize(stmt);
    throw ExecError(corpus::classify_exec_error(msg), msg + " [sql: " + sql + "]");
  }
  sqlite3_finalize(stmt);
  return table;
}

bool executes_ok(corpus::DatabaseHandle& db, const std::string& sql) {
  try {
    execute(db, sql);
    return true;
  } catch (const ExecError&) {
    return false;
  }
}

}  // namespace practiq::sqlkit
