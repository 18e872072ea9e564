#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace practiq {

// ---------------------------------------------------------------------------
// Column typing mirrors the source corpus's catalog tokens.
// ---------------------------------------------------------------------------

enum class ColType { Text, Number, Time, Boolean, Others };

ColType col_type_from_token(const std::string& token);      // "text", "number", ...
const char* to_token(ColType t);
ColType col_type_from_sql_decl(const std::string& decl);    // "INTEGER" -> Number
const char* to_sql_decl(ColType t);

// ---------------------------------------------------------------------------
// Cells: the storage layer compares values case-sensitively; any
// normalization is the caller's job.
// ---------------------------------------------------------------------------

struct Cell {
  enum class Kind { Null, Int, Real, Text };
  Kind kind = Kind::Null;
  std::int64_t i = 0;
  double r = 0.0;
  std::string s;

  static Cell null() { return Cell{}; }
  static Cell of(std::int64_t v) { return Cell{Kind::Int, v, 0.0, {}}; }
  static Cell of(int v) { return of(static_cast<std::int64_t>(v)); }
  static Cell of(double v) { return Cell{Kind::Real, 0, v, {}}; }
  static Cell of(std::string v) { return Cell{Kind::Text, 0, 0.0, std::move(v)}; }

  bool is_null() const { return kind == Kind::Null; }
  bool operator==(const Cell& o) const;
  /// Display form: text as-is, ints without decimals, NULL as "NULL".
  std::string display() const;
  /// SQL literal form for embedding in statements.
  std::string sql_literal() const;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool truncated = false;
};

inline constexpr std::size_t kResultRowCap = 30;

// ---------------------------------------------------------------------------
// Relational catalog
// ---------------------------------------------------------------------------

struct ColumnRef {
  std::string table;
  std::string column;
  bool operator==(const ColumnRef&) const = default;
  auto operator<=>(const ColumnRef&) const = default;
  std::string qualified() const { return table + "." + column; }
};

/// Case-insensitive identity on table and column names.
bool same_ref(const ColumnRef& a, const ColumnRef& b);

struct ColumnDef {
  std::string name;
  ColType col_type = ColType::Text;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;
  // Populated only for CreateTables deltas.
  std::vector<std::string> primary_key;
  std::vector<std::pair<ColumnRef, ColumnRef>> foreign_keys;  // internal to the new tables
  std::vector<std::vector<Cell>> rows;
};

struct SchemaDef {
  std::string db_id;
  std::vector<TableDef> tables;
  std::vector<ColumnRef> primary_keys;
  std::vector<std::pair<ColumnRef, ColumnRef>> foreign_keys;  // (child, parent)

  const TableDef* find_table(const std::string& name) const;        // case-insensitive
  const ColumnDef* find_column(const ColumnRef& ref) const;         // case-insensitive
  bool has_column(const ColumnRef& ref) const { return find_column(ref) != nullptr; }
  bool is_key(const ColumnRef& ref) const;  // PK or either endpoint of an FK
  /// Number of connected components of the FK graph over tables.
  int fk_component_count() const;
};

struct CorpusExample {
  std::string example_id;
  std::string db_id;
  std::string question;
  std::string gold_sql;
};

// ---------------------------------------------------------------------------
// Database deltas
// ---------------------------------------------------------------------------

struct DbDelta {
  enum class Kind { RemoveColumn, AddColumn, ReplaceCellValues, DeleteRowsByValue, CreateTables };
  Kind kind = Kind::RemoveColumn;

  ColumnRef column;                   // all variants except CreateTables
  ColType col_type = ColType::Text;   // AddColumn
  std::vector<Cell> values;           // AddColumn: row-aligned by rowid order
  Cell old_value;                     // ReplaceCellValues / DeleteRowsByValue
  std::vector<Cell> new_values;       // ReplaceCellValues
  std::vector<TableDef> new_tables;   // CreateTables

  static DbDelta remove_column(ColumnRef ref);
  static DbDelta add_column(ColumnRef ref, ColType type, std::vector<Cell> values);
  static DbDelta replace_cell_values(ColumnRef ref, Cell old_value, std::vector<Cell> new_values);
  static DbDelta delete_rows_by_value(ColumnRef ref, Cell value);
  static DbDelta create_tables(std::vector<TableDef> tables);
};

// ---------------------------------------------------------------------------
// Categories. Serialized with the exact tokens the classification prompt
// uses; parsing is case-insensitive.
// ---------------------------------------------------------------------------

enum class CategoryLabel {
  AmbiguousSelectColumn,
  AmbiguousWhereColumn,
  AmbiguousValuesWithinColumn,
  AmbiguousFilterCriteria,
  NonexistentSelectColumn,
  NonexistentWhereColumn,
  NonexistentFilterValue,
  UnsupportedJoin,
  Answerable,
};

inline constexpr int kCategoryCount = 9;
inline constexpr CategoryLabel kAllCategories[kCategoryCount] = {
    CategoryLabel::AmbiguousSelectColumn,    CategoryLabel::AmbiguousWhereColumn,
    CategoryLabel::AmbiguousValuesWithinColumn, CategoryLabel::AmbiguousFilterCriteria,
    CategoryLabel::NonexistentSelectColumn,  CategoryLabel::NonexistentWhereColumn,
    CategoryLabel::NonexistentFilterValue,   CategoryLabel::UnsupportedJoin,
    CategoryLabel::Answerable,
};

const char* to_token(CategoryLabel c);
std::optional<CategoryLabel> category_from_token(const std::string& token);
bool is_ambiguous_column_category(CategoryLabel c);  // SELECT/WHERE column pair

// ---------------------------------------------------------------------------
// Mutation record: what a category operator changed.
// ---------------------------------------------------------------------------

struct Target {
  ColumnRef column;
  std::optional<std::string> literal;
};

struct MutationRecord {
  CategoryLabel category = CategoryLabel::Answerable;
  std::string seed_example_id;
  std::string db_id;
  Target target;
  std::vector<ColumnRef> introduced_columns;
  std::vector<std::string> introduced_values;
  std::vector<std::string> introduced_tables;
  std::string original_question;
  std::string mutated_question;  // equals original unless the operator rewrites it
  std::string gold_sql;          // the seed's original gold SQL
  std::vector<DbDelta> deltas;
  std::vector<std::string> clarified_sql_candidates;
  // what each candidate commits to (column name / cell value / table name),
  // aligned with clarified_sql_candidates; drives the mention rule
  std::vector<std::string> candidate_targets;
};

// ---------------------------------------------------------------------------
// Conversations
// ---------------------------------------------------------------------------

enum class TurnRole { User, Assistant };
enum class TurnKind {
  InitialQuestion,
  ClarificationRequest,
  ClarificationResponse,
  FinalSql,
  ResultExplanation,
};

const char* to_token(TurnRole r);
const char* to_token(TurnKind k);
std::optional<TurnRole> turn_role_from_token(const std::string& token);
std::optional<TurnKind> turn_kind_from_token(const std::string& token);

struct Turn {
  TurnRole role = TurnRole::User;
  TurnKind kind = TurnKind::InitialQuestion;
  std::string text;
  std::optional<std::string> sql;  // set only for kind == FinalSql

  bool operator==(const Turn&) const = default;
};

struct Provenance {
  std::string seed_example_id;
  std::string pipeline_version;
  std::string provider_id;
  std::uint64_t seed = 0;
  bool refined = true;
};

struct Conversation {
  std::string id;
  std::string db_id;
  CategoryLabel category = CategoryLabel::Answerable;
  MutationRecord mutation;
  std::vector<Turn> turns;
  std::string gold_sql;                  // original (pre-mutation) gold SQL
  std::optional<std::string> helpful_sql;
  ResultTable execution;
  Provenance provenance;

  const Turn* find_turn(TurnKind kind) const;
  std::string final_sql() const;  // sql of the FinalSql turn ("" if absent)
  /// Checks the fixed turn-order invariant for this conversation's shape.
  bool turn_order_valid() const;
};

}  // namespace practiq
