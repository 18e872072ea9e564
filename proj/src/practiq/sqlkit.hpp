#pragma once

// Parse, analyze, rewrite and render the SELECT dialect used by Spider-style
// gold SQL: single/compound SELECT with joins, aggregates, GROUP/ORDER/LIMIT,
// IN/NOT IN subqueries and set operations. Anything outside that surface is a
// SqlParseError; callers skip such statements with a diagnostic.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "practiq/errors.hpp"
#include "practiq/types.hpp"

namespace practiq::sqlkit {

enum class AggFn { None, Max, Min, Count, Sum, Avg };
enum class ArithOp { None, Sub, Add, Mul, Div };
enum class SetOp { None, Union, UnionAll, Intersect, Except };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge, Like, In, Is, Between };
enum class OrderDir { None, Asc, Desc };

struct Literal {
  enum class Kind { Int, Real, Str, Null };
  Kind kind = Kind::Null;
  std::string text;  // raw spelling for numbers, value for strings
  double num = 0.0;  // numeric value for Int/Real

  static Literal integer(long long v);
  static Literal real(double v);
  static Literal str(std::string v);
  static Literal null();
  /// Classifies `raw` as number or string; strips one level of quotes.
  static Literal from_raw(std::string_view raw);

  bool is_number() const { return kind == Kind::Int || kind == Kind::Real; }
  bool operator==(const Literal& o) const;
};

/// A possibly aggregated column atom: [agg(] [DISTINCT] [table.]column [)]
struct ColumnTerm {
  AggFn agg = AggFn::None;
  bool distinct = false;
  std::string table;   // alias or base table as written; may be empty
  std::string column;  // "*" for star
  bool is_star() const { return column == "*"; }
  bool operator==(const ColumnTerm&) const = default;
};

/// col_term [arith col_term]
struct ValueUnit {
  ColumnTerm lhs;
  ArithOp op = ArithOp::None;
  ColumnTerm rhs;
  bool operator==(const ValueUnit&) const = default;
};

struct SelectItem {
  ValueUnit expr;
  std::string alias;  // "AS alias", rarely present in gold SQL
  bool operator==(const SelectItem&) const = default;
};

struct SelectStmt;

/// Right-hand side of a comparison.
struct Operand {
  enum class Kind { Lit, LitList, Col, Subquery };
  Kind kind = Kind::Lit;
  Literal lit;
  std::vector<Literal> list;
  ColumnTerm col;
  std::unique_ptr<SelectStmt> subquery;

  Operand() = default;
  Operand(const Operand& o);
  Operand(Operand&&) noexcept = default;
  Operand& operator=(const Operand& o);
  Operand& operator=(Operand&&) noexcept = default;
  ~Operand() = default;

  static Operand literal(Literal l);
  bool operator==(const Operand& o) const;
};

struct Condition {
  ValueUnit lhs;
  bool negated = false;  // NOT IN / NOT LIKE / NOT BETWEEN / IS NOT
  CmpOp op = CmpOp::Eq;
  Operand rhs;
  Operand rhs2;  // BETWEEN upper bound
  bool operator==(const Condition&) const = default;
};

struct BoolExpr {
  enum class Kind { Leaf, And, Or };
  Kind kind = Kind::Leaf;
  Condition leaf;
  std::vector<BoolExpr> children;  // And/Or, size >= 2

  static BoolExpr leaf_of(Condition c);
  /// Builds an OR group; a single child collapses to that child.
  static BoolExpr disjunction(std::vector<BoolExpr> cs);
  static BoolExpr conjunction(std::vector<BoolExpr> cs);
  bool operator==(const BoolExpr&) const = default;
};

struct TableSource {
  std::string table;  // empty when subquery
  std::string alias;
  std::unique_ptr<SelectStmt> subquery;

  TableSource() = default;
  TableSource(const TableSource& o);
  TableSource(TableSource&&) noexcept = default;
  TableSource& operator=(const TableSource& o);
  TableSource& operator=(TableSource&&) noexcept = default;
  ~TableSource() = default;

  bool operator==(const TableSource& o) const;
};

struct JoinPart {
  TableSource source;
  std::optional<BoolExpr> on;
  bool cross = false;  // comma-separated source rather than JOIN keyword
  bool operator==(const JoinPart&) const = default;
};

struct SelectStmt {
  bool distinct = false;
  std::vector<SelectItem> items;
  TableSource from;
  std::vector<JoinPart> joins;
  std::optional<BoolExpr> where;
  std::vector<ColumnTerm> group_by;
  std::optional<BoolExpr> having;
  std::vector<ValueUnit> order_by;
  OrderDir order_dir = OrderDir::None;
  std::optional<long long> limit;
  SetOp set_op = SetOp::None;            // links to `compound`
  std::unique_ptr<SelectStmt> compound;  // right side of the set operation

  SelectStmt() = default;
  SelectStmt(const SelectStmt& o);
  SelectStmt(SelectStmt&&) noexcept = default;
  SelectStmt& operator=(const SelectStmt& o);
  SelectStmt& operator=(SelectStmt&&) noexcept = default;
  ~SelectStmt() = default;

  bool operator==(const SelectStmt& o) const;
};

using SqlTree = SelectStmt;

SqlTree parse(std::string_view sql);     // throws SqlParseError with byte offset
std::string render(const SqlTree& tree);

inline bool structurally_equal(const SqlTree& a, const SqlTree& b) { return a == b; }

// ---------------------------------------------------------------------------
// Reference extraction
// ---------------------------------------------------------------------------

struct WhereAtom {
  ColumnRef column;        // resolved to the base table
  std::string comparator;  // "=", "!=", "<", ">", "<=", ">=", "LIKE", "IN"
  Literal literal;
};

struct SqlRefs {
  std::vector<ColumnRef> select_columns;  // star excluded, aliases resolved
  std::vector<WhereAtom> where_atoms;     // literal-comparing atoms, all scopes
  std::vector<std::pair<std::string, std::string>> joined_tables;
};

/// Resolves every reference against `schema`; throws Error(UnknownTable) when
/// a column cannot be attributed to any in-scope table.
SqlRefs extract_refs(const SqlTree& tree, const SchemaDef& schema);

// ---------------------------------------------------------------------------
// Rewrites
// ---------------------------------------------------------------------------

struct RewriteSpec {
  enum class Kind { SubstituteColumn, SubstituteLiteral, AddProjection, WidenPredicate };
  Kind kind = Kind::SubstituteColumn;

  ColumnRef old_column, new_column;      // SubstituteColumn
  std::string old_literal, new_literal;  // SubstituteLiteral
  std::vector<ColumnRef> add_columns;    // AddProjection
  ColumnRef widen_old;                   // WidenPredicate
  std::vector<ColumnRef> widen_candidates;

  static RewriteSpec substitute_column(ColumnRef old_ref, ColumnRef new_ref);
  static RewriteSpec substitute_literal(std::string old_lit, std::string new_lit);
  static RewriteSpec add_projection(std::vector<ColumnRef> refs);
  static RewriteSpec widen_predicate(ColumnRef old_ref, std::vector<ColumnRef> candidates);
};

/// Pure: returns a rewritten copy. Throws Error(RefNotFound) when the spec's
/// target does not occur in the tree.
SqlTree rewrite(const SqlTree& tree, const RewriteSpec& spec, const SchemaDef& schema);

/// True for a zero-row result, or a lone all-aggregate row whose cells are
/// NULL (max/min/sum/avg over nothing) or 0 (count over nothing).
bool result_effectively_empty(const SqlTree& tree, const ResultTable& result);

}  // namespace practiq::sqlkit
