#include "practiq/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "practiq/errors.hpp"
#include "practiq/strutil.hpp"

namespace practiq {

using strutil::iequals;

// ---------------------------------------------------------------------------
// ColType
// ---------------------------------------------------------------------------

ColType col_type_from_token(const std::string& token) {
  std::string t = strutil::to_lower(token);
  if (t == "text") return ColType::Text;
  if (t == "number") return ColType::Number;
  if (t == "time") return ColType::Time;
  if (t == "boolean") return ColType::Boolean;
  if (t == "others") return ColType::Others;
  throw Error(Errc::ParseError, "unknown column type token: " + token);
}

const char* to_token(ColType t) {
  switch (t) {
    case ColType::Text: return "text";
    case ColType::Number: return "number";
    case ColType::Time: return "time";
    case ColType::Boolean: return "boolean";
    case ColType::Others: return "others";
  }
  return "others";
}

ColType col_type_from_sql_decl(const std::string& decl) {
  std::string d = strutil::to_lower(decl);
  auto contains = [&](const char* sub) { return d.find(sub) != std::string::npos; };
  if (contains("int") || contains("real") || contains("floa") || contains("doub") ||
      contains("numeric") || contains("decimal"))
    return ColType::Number;
  if (contains("bool")) return ColType::Boolean;
  if (contains("date") || contains("time")) return ColType::Time;
  if (contains("char") || contains("text") || contains("clob") || d.empty())
    return ColType::Text;
  return ColType::Others;
}

const char* to_sql_decl(ColType t) {
  switch (t) {
    case ColType::Text: return "TEXT";
    case ColType::Number: return "NUMERIC";
    case ColType::Time: return "DATETIME";
    case ColType::Boolean: return "BOOLEAN";
    case ColType::Others: return "TEXT";
  }
  return "TEXT";
}

// ---------------------------------------------------------------------------
// Cell
// ---------------------------------------------------------------------------

bool Cell::operator==(const Cell& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Null: return true;
    case Kind::Int: return i == o.i;
    case Kind::Real: return r == o.r;
    case Kind::Text: return s == o.s;
  }
  return false;
}

std::string Cell::display() const {
  switch (kind) {
    case Kind::Null: return "NULL";
    case Kind::Int: return std::to_string(i);
    case Kind::Real: {
      std::ostringstream os;
      os << r;
      return os.str();
    }
    case Kind::Text: return s;
  }
  return {};
}

std::string Cell::sql_literal() const {
  switch (kind) {
    case Kind::Null: return "NULL";
    case Kind::Int: return std::to_string(i);
    case Kind::Real: {
      std::ostringstream os;
      os << r;
      return os.str();
    }
    case Kind::Text: {
      std::string out = "'";
      for (char c : s) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
      }
      out.push_back('\'');
      return out;
    }
  }
  return "NULL";
}

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

bool same_ref(const ColumnRef& a, const ColumnRef& b) {
  return iequals(a.table, b.table) && iequals(a.column, b.column);
}

const TableDef* SchemaDef::find_table(const std::string& name) const {
  for (const auto& t : tables)
    if (iequals(t.name, name)) return &t;
  return nullptr;
}

const ColumnDef* SchemaDef::find_column(const ColumnRef& ref) const {
  const TableDef* t = find_table(ref.table);
  if (!t) return nullptr;
  for (const auto& c : t->columns)
    if (iequals(c.name, ref.column)) return &c;
  return nullptr;
}

bool SchemaDef::is_key(const ColumnRef& ref) const {
  for (const auto& pk : primary_keys)
    if (same_ref(pk, ref)) return true;
  for (const auto& [child, parent] : foreign_keys)
    if (same_ref(child, ref) || same_ref(parent, ref)) return true;
  return false;
}

int SchemaDef::fk_component_count() const {
  const std::size_t n = tables.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto index_of = [&](const std::string& name) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < n; ++i)
      if (iequals(tables[i].name, name)) return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  for (const auto& [child, parentRef] : foreign_keys) {
    auto a = index_of(child.table), b = index_of(parentRef.table);
    if (a < 0 || b < 0) continue;
    parent[find(static_cast<std::size_t>(a))] = find(static_cast<std::size_t>(b));
  }
  int components = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) == i) ++components;
  return components;
}

// ---------------------------------------------------------------------------
// DbDelta constructors
// ---------------------------------------------------------------------------

DbDelta DbDelta::remove_column(ColumnRef ref) {
  DbDelta d;
  d.kind = Kind::RemoveColumn;
  d.column = std::move(ref);
  return d;
}

DbDelta DbDelta::add_column(ColumnRef ref, ColType type, std::vector<Cell> values) {
  DbDelta d;
  d.kind = Kind::AddColumn;
  d.column = std::move(ref);
  d.col_type = type;
  d.values = std::move(values);
  return d;
}

DbDelta DbDelta::replace_cell_values(ColumnRef ref, Cell old_value, std::vector<Cell> new_values) {
  DbDelta d;
  d.kind = Kind::ReplaceCellValues;
  d.column = std::move(ref);
  d.old_value = std::move(old_value);
  d.new_values = std::move(new_values);
  return d;
}

DbDelta DbDelta::delete_rows_by_value(ColumnRef ref, Cell value) {
  DbDelta d;
  d.kind = Kind::DeleteRowsByValue;
  d.column = std::move(ref);
  d.old_value = std::move(value);
  return d;
}

DbDelta DbDelta::create_tables(std::vector<TableDef> tables) {
  DbDelta d;
  d.kind = Kind::CreateTables;
  d.new_tables = std::move(tables);
  return d;
}

// ---------------------------------------------------------------------------
// Categories
// ---------------------------------------------------------------------------

const char* to_token(CategoryLabel c) {
  switch (c) {
    case CategoryLabel::AmbiguousSelectColumn: return "Ambiguous_SELECT_Column";
    case CategoryLabel::AmbiguousWhereColumn: return "Ambiguous_WHERE_Column";
    case CategoryLabel::AmbiguousValuesWithinColumn: return "Ambiguous_Values_Within_Column";
    case CategoryLabel::AmbiguousFilterCriteria: return "Ambiguous_Filter_Criteria";
    case CategoryLabel::NonexistentSelectColumn: return "Nonexistent_SELECT_Column";
    case CategoryLabel::NonexistentWhereColumn: return "Nonexistent_WHERE_Column";
    case CategoryLabel::NonexistentFilterValue: return "Nonexistent_Filter_Value";
    case CategoryLabel::UnsupportedJoin: return "Unsupported_Join";
    case CategoryLabel::Answerable: return "answerable";
  }
  return "answerable";
}

std::optional<CategoryLabel> category_from_token(const std::string& token) {
  for (CategoryLabel c : kAllCategories)
    if (iequals(token, to_token(c))) return c;
  return std::nullopt;
}

bool is_ambiguous_column_category(CategoryLabel c) {
  return c == CategoryLabel::AmbiguousSelectColumn || c == CategoryLabel::AmbiguousWhereColumn;
}

// ---------------------------------------------------------------------------
// Turns / conversations
// ---------------------------------------------------------------------------

const char* to_token(TurnRole r) { return r == TurnRole::User ? "user" : "assistant"; }

const char* to_token(TurnKind k) {
  switch (k) {
    case TurnKind::InitialQuestion: return "initial_question";
    case TurnKind::ClarificationRequest: return "clarification_request";
    case TurnKind::ClarificationResponse: return "clarification_response";
    case TurnKind::FinalSql: return "final_sql";
    case TurnKind::ResultExplanation: return "result_explanation";
  }
  return "initial_question";
}

std::optional<TurnRole> turn_role_from_token(const std::string& token) {
  if (token == "user") return TurnRole::User;
  if (token == "assistant") return TurnRole::Assistant;
  return std::nullopt;
}

std::optional<TurnKind> turn_kind_from_token(const std::string& token) {
  for (TurnKind k : {TurnKind::InitialQuestion, TurnKind::ClarificationRequest,
                     TurnKind::ClarificationResponse, TurnKind::FinalSql,
                     TurnKind::ResultExplanation})
    if (token == to_token(k)) return k;
  return std::nullopt;
}

const Turn* Conversation::find_turn(TurnKind kind) const {
  for (const auto& t : turns)
    if (t.kind == kind) return &t;
  return nullptr;
}

std::string Conversation::final_sql() const {
  const Turn* t = find_turn(TurnKind::FinalSql);
  return t && t->sql ? *t->sql : std::string{};
}

bool Conversation::turn_order_valid() const {
  auto kinds_are = [&](std::initializer_list<TurnKind> expect) {
    if (turns.size() != expect.size()) return false;
    std::size_t i = 0;
    for (TurnKind k : expect)
      if (turns[i++].kind != k) return false;
    return true;
  };
  auto roles_ok = [&]() {
    for (const auto& t : turns) {
      bool user_kind = t.kind == TurnKind::InitialQuestion || t.kind == TurnKind::ClarificationResponse;
      if (user_kind != (t.role == TurnRole::User)) return false;
    }
    return true;
  };
  if (!roles_ok()) return false;
  if (category == CategoryLabel::Answerable || helpful_sql.has_value())
    return kinds_are({TurnKind::InitialQuestion, TurnKind::FinalSql, TurnKind::ResultExplanation});
  return kinds_are({TurnKind::InitialQuestion, TurnKind::ClarificationRequest,
                    TurnKind::ClarificationResponse, TurnKind::FinalSql,
                    TurnKind::ResultExplanation});
}

// ---------------------------------------------------------------------------

const char* to_string(SkipReason r) {
  switch (r) {
    case SkipReason::PreconditionNotMet: return "precondition_not_met";
    case SkipReason::GoldUnparsable: return "gold_unparsable";
    case SkipReason::ProviderRefusal: return "provider_refusal";
    case SkipReason::QuestionUnchanged: return "question_unchanged";
    case SkipReason::CandidateExecFailed: return "candidate_exec_failed";
    case SkipReason::FilterValueAbsent: return "filter_value_absent";
    case SkipReason::InsufficientRows: return "insufficient_rows";
    case SkipReason::NoSubstituteColumn: return "no_substitute_column";
    case SkipReason::NoMatchingSql: return "no_matching_sql";
    case SkipReason::NoAlternateValue: return "no_alternate_value";
    case SkipReason::DeltaConflict: return "delta_conflict";
    case SkipReason::MentionRuleReject: return "mention_rule_reject";
    case SkipReason::BinaryCheckReject: return "binary_check_reject";
    case SkipReason::NoExecutableCandidate: return "no_executable_candidate";
    case SkipReason::ExecFailure: return "exec_failure";
  }
  return "unknown";
}

}  // namespace practiq
