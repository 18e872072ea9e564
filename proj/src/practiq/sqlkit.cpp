#include "practiq/sqlkit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "practiq/strutil.hpp"

namespace practiq::sqlkit {

using strutil::iequals;

// ---------------------------------------------------------------------------
// Literal
// ---------------------------------------------------------------------------

Literal Literal::integer(long long v) {
  Literal l;
  l.kind = Kind::Int;
  l.text = std::to_string(v);
  l.num = static_cast<double>(v);
  return l;
}

Literal Literal::real(double v) {
  Literal l;
  l.kind = Kind::Real;
  std::ostringstream os;
  os << v;
  l.text = os.str();
  l.num = v;
  return l;
}

Literal Literal::str(std::string v) {
  Literal l;
  l.kind = Kind::Str;
  l.text = std::move(v);
  return l;
}

Literal Literal::null() {
  Literal l;
  l.kind = Kind::Null;
  return l;
}

namespace {

bool looks_numeric(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  bool digit = false, dot = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digit = true;
    } else if (s[i] == '.' && !dot) {
      dot = true;
    } else {
      return false;
    }
  }
  return digit;
}

std::string strip_one_quote_level(std::string_view raw) {
  if (raw.size() >= 2) {
    char f = raw.front(), b = raw.back();
    if ((f == '\'' && b == '\'') || (f == '"' && b == '"'))
      return std::string(raw.substr(1, raw.size() - 2));
  }
  return std::string(raw);
}

}  // namespace

Literal Literal::from_raw(std::string_view raw) {
  std::string stripped = strip_one_quote_level(raw);
  if (stripped.size() != raw.size()) return Literal::str(std::move(stripped));
  if (looks_numeric(stripped)) {
    Literal l;
    l.kind = stripped.find('.') == std::string::npos ? Kind::Int : Kind::Real;
    l.text = stripped;
    l.num = std::strtod(stripped.c_str(), nullptr);
    return l;
  }
  return Literal::str(std::move(stripped));
}

bool Literal::operator==(const Literal& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Null: return true;
    case Kind::Str: return text == o.text;
    case Kind::Int:
    case Kind::Real: return num == o.num;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Deep copies and equality for pointer-bearing nodes
// ---------------------------------------------------------------------------

namespace {
std::unique_ptr<SelectStmt> clone(const std::unique_ptr<SelectStmt>& p) {
  return p ? std::make_unique<SelectStmt>(*p) : nullptr;
}
bool ptr_equal(const std::unique_ptr<SelectStmt>& a, const std::unique_ptr<SelectStmt>& b) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  return *a == *b;
}
}  // namespace

Operand::Operand(const Operand& o)
    : kind(o.kind), lit(o.lit), list(o.list), col(o.col), subquery(clone(o.subquery)) {}

Operand& Operand::operator=(const Operand& o) {
  if (this == &o) return *this;
  kind = o.kind;
  lit = o.lit;
  list = o.list;
  col = o.col;
  subquery = clone(o.subquery);
  return *this;
}

Operand Operand::literal(Literal l) {
  Operand op;
  op.kind = Kind::Lit;
  op.lit = std::move(l);
  return op;
}

bool Operand::operator==(const Operand& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Lit: return lit == o.lit;
    case Kind::LitList: return list == o.list;
    case Kind::Col: return col == o.col;
    case Kind::Subquery: return ptr_equal(subquery, o.subquery);
  }
  return false;
}

TableSource::TableSource(const TableSource& o)
    : table(o.table), alias(o.alias), subquery(clone(o.subquery)) {}

TableSource& TableSource::operator=(const TableSource& o) {
  if (this == &o) return *this;
  table = o.table;
  alias = o.alias;
  subquery = clone(o.subquery);
  return *this;
}

bool TableSource::operator==(const TableSource& o) const {
  return table == o.table && alias == o.alias && ptr_equal(subquery, o.subquery);
}

SelectStmt::SelectStmt(const SelectStmt& o)
    : distinct(o.distinct),
      items(o.items),
      from(o.from),
      joins(o.joins),
      where(o.where),
      group_by(o.group_by),
      having(o.having),
      order_by(o.order_by),
      order_dir(o.order_dir),
      limit(o.limit),
      set_op(o.set_op),
      compound(clone(o.compound)) {}

SelectStmt& SelectStmt::operator=(const SelectStmt& o) {
  if (this == &o) return *this;
  SelectStmt tmp(o);
  *this = std::move(tmp);
  return *this;
}

bool SelectStmt::operator==(const SelectStmt& o) const {
  return distinct == o.distinct && items == o.items && from == o.from && joins == o.joins &&
         where == o.where && group_by == o.group_by && having == o.having &&
         order_by == o.order_by && order_dir == o.order_dir && limit == o.limit &&
         set_op == o.set_op && ptr_equal(compound, o.compound);
}

BoolExpr BoolExpr::leaf_of(Condition c) {
  BoolExpr e;
  e.kind = Kind::Leaf;
  e.leaf = std::move(c);
  return e;
}

BoolExpr BoolExpr::disjunction(std::vector<BoolExpr> cs) {
  if (cs.size() == 1) return std::move(cs.front());
  BoolExpr e;
  e.kind = Kind::Or;
  e.children = std::move(cs);
  return e;
}

BoolExpr BoolExpr::conjunction(std::vector<BoolExpr> cs) {
  if (cs.size() == 1) return std::move(cs.front());
  BoolExpr e;
  e.kind = Kind::And;
  e.children = std::move(cs);
  return e;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class TokType { Ident, DQuoted, Str, Num, Punct, End };

struct Tok {
  TokType type = TokType::End;
  std::string text;
  std::size_t offset = 0;
};

std::vector<Tok> lex(std::string_view sql) {
  std::vector<Tok> out;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  auto fail = [&](const std::string& msg, std::size_t at) {
    throw SqlParseError(msg, at);
  };
  while (i < n) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '\'' || c == '"' || c == '`' || c == '[') {
      char close = c == '[' ? ']' : c;
      std::string text;
      ++i;
      bool terminated = false;
      while (i < n) {
        if (sql[i] == close) {
          if (close != ']' && i + 1 < n && sql[i + 1] == close) {  // doubled quote escape
            text.push_back(close);
            i += 2;
            continue;
          }
          ++i;
          terminated = true;
          break;
        }
        text.push_back(sql[i]);
        ++i;
      }
      if (!terminated) fail("unterminated quoted token", start);
      TokType tt = c == '\'' ? TokType::Str : (c == '"' ? TokType::DQuoted : TokType::Ident);
      out.push_back({tt, std::move(text), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      std::size_t j = i;
      bool dot = false, exp = false;
      while (j < n) {
        char d = sql[j];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          ++j;
        } else if (d == '.' && !dot && !exp) {
          dot = true;
          ++j;
        } else if ((d == 'e' || d == 'E') && !exp && j > i) {
          exp = true;
          ++j;
          if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
        } else {
          break;
        }
      }
      out.push_back({TokType::Num, std::string(sql.substr(i, j - i)), start});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '_' ||
                       sql[j] == '$'))
        ++j;
      out.push_back({TokType::Ident, std::string(sql.substr(i, j - i)), start});
      i = j;
      continue;
    }
    // multi-char operators
    if ((c == '!' || c == '<' || c == '>') && i + 1 < n &&
        (sql[i + 1] == '=' || (c == '<' && sql[i + 1] == '>'))) {
      out.push_back({TokType::Punct, std::string(sql.substr(i, 2)), start});
      i += 2;
      continue;
    }
    if (std::string("(),.*=<>+-/;").find(c) != std::string::npos) {
      out.push_back({TokType::Punct, std::string(1, c), start});
      ++i;
      continue;
    }
    fail(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({TokType::End, "", n});
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "select", "from",  "where",     "group", "by",   "having", "order",  "limit",
      "join",   "on",    "as",        "and",   "or",   "not",    "in",     "like",
      "between", "is",   "null",      "distinct", "union", "all", "intersect",
      "except", "asc",   "desc",      "inner", "cross"};
  return words;
}

class Parser {
 public:
  explicit Parser(std::string_view sql) : toks_(lex(sql)) {}

  SelectStmt parse_statement() {
    SelectStmt stmt = parse_select();
    SelectStmt* tail = &stmt;
    while (true) {
      SetOp op = SetOp::None;
      if (accept_kw("union")) {
        op = accept_kw("all") ? SetOp::UnionAll : SetOp::Union;
      } else if (accept_kw("intersect")) {
        op = SetOp::Intersect;
      } else if (accept_kw("except")) {
        op = SetOp::Except;
      } else {
        break;
      }
      tail->set_op = op;
      tail->compound = std::make_unique<SelectStmt>(parse_select());
      tail = tail->compound.get();
    }
    accept_punct(";");
    expect_end();
    return stmt;
  }

 private:
  const Tok& cur() const { return toks_[pos_]; }
  const Tok& peek(std::size_t ahead = 1) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SqlParseError(msg + " near '" + cur().text + "'", cur().offset);
  }

  bool is_kw(const Tok& t, const char* kw) const {
    return t.type == TokType::Ident && iequals(t.text, kw);
  }
  bool at_kw(const char* kw) const { return is_kw(cur(), kw); }
  bool accept_kw(const char* kw) {
    if (at_kw(kw)) {
      advance();
      return true;
    }
    return false;
  }
  void expect_kw(const char* kw) {
    if (!accept_kw(kw)) fail(std::string("expected ") + kw);
  }
  bool at_punct(const char* p) const {
    return cur().type == TokType::Punct && cur().text == p;
  }
  bool accept_punct(const char* p) {
    if (at_punct(p)) {
      advance();
      return true;
    }
    return false;
  }
  void expect_punct(const char* p) {
    if (!accept_punct(p)) fail(std::string("expected '") + p + "'");
  }
  void expect_end() {
    if (cur().type != TokType::End) fail("trailing tokens after statement");
  }

  static std::optional<AggFn> agg_from(const std::string& name) {
    if (iequals(name, "max")) return AggFn::Max;
    if (iequals(name, "min")) return AggFn::Min;
    if (iequals(name, "count")) return AggFn::Count;
    if (iequals(name, "sum")) return AggFn::Sum;
    if (iequals(name, "avg")) return AggFn::Avg;
    return std::nullopt;
  }

  bool at_identifier() const {
    if (cur().type == TokType::DQuoted) return true;
    if (cur().type != TokType::Ident) return false;
    return reserved_words().count(strutil::to_lower(cur().text)) == 0;
  }

  std::string parse_identifier(const char* what) {
    if (!at_identifier()) fail(std::string("expected ") + what);
    std::string name = cur().text;
    advance();
    return name;
  }

  /// [table.]column or [table.]* or agg([DISTINCT] inner)
  ColumnTerm parse_column_term() {
    ColumnTerm term;
    if (cur().type == TokType::Ident && agg_from(cur().text) && peek().type == TokType::Punct &&
        peek().text == "(") {
      term.agg = *agg_from(cur().text);
      advance();
      expect_punct("(");
      if (accept_kw("distinct")) term.distinct = true;
      parse_plain_column(term);
      expect_punct(")");
      return term;
    }
    parse_plain_column(term);
    return term;
  }

  void parse_plain_column(ColumnTerm& term) {
    if (accept_punct("*")) {
      term.column = "*";
      return;
    }
    std::string first = parse_identifier("column name");
    if (accept_punct(".")) {
      term.table = std::move(first);
      if (accept_punct("*")) {
        term.column = "*";
      } else {
        term.column = parse_identifier("column name");
      }
    } else {
      term.column = std::move(first);
    }
  }

  ValueUnit parse_value_unit() {
    ValueUnit unit;
    unit.lhs = parse_column_term();
    if (at_punct("-") || at_punct("+") || at_punct("*") || at_punct("/")) {
      // '*' here is arithmetic only when a term follows; bare '*' was consumed above
      std::string op = cur().text;
      advance();
      unit.op = op == "-"   ? ArithOp::Sub
                : op == "+" ? ArithOp::Add
                : op == "*" ? ArithOp::Mul
                            : ArithOp::Div;
      unit.rhs = parse_column_term();
    }
    return unit;
  }

  SelectItem parse_select_item() {
    SelectItem item;
    item.expr = parse_value_unit();
    if (accept_kw("as")) item.alias = parse_identifier("alias");
    return item;
  }

  TableSource parse_table_source() {
    TableSource src;
    if (accept_punct("(")) {
      src.subquery = std::make_unique<SelectStmt>(parse_statement_inner());
      expect_punct(")");
    } else {
      src.table = parse_identifier("table name");
    }
    if (accept_kw("as")) {
      src.alias = parse_identifier("alias");
    } else if (at_identifier() && !at_clause_boundary()) {
      src.alias = parse_identifier("alias");
    }
    return src;
  }

  bool at_clause_boundary() const {
    static const char* kws[] = {"where", "group",     "having", "order", "limit", "join",
                                "on",    "union",     "intersect", "except", "inner", "cross"};
    for (const char* k : kws)
      if (at_kw(k)) return true;
    return false;
  }

  // a full statement including set ops, used for parenthesized subqueries
  SelectStmt parse_statement_inner() {
    SelectStmt stmt = parse_select();
    SelectStmt* tail = &stmt;
    while (true) {
      SetOp op = SetOp::None;
      if (accept_kw("union")) {
        op = accept_kw("all") ? SetOp::UnionAll : SetOp::Union;
      } else if (accept_kw("intersect")) {
        op = SetOp::Intersect;
      } else if (accept_kw("except")) {
        op = SetOp::Except;
      } else {
        break;
      }
      tail->set_op = op;
      tail->compound = std::make_unique<SelectStmt>(parse_select());
      tail = tail->compound.get();
    }
    return stmt;
  }

  SelectStmt parse_select() {
    SelectStmt stmt;
    expect_kw("select");
    if (accept_kw("distinct")) stmt.distinct = true;
    stmt.items.push_back(parse_select_item());
    while (accept_punct(",")) stmt.items.push_back(parse_select_item());
    expect_kw("from");
    stmt.from = parse_table_source();
    while (true) {
      if (accept_kw("join") || (accept_kw("inner") && (expect_kw("join"), true))) {
        JoinPart part;
        part.source = parse_table_source();
        if (accept_kw("on")) part.on = parse_bool_expr();
        stmt.joins.push_back(std::move(part));
      } else if (accept_punct(",")) {
        JoinPart part;
        part.cross = true;
        part.source = parse_table_source();
        stmt.joins.push_back(std::move(part));
      } else {
        break;
      }
    }
    if (accept_kw("where")) stmt.where = parse_bool_expr();
    if (accept_kw("group")) {
      expect_kw("by");
      stmt.group_by.push_back(parse_column_term());
      while (accept_punct(",")) stmt.group_by.push_back(parse_column_term());
      if (accept_kw("having")) stmt.having = parse_bool_expr();
    }
    if (accept_kw("order")) {
      expect_kw("by");
      stmt.order_by.push_back(parse_value_unit());
      while (accept_punct(",")) stmt.order_by.push_back(parse_value_unit());
      if (accept_kw("asc"))
        stmt.order_dir = OrderDir::Asc;
      else if (accept_kw("desc"))
        stmt.order_dir = OrderDir::Desc;
    }
    if (accept_kw("limit")) {
      bool neg = accept_punct("-");
      if (cur().type != TokType::Num) fail("expected LIMIT count");
      long long v = std::strtoll(cur().text.c_str(), nullptr, 10);
      stmt.limit = neg ? -v : v;
      advance();
    }
    return stmt;
  }

  BoolExpr parse_bool_expr() {  // OR over ANDs
    std::vector<BoolExpr> ors;
    ors.push_back(parse_and_expr());
    while (accept_kw("or")) ors.push_back(parse_and_expr());
    return BoolExpr::disjunction(std::move(ors));
  }

  BoolExpr parse_and_expr() {
    std::vector<BoolExpr> ands;
    ands.push_back(parse_bool_unit());
    while (accept_kw("and")) ands.push_back(parse_bool_unit());
    return BoolExpr::conjunction(std::move(ands));
  }

  BoolExpr parse_bool_unit() {
    if (at_punct("(") && !is_kw(peek(), "select")) {
      // parenthesized group (produced by predicate widening)
      expect_punct("(");
      BoolExpr inner = parse_bool_expr();
      expect_punct(")");
      return inner;
    }
    return BoolExpr::leaf_of(parse_condition());
  }

  Condition parse_condition() {
    Condition cond;
    cond.lhs = parse_value_unit();
    if (accept_kw("not")) {
      cond.negated = true;
      if (accept_kw("in")) {
        cond.op = CmpOp::In;
        cond.rhs = parse_in_operand();
        return cond;
      }
      if (accept_kw("like")) {
        cond.op = CmpOp::Like;
        cond.rhs = parse_operand();
        return cond;
      }
      if (accept_kw("between")) {
        cond.op = CmpOp::Between;
        cond.rhs = parse_operand();
        expect_kw("and");
        cond.rhs2 = parse_operand();
        return cond;
      }
      fail("expected IN, LIKE or BETWEEN after NOT");
    }
    if (accept_kw("in")) {
      cond.op = CmpOp::In;
      cond.rhs = parse_in_operand();
      return cond;
    }
    if (accept_kw("like")) {
      cond.op = CmpOp::Like;
      cond.rhs = parse_operand();
      return cond;
    }
    if (accept_kw("between")) {
      cond.op = CmpOp::Between;
      cond.rhs = parse_operand();
      expect_kw("and");
      cond.rhs2 = parse_operand();
      return cond;
    }
    if (accept_kw("is")) {
      cond.op = CmpOp::Is;
      if (accept_kw("not")) cond.negated = true;
      expect_kw("null");
      cond.rhs = Operand::literal(Literal::null());
      return cond;
    }
    if (cur().type == TokType::Punct) {
      std::string op = cur().text;
      CmpOp cmp;
      if (op == "=")
        cmp = CmpOp::Eq;
      else if (op == "!=" || op == "<>")
        cmp = CmpOp::Ne;
      else if (op == "<")
        cmp = CmpOp::Lt;
      else if (op == "<=")
        cmp = CmpOp::Le;
      else if (op == ">")
        cmp = CmpOp::Gt;
      else if (op == ">=")
        cmp = CmpOp::Ge;
      else
        fail("expected comparison operator");
      advance();
      cond.op = cmp;
      cond.rhs = parse_operand();
      return cond;
    }
    fail("expected comparison operator");
  }

  Operand parse_in_operand() {
    expect_punct("(");
    Operand op;
    if (at_kw("select")) {
      op.kind = Operand::Kind::Subquery;
      op.subquery = std::make_unique<SelectStmt>(parse_statement_inner());
    } else {
      op.kind = Operand::Kind::LitList;
      op.list.push_back(parse_literal());
      while (accept_punct(",")) op.list.push_back(parse_literal());
    }
    expect_punct(")");
    return op;
  }

  Literal parse_literal() {
    if (cur().type == TokType::Str || cur().type == TokType::DQuoted) {
      Literal l = Literal::str(cur().text);
      advance();
      return l;
    }
    bool neg = false;
    if (at_punct("-")) {
      neg = true;
      advance();
    }
    if (cur().type == TokType::Num) {
      std::string text = (neg ? "-" : "") + cur().text;
      Literal l;
      l.kind = cur().text.find('.') == std::string::npos &&
                       cur().text.find('e') == std::string::npos &&
                       cur().text.find('E') == std::string::npos
                   ? Literal::Kind::Int
                   : Literal::Kind::Real;
      l.text = text;
      l.num = std::strtod(text.c_str(), nullptr);
      advance();
      return l;
    }
    if (accept_kw("null")) return Literal::null();
    fail("expected literal");
  }

  Operand parse_operand() {
    if (at_punct("(") && is_kw(peek(), "select")) {
      expect_punct("(");
      Operand op;
      op.kind = Operand::Kind::Subquery;
      op.subquery = std::make_unique<SelectStmt>(parse_statement_inner());
      expect_punct(")");
      return op;
    }
    if (cur().type == TokType::Str || cur().type == TokType::Num || at_punct("-") ||
        at_kw("null")) {
      return Operand::literal(parse_literal());
    }
    if (cur().type == TokType::DQuoted) {
      // double-quoted token in value position reads as a string literal,
      // matching the engine's lenient treatment in corpus SQL
      Literal l = Literal::str(cur().text);
      advance();
      return Operand::literal(std::move(l));
    }
    Operand op;
    op.kind = Operand::Kind::Col;
    op.col = parse_column_term();
    return op;
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SqlTree parse(std::string_view sql) {
  Parser p(sql);
  return p.parse_statement();
}

// ---------------------------------------------------------------------------
// Render
// ---------------------------------------------------------------------------

namespace {

bool bare_identifier_ok(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '$') return false;
  return reserved_words().count(strutil::to_lower(name)) == 0;
}

std::string quote_ident(const std::string& name) {
  if (bare_identifier_ok(name)) return name;
  std::string out = "\"";
  for (char c : name) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  out.push_back('"');
  return out;
}

std::string render_literal(const Literal& lit) {
  switch (lit.kind) {
    case Literal::Kind::Null: return "NULL";
    case Literal::Kind::Int:
    case Literal::Kind::Real: return lit.text;
    case Literal::Kind::Str: {
      std::string out = "'";
      for (char c : lit.text) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
      }
      out.push_back('\'');
      return out;
    }
  }
  return "NULL";
}

const char* agg_name(AggFn f) {
  switch (f) {
    case AggFn::Max: return "max";
    case AggFn::Min: return "min";
    case AggFn::Count: return "count";
    case AggFn::Sum: return "sum";
    case AggFn::Avg: return "avg";
    case AggFn::None: return "";
  }
  return "";
}

std::string render_column_term(const ColumnTerm& t) {
  std::string col = t.is_star() ? "*" : quote_ident(t.column);
  std::string qualified = t.table.empty() ? col : quote_ident(t.table) + "." + col;
  if (t.agg == AggFn::None) return qualified;
  std::string inner = t.distinct ? "DISTINCT " + qualified : qualified;
  return std::string(agg_name(t.agg)) + "(" + inner + ")";
}

std::string render_value_unit(const ValueUnit& u) {
  std::string out = render_column_term(u.lhs);
  if (u.op != ArithOp::None) {
    const char* op = u.op == ArithOp::Sub   ? "-"
                     : u.op == ArithOp::Add ? "+"
                     : u.op == ArithOp::Mul ? "*"
                                            : "/";
    out += std::string(" ") + op + " " + render_column_term(u.rhs);
  }
  return out;
}

std::string render_stmt(const SelectStmt& s);

std::string render_operand(const Operand& op) {
  switch (op.kind) {
    case Operand::Kind::Lit: return render_literal(op.lit);
    case Operand::Kind::Col: return render_column_term(op.col);
    case Operand::Kind::Subquery: return "(" + render_stmt(*op.subquery) + ")";
    case Operand::Kind::LitList: {
      std::string out = "(";
      for (std::size_t i = 0; i < op.list.size(); ++i) {
        if (i) out += ", ";
        out += render_literal(op.list[i]);
      }
      out += ")";
      return out;
    }
  }
  return "";
}

std::string render_condition(const Condition& c) {
  std::string lhs = render_value_unit(c.lhs);
  switch (c.op) {
    case CmpOp::In:
      return lhs + (c.negated ? " NOT IN " : " IN ") + render_operand(c.rhs);
    case CmpOp::Like:
      return lhs + (c.negated ? " NOT LIKE " : " LIKE ") + render_operand(c.rhs);
    case CmpOp::Between:
      return lhs + (c.negated ? " NOT BETWEEN " : " BETWEEN ") + render_operand(c.rhs) +
             " AND " + render_operand(c.rhs2);
    case CmpOp::Is:
      return lhs + (c.negated ? " IS NOT NULL" : " IS NULL");
    case CmpOp::Eq: return lhs + " = " + render_operand(c.rhs);
    case CmpOp::Ne: return lhs + " != " + render_operand(c.rhs);
    case CmpOp::Lt: return lhs + " < " + render_operand(c.rhs);
    case CmpOp::Le: return lhs + " <= " + render_operand(c.rhs);
    case CmpOp::Gt: return lhs + " > " + render_operand(c.rhs);
    case CmpOp::Ge: return lhs + " >= " + render_operand(c.rhs);
  }
  return lhs;
}

std::string render_bool(const BoolExpr& e, bool parenthesize_or) {
  switch (e.kind) {
    case BoolExpr::Kind::Leaf: return render_condition(e.leaf);
    case BoolExpr::Kind::And: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += " AND ";
        out += render_bool(e.children[i], /*parenthesize_or=*/true);
      }
      return out;
    }
    case BoolExpr::Kind::Or: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += " OR ";
        out += render_bool(e.children[i], false);
      }
      if (parenthesize_or) return "(" + out + ")";
      return out;
    }
  }
  return "";
}

std::string render_table_source(const TableSource& src) {
  std::string out =
      src.subquery ? "(" + render_stmt(*src.subquery) + ")" : quote_ident(src.table);
  if (!src.alias.empty()) out += " AS " + quote_ident(src.alias);
  return out;
}

std::string render_stmt(const SelectStmt& s) {
  std::string out = "SELECT ";
  if (s.distinct) out += "DISTINCT ";
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ", ";
    out += render_value_unit(s.items[i].expr);
    if (!s.items[i].alias.empty()) out += " AS " + quote_ident(s.items[i].alias);
  }
  out += " FROM " + render_table_source(s.from);
  for (const auto& j : s.joins) {
    out += j.cross ? ", " : " JOIN ";
    out += render_table_source(j.source);
    if (j.on) out += " ON " + render_bool(*j.on, false);
  }
  if (s.where) out += " WHERE " + render_bool(*s.where, false);
  if (!s.group_by.empty()) {
    out += " GROUP BY ";
    for (std::size_t i = 0; i < s.group_by.size(); ++i) {
      if (i) out += ", ";
      out += render_column_term(s.group_by[i]);
    }
    if (s.having) out += " HAVING " + render_bool(*s.having, false);
  }
  if (!s.order_by.empty()) {
    out += " ORDER BY ";
    for (std::size_t i = 0; i < s.order_by.size(); ++i) {
      if (i) out += ", ";
      out += render_value_unit(s.order_by[i]);
    }
    if (s.order_dir == OrderDir::Asc) out += " ASC";
    if (s.order_dir == OrderDir::Desc) out += " DESC";
  }
  if (s.limit) out += " LIMIT " + std::to_string(*s.limit);
  if (s.set_op != SetOp::None && s.compound) {
    const char* op = s.set_op == SetOp::Union      ? " UNION "
                     : s.set_op == SetOp::UnionAll ? " UNION ALL "
                     : s.set_op == SetOp::Intersect ? " INTERSECT "
                                                    : " EXCEPT ";
    out += op + render_stmt(*s.compound);
  }
  return out;
}

}  // namespace

std::string render(const SqlTree& tree) { return render_stmt(tree); }

// ---------------------------------------------------------------------------
// Scope resolution and tree walking
// ---------------------------------------------------------------------------

namespace {

struct Scope {
  // (alias-or-name, base table) in FROM order; subquery sources excluded
  std::vector<std::pair<std::string, std::string>> sources;
  bool has_subquery_source = false;
  const SchemaDef* schema = nullptr;

  static Scope of(const SelectStmt& s, const SchemaDef& schema) {
    Scope scope;
    scope.schema = &schema;
    auto add = [&](const TableSource& src) {
      if (src.subquery) {
        scope.has_subquery_source = true;
        return;
      }
      scope.sources.emplace_back(src.alias.empty() ? src.table : src.alias, src.table);
    };
    add(s.from);
    for (const auto& j : s.joins) add(j.source);
    return scope;
  }

  /// Resolves a term to its base table; empty optional when the term refers
  /// to a derived (subquery) column. Throws UnknownTable on hard failures.
  std::optional<std::string> resolve_table(const ColumnTerm& term) const {
    if (!term.table.empty()) {
      for (const auto& [name, base] : sources)
        if (iequals(name, term.table)) return base;
      // qualified by base name even when aliased
      for (const auto& [name, base] : sources)
        if (iequals(base, term.table)) return base;
      if (has_subquery_source) return std::nullopt;
      throw Error(Errc::UnknownTable, "cannot resolve table alias '" + term.table + "'");
    }
    std::vector<std::string> holders;
    for (const auto& [name, base] : sources) {
      ColumnRef ref{base, term.column};
      if (schema->has_column(ref)) {
        if (holders.empty() || !iequals(holders.back(), base)) holders.push_back(base);
      }
    }
    if (!holders.empty()) return holders.front();
    if (has_subquery_source) return std::nullopt;
    if (sources.size() == 1) return sources.front().second;
    throw Error(Errc::UnknownTable,
                "cannot resolve column '" + term.column + "' to a table");
  }
};

template <typename Fn>
void for_each_select(SelectStmt& s, Fn&& fn);

template <typename Fn>
void for_each_operand_select(Operand& op, Fn& fn) {
  if (op.kind == Operand::Kind::Subquery && op.subquery) for_each_select(*op.subquery, fn);
}

template <typename Fn>
void for_each_bool_operand(BoolExpr& e, Fn& fn) {
  if (e.kind == BoolExpr::Kind::Leaf) {
    for_each_operand_select(e.leaf.rhs, fn);
    for_each_operand_select(e.leaf.rhs2, fn);
  } else {
    for (auto& c : e.children) for_each_bool_operand(c, fn);
  }
}

template <typename Fn>
void for_each_select(SelectStmt& s, Fn&& fn) {
  fn(s);
  if (s.from.subquery) for_each_select(*s.from.subquery, fn);
  for (auto& j : s.joins)
    if (j.source.subquery) for_each_select(*j.source.subquery, fn);
  if (s.where) for_each_bool_operand(*s.where, fn);
  if (s.having) for_each_bool_operand(*s.having, fn);
  if (s.compound) for_each_select(*s.compound, fn);
}

template <typename Fn>
void for_each_condition(BoolExpr& e, Fn&& fn) {
  if (e.kind == BoolExpr::Kind::Leaf) {
    fn(e.leaf);
  } else {
    for (auto& c : e.children) for_each_condition(c, fn);
  }
}

// Visits every ColumnTerm of one select (not recursing into subqueries).
template <typename Fn>
void for_each_term_local(SelectStmt& s, Fn&& fn) {
  for (auto& item : s.items) {
    fn(item.expr.lhs);
    if (item.expr.op != ArithOp::None) fn(item.expr.rhs);
  }
  auto visit_bool = [&](BoolExpr& e) {
    for_each_condition(e, [&](Condition& c) {
      fn(c.lhs.lhs);
      if (c.lhs.op != ArithOp::None) fn(c.lhs.rhs);
      if (c.rhs.kind == Operand::Kind::Col) fn(c.rhs.col);
      if (c.rhs2.kind == Operand::Kind::Col) fn(c.rhs2.col);
    });
  };
  for (auto& j : s.joins)
    if (j.on) visit_bool(*j.on);
  if (s.where) visit_bool(*s.where);
  for (auto& g : s.group_by) fn(g);
  if (s.having) visit_bool(*s.having);
  for (auto& o : s.order_by) {
    fn(o.lhs);
    if (o.op != ArithOp::None) fn(o.rhs);
  }
}

const char* cmp_token(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Like: return "LIKE";
    case CmpOp::In: return "IN";
    case CmpOp::Is: return "IS";
    case CmpOp::Between: return "BETWEEN";
  }
  return "=";
}

}  // namespace

// ---------------------------------------------------------------------------
// extract_refs
// ---------------------------------------------------------------------------

SqlRefs extract_refs(const SqlTree& tree, const SchemaDef& schema) {
  SqlRefs refs;
  auto push_pair = [&](std::string a, std::string b) {
    if (strutil::to_lower(a) > strutil::to_lower(b)) std::swap(a, b);
    std::pair<std::string, std::string> p{std::move(a), std::move(b)};
    for (const auto& q : refs.joined_tables)
      if (iequals(q.first, p.first) && iequals(q.second, p.second)) return;
    refs.joined_tables.push_back(std::move(p));
  };

  SqlTree copy = tree;  // walker API is mutable; we only read

  // Projection columns: the top-level statement and its compound chain.
  // Subquery scopes do not project for the statement.
  auto collect_projection = [&](const SelectStmt& s) {
    auto add_term = [&](const ColumnTerm& t) {
      if (t.is_star()) return;
      Scope scope = Scope::of(s, schema);
      auto base = scope.resolve_table(t);
      if (!base) return;  // derived column
      ColumnRef ref{*base, t.column};
      for (const auto& r : refs.select_columns)
        if (same_ref(r, ref)) return;
      refs.select_columns.push_back(std::move(ref));
    };
    for (const auto& item : s.items) {
      add_term(item.expr.lhs);
      if (item.expr.op != ArithOp::None) add_term(item.expr.rhs);
    }
  };
  for (const SelectStmt* s = &tree; s; s = s->compound.get()) collect_projection(*s);

  // Literal-comparing atoms and join pairs across every scope.
  for_each_select(copy, [&](SelectStmt& s) {
    Scope scope = Scope::of(s, schema);
    auto visit_where = [&](BoolExpr& e) {
      for_each_condition(e, [&](Condition& c) {
        if (c.lhs.op != ArithOp::None || c.lhs.lhs.is_star()) return;
        if (c.lhs.lhs.agg != AggFn::None) return;
        const Literal* lit = nullptr;
        if (c.rhs.kind == Operand::Kind::Lit && c.rhs.lit.kind != Literal::Kind::Null)
          lit = &c.rhs.lit;
        else if (c.rhs.kind == Operand::Kind::LitList && !c.rhs.list.empty())
          lit = &c.rhs.list.front();
        if (!lit) return;
        auto base = scope.resolve_table(c.lhs.lhs);
        if (!base) return;
        refs.where_atoms.push_back(
            WhereAtom{ColumnRef{*base, c.lhs.lhs.column}, cmp_token(c.op), *lit});
      });
    };
    if (s.where) visit_where(*s.where);

    auto resolve_src = [&](const TableSource& src) -> std::optional<std::string> {
      if (src.subquery) return std::nullopt;
      return src.table;
    };
    std::optional<std::string> prev = resolve_src(s.from);
    for (auto& j : s.joins) {
      std::optional<std::string> right = resolve_src(j.source);
      bool paired_from_on = false;
      if (j.on) {
        for_each_condition(*j.on, [&](Condition& c) {
          if (c.rhs.kind != Operand::Kind::Col) return;
          try {
            auto a = scope.resolve_table(c.lhs.lhs);
            auto b = scope.resolve_table(c.rhs.col);
            if (a && b && !iequals(*a, *b)) {
              push_pair(*a, *b);
              paired_from_on = true;
            }
          } catch (const Error&) {
            // unresolvable ON columns fall back to adjacency below
          }
        });
      }
      if (!paired_from_on && prev && right && !iequals(*prev, *right))
        push_pair(*prev, *right);
      if (right) prev = right;
    }
  });

  return refs;
}

// ---------------------------------------------------------------------------
// rewrite
// ---------------------------------------------------------------------------

RewriteSpec RewriteSpec::substitute_column(ColumnRef old_ref, ColumnRef new_ref) {
  RewriteSpec s;
  s.kind = Kind::SubstituteColumn;
  s.old_column = std::move(old_ref);
  s.new_column = std::move(new_ref);
  return s;
}

RewriteSpec RewriteSpec::substitute_literal(std::string old_lit, std::string new_lit) {
  RewriteSpec s;
  s.kind = Kind::SubstituteLiteral;
  s.old_literal = std::move(old_lit);
  s.new_literal = std::move(new_lit);
  return s;
}

RewriteSpec RewriteSpec::add_projection(std::vector<ColumnRef> refs) {
  RewriteSpec s;
  s.kind = Kind::AddProjection;
  s.add_columns = std::move(refs);
  return s;
}

RewriteSpec RewriteSpec::widen_predicate(ColumnRef old_ref, std::vector<ColumnRef> candidates) {
  RewriteSpec s;
  s.kind = Kind::WidenPredicate;
  s.widen_old = std::move(old_ref);
  s.widen_candidates = std::move(candidates);
  return s;
}

namespace {

bool literal_matches(const Literal& lit, const std::string& spec_literal) {
  std::string stripped = strip_one_quote_level(spec_literal);
  if (lit.kind == Literal::Kind::Str) return lit.text == stripped;
  if (lit.is_number() && looks_numeric(stripped))
    return lit.num == std::strtod(stripped.c_str(), nullptr);
  return false;
}

int substitute_column_in(SelectStmt& root, const ColumnRef& old_ref, const ColumnRef& new_ref,
                         const SchemaDef& schema) {
  int replaced = 0;
  for_each_select(root, [&](SelectStmt& s) {
    Scope scope = Scope::of(s, schema);
    for_each_term_local(s, [&](ColumnTerm& term) {
      if (term.is_star()) return;
      if (!iequals(term.column, old_ref.column)) return;
      std::optional<std::string> base;
      try {
        base = scope.resolve_table(term);
      } catch (const Error&) {
        return;
      }
      if (!base || !iequals(*base, old_ref.table)) return;
      term.column = new_ref.column;
      ++replaced;
    });
  });
  return replaced;
}

int substitute_literal_in(SelectStmt& root, const std::string& old_lit,
                          const std::string& new_lit) {
  int replaced = 0;
  Literal replacement = Literal::from_raw(new_lit);
  for_each_select(root, [&](SelectStmt& s) {
    auto visit = [&](BoolExpr& e) {
      for_each_condition(e, [&](Condition& c) {
        for (Operand* op : {&c.rhs, &c.rhs2}) {
          if (op->kind == Operand::Kind::Lit && literal_matches(op->lit, old_lit)) {
            op->lit = replacement;
            ++replaced;
          } else if (op->kind == Operand::Kind::LitList) {
            for (auto& l : op->list)
              if (literal_matches(l, old_lit)) {
                l = replacement;
                ++replaced;
              }
          }
        }
      });
    };
    if (s.where) visit(*s.where);
    if (s.having) visit(*s.having);
  });
  return replaced;
}

int add_projection_in(SelectStmt& root, const std::vector<ColumnRef>& refs,
                      const SchemaDef& schema) {
  Scope scope = Scope::of(root, schema);
  for (const auto& ref : refs) {
    std::string written_table;
    bool found = false;
    for (const auto& [name, base] : scope.sources) {
      if (iequals(base, ref.table)) {
        written_table = name;
        found = true;
        break;
      }
    }
    if (!found)
      throw Error(Errc::RefNotFound, "AddProjection: table '" + ref.table + "' not in scope");
    bool single_plain = scope.sources.size() == 1 &&
                        iequals(scope.sources.front().first, scope.sources.front().second);
    SelectItem item;
    item.expr.lhs.table = single_plain ? std::string{} : written_table;
    item.expr.lhs.column = ref.column;
    root.items.push_back(std::move(item));
  }
  return static_cast<int>(refs.size());
}

int widen_predicate_in(SelectStmt& root, const ColumnRef& old_ref,
                       const std::vector<ColumnRef>& candidates, const SchemaDef& schema) {
  int widened = 0;
  for_each_select(root, [&](SelectStmt& s) {
    if (!s.where) return;
    Scope scope = Scope::of(s, schema);
    auto widen_tree = [&](auto&& self, BoolExpr& e) -> void {
      if (e.kind != BoolExpr::Kind::Leaf) {
        for (auto& c : e.children) self(self, c);
        return;
      }
      Condition& cond = e.leaf;
      if (cond.op != CmpOp::Eq || cond.negated) return;
      if (cond.lhs.op != ArithOp::None) return;
      const ColumnTerm& term = cond.lhs.lhs;
      if (term.agg != AggFn::None || term.is_star()) return;
      if (!iequals(term.column, old_ref.column)) return;
      std::optional<std::string> base;
      try {
        base = scope.resolve_table(term);
      } catch (const Error&) {
        return;
      }
      if (!base || !iequals(*base, old_ref.table)) return;
      std::vector<BoolExpr> alts;
      for (const auto& cand : candidates) {
        Condition alt = cond;
        alt.lhs.lhs.column = cand.column;
        alts.push_back(BoolExpr::leaf_of(std::move(alt)));
      }
      e = BoolExpr::disjunction(std::move(alts));
      ++widened;
    };
    widen_tree(widen_tree, *s.where);
  });
  return widened;
}

}  // namespace

SqlTree rewrite(const SqlTree& tree, const RewriteSpec& spec, const SchemaDef& schema) {
  SqlTree out = tree;
  int hits = 0;
  switch (spec.kind) {
    case RewriteSpec::Kind::SubstituteColumn:
      hits = substitute_column_in(out, spec.old_column, spec.new_column, schema);
      if (hits == 0)
        throw Error(Errc::RefNotFound,
                    "SubstituteColumn: '" + spec.old_column.qualified() + "' not found");
      break;
    case RewriteSpec::Kind::SubstituteLiteral:
      hits = substitute_literal_in(out, spec.old_literal, spec.new_literal);
      if (hits == 0)
        throw Error(Errc::RefNotFound,
                    "SubstituteLiteral: literal '" + spec.old_literal + "' not found");
      break;
    case RewriteSpec::Kind::AddProjection:
      add_projection_in(out, spec.add_columns, schema);
      break;
    case RewriteSpec::Kind::WidenPredicate:
      hits = widen_predicate_in(out, spec.widen_old, spec.widen_candidates, schema);
      if (hits == 0)
        throw Error(Errc::RefNotFound,
                    "WidenPredicate: no equality atom on '" + spec.widen_old.qualified() + "'");
      break;
  }
  return out;
}

bool result_effectively_empty(const SqlTree& tree, const ResultTable& result) {
  if (result.rows.empty()) return true;
  if (result.rows.size() != 1) return false;
  for (const auto& item : tree.items)
    if (item.expr.lhs.agg == AggFn::None) return false;
  for (std::size_t i = 0; i < result.rows[0].size(); ++i) {
    const Cell& cell = result.rows[0][i];
    if (cell.is_null()) continue;
    bool zero = (cell.kind == Cell::Kind::Int && cell.i == 0) ||
                (cell.kind == Cell::Kind::Real && cell.r == 0.0);
    if (!zero) return false;
  }
  return true;
}

}  // namespace practiq::sqlkit
