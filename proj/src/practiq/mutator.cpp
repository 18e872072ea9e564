#include "practiq/mutator.hpp"

#include <algorithm>
#include <cmath>

#include "practiq/bench.hpp"
#include "practiq/sqlkit.hpp"
#include "practiq/strutil.hpp"

namespace practiq::mutator {

using sqlkit::RewriteSpec;
using sqlkit::SqlTree;
using strutil::iequals;

namespace {

std::string schema_markdown(corpus::DatabaseHandle& db, const SchemaDef& schema) {
  return bench::render_schema_markdown(schema, bench::collect_value_samples(db, schema));
}

Cell literal_to_cell(const sqlkit::Literal& lit) {
  switch (lit.kind) {
    case sqlkit::Literal::Kind::Str: return Cell::of(lit.text);
    case sqlkit::Literal::Kind::Int:
      return Cell::of(static_cast<std::int64_t>(std::llround(lit.num)));
    case sqlkit::Literal::Kind::Real: return Cell::of(lit.num);
    case sqlkit::Literal::Kind::Null: return Cell::null();
  }
  return Cell::null();
}

struct ParsedSeed {
  SqlTree tree;
  SchemaDef schema;  // live schema of the working copy before mutation
  sqlkit::SqlRefs refs;
};

// Parses the gold SQL and resolves its references against the working copy.
std::optional<ParsedSeed> analyze_seed(MutationContext& ctx, MutationOutcome& failure) {
  ParsedSeed seed;
  try {
    seed.tree = sqlkit::parse(ctx.example.gold_sql);
  } catch (const SqlParseError& e) {
    failure = MutationOutcome::skipped(SkipReason::GoldUnparsable, e.what());
    return std::nullopt;
  }
  seed.schema = corpus::introspect_schema(ctx.db, ctx.example.db_id);
  try {
    seed.refs = sqlkit::extract_refs(seed.tree, seed.schema);
  } catch (const Error& e) {
    failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet, e.what());
    return std::nullopt;
  }
  return seed;
}

MutationRecord base_record(const MutationContext& ctx, CategoryLabel category) {
  MutationRecord record;
  record.category = category;
  record.seed_example_id = ctx.example.example_id;
  record.db_id = ctx.example.db_id;
  record.original_question = ctx.example.question;
  record.mutated_question = ctx.example.question;
  record.gold_sql = ctx.example.gold_sql;
  return record;
}

std::vector<Cell> perturbed_copy(const std::vector<Cell>& values, bool numeric,
                                 const Cell* preserve) {
  if (!numeric) return values;
  std::vector<Cell> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    if (preserve && v == *preserve) {
      out.push_back(v);
      continue;
    }
    if (v.kind == Cell::Kind::Int)
      out.push_back(Cell::of(static_cast<std::int64_t>(std::llround(v.i * 1.1))));
    else if (v.kind == Cell::Kind::Real)
      out.push_back(Cell::of(v.r * 1.1));
    else
      out.push_back(v);
  }
  return out;
}

/// Runs the provider call, mapping refusals and retry exhaustion to skips.
template <typename Fn>
std::optional<MutationOutcome> provider_guard(Fn&& fn) {
  try {
    fn();
    return std::nullopt;
  } catch (const Error& e) {
    if (e.code() == Errc::ProviderRefusal || e.code() == Errc::RateLimited ||
        e.code() == Errc::TagMissing)
      return MutationOutcome::skipped(SkipReason::ProviderRefusal, e.what());
    throw;
  }
}

bool contains_value(const std::vector<Cell>& values, const Cell& v) {
  return std::find(values.begin(), values.end(), v) != values.end();
}

std::optional<MutationOutcome> apply_deltas(MutationContext& ctx, const MutationRecord& record) {
  try {
    for (const auto& delta : record.deltas) corpus::apply_delta(ctx.db, delta);
  } catch (const Error& e) {
    if (e.code() == Errc::DeltaConflict)
      return MutationOutcome::skipped(SkipReason::DeltaConflict, e.what());
    throw;
  }
  return std::nullopt;
}

/// Two provider synonym columns, validated against the removed column.
struct SynonymPair {
  ColumnRef c1, c2;
};

std::optional<SynonymPair> request_synonyms(MutationContext& ctx, const SchemaDef& schema,
                                            const ColumnRef& target,
                                            MutationOutcome& failure) {
  std::vector<ColumnRef> synonyms;
  auto err = provider_guard([&] {
    auto req = provider::make_synonym_columns_request(schema_markdown(ctx.db, schema), target,
                                                      ctx.example.question, ctx.example.gold_sql);
    synonyms = provider::parse_synonym_columns(ctx.provider.complete(req).text);
  });
  if (err) {
    failure = std::move(*err);
    return std::nullopt;
  }
  if (synonyms.size() < 2) {
    failure = MutationOutcome::skipped(SkipReason::ProviderRefusal, "fewer than two synonyms");
    return std::nullopt;
  }
  SynonymPair pair{synonyms[0], synonyms[1]};
  pair.c1.table = target.table;  // synonyms live in the mutated table
  pair.c2.table = target.table;
  if (iequals(pair.c1.column, target.column) || iequals(pair.c2.column, target.column) ||
      iequals(pair.c1.column, pair.c2.column) || pair.c1.column.empty() ||
      pair.c2.column.empty()) {
    failure = MutationOutcome::skipped(SkipReason::ProviderRefusal,
                                       "degenerate synonym columns for " + target.qualified());
    return std::nullopt;
  }
  return pair;
}

std::optional<MutationOutcome> candidates_must_execute(MutationContext& ctx,
                                                       const MutationRecord& record,
                                                       bool require_rows) {
  for (const auto& sql : record.clarified_sql_candidates) {
    try {
      ResultTable result = sqlkit::execute(ctx.db, sql);
      if (require_rows && result.rows.empty())
        return MutationOutcome::skipped(SkipReason::InsufficientRows,
                                        "candidate returned no rows: " + sql);
    } catch (const ExecError& e) {
      return MutationOutcome::skipped(SkipReason::CandidateExecFailed, e.what());
    }
  }
  return std::nullopt;
}

std::string literal_display(const sqlkit::Literal& lit) { return lit.text; }

}  // namespace

// ---------------------------------------------------------------------------
// Ambiguous SELECT column
// ---------------------------------------------------------------------------

MutationOutcome mutate_ambiguous_select(MutationContext& ctx) {
  MutationOutcome failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet);
  auto seed = analyze_seed(ctx, failure);
  if (!seed) return failure;

  const ColumnRef* target = nullptr;
  for (const auto& ref : seed->refs.select_columns) {
    if (!seed->schema.is_key(ref) && seed->schema.has_column(ref)) {
      target = &ref;
      break;
    }
  }
  if (!target)
    return MutationOutcome::skipped(SkipReason::PreconditionNotMet,
                                    "no non-key SELECT column to mutate");

  auto synonyms = request_synonyms(ctx, seed->schema, *target, failure);
  if (!synonyms) return failure;

  const ColumnDef* col = seed->schema.find_column(*target);
  bool numeric = col && col->col_type == ColType::Number;
  std::vector<Cell> original = corpus::read_column_values(ctx.db, *target);

  MutationRecord record = base_record(ctx, CategoryLabel::AmbiguousSelectColumn);
  record.target.column = *target;
  record.introduced_columns = {synonyms->c1, synonyms->c2};
  record.deltas = {
      DbDelta::remove_column(*target),
      DbDelta::add_column(synonyms->c1, col ? col->col_type : ColType::Text, original),
      DbDelta::add_column(synonyms->c2, col ? col->col_type : ColType::Text,
                          perturbed_copy(original, numeric, nullptr)),
  };

  for (const auto& cand : record.introduced_columns) {
    SqlTree rewritten =
        sqlkit::rewrite(seed->tree, RewriteSpec::substitute_column(*target, cand), seed->schema);
    record.clarified_sql_candidates.push_back(sqlkit::render(rewritten));
    record.candidate_targets.push_back(cand.column);
  }

  if (auto err = apply_deltas(ctx, record)) return *err;
  if (auto err = candidates_must_execute(ctx, record, /*require_rows=*/false)) return *err;
  return MutationOutcome::success(std::move(record));
}

// ---------------------------------------------------------------------------
// Ambiguous WHERE column
// ---------------------------------------------------------------------------

MutationOutcome mutate_ambiguous_where(MutationContext& ctx) {
  MutationOutcome failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet);
  auto seed = analyze_seed(ctx, failure);
  if (!seed) return failure;

  const sqlkit::WhereAtom* atom = nullptr;
  for (const auto& a : seed->refs.where_atoms) {
    if (a.comparator == "=" && !seed->schema.is_key(a.column) &&
        seed->schema.has_column(a.column)) {
      atom = &a;
      break;
    }
  }
  if (!atom)
    return MutationOutcome::skipped(SkipReason::PreconditionNotMet,
                                    "no equality atom on a non-key column");

  Cell filter_value = literal_to_cell(atom->literal);
  std::vector<Cell> original = corpus::read_column_values(ctx.db, atom->column);
  if (!contains_value(original, filter_value))
    return MutationOutcome::skipped(SkipReason::FilterValueAbsent,
                                    "filter literal not present in " + atom->column.qualified());

  auto synonyms = request_synonyms(ctx, seed->schema, atom->column, failure);
  if (!synonyms) return failure;

  const ColumnDef* col = seed->schema.find_column(atom->column);
  bool numeric = col && col->col_type == ColType::Number;

  MutationRecord record = base_record(ctx, CategoryLabel::AmbiguousWhereColumn);
  record.target.column = atom->column;
  record.target.literal = literal_display(atom->literal);
  record.introduced_columns = {synonyms->c1, synonyms->c2};
  record.deltas = {
      DbDelta::remove_column(atom->column),
      DbDelta::add_column(synonyms->c1, col ? col->col_type : ColType::Text, original),
      // keep cells equal to the filter value intact so it stays present in
      // both interpretations
      DbDelta::add_column(synonyms->c2, col ? col->col_type : ColType::Text,
                          perturbed_copy(original, numeric, &filter_value)),
  };

  for (const auto& cand : record.introduced_columns) {
    SqlTree rewritten = sqlkit::rewrite(
        seed->tree, RewriteSpec::substitute_column(atom->column, cand), seed->schema);
    record.clarified_sql_candidates.push_back(sqlkit::render(rewritten));
    record.candidate_targets.push_back(cand.column);
  }

  if (auto err = apply_deltas(ctx, record)) return *err;
  if (auto err = candidates_must_execute(ctx, record, /*require_rows=*/false)) return *err;
  return MutationOutcome::success(std::move(record));
}

// ---------------------------------------------------------------------------
// Ambiguous values within column
// ---------------------------------------------------------------------------

MutationOutcome mutate_ambiguous_values(MutationContext& ctx) {
  MutationOutcome failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet);
  auto seed = analyze_seed(ctx, failure);
  if (!seed) return failure;

  // text literals only: "similar but not equivalent" is ill-defined for numbers
  const sqlkit::WhereAtom* atom = nullptr;
  for (const auto& a : seed->refs.where_atoms) {
    if (a.comparator == "=" && a.literal.kind == sqlkit::Literal::Kind::Str &&
        seed->schema.has_column(a.column)) {
      atom = &a;
      break;
    }
  }
  if (!atom)
    return MutationOutcome::skipped(SkipReason::PreconditionNotMet,
                                    "no equality atom with a text literal");

  const std::string value = atom->literal.text;
  std::vector<Cell> original = corpus::read_column_values(ctx.db, atom->column);
  if (!contains_value(original, Cell::of(value)))
    return MutationOutcome::skipped(SkipReason::InsufficientRows,
                                    "no rows hold '" + value + "'");

  std::vector<std::string> similar;
  auto err = provider_guard([&] {
    auto req = provider::make_similar_values_request(schema_markdown(ctx.db, seed->schema),
                                                     atom->column, value, ctx.example.question,
                                                     ctx.example.gold_sql);
    similar = provider::parse_string_list(ctx.provider.complete(req).text);
  });
  if (err) return *err;
  if (similar.size() < 2 || similar[0] == similar[1] || similar[0] == value ||
      similar[1] == value || similar[0].empty() || similar[1].empty())
    return MutationOutcome::skipped(SkipReason::ProviderRefusal, "degenerate similar values");

  MutationRecord record = base_record(ctx, CategoryLabel::AmbiguousValuesWithinColumn);
  record.target.column = atom->column;
  record.target.literal = value;
  record.introduced_values = {similar[0], similar[1]};
  record.deltas = {DbDelta::replace_cell_values(atom->column, Cell::of(value),
                                                {Cell::of(similar[0]), Cell::of(similar[1])})};

  for (const auto& v : record.introduced_values) {
    SqlTree rewritten =
        sqlkit::rewrite(seed->tree, RewriteSpec::substitute_literal(value, v), seed->schema);
    record.clarified_sql_candidates.push_back(sqlkit::render(rewritten));
    record.candidate_targets.push_back(v);
  }

  if (auto derr = apply_deltas(ctx, record)) return *derr;
  if (auto cerr = candidates_must_execute(ctx, record, /*require_rows=*/true)) return *cerr;
  return MutationOutcome::success(std::move(record));
}

// ---------------------------------------------------------------------------
// Ambiguous filter criteria (question mutated, database untouched)
// ---------------------------------------------------------------------------

MutationOutcome mutate_ambiguous_filter_criteria(MutationContext& ctx) {
  MutationOutcome failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet);
  auto seed = analyze_seed(ctx, failure);
  if (!seed) return failure;

  if (seed->refs.where_atoms.empty())
    return MutationOutcome::skipped(SkipReason::PreconditionNotMet, "no filterable literal");
  const sqlkit::WhereAtom& atom = seed->refs.where_atoms.front();

  std::string vague_question;
  auto err = provider_guard([&] {
    auto req = provider::make_vaguify_request(schema_markdown(ctx.db, seed->schema), atom.column,
                                              literal_display(atom.literal),
                                              ctx.example.question);
    vague_question = provider::parse_tagged(ctx.provider.complete(req).text, "result");
  });
  if (err) return *err;
  if (strutil::trim(vague_question) == strutil::trim(ctx.example.question) ||
      vague_question.empty())
    return MutationOutcome::skipped(SkipReason::QuestionUnchanged,
                                    "provider returned the question unmodified");

  MutationRecord record = base_record(ctx, CategoryLabel::AmbiguousFilterCriteria);
  record.target.column = atom.column;
  record.target.literal = literal_display(atom.literal);
  record.mutated_question = vague_question;
  record.clarified_sql_candidates = {ctx.example.gold_sql};
  record.candidate_targets = {literal_display(atom.literal)};

  if (auto cerr = candidates_must_execute(ctx, record, /*require_rows=*/false)) return *cerr;
  return MutationOutcome::success(std::move(record));
}

// ---------------------------------------------------------------------------
// Nonexistent SELECT column
// ---------------------------------------------------------------------------

MutationOutcome mutate_nonexistent_select(MutationContext& ctx) {
  MutationOutcome failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet);
  auto seed = analyze_seed(ctx, failure);
  if (!seed) return failure;

  const ColumnRef* target = nullptr;
  for (const auto& ref : seed->refs.select_columns) {
    if (!seed->schema.is_key(ref) && seed->schema.has_column(ref)) {
      target = &ref;
      break;
    }
  }
  if (!target)
    return MutationOutcome::skipped(SkipReason::PreconditionNotMet,
                                    "no non-key SELECT column to remove");

  // substitute preference: a text column in the same table, not a key, not
  // already projected (then any non-key column)
  auto projected = [&](const std::string& col) {
    for (const auto& ref : seed->refs.select_columns)
      if (iequals(ref.table, target->table) && iequals(ref.column, col)) return true;
    return false;
  };
  const TableDef* table = seed->schema.find_table(target->table);
  std::vector<ColumnRef> substitutes;
  for (int text_pass = 1; text_pass >= 0; --text_pass) {
    for (const auto& col : table->columns) {
      bool is_text = col.col_type == ColType::Text;
      if ((text_pass == 1) != is_text) continue;
      ColumnRef ref{target->table, col.name};
      if (iequals(col.name, target->column) || seed->schema.is_key(ref) || projected(col.name))
        continue;
      substitutes.push_back(std::move(ref));
    }
  }
  if (substitutes.empty())
    return MutationOutcome::skipped(SkipReason::NoSubstituteColumn,
                                    "no substitute column in " + target->table);

  MutationRecord record = base_record(ctx, CategoryLabel::NonexistentSelectColumn);
  record.target.column = *target;
  record.deltas = {DbDelta::remove_column(*target)};
  if (auto err = apply_deltas(ctx, record)) return *err;

  // the removal must actually break the original gold SQL
  try {
    sqlkit::execute(ctx.db, ctx.example.gold_sql);
    return MutationOutcome::skipped(SkipReason::ExecFailure,
                                    "gold SQL still executes after column removal");
  } catch (const ExecError& e) {
    if (e.kind() != ExecErrorKind::UnknownColumn)
      return MutationOutcome::skipped(SkipReason::ExecFailure, e.what());
  }

  for (const auto& sub : substitutes) {
    SqlTree rewritten =
        sqlkit::rewrite(seed->tree, RewriteSpec::substitute_column(*target, sub), seed->schema);
    std::string sql = sqlkit::render(rewritten);
    if (sqlkit::executes_ok(ctx.db, sql)) {
      record.clarified_sql_candidates = {sql};
      record.candidate_targets = {sub.column};
      return MutationOutcome::success(std::move(record));
    }
  }
  return MutationOutcome::skipped(SkipReason::NoSubstituteColumn,
                                  "no substitute produced an executable clarified SQL");
}

// ---------------------------------------------------------------------------
// Nonexistent WHERE column
// ---------------------------------------------------------------------------

namespace {

bool same_select_signature(const sqlkit::SqlRefs& a, const sqlkit::SqlRefs& b,
                           const SqlTree& tree_a, const SqlTree& tree_b) {
  auto as_set = [](const std::vector<ColumnRef>& refs) {
    std::vector<std::string> keys;
    for (const auto& r : refs) keys.push_back(strutil::to_lower(r.qualified()));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
  };
  auto sa = as_set(a.select_columns), sb = as_set(b.select_columns);
  if (sa != sb) return false;
  if (sa.empty()) {
    // star/aggregate-only projections: require matching FROM tables
    return strutil::iequals(tree_a.from.table, tree_b.from.table);
  }
  return true;
}

}  // namespace

MutationOutcome mutate_nonexistent_where(MutationContext& ctx) {
  MutationOutcome failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet);
  auto seed = analyze_seed(ctx, failure);
  if (!seed) return failure;

  const sqlkit::WhereAtom* atom = nullptr;
  for (const auto& a : seed->refs.where_atoms) {
    if (!seed->schema.is_key(a.column) && seed->schema.has_column(a.column)) {
      atom = &a;
      break;
    }
  }
  if (!atom)
    return MutationOutcome::skipped(SkipReason::PreconditionNotMet,
                                    "no removable WHERE column");

  MutationRecord record = base_record(ctx, CategoryLabel::NonexistentWhereColumn);
  record.target.column = atom->column;
  record.target.literal = literal_display(atom->literal);
  record.deltas = {DbDelta::remove_column(atom->column)};
  if (auto err = apply_deltas(ctx, record)) return *err;

  try {
    sqlkit::execute(ctx.db, ctx.example.gold_sql);
    return MutationOutcome::skipped(SkipReason::ExecFailure,
                                    "gold SQL still executes after column removal");
  } catch (const ExecError& e) {
    if (e.kind() != ExecErrorKind::UnknownColumn)
      return MutationOutcome::skipped(SkipReason::ExecFailure, e.what());
  }

  if (!ctx.same_db_examples)
    return MutationOutcome::skipped(SkipReason::NoMatchingSql, "no corpus pool supplied");

  for (const auto& other : *ctx.same_db_examples) {
    if (other.example_id == ctx.example.example_id) continue;
    SqlTree other_tree;
    sqlkit::SqlRefs other_refs;
    try {
      other_tree = sqlkit::parse(other.gold_sql);
      other_refs = sqlkit::extract_refs(other_tree, seed->schema);
    } catch (const Error&) {
      continue;
    }
    if (!same_select_signature(seed->refs, other_refs, seed->tree, other_tree)) continue;
    bool touches_removed = false;
    for (const auto& a : other_refs.where_atoms)
      if (same_ref(a.column, atom->column)) touches_removed = true;
    if (touches_removed) continue;
    if (!sqlkit::executes_ok(ctx.db, other.gold_sql)) continue;

    record.clarified_sql_candidates = {other.gold_sql};
    std::string target_str;
    if (!other_refs.where_atoms.empty())
      target_str = literal_display(other_refs.where_atoms.front().literal);
    else if (!other_refs.select_columns.empty())
      target_str = other_refs.select_columns.front().column;
    else
      target_str = other_tree.from.table;
    record.candidate_targets = {target_str};
    return MutationOutcome::success(std::move(record));
  }
  return MutationOutcome::skipped(SkipReason::NoMatchingSql,
                                  "no corpus SQL with matching SELECT columns survives");
}

// ---------------------------------------------------------------------------
// Nonexistent filter value
// ---------------------------------------------------------------------------

MutationOutcome mutate_nonexistent_filter_value(MutationContext& ctx) {
  MutationOutcome failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet);
  auto seed = analyze_seed(ctx, failure);
  if (!seed) return failure;

  const sqlkit::WhereAtom* atom = nullptr;
  Cell value;
  for (const auto& a : seed->refs.where_atoms) {
    if (a.comparator != "=" || !seed->schema.has_column(a.column)) continue;
    Cell v = literal_to_cell(a.literal);
    if (contains_value(corpus::read_column_values(ctx.db, a.column), v)) {
      atom = &a;
      value = v;
      break;
    }
  }
  if (!atom)
    return MutationOutcome::skipped(SkipReason::PreconditionNotMet,
                                    "no equality literal present in the database");

  std::vector<Cell> original = corpus::read_column_values(ctx.db, atom->column);
  std::vector<Cell> survivors;
  for (const auto& cell : original) {
    if (cell == value || cell.is_null()) continue;
    if (!contains_value(survivors, cell)) survivors.push_back(cell);
  }

  MutationRecord record = base_record(ctx, CategoryLabel::NonexistentFilterValue);
  record.target.column = atom->column;
  record.target.literal = literal_display(atom->literal);

  std::vector<Cell> alternates;
  if (!survivors.empty()) {
    record.deltas = {DbDelta::delete_rows_by_value(atom->column, value)};
    alternates = survivors;
  } else if (original.size() == 1 && value.kind == Cell::Kind::Text) {
    // lone row: replace rather than delete so the table stays non-empty
    Cell replacement = Cell::of(value.s + " 2");
    record.deltas = {
        DbDelta::replace_cell_values(atom->column, value, {replacement})};
    alternates = {replacement};
  } else {
    return MutationOutcome::skipped(SkipReason::NoAlternateValue,
                                    "column has a single distinct value");
  }

  if (auto err = apply_deltas(ctx, record)) return *err;

  // the question must now come back empty, not fail
  try {
    ResultTable gold_result = sqlkit::execute(ctx.db, ctx.example.gold_sql);
    if (!sqlkit::result_effectively_empty(seed->tree, gold_result))
      return MutationOutcome::skipped(SkipReason::ExecFailure,
                                      "gold SQL still returns data after value removal");
  } catch (const ExecError& e) {
    return MutationOutcome::skipped(SkipReason::ExecFailure, e.what());
  }

  for (const auto& alt : alternates) {
    std::string alt_text = alt.display();
    SqlTree rewritten;
    try {
      rewritten = sqlkit::rewrite(
          seed->tree, RewriteSpec::substitute_literal(literal_display(atom->literal), alt_text),
          seed->schema);
    } catch (const Error&) {
      continue;
    }
    std::string sql = sqlkit::render(rewritten);
    try {
      ResultTable result = sqlkit::execute(ctx.db, sql);
      if (result.rows.empty()) continue;
    } catch (const ExecError&) {
      continue;
    }
    record.clarified_sql_candidates = {sql};
    record.candidate_targets = {alt_text};
    for (const auto& s : alternates) {
      record.introduced_values.push_back(s.display());
      if (record.introduced_values.size() >= 4) break;
    }
    return MutationOutcome::success(std::move(record));
  }
  return MutationOutcome::skipped(SkipReason::NoAlternateValue,
                                  "no surviving value yields a non-empty clarified SQL");
}

// ---------------------------------------------------------------------------
// Unsupported join
// ---------------------------------------------------------------------------

MutationOutcome mutate_unsupported_join(MutationContext& ctx) {
  MutationOutcome failure = MutationOutcome::skipped(SkipReason::PreconditionNotMet);
  auto seed = analyze_seed(ctx, failure);
  if (!seed) return failure;
  if (seed->schema.tables.empty())
    return MutationOutcome::skipped(SkipReason::PreconditionNotMet, "schema has no tables");

  provider::DisconnectedTables generated;
  auto err = provider_guard([&] {
    auto req = provider::make_disconnected_tables_request(schema_markdown(ctx.db, seed->schema),
                                                          ctx.example.db_id);
    generated = provider::parse_disconnected_tables(ctx.provider.complete(req).text);
  });
  if (err) return *err;
  if (generated.question.empty())
    return MutationOutcome::skipped(SkipReason::ProviderRefusal, "no mutated question generated");

  int components_before = seed->schema.fk_component_count();

  MutationRecord record = base_record(ctx, CategoryLabel::UnsupportedJoin);
  record.mutated_question = generated.question;
  for (const auto& t : generated.tables) record.introduced_tables.push_back(t.name);
  record.deltas = {DbDelta::create_tables(generated.tables)};
  if (auto derr = apply_deltas(ctx, record)) return *derr;

  SchemaDef mutated = corpus::introspect_schema(ctx.db, ctx.example.db_id);
  if (mutated.fk_component_count() <= components_before)
    return MutationOutcome::skipped(SkipReason::DeltaConflict,
                                    "foreign-key components did not increase");

  // clarified response: a corpus SQL over the original tables only; the
  // seed's own gold SQL qualifies by construction
  record.clarified_sql_candidates = {ctx.example.gold_sql};
  record.candidate_targets = {seed->tree.from.table};
  if (auto cerr = candidates_must_execute(ctx, record, /*require_rows=*/false)) return *cerr;
  return MutationOutcome::success(std::move(record));
}

// ---------------------------------------------------------------------------

MutationOutcome mutate_category(CategoryLabel category, MutationContext& ctx) {
  switch (category) {
    case CategoryLabel::AmbiguousSelectColumn: return mutate_ambiguous_select(ctx);
    case CategoryLabel::AmbiguousWhereColumn: return mutate_ambiguous_where(ctx);
    case CategoryLabel::AmbiguousValuesWithinColumn: return mutate_ambiguous_values(ctx);
    case CategoryLabel::AmbiguousFilterCriteria: return mutate_ambiguous_filter_criteria(ctx);
    case CategoryLabel::NonexistentSelectColumn: return mutate_nonexistent_select(ctx);
    case CategoryLabel::NonexistentWhereColumn: return mutate_nonexistent_where(ctx);
    case CategoryLabel::NonexistentFilterValue: return mutate_nonexistent_filter_value(ctx);
    case CategoryLabel::UnsupportedJoin: return mutate_unsupported_join(ctx);
    case CategoryLabel::Answerable:
      throw Error(Errc::InvalidArgument, "Answerable is not a mutation category");
  }
  throw Error(Errc::InvalidArgument, "unknown category");
}

}  // namespace practiq::mutator
