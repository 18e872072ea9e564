#include "practiq/bench.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "practiq/prompts.hpp"
#include "practiq/sqlkit.hpp"
#include "practiq/strutil.hpp"
#include "practiq/valuelink.hpp"

namespace practiq::bench {

using json = nlohmann::ordered_json;
using strutil::iequals;

// ---------------------------------------------------------------------------
// Schema rendering
// ---------------------------------------------------------------------------

std::map<ColumnRef, std::vector<std::string>> collect_value_samples(corpus::DatabaseHandle& db,
                                                                    const SchemaDef& schema,
                                                                    int per_column) {
  std::map<ColumnRef, std::vector<std::string>> samples;
  for (const auto& table : schema.tables) {
    for (const auto& col : table.columns) {
      ColumnRef ref{table.name, col.name};
      std::vector<std::string> vals;
      for (const auto& cell : corpus::read_column_values(db, ref)) {
        if (cell.is_null()) continue;
        std::string v = cell.display();
        if (std::find(vals.begin(), vals.end(), v) != vals.end()) continue;
        vals.push_back(std::move(v));
        if (static_cast<int>(vals.size()) >= per_column) break;
      }
      samples.emplace(std::move(ref), std::move(vals));
    }
  }
  return samples;
}

namespace {

const char* markdown_type(ColType t) {
  switch (t) {
    case ColType::Text: return "str";
    case ColType::Number: return "int";
    case ColType::Time: return "date";
    case ColType::Boolean: return "bool";
    case ColType::Others: return "str";
  }
  return "str";
}

}  // namespace

std::string render_schema_markdown(
    const SchemaDef& schema, const std::map<ColumnRef, std::vector<std::string>>& value_samples) {
  std::string out;
  for (const auto& table : schema.tables) {
    out += "## " + table.name + "\n\n";
    out += "| Column Name | Data Type | Description |\n";
    out += "| --- | --- | --- |\n";
    for (const auto& col : table.columns) {
      out += "| " + col.name + " | " + markdown_type(col.col_type) + " | ";
      auto it = value_samples.find(ColumnRef{table.name, col.name});
      if (it != value_samples.end() && !it->second.empty()) {
        out += "Example values: ";
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          if (i) out += ", ";
          out += it->second[i];
        }
      }
      out += " |\n";
    }
    out += "\n";
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string render_relevant_values(const std::map<ColumnRef, std::vector<std::string>>& values) {
  std::string out;
  for (const auto& [ref, vals] : values) {
    out += "\"" + ref.qualified() + "\": [";
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i) out += ", ";
      out += json(vals[i]).dump();
    }
    out += "]\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string render_execution_results(const ResultTable& table) {
  std::string out = "| ";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += " | ";
    out += table.columns[i];
  }
  out += " |\n|";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += " --- |";
  out += "\n";
  for (const auto& row : table.rows) {
    out += "| ";
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += " | ";
      out += row[i].display();
    }
    out += " |\n";
  }
  if (table.truncated) out += "(only the first 30 rows are shown)\n";
  if (!out.empty()) out.pop_back();
  return out;
}

// ---------------------------------------------------------------------------
// Classification prompt
// ---------------------------------------------------------------------------

provider::ProviderRequest build_classification_prompt(const std::string& schema_md,
                                                      const std::string& question, int k,
                                                      const std::vector<Shot>& shots) {
  if (k < 0 || k > 3) throw Error(Errc::InvalidArgument, "k must be within 0..3");
  provider::ProviderRequest req;
  req.task = provider::ProviderTask::NineWayClassify;
  req.system_prompt = provider::nine_way_classification_prompt();

  if (k > 0) {
    for (CategoryLabel category : kAllCategories) {
      int found = 0;
      for (const auto& shot : shots) {
        if (shot.category != category) continue;
        req.messages.push_back({"user", shot.user_message});
        req.messages.push_back({"assistant", shot.assistant_message});
        if (++found == k) break;
      }
      if (found < k)
        throw Error(Errc::InsufficientShots,
                    std::string("need ") + std::to_string(k) + " exemplars for " +
                        to_token(category) + ", have " + std::to_string(found));
    }
  }

  std::string body = "<schema>\n" + schema_md + "\n</schema>\n\n<question>\n" + question +
                     "\n</question>";
  req.messages.push_back({"user", std::move(body)});
  return req;
}

// ---------------------------------------------------------------------------
// Report plumbing
// ---------------------------------------------------------------------------

void EvalReport::finalize() {
  long correct_all = 0, n_all = 0, correct_mut = 0, n_mut = 0;
  double macro_sum = 0, macro_mut_sum = 0;
  int macro_n = 0, macro_mut_n = 0;
  per_category_accuracy.clear();
  for (const auto& [category, n] : n_per_category) {
    if (n == 0) continue;
    long correct = 0;
    auto it = correct_per_category.find(category);
    if (it != correct_per_category.end()) correct = it->second;
    double acc = static_cast<double>(correct) / static_cast<double>(n);
    per_category_accuracy[category] = acc;
    correct_all += correct;
    n_all += n;
    macro_sum += acc;
    ++macro_n;
    if (category != CategoryLabel::Answerable) {
      correct_mut += correct;
      n_mut += n;
      macro_mut_sum += acc;
      ++macro_mut_n;
    }
  }
  overall = n_all ? static_cast<double>(correct_all) / n_all : 0.0;
  overall_excluding_answerable = n_mut ? static_cast<double>(correct_mut) / n_mut : 0.0;
  macro_average = macro_n ? macro_sum / macro_n : 0.0;
  macro_average_excluding_answerable = macro_mut_n ? macro_mut_sum / macro_mut_n : 0.0;
}

std::string EvalReport::to_json() const {
  json j;
  j["task"] = task;
  json per = json::object();
  for (CategoryLabel c : kAllCategories) {
    auto n_it = n_per_category.find(c);
    if (n_it == n_per_category.end() || n_it->second == 0) continue;
    json cj;
    cj["n"] = n_it->second;
    auto corr = correct_per_category.find(c);
    cj["correct"] = corr == correct_per_category.end() ? 0 : corr->second;
    auto acc = per_category_accuracy.find(c);
    cj["accuracy"] = acc == per_category_accuracy.end() ? 0.0 : acc->second;
    auto inv = invalid_predictions.find(c);
    if (inv != invalid_predictions.end() && inv->second > 0) cj["invalid"] = inv->second;
    auto fail = failure_taxonomy.find(c);
    if (fail != failure_taxonomy.end()) {
      cj["failures"] = json{{"hallucination", fail->second.hallucination},
                            {"incorrect_sql", fail->second.incorrect_sql},
                            {"partially_correct", fail->second.partially_correct}};
    }
    per[to_token(c)] = std::move(cj);
  }
  j["per_category"] = std::move(per);
  // micro = weighted by item counts; macro = unweighted mean over categories
  j["overall"] = overall;
  j["overall_excluding_answerable"] = overall_excluding_answerable;
  j["macro_average"] = macro_average;
  j["macro_average_excluding_answerable"] = macro_average_excluding_answerable;
  if (task == "classification") {
    json rows = json::array();
    for (int g = 0; g < kCategoryCount; ++g) {
      json row = json::array();
      for (int p = 0; p < kCategoryCount; ++p) row.push_back(confusion[g][p]);
      rows.push_back(std::move(row));
    }
    j["confusion"] = std::move(rows);
  }
  return j.dump(2);
}

std::string EvalReport::confusion_csv() const {
  std::string out = "gold\\predicted";
  for (CategoryLabel c : kAllCategories) out += std::string(",") + to_token(c);
  out += "\n";
  for (int g = 0; g < kCategoryCount; ++g) {
    out += to_token(kAllCategories[g]);
    for (int p = 0; p < kCategoryCount; ++p) out += "," + std::to_string(confusion[g][p]);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dataset-side helpers
// ---------------------------------------------------------------------------

namespace {

int category_index(CategoryLabel c) {
  for (int i = 0; i < kCategoryCount; ++i)
    if (kAllCategories[i] == c) return i;
  return kCategoryCount - 1;
}

corpus::DatabaseHandle rebuild_mutated(const corpus::CorpusStore& store, const Conversation& conv,
                                       const std::filesystem::path& workdir) {
  corpus::DatabaseHandle db = store.checkout_database(conv.db_id, workdir);
  for (const auto& delta : conv.mutation.deltas) corpus::apply_delta(db, delta);
  return db;
}

/// Schema markdown augmented with the retrieved (and optionally oracle)
/// relevant values; this is what goes inside the <schema/> tags.
std::string classification_schema_block(corpus::DatabaseHandle& db, const Conversation& conv,
                                        const std::string& question, const BenchConfig& config) {
  SchemaDef schema = corpus::introspect_schema(db, conv.db_id);
  std::string schema_md = render_schema_markdown(schema, collect_value_samples(db, schema));

  valuelink::RetrievalConfig rc;
  valuelink::ValueIndex index = valuelink::build_value_index(db, schema, rc);
  auto relevant = valuelink::retrieve_values(question, index, rc);
  if (config.value_mode == ValueMode::LexicalAndOracle) {
    for (const auto& [ref, vals] : valuelink::oracle_values(conv.mutation)) {
      auto& slot = relevant[ref];
      for (const auto& v : vals)
        if (std::find(slot.begin(), slot.end(), v) == slot.end())
          slot.insert(slot.begin(), v);
    }
  }
  if (!relevant.empty())
    schema_md += "\n\n### Relevant values\n" + render_relevant_values(relevant);
  return schema_md;
}

}  // namespace

EvalReport run_classification(const std::vector<Conversation>& dataset,
                              provider::Provider& provider, const BenchConfig& config) {
  corpus::CorpusStore store(config.db_dir);
  std::filesystem::path workdir = config.workdir.empty()
                                      ? std::filesystem::temp_directory_path() /
                                            ("practiq-bench-" +
                                             std::to_string(std::random_device{}()))
                                      : config.workdir;
  std::filesystem::create_directories(workdir);

  EvalReport report;
  report.task = "classification";
  const auto& shots = builtin_shots();

  for (const auto& conv : dataset) {
    ++report.n_per_category[conv.category];
    std::string predicted_token;
    try {
      corpus::DatabaseHandle db = rebuild_mutated(store, conv, workdir);
      const Turn* initial = conv.find_turn(TurnKind::InitialQuestion);
      std::string question = initial ? initial->text : conv.mutation.mutated_question;
      provider::ProviderRequest req = build_classification_prompt(
          classification_schema_block(db, conv, question, config), question, config.k, shots);
      if (config.pass_reference) req.reference = to_token(conv.category);
      std::string text = provider.complete(req).text;
      predicted_token = provider::parse_tagged(text, "result");
    } catch (const Error&) {
      // provider failures and missing tags count as wrong
      ++report.invalid_predictions[conv.category];
      continue;
    }
    auto predicted = category_from_token(predicted_token);
    if (!predicted) {
      ++report.invalid_predictions[conv.category];
      continue;
    }
    ++report.confusion[category_index(conv.category)][category_index(*predicted)];
    if (*predicted == conv.category) ++report.correct_per_category[conv.category];
  }
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------
// Execution accuracy
// ---------------------------------------------------------------------------

namespace {

constexpr double kNumericRelTol = 1e-6;

bool numeric_equal(double a, double b) {
  if (a == b) return true;
  double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= kNumericRelTol * scale;
}

bool cell_equivalent(const Cell& a, const Cell& b) {
  bool a_num = a.kind == Cell::Kind::Int || a.kind == Cell::Kind::Real;
  bool b_num = b.kind == Cell::Kind::Int || b.kind == Cell::Kind::Real;
  if (a_num && b_num) {
    double av = a.kind == Cell::Kind::Int ? static_cast<double>(a.i) : a.r;
    double bv = b.kind == Cell::Kind::Int ? static_cast<double>(b.i) : b.r;
    return numeric_equal(av, bv);
  }
  if (a.kind != b.kind) return false;
  if (a.kind == Cell::Kind::Null) return true;
  return a.kind == Cell::Kind::Text && a.s == b.s;
}

bool row_equivalent(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!cell_equivalent(a[i], b[i])) return false;
  return true;
}

std::string row_sort_key(const std::vector<Cell>& row) {
  std::string key;
  for (const auto& cell : row) {
    switch (cell.kind) {
      case Cell::Kind::Null: key += "\x00n;"; break;
      case Cell::Kind::Int: key += "i" + std::to_string(cell.i) + ";"; break;
      case Cell::Kind::Real: {
        std::ostringstream os;
        os.precision(12);
        os << cell.r;
        key += "r" + os.str() + ";";
        break;
      }
      case Cell::Kind::Text: key += "t" + cell.s + ";"; break;
    }
  }
  return key;
}

}  // namespace

bool execution_accuracy(const std::string& pred_sql, const std::string& gold_sql,
                        corpus::DatabaseHandle& db, bool order_sensitive) {
  ResultTable gold;
  try {
    gold = sqlkit::execute(db, gold_sql);
  } catch (const ExecError&) {
    return false;  // precondition violated; treat as non-match
  }
  ResultTable pred;
  try {
    pred = sqlkit::execute(db, pred_sql);
  } catch (const ExecError&) {
    return false;
  }
  if (pred.rows.size() != gold.rows.size()) return false;
  if (!pred.rows.empty() && pred.rows[0].size() != gold.rows[0].size()) return false;

  std::vector<std::vector<Cell>> a = pred.rows, b = gold.rows;
  if (!order_sensitive) {
    auto by_key = [](const std::vector<Cell>& x, const std::vector<Cell>& y) {
      return row_sort_key(x) < row_sort_key(y);
    };
    std::sort(a.begin(), a.end(), by_key);
    std::sort(b.begin(), b.end(), by_key);
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!row_equivalent(a[i], b[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Failure taxonomy
// ---------------------------------------------------------------------------

FailureKind classify_failure(const std::string& pred_sql, const SchemaDef& mutated_schema,
                             const MutationRecord& record) {
  sqlkit::SqlTree tree;
  try {
    tree = sqlkit::parse(pred_sql);
  } catch (const SqlParseError&) {
    return FailureKind::IncorrectSql;
  }

  bool hallucinated = false;
  bool uses_candidate = false;

  struct Source {
    std::string name;  // alias or table
    std::string base;
    bool subquery = false;
  };
  auto walk = [&](auto&& self, const sqlkit::SelectStmt& s) -> void {
    std::vector<Source> scope;
    auto add_source = [&](const sqlkit::TableSource& src) {
      Source entry;
      entry.subquery = src.subquery != nullptr;
      entry.base = src.table;
      entry.name = src.alias.empty() ? src.table : src.alias;
      scope.push_back(entry);
      if (src.subquery) self(self, *src.subquery);
      if (!entry.subquery && !mutated_schema.find_table(entry.base)) hallucinated = true;
    };
    add_source(s.from);
    for (const auto& j : s.joins) add_source(j.source);

    auto check_term = [&](const sqlkit::ColumnTerm& term) {
      if (term.is_star() || term.column.empty()) return;
      for (const auto& cand : record.introduced_columns)
        if (iequals(term.column, cand.column)) uses_candidate = true;
      if (!term.table.empty()) {
        for (const auto& src : scope) {
          if (!iequals(src.name, term.table) && !iequals(src.base, term.table)) continue;
          if (src.subquery) return;  // derived source; cannot judge
          if (!mutated_schema.has_column(ColumnRef{src.base, term.column})) hallucinated = true;
          return;
        }
        hallucinated = true;  // qualifier resolves to no source
        return;
      }
      bool subquery_in_scope = false;
      for (const auto& src : scope) {
        if (src.subquery) {
          subquery_in_scope = true;
          continue;
        }
        if (mutated_schema.has_column(ColumnRef{src.base, term.column})) return;
      }
      // not found in any in-scope table; only a derived source can excuse it
      if (!subquery_in_scope) hallucinated = true;
    };

    auto check_bool = [&](const std::optional<sqlkit::BoolExpr>& e) {
      if (!e) return;
      auto rec = [&](auto&& inner, const sqlkit::BoolExpr& node) -> void {
        if (node.kind == sqlkit::BoolExpr::Kind::Leaf) {
          check_term(node.leaf.lhs.lhs);
          if (node.leaf.lhs.op != sqlkit::ArithOp::None) check_term(node.leaf.lhs.rhs);
          if (node.leaf.rhs.kind == sqlkit::Operand::Kind::Col) check_term(node.leaf.rhs.col);
          if (node.leaf.rhs.kind == sqlkit::Operand::Kind::Subquery && node.leaf.rhs.subquery)
            self(self, *node.leaf.rhs.subquery);
          if (node.leaf.rhs2.kind == sqlkit::Operand::Kind::Col) check_term(node.leaf.rhs2.col);
        } else {
          for (const auto& child : node.children) inner(inner, child);
        }
      };
      rec(rec, *e);
    };

    for (const auto& item : s.items) {
      check_term(item.expr.lhs);
      if (item.expr.op != sqlkit::ArithOp::None) check_term(item.expr.rhs);
    }
    for (const auto& j : s.joins) check_bool(j.on);
    check_bool(s.where);
    for (const auto& g : s.group_by) check_term(g);
    check_bool(s.having);
    for (const auto& o : s.order_by) {
      check_term(o.lhs);
      if (o.op != sqlkit::ArithOp::None) check_term(o.rhs);
    }
    if (s.compound) self(self, *s.compound);
  };
  walk(walk, tree);

  if (hallucinated) return FailureKind::Hallucination;
  if (is_ambiguous_column_category(record.category) && uses_candidate)
    return FailureKind::PartiallyCorrect;
  return FailureKind::IncorrectSql;
}

// ---------------------------------------------------------------------------
// SQL prediction benchmark
// ---------------------------------------------------------------------------

std::string extract_sql_from_response(const std::string& text) {
  auto fence = text.find("```");
  if (fence != std::string::npos) {
    auto body_start = text.find('\n', fence);
    auto fence_end = text.find("```", fence + 3);
    if (body_start != std::string::npos && fence_end != std::string::npos &&
        body_start < fence_end) {
      std::string block = strutil::trim(text.substr(body_start + 1, fence_end - body_start - 1));
      if (!block.empty()) return block;
    }
  }
  std::string lower = strutil::to_lower(text);
  auto pos = lower.find("select");
  if (pos == std::string::npos) return strutil::trim(text);
  std::string tail = text.substr(pos);
  // trim trailing fences and prose markers
  auto cut = tail.find("```");
  if (cut != std::string::npos) tail = tail.substr(0, cut);
  return strutil::trim(tail);
}

EvalReport run_sql_prediction(const std::vector<Conversation>& dataset,
                              provider::Provider& provider, const BenchConfig& config) {
  corpus::CorpusStore store(config.db_dir);
  std::filesystem::path workdir = config.workdir.empty()
                                      ? std::filesystem::temp_directory_path() /
                                            ("practiq-bench-" +
                                             std::to_string(std::random_device{}()))
                                      : config.workdir;
  std::filesystem::create_directories(workdir);
  bool decomposed = config.strategy == "dinsql";

  EvalReport report;
  report.task = "sql_prediction";

  for (const auto& conv : dataset) {
    ++report.n_per_category[conv.category];
    bool correct = false;
    std::string pred_sql;
    SchemaDef mutated_schema;
    try {
      corpus::DatabaseHandle db = rebuild_mutated(store, conv, workdir);
      mutated_schema = corpus::introspect_schema(db, conv.db_id);
      std::string schema_md =
          render_schema_markdown(mutated_schema, collect_value_samples(db, mutated_schema));

      // context: everything through the clarification response
      std::string transcript;
      for (const auto& turn : conv.turns) {
        if (turn.kind == TurnKind::FinalSql || turn.kind == TurnKind::ResultExplanation) break;
        transcript += (turn.role == TurnRole::User ? "U: " : "A: ") + turn.text + "\n";
      }
      if (!transcript.empty()) transcript.pop_back();

      provider::ProviderRequest req;
      req.task = provider::ProviderTask::PredictSql;
      req.system_prompt = provider::predict_sql_prompt(decomposed);
      req.messages.push_back({"user", "<schema>\n" + schema_md + "\n</schema>\n\n<conversation>\n" +
                                          transcript + "\n</conversation>"});
      if (config.pass_reference) req.reference = conv.final_sql();
      std::string response = provider.complete(req).text;
      pred_sql = extract_sql_from_response(response);
      correct = execution_accuracy(pred_sql, conv.final_sql(), db, config.order_sensitive);
    } catch (const Error&) {
      ++report.invalid_predictions[conv.category];
      correct = false;
    }
    if (correct) {
      ++report.correct_per_category[conv.category];
    } else if (conv.category != CategoryLabel::Answerable) {
      FailureKind kind = classify_failure(pred_sql, mutated_schema, conv.mutation);
      FailureCounts& counts = report.failure_taxonomy[conv.category];
      switch (kind) {
        case FailureKind::Hallucination: ++counts.hallucination; break;
        case FailureKind::IncorrectSql: ++counts.incorrect_sql; break;
        case FailureKind::PartiallyCorrect: ++counts.partially_correct; break;
      }
    }
  }
  report.finalize();
  return report;
}

}  // namespace practiq::bench
