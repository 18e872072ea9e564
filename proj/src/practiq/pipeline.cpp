#include "practiq/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <thread>

#include <json.hpp>

#include "practiq/bench.hpp"
#include "practiq/dialogue.hpp"
#include "practiq/mutator.hpp"
#include "practiq/sqlkit.hpp"
#include "practiq/strutil.hpp"
#include "practiq/version.hpp"

namespace practiq::pipeline {

using json = nlohmann::ordered_json;

namespace {

std::string conversation_id(CategoryLabel category, const std::string& example_id) {
  return std::string(to_token(category)) + ":" + example_id;
}

std::uint64_t task_seed(std::uint64_t run_seed, CategoryLabel category,
                        const std::string& example_id) {
  return strutil::fnv1a(std::string(to_token(category)) + ":" + example_id,
                        run_seed ^ 0x9e3779b97f4a7c15ull);
}

struct TaskResult {
  std::optional<Conversation> conversation;
  std::optional<SkipReason> skip;
  std::string detail;
  bool already_present = false;
};

std::string schema_markdown_of(corpus::DatabaseHandle& db, const std::string& db_id) {
  SchemaDef schema = corpus::introspect_schema(db, db_id);
  return bench::render_schema_markdown(schema, bench::collect_value_samples(db, schema));
}

/// Stages 2-3 for a mutated record: turn assembly, refinement, gates,
/// execution snapshot and explanation.
TaskResult assemble_mutated(const MutationRecord& record, const CorpusExample& example,
                            corpus::DatabaseHandle& db, provider::Provider& provider,
                            std::mt19937_64& rng, const GenConfig& config) {
  TaskResult result;
  std::string schema_md = schema_markdown_of(db, example.db_id);

  auto choice = dialogue::select_clarified_sql(record, db, rng);
  if (!choice) {
    result.skip = SkipReason::NoExecutableCandidate;
    return result;
  }

  Conversation conv;
  conv.id = conversation_id(record.category, example.example_id);
  conv.db_id = example.db_id;
  conv.category = record.category;
  conv.mutation = record;
  conv.gold_sql = example.gold_sql;
  conv.provenance.seed_example_id = example.example_id;
  conv.provenance.pipeline_version = kPipelineVersion;
  conv.provenance.provider_id = provider.id();
  conv.provenance.seed = config.seed;

  // helpful-SQL branch for the two eligible categories
  if (is_ambiguous_column_category(record.category)) {
    std::bernoulli_distribution coin(config.helpful_fraction);
    if (coin(rng)) {
      if (auto helpful = dialogue::build_helpful_sql(record, db)) {
        conv.helpful_sql = helpful;
        conv.turns.push_back(
            {TurnRole::User, TurnKind::InitialQuestion, record.mutated_question, {}});
        conv.turns.push_back({TurnRole::Assistant, TurnKind::FinalSql, *helpful, *helpful});
        conv.execution = sqlkit::execute(db, *helpful);
        if (!gate_binary_category(conv, provider, schema_md)) {
          result.skip = SkipReason::BinaryCheckReject;
          return result;
        }
        conv.turns.push_back({TurnRole::Assistant, TurnKind::ResultExplanation,
                              dialogue::explain_results(conv, provider, schema_md), {}});
        result.conversation = std::move(conv);
        return result;
      }
      // construction failed to execute: fall back to the clarification flow
    }
  }

  conv.turns.push_back({TurnRole::User, TurnKind::InitialQuestion, record.mutated_question, {}});
  conv.turns.push_back({TurnRole::Assistant, TurnKind::ClarificationRequest,
                        dialogue::build_clarification_request(record), {}});

  std::string clarification;
  if (record.category == CategoryLabel::AmbiguousFilterCriteria) {
    // the specific question the vague one was derived from
    clarification = record.original_question;
  } else {
    dialogue::DraftConversation draft;
    draft.schema_md = schema_md;
    draft.category = record.category;
    draft.initial_question = record.mutated_question;
    draft.clarification_request = conv.turns.back().text;
    draft.final_sql = choice->sql;
    draft.chosen_target = choice->target;
    try {
      clarification = dialogue::reverse_generate_clarification(draft, provider);
    } catch (const Error& e) {
      if (e.code() == Errc::ProviderRefusal || e.code() == Errc::RateLimited ||
          e.code() == Errc::TagMissing) {
        result.skip = SkipReason::ProviderRefusal;
        result.detail = e.what();
        return result;
      }
      throw;
    }
  }
  conv.turns.push_back(
      {TurnRole::User, TurnKind::ClarificationResponse, clarification, {}});
  conv.turns.push_back({TurnRole::Assistant, TurnKind::FinalSql, choice->sql, choice->sql});

  dialogue::refine_conversation(conv, provider, schema_md);

  // gate 1: executability (candidates were verified; re-run the final SQL to
  // capture the execution snapshot from the mutated copy)
  try {
    conv.execution = sqlkit::execute(db, choice->sql);
  } catch (const ExecError& e) {
    result.skip = SkipReason::ExecFailure;
    result.detail = e.what();
    return result;
  }

  // gate 2: mention rule on the (refined) clarification text
  std::vector<std::string> rejected;
  for (std::size_t i = 0; i < record.candidate_targets.size(); ++i)
    if (i != choice->index) rejected.push_back(record.candidate_targets[i]);
  const Turn* response = conv.find_turn(TurnKind::ClarificationResponse);
  if (!dialogue::mention_rule_ok(response->text, choice->target, rejected)) {
    result.skip = SkipReason::MentionRuleReject;
    return result;
  }

  // gate 3: binary category check
  if (!gate_binary_category(conv, provider, schema_md)) {
    result.skip = SkipReason::BinaryCheckReject;
    return result;
  }

  conv.turns.push_back({TurnRole::Assistant, TurnKind::ResultExplanation,
                        dialogue::explain_results(conv, provider, schema_md), {}});
  result.conversation = std::move(conv);
  return result;
}

struct Task {
  CategoryLabel category;
  std::size_t example_index;
};

}  // namespace

bool gate_binary_category(const Conversation& conversation, provider::Provider& provider,
                          const std::string& schema_md) {
  const Turn* initial = conversation.find_turn(TurnKind::InitialQuestion);
  if (!initial) return false;
  auto req = provider::make_binary_check_request(schema_md, conversation.category, initial->text);
  try {
    std::string verdict = provider::parse_tagged(provider.complete(req).text, "result");
    return strutil::iequals(verdict, to_token(conversation.category));
  } catch (const Error& e) {
    if (e.code() == Errc::TagMissing || e.code() == Errc::ProviderRefusal ||
        e.code() == Errc::RateLimited)
      return false;
    throw;
  }
}

GenResult run_generation(const std::vector<SchemaDef>& catalog,
                         const std::vector<CorpusExample>& examples, const GenConfig& config,
                         provider::Provider& provider) {
  (void)catalog;  // schemas are introspected from the working copies
  corpus::CorpusStore store(config.db_dir);

  std::filesystem::path workdir = config.workdir;
  bool scratch_workdir = workdir.empty();
  if (scratch_workdir) {
    workdir = std::filesystem::temp_directory_path() /
              ("practiq-gen-" + std::to_string(std::random_device{}()));
  }
  std::filesystem::create_directories(workdir);

  GenResult result;

  std::vector<CategoryLabel> categories = config.categories;
  if (categories.empty())
    categories.assign(std::begin(kAllCategories), std::end(kAllCategories));

  // resume support: collect ids already present; drop malformed trailing lines
  std::set<std::string> existing_ids;
  std::set<std::string> consumed_examples;  // seed ids with an emitted mutated conversation
  if (std::filesystem::exists(config.out_path)) {
    std::ifstream in(config.out_path, std::ios::binary);
    std::string line;
    std::vector<std::string> valid_lines;
    bool saw_invalid = false;
    while (std::getline(in, line)) {
      if (strutil::trim(line).empty()) continue;
      try {
        Conversation c = corpus::conversation_from_json_line(line);
        existing_ids.insert(c.id);
        if (c.category != CategoryLabel::Answerable)
          consumed_examples.insert(c.db_id + "/" + c.provenance.seed_example_id);
        valid_lines.push_back(line);
      } catch (const Error&) {
        saw_invalid = true;  // partially-written tail from an interrupted run
      }
    }
    in.close();
    result.stats.resumed_existing = static_cast<long>(existing_ids.size());
    if (saw_invalid) {
      std::ofstream out(config.out_path, std::ios::binary | std::ios::trunc);
      for (const auto& l : valid_lines) out << l << "\n";
    }
  }

  std::map<std::string, std::vector<CorpusExample>> by_db;
  for (const auto& ex : examples) by_db[ex.db_id].push_back(ex);

  // task list: mutated categories cross examples, in deterministic order
  std::vector<Task> tasks;
  for (CategoryLabel category : categories) {
    if (category == CategoryLabel::Answerable) continue;
    long planned = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (config.quota_per_category >= 0 && planned >= config.quota_per_category) break;
      tasks.push_back(Task{category, i});
      ++planned;
    }
  }

  std::vector<TaskResult> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) break;
      const Task& task = tasks[idx];
      const CorpusExample& example = examples[task.example_index];
      TaskResult& slot = slots[idx];
      if (existing_ids.count(conversation_id(task.category, example.example_id))) {
        slot.already_present = true;
        continue;
      }
      try {
        corpus::DatabaseHandle db = store.checkout_database(example.db_id, workdir);
        mutator::MutationContext ctx{example, db, provider, &by_db[example.db_id]};
        mutator::MutationOutcome outcome = mutator::mutate_category(task.category, ctx);
        if (!outcome.ok()) {
          slot.skip = outcome.skip().reason;
          slot.detail = outcome.skip().detail;
          continue;
        }
        std::mt19937_64 rng(task_seed(config.seed, task.category, example.example_id));
        slot = assemble_mutated(outcome.record(), example, db, provider, rng, config);
      } catch (const Error& e) {
        slot.skip = SkipReason::ExecFailure;
        slot.detail = e.what();
      }
    }
  };

  int jobs = std::max(1, config.jobs);
  {
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    CategoryStats& cat = result.stats.per_category[tasks[i].category];
    if (slots[i].already_present) continue;
    ++cat.attempted;
    ++result.stats.total_attempted;
    if (slots[i].conversation) {
      consumed_examples.insert(slots[i].conversation->db_id + "/" +
                               slots[i].conversation->provenance.seed_example_id);
      ++cat.emitted;
      ++result.stats.total_emitted;
      result.conversations.push_back(std::move(*slots[i].conversation));
    } else if (slots[i].skip) {
      ++cat.skipped[to_string(*slots[i].skip)];
    }
  }

  // answerable pool: seeds not consumed by any mutation on the same database
  bool want_answerable = std::find(categories.begin(), categories.end(),
                                   CategoryLabel::Answerable) != categories.end();
  if (want_answerable) {
    CategoryStats& cat = result.stats.per_category[CategoryLabel::Answerable];
    long emitted = 0;
    for (const auto& example : examples) {
      if (config.quota_per_category >= 0 && emitted >= config.quota_per_category) break;
      if (consumed_examples.count(example.db_id + "/" + example.example_id)) continue;
      if (existing_ids.count(conversation_id(CategoryLabel::Answerable, example.example_id)))
        continue;
      ++cat.attempted;
      ++result.stats.total_attempted;
      try {
        corpus::DatabaseHandle db = store.checkout_database(example.db_id, workdir);
        auto conv = dialogue::assemble_answerable(example, db, provider);
        if (!conv) {
          ++cat.skipped[to_string(SkipReason::ExecFailure)];
          continue;
        }
        conv->provenance.seed_example_id = example.example_id;
        conv->provenance.pipeline_version = kPipelineVersion;
        conv->provenance.provider_id = provider.id();
        conv->provenance.seed = config.seed;
        ++cat.emitted;
        ++emitted;
        ++result.stats.total_emitted;
        result.conversations.push_back(std::move(*conv));
      } catch (const Error& e) {
        ++cat.skipped[std::string(to_string(SkipReason::ExecFailure))];
      }
    }
  }

  if (!config.out_path.empty())
    corpus::append_conversations(config.out_path, result.conversations);

  if (scratch_workdir) {
    std::error_code ec;
    std::filesystem::remove_all(workdir, ec);
  }
  return result;
}

std::string GenStats::to_json() const {
  json j;
  j["total_attempted"] = total_attempted;
  j["total_emitted"] = total_emitted;
  j["resumed_existing"] = resumed_existing;
  json per = json::object();
  for (CategoryLabel c : kAllCategories) {
    auto it = per_category.find(c);
    if (it == per_category.end()) continue;
    json cj;
    cj["attempted"] = it->second.attempted;
    cj["emitted"] = it->second.emitted;
    json sk = json::object();
    for (const auto& [reason, count] : it->second.skipped) sk[reason] = count;
    cj["skipped"] = std::move(sk);
    per[to_token(c)] = std::move(cj);
  }
  j["per_category"] = std::move(per);
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

void check(ValidationReport& report, const Conversation& conv, bool condition,
           const std::string& what) {
  if (!condition) report.issues.push_back(ValidationIssue{conv.id, what});
}

}  // namespace

ValidationReport validate_dataset(const std::vector<Conversation>& dataset,
                                  const std::filesystem::path& db_dir,
                                  const std::filesystem::path& workdir) {
  corpus::CorpusStore store(db_dir);
  std::filesystem::create_directories(workdir);
  ValidationReport report;

  for (const auto& conv : dataset) {
    ++report.checked;
    check(report, conv, conv.turn_order_valid(), "turn order violates the conversation shape");

    corpus::DatabaseHandle pristine = store.checkout_database(conv.db_id, workdir);
    int components_before =
        corpus::introspect_schema(pristine, conv.db_id).fk_component_count();

    corpus::DatabaseHandle db = store.checkout_database(conv.db_id, workdir);
    try {
      for (const auto& delta : conv.mutation.deltas) corpus::apply_delta(db, delta);
    } catch (const Error& e) {
      check(report, conv, false, std::string("deltas do not re-apply: ") + e.what());
      continue;
    }

    // every emitted final/helpful SQL executes on its mutated database
    std::string final_sql = conv.final_sql();
    check(report, conv, !final_sql.empty(), "missing final_sql turn");
    if (!final_sql.empty())
      check(report, conv, sqlkit::executes_ok(db, final_sql), "final_sql does not execute");
    if (conv.helpful_sql)
      check(report, conv, sqlkit::executes_ok(db, *conv.helpful_sql),
            "helpful_sql does not execute");

    switch (conv.category) {
      case CategoryLabel::NonexistentSelectColumn:
      case CategoryLabel::NonexistentWhereColumn: {
        try {
          sqlkit::execute(db, conv.gold_sql);
          check(report, conv, false, "original gold SQL still executes");
        } catch (const ExecError& e) {
          check(report, conv, e.kind() == ExecErrorKind::UnknownColumn,
                "gold SQL failure is not unknown-column");
        }
        break;
      }
      case CategoryLabel::NonexistentFilterValue: {
        try {
          ResultTable r = sqlkit::execute(db, conv.gold_sql);
          sqlkit::SqlTree tree = sqlkit::parse(conv.gold_sql);
          check(report, conv, sqlkit::result_effectively_empty(tree, r),
                "gold SQL still returns data");
        } catch (const ExecError& e) {
          check(report, conv, false, std::string("gold SQL fails instead of running empty: ") +
                                         e.what());
        }
        break;
      }
      case CategoryLabel::AmbiguousSelectColumn:
      case CategoryLabel::AmbiguousWhereColumn: {
        for (const auto& sql : conv.mutation.clarified_sql_candidates)
          check(report, conv, sqlkit::executes_ok(db, sql),
                "clarified candidate does not execute: " + sql);
        break;
      }
      case CategoryLabel::AmbiguousValuesWithinColumn: {
        for (const auto& sql : conv.mutation.clarified_sql_candidates) {
          try {
            ResultTable r = sqlkit::execute(db, sql);
            check(report, conv, !r.rows.empty(), "value-variant SQL returned no rows: " + sql);
          } catch (const ExecError& e) {
            check(report, conv, false,
                  std::string("value-variant SQL does not execute: ") + e.what());
          }
        }
        break;
      }
      case CategoryLabel::UnsupportedJoin: {
        int components_after = corpus::introspect_schema(db, conv.db_id).fk_component_count();
        check(report, conv, components_after > components_before,
              "foreign-key component count did not increase");
        break;
      }
      case CategoryLabel::AmbiguousFilterCriteria:
      case CategoryLabel::Answerable: break;
    }

    // mention rule on clarification conversations
    const Turn* response = conv.find_turn(TurnKind::ClarificationResponse);
    if (response && !conv.mutation.candidate_targets.empty()) {
      std::string chosen;
      std::vector<std::string> rejected;
      std::string final_sql_text = conv.final_sql();
      for (std::size_t i = 0; i < conv.mutation.clarified_sql_candidates.size(); ++i) {
        if (conv.mutation.clarified_sql_candidates[i] == final_sql_text &&
            i < conv.mutation.candidate_targets.size())
          chosen = conv.mutation.candidate_targets[i];
      }
      for (const auto& t : conv.mutation.candidate_targets)
        if (t != chosen) rejected.push_back(t);
      if (!chosen.empty())
        check(report, conv, dialogue::mention_rule_ok(response->text, chosen, rejected),
              "clarification response violates the mention rule");
    }
  }
  return report;
}

std::string ValidationReport::to_json() const {
  json j;
  j["checked"] = checked;
  j["ok"] = ok();
  json issues_json = json::array();
  for (const auto& issue : issues)
    issues_json.push_back(json{{"id", issue.conversation_id}, {"what", issue.what}});
  j["issues"] = std::move(issues_json);
  return j.dump(2);
}

}  // namespace practiq::pipeline
