#include "practiq/practiq.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "practiq/bench.hpp"
#include "practiq/corpus_io.hpp"
#include "practiq/errors.hpp"
#include "practiq/krippendorff.hpp"
#include "practiq/pipeline.hpp"
#include "practiq/provider.hpp"
#include "practiq/version.hpp"

using json = nlohmann::ordered_json;

struct practiq_session {
  std::string error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int classify_error(const practiq::Error& e) {
  switch (e.code()) {
    case practiq::Errc::ProviderRefusal:
    case practiq::Errc::RateLimited: return PRACTIQ_ERR_PROVIDER;
    case practiq::Errc::ParseError:
    case practiq::Errc::ResolutionError:
    case practiq::Errc::IoError:
    case practiq::Errc::MissingDatabase:
    case practiq::Errc::SchemaVersionMismatch:
    case practiq::Errc::SqlParseError:
    case practiq::Errc::InvalidArgument:
    case practiq::Errc::InsufficientShots: return PRACTIQ_ERR_INPUT;
    default: return PRACTIQ_ERR_INTERNAL;
  }
}

/// Shared prologue/epilogue: options parsing, error capture, status mapping.
template <typename Fn>
int run_call(practiq_session* session, const char* options_json, Fn&& fn) {
  if (!session) return PRACTIQ_ERR_INTERNAL;
  session->error.clear();
  json options = json::parse(options_json ? options_json : "", nullptr, false);
  if (options.is_discarded() || !options.is_object()) {
    session->error = "options must be a JSON object";
    return PRACTIQ_ERR_INPUT;
  }
  try {
    return fn(options);
  } catch (const practiq::Error& e) {
    session->error = e.what();
    return classify_error(e);
  } catch (const std::exception& e) {
    session->error = e.what();
    return PRACTIQ_ERR_INTERNAL;
  }
}

std::string require_path(const json& options, const char* key) {
  if (!options.contains(key) || !options[key].is_string())
    throw practiq::Error(practiq::Errc::InvalidArgument,
                         std::string("missing required option '") + key + "'");
  return options[key].get<std::string>();
}

}  // namespace

extern "C" {

const char* practiq_version(void) { return practiq::kVersion; }

practiq_session* practiq_session_open(void) { return new practiq_session(); }

void practiq_session_close(practiq_session* session) { delete session; }

const char* practiq_errmsg(const practiq_session* session) {
  return session ? session->error.c_str() : "";
}

void practiq_free(char* text) { std::free(text); }

int practiq_generate(practiq_session* session, const char* options_json, char** result_json) {
  return run_call(session, options_json, [&](const json& options) {
    practiq::pipeline::GenConfig config;
    std::string catalog_path = require_path(options, "catalog");
    std::string examples_path = require_path(options, "examples");
    config.db_dir = require_path(options, "db_dir");
    config.out_path = require_path(options, "out");
    config.seed = options.value("seed", std::uint64_t{0});
    config.helpful_fraction = options.value("helpful_fraction", 0.3);
    config.quota_per_category = options.value("quota", -1L);
    config.jobs = options.value("jobs", 1);
    config.provider_spec = options.value("provider", std::string{"mock"});
    if (options.contains("categories")) {
      for (const auto& token : options["categories"]) {
        auto category = practiq::category_from_token(token.get<std::string>());
        if (!category)
          throw practiq::Error(practiq::Errc::InvalidArgument,
                               "unknown category '" + token.get<std::string>() + "'");
        config.categories.push_back(*category);
      }
    }

    auto catalog = practiq::corpus::load_catalog(catalog_path);
    auto loaded = practiq::corpus::load_examples(examples_path);
    auto provider = practiq::provider::make_provider(config.provider_spec, config.seed);
    auto result =
        practiq::pipeline::run_generation(catalog, loaded.examples, config, *provider);

    json stats = json::parse(result.stats.to_json());
    stats["examples_loaded"] = loaded.examples.size();
    stats["examples_skipped_on_load"] = loaded.skipped.size();
    if (result_json) *result_json = dup_string(stats.dump(2));

    long total_in_dataset =
        result.stats.total_emitted + result.stats.resumed_existing;
    if (total_in_dataset <= 0) {
      session->error = "no conversations emitted";
      return PRACTIQ_ERR_VALIDATION;
    }
    return PRACTIQ_OK;
  });
}

int practiq_validate(practiq_session* session, const char* options_json, char** result_json) {
  return run_call(session, options_json, [&](const json& options) {
    auto dataset = practiq::corpus::read_conversations(require_path(options, "dataset"));
    std::filesystem::path workdir =
        std::filesystem::temp_directory_path() /
        ("practiq-validate-" + std::to_string(::getpid()));
    auto report = practiq::pipeline::validate_dataset(
        dataset, require_path(options, "db_dir"), workdir);
    std::error_code ec;
    std::filesystem::remove_all(workdir, ec);
    if (result_json) *result_json = dup_string(report.to_json());
    if (!report.ok()) {
      session->error = std::to_string(report.issues.size()) + " validation issue(s)";
      return PRACTIQ_ERR_VALIDATION;
    }
    return PRACTIQ_OK;
  });
}

int practiq_dataset_stats(practiq_session* session, const char* options_json,
                          char** result_json) {
  return run_call(session, options_json, [&](const json& options) {
    auto dataset = practiq::corpus::read_conversations(require_path(options, "dataset"));
    std::map<practiq::CategoryLabel, long> counts;
    for (const auto& conv : dataset) ++counts[conv.category];
    json per = json::object();
    for (practiq::CategoryLabel c : practiq::kAllCategories) {
      auto it = counts.find(c);
      per[practiq::to_token(c)] = it == counts.end() ? 0 : it->second;
    }
    json out;
    out["per_category"] = std::move(per);
    out["total"] = dataset.size();
    if (result_json) *result_json = dup_string(out.dump(2));
    return PRACTIQ_OK;
  });
}

namespace {

practiq::bench::BenchConfig bench_config_from(const json& options) {
  practiq::bench::BenchConfig config;
  config.db_dir = require_path(options, "db_dir");
  config.k = options.value("k", 0);
  std::string values = options.value("values", std::string{"lexicalOnly"});
  if (values == "lexicalOnly")
    config.value_mode = practiq::bench::ValueMode::LexicalOnly;
  else if (values == "lexicalAndOracle")
    config.value_mode = practiq::bench::ValueMode::LexicalAndOracle;
  else
    throw practiq::Error(practiq::Errc::InvalidArgument,
                         "values must be lexicalOnly or lexicalAndOracle");
  config.strategy = options.value("strategy", std::string{"single"});
  if (config.strategy != "single" && config.strategy != "dinsql")
    throw practiq::Error(practiq::Errc::InvalidArgument,
                         "strategy must be single or dinsql");
  config.order_sensitive = options.value("order_sensitive", false);
  return config;
}

}  // namespace

int practiq_bench_classify(practiq_session* session, const char* options_json,
                           char** result_json) {
  return run_call(session, options_json, [&](const json& options) {
    auto dataset = practiq::corpus::read_conversations(require_path(options, "dataset"));
    auto config = bench_config_from(options);
    auto provider = practiq::provider::make_provider(
        options.value("provider", std::string{"mock"}), options.value("seed", std::uint64_t{0}));
    auto report = practiq::bench::run_classification(dataset, *provider, config);
    if (result_json) *result_json = dup_string(report.to_json());
    return PRACTIQ_OK;
  });
}

int practiq_bench_sql(practiq_session* session, const char* options_json, char** result_json) {
  return run_call(session, options_json, [&](const json& options) {
    auto dataset = practiq::corpus::read_conversations(require_path(options, "dataset"));
    auto config = bench_config_from(options);
    auto provider = practiq::provider::make_provider(
        options.value("provider", std::string{"mock"}), options.value("seed", std::uint64_t{0}));
    auto report = practiq::bench::run_sql_prediction(dataset, *provider, config);
    if (result_json) *result_json = dup_string(report.to_json());
    return PRACTIQ_OK;
  });
}

int practiq_alpha(practiq_session* session, const char* options_json, double* out_alpha) {
  return run_call(session, options_json, [&](const json& options) {
    std::string level_token = options.value("level", std::string{"ordinal"});
    practiq::bench::AlphaLevel level;
    if (level_token == "ordinal")
      level = practiq::bench::AlphaLevel::Ordinal;
    else if (level_token == "nominal")
      level = practiq::bench::AlphaLevel::Nominal;
    else
      throw practiq::Error(practiq::Errc::InvalidArgument, "level must be ordinal or nominal");
    auto matrix = practiq::bench::load_ratings_csv(require_path(options, "ratings"));
    double alpha = practiq::bench::krippendorff_alpha(matrix, level);
    if (out_alpha) *out_alpha = alpha;
    return PRACTIQ_OK;
  });
}

}  // extern "C"
