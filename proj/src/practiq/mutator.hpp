#pragma once

// Stage 1: per-category operators that turn an answerable seed example into
// an ambiguous/unanswerable one by mutating the checked-out database (or, for
// filter-criteria, the question). Operators either produce a MutationRecord
// whose clarified candidates all execute on the mutated copy, or a typed skip.

#include <optional>
#include <string>
#include <vector>

#include "practiq/database.hpp"
#include "practiq/errors.hpp"
#include "practiq/provider.hpp"
#include "practiq/types.hpp"

namespace practiq::mutator {

struct Skip {
  SkipReason reason = SkipReason::PreconditionNotMet;
  std::string detail;
};

class MutationOutcome {
 public:
  static MutationOutcome success(MutationRecord record) {
    MutationOutcome o;
    o.record_ = std::move(record);
    return o;
  }
  static MutationOutcome skipped(SkipReason reason, std::string detail = {}) {
    MutationOutcome o;
    o.skip_ = Skip{reason, std::move(detail)};
    return o;
  }

  bool ok() const { return record_.has_value(); }
  const MutationRecord& record() const { return *record_; }
  MutationRecord& record() { return *record_; }
  const Skip& skip() const { return *skip_; }

 private:
  std::optional<MutationRecord> record_;
  std::optional<Skip> skip_;
};

struct MutationContext {
  const CorpusExample& example;
  corpus::DatabaseHandle& db;  // working copy; mutated in place
  provider::Provider& provider;
  // other examples on the same database (Nonexistent WHERE clarification pool)
  const std::vector<CorpusExample>* same_db_examples = nullptr;
};

MutationOutcome mutate_ambiguous_select(MutationContext& ctx);
MutationOutcome mutate_ambiguous_where(MutationContext& ctx);
MutationOutcome mutate_ambiguous_values(MutationContext& ctx);
MutationOutcome mutate_ambiguous_filter_criteria(MutationContext& ctx);
MutationOutcome mutate_nonexistent_select(MutationContext& ctx);
MutationOutcome mutate_nonexistent_where(MutationContext& ctx);
MutationOutcome mutate_nonexistent_filter_value(MutationContext& ctx);
MutationOutcome mutate_unsupported_join(MutationContext& ctx);

/// Dispatch by category; Answerable is not a mutation.
MutationOutcome mutate_category(CategoryLabel category, MutationContext& ctx);

}  // namespace practiq::mutator
