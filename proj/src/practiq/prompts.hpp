#pragma once

#include <string>

#include "practiq/provider.hpp"
#include "practiq/types.hpp"

namespace practiq::provider {

// System prompt texts keyed by task. Versioned as a unit; treat edits as
// breaking for downstream reproducibility.
inline constexpr const char* kPromptFixtureVersion = "prompts-v1";

const std::string& system_prompt_for(ProviderTask task);

/// One-line category definition used by the binary and 9-way classification
/// prompts ("category_with_explanation" slot).
const std::string& category_definition(CategoryLabel category);

/// The "- Token: definition" block for all eight mutated categories plus the
/// answerable line, in prompt order.
std::string all_category_definitions();

/// Binary-classification system prompt for one designed category.
std::string binary_classification_prompt(CategoryLabel category);

/// Nine-way classification system prompt.
std::string nine_way_classification_prompt();

/// Single-prompt vs decomposed (chain-of-subtasks) SQL prediction prompt.
const std::string& predict_sql_prompt(bool decomposed);

}  // namespace practiq::provider
