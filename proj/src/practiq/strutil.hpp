#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace practiq::strutil {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

/// Collapses runs of whitespace and underscores to single spaces, lowercases.
/// Used by the mention-rule matcher so "Age_at_Entry" matches "age at entry".
std::string normalize_ws(std::string_view s);

/// True when `needle` occurs in `haystack` after normalize_ws on both sides.
bool contains_normalized(std::string_view haystack, std::string_view needle);

/// "car_makers" -> "car makers", "FullName" -> "full name". Template slot
/// filler for clarification requests.
std::string humanize_identifier(std::string_view ident);

/// Lowercase copy with punctuation mapped to spaces; fuzzy-match normal form.
std::string fuzzy_normal_form(std::string_view s);

std::size_t edit_distance(std::string_view a, std::string_view b);

/// 1 - lev(a,b)/max(|a|,|b|); 1.0 for two empty strings.
double edit_similarity(std::string_view a, std::string_view b);

/// Jaccard overlap of character trigram sets.
double trigram_jaccard(std::string_view a, std::string_view b);

std::vector<std::string> split(std::string_view s, char sep);

/// Whitespace tokenization after fuzzy normalization.
std::vector<std::string> tokenize(std::string_view s);

/// Case-insensitive replacement of every occurrence; returns count replaced.
int replace_all_ci(std::string& text, std::string_view from, std::string_view to);

/// FNV-1a; used to derive per-task RNG seeds from (run seed, category, id).
std::uint64_t fnv1a(std::string_view s, std::uint64_t seed = 1469598103934665603ull);

}  // namespace practiq::strutil
