#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "practiq/errors.hpp"
#include "practiq/types.hpp"

namespace practiq::corpus {

/// Parses a Spider-format catalog (tables.json). Foreign-key and primary-key
/// column indices are resolved into ColumnRefs; an out-of-range index raises
/// Error(ResolutionError).
std::vector<SchemaDef> load_catalog(const std::filesystem::path& path);
std::vector<SchemaDef> parse_catalog_json(const std::string& text);

struct ExampleDiagnostic {
  std::size_t index = 0;
  std::string reason;
};

struct LoadedExamples {
  std::vector<CorpusExample> examples;
  std::vector<ExampleDiagnostic> skipped;
};

/// Loads Spider-format examples (db_id, question, query). Records whose gold
/// SQL is missing or fails to parse are reported in `skipped`, never fatal.
LoadedExamples load_examples(const std::filesystem::path& path);
LoadedExamples parse_examples_json(const std::string& text);

/// JSONL, one conversation per line, explicit format_version per line.
void write_conversations(const std::filesystem::path& path,
                         const std::vector<Conversation>& conversations);
void append_conversations(const std::filesystem::path& path,
                          const std::vector<Conversation>& conversations);
std::vector<Conversation> read_conversations(const std::filesystem::path& path);

std::string conversation_to_json_line(const Conversation& conversation);
Conversation conversation_from_json_line(const std::string& line);

}  // namespace practiq::corpus
