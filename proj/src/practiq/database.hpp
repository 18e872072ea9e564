#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "practiq/errors.hpp"
#include "practiq/sqlkit.hpp"
#include "practiq/types.hpp"

struct sqlite3;

namespace practiq::corpus {

/// Single-owner connection to one working copy of a database. Concurrent
/// pipeline workers must check out independent copies.
class DatabaseHandle {
 public:
  explicit DatabaseHandle(std::filesystem::path file);
  ~DatabaseHandle();
  DatabaseHandle(DatabaseHandle&&) noexcept;
  DatabaseHandle& operator=(DatabaseHandle&&) noexcept;
  DatabaseHandle(const DatabaseHandle&) = delete;
  DatabaseHandle& operator=(const DatabaseHandle&) = delete;

  const std::filesystem::path& file() const { return file_; }
  sqlite3* raw();

  /// Runs a statement that returns no rows. Throws ExecError.
  void exec(const std::string& sql);

  /// First cell of the first row; Cell::null() on empty result.
  Cell query_scalar(const std::string& sql);

  /// All first-column cells in rowid/scan order.
  std::vector<Cell> query_column(const std::string& sql);

 private:
  std::filesystem::path file_;
  sqlite3* db_ = nullptr;
};

/// Locates source databases laid out as <root>/<db_id>/<db_id>.sqlite and
/// hands out isolated working copies. Source files are never opened for
/// writing.
class CorpusStore {
 public:
  explicit CorpusStore(std::filesystem::path db_root) : db_root_(std::move(db_root)) {}

  std::filesystem::path source_path(const std::string& db_id) const;
  bool has_database(const std::string& db_id) const;

  /// Copies the source database into `workdir` under a unique name and opens
  /// it. Throws Error(MissingDatabase) / Error(IoError).
  DatabaseHandle checkout_database(const std::string& db_id,
                                   const std::filesystem::path& workdir) const;

 private:
  std::filesystem::path db_root_;
};

/// Reads the live schema (tables, declared column types, PKs, FKs) from the
/// handle. FK entries whose endpoints no longer resolve are dropped.
SchemaDef introspect_schema(DatabaseHandle& db, const std::string& db_id);

/// Applies one delta and returns the freshly introspected schema.
/// Throws Error(DeltaConflict) when a referenced object is missing or an
/// added object already exists.
SchemaDef apply_delta(DatabaseHandle& db, const DbDelta& delta);

/// Column cells in rowid order.
std::vector<Cell> read_column_values(DatabaseHandle& db, const ColumnRef& ref);

std::size_t table_row_count(DatabaseHandle& db, const std::string& table);

/// Maps an engine error message onto the failure taxonomy. The pattern table
/// is versioned; see kExecErrorPatternVersion.
ExecErrorKind classify_exec_error(const std::string& message);
extern const char* const kExecErrorPatternVersion;

}  // namespace practiq::corpus

namespace practiq::sqlkit {

/// Executes SQL against the handle, capping captured rows at kResultRowCap
/// (sets `truncated` beyond the cap). Failures throw ExecError classified as
/// SyntaxError / UnknownColumn / UnknownTable / Other.
ResultTable execute(corpus::DatabaseHandle& db, const std::string& sql);

/// Convenience: true when the SQL prepares and runs to completion.
bool executes_ok(corpus::DatabaseHandle& db, const std::string& sql);

}  // namespace practiq::sqlkit
