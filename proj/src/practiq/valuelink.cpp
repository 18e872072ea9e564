#include "practiq/valuelink.hpp"

#include <algorithm>

#include "practiq/strutil.hpp"

namespace practiq::valuelink {

ValueIndex build_value_index(corpus::DatabaseHandle& db, const SchemaDef& schema,
                             const RetrievalConfig& config) {
  ValueIndex index;
  for (const auto& table : schema.tables) {
    for (const auto& col : table.columns) {
      if (col.col_type != ColType::Text) continue;
      ColumnRef ref{table.name, col.name};
      std::vector<Cell> cells = corpus::read_column_values(db, ref);
      std::vector<std::string> distinct;
      for (const auto& cell : cells) {
        if (cell.kind != Cell::Kind::Text || cell.s.empty()) continue;
        if (std::find(distinct.begin(), distinct.end(), cell.s) != distinct.end()) continue;
        distinct.push_back(cell.s);
        if (static_cast<int>(distinct.size()) >= config.max_values_per_column) break;
      }
      if (!distinct.empty()) index.values.emplace(std::move(ref), std::move(distinct));
    }
  }
  return index;
}

double similarity(const std::string& a, const std::string& b) {
  std::string na = strutil::fuzzy_normal_form(a);
  std::string nb = strutil::fuzzy_normal_form(b);
  if (na == nb) return 1.0;
  return std::max(strutil::edit_similarity(na, nb), strutil::trigram_jaccard(na, nb));
}

std::map<ColumnRef, std::vector<std::string>> retrieve_values(const std::string& question,
                                                              const ValueIndex& index,
                                                              const RetrievalConfig& config) {
  std::map<ColumnRef, std::vector<std::string>> out;
  std::vector<std::string> tokens = strutil::tokenize(question);
  if (tokens.empty()) return out;

  std::vector<std::string> ngrams;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    std::string gram;
    for (std::size_t len = 1;
         len <= static_cast<std::size_t>(config.max_ngram_tokens) && start + len <= tokens.size();
         ++len) {
      if (len > 1) gram += ' ';
      gram += tokens[start + len - 1];
      ngrams.push_back(gram);
    }
  }

  for (const auto& [ref, values] : index.values) {
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& value : values) {
      double best = 0.0;
      for (const auto& gram : ngrams) best = std::max(best, similarity(value, gram));
      if (best >= config.threshold) scored.emplace_back(best, value);
    }
    if (scored.empty()) continue;
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<std::string> kept;
    for (const auto& [score, value] : scored) {
      kept.push_back(value);
      if (static_cast<int>(kept.size()) >= config.top_k) break;
    }
    out.emplace(ref, std::move(kept));
  }
  return out;
}

std::map<ColumnRef, std::vector<std::string>> oracle_values(const MutationRecord& record) {
  std::map<ColumnRef, std::vector<std::string>> out;
  switch (record.category) {
    case CategoryLabel::AmbiguousValuesWithinColumn:
      out[record.target.column] = record.introduced_values;
      break;
    case CategoryLabel::AmbiguousWhereColumn:
      // the shared filter value, present in both introduced columns
      if (record.target.literal) {
        for (const auto& col : record.introduced_columns)
          out[col] = {*record.target.literal};
      }
      break;
    case CategoryLabel::NonexistentFilterValue:
      // surviving alternates recorded at mutation time
      out[record.target.column] = record.introduced_values;
      break;
    case CategoryLabel::AmbiguousFilterCriteria:
      if (record.target.literal) out[record.target.column] = {*record.target.literal};
      break;
    default:
      break;  // column/table categories carry no value-level oracle
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.empty())
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

}  // namespace practiq::valuelink
