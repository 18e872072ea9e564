#include "practiq/krippendorff.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "practiq/errors.hpp"
#include "practiq/strutil.hpp"

namespace practiq::bench {

double krippendorff_alpha(const RatingsMatrix& ratings, AlphaLevel level) {
  // pairable units only
  std::vector<std::vector<double>> units;
  for (const auto& row : ratings.cells) {
    std::vector<double> present;
    for (const auto& cell : row)
      if (cell) present.push_back(*cell);
    if (present.size() >= 2) units.push_back(std::move(present));
  }
  if (units.empty())
    throw Error(Errc::InvalidArgument,
                "alpha needs at least one unit rated by two or more raters");

  std::vector<double> domain;
  for (const auto& unit : units)
    for (double v : unit) domain.push_back(v);
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  const std::size_t v = domain.size();
  auto value_index = [&](double x) {
    return static_cast<std::size_t>(
        std::lower_bound(domain.begin(), domain.end(), x) - domain.begin());
  };

  // coincidence matrix: each ordered within-unit pair weighted 1/(m_u - 1)
  std::vector<std::vector<double>> o(v, std::vector<double>(v, 0.0));
  for (const auto& unit : units) {
    double weight = 1.0 / static_cast<double>(unit.size() - 1);
    for (std::size_t i = 0; i < unit.size(); ++i)
      for (std::size_t j = 0; j < unit.size(); ++j) {
        if (i == j) continue;
        o[value_index(unit[i])][value_index(unit[j])] += weight;
      }
  }
  std::vector<double> n_c(v, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < v; ++c)
    for (std::size_t k = 0; k < v; ++k) n_c[c] += o[c][k];
  for (double x : n_c) n += x;

  // squared distance between value ranks; ordinal uses the coincidence
  // marginals of all values lying between the two
  auto delta2 = [&](std::size_t c, std::size_t k) -> double {
    if (c == k) return 0.0;
    if (level == AlphaLevel::Nominal) return 1.0;
    std::size_t lo = std::min(c, k), hi = std::max(c, k);
    double between = 0.0;
    for (std::size_t g = lo; g <= hi; ++g) between += n_c[g];
    double d = between - (n_c[lo] + n_c[hi]) / 2.0;
    return d * d;
  };

  double observed = 0.0, expected = 0.0;
  for (std::size_t c = 0; c < v; ++c)
    for (std::size_t k = 0; k < v; ++k) {
      double d2 = delta2(c, k);
      observed += o[c][k] * d2;
      expected += n_c[c] * n_c[k] * d2;
    }
  double d_o = observed / n;
  double d_e = expected / (n * (n - 1.0));
  if (d_e == 0.0) return 1.0;  // single value everywhere: no measurable disagreement
  return 1.0 - d_o / d_e;
}

RatingsMatrix load_ratings_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());

  std::map<std::string, std::map<std::string, double>> by_unit;
  std::vector<std::string> unit_order;
  std::vector<std::string> rater_order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = strutil::trim(line);
    if (trimmed.empty()) continue;
    auto fields = strutil::split(trimmed, ',');
    if (fields.size() < 3)
      throw Error(Errc::ParseError,
                  "ratings line " + std::to_string(line_no) + ": need unit_id,rater_id,score");
    std::string unit = strutil::trim(fields[0]);
    std::string rater = strutil::trim(fields[1]);
    std::string score_text = strutil::trim(fields[2]);
    char* end = nullptr;
    double score = std::strtod(score_text.c_str(), &end);
    if (!end || *end != '\0') {
      if (line_no == 1) continue;  // header
      throw Error(Errc::ParseError,
                  "ratings line " + std::to_string(line_no) + ": non-numeric score");
    }
    if (!by_unit.count(unit)) unit_order.push_back(unit);
    if (std::find(rater_order.begin(), rater_order.end(), rater) == rater_order.end())
      rater_order.push_back(rater);
    by_unit[unit][rater] = score;
  }

  RatingsMatrix matrix;
  for (const auto& unit : unit_order) {
    std::vector<std::optional<double>> row;
    for (const auto& rater : rater_order) {
      auto it = by_unit[unit].find(rater);
      row.push_back(it == by_unit[unit].end() ? std::nullopt
                                              : std::optional<double>(it->second));
    }
    matrix.cells.push_back(std::move(row));
  }
  return matrix;
}

}  // namespace practiq::bench
