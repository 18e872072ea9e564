#include "practiq/strutil.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace practiq::strutil {

namespace {
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (lower(a[i]) != lower(b[i])) return false;
  return true;
}

std::string normalize_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c) || c == '_') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(lower(c));
  }
  return out;
}

bool contains_normalized(std::string_view haystack, std::string_view needle) {
  std::string h = normalize_ws(haystack);
  std::string n = normalize_ws(needle);
  if (n.empty()) return true;
  return h.find(n) != std::string::npos;
}

std::string humanize_identifier(std::string_view ident) {
  std::string out;
  out.reserve(ident.size() + 4);
  for (std::size_t i = 0; i < ident.size(); ++i) {
    char c = ident[i];
    if (c == '_') {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    // break camelCase boundaries: "FullName" -> "full name"
    if (i > 0 && std::isupper(static_cast<unsigned char>(c)) &&
        std::islower(static_cast<unsigned char>(ident[i - 1]))) {
      out.push_back(' ');
    }
    out.push_back(lower(c));
  }
  return trim(out);
}

std::string fuzzy_normal_form(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(lower(c));
    else
      out.push_back(' ');
  }
  // collapse spaces
  std::string collapsed;
  collapsed.reserve(out.size());
  for (char c : out) {
    if (c == ' ' && (collapsed.empty() || collapsed.back() == ' ')) continue;
    collapsed.push_back(c);
  }
  while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
  return collapsed;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t prev = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t cur = row[j];
      std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, prev + cost});
      prev = cur;
    }
  }
  return row[b.size()];
}

double edit_similarity(std::string_view a, std::string_view b) {
  std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(m);
}

double trigram_jaccard(std::string_view a, std::string_view b) {
  auto grams = [](std::string_view s) {
    std::set<std::string> g;
    if (s.size() < 3) {
      if (!s.empty()) g.insert(std::string(s));
      return g;
    }
    for (std::size_t i = 0; i + 3 <= s.size(); ++i) g.insert(std::string(s.substr(i, 3)));
    return g;
  };
  std::set<std::string> ga = grams(a), gb = grams(b);
  if (ga.empty() && gb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& g : ga) inter += gb.count(g);
  std::size_t uni = ga.size() + gb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view s) {
  return [](const std::string& norm) {
    std::vector<std::string> toks;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= norm.size(); ++i) {
      if (i == norm.size() || norm[i] == ' ') {
        if (i > start) toks.emplace_back(norm.substr(start, i - start));
        start = i + 1;
      }
    }
    return toks;
  }(fuzzy_normal_form(s));
}

int replace_all_ci(std::string& text, std::string_view from, std::string_view to) {
  if (from.empty()) return 0;
  std::string lower_text = to_lower(text);
  std::string lower_from = to_lower(from);
  int count = 0;
  std::size_t pos = 0;
  while ((pos = lower_text.find(lower_from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    lower_text.replace(pos, from.size(), to_lower(to));
    pos += to.size();
    ++count;
  }
  return count;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace practiq::strutil
