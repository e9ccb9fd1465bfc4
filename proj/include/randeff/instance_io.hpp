#pragma once

#include "randeff/core.hpp"

#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace randeff {

struct Instance {
  PreferenceProfile profile;
  std::optional<RandomAssignment> assignment;
};

struct ParseOptions {
  std::size_t max_agents = kDefaultMaxAgents;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "key: rest" -> (key, rest). Returns false when the line has no colon.
inline bool split_key(const std::string& line, std::string& key, std::string& rest) {
  const auto colon = line.find(':');
  if (colon == std::string::npos) return false;
  key = trim(line.substr(0, colon));
  rest = trim(line.substr(colon + 1));
  return true;
}

}  // namespace detail

/// Reads the line-oriented instance format:
///
///   agents: 4
///   objects: o1 o2 o3 o4
///   prefs:
///   1: o1 o2 o3 o4
///   ...
///   assignment:        (optional)
///   5/12 1/12 5/12 1/12
///   ...
///
/// Blank lines are skipped and '#' starts a comment. Errors carry the line
/// number of the offending input.
inline Instance parse_instance(std::istream& in, const ParseOptions& options = {}) {
  struct Line {
    std::size_t number;
    std::string text;
  };
  std::vector<Line> lines;
  {
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      raw = detail::trim(raw);
      if (!raw.empty()) lines.push_back({number, raw});
    }
  }
  std::size_t cursor = 0;
  const std::size_t last_line = lines.empty() ? 1 : lines.back().number;
  auto next = [&](const char* expected) -> const Line& {
    if (cursor >= lines.size()) {
      throw InputError(std::string("unexpected end of input, expected ") + expected, last_line);
    }
    return lines[cursor++];
  };
  auto expect_key = [&](const char* key) {
    const Line& line = next(key);
    std::string k, rest;
    if (!detail::split_key(line.text, k, rest) || k != key) {
      throw InputError(std::string("expected '") + key + ":'", line.number);
    }
    return std::pair<std::string, std::size_t>{rest, line.number};
  };

  // agents: n
  auto [count_text, count_line] = expect_key("agents");
  std::size_t n = 0;
  {
    const auto tokens = detail::split_ws(count_text);
    if (tokens.size() != 1 || tokens[0].find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("agent count must be a positive integer", count_line);
    }
    try {
      n = std::stoul(tokens[0]);
    } catch (const std::exception&) {
      throw InputError("agent count out of range", count_line);
    }
    if (n == 0) throw InputError("agent count must be a positive integer", count_line);
    if (n > options.max_agents) {
      throw InputError("agent count " + std::to_string(n) + " exceeds the limit of " +
                           std::to_string(options.max_agents),
                       count_line);
    }
  }

  // objects: names
  auto [object_text, object_line] = expect_key("objects");
  const auto object_names = detail::split_ws(object_text);
  if (object_names.size() != n) {
    throw InputError("expected " + std::to_string(n) + " objects, found " +
                         std::to_string(object_names.size()),
                     object_line);
  }
  std::map<std::string, std::size_t> object_index;
  for (std::size_t o = 0; o < n; ++o) {
    if (!object_index.emplace(object_names[o], o).second) {
      throw InputError("duplicate object name '" + object_names[o] + "'", object_line);
    }
  }

  // prefs:
  {
    auto [rest, line] = expect_key("prefs");
    if (!rest.empty()) throw InputError("unexpected text after 'prefs:'", line);
  }
  std::vector<std::string> agent_names;
  std::vector<std::vector<std::size_t>> prefs;
  std::map<std::string, std::size_t> seen_agents;
  for (std::size_t i = 0; i < n; ++i) {
    const Line& line = next("a preference line");
    std::string label, rest;
    if (!detail::split_key(line.text, label, rest) || label.empty() ||
        label.find_first_of(" \t") != std::string::npos) {
      throw InputError("expected '<agent>: <objects...>'", line.number);
    }
    if (label == "assignment") {
      throw InputError("expected " + std::to_string(n) + " preference lines, found " +
                           std::to_string(i),
                       line.number);
    }
    if (!seen_agents.emplace(label, i).second) {
      throw InputError("duplicate agent '" + label + "'", line.number);
    }
    const auto names = detail::split_ws(rest);
    if (names.size() != n) {
      throw InputError("agent " + label + " ranks " + std::to_string(names.size()) +
                           " objects, expected " + std::to_string(n),
                       line.number);
    }
    std::vector<std::size_t> ranking;
    std::vector<bool> used(n, false);
    for (const auto& name : names) {
      const auto it = object_index.find(name);
      if (it == object_index.end()) {
        throw InputError("unknown object '" + name + "' in preferences of agent " + label,
                         line.number);
      }
      if (used[it->second]) {
        throw InputError("object '" + name + "' appears twice in preferences of agent " + label,
                         line.number);
      }
      used[it->second] = true;
      ranking.push_back(it->second);
    }
    agent_names.push_back(label);
    prefs.push_back(std::move(ranking));
  }
  Instance result{PreferenceProfile(std::move(agent_names), object_names, std::move(prefs)),
                  std::nullopt};

  if (cursor == lines.size()) return result;

  {
    auto [rest, line] = expect_key("assignment");
    if (!rest.empty()) throw InputError("unexpected text after 'assignment:'", line);
  }
  RationalMatrix matrix(n);
  std::vector<std::size_t> row_lines;
  for (std::size_t i = 0; i < n; ++i) {
    const Line& line = next("an assignment row");
    const auto tokens = detail::split_ws(line.text);
    if (tokens.size() != n) {
      throw InputError("assignment row has " + std::to_string(tokens.size()) +
                           " entries, expected " + std::to_string(n),
                       line.number);
    }
    for (std::size_t o = 0; o < n; ++o) {
      const auto& tok = tokens[o];
      if (tok.find_first_of(".eE") != std::string::npos) {
        throw InputError("decimal literal '" + tok + "' not accepted; write an exact fraction",
                         line.number);
      }
      const auto value = parse_rational(tok);
      if (!value) throw InputError("malformed rational '" + tok + "'", line.number);
      if (*value < 0 || *value > 1) {
        throw InputError("entry " + tok + " is outside [0,1]", line.number);
      }
      matrix(i, o) = *value;
    }
    row_lines.push_back(line.number);
  }
  if (cursor != lines.size()) {
    throw InputError("unexpected trailing content", lines[cursor].number);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Rational sum = 0;
    for (std::size_t o = 0; o < n; ++o) sum += matrix(i, o);
    if (sum != 1) {
      throw InputError("row sums to " + format_rational(sum) + ", expected 1", row_lines[i]);
    }
  }
  for (std::size_t o = 0; o < n; ++o) {
    Rational sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += matrix(i, o);
    if (sum != 1) {
      throw InputError("column " + object_names[o] + " sums to " + format_rational(sum) +
                           ", expected 1",
                       row_lines.back());
    }
  }
  result.assignment = RandomAssignment(std::move(matrix));
  return result;
}

inline Instance parse_instance(const std::string& text, const ParseOptions& options = {}) {
  std::istringstream in(text);
  return parse_instance(in, options);
}

inline void write_instance(std::ostream& out, const PreferenceProfile& profile,
                           const std::optional<RandomAssignment>& assignment = std::nullopt) {
  const std::size_t n = profile.size();
  out << "agents: " << n << "\nobjects:";
  for (const auto& name : profile.object_names()) out << ' ' << name;
  out << "\nprefs:\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << profile.agent_name(i) << ':';
    for (std::size_t o : profile.ranking(i)) out << ' ' << profile.object_name(o);
    out << '\n';
  }
  if (assignment) {
    out << "assignment:\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t o = 0; o < n; ++o) {
        if (o) out << ' ';
        out << format_rational((*assignment)(i, o));
      }
      out << '\n';
    }
  }
}

inline std::string serialize_instance(const PreferenceProfile& profile,
                                      const std::optional<RandomAssignment>& assignment = std::nullopt) {
  std::ostringstream out;
  write_instance(out, profile, assignment);
  return out.str();
}

}  // namespace randeff
