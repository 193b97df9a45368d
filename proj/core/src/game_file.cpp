// Copyright 2026 The Incentive Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "incentive/game_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "incentive/parser.hpp"

namespace incentive {

GameFileError::GameFileError(const std::string& source, std::size_t line, std::size_t column,
                             const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t key_column = 0;
  std::size_t value_column = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

const std::set<std::string> kSections{"agents", "costs", "operator", "bounds", "incentive", "solver"};

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; });
}

class Reader {
 public:
  Reader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& message) const {
    throw GameFileError(source_, line, column, message);
  }

  std::map<std::string, Section> read() {
    std::map<std::string, Section> sections;
    Section* current = nullptr;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      const std::size_t first = line.find_first_not_of(" \t");
      if (first != std::string_view::npos && line[first] != '#' && line[first] != ';') {
        std::size_t last = line.find_last_not_of(" \t");
        const std::string_view body = line.substr(first, last - first + 1);
        if (body.front() == '[') {
          if (body.back() != ']') fail(line_no, first + 1, "unterminated section header");
          std::string name(body.substr(1, body.size() - 2));
          if (!kSections.count(name)) fail(line_no, first + 2, "unknown section [" + name + "]");
          if (sections.count(name)) fail(line_no, first + 1, "duplicate section [" + name + "]");
          current = &sections[name];
          current->name = name;
          current->line = line_no;
        } else {
          const std::size_t eq = line.find('=', first);
          if (eq == std::string_view::npos) fail(line_no, first + 1, "expected 'key = value'");
          if (current == nullptr) fail(line_no, first + 1, "entry outside of any section");
          Entry e;
          e.line = line_no;
          e.key_column = first + 1;
          const std::size_t key_end = line.find_last_not_of(" \t", eq == 0 ? 0 : eq - 1);
          if (eq == first || key_end == std::string_view::npos || key_end < first) {
            fail(line_no, first + 1, "missing key");
          }
          e.key = std::string(line.substr(first, key_end - first + 1));
          const std::size_t value_start = line.find_first_not_of(" \t", eq + 1);
          if (value_start == std::string_view::npos) fail(line_no, eq + 2, "missing value for '" + e.key + "'");
          e.value = std::string(line.substr(value_start, last - value_start + 1));
          e.value_column = value_start + 1;
          for (const auto& other : current->entries) {
            if (other.key == e.key) fail(line_no, e.key_column, "duplicate key '" + e.key + "'");
          }
          current->entries.push_back(std::move(e));
        }
      }
      if (end == text_.size()) break;
      start = end + 1;
    }
    return sections;
  }

  std::string unquote(const Entry& e) const {
    if (e.value.size() < 2 || e.value.front() != '"' || e.value.back() != '"') {
      fail(e.line, e.value_column, "expected a quoted expression for '" + e.key + "'");
    }
    return e.value.substr(1, e.value.size() - 2);
  }

  Expression expression(const Entry& e, const std::vector<std::string>& names) const {
    const std::string text = unquote(e);
    try {
      return parse_expression(text, names);
    } catch (const ParseError& err) {
      fail(e.line, e.value_column + 1 + err.position(), err.what());
    } catch (const ExpressionError& err) {
      fail(e.line, e.value_column + 1, err.what());
    }
  }

  Interval interval(const Entry& e) const {
    const std::string& v = e.value;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
      fail(e.line, e.value_column, "expected an interval '[lo, hi]'");
    }
    const std::size_t comma = v.find(',');
    if (comma == std::string::npos) fail(e.line, e.value_column, "expected an interval '[lo, hi]'");
    auto bound = [&](std::size_t from, std::size_t to) {
      std::string piece = v.substr(from, to - from);
      const std::size_t a = piece.find_first_not_of(" \t");
      const std::size_t b = piece.find_last_not_of(" \t");
      const std::size_t column = e.value_column + from + (a == std::string::npos ? 0 : a);
      if (a == std::string::npos) fail(e.line, column, "missing interval bound");
      const auto r = parse_rational(std::string_view(piece).substr(a, b - a + 1));
      if (!r) fail(e.line, column, "malformed number '" + piece.substr(a, b - a + 1) + "'");
      return *r;
    };
    Interval iv{bound(1, comma), bound(comma + 1, v.size() - 1)};
    if (!(iv.lo < iv.hi)) fail(e.line, e.value_column, "empty interval for '" + e.key + "'");
    return iv;
  }

  std::vector<std::pair<std::string, std::size_t>> list(const Entry& e) const {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t from = 0;
    while (from <= e.value.size()) {
      std::size_t to = e.value.find(',', from);
      if (to == std::string::npos) to = e.value.size();
      std::string piece = e.value.substr(from, to - from);
      const std::size_t a = piece.find_first_not_of(" \t");
      const std::size_t column = e.value_column + from + (a == std::string::npos ? 0 : a);
      if (a == std::string::npos) fail(e.line, column, "empty list item");
      const std::size_t b = piece.find_last_not_of(" \t");
      out.emplace_back(piece.substr(a, b - a + 1), column);
      if (to == e.value.size()) break;
      from = to + 1;
    }
    return out;
  }

  template <typename T>
  T number(const Entry& e) const {
    T out{};
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc() || res.ptr != end) fail(e.line, e.value_column, "malformed number for '" + e.key + "'");
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string_view text_;
  std::string source_;
};

std::size_t agent_index(const Reader& r, const std::vector<std::string>& names, const std::string& name,
                        std::size_t line, std::size_t column) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) r.fail(line, column, "unknown agent '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

GameSpec parse_game_spec(std::string_view text, const std::string& source) {
  Reader r(text, source);
  auto sections = r.read();
  auto require = [&](const char* name) -> const Section& {
    if (!sections.count(name)) r.fail(1, 1, std::string("missing section [") + name + "]");
    return sections.at(name);
  };

  // Agents.
  const Section& agents = require("agents");
  std::vector<std::string> names;
  for (const auto& e : agents.entries) {
    if (e.key != "names") r.fail(e.line, e.key_column, "unknown key '" + e.key + "' in [agents]");
    for (const auto& [name, column] : r.list(e)) {
      if (!is_identifier(name) || name == "abs") r.fail(e.line, column, "invalid agent name '" + name + "'");
      if (std::find(names.begin(), names.end(), name) != names.end()) {
        r.fail(e.line, column, "duplicate agent '" + name + "'");
      }
      names.push_back(name);
    }
  }
  if (names.empty()) r.fail(agents.line, 1, "[agents] declares no names");
  const std::size_t n = names.size();

  // Costs.
  std::vector<std::optional<Expression>> costs(n);
  const Section& cost_section = require("costs");
  for (const auto& e : cost_section.entries) {
    const std::size_t i = agent_index(r, names, e.key, e.line, e.key_column);
    costs[i] = r.expression(e, names);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!costs[i]) r.fail(cost_section.line, 1, "missing cost for agent '" + names[i] + "'");
  }

  // Operator.
  const Section& op = require("operator");
  std::optional<Expression> operator_cost;
  for (const auto& e : op.entries) {
    if (e.key != "cost") r.fail(e.line, e.key_column, "unknown key '" + e.key + "' in [operator]");
    operator_cost = r.expression(e, names);
  }
  if (!operator_cost) r.fail(op.line, 1, "[operator] needs 'cost'");

  // Bounds.
  Box box(n);
  if (sections.count("bounds")) {
    for (const auto& e : sections.at("bounds").entries) {
      box[agent_index(r, names, e.key, e.line, e.key_column)] = r.interval(e);
    }
  }

  std::vector<Expression> cost_list;
  for (auto& c : costs) cost_list.push_back(std::move(*c));
  std::optional<Game> game;
  try {
    game.emplace(names, std::move(cost_list), std::move(*operator_cost), std::move(box));
  } catch (const GameError& err) {
    r.fail(agents.line, 1, err.what());
  }

  GameSpec spec{std::move(*game), std::nullopt, {}, std::nullopt, {}};

  // Incentive.
  if (sections.count("incentive")) {
    const Section& inc = sections.at("incentive");
    IncentiveScheme scheme;
    bool has_kind = false;
    std::vector<std::optional<Expression>> custom(n);
    std::optional<std::size_t> custom_line;
    for (const auto& e : inc.entries) {
      if (e.key == "kind") {
        if (e.value == "custom") {
          scheme.kind = SchemeKind::kCustom;
        } else if (e.value == "proportional") {
          scheme.kind = SchemeKind::kProportional;
        } else if (e.value == "vcg") {
          scheme.kind = SchemeKind::kVcg;
        } else {
          r.fail(e.line, e.value_column, "unknown scheme kind '" + e.value + "'");
        }
        has_kind = true;
      } else if (e.key == "mode") {
        if (e.value == "anticipatory") {
          scheme.mode = Anticipation::kAnticipatory;
        } else if (e.value == "non-anticipatory") {
          scheme.mode = Anticipation::kNonAnticipatory;
        } else {
          r.fail(e.line, e.value_column, "unknown mode '" + e.value + "'");
        }
      } else if (e.key.rfind("t.", 0) == 0) {
        const std::size_t i = agent_index(r, names, e.key.substr(2), e.line, e.key_column + 2);
        custom[i] = r.expression(e, names);
        if (!custom_line) custom_line = e.line;
      } else if (e.key == "declared_inner") {
        spec.declared_inner = r.expression(e, names);
      } else if (e.key == "opted_out") {
        for (const auto& [name, column] : r.list(e)) {
          spec.participation.opted_out.insert(agent_index(r, names, name, e.line, column));
        }
      } else {
        r.fail(e.line, e.key_column, "unknown key '" + e.key + "' in [incentive]");
      }
    }
    if (!has_kind) r.fail(inc.line, 1, "[incentive] needs 'kind'");
    if (scheme.kind == SchemeKind::kCustom) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!custom[i]) r.fail(inc.line, 1, "custom scheme is missing 't." + names[i] + "'");
        scheme.custom.push_back(std::move(*custom[i]));
      }
    } else if (custom_line) {
      r.fail(*custom_line, 1, "incentive functions are only allowed with kind = custom");
    }
    spec.scheme = std::move(scheme);
  }

  // Solver overrides.
  if (sections.count("solver")) {
    for (const auto& e : sections.at("solver").entries) {
      if (e.key == "grid_points_per_axis") {
        spec.solver.grid_points_per_axis = r.number<int>(e);
      } else if (e.key == "br_max_iters") {
        spec.solver.br_max_iters = r.number<int>(e);
      } else if (e.key == "tol_fixed_point") {
        spec.solver.tol_fixed_point = r.number<double>(e);
      } else if (e.key == "tol_stationarity") {
        spec.solver.tol_stationarity = r.number<double>(e);
      } else if (e.key == "multistart_count") {
        spec.solver.multistart_count = r.number<int>(e);
      } else {
        r.fail(e.line, e.key_column, "unknown key '" + e.key + "' in [solver]");
      }
    }
    try {
      spec.solver.validate();
    } catch (const std::invalid_argument& err) {
      r.fail(sections.at("solver").line, 1, err.what());
    }
  }
  return spec;
}

GameSpec load_game_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GameFileError(path.string(), 0, 0, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_game_spec(buffer.str(), path.string());
}

}  // namespace incentive
