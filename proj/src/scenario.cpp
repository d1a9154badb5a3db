#include "scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace bellkcbs {
namespace {

int parse_int(std::string_view text, const std::string& what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::parse, "invalid integer '" + std::string(text) + "' in " + what);
  }
  return value;
}

std::string context_label(const Context& ctx) {
  std::string out = "{";
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ctx[i]);
  }
  return out + "}";
}

std::string outcome_label(int o) { return o > 0 ? "+1" : "-1"; }

int bit_of(int outcome) { return outcome > 0 ? 1 : 0; }

// Outcome of the measurement at `pos` (label order) in cell `cell` of a
// k-measurement table whose Bob bits occupy the low k positions.
int bob_bit(std::size_t cell, std::size_t k, std::size_t pos) {
  return static_cast<int>((cell >> (k - 1 - pos)) & 1u);
}

}  // namespace

std::size_t table_size(const Context& ctx) {
  return std::size_t{2} << ctx.size();
}

std::size_t outcome_index(int a, const std::vector<int>& bs) {
  std::size_t idx = static_cast<std::size_t>(bit_of(a));
  for (int b : bs) idx = (idx << 1) | static_cast<std::size_t>(bit_of(b));
  return idx;
}

Scenario Scenario::pentagon() {
  Scenario s;
  s.alice_settings = {0, 1};
  s.bob_settings = {0, 1, 2, 3, 4};
  s.bob_contexts = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0}};
  for (int x : s.alice_settings) {
    for (const Context& ctx : s.bob_contexts) s.joint_contexts.emplace_back(x, ctx);
  }
  s.validate();
  return s;
}

std::vector<Context> Scenario::edge_contexts() const {
  std::vector<Context> edges;
  for (const Context& ctx : bob_contexts) {
    if (ctx.size() == 2) edges.push_back(ctx);
  }
  return edges;
}

void Scenario::validate() const {
  if (alice_settings.empty() || bob_settings.empty() || bob_contexts.empty()) {
    fail(ErrorKind::structure, "scenario must declare settings and contexts");
  }
  std::set<int> bob(bob_settings.begin(), bob_settings.end());
  if (bob.size() != bob_settings.size()) {
    fail(ErrorKind::structure, "duplicate Bob setting labels");
  }
  for (const Context& ctx : bob_contexts) {
    if (ctx.empty()) fail(ErrorKind::structure, "empty Bob context");
    std::set<int> seen;
    for (int y : ctx) {
      if (!bob.count(y)) {
        fail(ErrorKind::structure,
             "context " + context_label(ctx) + " uses unknown setting " + std::to_string(y));
      }
      if (!seen.insert(y).second) {
        fail(ErrorKind::structure, "context " + context_label(ctx) + " repeats a setting");
      }
    }
  }
  std::set<JointContext> joint(joint_contexts.begin(), joint_contexts.end());
  if (joint.size() != joint_contexts.size()) {
    fail(ErrorKind::structure, "duplicate joint contexts");
  }
  for (const auto& [x, ctx] : joint_contexts) {
    if (std::find(alice_settings.begin(), alice_settings.end(), x) == alice_settings.end()) {
      fail(ErrorKind::structure, "joint context uses unknown Alice setting " + std::to_string(x));
    }
    if (std::find(bob_contexts.begin(), bob_contexts.end(), ctx) == bob_contexts.end()) {
      fail(ErrorKind::structure, "joint context uses undeclared Bob context " + context_label(ctx));
    }
  }
}

std::string joint_context_key(const JointContext& jc) {
  std::string key = "x" + std::to_string(jc.first) + "_ctx";
  for (std::size_t i = 0; i < jc.second.size(); ++i) {
    if (i) key += "_";
    key += std::to_string(jc.second[i]);
  }
  return key;
}

JointContext parse_joint_context_key(const std::string& key) {
  if (key.size() < 2 || key[0] != 'x') {
    fail(ErrorKind::parse, "joint context key '" + key + "' must start with 'x'");
  }
  const auto ctx_pos = key.find("_ctx");
  if (ctx_pos == std::string::npos || ctx_pos + 4 >= key.size()) {
    fail(ErrorKind::parse, "joint context key '" + key + "' lacks a '_ctx' section");
  }
  JointContext jc;
  jc.first = parse_int(std::string_view(key).substr(1, ctx_pos - 1), "key '" + key + "'");
  std::string_view rest = std::string_view(key).substr(ctx_pos + 4);
  while (!rest.empty()) {
    const auto sep = rest.find('_');
    const auto piece = rest.substr(0, sep);
    jc.second.push_back(parse_int(piece, "key '" + key + "'"));
    if (sep == std::string_view::npos) break;
    rest = rest.substr(sep + 1);
    if (rest.empty()) fail(ErrorKind::parse, "trailing '_' in key '" + key + "'");
  }
  if (jc.second.empty()) fail(ErrorKind::parse, "empty context in key '" + key + "'");
  return jc;
}

void validate_behavior(const Behavior& behavior, double tol) {
  if (behavior.tables.empty()) fail(ErrorKind::structure, "behavior has no tables");
  for (const auto& [jc, table] : behavior.tables) {
    const std::string key = joint_context_key(jc);
    if (table.size() != table_size(jc.second)) {
      fail(ErrorKind::structure,
           "table " + key + " has " + std::to_string(table.size()) + " entries, expected " +
               std::to_string(table_size(jc.second)));
    }
    double sum = 0.0;
    for (double p : table) {
      if (!(p >= -1e-12)) {
        fail(ErrorKind::structure, "negative probability in table " + key);
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      fail(ErrorKind::structure,
           "table " + key + " sums to " + std::to_string(sum) + ", not normalized");
    }
  }
}

std::string behavior_to_json(const Behavior& behavior) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [jc, table] : behavior.tables) j[joint_context_key(jc)] = table;
  return j.dump(2);
}

Behavior behavior_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("behavior JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::parse, "behavior JSON must be an object");
  Behavior behavior;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_array()) fail(ErrorKind::parse, "table '" + key + "' must be an array");
    std::vector<double> table;
    for (const auto& cell : value) {
      if (!cell.is_number()) fail(ErrorKind::parse, "non-numeric entry in table '" + key + "'");
      table.push_back(cell.get<double>());
    }
    behavior.tables.emplace(parse_joint_context_key(key), std::move(table));
  }
  validate_behavior(behavior);
  return behavior;
}

MarginalBehavior marginalize_bob(const Behavior& behavior) {
  // Group the per-setting Bob marginals by context first.
  std::map<Context, std::vector<std::vector<double>>> per_setting;
  for (const auto& [jc, table] : behavior.tables) {
    const std::size_t cells = table.size() / 2;
    std::vector<double> bob(cells, 0.0);
    for (std::size_t i = 0; i < table.size(); ++i) bob[i % cells] += table[i];
    per_setting[jc.second].push_back(std::move(bob));
  }
  MarginalBehavior marginal;
  for (auto& [ctx, versions] : per_setting) {
    const std::size_t cells = versions.front().size();
    std::vector<double> mean(cells, 0.0);
    double spread = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      double lo = versions.front()[i], hi = lo;
      for (const auto& v : versions) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
        mean[i] += v[i];
      }
      mean[i] /= static_cast<double>(versions.size());
      spread = std::max(spread, hi - lo);
    }
    marginal.tables.emplace(ctx, std::move(mean));
    marginal.cross_setting_spread.emplace(ctx, spread);
  }
  return marginal;
}

ConsistencyReport check_no_signalling(const Behavior& behavior, double tol) {
  ConsistencyReport report;
  auto compare = [&](double lhs, double rhs, const std::string& condition) {
    const double diff = std::abs(lhs - rhs);
    report.max_violation = std::max(report.max_violation, diff);
    if (diff > tol) report.violations.push_back({condition, lhs, rhs});
  };

  // Bob marginal independent of the Alice setting.
  std::map<Context, std::vector<std::pair<int, std::vector<double>>>> bob_by_ctx;
  for (const auto& [jc, table] : behavior.tables) {
    const std::size_t cells = table.size() / 2;
    std::vector<double> bob(cells, 0.0);
    for (std::size_t i = 0; i < table.size(); ++i) bob[i % cells] += table[i];
    bob_by_ctx[jc.second].emplace_back(jc.first, std::move(bob));
  }
  for (const auto& [ctx, versions] : bob_by_ctx) {
    const std::size_t k = ctx.size();
    for (std::size_t i = 0; i + 1 < versions.size(); ++i) {
      for (std::size_t j = i + 1; j < versions.size(); ++j) {
        for (std::size_t cell = 0; cell < versions[i].second.size(); ++cell) {
          std::string outcomes;
          for (std::size_t pos = 0; pos < k; ++pos) {
            if (pos) outcomes += ",";
            outcomes += outcome_label(bob_bit(cell, k, pos) ? +1 : -1);
          }
          compare(versions[i].second[cell], versions[j].second[cell],
                  "p(b=(" + outcomes + ")|ctx=" + context_label(ctx) +
                      ") independent of x: x=" + std::to_string(versions[i].first) +
                      " vs x=" + std::to_string(versions[j].first));
        }
      }
    }
  }

  // Alice marginal independent of the Bob context.
  std::map<int, std::vector<std::pair<Context, std::array<double, 2>>>> alice_by_x;
  for (const auto& [jc, table] : behavior.tables) {
    const std::size_t cells = table.size() / 2;
    std::array<double, 2> alice{0.0, 0.0};
    for (std::size_t i = 0; i < table.size(); ++i) alice[i / cells] += table[i];
    alice_by_x[jc.first].emplace_back(jc.second, alice);
  }
  for (const auto& [x, versions] : alice_by_x) {
    for (std::size_t i = 0; i + 1 < versions.size(); ++i) {
      for (std::size_t j = i + 1; j < versions.size(); ++j) {
        for (int bit = 0; bit < 2; ++bit) {
          compare(versions[i].second[bit], versions[j].second[bit],
                  "p(a=" + outcome_label(bit ? +1 : -1) + "|x=" + std::to_string(x) +
                      ") independent of Bob context: ctx=" + context_label(versions[i].first) +
                      " vs ctx=" + context_label(versions[j].first));
        }
      }
    }
  }
  return report;
}

namespace {

// p(outcome at measurement y = +1) within one marginal context table.
double plus_marginal(const Context& ctx, const std::vector<double>& table, int y) {
  const std::size_t k = ctx.size();
  const std::size_t pos =
      static_cast<std::size_t>(std::find(ctx.begin(), ctx.end(), y) - ctx.begin());
  double p = 0.0;
  for (std::size_t cell = 0; cell < table.size(); ++cell) {
    if (bob_bit(cell, k, pos)) p += table[cell];
  }
  return p;
}

}  // namespace

ConsistencyReport check_no_disturbance(const MarginalBehavior& marginal, double tol) {
  ConsistencyReport report;
  std::set<int> settings;
  for (const auto& [ctx, table] : marginal.tables) {
    for (int y : ctx) settings.insert(y);
  }
  for (int y : settings) {
    std::vector<std::pair<Context, double>> plus;
    for (const auto& [ctx, table] : marginal.tables) {
      if (std::find(ctx.begin(), ctx.end(), y) != ctx.end()) {
        plus.emplace_back(ctx, plus_marginal(ctx, table, y));
      }
    }
    for (std::size_t i = 0; i + 1 < plus.size(); ++i) {
      for (std::size_t j = i + 1; j < plus.size(); ++j) {
        for (int sign : {+1, -1}) {
          const double lhs = sign > 0 ? plus[i].second : 1.0 - plus[i].second;
          const double rhs = sign > 0 ? plus[j].second : 1.0 - plus[j].second;
          const double diff = std::abs(lhs - rhs);
          report.max_violation = std::max(report.max_violation, diff);
          if (diff > tol) {
            report.violations.push_back(
                {"p(b=" + outcome_label(sign) + " for B" + std::to_string(y) +
                     ") context-independent: ctx=" + context_label(plus[i].first) +
                     " vs ctx=" + context_label(plus[j].first),
                 lhs, rhs});
          }
        }
      }
    }
  }
  return report;
}

double disturbance_distance(const MarginalBehavior& marginal) {
  std::map<int, std::vector<std::pair<Context, double>>> by_setting;
  for (const auto& [ctx, table] : marginal.tables) {
    if (ctx.size() != 2) continue;  // the distance uses edge contexts only
    for (int y : ctx) by_setting[y].emplace_back(ctx, plus_marginal(ctx, table, y));
  }
  if (by_setting.empty()) {
    fail(ErrorKind::structure, "disturbance distance needs two-measurement contexts");
  }
  double distance = 0.0;
  for (const auto& [y, entries] : by_setting) {
    if (entries.size() != 2) {
      fail(ErrorKind::structure, "measurement B" + std::to_string(y) + " appears in " +
                                     std::to_string(entries.size()) +
                                     " edge contexts, expected exactly 2");
    }
    const double d = entries[0].second - entries[1].second;
    distance += d * d;
  }
  return distance;
}

}  // namespace bellkcbs
