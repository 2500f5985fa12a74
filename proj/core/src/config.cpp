/*
   Copyright 2026 The levy_bdg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include <fmt/format.h>

#include "levy_bdg/experiment.hpp"

namespace levy_bdg {
namespace {

using json = nlohmann::json;
using Keys = std::initializer_list<std::string_view>;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

bool is_range(const json& v) { return v.is_object() && v.size() == 1 && v.contains("range"); }

void object_keys(const json& j, const std::string& path, Keys allowed, Keys required = {}) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(path + "." + key, "unknown key");
    }
  }
  for (std::string_view key : required) {
    if (!j.contains(std::string(key))) fail(path + "." + std::string(key), "required key missing");
  }
}

// Nested objects are validated only when present and not ranged.
template <class Fn>
void child(const json& j, const std::string& path, const char* key, Fn&& fn) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (is_range(v)) fail(path + "." + key, "ranges are only supported on scalar values");
  fn(v, path + "." + key);
}

template <class Fn>
void each(const json& arr, const std::string& path, Fn&& fn) {
  if (!arr.is_array()) fail(path, "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) fn(arr[i], fmt::format("{}[{}]", path, i));
}

void number_leaf(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (is_range(v)) return;
  if (!v.is_number()) fail(path + "." + key, "expected a number");
}

void norm_leaf(const json& j, const std::string& path) {
  if (!j.contains("norm")) return;
  const json& v = j.at("norm");
  if (is_range(v) || v.is_number() || (v.is_string() && v.get<std::string>() == "inf")) return;
  fail(path + ".norm", "expected a number >= 1 or \"inf\"");
}

void check_model(const json& j, const std::string& path) {
  object_keys(j, path, {"d", "s", "p", "C_p"});
  for (const char* k : {"d", "p", "C_p"}) number_leaf(j, path, k);
  if (j.contains("s")) {
    const json& v = j.at("s");
    if (!(is_range(v) || v.is_number() || v == "inf")) fail(path + ".s", "expected a number or \"inf\"");
  }
}

void check_measure(const json& j, const std::string& path) {
  object_keys(j, path, {"atoms", "geometric", "eps", "norm", "dim"});
  if (j.contains("atoms") == j.contains("geometric")) {
    fail(path, "exactly one of \"atoms\" or \"geometric\" is required");
  }
  number_leaf(j, path, "eps");
  number_leaf(j, path, "dim");
  norm_leaf(j, path);
  child(j, path, "atoms", [](const json& a, const std::string& p) {
    each(a, p, [](const json& atom, const std::string& q) {
      object_keys(atom, q, {"z", "w"}, {"z", "w"});
      number_leaf(atom, q, "w");
    });
  });
  child(j, path, "geometric", [](const json& g, const std::string& p) {
    object_keys(g, p, {"scale", "ratio", "weight", "growth", "count", "dim"});
    for (const char* k : {"scale", "ratio", "weight", "growth", "count", "dim"}) number_leaf(g, p, k);
  });
}

void check_partition(const json& j, const std::string& path) {
  object_keys(j, path, {"cells", "times"});
  number_leaf(j, path, "cells");
}

void check_integrand(const json& j, const std::string& path) {
  object_keys(j, path,
              {"kind", "partition", "value", "scale", "theta", "low", "high", "norm", "cells",
               "atoms", "matrix", "matrices"},
              {"kind"});
  static constexpr std::string_view kinds[] = {"constant", "linear_in_mark", "adapted_threshold",
                                               "table", "matrix"};
  const json& kind = j.at("kind");
  if (!kind.is_string() ||
      std::find(std::begin(kinds), std::end(kinds), kind.get<std::string>()) == std::end(kinds)) {
    fail(path + ".kind", "expected one of constant, linear_in_mark, adapted_threshold, table, matrix");
  }
  for (const char* k : {"scale", "theta", "low", "high"}) number_leaf(j, path, k);
  norm_leaf(j, path);
  child(j, path, "partition", check_partition);
  auto table = [](const json& t, const std::string& p) {
    each(t, p, [](const json& e, const std::string& q) { object_keys(e, q, {"z", "xi"}, {"z", "xi"}); });
  };
  child(j, path, "atoms", table);
  child(j, path, "cells", [&](const json& c, const std::string& p) { each(c, p, table); });
}

void check_phi(const json& j, const std::string& path) {
  object_keys(j, path, {"kind", "p", "scale", "t", "phi", "tail"}, {"kind"});
  number_leaf(j, path, "p");
  number_leaf(j, path, "scale");
}

void check_tree(const json& j, const std::string& path) {
  object_keys(j, path,
              {"generator", "depth", "step", "max_branching", "dim", "norm", "scale", "zero_start",
               "seed", "levels", "initial"});
  if (j.contains("generator") == j.contains("levels")) {
    fail(path, "exactly one of \"generator\" or \"levels\" is required");
  }
  for (const char* k : {"depth", "step", "max_branching", "dim", "scale", "seed"}) number_leaf(j, path, k);
  norm_leaf(j, path);
  child(j, path, "levels", [](const json& l, const std::string& p) {
    each(l, p, [](const json& level, const std::string& q) {
      object_keys(level, q, {"probs", "increments"}, {"probs", "increments"});
    });
  });
}

void check_levy(const json& j, const std::string& path) {
  object_keys(j, path, {"drift", "measure"}, {"measure"});
  child(j, path, "measure", check_measure);
}

void check_experiment(const json& e, const std::string& path) {
  if (!e.is_object() || !e.contains("kind") || !e.at("kind").is_string()) {
    fail(path + ".kind", "required string key missing");
  }
  const std::string kind = e.at("kind").get<std::string>();
  if (kind == "constants") {
    object_keys(e, path, {"kind", "name", "model", "r", "n"});
    number_leaf(e, path, "r");
    number_leaf(e, path, "n");
  } else if (kind == "poisson-lemma") {
    object_keys(e, path, {"kind", "name", "lambda", "p"}, {"lambda", "p"});
  } else if (kind == "cf-check") {
    object_keys(e, path, {"kind", "name", "levy", "t", "thetas", "paths"}, {"levy", "thetas"});
    child(e, path, "levy", check_levy);
    number_leaf(e, path, "t");
    number_leaf(e, path, "paths");
    child(e, path, "thetas", [](const json& t, const std::string& p) {
      if (t.is_object()) {
        object_keys(t, p, {"count", "min", "max", "direction"}, {"count", "min", "max"});
      } else if (!t.is_array()) {
        fail(p, "expected an object {count,min,max} or an array");
      }
    });
  } else if (kind == "verify-continuous") {
    object_keys(e, path,
                {"kind", "name", "inequality", "model", "measure", "integrand", "drift", "T",
                 "paths", "q", "r", "n"},
                {"inequality", "measure", "integrand"});
    const json& which = e.at("inequality");
    if (!(which == "i" || which == "ii" || which == "iii" || which == "corollary")) {
      fail(path + ".inequality", "expected one of i, ii, iii, corollary");
    }
    for (const char* k : {"T", "paths", "q", "r", "n"}) number_leaf(e, path, k);
    if (which == "i" && !e.contains("q")) fail(path + ".q", "required for inequality i");
    if ((which == "ii" || which == "corollary") && !e.contains("r")) {
      fail(path + ".r", "required for this inequality");
    }
    if (which == "iii" && !e.contains("n")) fail(path + ".n", "required for inequality iii");
  } else if (kind == "verify-discrete") {
    object_keys(e, path,
                {"kind", "name", "check", "tree", "trees", "phi", "p", "constant", "beta", "delta",
                 "epsilon", "control"},
                {"check", "tree"});
    const json& check = e.at("check");
    static constexpr std::string_view checks[] = {"doob", "garsia", "davis", "good-lambda",
                                                  "conditional-sum", "bdg", "previsible"};
    if (!check.is_string() ||
        std::find(std::begin(checks), std::end(checks), check.get<std::string>()) == std::end(checks)) {
      fail(path + ".check",
           "expected one of doob, garsia, davis, good-lambda, conditional-sum, bdg, previsible");
    }
    child(e, path, "tree", check_tree);
    child(e, path, "phi", check_phi);
    for (const char* k : {"trees", "p", "constant", "beta", "delta", "epsilon"}) number_leaf(e, path, k);
    if (check == "bdg" && !e.contains("constant")) fail(path + ".constant", "required for bdg");
  } else {
    fail(path + ".kind", "unknown experiment kind '" + kind + "'");
  }
  child(e, path, "model", check_model);
  child(e, path, "measure", check_measure);
  child(e, path, "integrand", check_integrand);
}

void collect_ranges(const json& j, const json::json_pointer& at,
                    std::vector<json::json_pointer>& out) {
  if (is_range(j)) {
    out.push_back(at);
    return;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) collect_ranges(v, at / k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect_ranges(j[i], at / i, out);
  }
}

}  // namespace

json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<json::json_pointer> find_ranges(const json& config) {
  std::vector<json::json_pointer> out;
  collect_ranges(config, json::json_pointer(), out);
  return out;
}

void validate_config(const json& config, bool allow_ranges) {
  object_keys(config, "config", {"schema", "seed", "description", "experiments"},
              {"schema", "experiments"});
  if (config.at("schema") != kSchemaVersion) {
    fail("config.schema", fmt::format("unsupported schema version (expected {})", kSchemaVersion));
  }
  if (config.contains("seed") && !config.at("seed").is_number_unsigned()) {
    fail("config.seed", "expected an unsigned integer");
  }
  const json& exps = config.at("experiments");
  if (!exps.is_array() || exps.empty()) fail("config.experiments", "expected a nonempty array");
  each(exps, "experiments", check_experiment);
  for (const auto& ptr : find_ranges(config)) {
    const std::string where = ptr.to_string();
    if (!allow_ranges) fail(where, "ranged values are only accepted by the sweep command");
    const json& r = config.at(ptr).at("range");
    if (!r.is_array() || r.empty()) fail(where + "/range", "expected a nonempty array");
  }
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace levy_bdg
