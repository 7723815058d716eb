// Copyright 2026 The qlinsolve Authors
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

#include "cli/problem.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace qlinsolve::cli {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) { throw ParseError(what, 0, 0); }

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where + ": expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

linsys::Matrix matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema_error(where + ": expected a non-empty array of rows");
  const std::size_t m = j.size();
  linsys::Matrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = numbers(j[i], where + "[" + std::to_string(i) + "]");
    if (row.size() != m) {
      schema_error(where + ": row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                   " entries, expected " + std::to_string(m) + " (A must be square)");
    }
    for (std::size_t c = 0; c < m; ++c) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c];
  }
  return a;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) schema_error(where + ": unknown key '" + key + "'");
  }
}

}  // namespace

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::kEmbedFull: return "embed-full";
    case Protocol::kEmbedReduced: return "embed-reduced";
    case Protocol::kCircuit: return "circuit";
    case Protocol::kChain: return "chain";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "embed-full") return Protocol::kEmbedFull;
  if (name == "embed-reduced") return Protocol::kEmbedReduced;
  if (name == "circuit") return Protocol::kCircuit;
  if (name == "chain") return Protocol::kChain;
  throw std::invalid_argument("unknown protocol '" + std::string(name) +
                              "' (expected embed-full, embed-reduced, circuit or chain)");
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(what), line_(line), column_(column) {}

ProblemFile parse_problem(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": " << e.what();
    throw ParseError(msg.str(), line, col);
  }
  if (!doc.is_object()) schema_error(std::string(source) + ": top level must be an object");
  reject_unknown(doc, {"matrix", "b", "target_k", "protocol", "shots", "noise", "correction", "seed",
                       "site", "chain", "calibration"},
                 std::string(source));

  ProblemFile p;
  if (!doc.contains("matrix")) schema_error("missing required key 'matrix'");
  p.a = matrix(doc["matrix"], "matrix");
  if (doc.contains("b")) {
    const auto b = numbers(doc["b"], "b");
    if (static_cast<Eigen::Index>(b.size()) != p.a.rows()) {
      schema_error("b has " + std::to_string(b.size()) + " entries but A is " +
                   std::to_string(p.a.rows()) + "x" + std::to_string(p.a.rows()));
    }
    p.b = Eigen::Map<const linsys::Vector>(b.data(), static_cast<Eigen::Index>(b.size()));
  }
  if (doc.contains("target_k")) {
    p.target_k = integer(doc["target_k"], "target_k");
    if (*p.target_k < 1 || *p.target_k > p.a.rows()) schema_error("target_k out of range 1..M");
  }
  if (doc.contains("protocol")) {
    if (!doc["protocol"].is_string()) schema_error("protocol: expected a string");
    try {
      p.protocol = parse_protocol(doc["protocol"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      schema_error(std::string("protocol: ") + e.what());
    }
  }
  if (doc.contains("shots")) {
    const auto& s = doc["shots"];
    if (!s.is_object()) schema_error("shots: expected an object");
    reject_unknown(s, {"series", "per_series"}, "shots");
    hw::ShotPlan plan;
    if (s.contains("series")) plan.series = integer(s["series"], "shots.series");
    if (s.contains("per_series")) plan.shots = integer(s["per_series"], "shots.per_series");
    if (plan.series < 1 || plan.shots < 1) schema_error("shots: series and per_series must be >= 1");
    p.shots = plan;
  }
  if (doc.contains("noise")) {
    const auto& n = doc["noise"];
    if (!n.is_object()) schema_error("noise: expected an object");
    reject_unknown(n, {"intercept", "slope", "jitter_sd"}, "noise");
    hw::NoiseModel model;
    if (n.contains("intercept")) model.intercept = number(n["intercept"], "noise.intercept");
    if (n.contains("slope")) model.slope = number(n["slope"], "noise.slope");
    if (n.contains("jitter_sd")) model.jitter_sd = number(n["jitter_sd"], "noise.jitter_sd");
    if (model.jitter_sd < 0.0) schema_error("noise.jitter_sd must be >= 0");
    p.noise = model;
  }
  if (doc.contains("correction")) {
    const auto& c = doc["correction"];
    if (!c.is_object()) schema_error("correction: expected an object");
    hw::CorrectionModel model;
    model.intercept = number(c.value("intercept", json(0.0)), "correction.intercept");
    model.slope = number(c.value("slope", json(0.0)), "correction.slope");
    p.correction = model;
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) schema_error("seed: expected a non-negative integer");
    p.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("site")) p.site = integer(doc["site"], "site");
  if (doc.contains("chain")) {
    const auto& c = doc["chain"];
    if (!c.is_object()) schema_error("chain: expected an object");
    reject_unknown(c, {"couplings", "larmor", "time"}, "chain");
    if (!c.contains("couplings") || !c.contains("larmor") || !c.contains("time")) {
      schema_error("chain: needs couplings, larmor and time");
    }
    chain::ChainSpec spec{numbers(c["couplings"], "chain.couplings"), numbers(c["larmor"], "chain.larmor"),
                          number(c["time"], "chain.time")};
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      schema_error(std::string("chain: ") + e.what());
    }
    p.chain = spec;
  }
  if (doc.contains("calibration")) {
    const auto& c = doc["calibration"];
    if (!c.is_object()) schema_error("calibration: expected an object");
    reject_unknown(c, {"grid_max", "step", "transfer_matrix"}, "calibration");
    if (c.contains("grid_max")) {
      std::vector<int> g;
      for (std::size_t i = 0; i < c["grid_max"].size(); ++i) {
        g.push_back(integer(c["grid_max"][i], "calibration.grid_max[" + std::to_string(i) + "]"));
      }
      if (static_cast<Eigen::Index>(g.size()) != p.a.rows()) schema_error("calibration.grid_max needs M entries");
      p.grid_max = g;
    }
    if (c.contains("step")) p.grid_step = number(c["step"], "calibration.step");
    if (c.contains("transfer_matrix")) {
      p.transfer_matrix = matrix(c["transfer_matrix"], "calibration.transfer_matrix");
      if (p.transfer_matrix->rows() != p.a.rows()) schema_error("transfer_matrix must match A's size");
    }
  }
  return p;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path.string() + "'", 0, 0);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_problem(text.str(), path.string());
}

hw::CorrectionModel load_correction(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open correction file '" + path.string() + "'", 0, 0);
  std::ostringstream text;
  text << in.rdbuf();
  const std::string s = text.str();
  json doc;
  try {
    doc = json::parse(s);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(s, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what(),
                     line, col);
  }
  hw::CorrectionModel m;
  m.intercept = number(doc.value("intercept", json(0.0)), "intercept");
  m.slope = number(doc.value("slope", json(0.0)), "slope");
  m.fit_residual_rms = number(doc.value("fit_residual_rms", json(0.0)), "fit_residual_rms");
  m.points = doc.value("points", std::size_t{0});
  return m;
}

std::string correction_json(const hw::CorrectionModel& model, hw::CorrectionMode mode) {
  json doc;
  doc["intercept"] = model.intercept;
  doc["slope"] = model.slope;
  doc["fit_residual_rms"] = model.fit_residual_rms;
  doc["points"] = model.points;
  doc["mode"] = hw::to_string(mode);
  return doc.dump(2) + "\n";
}

}  // namespace qlinsolve::cli
