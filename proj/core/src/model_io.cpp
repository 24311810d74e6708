#include "tcstop/model_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tcstop/error.hpp"

namespace tcstop {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, std::string_view origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(origin) + ": " + e.what());
  }
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": non-finite number");
  return v;
}

std::string fmt_double(double v) { return json(v).dump(); }

json equilibrium_point_json(const MarkovModel& model, const EquilibriumPoint& p) {
  json eta = json::object(), values = json::object(), cont = json::object(),
       cls = json::object();
  for (StateIndex x = 0; x < model.size(); ++x) {
    const std::string& id = model.state_ids[x];
    eta[id] = p.strategy.eta[x];
    values[id] = p.values[x];
    cont[id] = p.continuation[x];
    cls[id] = std::string(to_string(p.classes[x]));
  }
  json cset = json::array();
  for (StateIndex x : p.continuation_set) cset.push_back(model.state_ids[x]);
  return {{"eta", eta},           {"values", values},  {"continuation", cont},
          {"classes", cls},       {"continuation_set", cset},
          {"face", p.face},       {"residual", p.residual},
          {"family", p.family},   {"optimal", p.optimal},
          {"pareto", p.pareto},   {"sum_maximizer", p.sum_maximizer}};
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MarkovModel parse_model(std::string_view text, std::string_view origin) {
  const json j = parse_json(text, origin);
  const std::string where(origin);
  if (!j.is_object()) throw ParseError(where + ": model must be a JSON object");
  for (const char* key : {"c", "states", "transition"}) {
    if (!j.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  }
  MarkovModel m;
  m.name = j.value("name", std::string{});
  m.c = number_at(j["c"], where + ".c");
  const json& states = j["states"];
  if (!states.is_array() || states.empty()) {
    throw ParseError(where + ": \"states\" must be a non-empty array");
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const json& s = states[i];
    const std::string at = where + ".states[" + std::to_string(i) + "]";
    if (!s.is_object() || !s.contains("id") || !s.contains("value")) {
      throw ParseError(at + ": expected {\"id\", \"value\"}");
    }
    if (!s["id"].is_string()) throw ParseError(at + ".id: expected a string");
    m.state_ids.push_back(s["id"].get<std::string>());
    m.values.push_back(number_at(s["value"], at + ".value"));
  }
  const json& rows = j["transition"];
  const std::size_t n = m.values.size();
  if (!rows.is_array() || rows.size() != n) {
    throw StructuralError(where + ": transition needs " + std::to_string(n) + " rows");
  }
  m.transition.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) {
      throw StructuralError(where + ": transition row " + std::to_string(r) + " needs " +
                            std::to_string(n) + " entries");
    }
    for (std::size_t c = 0; c < n; ++c) {
      m.transition(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number_at(
          rows[r][c], where + ".transition[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  const ValidationReport report = validate_model(m);
  if (!report.ok()) throw ValidationError(where + ": " + report.summary());
  renormalize_rows(m);
  return m;
}

MarkovModel load_model(const std::filesystem::path& path) {
  return parse_model(read_text_file(path), path.string());
}

std::string model_to_json(const MarkovModel& model) {
  json states = json::array();
  for (StateIndex x = 0; x < model.size(); ++x) {
    states.push_back({{"id", model.state_ids[x]}, {"value", model.values[x]}});
  }
  json rows = json::array();
  for (Eigen::Index r = 0; r < model.transition.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.transition.cols(); ++c) row.push_back(model.transition(r, c));
    rows.push_back(row);
  }
  return json{{"name", model.name}, {"c", model.c}, {"states", states}, {"transition", rows}}
      .dump();
}

LoadedStrategy parse_strategy(std::string_view text, const MarkovModel& model) {
  const json j = parse_json(text, "strategy");
  if (!j.is_object()) throw ParseError("strategy must be a JSON object");
  LoadedStrategy out;
  const json* table = nullptr;
  if (j.contains("eta")) {
    table = &j["eta"];
  } else if (j.contains("p")) {
    table = &j["p"];
    out.kind = StrategyKind::Randomized;
  } else {
    throw ParseError("strategy needs an \"eta\" or \"p\" object");
  }
  if (!table->is_object()) throw ParseError("strategy table must map state ids to numbers");
  out.fractions.assign(model.size(), 0.0);
  std::vector<bool> given(model.size(), false);
  for (const auto& [id, value] : table->items()) {
    const auto x = model.index_of(id);
    if (!x) throw ValidationError("strategy names unknown state '" + id + "'");
    const double f = number_at(value, "strategy." + id);
    if (f < 0.0 || f > 1.0) {
      throw ValidationError("strategy fraction at '" + id + "' is " + fmt_double(f) +
                            ", outside [0,1]");
    }
    out.fractions[*x] = f;
    given[*x] = true;
  }
  for (StateIndex x = 0; x < model.size(); ++x) {
    if (model.is_absorbing(x)) {
      out.fractions[x] = 1.0;
    } else if (!given[x]) {
      out.warnings.push_back("transient state '" + model.state_ids[x] +
                             "' not given; defaulting to 0");
    }
  }
  return out;
}

LoadedStrategy load_strategy(const std::filesystem::path& path, const MarkovModel& model) {
  return parse_strategy(read_text_file(path), model);
}

std::string strategy_to_json(const MarkovModel& model, StrategyKind kind,
                             const std::vector<double>& fractions) {
  json table = json::object();
  for (StateIndex x = 0; x < model.size(); ++x) table[model.state_ids[x]] = fractions.at(x);
  return json{{kind == StrategyKind::Liquidation ? "eta" : "p", table}}.dump();
}

ScriptedBlend parse_blend(std::string_view text, const MarkovModel& model) {
  const json j = parse_json(text, "blend");
  if (!j.is_object() || !j.contains("weights") || !j.contains("regions") ||
      !j["weights"].is_array() || !j["regions"].is_array()) {
    throw ParseError("blend needs \"weights\" and \"regions\" arrays");
  }
  ScriptedBlend b;
  for (std::size_t i = 0; i < j["weights"].size(); ++i) {
    b.weights.push_back(number_at(j["weights"][i], "blend.weights[" + std::to_string(i) + "]"));
  }
  for (const json& r : j["regions"]) {
    if (!r.is_array()) throw ParseError("blend region must be an array of state ids");
    std::vector<StateIndex> members;
    for (const json& id : r) {
      if (!id.is_string()) throw ParseError("blend region entries must be state ids");
      members.push_back(model.require_index(id.get<std::string>()));
    }
    b.regions.push_back(StoppingRegion(std::move(members)).normalized(model));
  }
  validate_blend(model, b);
  return b;
}

ScriptedBlend load_blend(const std::filesystem::path& path, const MarkovModel& model) {
  return parse_blend(read_text_file(path), model);
}

std::uint64_t model_digest(const MarkovModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : model_to_json(model)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_hex(std::uint64_t digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, digest >>= 4) s[static_cast<std::size_t>(i)] = kHex[digest & 0xf];
  return s;
}

std::string equilibrium_report_json(const MarkovModel& model, const EquilibriumReport& report) {
  json eq = json::array();
  for (const auto& p : report.equilibria) eq.push_back(equilibrium_point_json(model, p));
  json unresolved = json::array();
  for (const auto& u : report.unresolved) {
    unresolved.push_back({{"face", u.face}, {"lower", u.lower}, {"upper", u.upper},
                          {"residual", u.residual}, {"reason", u.reason}});
  }
  json transient = json::array();
  for (StateIndex x : report.transient) transient.push_back(model.state_ids[x]);
  json out = {{"criterion", std::string(to_string(report.criterion))},
              {"transient", transient},
              {"equilibria", eq},
              {"unresolved", unresolved},
              {"exhaustive", report.exhaustive},
              {"complete", report.complete},
              {"faces_examined", report.faces_examined},
              {"notes", report.notes},
              {"optimal_set", report.optimal_set},
              {"pareto_set", report.pareto_set}};
  out["optimal"] = report.optimal ? json(*report.optimal) : json(nullptr);
  out["sum_maximizer"] = report.sum_maximizer ? json(*report.sum_maximizer) : json(nullptr);
  return out.dump();
}

std::string serialize_run_report(const RunReport& r) {
  json results = parse_json(r.results, "results");
  return json{{"tool_version", r.tool_version}, {"command", r.command},
              {"arguments", r.arguments},       {"model_digest", r.model_digest},
              {"elapsed_ms", r.elapsed_ms},     {"results", results}}
      .dump();
}

RunReport parse_run_report(std::string_view text) {
  const json j = parse_json(text, "report");
  try {
    RunReport r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.arguments = j.at("arguments").get<std::vector<std::string>>();
    r.model_digest = j.at("model_digest").get<std::string>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    r.results = j.at("results").dump();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::filesystem::path emit_surface_csv(const MarkovModel& model, const SurfaceGrid& grid,
                                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  const std::size_t N = grid.axis.size();
  for (std::size_t k = 0; k < grid.free_states.size(); ++k) {
    out << (k ? "," : "") << "coord_" << model.state_ids[grid.free_states[k]];
  }
  for (StateIndex w : grid.watched) out << ",g_" << model.state_ids[w];
  out << '\n';
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    if (grid.free_states.size() == 1) {
      out << fmt_double(grid.axis[node]);
    } else {
      out << fmt_double(grid.axis[node / N]) << ',' << fmt_double(grid.axis[node % N]);
    }
    for (const auto& vals : grid.values) out << ',' << fmt_double(vals[node]);
    out << '\n';
  }

  std::filesystem::path contour_path = path;
  contour_path.replace_extension(".contours.csv");
  std::ofstream cout_(contour_path);
  if (!cout_) throw Error("cannot write " + contour_path.string());
  cout_ << "state,polyline,point";
  for (StateIndex f : grid.free_states) cout_ << ",coord_" << model.state_ids[f];
  cout_ << '\n';
  for (std::size_t w = 0; w < grid.watched.size(); ++w) {
    const std::string& id = model.state_ids[grid.watched[w]];
    for (std::size_t l = 0; l < grid.contours[w].size(); ++l) {
      const auto& line = grid.contours[w][l];
      for (std::size_t i = 0; i < line.size(); ++i) {
        cout_ << id << ',' << l << ',' << i << ',' << fmt_double(line[i][0]);
        if (grid.free_states.size() == 2) cout_ << ',' << fmt_double(line[i][1]);
        cout_ << '\n';
      }
    }
  }
  return contour_path;
}

}  // namespace tcstop
