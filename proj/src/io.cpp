#include "cdsc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cdsc {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt17(v);
}

std::string pair_array_1based(const std::set<std::pair<int, int>>& pairs) {
  std::string out = "[";
  bool first = true;
  for (auto [a, b] : pairs) {
    if (!first) out += ",";
    first = false;
    out += "[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "]";
  }
  return out + "]";
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, true, true);
  return j;
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string model_to_json(const BayesNet& net) {
  std::string out = "{\"variables\":[";
  for (int i = 0; i < net.dag.size(); ++i) {
    if (i) out += ",";
    out += "{\"name\":" + json(net.dag.nodes[i].name).dump() +
           ",\"card\":" + std::to_string(net.dag.nodes[i].cardinality) + "}";
  }
  out += "],\"edges\":[";
  auto edges = net.dag.edges;
  std::sort(edges.begin(), edges.end());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (e) out += ",";
    out += "[" + std::to_string(edges[e].first + 1) + "," +
           std::to_string(edges[e].second + 1) + "]";
  }
  out += "],\"cpts\":{";
  for (int i = 0; i < net.dag.size(); ++i) {
    if (i) out += ",";
    out += "\"" + std::to_string(i + 1) + "\":[";
    for (std::size_t r = 0; r < net.cpts[i].size(); ++r) {
      if (r) out += ",";
      out += "[";
      for (std::size_t v = 0; v < net.cpts[i][r].size(); ++v) {
        if (v) out += ",";
        out += num(net.cpts[i][r][v]);
      }
      out += "]";
    }
    out += "]";
  }
  return out + "}}";
}

BayesNet model_from_json(const std::string& text) {
  const json j = parse(text);
  BayesNet net;
  if (!j.contains("variables") || !j["variables"].is_array())
    throw InvalidParameter("model json needs a 'variables' array");
  for (const auto& v : j["variables"]) {
    Variable var;
    var.name = v.at("name").get<std::string>();
    var.cardinality = v.at("card").get<int>();
    net.dag.nodes.push_back(var);
  }
  const int n = net.dag.size();
  for (const auto& e : j.value("edges", json::array())) {
    const int a = e.at(0).get<int>(), b = e.at(1).get<int>();
    if (a < 1 || b < 1 || a > n || b > n)
      throw InvalidParameter("model json edge index out of range (indices are 1-based)");
    net.dag.edges.emplace_back(a - 1, b - 1);
  }
  net.cpts.resize(n);
  if (!j.contains("cpts")) throw InvalidParameter("model json needs 'cpts'");
  for (int i = 0; i < n; ++i) {
    const std::string key = std::to_string(i + 1);
    if (!j["cpts"].contains(key))
      throw InvalidParameter("model json is missing cpt for node " + key);
    for (const auto& row : j["cpts"][key])
      net.cpts[i].push_back(row.get<std::vector<double>>());
  }
  validate_bayesnet(net);
  return net;
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t i = 0; i < data.variables.size(); ++i) {
    if (i) out += ",";
    out += data.variables[i].name;
  }
  out += "\n";
  const std::size_t n = data.variables.size();
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ",";
      out += std::to_string(row[i]);
    }
    out += "\n";
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text) {
  Dataset data;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("dataset csv is empty");
  {
    std::istringstream hdr(line);
    std::string name;
    while (std::getline(hdr, name, ',')) data.variables.push_back({name, 2});
  }
  if (data.variables.empty()) throw InvalidParameter("dataset csv has no columns");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t got = 0;
    while (std::getline(row, cell, ',')) {
      int v;
      try {
        v = std::stoi(cell);
      } catch (const std::exception&) {
        throw InvalidParameter("dataset csv has a non-integer cell '" + cell + "'");
      }
      if (v < 0) throw InvalidParameter("dataset csv has a negative code");
      data.values.push_back(v);
      ++got;
    }
    if (got != data.variables.size())
      throw InvalidParameter("dataset csv row width mismatch");
  }
  // Cardinalities are not stored in the csv; infer them from the codes.
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    for (std::size_t i = 0; i < data.variables.size(); ++i)
      data.variables[i].cardinality =
          std::max(data.variables[i].cardinality, row[i] + 1);
  }
  return data;
}

std::string pattern_to_json(const Pattern& p) {
  return "{\"n\":" + std::to_string(p.n) +
         ",\"directed\":" + pair_array_1based(p.directed) +
         ",\"undirected\":" + pair_array_1based(p.undirected) + "}";
}

Pattern pattern_from_json(const std::string& text) {
  const json j = parse(text);
  Pattern p;
  p.n = j.at("n").get<int>();
  auto load = [&](const char* key, std::set<std::pair<int, int>>& into, bool canon) {
    for (const auto& e : j.value(key, json::array())) {
      int a = e.at(0).get<int>() - 1, b = e.at(1).get<int>() - 1;
      if (a < 0 || b < 0 || a >= p.n || b >= p.n || a == b)
        throw InvalidParameter("pattern json edge out of range");
      if (canon && a > b) std::swap(a, b);
      into.insert({a, b});
    }
  };
  load("directed", p.directed, false);
  load("undirected", p.undirected, true);
  return p;
}

std::string trace_to_jsonl(const DiscoveryTrace& trace) {
  std::string out;
  for (const auto& e : trace.entries) {
    out += "{\"pair\":[" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) +
           "],\"cond\":[";
    for (std::size_t k = 0; k < e.cond.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(e.cond[k] + 1);
    }
    out += std::string("],\"source\":\"") + (e.from_oracle ? "oracle" : "tester") +
           "\",\"independent\":" + (e.independent ? "true" : "false") +
           ",\"A\":" + num(e.statistic) + ",\"tau\":" + num(e.threshold) +
           ",\"K\":" + std::to_string(e.samples) + "}\n";
  }
  return out;
}

std::string report_to_json(const BudgetReport& rep) {
  return "{\"alpha\":" + num(rep.alpha) + ",\"alpha0_star\":" + num(rep.alpha0_star) +
         ",\"m_expected\":" + num(rep.m_expected) +
         ",\"regime_counts\":{\"r1\":" + num(rep.regime_r1) +
         ",\"r2\":" + num(rep.regime_r2) + ",\"r3\":" + num(rep.regime_r3) +
         "},\"value_of_expertise\":" + num(rep.value_of_expertise) +
         ",\"c_prime\":" + num(rep.c_prime) + ",\"gamma\":" + num(rep.gamma) +
         ",\"epsilon\":" + num(rep.epsilon) + "}";
}

std::string report_to_csv(const BudgetReport& rep) {
  return "alpha,alpha0_star,m_expected,r1,r2,r3,value_of_expertise,c_prime,gamma,"
         "epsilon\n" +
         num(rep.alpha) + "," + num(rep.alpha0_star) + "," + num(rep.m_expected) + "," +
         num(rep.regime_r1) + "," + num(rep.regime_r2) + "," + num(rep.regime_r3) +
         "," + num(rep.value_of_expertise) + "," + num(rep.c_prime) + "," +
         num(rep.gamma) + "," + num(rep.epsilon) + "\n";
}

std::string curve_to_csv(const ErrorCurve& curve) {
  std::string out = "m,trials,failures,error_rate,ci_halfwidth,theoretical_alpha\n";
  for (const auto& p : curve.points)
    out += num(p.m) + "," + std::to_string(p.trials) + "," +
           std::to_string(p.failures) + "," + num(p.error_rate) + "," +
           num(p.ci_halfwidth) + "," + num(p.theoretical_alpha) + "\n";
  return out;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "N,m_ic,m_pc,ratio\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + "," + num(r.m_ic) + "," + num(r.m_pc) + "," +
           num(r.ratio) + "\n";
  return out;
}

ExpertiseSet expertise_from_json(const std::string& text, int n) {
  const json j = parse(text);
  auto check_index = [n](int v) {
    if (v < 1 || v > n)
      throw InvalidParameter("expertise json index out of range (indices are 1-based)");
    return v - 1;
  };
  if (j.contains("cond_size_above"))
    return ExpertiseSet::cond_size_above(j["cond_size_above"].get<int>());
  if (j.contains("known_edges")) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j["known_edges"])
      edges.emplace_back(check_index(e.at(0).get<int>()), check_index(e.at(1).get<int>()));
    return ExpertiseSet::known_edges(std::move(edges));
  }
  if (j.contains("tests")) {
    std::vector<TestIndex> tests;
    for (const auto& t : j["tests"]) {
      TestIndex ti;
      ti.i = check_index(t.at("pair").at(0).get<int>());
      ti.j = check_index(t.at("pair").at(1).get<int>());
      if (ti.i > ti.j) std::swap(ti.i, ti.j);
      for (const auto& c : t.value("cond", json::array()))
        ti.cond.push_back(check_index(c.get<int>()));
      std::sort(ti.cond.begin(), ti.cond.end());
      tests.push_back(std::move(ti));
    }
    return ExpertiseSet::explicit_tests(std::move(tests));
  }
  throw InvalidParameter(
      "expertise json needs one of 'tests', 'cond_size_above', 'known_edges'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParameter("cannot write file: " + path);
  out << content;
}

}  // namespace cdsc
