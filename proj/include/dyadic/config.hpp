#pragma once

// Experiment configuration: INI sections of key = value pairs.
//
//   [experiment]  name, seed, workers
//   [grid]        L, M, Q, L2, M2
//   [family]      c, N_list, y_list, p_list, lambda_list, alpha_list, A,
//                 j_list, omega_list
//   [bumps]       eta_radius, eta_plateau, beta_edges, j_max
//   [output]      dir
//
// Lists are comma separated and ';' starts a comment; "inf" is accepted wherever a p is expected.
// Unknown sections or keys are rejected.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dyadic/bumps.hpp"
#include "dyadic/error.hpp"

namespace dyadic {

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  double L = 16384.0;
  std::size_t M = 16384;
  std::size_t Q = 512;
  double L2 = 64.0;
  std::size_t M2 = 1024;

  int c = 4;
  std::vector<int> N_list{1, 2, 3, 4};
  std::vector<double> y_list{16, 256, 4096, 65536};
  std::vector<double> p_list{2, 4};
  std::vector<double> lambda_list{1, 2};
  std::vector<double> alpha_list{0, 1, 4.0 / 3.0, 2};
  double A = 1.0;
  std::vector<int> j_list{0, -1, -2, -3};
  std::vector<std::string> omega_list{"odd_harmonics", "random_rough"};

  BumpParams bumps;
  std::string out_dir = "out";
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& s) {
  if (s == "inf" || s == "infinity") return INFINITY;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw error(errc::invalid_argument, "config key " + key + ": not a number: " + s);
  }
}

inline long long parse_int(const std::string& key, const std::string& s) {
  const double v = parse_double(key, s);
  if (!std::isfinite(v) || v != std::floor(v)) throw error(errc::invalid_argument, "config key " + key + ": not an integer: " + s);
  return static_cast<long long>(v);
}

inline std::size_t parse_size(const std::string& key, const std::string& s) {
  const long long v = parse_int(key, s);
  if (v < 0) throw error(errc::invalid_argument, "config key " + key + ": must be non-negative");
  return static_cast<std::size_t>(v);
}

template <class T, class Fn>
std::vector<T> parse_list(const std::string& key, const std::string& s, Fn&& one) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) out.push_back(one(key, item));
  if (out.empty()) throw error(errc::invalid_argument, "config key " + key + ": empty list");
  return out;
}

inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema{
      {"experiment", {"name", "seed", "workers"}},
      {"grid", {"L", "M", "Q", "L2", "M2"}},
      {"family", {"c", "N_list", "y_list", "p_list", "lambda_list", "alpha_list", "A", "j_list", "omega_list"}},
      {"bumps", {"eta_radius", "eta_plateau", "beta_edges", "j_max"}},
      {"output", {"dir"}},
  };
  return schema;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw error(errc::invalid_argument, std::string("config syntax: ") + e.what());
  }
  const auto& schema = detail::config_schema();
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    const auto sec = schema.find(section);
    if (sec == schema.end() || body.empty())
      throw error(errc::invalid_argument, "unknown config section or top-level key: " + section);
    for (const auto& [key, node] : body) {
      if (!sec->second.count(key)) throw error(errc::invalid_argument, "unknown config key: " + section + "." + key);
      std::string v = node.get_value<std::string>();
      v.erase(std::min(v.find(';'), v.size()));
      v.erase(v.find_last_not_of(" \t") + 1);
      const std::string k = section + "." + key;
      using namespace detail;
      if (k == "experiment.name") cfg.name = v;
      else if (k == "experiment.seed") cfg.seed = parse_size(k, v);
      else if (k == "experiment.workers") cfg.workers = parse_size(k, v);
      else if (k == "grid.L") cfg.L = parse_double(k, v);
      else if (k == "grid.M") cfg.M = parse_size(k, v);
      else if (k == "grid.Q") cfg.Q = parse_size(k, v);
      else if (k == "grid.L2") cfg.L2 = parse_double(k, v);
      else if (k == "grid.M2") cfg.M2 = parse_size(k, v);
      else if (k == "family.c") cfg.c = static_cast<int>(parse_int(k, v));
      else if (k == "family.N_list") cfg.N_list = parse_list<int>(k, v, [](auto& a, auto& b) { return static_cast<int>(parse_int(a, b)); });
      else if (k == "family.y_list") cfg.y_list = parse_list<double>(k, v, parse_double);
      else if (k == "family.p_list") cfg.p_list = parse_list<double>(k, v, parse_double);
      else if (k == "family.lambda_list") cfg.lambda_list = parse_list<double>(k, v, parse_double);
      else if (k == "family.alpha_list") cfg.alpha_list = parse_list<double>(k, v, parse_double);
      else if (k == "family.A") cfg.A = parse_double(k, v);
      else if (k == "family.j_list") cfg.j_list = parse_list<int>(k, v, [](auto& a, auto& b) { return static_cast<int>(parse_int(a, b)); });
      else if (k == "family.omega_list") cfg.omega_list = parse_list<std::string>(k, v, [](auto&, auto& b) { return b; });
      else if (k == "bumps.eta_radius") cfg.bumps.eta_radius = parse_double(k, v);
      else if (k == "bumps.eta_plateau") cfg.bumps.eta_plateau = parse_double(k, v);
      else if (k == "bumps.j_max") cfg.bumps.j_max = static_cast<int>(parse_int(k, v));
      else if (k == "bumps.beta_edges") {
        const auto e = parse_list<double>(k, v, parse_double);
        if (e.size() != 4) throw error(errc::invalid_argument, "bumps.beta_edges takes four values");
        for (int i = 0; i < 4; ++i) cfg.bumps.beta_edges[i] = e[i];
      } else if (k == "output.dir") cfg.out_dir = v;
    }
  }
  if (cfg.name.empty()) throw error(errc::invalid_argument, "config needs experiment.name");
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open config " + path);
  return parse_config(in);
}

}  // namespace dyadic
