#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "orbitlab/errors.hpp"
#include "runner.hpp"

namespace {

using orbitlab::cli::Json;

enum class Kind { Count, Rational, Text, JsonValue, TextList, CountList, IntList };

struct Field {
  std::string name;
  Kind kind;
  std::string help;
};

const std::map<std::string, std::vector<Field>>& subcommand_fields() {
  static const std::map<std::string, std::vector<Field>> m{
      {"construct", {{"bundle", Kind::Text, "prop41 | example44 | prop53"}, {"horizon", Kind::Count, "horizon"}}},
      {"hits",
       {{"bundle", Kind::Text, "named bundle supplying T, x and phases"},
        {"shift", Kind::JsonValue, "shift descriptor (JSON)"},
        {"vector", Kind::JsonValue, "vector descriptor (JSON)"},
        {"phase", Kind::JsonValue, "phase descriptor (JSON)"},
        {"target", Kind::JsonValue, "target point (JSON)"},
        {"epsilon", Kind::Rational, "hit radius"},
        {"horizon", Kind::Count, "last n scanned"},
        {"window", Kind::Count, "minimal coordinate window"}}},
      {"avoid",
       {{"bundle", Kind::Text, "prop41 | example44 | prop53"},
        {"shift", Kind::JsonValue, "shift descriptor (JSON)"},
        {"vector", Kind::JsonValue, "vector descriptor (JSON)"},
        {"phase", Kind::JsonValue, "phase descriptor (JSON)"},
        {"forbidden", Kind::JsonValue, "forbidden point (JSON)"},
        {"delta", Kind::Rational, "certified lower distance"},
        {"horizon", Kind::Count, "last n checked"}}},
      {"discrepancy",
       {{"seq", Kind::Text, "expression in n, e.g. frac(sqrt2*n)"},
        {"phase", Kind::JsonValue, "phase descriptor (JSON) instead of seq"},
        {"N", Kind::Count, "number of points"},
        {"prefix", Kind::CountList, "prefix lengths for the curve"},
        {"weyl", Kind::IntList, "frequencies h for Weyl sums"}}},
      {"koksma",
       {{"f", Kind::JsonValue, "{\"c\":1,\"a\":2} or an integer-valued expression string"},
        {"samples", Kind::Count, "number of random theta"},
        {"N", Kind::Count, "points per sample"},
        {"theta", Kind::Rational, "single forced theta"}}},
      {"lattice", {{"polys", Kind::TextList, "comma separated polynomials in t"}}},
      {"certify-growth",
       {{"f", Kind::Text, "expression in n"},
        {"d", Kind::Count, "degree of the local fit"},
        {"k_max", Kind::Count, "largest step k"},
        {"n_grid", Kind::CountList, "increasing n values"},
        {"threshold", Kind::Rational, "final bound on sup |eps_k|"}}},
      {"random-rotations",
       {{"shift", Kind::JsonValue, "shift descriptor (JSON)"},
        {"vector", Kind::JsonValue, "vector descriptor (JSON)"},
        {"target", Kind::JsonValue, "target point (JSON)"},
        {"epsilon", Kind::Rational, "hit radius"},
        {"horizon", Kind::Count, "phases per sample"},
        {"samples", Kind::Count, "number of samples"}}},
  };
  return m;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& e : out) {
    const auto b = e.find_first_not_of(" \t");
    const auto t = e.find_last_not_of(" \t");
    e = b == std::string::npos ? std::string() : e.substr(b, t - b + 1);
  }
  return out;
}

Json to_value(const Field& f, const std::string& raw) {
  switch (f.kind) {
    case Kind::Count:
      return Json(static_cast<std::uint64_t>(std::stoull(raw)));
    case Kind::Rational:
    case Kind::Text:
      return Json(raw);
    case Kind::JsonValue:
      try {
        return Json::parse(raw);
      } catch (const Json::exception&) {
        return Json(raw);
      }
    case Kind::TextList: {
      Json arr = Json::array();
      for (const auto& e : split_list(raw)) arr.push_back(e);
      return arr;
    }
    case Kind::CountList: {
      Json arr = Json::array();
      for (const auto& e : split_list(raw)) arr.push_back(static_cast<std::uint64_t>(std::stoull(e)));
      return arr;
    }
    case Kind::IntList: {
      Json arr = Json::array();
      for (const auto& e : split_list(raw)) arr.push_back(std::stol(e));
      return arr;
    }
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbitlab: certified experiments on rotated orbits of weighted shifts"};
  app.require_subcommand(1);

  struct Bound {
    CLI::App* sub;
    std::string config_path;
    std::map<std::string, std::string> values;
    std::string precision, seed, threads, out_dir, prefix, emit_table, emit_columns, emit_path;
  };
  std::map<std::string, Bound> bound;
  for (const auto& [name, fields] : subcommand_fields()) {
    Bound& b = bound[name];
    b.sub = app.add_subcommand(name, "run the " + name + " experiment");
    b.sub->add_option("--config", b.config_path, "JSON config; command line values override it");
    for (const auto& f : fields) b.sub->add_option("--" + f.name, b.values[f.name], f.help);
    b.sub->add_option("--precision", b.precision, "working precision in bits");
    b.sub->add_option("--seed", b.seed, "root seed");
    b.sub->add_option("--threads", b.threads, "worker threads");
    b.sub->add_option("--out", b.out_dir, "directory for CSV and JSON artifacts");
    b.sub->add_option("--out-prefix", b.prefix, "artifact file prefix");
    b.sub->add_option("--emit", b.emit_table, "table to export as plot data");
    b.sub->add_option("--columns", b.emit_columns, "comma separated columns for --emit");
    b.sub->add_option("--emit-path", b.emit_path, "CSV path for --emit");
  }
  CLI11_PARSE(app, argc, argv);

  for (auto& [name, b] : bound) {
    if (!b.sub->parsed()) continue;
    try {
      Json config = Json::object();
      if (!b.config_path.empty()) {
        std::ifstream in(b.config_path);
        if (!in) throw orbitlab::cli::ConfigInvalid("cannot read " + b.config_path);
        try {
          config = Json::parse(in);
        } catch (const Json::exception& e) {
          throw orbitlab::cli::ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
        }
        if (config.contains("experiment") && config["experiment"] != name) {
          throw orbitlab::cli::ConfigInvalid("config experiment does not match the subcommand");
        }
      }
      config["experiment"] = name;
      for (const auto& f : subcommand_fields().at(name)) {
        const std::string& raw = b.values[f.name];
        if (raw.empty()) continue;
        try {
          config[f.name] = to_value(f, raw);
        } catch (const std::exception&) {
          throw orbitlab::cli::ConfigInvalid("bad value for --" + f.name + ": " + raw);
        }
      }
      auto set_count = [&](const std::string& key, const std::string& raw) {
        if (raw.empty()) return;
        try {
          config[key] = static_cast<std::uint64_t>(std::stoull(raw));
        } catch (const std::exception&) {
          throw orbitlab::cli::ConfigInvalid("bad value for --" + key + ": " + raw);
        }
      };
      set_count("precision", b.precision);
      set_count("seed", b.seed);
      set_count("threads", b.threads);
      if (!b.out_dir.empty()) config["output"]["dir"] = b.out_dir;
      if (!b.prefix.empty()) config["output"]["prefix"] = b.prefix;

      const orbitlab::cli::RunReport report = orbitlab::cli::run(config);
      if (!b.emit_table.empty()) {
        const std::string path = b.emit_path.empty() ? b.emit_table + ".csv" : b.emit_path;
        orbitlab::cli::emit_plot_data(report, b.emit_table, split_list(b.emit_columns), path);
      }
      std::cout << report.to_json().dump(2) << "\n";
      std::cout << orbitlab::cli::to_string(report.status) << "\n";
      return orbitlab::cli::exit_code(report.status);
    } catch (const orbitlab::cli::ConfigInvalid& e) {
      std::cerr << "config-invalid: " << e.what() << "\n";
      return 1;
    } catch (const orbitlab::PrecisionInsufficient& e) {
      std::cerr << "precision-insufficient: " << e.what() << "\n";
      return 3;
    } catch (const orbitlab::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
