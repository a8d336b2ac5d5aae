#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "runner.hpp"

using orbitlab::cli::ConfigInvalid;
using orbitlab::cli::Json;
using orbitlab::cli::Status;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("orbitlab_cli_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(orbitlab::cli::exit_code(Status::Ok), 0);
  EXPECT_EQ(orbitlab::cli::exit_code(Status::Certified), 0);
  EXPECT_EQ(orbitlab::cli::exit_code(Status::Failed), 2);
  EXPECT_EQ(orbitlab::cli::exit_code(Status::Indeterminate), 3);
}

TEST(Cli, RejectsUnknownFieldsAndKinds) {
  EXPECT_THROW(orbitlab::cli::run(Json{{"experiment", "lattice"}, {"polys", {"t"}}, {"bogus", 1}}), ConfigInvalid);
  EXPECT_THROW(orbitlab::cli::run(Json{{"experiment", "nope"}}), ConfigInvalid);
  EXPECT_THROW(orbitlab::cli::run(Json{{"experiment", "discrepancy"}, {"seq", "n"}, {"N", "ten"}}), ConfigInvalid);
  EXPECT_THROW(orbitlab::cli::run(Json{{"experiment", "lattice"}, {"polys", {"t +"}}}), ConfigInvalid);
}

TEST(Cli, AvoidBundleCertified) {
  const auto rep = orbitlab::cli::run(
      Json{{"experiment", "avoid"}, {"bundle", "prop41"}, {"horizon", 800}, {"delta", "0.49"}});
  EXPECT_EQ(rep.status, Status::Certified);
  const auto& t = rep.tables.at("distance");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"n", "dist_lo", "dist_hi", "in_A", "phase_turn", "rule"}));
  EXPECT_EQ(t.rows.size(), 800u);
  EXPECT_EQ(t.rows.front().front(), "1");
}

TEST(Cli, AvoidFailureExitsTwo) {
  const auto rep = orbitlab::cli::run(Json{{"experiment", "avoid"},
                                           {"shift", "2B"},
                                           {"vector", {{"coords", {{"5", "1"}}}}},
                                           {"phase", {{"kind", "constant"}, {"turn", "0"}}},
                                           {"forbidden", {{"vector", {{"coords", {{"0", "32"}}}}}}},
                                           {"delta", "1/10"},
                                           {"horizon", 10}});
  EXPECT_EQ(rep.status, Status::Failed);
  EXPECT_EQ(orbitlab::cli::exit_code(rep.status), 2);
}

TEST(Cli, LatticeIndependent) {
  const auto rep = orbitlab::cli::run(Json{{"experiment", "lattice"}, {"polys", {"sqrt2*t", "sqrt2*t^2"}}});
  EXPECT_EQ(rep.status, Status::Ok);
  EXPECT_EQ(rep.summary["verdict"], "independent");
  EXPECT_EQ(rep.summary["rank"], 0);
}

TEST(Cli, DiscrepancyPrefixCurve) {
  const auto rep = orbitlab::cli::run(
      Json{{"experiment", "discrepancy"}, {"seq", "frac(sqrt2*n)"}, {"N", 20000}, {"prefix", {100, 1000, 20000}}});
  EXPECT_EQ(rep.status, Status::Ok);
  const auto& t = rep.tables.at("prefix");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"N", "dstar_lo", "dstar_hi"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_LT(std::stod(t.rows.back()[2]), 1e-3);
}

TEST(Cli, GrowthFailureStatus) {
  const auto rep = orbitlab::cli::run(
      Json{{"experiment", "certify-growth"}, {"f", "2^n"}, {"d", 1}, {"k_max", 4}, {"n_grid", {10, 20, 30}}});
  EXPECT_EQ(rep.status, Status::Failed);
}

TEST(Cli, ReplayIsByteIdentical) {
  const Json base{{"experiment", "koksma"}, {"f", {{"c", 1}, {"a", 2}}}, {"samples", 4}, {"N", 300}, {"seed", 42}};
  std::vector<std::string> contents;
  for (int run = 0; run < 2; ++run) {
    const auto dir = scratch("replay");
    Json cfg = base;
    cfg["output"] = {{"dir", dir.string()}, {"prefix", "k"}};
    const auto rep = orbitlab::cli::run(cfg);
    ASSERT_EQ(rep.status, Status::Ok);
    contents.push_back(slurp(dir / "k_samples.csv") + slurp(dir / "k_report.json"));
  }
  EXPECT_EQ(contents[0], contents[1]);
  EXPECT_FALSE(contents[0].empty());
}

TEST(Cli, ConstructReplaysBundle) {
  const auto rep = orbitlab::cli::run(Json{{"experiment", "construct"}, {"bundle", "prop41"}, {"horizon", 300}});
  EXPECT_EQ(rep.status, Status::Ok);
  EXPECT_TRUE(rep.summary["replay_identical"].get<bool>());
}

TEST(Cli, EmitPlotData) {
  const auto rep = orbitlab::cli::run(
      Json{{"experiment", "avoid"}, {"bundle", "example44"}, {"horizon", 50}, {"delta", "0.99"}});
  const auto dir = scratch("emit");
  std::filesystem::create_directories(dir);
  const auto path = (dir / "dist.csv").string();
  orbitlab::cli::emit_plot_data(rep, "distance", {"n", "dist_lo", "dist_hi"}, path);
  const std::string text = slurp(path);
  EXPECT_EQ(text.substr(0, text.find('\n')), "n,dist_lo,dist_hi");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 51);
  EXPECT_THROW(orbitlab::cli::emit_plot_data(rep, "distance", {"n", "nope"}, path), ConfigInvalid);

  const auto hits = orbitlab::cli::run(Json{{"experiment", "hits"},
                                            {"bundle", "prop53"},
                                            {"target", {{"vector", {{"coords", {{"0", "1"}}}}}}},
                                            {"epsilon", "1/2"},
                                            {"horizon", 40}});
  orbitlab::cli::emit_plot_data(hits, "density", {"n", "density"}, path);
  EXPECT_EQ(slurp(path).substr(0, 10), "n,density\n");
}
