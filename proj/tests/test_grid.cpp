#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xyqaoa/grid.hpp"

using namespace xyqaoa;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("xyqaoa_grid_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

GridSpec small_spec() {
  GridSpec spec;
  spec.label = "small";
  spec.n_values = {2, 3};
  spec.p_ranges = {{2, {1, 2}}, {3, {1, 2}}};
  spec.tf_ranges = {{2, {0.4, 0.8}}, {3, {}}};
  spec.restarts = {{2, 3}, {3, 3}};
  return spec;
}

}  // namespace

TEST(Presets, RunTwoForTwoSites) {
  const auto spec = grid_preset("run2", {2});
  EXPECT_EQ(spec.cells().size(), 56U);
  EXPECT_EQ(spec.restarts_for(2), 200);
  EXPECT_EQ(spec.tf_ranges.at(2).front(), 0.2);
  EXPECT_EQ(spec.tf_ranges.at(2).back(), 1.6);
}

TEST(Presets, UnconstrainedTenSites) {
  const auto spec = grid_preset("unconstrained", {10});
  const auto cells = spec.cells();
  EXPECT_EQ(cells.size(), 15U);
  for (const auto& c : cells) EXPECT_FALSE(c.tf.has_value());
}

TEST(Presets, RestartRuleAndTables) {
  const auto all = grid_preset("run1");
  EXPECT_EQ(all.n_values.size(), 19U);
  EXPECT_EQ(all.restarts_for(15), 200);
  EXPECT_EQ(all.restarts_for(16), 400);
  EXPECT_EQ(all.p_ranges.at(16), parse_int_range("1:2:23"));
  EXPECT_THROW(grid_preset("run3"), ParseError);
  EXPECT_THROW(grid_preset("run1", {25}), InvalidConstraint);
}

TEST(SpecJson, PresetAndExplicitForms) {
  const auto a = grid_spec_from_json(nlohmann::json::parse(R"({"preset":"run2","n_values":[2],"restarts":5})"));
  EXPECT_EQ(a.cells().size(), 56U);
  EXPECT_EQ(a.restarts_for(2), 5);
  const auto b = grid_spec_from_json(nlohmann::json::parse(
      R"({"label":"x","n_values":[4],"p_ranges":{"4":"1:3"},"tf_ranges":{"4":[1.0, 2.0]}})"));
  EXPECT_EQ(b.cells().size(), 6U);
  const auto c = grid_spec_from_json(grid_spec_to_json(b));
  EXPECT_EQ(c.cells(), b.cells());
  EXPECT_EQ(c.label, "x");
}

TEST(SpecJson, Errors) {
  EXPECT_THROW(grid_spec_from_json(nlohmann::json::parse(R"({"n_values":[4]})")), InvalidConstraint);
  EXPECT_THROW(grid_spec_from_json(nlohmann::json::parse(R"({"bogus":1})")), ParseError);
  EXPECT_THROW(grid_spec_from_json(nlohmann::json::parse(R"({"n_values":[4],"p_ranges":{"4":"1:0:3"}})")),
               ParseError);
  EXPECT_THROW(grid_spec_from_json(nlohmann::json::parse("[1,2]")), ParseError);
}

TEST(Csv, RoundTripIsLossless) {
  ExperimentRecord r;
  r.label = "run2";
  r.n = 5;
  r.p = 3;
  r.tf = 0.1 + 0.2;
  r.best_fidelity = 0.123456789012345678;
  r.restarts = 200;
  r.converged = 187;
  r.seed = 18446744073709551557ULL;
  r.wall_time_s = 1.0 / 3.0;
  r.best_schedule = Schedule::from_flat(std::vector<double>{0.1, 1e-300, 2.0 / 3.0, 5.5, 0.0, 1e10});
  const auto back = parse_csv_row(to_csv_row(r));
  EXPECT_EQ(back, r);

  ExperimentRecord f = r;
  f.tf.reset();
  const auto row = to_csv_row(f);
  EXPECT_NE(row.find(",free,"), std::string::npos);
  EXPECT_EQ(parse_csv_row(row), f);
}

TEST(Csv, HeaderAndTornLine) {
  ExperimentRecord r;
  r.label = "a";
  r.n = 2;
  r.p = 1;
  r.best_schedule = Schedule({{0.5, 0.1}});
  const std::string text = grid_csv_text({r});
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  const auto torn = read_grid_csv_text(text + "a,2,2,0.4,0.5");
  EXPECT_EQ(torn.records.size(), 1U);
  EXPECT_GT(torn.discarded_bytes, 0U);
  EXPECT_THROW(read_grid_csv_text("wrong,header\n"), ParseError);
  EXPECT_THROW(parse_csv_row("a,2,1,free,0.5"), ParseError);
  EXPECT_THROW(parse_csv_row("a,2,1,free,1.5,1,1,1,0,"), ParseError);
}

TEST(RunGrid, RecordsEveryCellInCanonicalOrder) {
  GridOptions opt;
  opt.seed = 11;
  const auto summary = run_grid(small_spec(), opt);
  EXPECT_TRUE(summary.complete);
  ASSERT_EQ(summary.records.size(), 6U);
  for (std::size_t i = 1; i < summary.records.size(); ++i)
    EXPECT_TRUE(summary.records[i - 1].cell() < summary.records[i].cell());
  for (const auto& r : summary.records) {
    EXPECT_GE(r.best_fidelity, 0.0);
    EXPECT_LE(r.best_fidelity, 1.0 + 1e-12);
    EXPECT_EQ(r.restarts, 3);
    if (r.tf) {
      EXPECT_NEAR(r.best_schedule.total_time(), *r.tf, 1e-10);
    }
  }
}

TEST(RunGrid, SameSeedSameBytes) {
  const auto dir = scratch_dir("same");
  GridOptions opt;
  opt.seed = 5;
  opt.record_timing = false;
  run_grid(small_spec(), opt, dir / "a.csv");
  opt.threads = 3;
  run_grid(small_spec(), opt, dir / "b.csv");
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  fs::remove_all(dir);
}

TEST(RunGrid, ResumeSkipsCompletedCellsAndMatchesUninterrupted) {
  const auto dir = scratch_dir("resume");
  GridOptions opt;
  opt.seed = 8;
  opt.record_timing = false;
  run_grid(small_spec(), opt, dir / "full.csv");

  GridOptions partial = opt;
  partial.max_new_cells = 4;
  const auto first = run_grid(small_spec(), partial, dir / "resumed.csv");
  EXPECT_FALSE(first.complete);
  EXPECT_EQ(first.computed, 4U);
  // Simulate a crash that tore the last row.
  {
    std::ofstream out(dir / "resumed.csv", std::ios::binary | std::ios::app);
    out << "small,3,2,free,0.9";
  }
  const auto second = run_grid(small_spec(), opt, dir / "resumed.csv");
  EXPECT_TRUE(second.complete);
  EXPECT_EQ(second.skipped, 4U);
  EXPECT_EQ(second.computed, 2U);
  EXPECT_EQ(slurp(dir / "full.csv"), slurp(dir / "resumed.csv"));

  const auto third = run_grid(small_spec(), opt, dir / "resumed.csv");
  EXPECT_EQ(third.computed, 0U);
  EXPECT_EQ(slurp(dir / "full.csv"), slurp(dir / "resumed.csv"));
  fs::remove_all(dir);
}

TEST(RunGrid, CellSeedsDependOnCellOnly) {
  const GridCell a{4, 2, 1.0}, b{4, 2, std::nullopt}, c{4, 3, 1.0};
  EXPECT_EQ(cell_seed(1, a), cell_seed(1, a));
  EXPECT_NE(cell_seed(1, a), cell_seed(1, b));
  EXPECT_NE(cell_seed(1, a), cell_seed(1, c));
  EXPECT_NE(cell_seed(1, a), cell_seed(2, a));
}

TEST(RunGrid, UnwritablePathFails) {
  GridOptions opt;
  EXPECT_THROW(run_grid(small_spec(), opt, fs::path("/nonexistent_dir_xyqaoa/out.csv")), IoError);
}
