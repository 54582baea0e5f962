#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "srep/scenario.hpp"
#include "srep/selftest.hpp"

using namespace srep;

namespace {

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

// Data rows of a table column, by name.
std::vector<std::string> column(const CsvTable& t, const std::string& name) {
  std::size_t k = 0;
  while (k < t.columns.size() && t.columns[k].name != name) ++k;
  if (k == t.columns.size()) throw std::runtime_error("no column " + name);
  std::vector<std::string> out;
  for (const auto& r : t.rows) out.push_back(r[k]);
  return out;
}

std::vector<double> numbers(const CsvTable& t, const std::string& name) {
  std::vector<double> out;
  for (const auto& s : column(t, name)) out.push_back(std::stod(s));
  return out;
}

int parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(ScenarioParse, ListsAndRanges) {
  auto sc = parse(
      "# header comment\n"
      "[experiment]\nkind = large_scale\nmaster_seed = 7\nseeds = 0..2, 10\n"
      "[topology]\nn = 10000\ndeg = 4..28 step 4  # trailing comment\np = 0.24\n"
      "[pools]\nsizes = maxwell\npsi = 0.355, 0.5, 0.6\nsampling = with_replacement\n");
  EXPECT_EQ(sc.kind, ExperimentKind::large_scale);
  EXPECT_EQ(sc.master_seed, 7U);
  EXPECT_EQ(sc.seeds, (std::vector<std::uint64_t>{0, 1, 2, 10}));
  EXPECT_EQ(sc.deg, (std::vector<std::uint64_t>{4, 8, 12, 16, 20, 24, 28}));
  EXPECT_EQ(sc.psi, (std::vector<double>{0.355, 0.5, 0.6}));
  EXPECT_EQ(sc.sampling, Sampling::with_replacement);
  EXPECT_FALSE(sc.unit_pools);
  EXPECT_NEAR(sc.sizes->mean(), 2.0e4, 1.0);
  EXPECT_NO_THROW(validate(sc));

  auto f = parse("[experiment]\nkind = psi_calibration\n[topology]\nn=100\ndeg=20\n"
                 "[pools]\nsizes = constant(50)\npsi = 0.2..1.0 step 0.2\n");
  ASSERT_EQ(f.psi.size(), 5U);
  EXPECT_NEAR(f.psi.back(), 1.0, 1e-12);
}

TEST(ScenarioParse, EngineAndBaselineSections) {
  auto sc = parse(
      "[experiment]\nkind = mempoolsync_compare\n[topology]\nn = 100, 200\ndeg = 4\n"
      "[pools]\nsizes = constant(30)\npsi = 2\n"
      "[engine]\nmode = ep_srep\nbackend = iblt(2.0, 3, 8)\n"
      "[mempoolsync]\ndef_tx_to_sync = 50\ny = 0.25, 0.75\nlarge_pool_multiplier = 4\n");
  EXPECT_EQ(sc.mode, SrepMode::ep_srep);
  const auto& ib = std::get<IbltBackend>(sc.backend);
  EXPECT_DOUBLE_EQ(ib.cells_per_diff, 2.0);
  EXPECT_EQ(ib.hash_count, 3U);
  EXPECT_EQ(ib.extra_cells, 8U);
  EXPECT_EQ(sc.mempoolsync.def_tx_to_sync, 50U);
  EXPECT_EQ(sc.y, (std::vector<double>{0.25, 0.75}));
  EXPECT_DOUBLE_EQ(sc.mempoolsync.large_pool_multiplier, 4.0);
  EXPECT_EQ(sc.seeds.size(), 10U);  // default
}

TEST(ScenarioParse, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("[experiment]\nkind = nope\n"), 2);
  EXPECT_EQ(parse_error_line("[experiment]\nkind = large_scale\n[topology]\nn = ten\n"), 4);
  EXPECT_EQ(parse_error_line("[experiment]\nkind = large_scale\ncolour = red\n"), 3);
  EXPECT_EQ(parse_error_line("[bogus]\n"), 1);
  EXPECT_EQ(parse_error_line("n = 3\n"), 1);
  EXPECT_EQ(parse_error_line("[experiment]\nkind = large_scale\nkind = large_scale\n"), 3);
  EXPECT_EQ(parse_error_line("[experiment]\nkind = large_scale\n[topology]\ndeg = 8..4\n"), 4);
  EXPECT_EQ(parse_error_line("[experiment]\nkind = large_scale\n[pools]\nsizes = gamma(3)\n"), 4);
  EXPECT_EQ(parse_error_line("[topology]\nn = 5\n"), 0);  // kind missing
}

TEST(ScenarioValidate, RejectsBadGrids) {
  auto base = "[experiment]\nkind = iter_vs_diameter\n[topology]\nn = 50\n";
  auto empty_seeds = parse(
      "[experiment]\nkind = iter_vs_diameter\nseeds =\n[topology]\nn = 50\ndeg = 4\n");
  try {
    validate(empty_seeds);
    FAIL() << "expected a validation error";
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("seeds"), std::string::npos);
  }
  EXPECT_THROW(validate(parse(std::string(base) + "deg = 5\n")), ParameterError);
  EXPECT_THROW(validate(parse(std::string(base) + "deg = 4\np = 1.5\n")), ParameterError);
  EXPECT_THROW(validate(parse(std::string(base) + "deg = 4\n[pools]\nsizes = maxwell\n")), ParameterError);
  EXPECT_NO_THROW(validate(parse(std::string(base) + "deg = 49\n")));  // complete graph
}

TEST(ScenarioDescribe, RunCountAndNotes) {
  auto sc = parse(
      "[experiment]\nkind = large_scale\nseeds = 0..9\n"
      "[topology]\nn = 10000\ndeg = 4..28 step 4\n"
      "[pools]\nsizes = maxwell\npsi = 0.355, 0.5, 0.6\n");
  EXPECT_EQ(sc.run_count(), 210U);
  const auto text = describe(sc);
  EXPECT_NE(text.find("210 runs"), std::string::npos);
  EXPECT_NE(text.find("analytic"), std::string::npos);
  EXPECT_NE(text.find("bypassed"), std::string::npos);
  EXPECT_NE(text.find("derive(master, n, deg, index)"), std::string::npos);
}

TEST(ScenarioRun, ValidateBoundsOnK5) {
  auto sc = parse("[experiment]\nkind = validate_bounds\nseeds = 0\n"
                  "[topology]\nfamily = complete\nn = 5\n[pools]\nsizes = unit\n");
  auto res = run_experiment(sc);
  EXPECT_EQ(res.violations, 0U);
  ASSERT_EQ(res.runs.rows.size(), 1U);
  EXPECT_EQ(column(res.runs, "c_elements")[0], "20");
  EXPECT_EQ(column(res.runs, "i100")[0], "1");
  EXPECT_EQ(column(res.runs, "ok")[0], "1");
}

TEST(ScenarioRun, ValidateBoundsSweepHasNoViolations) {
  auto sc = parse("[experiment]\nkind = validate_bounds\nseeds = 0..4\n"
                  "[topology]\nn = 30, 60\ndeg = 2, 4, 8\np = 0.3\n[engine]\nmode = ep_srep\n");
  auto res = run_experiment(sc);
  EXPECT_EQ(res.violations, 0U);
  EXPECT_EQ(res.runs.rows.size(), 30U);
}

TEST(ScenarioRun, IterVsDiameterColumnsAndBound) {
  auto sc = parse("[experiment]\nkind = iter_vs_diameter\nseeds = 0..3\n"
                  "[topology]\nn = 200\ndeg = 4, 8\n[pools]\nsizes = maxwell(50)\npsi = 0.6\n");
  auto res = run_experiment(sc);
  ASSERT_GE(res.summary.columns.size(), 5U);
  EXPECT_EQ(res.summary.columns[0].name, "deg");
  EXPECT_EQ(res.summary.columns[1].name, "diameter_mean");
  EXPECT_EQ(res.summary.columns[2].name, "diameter_ci");
  EXPECT_EQ(res.summary.columns[3].name, "i100_mean");
  EXPECT_EQ(res.summary.columns[4].name, "i100_ci");
  const auto d = numbers(res.runs, "diameter"), i = numbers(res.runs, "i100");
  for (std::size_t k = 0; k < d.size(); ++k) EXPECT_LE(i[k], d[k]);
}

TEST(ScenarioRun, CommAndTimeNormalizesBySmallestDegree) {
  auto sc = parse("[experiment]\nkind = comm_and_time\nseeds = 0..2\n"
                  "[topology]\nn = 100\ndeg = 8, 4, 12\n[pools]\nsizes = maxwell(40)\npsi = 0.5\n");
  auto res = run_experiment(sc);
  const auto deg = column(res.summary, "deg");
  const auto c_rel = numbers(res.summary, "c_rel");
  ASSERT_EQ(deg[1], "4");
  EXPECT_DOUBLE_EQ(c_rel[1], 1.0);
  EXPECT_GT(c_rel[2], c_rel[0]);
}

TEST(ScenarioRun, RedundancySweepUnitPoolsCompleteGraphEnd) {
  auto sc = parse("[experiment]\nkind = redundancy_sweep\nseeds = 0..2\n"
                  "[topology]\nn = 30\ndeg = 4, 8, 29\n");
  auto res = run_experiment(sc);
  const auto red = numbers(res.summary, "redundant_mean");
  ASSERT_EQ(red.size(), 3U);
  EXPECT_EQ(red[2], 0.0);
  EXPECT_GT(red[0], 0.0);
}

TEST(ScenarioRun, PsiCalibrationReportsTarget) {
  auto sc = parse("[experiment]\nkind = psi_calibration\nseeds = 0..1\n"
                  "[topology]\nn = 60\ndeg = 6\n[pools]\nsizes = constant(40)\n"
                  "psi = 0.5, 1, 2, 4\ntarget_mean_diff = 40\n");
  auto res = run_experiment(sc);
  const auto mean = numbers(res.summary, "diff_mean");
  ASSERT_EQ(mean.size(), 4U);
  EXPECT_TRUE(std::is_sorted(mean.begin(), mean.end()));
  ASSERT_EQ(res.messages.size(), 1U);
  EXPECT_NE(res.messages[0].find("calibrated psi"), std::string::npos);
}

TEST(ScenarioRun, MempoolSyncCompareRowsAndCrossover) {
  auto sc = parse("[experiment]\nkind = mempoolsync_compare\nseeds = 0..1\n"
                  "[topology]\nn = 100, 200\ndeg = 4\n[pools]\nsizes = maxwell(200)\npsi = 0.5\n"
                  "[mempoolsync]\ndef_tx_to_sync = 20\ny = 0.25, 0.5\n");
  auto res = run_experiment(sc);
  EXPECT_EQ(res.summary.rows.size(), 4U);
  EXPECT_EQ(res.runs.rows.size(), 8U);
  for (double f : numbers(res.runs, "mempoolsync_final_fraction")) EXPECT_LT(f, 1.0);
  const auto norm = numbers(res.summary, "srep_norm");
  EXPECT_DOUBLE_EQ(norm[0], 1.0);
  bool crossover_note = false;
  for (const auto& n : res.summary.notes) crossover_note |= n.rfind("crossover n", 0) == 0;
  EXPECT_TRUE(crossover_note);
}

TEST(ScenarioRun, LargeScaleMatchesEngineOnSmallInstance) {
  auto sc = parse("[experiment]\nkind = large_scale\nseeds = 0..1\n"
                  "[topology]\nn = 150\ndeg = 6\n[pools]\nsizes = maxwell(60)\npsi = 0.6\n");
  auto res = run_experiment(sc);
  sc.kind = ExperimentKind::comm_and_time;
  auto eng = run_experiment(sc);
  EXPECT_EQ(column(res.runs, "c_elements"), column(eng.runs, "c"));
}

TEST(ScenarioRun, DeterministicAndStableUnderSweepExtension) {
  const std::string head = "[experiment]\nkind = comm_and_time\nmaster_seed = 99\nseeds = 0..2\n"
                           "[topology]\nn = 80\n";
  const std::string tail = "[pools]\nsizes = maxwell(40)\npsi = 0.5\n";
  auto a = run_experiment(parse(head + "deg = 4\n" + tail));
  auto b = run_experiment(parse(head + "deg = 4\n" + tail));
  EXPECT_EQ(a.summary.str(), b.summary.str());
  EXPECT_EQ(a.runs.str(), b.runs.str());

  auto wide = run_experiment(parse(head + "deg = 4, 6\n" + tail));
  ASSERT_EQ(wide.runs.rows.size(), 6U);
  for (std::size_t k = 0; k < a.runs.rows.size(); ++k) EXPECT_EQ(wide.runs.rows[k], a.runs.rows[k]);
}

TEST(ScenarioRun, CsvHeaderDocumentsColumns) {
  auto res = run_experiment(parse("[experiment]\nkind = validate_bounds\nseeds = 0\n"
                                  "[topology]\nfamily = cycle\nn = 6\n"));
  const auto text = res.runs.str();
  EXPECT_NE(text.find("# seed: seed index"), std::string::npos);
  EXPECT_NE(text.find("\nn,deg,psi,seed,"), std::string::npos);
}

TEST(ScenarioFiles, LoadWriteAndEmpiricalSizes) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(testing::TempDir()) / "srep_scenario_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "sizes.txt") << "20\n40\n";
    std::ofstream(dir / "s.ini") << "[experiment]\nkind = psi_calibration\nseeds = 0\n"
                                    "[topology]\nn = 20\ndeg = 4\n"
                                    "[pools]\nsizes = empirical(sizes.txt)\npsi = 1\n";
  }
  auto sc = load_scenario(dir / "s.ini");
  EXPECT_DOUBLE_EQ(sc.sizes->mean(), 30.0);
  EXPECT_THROW(load_scenario(dir / "missing.ini"), IoError);

  EXPECT_EQ(runs_path("out/fig5.csv"), fs::path("out/fig5.runs.csv"));
  write_text(dir / "sub" / "x.csv", "a\n");
  std::ifstream in(dir / "sub" / "x.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "a");
  fs::remove_all(dir);
}

TEST(Selftest, AllChecksPass) {
  for (const auto& c : run_selftest()) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}
