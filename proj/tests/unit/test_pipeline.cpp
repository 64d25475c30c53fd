#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "trajbound/error.hpp"
#include "trajbound/pipeline.hpp"

using namespace trajbound;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.dataset = dataset::GaussianBlobs{2, 24, 3.0};
  c.m_train = 64;
  c.m_test = 64;
  c.width = 32;
  c.train.lr = 0.05;
  c.train.batch_size = 16;
  c.train.max_iters = 400;
  c.train.sgn_coord_count = 16;
  c.train.loss_log_stride = 10;
  return c;
}

fs::path run_dir(const std::string& name, const RunConfig& config, std::uint64_t seed) {
  const auto dir = fs::temp_directory_path() / "trajbound_test_pipeline" / name;
  fs::remove_all(dir);
  const auto run = prepare_run(config, seed);
  const auto log = train(run.spec, run.train, run.data);
  write_run_dir(log, describe_run(config, seed), dir);
  return dir;
}

}  // namespace

TEST_CASE("run directory round trip and deterministic analysis") {
  const auto config = small_config();
  const auto dir = run_dir("basic", config, 3);
  for (const char* f : {run_files::sgn, run_files::loss_vectors, run_files::weights, run_files::summary})
    CHECK(fs::exists(dir / f));

  const auto a = analyze(dir);
  const auto b = analyze(dir);
  CHECK(format_key_values(a.to_key_values()) == format_key_values(b.to_key_values()));
  CHECK(a.complete());
  REQUIRE(a.bound.has_value());
  REQUIRE(a.hurst_used.has_value());
  REQUIRE(a.diameter.has_value());
  // The bound is built from the report's own hurst and diameter fields.
  const auto recomputed = full_bound({*a.diameter, a.m, HurstParam(*a.hurst_used), a.zeta, a.beta, a.tau, a.empirical_risk});
  CHECK(recomputed.total == a.bound->total);
  CHECK(a.m == 64);
  CHECK(*a.diameter >= *a.diameter_lower_bound);

  const auto run = prepare_run(config, 3);
  const auto log = train(run.spec, run.train, run.data);
  const auto direct = analyze_artifacts(artifacts_from_log(log, describe_run(config, 3)));
  CHECK(format_key_values(direct.to_key_values()) == format_key_values(a.to_key_values()));
}

TEST_CASE("zero learning rate gives a degenerate loss cloud") {
  auto config = small_config();
  config.train.lr = 0.0;
  config.train.max_iters = 600;
  const auto report = analyze(run_dir("lr0", config, 1));
  REQUIRE(report.diameter.has_value());
  CHECK(*report.diameter == 0.0);
  REQUIRE(report.bound.has_value());
  CHECK(report.bound->rademacher_term == 0.0);
  CHECK(*report.gap == *report.train_acc - *report.test_acc);
}

TEST_CASE("missing artifacts and failed estimators") {
  const auto dir = run_dir("missing", small_config(), 2);
  fs::remove(dir / run_files::weights);
  CHECK_THROWS_AS(analyze(dir), FormatError);

  // Too few SGN rows for a Hurst estimate: the report keeps the other fields.
  auto config = small_config();
  config.train.max_iters = 20;
  const auto report = analyze(run_dir("short", config, 2));
  CHECK_FALSE(report.complete());
  CHECK_FALSE(report.hurst.has_value());
  CHECK_FALSE(report.bound.has_value());
  CHECK(report.diameter.has_value());
  const auto text = format_key_values(report.to_key_values());
  CHECK(text.find("hurst=absent") != std::string::npos);
}

TEST_CASE("sweep axes") {
  CHECK(parse_sweep_axis("train_size") == SweepAxis::train_size);
  CHECK(to_string(parse_sweep_axis("wd")) == "wd");
  CHECK_THROWS_AS(parse_sweep_axis("nope"), DomainError);
  const auto base = small_config();
  CHECK(apply_axis(base, SweepAxis::train_size, 200).m_train == 200);
  CHECK(apply_axis(base, SweepAxis::lr, 0.3).train.lr == 0.3);
  CHECK(apply_axis(base, SweepAxis::batch, 8).train.batch_size == 8);
  CHECK(apply_axis(base, SweepAxis::momentum, 0.9).train.momentum == 0.9);
  CHECK(apply_axis(base, SweepAxis::wd, 1e-3).train.weight_decay == 1e-3);
  CHECK(apply_axis(base, SweepAxis::width, 7).width == 7);
  CHECK(apply_axis(base, SweepAxis::depth, 3).depth == 3);
}

TEST_CASE("sweep output is independent of the job count") {
  SweepSpec spec;
  spec.axis = SweepAxis::lr;
  spec.values = {0.02, 0.08};
  spec.seeds = {1, 2};
  spec.base = small_config();
  spec.base.train.max_iters = 200;
  const auto serial = run_sweep(spec);
  spec.jobs = 3;
  const auto parallel = run_sweep(spec);
  CHECK(sweep_csv(spec.axis, serial) == sweep_csv(spec.axis, parallel));
  REQUIRE(serial.size() == 4);
  CHECK(serial[0].axis_value == 0.02);
  CHECK(serial[1].seed == 2);
}

TEST_CASE("single-cell sweep and undefined correlation") {
  SweepSpec spec;
  spec.axis = SweepAxis::batch;
  spec.values = {16};
  spec.seeds = {1, 2, 3};
  spec.base = small_config();
  spec.base.train.max_iters = 200;
  const auto rows = run_sweep(spec);
  const auto csv = sweep_csv(spec.axis, rows);
  std::istringstream in(csv);
  std::string line;
  std::size_t data_rows = 0, undefined = 0;
  std::getline(in, line);
  CHECK(line.rfind("batch,seed,status,gap,bound", 0) == 0);
  while (std::getline(in, line)) {
    if (line.rfind("# pearson", 0) == 0) {
      CHECK(line.find("undefined") != std::string::npos);
      ++undefined;
    } else {
      ++data_rows;
    }
  }
  CHECK(data_rows == 3);
  CHECK(undefined >= 1);
}

TEST_CASE("failing cells are recorded, not fatal") {
  SweepSpec spec;
  spec.axis = SweepAxis::lr;
  spec.values = {0.05, 1e5};
  spec.seeds = {1};
  spec.base = small_config();
  spec.base.train.max_iters = 200;
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK_FALSE(rows[1].error.empty());
  CHECK(sweep_csv(spec.axis, rows).find("1e+05,1,failed") != std::string::npos);
  CHECK(rows[1].error.find("diverge") != std::string::npos);
}
