#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "seqalloc/policy.hpp"

using namespace seqalloc;

namespace {

const ExponentialComplexity kUnitExp(1.0);

SolverConfig test_config(double horizon = 12.0, int n_steps = 128) {
  SolverConfig cfg;
  cfg.grid = TimeGrid{0.0, horizon, n_steps};
  return cfg;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("pricing schedule and price rule") {
  PricingParams pp;
  pp.q = 0.5;
  pp.s_schedule = {{0.0, 0.1}, {6.0, 0.3}};
  pp.validate();
  CHECK(pp.s_at(0.0) == 0.1);
  CHECK(pp.s_at(5.9) == 0.1);
  CHECK(pp.s_at(6.0) == 0.3);
  CHECK(price(pp, 2.0, 1.0) == doctest::Approx(1.1));

  PricingParams zero;
  zero.q = 0.0;
  CHECK(price(zero, 123.0, 0.0) == 0.0);

  PricingParams unit;
  CHECK(price(unit, 7.09233, 0.0) == doctest::Approx(7.09233));
  CHECK_THROWS_AS(price(unit, kRejectAllThreshold, 0.0), std::domain_error);

  PricingParams bad;
  bad.q = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("price is linear in the threshold at fixed q and t") {
  PricingParams pp;
  pp.q = 0.7;
  pp.s_schedule = {{0.0, 0.25}};
  const double t = 3.0;
  const double y = 2.4;
  for (double a : {0.1, 0.5, 2.0, 10.0}) {
    const double lhs = price(pp, a * y, t) - pp.s_at(t);
    const double rhs = a * (price(pp, y, t) - pp.s_at(t));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("build_table cardinality and lookup semantics") {
  const auto cfg = test_config();
  const PolicyTable table = build_table(kUnitExp, {10.0, 100.0}, 25, cfg);
  CHECK(table.lambda_grid().size() == 2);
  CHECK(table.n_vms_max() == 25);

  // terminal boundary through lookup
  CHECK(table.lookup(100.0, 25, 12.0) == doctest::Approx(1.0).epsilon(1e-9));
  // reject-all sentinel with no inventory
  CHECK(table.lookup(100.0, 0, 3.0) == kRejectAllThreshold);
  // lookup picks the exact curve for the clamped count
  const auto& c7 = table.curve(1, 7);
  CHECK(table.lookup(100.0, 7, 2.0) == doctest::Approx(c7.value_at(2.0)));
  // counts above the table clamp to n_vms_max
  CHECK(table.lookup(100.0, 999, 2.0) ==
        doctest::Approx(table.curve(1, 25).value_at(2.0)));
  // nearest-rate selection with ties to the lower rate
  CHECK(table.nearest_lambda_index(10.0) == 0);
  CHECK(table.nearest_lambda_index(54.9) == 0);
  CHECK(table.nearest_lambda_index(55.0) == 0);  // tie -> lower
  CHECK(table.nearest_lambda_index(55.1) == 1);
  CHECK_THROWS_AS(table.lookup(100.0, 5, 12.5), std::domain_error);
  CHECK_THROWS_AS(table.lookup(100.0, -1, 1.0), std::invalid_argument);
}

TEST_CASE("single-curve table is degenerate but valid") {
  const PolicyTable table = build_table(kUnitExp, {100.0}, 1, test_config());
  CHECK(table.n_vms_max() == 1);
  CHECK(std::isfinite(table.lookup(100.0, 1, 0.0)));
}

TEST_CASE("lookup is nonincreasing in the available count") {
  const PolicyTable table = build_table(kUnitExp, {100.0}, 20, test_config());
  for (double t : {0.0, 4.0, 9.5}) {
    double prev = table.lookup(100.0, 1, t);
    for (int n = 2; n <= 20; ++n) {
      const double cur = table.lookup(100.0, n, t);
      CHECK(cur <= prev + 1e-6);
      prev = cur;
    }
  }
}

TEST_CASE("table round trip preserves lookups") {
  const auto cfg = test_config(12.0, 96);
  const PolicyTable table = build_table(kUnitExp, {50.0, 100.0}, 10, cfg, "");
  TempFile file("seqalloc_table_roundtrip.json");
  save_table(table, file.path);
  const PolicyTable loaded = load_table(file.path);

  CHECK(loaded.horizon() == table.horizon());
  CHECK(loaded.n_vms_max() == table.n_vms_max());
  for (double lam : {50.0, 100.0}) {
    for (int n : {1, 5, 10}) {
      for (double t : {0.0, 1.7, 6.0, 11.99, 12.0}) {
        CHECK(std::abs(loaded.lookup(lam, n, t) - table.lookup(lam, n, t)) <=
              1e-12);
      }
    }
  }
}

TEST_CASE("load rejects missing curves naming the key") {
  const auto cfg = test_config(12.0, 64);
  const PolicyTable table = build_table(kUnitExp, {100.0}, 3, cfg);
  TempFile file("seqalloc_table_missing.json");
  save_table(table, file.path);

  nlohmann::json j;
  {
    std::ifstream in(file.path);
    in >> j;
  }
  j["curves"].erase("0:2");
  {
    std::ofstream out(file.path);
    out << j.dump();
  }
  CHECK_THROWS_WITH_AS(load_table(file.path),
                       doctest::Contains("missing curve '0:2'"),
                       std::runtime_error);
}

TEST_CASE("load rejects tables whose ordering is corrupted") {
  const auto cfg = test_config(12.0, 64);
  const PolicyTable table = build_table(kUnitExp, {100.0}, 3, cfg);
  TempFile file("seqalloc_table_corrupt.json");
  save_table(table, file.path);

  nlohmann::json j;
  {
    std::ifstream in(file.path);
    in >> j;
  }
  std::swap(j["curves"]["0:1"], j["curves"]["0:3"]);  // violates the N-ordering
  {
    std::ofstream out(file.path);
    out << j.dump();
  }
  CHECK_THROWS_WITH_AS(load_table(file.path),
                       doctest::Contains("ordering"), std::runtime_error);
}

TEST_CASE("load rejects malformed documents") {
  TempFile file("seqalloc_table_bad.json");
  {
    std::ofstream out(file.path);
    out << "{ not json";
  }
  CHECK_THROWS_WITH_AS(load_table(file.path), doctest::Contains("parse error"),
                       std::runtime_error);
  {
    std::ofstream out(file.path);
    out << "{\"distribution\": {\"family\": \"exponential\", \"alpha\": 1.0}}";
  }
  CHECK_THROWS_WITH_AS(load_table(file.path),
                       doctest::Contains("missing field 'horizon_hours'"),
                       std::runtime_error);
}
