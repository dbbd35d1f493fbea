#include <doctest.h>

#include <functional>
#include <sstream>

#include "tisr/run_config.hpp"

using namespace tisr;

namespace {

std::string error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  FAIL("expected a Config error");
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  const SolverConfig s = cfg.solver();
  CHECK(s.lambda == 0.1);
  CHECK(s.c == 2.0);
  CHECK(s.admm_iters == 30);
  const DegradationModel m = cfg.model(16, 16);
  CHECK(m.kernel.weights() == gaussian_kernel(7, 0.65).weights());
  CHECK(m.shift_rows == 1);
  CHECK(m.shift_cols == 1);
  CHECK(cfg.protocol().kind == ProtocolKind::Ideal);
  CHECK(cfg.seed() == 0);
  CHECK(cfg.ibp().iters == 50);
  CHECK(cfg.get_list("sources").empty());
  CHECK_FALSE(cfg.get_bool("oracle_check"));
}

TEST_CASE("text parsing") {
  RunConfig cfg;
  cfg.load_text("# comment\n\n lambda = 0.5  # inline\nsources = a.pgm, b.pgm ,\n", "run.cfg");
  CHECK(cfg.get_double("lambda") == 0.5);
  CHECK(cfg.get_list("sources") == std::vector<std::string>{"a.pgm", "b.pgm"});

  CHECK(error_text([&] { cfg.load_text("lambda = 1\nbogus = 2\n", "run.cfg"); }) ==
        "run.cfg:2: unknown key 'bogus'");
  CHECK(error_text([&] { cfg.load_text("\n\nlambda 3\n", "x.cfg"); }) ==
        "x.cfg:3: expected key = value");
}

TEST_CASE("overrides and typed access") {
  RunConfig cfg;
  cfg.apply_override("seed=42");
  cfg.apply_override(" register = yes ");
  CHECK(cfg.seed() == 42);
  CHECK(cfg.get_bool("register"));
  CHECK_THROWS_AS(cfg.apply_override("seed"), Error);
  CHECK_THROWS_AS(cfg.apply_override("nope=1"), Error);
  CHECK_THROWS_AS(cfg.set("nope", "1"), Error);

  cfg.set("admm_iters", "3.5");
  CHECK_THROWS_AS(cfg.get_int("admm_iters"), Error);
  cfg.set("lambda", "0.1x");
  CHECK_THROWS_AS(cfg.get_double("lambda"), Error);
  cfg.set("register", "maybe");
  CHECK_THROWS_AS(cfg.get_bool("register"), Error);
}

TEST_CASE("validation") {
  const std::pair<const char*, const char*> bad[] = {
      {"lambda", "-1"},        {"c", "0"},           {"factor", "3"},
      {"patch_size", "5"},     {"patch_stride", "1"}, {"neighbors", "0"},
      {"kernel_size", "4"},    {"protocol", "other"}, {"shift_n", "11"},
      {"method", "lanczos"},   {"upsample", "5"},     {"scene_size", "645"},
      {"oracle_check", "2x"},  {"seed", "-1"},
  };
  for (const auto& [key, value] : bad) {
    RunConfig cfg;
    cfg.set(key, value);
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
}

TEST_CASE("search strategy") {
  RunConfig cfg;
  CHECK(cfg.search_radius(64, 64) == kFullSearch);
  CHECK(cfg.search_radius(65, 64) == 10);
  cfg.set("full_search_max_lr", "0");
  CHECK(cfg.search_radius(8, 8) == 10);
  const PatchGrid grid = cfg.hr_grid(32, 24);
  CHECK(grid.patch_size == 8);
  CHECK(grid.stride == 4);
}

TEST_CASE("write is sorted and round-trips") {
  RunConfig cfg;
  cfg.set("seed", "7");
  std::ostringstream out;
  cfg.write(out);
  const std::string text = out.str();
  CHECK(text.rfind("admm_iters=30\n", 0) == 0);
  CHECK(text.find("\nseed=7\n") != std::string::npos);

  RunConfig back;
  back.load_text(text);
  std::ostringstream again;
  back.write(again);
  CHECK(again.str() == text);
}
