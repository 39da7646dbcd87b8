#include "test_main.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subres/commands.hpp"
#include "subres/errors.hpp"

using namespace subres;
using io::json;

namespace {

const std::string kGolden = SUBRES_GOLDEN_DIR;

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    io::parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

// Same structure; numbers equal to a relative tolerance.
void compare(const json& a, const json& b, const std::string& where, double tol) {
  CAPTURE(where);
  REQUIRE(a.type_name() == std::string(b.type_name()));
  if (a.is_object()) {
    REQUIRE(a.size() == b.size());
    for (const auto& [k, v] : a.items()) {
      REQUIRE(b.contains(k));
      compare(v, b[k], where + "." + k, tol);
    }
  } else if (a.is_array()) {
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) compare(a[k], b[k], where + "[" + std::to_string(k) + "]", tol);
  } else if (a.is_number_float() || b.is_number_float()) {
    const double x = a.get<double>(), y = b.get<double>();
    CHECK(std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300}) + 1e-14);
  } else {
    CHECK(a == b);
  }
}

}  // namespace

TEST_CASE("config round trip is idempotent") {
  for (const char* name : {"single.json", "pair.json"}) {
    const auto once = io::to_json(io::parse_config(read(kGolden + "/" + name)));
    const auto twice = io::to_json(io::parse_config(once.dump()));
    CHECK(once == twice);
  }
  const std::string sweep = R"({
    // comments are allowed
    "resonators": [{"kind": "ellipse", "center": [0, 0], "semi_axes": [1.2, 0.6], "rotation": 0.3},
                   {"kind": "star", "center": [3.5, 0], "radius": 1.0, "amplitude": 0.2, "lobes": 5}],
    "delta": {"start": 1e-4, "stop": 1e-7, "points": 4},
    "F": 2, "Q": 40,
    "solver": {"eps_rel": 1e-11, "max_newton": 20, "branch_polish": false},
    "outputs": {"modes": true},
    "fields": {"bbox": [-2, 5, -2, 2], "resolution": [30, 20], "branches": [1, 2]},
    "convergence": {"F_ref": 5, "F_values": [1, 2]}
  })";
  const auto c = io::parse_config(sweep);
  CHECK(c.sweep.has_value());
  CHECK(c.Q == 40);
  CHECK(c.solver.eps_rel == 1e-11);
  CHECK_FALSE(c.solver.branch_polish);
  CHECK(c.fields.grid->nx == 30);
  CHECK(c.fields.grid->ny == 20);
  const auto j = io::to_json(c);
  CHECK(io::to_json(io::parse_config(j.dump())) == j);
  const auto v = c.sweep->values();
  REQUIRE(v.size() == 4);
  CHECK(v.front() == 1e-4);
  CHECK(v.back() == 1e-7);
  CHECK(std::abs(v[1] - 1e-5) < 1e-18);
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] < v[k - 1]);
}

TEST_CASE("Q auto and defaults") {
  const auto c = io::parse_config(R"({"resonators": [{"kind": "circle", "center": [0, 0], "radius": 1}],
                                      "delta": 1e-5, "F": 5})");
  CHECK_FALSE(c.Q.has_value());
  CHECK(c.system().Q == 36);
  CHECK(c.system(1e-6, 2).Q == 24);
  CHECK(c.fields.nx == 101);
}

TEST_CASE("config diagnostics") {
  const std::string circle = R"({"kind": "circle", "center": [0, 0], "radius": 1})";
  CHECK(error_of("{\n  \"resonators\": [\n    {\"kind\": \"circle\",, }\n  ]\n}").find("line 3") != std::string::npos);
  CHECK(error_of(R"({"resonators": [)" + circle + R"(], "delta": 1e-5, "Fx": 3})").find("config.Fx") !=
        std::string::npos);
  CHECK(error_of(R"({"resonators": [)" + circle + R"(], "delta": 2})").find("config.delta") != std::string::npos);
  CHECK(error_of(R"({"resonators": [)" + circle + R"(], "delta": 1e-5, "Q": 19})").find("config.Q") !=
        std::string::npos);
  CHECK(error_of(R"({"resonators": [)" + circle + R"(], "delta": 1e-5, "F": 3, "Q": 20})").find("4(F+4)") !=
        std::string::npos);
  CHECK(error_of(R"({"resonators": [{"kind": "circle", "center": [0, 0], "radius": -1}], "delta": 1e-5})")
            .find("resonators[0]") != std::string::npos);
  CHECK(error_of(R"({"resonators": [{"kind": "square", "center": [0, 0]}], "delta": 1e-5})").find("square") !=
        std::string::npos);
  CHECK(error_of(R"({"resonators": [)" + circle + R"(], "delta": {"start": 1e-8, "stop": 1e-4, "points": 3}})")
            .find("decreasing") != std::string::npos);
  CHECK(error_of(R"({"resonators": [)" + circle + R"(], "delta": 1e-5, "solver": {"eps_rel": -1}})")
            .find("config.solver.eps_rel") != std::string::npos);
  const auto overlap = error_of(read(std::string(SUBRES_CONFIG_DIR) + "/overlap_invalid.json"));
  CHECK(overlap.find("1 and 2") != std::string::npos);
  CHECK_THROWS_AS(io::load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("reports match the golden files") {
  for (const char* name : {"single", "pair"}) {
    const auto cfg = io::parse_config(read(kGolden + "/" + name + ".json"));
    const auto sys = cfg.system();
    const auto rep = solve(sys, cfg.solver);
    const auto j = io::report_json(rep, sys);
    const auto golden = json::parse(read(kGolden + "/" + name + "_report.json"));
    compare(j, golden, name, 1e-7);
    CHECK(j["schema"] == "subres-report/1");
    CHECK_FALSE(j.contains("timings"));
    for (const auto& b : j["branches"]) {
      CHECK(b.contains("seed"));
      CHECK(b.contains("effective"));
      CHECK(b.contains("refined"));
      CHECK(b["refined"]["sigma_min"].get<double>() < 1e-8);
      for (const auto& c : b["mode_coeffs"]) CHECK(c.size() == 2);
    }
    // bit-identical on a repeated run
    CHECK(io::report_json(solve(sys, cfg.solver), sys).dump() == j.dump());
    CHECK(io::report_json(rep, sys, true).contains("timings"));
  }
}

TEST_CASE("exit codes") {
  const auto cfg = io::parse_config(read(kGolden + "/pair.json"));
  const auto sys = cfg.system();
  auto rep = solve(sys, cfg.solver);
  CHECK(cmd::exit_code(rep) == cmd::kSuccess);
  rep.spurious.push_back(rep.accepted.back());
  rep.accepted.pop_back();
  CHECK(cmd::exit_code(rep) == cmd::kPartialFailure);
  rep.accepted.clear();
  CHECK(cmd::exit_code(rep) == cmd::kTotalFailure);
}

TEST_CASE("convergence tables") {
  auto cfg = io::parse_config(read(kGolden + "/pair.json"));
  cfg.convergence.F_values = {1, 2, 3};
  cfg.convergence.F_ref = 5;
  const auto t = cmd::converge_in_f(cfg);
  REQUIRE(t.params.size() == 3);
  REQUIRE(t.columns.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(t.errors[1][c] < t.errors[0][c]);
    CHECK(t.slopes[c] < 0.0);
  }
  const auto csv = t.csv();
  CHECK(csv.rfind("F,log_error,regular_1_error\n", 0) == 0);
  CHECK(csv.find("\nslope,") != std::string::npos);

  const auto d = cmd::converge_in_delta(cfg);
  CHECK(d.params.size() == 1);
  CHECK(std::isnan(d.slopes[0]));
  CHECK(d.csv().find("nan") != std::string::npos);

  CHECK(std::abs(cmd::fitted_slope({1e-2, 1e-4, 1e-6}, {1e-1, 1e-2, 1e-3}) - 0.5) < 1e-12);
  CHECK(std::abs(cmd::fitted_slope({0, 1, 2}, {1.0, 0.1, 0.01}, true) + 1.0) < 1e-12);
}

TEST_CASE("mode files") {
  auto cfg = io::parse_config(read(kGolden + "/pair.json"));
  cfg.fields.nx = 21;
  cfg.fields.ny = 11;
  cfg.fields.points_per_curve = 256;
  const auto sys = cfg.system();
  const auto rep = solve(sys, cfg.solver);
  const auto dir = (std::filesystem::temp_directory_path() / "subres_test_modes").string();
  const auto files = cmd::write_modes(cfg, rep, sys, dir);
  REQUIRE(files.files.size() == 2);
  const auto manifest = json::parse(read(dir + "/" + files.manifest));
  CHECK(manifest["branches"].size() == 2);
  const auto text = read(dir + "/" + files.files[0]);
  const auto eol = text.find('\n');
  REQUIRE(text.rfind("# ", 0) == 0);
  const auto header = json::parse(text.substr(2, eol - 2));
  CHECK(header["resolution"] == json::array({21, 11}));
  CHECK(header["branch"] == 1);
  CHECK(io::complex_from_json(header["omega"], "omega") == rep.accepted[0].omega);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 1 + 21 * 11);

  cfg.fields.branches = {3};
  try {
    cmd::write_modes(cfg, rep, sys, dir);
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("available: 1..2") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("complex pairs") {
  CHECK(io::complex_json(cplx(1.5, -2.0)) == json::array({1.5, -2.0}));
  CHECK(io::complex_from_json(json::array({0.25, 3.0}), "z") == cplx(0.25, 3.0));
  CHECK_THROWS_AS(io::complex_from_json(json::array({1.0}), "z"), ConfigError);
}
