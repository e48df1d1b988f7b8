#include <gtest/gtest.h>   // testing framework

#include "vmlfn/config.hpp"

using namespace vmlfn;

namespace {

const char* kHelmholtzConfig = R"({
  "schema": 1,
  "case": {
    "kind": "helmholtz",
    "domain": {"lo": [0, 0, 0], "hi": [10, 10, 2]},
    "dirichlet_faces": ["z-"],
    "k": 1.4,
    "source": {"type": "mms"}
  },
  "basis": {"n_hidden": 2000, "omega_min": 0.05, "gamma": 5.0, "seed": 2026},
  "scan": {"candidates_lo": 0.01, "candidates_hi": 4.0, "candidates_count": 15,
           "n_scan": 800, "n_holdout": 400, "alpha_penalty": 1e-3},
  "solver": {"beta": 1e-4, "precision": "fp32"},
  "points": {"n_interior": 8000, "strategy": "grid"},
  "oracle": {"type": "mms-polynomial"}
})";

}  // namespace

TEST(config, parses_reference_helmholtz) {
    RunConfig c = RunConfig::from_string(kHelmholtzConfig);
    EXPECT_EQ(c.pde.kind, "helmholtz");
    EXPECT_EQ(c.basis.n_hidden, 2000);
    EXPECT_EQ(c.basis.seed, 2026u);
    EXPECT_EQ(c.precision, Precision::fp32);
    EXPECT_EQ(c.strategy, SampleStrategy::grid);
    ASSERT_TRUE(c.scan.has_value());
    EXPECT_FALSE(c.fixed_omega.has_value());
    auto cands = c.scan->resolve();
    EXPECT_EQ(cands.size(), 15u);
    EXPECT_DOUBLE_EQ(cands.front(), 0.01);
    EXPECT_DOUBLE_EQ(cands.back(), 4.0);
    PdeCase pde = c.build_case();
    EXPECT_EQ(pde.kind, PdeCase::Kind::helmholtz);
    EXPECT_DOUBLE_EQ(pde.k, 1.4);
}

TEST(config, roundtrip_identity) {
    RunConfig c = RunConfig::from_string(kHelmholtzConfig);
    const std::string dumped = c.to_json_string();
    RunConfig c2 = RunConfig::from_string(dumped);
    EXPECT_EQ(c2.to_json_string(), dumped);   // parse -> serialize fixed point
    EXPECT_EQ(c2.basis.seed, c.basis.seed);
    EXPECT_EQ(c2.n_interior, c.n_interior);
}

TEST(config, unknown_keys_rejected) {
    std::string bad = kHelmholtzConfig;
    bad.replace(bad.find("\"schema\": 1"), 11, "\"schema\": 1, \"typo_key\": 3");
    EXPECT_THROW(RunConfig::from_string(bad), ConfigError);
    // nested unknown key
    std::string bad2 = kHelmholtzConfig;
    bad2.replace(bad2.find("\"k\": 1.4"), 8, "\"k\": 1.4, \"wavenumber\": 2");
    EXPECT_THROW(RunConfig::from_string(bad2), ConfigError);
}

TEST(config, schema_version_enforced) {
    std::string bad = kHelmholtzConfig;
    bad.replace(bad.find("\"schema\": 1"), 11, "\"schema\": 2");
    EXPECT_THROW(RunConfig::from_string(bad), ConfigError);
}

TEST(config, exactly_one_of_scan_or_fixed_omega) {
    // both present
    std::string both = kHelmholtzConfig;
    both.replace(both.find("\"n_hidden\": 2000"), 16, "\"n_hidden\": 2000, \"omega_max\": 1.5");
    EXPECT_THROW(RunConfig::from_string(both), ConfigError);
    // neither
    RunConfig c = RunConfig::from_string(kHelmholtzConfig);
    std::string none = c.to_json_string();
    auto pos = none.find("\"scan\"");
    ASSERT_NE(pos, std::string::npos);
    // remove the scan object crudely by reparsing via nlohmann is overkill;
    // instead build a minimal config without either field
    const char* neither = R"({
      "schema": 1,
      "case": {"kind": "heat", "domain": {"lo": [0,0,0], "hi": [1,1,1]},
               "dirichlet_faces": ["z-"], "kappa": 60.0,
               "source": {"type": "constant", "value": 1.0}},
      "basis": {"n_hidden": 64, "seed": 1}
    })";
    EXPECT_THROW(RunConfig::from_string(neither), ConfigError);
}

TEST(config, malformed_json_is_config_error) {
    EXPECT_THROW(RunConfig::from_string("{ not json"), ConfigError);
    EXPECT_THROW(RunConfig::from_file("/nonexistent/path.json"), ConfigError);
}

TEST(config, missing_grid_file_rejected_at_load) {
    const char* cfg = R"({
      "schema": 1,
      "case": {"kind": "heat", "domain": {"lo": [0,0,0], "hi": [1,1,1]},
               "dirichlet_faces": ["z-"], "kappa": 60.0,
               "source": {"type": "grid", "path": "/no/such/file.grid"}},
      "basis": {"n_hidden": 64, "seed": 1, "omega_max": 1.0}
    })";
    EXPECT_THROW(RunConfig::from_string(cfg), ConfigError);
}

TEST(config, gaussian_source_builds) {
    const char* cfg = R"({
      "schema": 1,
      "case": {"kind": "heat", "domain": {"lo": [0,0,0], "hi": [0.01,0.01,0.002]},
               "dirichlet_faces": ["z-"], "dirichlet_value": 293.15, "kappa": 60.0,
               "source": {"type": "gaussian", "amplitude": 3e8,
                          "center": [5e-3, 5e-3, 1.6e-3],
                          "sigma": [1.5e-3, 1.5e-3, 5e-4]}},
      "basis": {"n_hidden": 64, "seed": 1, "omega_max": 2.0},
      "solver": {"beta": 1e-2}
    })";
    RunConfig c = RunConfig::from_string(cfg);
    PdeCase pde = c.build_case();
    Vector center(3);
    center << 5e-3, 5e-3, 1.6e-3;
    EXPECT_NEAR(pde.coeffs.f(center), 3e8, 1e-6 * 3e8);
    EXPECT_DOUBLE_EQ(pde.boundary.dirichlet_offset(), 293.15);
}

TEST(config, elasticity_layers) {
    const char* cfg = R"({
      "schema": 1,
      "case": {"kind": "elasticity",
               "domain": {"lo": [0,0,0], "hi": [0.01,0.01,0.002]},
               "layers": [
                 {"z": [0, 4e-4], "E": 4e11, "nu": 0.14, "alpha": 5e-6},
                 {"z": [4e-4, 1.2e-3], "E": 1.627e11, "nu": 0.28, "alpha": 3e-6},
                 {"z": [1.2e-3, 2e-3], "E": 1.296e11, "nu": 0.28, "alpha": 8e-6}],
               "delta_t": {"type": "constant", "value": 50.0}},
      "basis": {"n_hidden": 128, "seed": 3, "omega_max": 0.8},
      "solver": {"beta": 1e-10, "beta_mode": "trace-relative"}
    })";
    RunConfig c = RunConfig::from_string(cfg);
    ASSERT_TRUE(c.is_elasticity());
    LayeredMaterial mat = c.build_material();
    EXPECT_EQ(mat.layers().size(), 3u);
    EXPECT_DOUBLE_EQ(mat.at(1e-3).e_modulus, 1.627e11);
    SpatialFn dt = c.pde.delta_t.build(3);
    Vector x = Vector::Zero(3);
    EXPECT_DOUBLE_EQ(dt(x), 50.0);
}

TEST(config, parametric_requires_range) {
    const char* cfg = R"({
      "schema": 1,
      "case": {"kind": "parametric-4d", "domain": {"lo": [0,0,0], "hi": [1,1,1]},
               "dirichlet_faces": ["z-"],
               "source": {"type": "constant", "value": 1.0}},
      "basis": {"n_hidden": 64, "seed": 1, "omega_max": 1.0}
    })";
    EXPECT_THROW(RunConfig::from_string(cfg), ConfigError);
}
