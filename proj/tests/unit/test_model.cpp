// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <set>

#include "taskhbf/channel.hpp"
#include "taskhbf/config.hpp"
#include "taskhbf/geometry.hpp"

using namespace taskhbf;

TEST_CASE("steering vector at broadside is all ones") {
  const CVec a = steering_vector(10e9, 0.0, 4, 0.01);
  for (int m = 0; m < 4; ++m) CHECK(std::abs(a(m) - cdouble(1.0, 0.0)) < 1e-15);
}

TEST_CASE("steering vector at endfire with half-wavelength spacing alternates") {
  const double fc = 10e9;
  const CVec a = steering_vector(fc, 90.0, 4, kSpeedOfLight / (2.0 * fc));
  const double expect[4] = {1, -1, 1, -1};
  for (int m = 0; m < 4; ++m) CHECK(std::abs(a(m) - cdouble(expect[m], 0.0)) < 1e-12);
}

TEST_CASE("steering vector matches per-element phase evaluation") {
  const double f = 10e9, d = 0.0133, theta = 30.0;
  const CVec a = steering_vector(f, theta, 8, d);
  for (int m = 0; m < 8; ++m) {
    const double phase = 2.0 * kPi * f * m * d * 0.5 / kSpeedOfLight;
    CHECK(std::abs(a(m) - std::polar(1.0, phase)) < 1e-12);
    CHECK(std::abs(std::abs(a(m)) - 1.0) < 1e-12);
  }
}

TEST_CASE("ofdm spacing equals half wavelength at the top of the band") {
  const ScenarioConfig cfg = make_preset("ofdm_B");
  CHECK(cfg.d == doctest::Approx(0.0133).epsilon(1e-3));
  CHECK(cfg.delta_f() == doctest::Approx(80e6));
  CHECK(cfg.delta_t() == doctest::Approx(12.5e-9));
}

TEST_CASE("subcarrier frequencies follow the zero-based offset rule") {
  ScenarioConfig cfg = make_preset("desk");
  const auto f = cfg.subcarrier_frequencies();
  REQUIRE(f.size() == 4u);
  for (int k = 0; k < cfg.K; ++k) CHECK(f[k] == doctest::Approx(cfg.f_c + (k + 1 - cfg.K / 2.0) * cfg.delta_f()));
  CHECK(f.back() - f.front() == doctest::Approx((cfg.K - 1) * cfg.delta_f()));
  CHECK(cfg.delta_f() * cfg.delta_t() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("angle grids partition the evaluation grid") {
  for (const auto& name : preset_names()) {
    const ScenarioConfig cfg = make_preset(name);
    const AngleGrids& g = cfg.grid;
    CHECK(g.full_grid.size() == 361u);
    std::set<double> main(g.theta_main.begin(), g.theta_main.end());
    std::set<double> side(g.theta_side.begin(), g.theta_side.end());
    for (double s : side) CHECK(main.count(s) == 0);
    CHECK(g.theta_main.size() + g.theta_side.size() + g.theta_trans.size() == g.full_grid.size());
    CHECK(!g.theta_main.empty());
    CHECK(!g.theta_side.empty());
  }
}

TEST_CASE("beampattern B has a 10 degree mainlobe and sidelobes beyond 13 degrees") {
  const AngleGrids g = make_preset("ofdm_B").grid;
  CHECK(g.theta_main.front() == doctest::Approx(-10.0));
  CHECK(g.theta_main.back() == doctest::Approx(10.0));
  CHECK(g.theta_main.size() == 41u);
  CHECK(g.theta_trans.size() == 10u);
  CHECK(g.theta_side.size() == 310u);
}

TEST_CASE("config json round trip and override") {
  ScenarioConfig cfg = make_preset("desk");
  cfg.task = Task::TargetTrack;
  const ScenarioConfig back = config_from_json_text(config_to_json_text(cfg));
  CHECK(back.M_t == cfg.M_t);
  CHECK(back.task == Task::TargetTrack);
  CHECK(back.d == doctest::Approx(cfg.d));
  CHECK(back.grid.theta_side.size() == cfg.grid.theta_side.size());
  CHECK(back.rho[0] == cfg.rho[0]);

  apply_override(cfg, "chi=1.5");
  CHECK(cfg.chi(0, 0) == 1.5);
  apply_override(cfg, "task=sd");
  CHECK(cfg.task == Task::ScanDetect);
  apply_override(cfg, "rho=[2,3,4,5]");
  CHECK(cfg.rho[2][0] == 4.0);
  CHECK_THROWS_AS(apply_override(cfg, "nonsense=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "no_equals_sign"), ConfigError);
}

TEST_CASE("unknown config keys are rejected") {
  std::string text = config_to_json_text(make_preset("desk"));
  text.insert(text.find('{') + 1, "\"surprise\": 1,");
  CHECK_THROWS_AS(config_from_json_text(text), ConfigError);
}

TEST_CASE("config validation catches broken invariants") {
  ScenarioConfig cfg = make_preset("desk");
  cfg.N_t = 1;  // fewer RF chains than users
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = make_preset("desk");
  cfg.rho[1][0] = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = make_preset("desk");
  cfg.P_k[2] = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(make_preset("nope"), ConfigError);
}

TEST_CASE("single broadside ray gives an all-ones channel") {
  ScenarioConfig cfg = make_preset("desk");
  cfg.K = 1;
  cfg.set_uniform_power(1.0);
  cfg.set_uniform_chi(1.0);
  cfg.set_uniform_rho(1, 1, 1, 1);
  cfg.L = 1;
  cfg.N_ray = 1;
  std::vector<std::vector<Ray>> rays(static_cast<std::size_t>(cfg.U), std::vector<Ray>{Ray{0, {1.0, 0.0}, 0.0, 0.0}});
  const ChannelSet ch = build_channel(cfg, rays);
  const CMat& H = ch.at(0, 0);
  CHECK(H.rows() == cfg.M_r);
  CHECK(H.cols() == cfg.M_t);
  CHECK((H - CMat::Ones(cfg.M_r, cfg.M_t)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("channel generation is deterministic in the seed") {
  const ScenarioConfig cfg = make_preset("desk");
  const ChannelSet a = generate_channel(cfg);
  const ChannelSet b = generate_channel(cfg);
  for (std::size_t i = 0; i < a.H.size(); ++i) CHECK(a.H[i] == b.H[i]);
  ScenarioConfig other = cfg;
  other.seed = cfg.seed + 1;
  CHECK(generate_channel(other).H[0] != a.H[0]);
}

TEST_CASE("average channel energy matches the antenna product") {
  ScenarioConfig cfg = make_preset("desk");
  std::mt19937_64 rng(2024);
  double acc = 0.0;
  int count = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const ChannelSet ch = generate_channel(cfg, rng);
    acc += ch.at(draw % cfg.K, draw % cfg.U).squaredNorm();
    ++count;
  }
  const double mean = acc / count;
  CHECK(mean == doctest::Approx(cfg.M_t * cfg.M_r).epsilon(0.10));
}
