// Copyright 2026 The cachemimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cachemimo/selftest.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>

#include "cachemimo/cache_placement.hpp"
#include "cachemimo/channel_estimation.hpp"
#include "cachemimo/harness.hpp"
#include "cachemimo/precoding.hpp"
#include "cachemimo/rng.hpp"
#include "cachemimo/system_model.hpp"

namespace cachemimo {

namespace {

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

}  // namespace

SelftestReport run_selftest() {
  SelftestReport report;
  auto check = [&](const char* name, const std::function<bool()>& fn) {
    bool ok = false;
    std::string why;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    report.ok = report.ok && ok;
    report.text += std::string(ok ? "PASS " : "FAIL ") + name + why + "\n";
  };

  check("pathloss", [] {
    return close(model::pathloss(1.0, 3.8), 0.5, 1e-15) &&
           close(model::pathloss(0.0, 3.8), 1.0, 1e-15) &&
           close(model::pathloss(2.0, 2.0), 0.2, 1e-15);
  });

  check("zipf-normalized", [] {
    const auto row = model::zipf_row(100, 0.6);
    double s = 0.0;
    for (double v : row) s += v;
    return close(s, 1.0, 1e-12) && row[0] > row[1];
  });

  check("estimation-variance", [] {
    // p tau beta^2 / (1 + p tau (beta + contamination))
    return close(channel::beta_hat(0.5, 0.25, 2.0, 4), 2.0 / 7.0, 1e-14);
  });

  check("g-function-zero-load", [] {
    const auto g = precoding::g_function(0.0, 0.5);
    return close(g.G, 2.0, 1e-14) && close(g.G_bar, 4.0, 1e-14);
  });

  check("g-function-fixed-point", [] {
    // G solves G = 1 / (alpha + x / (1 + G)) for the resolvent of a load-x Gram.
    for (double x : {0.3, 1.0, 2.5}) {
      for (double a : {1e-3, 0.1, 1.0, 10.0}) {
        const auto g = precoding::g_function(x, a);
        if (!close(g.G, 1.0 / (a + x / (1.0 + g.G)), 1e-10)) return false;
        const double h = a * 1e-5;
        const double d = (precoding::g_function(x, a - h).G - precoding::g_function(x, a + h).G) / (2 * h);
        if (!close(g.G_bar, d, 1e-5)) return false;
      }
    }
    return true;
  });

  check("g-function-vs-random-matrix", [] {
    RandomStream rng(derive_seed(7, 0, 0, StreamPurpose::kTest));
    const double emp = precoding::empirical_resolvent_trace(400, 0.5, 0.2, rng);
    return close(emp, precoding::g_function(0.5, 0.2).G, 0.02);
  });

  check("uncoded-probabilities", [] {
    model::PopularityProfile pop;
    pop.q_r = {{0.5, 0.5}};
    const auto q = cache::uncoded_probabilities(pop, {{0.5, 0.5}});
    return close(q.q_a[0], 0.5, 1e-15) && close(q.q_n[0], 0.1875, 1e-15) &&
           close(q.q_i[0][0], 0.1875, 1e-15);
  });

  check("coded-probabilities", [] {
    const auto p = cache::coded_probabilities(10, 2);
    return p.p_same == 1.0 && close(p.p_other, 7.0 / 9.0, 1e-15);
  });

  check("zf-nulls-interference", [] {
    RandomStream rng(derive_seed(7, 1, 0, StreamPurpose::kTest));
    CMatrix Q(8, 3);
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 3; ++c) Q(r, c) = rng.complex_normal();
    }
    const auto w = precoding::zf(Q, 1.0).w;
    return std::abs(Q.col(1).dot(w)) < 1e-10 && std::abs(Q.col(2).dot(w)) < 1e-10 &&
           std::abs(Q.col(0).dot(w)) > 1e-3;
  });

  check("tiny-simulation", [] {
    sim::ExperimentPlan plan;
    plan.system.B = 2;
    plan.system.K = 4;
    plan.system.M = 8;
    plan.system.L_s = 10;
    plan.system.L_u = 2;
    plan.system.tau = 4;
    plan.system.eta = {0.6, 0.5};
    plan.schemes = sim::default_schemes(plan.mode);
    plan.precoders = {precoding::PrecoderKind::kMRT, precoding::PrecoderKind::kZF,
                      precoding::PrecoderKind::kRZF};
    plan.sweep_values = {2.0};
    plan.trials_topology = 2;
    plan.trials_fading_per_topology = 2;
    plan.closed_form_topologies = 4;
    const auto rows = sim::run_experiment(plan);
    for (const auto& r : rows) {
      if (r.formula != "montecarlo" && r.formula.find("-lb") == std::string::npos &&
          r.formula.find("asym") == std::string::npos && r.formula != "montecarlo-cellavg") {
        return false;
      }
      if (r.trials > 0 && !std::isfinite(r.ecdr_mean)) return false;
    }
    return rows.size() == 2 * 3 * 4;
  });

  return report;
}

}  // namespace cachemimo
