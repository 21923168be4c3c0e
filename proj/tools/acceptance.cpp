// Copyright 2026 The stabsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>

#include "stabsw/validation.hpp"

using namespace stabsw;

namespace {

struct Verdict {
  bool passed = false;
  std::string measured;
};

using Clock = std::chrono::steady_clock;

// sum_j c * (letters at sites j + offset), periodic ring
PauliSum ring_sum(std::size_t n, std::initializer_list<std::pair<int, char>> sites, Complex c) {
  PauliSum s(n);
  for (std::size_t j = 0; j < n; ++j) {
    PauliTerm t(n);
    for (auto [off, letter] : sites) t.set((j + n + static_cast<std::size_t>(off + static_cast<int>(n))) % n, letter);
    s.push_back(t, c);
  }
  return canonicalize(s);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

RunConfig config(const std::string& command, const std::string& text) {
  auto c = parse_config(text, command);
  c.threads = 1;
  return c;
}

// Onset at order M recomputed on another grid from unit-coupling series.
std::optional<double> onset_on(const LoopFamily& f, const std::vector<double>& grid, std::size_t order, double threshold) {
  std::vector<PerimeterFit> fits;
  for (double j : grid) {
    std::vector<double> v;
    for (const auto& s : f.series) v.push_back(cumulative_at(s, j)[order]);
    fits.push_back(perimeter_fit(f.circumference, v));
  }
  return deviation_onset(grid, fits, threshold);
}

const LoopFamily& family(const LoopAnalysis& a, const std::string& name) {
  for (const auto& f : a.families)
    if (f.family == name && f.layer == 0) return f;
  throw std::logic_error("no loop family " + name);
}

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> g;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) g.push_back(start + static_cast<double>(i) * step);
  return g;
}

std::string grid_text(double start, double stop, double step) {
  std::string s;
  for (double v : grid(start, stop, step)) s += (s.empty() ? "" : ",") + fmt_coupling(v);
  return s;
}

std::string show(const std::optional<double>& v) { return v ? num(*v) : "none"; }

// Pinned tolerances.
constexpr double kAnalyticTol = 1e-12;      // 1: <Z> = 1 - h^2/8
constexpr double kExactCoeffTol = 1e-14;    // 2, 3: rational coefficients
constexpr double kOracleTolM6 = 1e-4;       // 5
constexpr double kSlopeBand = 0.3;          // 6: slope in [M + 0.7, M + 1.3]
constexpr double kPerimeterResidual = 0.05; // 8
constexpr double kOnsetThreshold = 0.5;     // 8-10, log units
constexpr double kEquivalenceTol = 1e-12;   // 12

// kagome series are shared between criteria 10 and 12
std::map<std::string, LoopAnalysis> g_kagome;

const LoopAnalysis& kagome(const std::string& pert, std::size_t order) {
  const std::string key = pert + std::to_string(order);
  if (auto it = g_kagome.find(key); it != g_kagome.end()) return it->second;
  auto c = config("kagome", "extents = 6x6\nJ = 0.1\norder = " + std::to_string(order) + "\nperturbation = " + pert + "\n");
  return g_kagome.emplace(key, analyze_loops(c)).first->second;
}

Verdict criterion1() {
  auto c = config("tfim", "n = 100\nh = 0.1, 0.2, 0.3\norder = 2\nobservables = Z0\n");
  const auto a = analyze_tfim(c);
  double worst = 0.0;
  for (double h : c.couplings) worst = std::max(worst, std::abs(cumulative_at(a.series[0], h)[2] - (1.0 - h * h / 8.0)));
  return {worst <= kAnalyticTol, "max |<Z> - (1 - h^2/8)| = " + num(worst) + " (tol " + num(kAnalyticTol) + ")"};
}

SWGenerator ti_last_generator(const LatticeModel& m, std::size_t order) {
  SolveOptions o;
  o.tie_break = TieBreak::kLast;
  return build_generator_ti(m.h0, m.h1_unit, order, m.translations, o);
}

Verdict criterion2() {
  const std::size_t n = 100;
  const auto m = build_tfim_chain(n, 1.0, TfimState::kAllUp);
  const auto g = ti_last_generator(m, 2);
  const Complex i(0.0, 1.0);
  const auto s1 = ring_sum(n, {{-1, 'Z'}, {0, 'Y'}}, -i / 4.0);
  const auto s2 = add(ring_sum(n, {{-1, 'Z'}, {0, 'X'}, {1, 'Y'}}, -3.0 * i / 32.0), ring_sum(n, {{0, 'Y'}, {1, 'X'}, {2, 'Z'}}, -i / 32.0));
  const double d = std::max(max_coeff_diff(g.orders[0], s1), max_coeff_diff(g.orders[1], s2));
  const bool sizes = g.orders[0].size() == s1.size() && g.orders[1].size() == s2.size();
  return {sizes && d <= kExactCoeffTol, "max coefficient deviation " + num(d) + ", term counts " +
                                            std::to_string(g.orders[0].size()) + "/" + std::to_string(g.orders[1].size())};
}

Verdict criterion3() {
  const std::size_t n = 100;
  const auto m = build_tfim_chain(n, 1.0, TfimState::kAllUp);
  const auto g = ti_last_generator(m, 2);
  const auto th = transformed_orders(m.h0, m.h1_unit, g, 2);
  const auto h1 = add(ring_sum(n, {{0, 'X'}}, -0.5), ring_sum(n, {{-1, 'Z'}, {0, 'X'}, {1, 'Z'}}, 0.5));
  const auto h2 = add(add(ring_sum(n, {{0, 'Z'}, {1, 'Z'}}, -0.25), ring_sum(n, {{0, 'Y'}, {1, 'Y'}}, 0.125)),
                      ring_sum(n, {{-1, 'Z'}, {0, 'X'}, {1, 'X'}, {2, 'Z'}}, 0.125));
  const double d = std::max(max_coeff_diff(th.orders[0], h1), max_coeff_diff(th.orders[1], h2));
  const bool sizes = th.orders[0].size() == h1.size() && th.orders[1].size() == h2.size();
  return {sizes && d <= kExactCoeffTol, "max coefficient deviation " + num(d) + " over H^(1), H^(2)"};
}

Verdict criterion4() {
  const std::size_t n = 12, order = 6;
  const auto m = build_tfim_chain(n, 1.0, TfimState::kGhz);
  const auto g = build_generator_ti(m.h0, m.h1_unit, order, m.translations);
  GroundStateEvaluator eval(m.gs);
  Conjugator conj(g, order);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (auto v : expectation_from_orders("", conj.expand(PauliSum::from_term(PauliTerm::sparse(n, {{j, 'Z'}}))), eval).orders)
      worst = std::max(worst, std::abs(v));
  return {worst == 0.0, "max |<Z_j>^(m)| over j, m <= 6: " + num(worst) + " (required exactly 0)"};
}

Verdict criterion5() {
  auto c = config("tfim", "n = 12\nh = 0.2\norder = 6\nobservables = Z0\ned_compare = true\nmax_distance = 1\n");
  const auto a = analyze_tfim(c);
  const auto cum = cumulative_at(a.series[0], 0.2);
  const double exact = a.ed[0].at("Z0");
  const double e2 = std::abs(cum[2] - exact), e4 = std::abs(cum[4] - exact), e6 = std::abs(cum[6] - exact);
  return {e2 > e4 && e4 > e6 && e6 <= kOracleTolM6,
          "|error| at M=2,4,6: " + num(e2) + ", " + num(e4) + ", " + num(e6) + " (tol " + num(kOracleTolM6) + ")"};
}

Verdict criterion6() {
  const auto checks = check_sw_residual_scaling({});
  bool ok = true;
  std::string s = "slopes";
  for (std::size_t m = 1; m <= checks.size(); ++m) {
    const double slope = checks[m - 1].measured;
    ok = ok && std::abs(slope - static_cast<double>(m + 1)) <= kSlopeBand;
    s += " M=" + std::to_string(m) + ": " + num(slope);
  }
  return {ok, s};
}

Verdict criterion7() {
  ValidationOptions o;
  o.trials = 200;
  const auto r = check_destabilizer_identity(o);
  return {r.passed, num(r.measured) + " failing of 200 random sets, N <= 10"};
}

Verdict criterion8() {
  auto c = config("toric", "extents = 6x6\norder = 4\nh = " + grid_text(0.01, 0.6, 0.01) + "\n");
  const auto a = analyze_loops(c);
  const auto& f = family(a, "x_loop");
  const auto fit = perimeter_fit(f.circumference, [&] {
    std::vector<double> v;
    for (const auto& s : f.series) v.push_back(cumulative_at(s, 0.10)[4]);
    return v;
  }());
  double worst = 0.0;
  for (double r : fit.residuals) worst = std::max(worst, std::abs(r));
  const bool fit_ok = fit.valid && worst <= kPerimeterResidual;
  const bool onset_ok = f.onset && *f.onset >= 0.25 && *f.onset <= 0.40;
  return {fit_ok && onset_ok, "h=0.10 max |residual| " + num(worst) + " (tol " + num(kPerimeterResidual) + "); onset " +
                                  show(f.onset) + " (required [0.25, 0.40])"};
}

Verdict criterion9() {
  auto c = config("bilayer", "extents = 6x6\norder = 2\nJ = " + grid_text(0.01, 2.0, 0.01) + "\n");
  const auto a = analyze_loops(c);
  const auto& f = family(a, "x_loop");
  const bool ok = f.onset && *f.onset >= 0.45 && *f.onset <= 0.65;
  return {ok, "onset " + show(f.onset) + " (required [0.45, 0.65])"};
}

Verdict criterion10() {
  const auto neg = grid(-0.6, -0.005, 0.005), pos = grid(0.005, 0.6, 0.005);
  const auto xx_fm = onset_on(family(kagome("xx_ising", 4), "z_loop"), neg, 4, kOnsetThreshold);
  const auto xx_afm = onset_on(family(kagome("xx_ising", 4), "z_loop"), pos, 4, kOnsetThreshold);
  const auto zz_fm = onset_on(family(kagome("zz_ising", 4), "x_loop"), neg, 4, kOnsetThreshold);
  const auto hx = onset_on(family(kagome("heisenberg", 2), "x_loop"), pos, 2, kOnsetThreshold);
  const auto hz = onset_on(family(kagome("heisenberg", 2), "z_loop"), pos, 2, kOnsetThreshold);
  auto in = [](const std::optional<double>& v, double lo, double hi) { return v && std::abs(*v) >= lo && std::abs(*v) <= hi; };
  const bool a = in(xx_fm, 0.06, 0.11);
  const bool b = in(zz_fm, 0.11, 0.18);
  const bool c = xx_fm && xx_afm && *xx_afm > std::abs(*xx_fm);
  // "near 0.1" read as: both Heisenberg onsets within a factor 2 of 0.1
  const bool d = hx && hz && std::max(*hx, *hz) <= 1.5 * std::min(*hx, *hz) && in(hx, 0.05, 0.2) && in(hz, 0.05, 0.2);
  return {a && b && c && d, std::string("XX-FM ") + show(xx_fm) + (a ? " ok" : " out of [0.06, 0.11]") + "; ZZ-FM " +
                                show(zz_fm) + (b ? " ok" : " out of [0.11, 0.18]") + "; XX-AFM " + show(xx_afm) +
                                (c ? " > XX-FM ok" : " not above XX-FM") + "; Heisenberg x/z " + show(hx) + "/" + show(hz) +
                                (d ? " ok" : " (need ratio <= 1.5 and both in [0.05, 0.2])")};
}

Verdict criterion11() {
  auto c = config("tfim", "n = 16\nh = 1.8, 1.5, 1.3, 1.2\norder = 6\nstate = all_right\nobservables = X0\nmax_distance = 5\n");
  const auto a = analyze_tfim(c);
  std::vector<double> xi;
  std::string s = "xi_3 at h=1.8,1.5,1.3,1.2:";
  for (double h : c.couplings) {
    const double lambda = 1.0 / h;
    xi.push_back(correlation_length(cumulative_at(a.correlations[2], lambda).back(), cumulative_at(a.correlations[3], lambda).back()));
    s += " " + num(xi.back());
  }
  bool ok = true;
  for (std::size_t k = 1; k < xi.size(); ++k) ok = ok && xi[k] > xi[k - 1];
  return {ok, s};
}

std::vector<OrderSeries> loop_series(const LoopAnalysis& a) {
  std::vector<OrderSeries> out;
  for (const auto& f : a.families)
    for (const auto& s : f.series) out.push_back(s);
  return out;
}

Verdict criterion12() {
  const auto te = check_translation_equivalence({});
  const auto pd = check_pauli_dense_equivalence({});
  // tie-break invariance over the observables read by criteria 1-11
  double tb = 0.0;
  auto both = [&](const std::string& command, const std::string& text, auto&& series) {
    auto first = config(command, text + "tie_break = first\n"), last = config(command, text + "tie_break = last\n");
    tb = std::max(tb, detail::series_diff(series(first), series(last)));
  };
  auto tfim = [](const RunConfig& c) {
    auto a = analyze_tfim(c);
    auto s = a.series;
    s.insert(s.end(), a.correlations.begin(), a.correlations.end());
    return s;
  };
  auto loops = [](const RunConfig& c) { return loop_series(analyze_loops(c)); };
  both("tfim", "n = 12\nh = 0.2\norder = 6\nobservables = Z0, X0\nmax_distance = 2\n", tfim);
  both("tfim", "n = 12\nh = 0.2\norder = 6\nstate = ghz\nobservables = Z0, X0\nmax_distance = 2\n", tfim);
  both("tfim", "n = 16\nh = 1.5\norder = 6\nstate = all_right\nobservables = X0\nmax_distance = 5\n", tfim);
  both("toric", "extents = 6x6\nh = 0.1\norder = 4\n", loops);
  both("bilayer", "extents = 6x6\nJ = 0.5\norder = 2\n", loops);
  for (const char* p : {"zz_ising", "heisenberg"})
    both("kagome", std::string("extents = 6x6\nJ = 0.1\nperturbation = ") + p + "\norder = " + (p[0] == 'z' ? "4" : "2") + "\n", loops);
  {
    // the xx expansion is the slowest; reuse the last-choice run from criterion 10 if present
    auto first = config("kagome", "extents = 6x6\nJ = 0.1\nperturbation = xx_ising\norder = 4\ntie_break = first\n");
    tb = std::max(tb, detail::series_diff(loop_series(analyze_loops(first)), loop_series(kagome("xx_ising", 4))));
  }
  const bool ok = te.measured <= kEquivalenceTol && pd.measured <= kEquivalenceTol && tb <= kEquivalenceTol;
  return {ok, "TI vs explicit " + num(te.measured) + ", tie-break " + num(tb) + ", dense Pauli algebra " + num(pd.measured) +
                  " (tol " + num(kEquivalenceTol) + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"tfim_order2_closed_form", criterion1},   {"tfim_generators_s1_s2", criterion2},
      {"tfim_transformed_h2", criterion3},       {"ghz_magnetization_zero", criterion4},
      {"oracle_convergence_n12", criterion5},    {"residual_scaling_n8", criterion6},
      {"destabilizer_identity", criterion7},     {"toric_perimeter_and_onset", criterion8},
      {"bilayer_onset", criterion9},             {"kagome_onsets", criterion10},
      {"pm_correlation_length_trend", criterion11}, {"equivalence_suites", criterion12}};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!v.passed) ++failures;
    std::printf("%s %2zu %-28s %s [%.1fs]\n", v.passed ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), v.measured.c_str(), secs);
    std::fflush(stdout);
  }
  return failures;
}
