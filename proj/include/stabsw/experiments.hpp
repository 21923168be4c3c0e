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

#pragma once

// Experiment runs behind the CLI: per-order series at unit coupling, evaluated
// on the coupling grid (H1 = lambda h1_unit makes order m scale as lambda^m).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "stabsw/config.hpp"
#include "stabsw/ed.hpp"
#include "stabsw/models.hpp"
#include "stabsw/observables.hpp"
#include "stabsw/sw.hpp"

namespace stabsw {

/// Runs f(0..count-1) on `workers` threads. Results go to caller-owned slots
/// by index, so output order never depends on scheduling. The first failing
/// index's exception is rethrown.
template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& f) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---- series helpers -----------------------------------------------------------

using OrderSeries = std::vector<Complex>;  // coefficient of lambda^m, m = 0..M

/// Partial sums sum_{k<=m} c_k lambda^k for m = 0..M (real parts).
inline std::vector<double> cumulative_at(const OrderSeries& s, double lambda) {
  std::vector<double> out;
  double acc = 0.0, p = 1.0;
  for (const auto& c : s) {
    acc += c.real() * p;
    out.push_back(acc);
    p *= lambda;
  }
  return out;
}

inline double max_imag(const OrderSeries& s) {
  double m = 0.0;
  for (auto c : s) m = std::max(m, std::abs(c.imag()));
  return m;
}

/// log<loop> = -alpha * circumference through the origin, fitted on the two
/// smallest loops; residuals are log<loop> - (-alpha c) for every loop.
struct PerimeterFit {
  bool valid = false;  // false when some <loop> <= 0
  double alpha = 0.0;
  std::vector<double> residuals;
  double largest_residual = 0.0;  // residual of the largest loop
};

inline PerimeterFit perimeter_fit(const std::vector<double>& circumference, const std::vector<double>& value) {
  if (circumference.size() != value.size()) throw SizeMismatch("perimeter fit inputs", circumference.size(), value.size());
  if (circumference.size() < 3) throw std::invalid_argument("perimeter fit needs at least three loops");
  if (!std::is_sorted(circumference.begin(), circumference.end()))
    throw std::invalid_argument("loops must be ordered by circumference");
  PerimeterFit f;
  for (double v : value)
    if (!(v > 0.0)) return f;
  std::vector<double> y;
  for (double v : value) y.push_back(std::log(v));
  const double num = circumference[0] * y[0] + circumference[1] * y[1];
  const double den = circumference[0] * circumference[0] + circumference[1] * circumference[1];
  f.alpha = -num / den;
  for (std::size_t i = 0; i < y.size(); ++i) f.residuals.push_back(y[i] + f.alpha * circumference[i]);
  f.largest_residual = f.residuals.back();
  f.valid = true;
  return f;
}

/// Smallest |coupling| whose largest-loop residual exceeds the threshold in
/// magnitude, or where the truncated <loop> is no longer positive.
inline std::optional<double> deviation_onset(const std::vector<double>& couplings, const std::vector<PerimeterFit>& fits,
                                             double threshold) {
  if (couplings.size() != fits.size()) throw SizeMismatch("onset inputs", couplings.size(), fits.size());
  std::vector<std::size_t> idx(couplings.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(couplings[a]) < std::abs(couplings[b]); });
  for (auto i : idx)
    if (!fits[i].valid || std::abs(fits[i].largest_residual) > threshold) return couplings[i];
  return std::nullopt;
}

// ---- shared engine ----------------------------------------------------------------

struct Engine {
  LatticeModel model;
  SWGenerator generator;
  std::unique_ptr<GroundStateEvaluator> eval;
  std::unique_ptr<Conjugator> conj;

  explicit Engine(const RunConfig& c) : model(build_unit_model(c)) {
    SolveOptions o;
    o.tie_break = c.tie_break;
    o.term_cap = c.term_cap;
    generator = c.translation_mode ? build_generator_ti(model.h0, model.h1_unit, c.order, model.translations, o)
                                   : build_generator(model.h0, model.h1_unit, c.order, o);
    eval = std::make_unique<GroundStateEvaluator>(model.gs);
    conj = std::make_unique<Conjugator>(generator, c.order, c.term_cap);
  }

  OrderSeries expectation(const PauliSum& o) { return expectation_from_orders("", conj->expand(o), *eval).orders; }

  OrderSeries connected(const PauliSum& a, const PauliSum& b) {
    return connected_from_orders("", conj->expand(a), conj->expand(b), *eval).orders;
  }
};

inline nlohmann::json generator_stats_json(const SWGenerator& g) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& s : g.stats) a.push_back({{"order", s.order}, {"v_terms", s.v_terms}, {"s_terms", s.s_terms}});
  return a;
}

inline nlohmann::json config_json(const RunConfig& c) {
  return {{"command", c.command},
          {"model", c.model},
          {"n", c.n},
          {"lx", c.lx},
          {"ly", c.ly},
          {"coupling_name", c.coupling_name},
          {"couplings", c.couplings},
          {"order", c.order},
          {"state", c.state},
          {"perturbation", c.perturbation},
          {"frame", c.frame},
          {"observables", c.observables},
          {"tie_break", c.tie_break == TieBreak::kLast ? "last" : "first"},
          {"mode", c.translation_mode ? "translation" : "explicit"},
          {"term_cap", c.term_cap},
          {"seed", c.seed},
          {"onset_threshold", c.onset_threshold}};
}

// ---- output -----------------------------------------------------------------------

inline std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_coupling(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : f_(path) {
    if (!f_) throw ConfigError("cannot write '" + path.string() + "'");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) f_ << (i ? "," : "") << cells[i];
    f_ << '\n';
  }

 private:
  std::ofstream f_;
};

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << j.dump(2) << '\n';
}

// ---- TFIM -------------------------------------------------------------------------

/// Ground state of h0 + lambda h1_unit by exact diagonalization, following the
/// branch of the model's reference state.
struct ExactReference {
  StateVector state;
  double energy = 0.0;
  std::string route;
};

inline StateVector reference_state(const GroundStateSpec& gs) {
  std::vector<SignedTerm> signed_gens;
  for (std::size_t i = 0; i < gs.stabilizers.size(); ++i) signed_gens.push_back({gs.stabilizers[i], gs.signs[i]});
  StateVector v = detail::seed_vector(Eigen::Index{1} << gs.nqubits);
  detail::project(detail::signed_sums(signed_gens), v);
  return v.normalized();
}

inline ExactReference tfim_exact_reference(const LatticeModel& unit, const std::string& state, double lambda) {
  const std::size_t n = unit.nqubits;
  PauliSum h = add(unit.h0.terms, scale(lambda, unit.h1_unit));
  std::vector<SignedTerm> sector;
  ExactReference r;
  if (state == "all_up" || state == "all_down") {
    std::vector<SignedTerm> pins;
    const int sign = state == "all_up" ? 1 : -1;
    for (std::size_t q = 0; q < n; ++q) pins.push_back({PauliTerm::sparse(n, {{q, 'Z'}}), sign});
    h = pinned(h, pins, kPinningField);
    r.route = "pinning field eps=1e-06 along " + std::string(sign > 0 ? "+Z" : "-Z") + " on every site";
  } else if (state == "ghz") {
    PauliTerm all_x(n);
    for (std::size_t q = 0; q < n; ++q) all_x.set(q, 'X');
    sector.push_back({all_x, 1});
    r.route = "sector prod X = +1";
  } else {
    r.route = "unique ground state";
  }
  const StateVector start = reference_state(unit.gs);
  auto gs = sector_ground_state(h, sector, &start);
  r.state = gs.state;
  r.energy = gs.energy;
  r.route += " (" + gs.method + ")";
  return r;
}

struct TfimAnalysis {
  LatticeModel model;
  SWGenerator generator;
  std::vector<std::string> names;
  std::vector<OrderSeries> series;                 // per observable
  std::vector<std::size_t> distances;              // YY connected correlators
  std::vector<OrderSeries> correlations;           // per distance
  std::vector<std::map<std::string, double>> ed;   // per grid point: observable -> exact value
  std::string ed_route;
};

inline TfimAnalysis analyze_tfim(const RunConfig& c) {
  Engine e(c);
  TfimAnalysis a;
  const std::size_t n = e.model.nqubits;
  a.names = c.observables;
  if (a.names.empty()) a.names = {"Z0", "X0"};
  for (const auto& name : a.names) a.series.push_back(e.expectation(resolve_observable(e.model, name)));
  const std::size_t dmax = c.max_distance ? std::min(c.max_distance, n / 2) : std::min<std::size_t>(n / 2, 8);
  const auto y0 = PauliSum::from_term(PauliTerm::sparse(n, {{0, 'Y'}}));
  auto y0_orders = e.conj->expand(y0);
  for (std::size_t d = 1; d <= dmax; ++d) {
    a.distances.push_back(d);
    auto yd = e.conj->expand(PauliSum::from_term(PauliTerm::sparse(n, {{d, 'Y'}})));
    a.correlations.push_back(connected_from_orders("", y0_orders, yd, *e.eval).orders);
  }
  if (c.ed_compare) {
    a.ed.resize(c.couplings.size());
    std::vector<std::string> routes(c.couplings.size());
    std::vector<PauliSum> ops;
    for (const auto& name : a.names) ops.push_back(resolve_observable(e.model, name));
    parallel_for(c.couplings.size(), c.worker_count(), [&](std::size_t i) {
      auto ref = tfim_exact_reference(e.model, c.state, expansion_parameter(c, c.couplings[i]));
      for (std::size_t k = 0; k < ops.size(); ++k) a.ed[i][a.names[k]] = exact_expectation(ops[k], ref.state).real();
      routes[i] = ref.route;
    });
    a.ed_route = routes.empty() ? "" : routes.front();
  }
  a.model = std::move(e.model);
  a.generator = std::move(e.generator);
  return a;
}

inline nlohmann::json run_tfim(const RunConfig& c) {
  validate_config(c);
  const auto a = analyze_tfim(c);
  const std::string model_tag = "tfim";
  CsvWriter ex(c.out / "expectations.csv",
               {"model", "n", "state", "h", "lambda", "order", "observable", "term", "cumulative", "ed_value", "abs_diff"});
  double imag = 0.0;
  for (std::size_t gi = 0; gi < c.couplings.size(); ++gi) {
    const double h = c.couplings[gi], lambda = expansion_parameter(c, h);
    for (std::size_t k = 0; k < a.names.size(); ++k) {
      const auto cum = cumulative_at(a.series[k], lambda);
      imag = std::max(imag, max_imag(a.series[k]));
      for (std::size_t m = 0; m <= c.order; ++m) {
        std::string edv, diff;
        if (c.ed_compare) {
          const double v = a.ed[gi].at(a.names[k]);
          edv = fmt_num(v);
          diff = fmt_num(std::abs(cum[m] - v));
        }
        ex.row({model_tag, std::to_string(c.n), c.state, fmt_coupling(h), fmt_num(lambda), std::to_string(m), a.names[k],
                fmt_num(a.series[k][m].real() * std::pow(lambda, double(m))), fmt_num(cum[m]), edv, diff});
      }
    }
  }
  CsvWriter cr(c.out / "correlations.csv", {"model", "n", "state", "h", "order", "d", "term", "cumulative"});
  CsvWriter xi(c.out / "correlation_length.csv", {"model", "n", "state", "h", "order", "d", "xi"});
  for (double h : c.couplings) {
    const double lambda = expansion_parameter(c, h);
    std::vector<std::vector<double>> cums;
    for (std::size_t k = 0; k < a.distances.size(); ++k) {
      cums.push_back(cumulative_at(a.correlations[k], lambda));
      for (std::size_t m = 0; m <= c.order; ++m)
        cr.row({model_tag, std::to_string(c.n), c.state, fmt_coupling(h), std::to_string(m), std::to_string(a.distances[k]),
                fmt_num(a.correlations[k][m].real() * std::pow(lambda, double(m))), fmt_num(cums[k][m])});
    }
    for (std::size_t k = 0; k + 1 < a.distances.size(); ++k)
      for (std::size_t m = 0; m <= c.order; ++m) {
        const double c0 = cums[k][m], c1 = cums[k + 1][m];
        if (c0 == 0.0 || c1 == 0.0 || std::abs(c0) == std::abs(c1)) continue;
        xi.row({model_tag, std::to_string(c.n), c.state, fmt_coupling(h), std::to_string(m), std::to_string(a.distances[k]),
                fmt_num(correlation_length(c0, c1))});
      }
  }
  if (c.emit_plotdata) {
    CsvWriter p(c.out / "plotdata.csv", {"x", "y", "series"});
    for (std::size_t k = 0; k < a.names.size(); ++k)
      for (std::size_t m = 0; m <= c.order; ++m)
        for (double h : c.couplings)
          p.row({fmt_coupling(h), fmt_num(cumulative_at(a.series[k], expansion_parameter(c, h))[m]),
                 a.names[k] + ";order=" + std::to_string(m)});
  }
  nlohmann::json report = {{"config", config_json(c)},
                           {"generator", generator_stats_json(a.generator)},
                           {"max_imaginary_part", imag},
                           {"warnings", a.model.warnings},
                           {"metadata", a.model.metadata}};
  if (c.ed_compare) report["ed"] = {{"route", a.ed_route}};
  write_json(c.out / "report.json", report);
  return report;
}

// ---- loop models ------------------------------------------------------------------

struct LoopFamily {
  std::string family;  // "x_loop" or "z_loop"
  std::size_t layer = 0;
  std::vector<std::string> names;
  std::vector<double> circumference;
  std::vector<OrderSeries> series;
  std::vector<std::vector<PerimeterFit>> fits;  // [grid point][order m = 0..M]
  std::optional<double> onset;                  // at order M
};

struct LoopAnalysis {
  LatticeModel model;
  SWGenerator generator;
  std::vector<LoopFamily> families;
  std::vector<std::size_t> plaquette_distances;  // toric_square only
  std::vector<OrderSeries> plaquette_correlations;
};

inline LoopAnalysis analyze_loops(const RunConfig& c) {
  Engine e(c);
  LoopAnalysis a;
  std::map<std::pair<int, std::size_t>, LoopFamily> fam;
  for (const auto& l : e.model.loops) {
    auto& f = fam[{static_cast<int>(l.kind), l.layer}];
    f.family = l.kind == LoopKind::kXLoop ? "x_loop" : "z_loop";
    f.layer = l.layer;
    f.names.push_back(l.name);
    f.circumference.push_back(static_cast<double>(l.circumference));
    f.series.push_back(e.expectation(l.op));
  }
  for (auto& [key, f] : fam) {
    if (f.names.size() >= 3) {
      for (double j : c.couplings) {
        std::vector<std::vector<double>> cums;
        for (const auto& s : f.series) cums.push_back(cumulative_at(s, expansion_parameter(c, j)));
        std::vector<PerimeterFit> per_order;
        for (std::size_t m = 0; m <= c.order; ++m) {
          std::vector<double> v;
          for (const auto& cu : cums) v.push_back(cu[m]);
          per_order.push_back(perimeter_fit(f.circumference, v));
        }
        f.fits.push_back(std::move(per_order));
      }
      std::vector<PerimeterFit> at_m;
      for (const auto& pf : f.fits) at_m.push_back(pf[c.order]);
      f.onset = deviation_onset(c.couplings, at_m, c.onset_threshold);
    }
    a.families.push_back(std::move(f));
  }
  if (e.model.kind == "toric_square") {
    const auto b0 = e.model.observables.at("B:0,0");
    auto b0_orders = e.conj->expand(b0);
    for (std::size_t d = 1; d <= e.model.lx / 2; ++d) {
      a.plaquette_distances.push_back(d);
      auto bd = e.conj->expand(e.model.observables.at("B:" + std::to_string(d) + ",0"));
      a.plaquette_correlations.push_back(connected_from_orders("", b0_orders, bd, *e.eval).orders);
    }
  }
  a.model = std::move(e.model);
  a.generator = std::move(e.generator);
  return a;
}

inline nlohmann::json run_loops(const RunConfig& c) {
  validate_config(c);
  const auto a = analyze_loops(c);
  const std::string ext = std::to_string(c.lx) + "x" + std::to_string(c.ly);
  CsvWriter lp(c.out / "loops.csv", {"model", "extents", c.coupling_name, "order", "loop", "family", "layer",
                                     "circumference", "term", "cumulative", "log_value"});
  CsvWriter ft(c.out / "perimeter_fit.csv",
               {"model", "extents", c.coupling_name, "order", "family", "layer", "alpha", "loop", "circumference", "residual"});
  nlohmann::json onsets = nlohmann::json::array();
  for (const auto& f : a.families) {
    for (std::size_t gi = 0; gi < c.couplings.size(); ++gi) {
      const double j = c.couplings[gi], lambda = expansion_parameter(c, j);
      for (std::size_t l = 0; l < f.names.size(); ++l) {
        const auto cum = cumulative_at(f.series[l], lambda);
        for (std::size_t m = 0; m <= c.order; ++m)
          lp.row({a.model.kind, ext, fmt_coupling(j), std::to_string(m), f.names[l], f.family, std::to_string(f.layer + 1),
                  fmt_num(f.circumference[l]), fmt_num(f.series[l][m].real() * std::pow(lambda, double(m))), fmt_num(cum[m]),
                  cum[m] > 0.0 ? fmt_num(std::log(cum[m])) : "nan"});
      }
      if (f.fits.empty()) continue;
      for (std::size_t m = 0; m <= c.order; ++m) {
        const auto& pf = f.fits[gi][m];
        for (std::size_t l = 0; l < f.names.size(); ++l)
          ft.row({a.model.kind, ext, fmt_coupling(j), std::to_string(m), f.family, std::to_string(f.layer + 1),
                  pf.valid ? fmt_num(pf.alpha) : "nan", f.names[l], fmt_num(f.circumference[l]),
                  pf.valid ? fmt_num(pf.residuals[l]) : "nan"});
      }
    }
    onsets.push_back({{"family", f.family},
                      {"layer", f.layer + 1},
                      {"order", c.order},
                      {"threshold", c.onset_threshold},
                      {"onset", f.onset ? nlohmann::json(*f.onset) : nlohmann::json(nullptr)}});
  }
  if (!a.plaquette_distances.empty()) {
    CsvWriter pc(c.out / "plaquette_correlations.csv", {"model", "extents", c.coupling_name, "order", "d", "term", "cumulative"});
    CsvWriter xi(c.out / "correlation_length.csv", {"model", "extents", c.coupling_name, "order", "d", "xi"});
    for (double j : c.couplings) {
      std::vector<std::vector<double>> cums;
      for (std::size_t k = 0; k < a.plaquette_distances.size(); ++k) {
        cums.push_back(cumulative_at(a.plaquette_correlations[k], j));
        for (std::size_t m = 0; m <= c.order; ++m)
          pc.row({a.model.kind, ext, fmt_coupling(j), std::to_string(m), std::to_string(a.plaquette_distances[k]),
                  fmt_num(a.plaquette_correlations[k][m].real() * std::pow(j, double(m))), fmt_num(cums[k][m])});
      }
      for (std::size_t k = 0; k + 1 < cums.size(); ++k)
        for (std::size_t m = 0; m <= c.order; ++m) {
          const double c0 = cums[k][m], c1 = cums[k + 1][m];
          if (c0 == 0.0 || c1 == 0.0 || std::abs(c0) == std::abs(c1)) continue;
          xi.row({a.model.kind, ext, fmt_coupling(j), std::to_string(m), std::to_string(a.plaquette_distances[k]),
                  fmt_num(correlation_length(c0, c1))});
        }
    }
  }
  if (c.emit_plotdata) {
    CsvWriter p(c.out / "plotdata.csv", {"x", "y", "series"});
    for (const auto& f : a.families)
      for (double j : c.couplings)
        for (std::size_t l = 0; l < f.names.size(); ++l) {
          const double v = cumulative_at(f.series[l], j)[c.order];
          p.row({fmt_num(f.circumference[l]), v > 0.0 ? fmt_num(std::log(v)) : "nan",
                 f.family + "@" + std::to_string(f.layer + 1) + ";" + c.coupling_name + "=" + fmt_coupling(j)});
        }
  }
  nlohmann::json report = {{"config", config_json(c)},
                           {"generator", generator_stats_json(a.generator)},
                           {"onsets", onsets},
                           {"warnings", a.model.warnings},
                           {"metadata", a.model.metadata}};
  write_json(c.out / "report.json", report);
  return report;
}

}  // namespace stabsw
