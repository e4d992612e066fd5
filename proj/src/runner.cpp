#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fock/berezin.hpp"
#include "fock/config.hpp"
#include "fock/hankel.hpp"
#include "fock/moments.hpp"

namespace fock::cli {

using nlohmann::json;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Moment-table size: explicit kmax wins; otherwise derived from the sweep
// ranges, capped so that weights with super-exponential kernels stay buildable
// (diagonal quantities beyond the table go through the continuum route).
int resolve_kmax(const ExperimentConfig& c, const WeightModel& w) {
  if (c.kmax > 0) return c.kmax;
  double r_need = c.grid.rmax * c.grid.rmax;
  for (double cut : c.cutoffs) r_need = std::max(r_need, cut * cut);
  for (double R : c.decay_radii)
    r_need = std::max(r_need, R * 1.953125 * R * 1.953125);
  int deg = 1;
  for (const auto& s : c.symbols) deg = std::max(deg, s.symbol.degree());
  int n_need = 0;
  for (int n : c.truncation_sweep) n_need = std::max(n_need, n);
  n_need = std::max(n_need, c.truncation) + deg + 4;
  constexpr int kCap = 200000;
  int k = 0;
  try {
    // the selection-rule series shifts indices by up to 2*deg beyond the
    // window, so pad the table accordingly
    k = suggest_kmax(w, c.dimension, r_need) + 2 * deg + 8;
  } catch (const std::range_error&) {
    k = kCap;
  }
  return std::min(std::max({k, n_need, 64}), kCap);
}

struct Scenario {
  std::string name;
  OperatorSymbol symbol{1, 1};
};

std::vector<Scenario> scenario_list(const ExperimentConfig& c) {
  std::vector<Scenario> list;
  for (const auto& s : c.symbols) list.push_back({s.name, s.symbol});
  std::mt19937_64 rng(c.seed ^ 0x5eedULL);
  for (int i = 0; i < c.random_symbols; ++i)
    list.push_back({"random-" + std::to_string(i),
                    random_symbol(c.dimension, c.fiber,
                                  c.random_symbol_degree, rng)});
  if (list.empty())
    throw std::invalid_argument(
        "config has no symbols (add 'symbols' or 'random_symbols')");
  return list;
}

void add_check(ScenarioReport& rep, const std::string& name, double tol,
               double value, bool pass, bool asserted = true) {
  rep.checks.push_back({name, tol, value, pass, asserted});
}

// run one function per scenario, bounded parallelism, deterministic order
template <class F>
std::vector<ScenarioReport> per_scenario(const std::vector<Scenario>& list,
                                         int jobs, F&& body) {
  std::vector<ScenarioReport> out(list.size());
  std::vector<std::string> errors(list.size());
  const int n_threads = std::max(1, std::min<int>(jobs, int(list.size())));
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= list.size()) return;
      const double t0 = now_s();
      out[i].id = list[i].name;
      try {
        body(list[i], int(i), out[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
      out[i].runtime_s = now_s() - t0;
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (size_t i = 0; i < list.size(); ++i) {
    if (!errors[i].empty()) {
      // numerical-consistency failures surface as failed checks, not crashes
      add_check(out[i], "completed-without-error", 0.0, 0.0, false);
      out[i].records["error"] = errors[i];
    }
  }
  return out;
}

}  // namespace

Report run_subcommand(const std::string& cmd, const ExperimentConfig& config,
                      const RunOptions& opt) {
  const double t_start = now_s();
  ExperimentConfig c = config;
  if (opt.seed != 0) c.seed = opt.seed;

  Report rep;
  rep.subcommand = cmd;
  rep.seed = c.seed;
  rep.jobs = std::max(1, opt.jobs);
  rep.strict = opt.strict;

  const WeightModel w = c.make_weight_model();
  const int kmax = resolve_kmax(c, w);
  c.kmax = kmax;
  rep.config_echo = config_to_json(c);
  const KernelCoeffs kc = kernel_coeffs(w, compute_moments(w, c.dimension, kmax));
  const int d = c.dimension;

  if (cmd == "moments") {
    ScenarioReport sr;
    sr.id = "moments";
    const MomentTable& mt = kc.moments();
    sr.records = {{"kmax", mt.kmax},
                  {"max_rel_err", mt.max_rel_err},
                  {"total_evals", mt.total_evals}};
    bool convex = true;
    double worst = 0.0;
    for (int k = 1; k < mt.kmax; ++k) {
      const double gap = mt.log_m[k + 1] + mt.log_m[k - 1] - 2.0 * mt.log_m[k];
      worst = std::min(worst, gap);
      if (gap < -1e-9) convex = false;
    }
    add_check(sr, "quadrature-relative-error", 1e-10, mt.max_rel_err,
              mt.max_rel_err <= 1e-10);
    add_check(sr, "log-convexity", 1e-9, worst, convex);
    CsvTable tab = {{"k", "log_m", "rel_err"}};
    for (int k = 0; k <= mt.kmax; ++k)
      tab.push_back({std::to_string(k), fmt(mt.log_m[k]), fmt(mt.rel_err[k])});
    rep.csv["moments"] = tab;
    rep.scenarios.push_back(sr);
  } else if (cmd == "kernel-check") {
    ScenarioReport sr;
    sr.id = "kernel";
    // diagonal growth band on |z| in [0.5, 6]
    CsvTable tab = {{"quantity", "radius", "value"}};
    double lo = 1e300, hi = 0.0;
    for (double rho = 0.5; rho <= 6.0 + 1e-12; rho += 0.25) {
      CVec z = CVec::Zero(d);
      z[0] = rho;
      const double v = kernel_diag_ratio(kc, z);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      tab.push_back({"diag_ratio", fmt(rho), fmt(v)});
    }
    sr.records["diag_ratio_band"] = {{"lo", lo}, {"hi", hi}};
    add_check(sr, "diag-ratio-band", c.tolerance("diag_band"), hi / lo,
              hi / lo <= c.tolerance("diag_band"));
    // eigenvalue comparison bands on |z| in [0.5, 8]
    double llo = 1e300, lhi = 0.0, mlo = 1e300, mhi = 0.0;
    for (double rho = 0.5; rho <= 8.0 + 1e-12; rho *= 1.189207115) {
      const double r = rho * rho;
      const DiagData dd = kc.diag(r);
      const double lr = dd.lambda / w.dphi(r), mr = dd.mu / w.dpsi(r);
      llo = std::min(llo, lr); lhi = std::max(lhi, lr);
      mlo = std::min(mlo, mr); mhi = std::max(mhi, mr);
      tab.push_back({"lambda_over_dphi", fmt(rho), fmt(lr)});
      tab.push_back({"mu_over_dpsi", fmt(rho), fmt(mr)});
    }
    sr.records["lambda_band"] = {{"lo", llo}, {"hi", lhi}};
    sr.records["mu_band"] = {{"lo", mlo}, {"hi", mhi}};
    const bool gauss = w.family() == WeightFamily::Gaussian;
    add_check(sr, "lambda-band-recorded", 0.0, lhi / llo, true, false);
    if (gauss)
      add_check(sr, "gaussian-lambda-band", 1.01, std::max(lhi, 1.0 / llo),
                lhi <= 1.01 && 1.0 / llo <= 1.01);
    // Bergman matrix consistency at sample points
    std::mt19937_64 rng(c.seed);
    double worst_inv = 0.0, worst_sqrt = 0.0;
    for (int i = 0; i < 6; ++i) {
      const CVec z = random_point(d, 2.5, rng);
      const BergmanData bd = bergman_data(kc, z);
      worst_inv = std::max(worst_inv,
                           (bd.B * bd.B_inv - CMat::Identity(d, d)).norm());
      worst_sqrt = std::max(
          worst_sqrt, (bd.B_inv_sqrt * bd.B_inv_sqrt - bd.B_inv).norm() /
                          std::max(1.0, bd.B_inv.norm()));
    }
    add_check(sr, "bergman-inverse", 1e-12, worst_inv, worst_inv <= 1e-12);
    add_check(sr, "bergman-inverse-sqrt", 1e-12, worst_sqrt, worst_sqrt <= 1e-12);
    // polyball unitary invariance
    bool invariant = true;
    for (int trial = 0; trial < 20; ++trial) {
      const CMat u = random_unitary(d, rng);
      CVec z = random_point(d, 2.0, rng);
      if (z.norm() < 1e-3) z[0] += 1.0;
      std::vector<CVec> samples;
      for (int i = 0; i < 25; ++i)
        samples.push_back(
            z + random_point(d, 1.2 / std::sqrt(w.dpsi(z.squaredNorm())), rng));
      if (!polyball_unitary_check(w, u, z, 0.5, samples)) invariant = false;
    }
    add_check(sr, "polyball-unitary-invariance", 0.0, invariant ? 1.0 : 0.0,
              invariant);
    // near-constancy of the kernel on polyballs; the off-diagonal series at
    // <z,w> must stay inside the covered range, so cap the center radius
    const double center_max =
        std::min(3.0, 0.9 * std::sqrt(kc.covered_radius_sq()));
    std::vector<CVec> centers;
    for (int i = 0; i < 10; ++i) {
      CVec z = random_point(d, std::max(0.8, center_max), rng);
      if (z.norm() < 0.5) z[0] += 0.7;
      centers.push_back(z);
    }
    const auto rows = near_constancy_report(kc, centers, {0.1, 0.25, 0.5}, 500,
                                            c.seed + 1);
    double best_a = 0.0, best_ratio = 0.0;
    json jrows = json::array();
    for (const auto& row : rows) {
      jrows.push_back({{"a", row.a}, {"min_ratio", row.min_ratio}, {"pass", row.pass}});
      if (row.pass && row.a > best_a) {
        best_a = row.a;
        best_ratio = row.min_ratio;
      }
    }
    sr.records["near_constancy"] = jrows;
    sr.records["admissible_a"] = best_a;
    add_check(sr, "near-constancy-admissible-a", c.tolerance("near_constancy"),
              best_ratio, best_a > 0.0);
    // class-S diagnostic (reported; the profile condition is informational in d=1)
    const ClassSReport phi_rep =
        class_s_diagnostic(w, WeightComponent::Phi, w.eta(), 1e-2, 1e3);
    sr.records["class_s_phi"] = {{"eta", phi_rep.eta},
                                 {"max_ratio", phi_rep.max_ratio},
                                 {"pass", phi_rep.pass}};
    add_check(sr, "class-s-phi", phi_rep.ceiling, phi_rep.max_ratio,
              phi_rep.pass, d > 1);
    rep.csv["grid"] = tab;
    rep.scenarios.push_back(sr);
  } else if (cmd == "bloch") {
    const Grid grid = sweep_grid(d, c.grid, c.seed);
    rep.scenarios = per_scenario(
        scenario_list(c), rep.jobs,
        [&](const Scenario& sc, int idx, ScenarioReport& sr) {
          const BlochResult br = bloch_norm(sc.symbol, kc, grid);
          sr.records["bloch_norm"] = br.norm;
          sr.records["bloch_seminorm"] = br.seminorm;
          sr.records["argmax_radius"] = br.argmax_radius;
          std::mt19937_64 rng(c.seed + 1000 * idx);
          double rlo = 1e300, rhi = 0.0;
          for (int i = 0; i < 5; ++i) {
            CVec z = random_point(d, std::min(2.5, c.grid.rmax), rng);
            if (z.norm() < 1e-2) z[0] += 0.5;
            try {
              const double ratio =
                  e_norm_ratio(sc.symbol, kc, z, 200, c.seed + 7 * i);
              rlo = std::min(rlo, ratio);
              rhi = std::max(rhi, ratio);
            } catch (const std::domain_error&) {
              // Q_T vanished at z (constant symbols); skip the sample
            }
          }
          const double slack = c.tolerance("e_ratio_slack");
          const double sd = std::sqrt(double(d));
          if (rhi > 0.0) {
            sr.records["e_ratio"] = {{"lo", rlo}, {"hi", rhi}};
            add_check(sr, "e-ratio-band", sd * (1.0 + slack), rhi,
                      rlo >= (1.0 - slack) / sd && rhi <= sd * (1.0 + slack));
          }
          json tails = json::array();
          const std::vector<CVec> dirs = sphere_directions(d, 8, c.seed);
          for (double R : c.decay_radii) {
            const double tail = little_bloch_tail(sc.symbol, kc, R, dirs);
            tails.push_back({{"R", R}, {"tail", tail}});
          }
          sr.records["little_bloch_tail"] = tails;
        });
  } else if (cmd == "bmo") {
    const Grid grid = sweep_grid(d, c.grid, c.seed);
    rep.scenarios = per_scenario(
        scenario_list(c), rep.jobs,
        [&](const Scenario& sc, int idx, ScenarioReport& sr) {
          const BmoResult br = bmo_norm(sc.symbol, kc, grid);
          sr.records["bmo_norm"] = br.norm;
          sr.records["bmo_seminorm"] = br.seminorm;
          std::mt19937_64 rng(c.seed + 1000 * idx);
          const double sample_max =
              std::min(3.0, 0.95 * std::sqrt(kc.covered_radius_sq()));
          double worst = 0.0;
          for (int i = 0; i < c.pairs; ++i) {
            const CVec z = random_point(d, sample_max, rng);
            worst = std::max(worst, mo_route_gap(sc.symbol, kc, z));
          }
          sr.records["mo_route_gap"] = worst;
          add_check(sr, "mo-route-agreement", c.tolerance("mo_agreement"),
                    worst, worst <= c.tolerance("mo_agreement"));
          json decays = json::array();
          const std::vector<CVec> dirs = sphere_directions(d, 8, c.seed);
          for (double R : c.decay_radii) {
            const double v = bmo_decay(sc.symbol, kc, R, dirs);
            decays.push_back({{"R", R}, {"decay", v}});
          }
          sr.records["bmo_decay"] = decays;
        });
  } else if (cmd == "hankel") {
    CsvTable spectra = {{"scenario", "n", "s_n"}};
    rep.scenarios = per_scenario(
        scenario_list(c), rep.jobs,
        [&](const Scenario& sc, int, ScenarioReport& sr) {
          const TruncatedHankel th = assemble_hankel(sc.symbol, kc, c.truncation);
          const TruncatedHankel th2 =
              assemble_hankel(sc.symbol, kc, std::max(1, c.truncation - 2));
          const TruncatedHankel th4 =
              assemble_hankel(sc.symbol, kc, std::max(1, c.truncation - 4));
          sr.records["N"] = c.truncation;
          sr.records["operator_norm"] = th.operator_norm();
          sr.records["operator_norm_minus2"] = th2.operator_norm();
          sr.records["operator_norm_minus4"] = th4.operator_norm();
          sr.records["degree_warning"] = th.degree_warning();
          json spec = json::array();
          for (double s : th.singular_values()) spec.push_back(s);
          sr.records["singular_values"] = spec;
          const bool mono = th4.operator_norm() <= th2.operator_norm() + 1e-12 &&
                            th2.operator_norm() <= th.operator_norm() + 1e-12;
          add_check(sr, "s-max-monotone-in-N", 1e-12,
                    th.operator_norm() - th2.operator_norm(), mono);
          const double stab =
              std::abs(th.operator_norm() - th2.operator_norm());
          add_check(sr, "s-max-stabilization", c.tolerance("stabilization"),
                    stab, stab < c.tolerance("stabilization"), false);
        });
    for (const ScenarioReport& sr : rep.scenarios) {
      if (!sr.records.contains("singular_values")) continue;
      int n = 0;
      for (const auto& s : sr.records["singular_values"])
        spectra.push_back({sr.id, std::to_string(n++), fmt(s.get<double>())});
    }
    rep.csv["spectra"] = spectra;
  } else if (cmd == "schatten") {
    CsvTable partials = {{"scenario", "kind", "p", "cutoff", "partial"}};
    rep.scenarios = per_scenario(
        scenario_list(c), rep.jobs,
        [&](const Scenario& sc, int, ScenarioReport& sr) {
          const TruncatedHankel th = assemble_hankel(sc.symbol, kc, c.truncation);
          json norms = json::array();
          for (double p : c.p_list)
            norms.push_back({{"p", p},
                             {"schatten_norm", th.schatten_norm(p)},
                             {"below_paper_regime", p < 2.0}});
          sr.records["schatten_norms"] = norms;
          // no-Hilbert-Schmidt growth of sum s_n^2 across the N sweep
          if (!sc.symbol.constant()) {
            double prev = 0.0;
            bool grows = true;
            json growth = json::array();
            for (int n : c.truncation_sweep) {
              const double cur =
                  assemble_hankel(sc.symbol, kc, n).schatten_sq_sum();
              if (prev > 0.0 && !(cur > c.tolerance("growth_per_doubling") * prev))
                grows = false;
              growth.push_back({{"N", n}, {"schatten2_sq", cur}});
              prev = cur;
            }
            sr.records["schatten2_growth"] = growth;
            add_check(sr, "no-hilbert-schmidt-growth",
                      c.tolerance("growth_per_doubling"), prev, grows);
          }
          json integrals = json::array();
          for (double p : c.p_list) {
            const PartialIntegralTable bes =
                besov_integral(sc.symbol, kc, p, c.cutoffs, 16, c.seed);
            const PartialIntegralTable mos =
                mo_schatten_integral(sc.symbol, kc, p, c.cutoffs, 12, c.seed);
            json e = {{"p", p},
                      {"besov_partials", bes.partials},
                      {"besov_divergent", bes.divergent},
                      {"mo_partials", mos.partials},
                      {"mo_divergent", mos.divergent},
                      {"below_paper_regime", bes.below_paper_regime}};
            if (!bes.divergent && !mos.divergent && bes.value() > 0.0) {
              const double factor = mos.value() / bes.value();
              e["besov_mo_factor"] = factor;
              const double cap = c.tolerance("besov_bmo_factor");
              add_check(sr, "besov-vs-mo-factor(p=" + fmt(p) + ")", cap,
                        factor, factor <= cap && factor >= 1.0 / cap);
            }
            integrals.push_back(e);
          }
          sr.records["integrals"] = integrals;
        });
    for (const ScenarioReport& sr : rep.scenarios) {
      if (!sr.records.contains("integrals")) continue;
      for (const auto& e : sr.records["integrals"]) {
        const auto& cuts = c.cutoffs;
        for (size_t i = 0; i < cuts.size(); ++i) {
          partials.push_back({sr.id, "besov", fmt(e["p"].get<double>()),
                              fmt(cuts[i]),
                              fmt(e["besov_partials"][i].get<double>())});
          partials.push_back({sr.id, "mo", fmt(e["p"].get<double>()),
                              fmt(cuts[i]),
                              fmt(e["mo_partials"][i].get<double>())});
        }
      }
    }
    rep.csv["partials"] = partials;
  } else if (cmd == "compactness") {
    rep.scenarios = per_scenario(
        scenario_list(c), rep.jobs,
        [&](const Scenario& sc, int, ScenarioReport& sr) {
          const std::vector<CVec> dirs = sphere_directions(d, 8, c.seed);
          const double R = c.decay_radii.back();
          const double tail = little_bloch_tail(sc.symbol, kc, R, dirs);
          const double mo_tail = bmo_decay(sc.symbol, kc, R, dirs);
          const TruncatedHankel th = assemble_hankel(sc.symbol, kc, c.truncation);
          const auto& s = th.singular_values();
          const size_t mid = (s.size() + 1) / 2 - 1;
          const double spread = s.empty() || s[0] == 0.0 ? 0.0 : s[mid] / s[0];
          sr.records["R"] = R;
          sr.records["little_bloch_tail"] = tail;
          sr.records["bmo_decay"] = mo_tail;
          sr.records["spectrum_mid_over_top"] = spread;
          const bool decays = tail <= c.tolerance("little_bloch_tail");
          const bool flat = tail >= c.tolerance("no_decay_floor");
          sr.records["decay_flag"] = decays;
          sr.records["no_decay_flag"] = flat;
          add_check(sr, "dichotomy-resolved", 0.0, tail, decays || flat, false);
        });
  } else if (cmd == "equivalence") {
    const Grid grid = sweep_grid(d, c.grid, c.seed);
    rep.scenarios = per_scenario(
        scenario_list(c), rep.jobs,
        [&](const Scenario& sc, int, ScenarioReport& sr) {
          const BlochResult bl = bloch_norm(sc.symbol, kc, grid);
          const BmoResult bm = bmo_norm(sc.symbol, kc, grid);
          const TruncatedHankel th = assemble_hankel(sc.symbol, kc, c.truncation);
          const double t0 = op_norm(sc.symbol.eval(CVec::Zero(d)));
          const double hk = th.operator_norm() + t0;
          sr.records["bloch"] = bl.norm;
          sr.records["bmo"] = bm.norm;
          sr.records["hankel_plus_t0"] = hk;
          sr.records["ratios"] = {{"bloch_over_bmo", bl.norm / bm.norm},
                                  {"bloch_over_hankel", bl.norm / hk},
                                  {"bmo_over_hankel", bm.norm / hk}};
        });
    // band over scenarios
    double lo = 1e300, hi = 0.0;
    for (const ScenarioReport& sr : rep.scenarios) {
      if (!sr.records.contains("ratios")) continue;
      for (const auto& [k, v] : sr.records["ratios"].items()) {
        lo = std::min(lo, v.get<double>());
        hi = std::max(hi, v.get<double>());
      }
    }
    ScenarioReport band;
    band.id = "equivalence-band";
    band.records["ratio_lo"] = lo;
    band.records["ratio_hi"] = hi;
    const double width = hi / lo;
    add_check(band, "theorem-band-width", c.tolerance("band_width"), width,
              width <= c.tolerance("band_width"));
    bool all_linear = true;
    for (const auto& s : scenario_list(c))
      if (s.symbol.degree() > 1) all_linear = false;
    if (w.family() == WeightFamily::Gaussian && all_linear) {
      const double cap = c.tolerance("gaussian_linear_band");
      add_check(band, "gaussian-linear-band", cap, std::max(hi, 1.0 / lo),
                hi <= cap && 1.0 / lo <= cap);
    }
    rep.scenarios.push_back(band);
  } else if (cmd == "fejer") {
    const Grid grid = sweep_grid(d, c.grid, c.seed);
    rep.scenarios = per_scenario(
        scenario_list(c), rep.jobs,
        [&](const Scenario& sc, int, ScenarioReport& sr) {
          json sweep = json::array();
          double prev = 1e300;
          bool monotone = true;
          double last = 0.0;
          for (int n : c.fejer_sweep) {
            const OperatorSymbol diff = sc.symbol.fejer(n) - sc.symbol;
            double sem = 0.0;
            if (!diff.terms().empty()) sem = bloch_norm(diff, kc, grid).seminorm;
            if (!sweep.empty() && sem > prev + 1e-12) monotone = false;
            sweep.push_back({{"N", n}, {"seminorm", sem}});
            prev = sem;
            last = sem;
          }
          sr.records["sweep"] = sweep;
          add_check(sr, "fejer-monotone-decrease", 1e-12, last, monotone);
          add_check(sr, "fejer-threshold", c.tolerance("fejer_threshold"), last,
                    last <= c.tolerance("fejer_threshold"));
        });
  } else if (cmd == "identities") {
    ScenarioReport sr;
    sr.id = "identities";
    std::mt19937_64 rng(c.seed);
    const int dim = int(indices_up_to(d, c.identity_degree).size()) * c.fiber;
    const CMat s = random_psd(dim, rng);
    const IdentityCheck tc =
        trace_identity_check(s, kc, c.identity_degree, c.fiber, c.seed + 3);
    sr.records["trace"] = {{"dimension", dim},
                           {"lhs", tc.lhs},
                           {"rhs", tc.rhs},
                           {"rel_gap", tc.rel_gap}};
    const double ttol =
        d == 1 ? c.tolerance("trace_rel_d1") : c.tolerance("trace_rel_d2");
    add_check(sr, "trace-identity", ttol, tc.rel_gap, tc.rel_gap <= ttol);
    // Hilbert-Schmidt multiplier identity for R = I and R = z_1 I
    MixedSymbol rid = {{MultiIndex(d, 0), MultiIndex(d, 0),
                        CMat::Identity(c.fiber, c.fiber)}};
    MultiIndex e1(d, 0);
    e1[0] = 1;
    MixedSymbol rz = {{e1, MultiIndex(d, 0), CMat::Identity(c.fiber, c.fiber)}};
    const IdentityCheck hi = hs_multiplier_identity_check(rid, kc, c.identity_degree, c.fiber);
    const IdentityCheck hz = hs_multiplier_identity_check(rz, kc, c.identity_degree, c.fiber);
    sr.records["hs_identity"] = {{"lhs", hi.lhs}, {"rhs", hi.rhs}, {"rel_gap", hi.rel_gap}};
    sr.records["hs_coordinate"] = {{"lhs", hz.lhs}, {"rhs", hz.rhs}, {"rel_gap", hz.rel_gap}};
    const double htol = c.tolerance("hs_rel");
    add_check(sr, "hs-multiplier-identity", htol, hi.rel_gap, hi.rel_gap <= htol);
    add_check(sr, "hs-multiplier-coordinate", htol, hz.rel_gap, hz.rel_gap <= htol);
    rep.scenarios.push_back(sr);
  } else {
    throw std::invalid_argument("unknown subcommand: " + cmd);
  }

  rep.runtime_s = now_s() - t_start;
  if (!opt.out_dir.empty()) write_report(rep, opt.out_dir);
  return rep;
}

}  // namespace fock::cli
