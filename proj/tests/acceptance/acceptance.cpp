// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles/finite_difference.hpp"
#include "oracles/radial_closed_form.hpp"
#include "scarlab/classical.hpp"
#include "scarlab/eigensolve.hpp"
#include "scarlab/hamiltonian_1d.hpp"
#include "scarlab/hamiltonian_3d.hpp"
#include "scarlab/scar_estimates.hpp"
#include "scarlab/wavefunction.hpp"

using namespace scarlab;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const char* fmt, auto... args) {
    if (!detail.empty()) detail += "; ";
    if constexpr (sizeof...(args) == 0) {
      detail += fmt;
    } else {
      char buf[256];
      std::snprintf(buf, sizeof buf, fmt, args...);
      detail += buf;
    }
    if (!cond) {
      detail += " [fail]";
      ok = false;
    }
  }
};

int failures = 0;

void report(int id, const char* name, const Check& c) {
  std::printf("%s %d %s: %s\n", c.ok ? "PASS" : "FAIL", id, name, c.detail.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

struct OneD {
  ModelParams params;
  Sector1D sector{0, {}};
  Spectrum spectrum;
  std::vector<Band> bands;
  double seconds = 0.0;
};

OneD solve_reference_1d() {
  OneD d;
  const auto t0 = Clock::now();
  d.sector = enumerate_basis_1d(d.params);
  d.spectrum = solve_dense(d.sector, MatrixElementRule1D(d.params));
  d.seconds = since(t0);
  d.bands = assemble_bands(d.spectrum, 2.0);
  return d;
}

SaddleAnalysis reference_saddle(const ModelParams& p) {
  return hessian_analysis(find_critical_points(p, {{0.0, 0.0}}).at(0), p);
}

void criterion_1(const OneD& d) {
  Check c;
  const double e0 = d.spectrum.eigenvalues.front();
  c.require(d.sector.dim() == 729, "states %zu", d.sector.dim());
  c.require(std::abs(e0 - -5.91) <= 0.01 * 5.91, "E0 = %.6f", e0);
  c.require(d.seconds < 5.0, "solve %.3f s", d.seconds);
  report(1, "1D ground energy", c);
}

void criterion_2(const OneD& d) {
  Check c;
  const double e0 = d.spectrum.eigenvalues.front();
  if (d.bands.empty()) {
    c.require(false, "no bands");
  } else {
    const double es = d.bands[0].top;
    c.require(std::abs(es - -0.905) <= 0.03, "Es = %.6f", es);
    c.require(std::abs(es - e0 - 5.01) <= 0.1, "Es - E0 = %.6f", es - e0);
  }
  report(2, "scarred state energy", c);
}

void criterion_3(const OneD& d) {
  Check c;
  const auto s = reference_saddle(d.params).scaled();
  const double gap = scar_energy(0, s, effective_potential(0, 0, d.params)).predicted_gap();
  c.require(std::abs(gap - 5.8) <= 0.001 * 5.8, "predicted gap %.6f", gap);
  const auto rep = compare_with_spectrum(s, effective_potential(0, 0, d.params), d.spectrum.eigenvalues,
                                         d.bands, 3);
  const auto& row = rep.rows.at(0);
  const bool paired = row.measured && std::abs(*row.measured - 5.01) <= 0.1 && std::abs(row.predicted - 5.8) <= 0.01;
  c.require(paired, "report pairs measured %.4f with predicted %.4f", row.measured.value_or(NAN), row.predicted);
  report(3, "harmonic scar gap", c);
}

void criterion_4(const OneD& d) {
  Check c;
  const double e0 = d.spectrum.eigenvalues.front();
  const double unit = std::pow(2.0 * std::numbers::pi, 2) / (d.params.gamma * d.params.box_length);
  if (d.bands.size() < 3) {
    c.require(false, "only %zu bands", d.bands.size());
  } else {
    for (int n : {1, 2}) {
      const double head = d.bands[static_cast<std::size_t>(n)].head;
      const double pred = e0 + n * n * unit;
      c.require(std::abs((head - e0) - n * n * unit) <= 0.05 * n * n * unit,
                "band %d head %.4f vs %.4f", n + 1, head, pred);
    }
    const double g2 = d.bands[1].top - e0, g3 = d.bands[2].top - e0;
    c.require(std::abs(g2 - 18.67) <= 0.3, "band-2 top gap %.4f", g2);
    c.require(std::abs(g3 - 51.22) <= 1.0, "band-3 top gap %.4f", g3);
  }
  report(4, "band structure", c);
}

void criterion_5(const OneD& d) {
  Check c;
  const auto& b = d.bands.at(0);
  const double l = d.params.box_length;
  std::vector<double> overlap, conc;
  for (std::size_t i = b.first; i <= b.last; ++i) {
    const auto g = position_wavefunction_1d(d.spectrum.eigenvector(i), d.sector, l);
    overlap.push_back(heavy_overlap(g));
    conc.push_back(concentration_ratio(g, l / 16));
  }
  const auto best = static_cast<std::size_t>(std::max_element(overlap.begin(), overlap.end()) - overlap.begin());
  c.require(best + b.first == b.last, "max heavyOverlap at index %zu (band top %zu), %.4f/L", best + b.first,
            b.last, overlap[best] * l);
  std::size_t near = b.first;
  for (std::size_t i = b.first; i <= b.last; ++i)
    if (std::abs(d.spectrum.eigenvalues[i] + 1.298) < std::abs(d.spectrum.eigenvalues[near] + 1.298)) near = i;
  const double e_near = d.spectrum.eigenvalues[near];
  c.require(std::abs(e_near + 1.298) < 0.01, "state %zu at E = %.4f", near, e_near);
  c.require(conc[near - b.first] < conc.back(), "concentration %.4f < top %.4f", conc[near - b.first],
            conc.back());
  report(5, "scar localization", c);
}

void criterion_6() {
  Check c;
  const auto t0 = Clock::now();
  const ModelParams p;
  const double l = p.box_length;
  const auto pts = find_critical_points(p, default_critical_seeds(p));
  double worst = 0.0;
  bool kinds = pts.size() == 3 && pts[0].kind == CriticalKind::saddle;
  const double expected[3][2] = {{0.0, 0.0}, {l / 3, 0.0}, {-l / 3, 0.0}};
  for (std::size_t k = 0; k < pts.size() && k < 3; ++k) {
    if (k > 0) kinds = kinds && pts[k].kind == CriticalKind::minimum;
    const double r = k > 0 && pts[k].r * expected[k][0] < 0 ? -pts[k].r : pts[k].r;
    worst = std::max({worst, std::abs(r - expected[k][0]), std::abs(pts[k].eta - expected[k][1])});
  }
  c.require(kinds, "saddle at origin, minima at +-L/3");
  c.require(worst <= 1e-10 * l, "max location error %.2e L", worst / l);

  const auto hs = potential_hessian(0.0, 0.0, p);
  const double h = 1e-3 * l;
  const double fd[3] = {
      oracle::central_difference([&](double x) { return potential_gradient(x, 0.0, p)[0]; }, 0.0, h),
      oracle::central_difference([&](double y) { return potential_gradient(0.0, y, p)[0]; }, 0.0, h),
      oracle::central_difference([&](double y) { return potential_gradient(0.0, y, p)[1]; }, 0.0, h)};
  const double scale = std::abs(hs[0]) + std::abs(hs[2]);
  double dev = 0.0;
  for (int i = 0; i < 3; ++i) dev = std::max(dev, std::abs(hs[i] - fd[i]) / scale);
  c.require(dev <= 1e-6, "Hessian vs finite differences %.2e", dev);

  const auto s = hessian_analysis(pts.at(0), p).scaled();
  const auto& mode = s.modes[s.stable_mode().value()];
  const double closed = 2.0 * closed_form_gap(p);
  c.require(std::abs(mode.direction[1]) > 0.999 && std::abs(mode.frequency - closed) <= 1e-9 * closed,
            "eta frequency %.9f vs closed form %.9f", mode.frequency, closed);
  const double t = since(t0);
  c.require(t < 1.0, "%.3f s", t);
  report(6, "critical points and saddle modes", c);
}

void criterion_7() {
  Check c;
  const auto t0 = Clock::now();
  const ModelParams p;
  const double l = p.box_length;
  IntegratorOptions opts;
  opts.dt = select_time_step(reference_saddle(p));
  opts.steps = 10000;
  opts.record_every = 10;
  const ClassicalState start{0.001 * l, 0.0, 0.01 * l, 0.0, 0.0};
  const auto fwd = integrate_orbit_1d(start, p, opts);
  const double drift = fwd.max_relative_drift();
  c.require(drift <= 1e-8, "drift %.2e over %zu steps", drift, fwd.steps_taken);

  ClassicalState back = fwd.final_state();
  back.p_r = -back.p_r;
  back.p_eta = -back.p_eta;
  opts.wrap = false;
  const auto rev = integrate_orbit_1d(back, p, opts);
  const double closure = std::max(std::abs(rev.final_state().r - start.r), std::abs(rev.final_state().eta - start.eta)) / l;
  c.require(closure <= 1e-9, "closure %.2e L", closure);

  IntegratorOptions o3;
  const double d = 0.02 * l;
  o3.dt = 2.0 * std::numbers::pi * std::sqrt(mass_eta(p.gamma) * d * d * d) / 200.0;
  o3.steps = 10000;
  bool planar = true;
  for (const auto& seed : planar_seed_ensemble(l, 4)) {
    const auto tr = integrate_orbit_3d(seed, p, o3);
    for (const auto& s : tr.states)
      planar = planar && s.r[1] == 0.0 && s.r[2] == 0.0 && s.eta[0] == 0.0 && s.eta[2] == 0.0 &&
               s.p_r[1] == 0.0 && s.p_r[2] == 0.0 && s.p_eta[0] == 0.0 && s.p_eta[2] == 0.0;
  }
  c.require(planar, "planar subspace %s", planar ? "preserved exactly" : "left");
  const double t = since(t0);
  c.require(t < 10.0, "%.3f s", t);
  report(7, "classical integration", c);
}

void criterion_8() {
  Check c;
  const auto t0 = Clock::now();
  ModelParams p;
  double herm = 0.0, complete = 0.0, iter = 0.0;
  std::vector<double> ground_sym;
  double small_sym = 0.0, small_anti = 0.0, oracle_dev = 0.0;
  for (int cut = 0; cut <= 2; ++cut) {
    p.cutoff_sq = cut;
    const auto sector = enumerate_sector_3d(cut, {0, 0, 0});
    const MatrixElementRule3D rule(p);
    const auto h = build_hamiltonian_3d(sector, rule);
    const auto dense = dense_hamiltonian_3d(sector, rule);
    const double scale = std::max(dense.cwiseAbs().maxCoeff(), 1e-300);
    herm = std::max(herm, (dense - dense.transpose()).cwiseAbs().maxCoeff() / scale);
    herm = std::max(herm, h.max_asymmetry() / scale);
    complete = std::max(complete, (h.to_dense() - dense).cwiseAbs().maxCoeff() / scale);

    auto [sym, anti] = symmetrize_sector(sector);
    Spectrum ss, sa;
    for (const auto* block : {&sym, &anti}) {
      if (block->dim() == 0) continue;
      const auto hb = build_symmetrized_hamiltonian_3d(sector, *block, h);
      const auto db = dense_symmetrized_hamiltonian_3d(*block, rule);
      complete = std::max(complete, (hb.to_dense() - db).cwiseAbs().maxCoeff() / scale);
      auto sd = solve_dense(hb);
      if (block->dim() > 8) {
        IterativeOptions io;
        io.count = 4;
        const auto it = solve_iterative(hb, "", io);
        for (std::size_t i = 0; i < it.size(); ++i)
          iter = std::max(iter, std::abs(it.eigenvalues[i] - sd.eigenvalues[i]) / scale);
      }
      (block->parity > 0 ? ss : sa) = std::move(sd);
    }
    ground_sym.push_back(ss.eigenvalues.front());

    if (cut == 2) {
      const double l = p.box_length;
      const auto rg = RadialGrid::gauss_legendre(24, 0.5 * l);
      const auto rs = RadialGrid::gauss_legendre(24, 0.125 * l);
      const auto sphere = SphereQuadrature::product(12, 24);
      auto fraction = [&](const Spectrum& s, const SymmetrizedSector3D& block) {
        const auto v = expand_symmetrized(s.eigenvector(0), block, sector);
        const double ball = integrated_probability_3d(v, sector, l, rg, rg, sphere).mass();
        const double inner = integrated_probability_3d(v, sector, l, rs, rg, sphere).mass();
        const double ref = oracle::ball_mass(v, sector, l, 0.125 * l, 0.5 * l) / oracle::ball_mass(v, sector, l, 0.5 * l, 0.5 * l);
        oracle_dev = std::max(oracle_dev, std::abs(inner / ball - ref) / ref);
        return inner / ball;
      };
      small_sym = fraction(ss, sym);
      small_anti = fraction(sa, anti);
    }
  }
  c.require(herm <= 1e-10 && complete <= 1e-10, "hermiticity %.1e, block completeness %.1e", herm, complete);
  const bool monotone = ground_sym[1] <= ground_sym[0] && ground_sym[2] <= ground_sym[1];
  c.require(monotone, "symmetric ground %.4e, %.4e, %.4e", ground_sym[0], ground_sym[1], ground_sym[2]);
  c.require(iter <= 1e-8, "iterative vs dense %.1e", iter);
  c.require(small_sym > small_anti && oracle_dev < 1e-6,
            "P(|r| <= L/8) symmetric %.3e > antisymmetric %.3e (closed-form check %.1e)", small_sym, small_anti,
            oracle_dev);
  const double t = since(t0);
  c.require(t < 120.0, "%.2f s", t);
  report(8, "3D Coulomb model", c);
}

void criterion_9(const OneD& d) {
  Check c;
  const auto bandtop = d.bands.at(0).last;
  std::vector<std::complex<double>> init(d.sector.dim(), 0.0);
  init[*d.sector.find({0, 0, 0})] = 1.0;
  const auto coeffs = project_onto_spectrum(init, d.spectrum);
  const std::vector<double> times{0.0, 0.5, 1.0};
  const double width = reference_saddle(d.params).scaled().lambda_rate();
  const auto series = autocorrelation(coeffs, d.spectrum.eigenvalues, times, width);
  c.require(std::abs(series.values[0] - 1.0) <= 1e-12, "|C(0) - 1| = %.1e", std::abs(series.values[0] - 1.0));
  const double mass = series.spectral_mass();
  c.require(std::abs(mass - 1.0) <= 1e-6, "S(E) mass %.9f", mass);

  const double ea = d.spectrum.eigenvalues[0], eb = d.spectrum.eigenvalues[bandtop];
  const std::vector<double> w{0.5, 0.5}, e{ea, eb};
  const double period = 2.0 * std::numbers::pi / (eb - ea);
  const double t = first_recurrence_time(w, e, period / 200.0, 3.0 * period);
  c.require(std::abs(t - period) <= 1e-9 * period, "two-level recurrence %.12f vs %.12f", t, period);
  report(9, "autocorrelation", c);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const OneD d = solve_reference_1d();
  criterion_1(d);
  criterion_2(d);
  criterion_3(d);
  criterion_4(d);
  criterion_5(d);
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9(d);
  std::printf("%s: %d failed, %.2f s total\n", failures ? "FAIL" : "PASS", failures, since(t0));
  return failures ? 1 : 0;
}
