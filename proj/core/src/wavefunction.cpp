#include "scarlab/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "scarlab/errors.hpp"

namespace scarlab {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

std::vector<double> cell_axis(std::size_t n, double l) {
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = -0.5 * l + l * static_cast<double>(i) / static_cast<double>(n);
  return axis;
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// int_{-L/2}^{L/2} exp(i pi delta x / L) dx
double half_wave_integral(int delta, double l) {
  if (delta == 0) return l;
  if (delta % 2 == 0) return 0.0;
  return 2.0 * l * std::sin(0.5 * kPi * delta) / (kPi * delta);
}

// Legendre nodes and weights on [-1, 1].
void gauss_legendre_unit(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

std::size_t WavefunctionGrid::r_zero_index() const {
  for (std::size_t i = 0; i < r_axis.size(); ++i)
    if (r_axis[i] == 0.0) return i;
  throw std::logic_error("grid has no r = 0 node");
}

WavefunctionGrid position_wavefunction_1d(std::span<const double> coefficients,
                                          const Sector1D& sector, double box_length,
                                          GridSpec spec) {
  if (coefficients.size() != sector.dim())
    throw DimensionMismatch("coefficient vector does not match sector");
  if (sector.total_momentum() != 0)
    throw std::invalid_argument("position wavefunction needs total momentum 0");
  if (spec.nr == 0 || spec.neta == 0 || spec.nr % 2 || spec.neta % 2)
    throw std::invalid_argument("grid sizes must be even and positive");

  WavefunctionGrid g;
  g.box_length = box_length;
  g.r_axis = cell_axis(spec.nr, box_length);
  g.eta_axis = cell_axis(spec.neta, box_length);

  // Psi = A B with A(i, s) = exp(i pi d_s r_i / L), B(s, j) = c_s exp(i 2 pi p_s eta_j / L) / L.
  const auto ns = static_cast<Eigen::Index>(sector.dim());
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(spec.nr), ns);
  Eigen::MatrixXcd b(ns, static_cast<Eigen::Index>(spec.neta));
  for (Eigen::Index s = 0; s < ns; ++s) {
    const auto& st = sector[static_cast<std::size_t>(s)];
    const double d = st.n1 - st.n2;
    for (std::size_t i = 0; i < spec.nr; ++i)
      a(static_cast<Eigen::Index>(i), s) = std::polar(1.0, kPi * d * g.r_axis[i] / box_length);
    const double c = coefficients[static_cast<std::size_t>(s)] / box_length;
    for (std::size_t j = 0; j < spec.neta; ++j)
      b(s, static_cast<Eigen::Index>(j)) = std::polar(c, 2.0 * kPi * st.p * g.eta_axis[j] / box_length);
  }
  const Eigen::MatrixXcd psi = a * b;
  g.values.resize(spec.nr * spec.neta);
  double norm = 0.0;
  for (std::size_t i = 0; i < spec.nr; ++i)
    for (std::size_t j = 0; j < spec.neta; ++j) {
      const cd v = psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      g.values[i * spec.neta + j] = v;
      norm += std::norm(v);
    }
  g.norm = norm * g.dr() * g.deta();
  return g;
}

double heavy_overlap(const WavefunctionGrid& grid) {
  const std::size_t i0 = grid.r_zero_index();
  double s = 0.0;
  for (std::size_t j = 0; j < grid.neta(); ++j) s += grid.density(i0, j);
  return s * grid.deta() / grid.norm;
}

double concentration_ratio(const WavefunctionGrid& grid, double strip_half_width) {
  const double edge_tol = 1e-9 * grid.dr();
  double inside = 0.0;
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    const double ar = std::abs(grid.r_axis[i]);
    double weight = 0.0;
    if (std::abs(ar - strip_half_width) <= edge_tol)
      weight = 0.5;
    else if (ar < strip_half_width)
      weight = 1.0;
    if (weight == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < grid.neta(); ++j) row += grid.density(i, j);
    inside += weight * row;
  }
  return inside * grid.dr() * grid.deta() / grid.norm;
}

RadialGrid RadialGrid::uniform(std::size_t n, double r_max) {
  if (n < 2) throw std::invalid_argument("uniform radial grid needs n >= 2");
  RadialGrid g;
  const double h = r_max / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    g.nodes.push_back(h * static_cast<double>(i));
    g.weights.push_back(i == 0 || i + 1 == n ? 0.5 * h : h);
  }
  return g;
}

RadialGrid RadialGrid::gauss_legendre(std::size_t n, double r_max) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre grid needs n >= 1");
  std::vector<double> x, w;
  gauss_legendre_unit(n, x, w);
  RadialGrid g;
  for (std::size_t i = 0; i < n; ++i) {
    g.nodes.push_back(0.5 * r_max * (x[i] + 1.0));
    g.weights.push_back(0.5 * r_max * w[i]);
  }
  return g;
}

SphereQuadrature SphereQuadrature::product(std::size_t n_theta, std::size_t n_phi) {
  if (n_theta == 0 || n_phi == 0) throw std::invalid_argument("empty sphere rule");
  std::vector<double> x, w;
  gauss_legendre_unit(n_theta, x, w);
  SphereQuadrature q;
  const double dphi = 2.0 * kPi / static_cast<double>(n_phi);
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));
    for (std::size_t k = 0; k < n_phi; ++k) {
      const double phi = dphi * (static_cast<double>(k) + 0.5);
      q.directions.push_back({st * std::cos(phi), st * std::sin(phi), x[i]});
      q.weights.push_back(w[i] * dphi);
    }
  }
  return q;
}

double RadialDensity3D::mass() const {
  return mass_below_r(r.nodes.empty() ? 0.0 : r.nodes.back());
}

double RadialDensity3D::mass_below_r(double r_cut) const {
  double m = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.nodes[i] > r_cut) continue;
    for (std::size_t j = 0; j < eta.size(); ++j)
      m += r.weights[i] * eta.weights[j] * at(i, j) * r.nodes[i] * r.nodes[i] * eta.nodes[j] *
           eta.nodes[j];
  }
  return m;
}

RadialDensity3D integrated_probability_3d(std::span<const double> coefficients,
                                          const Sector3D& sector, double box_length,
                                          const RadialGrid& r_grid, const RadialGrid& eta_grid,
                                          const SphereQuadrature& sphere) {
  if (coefficients.size() != sector.dim())
    throw DimensionMismatch("coefficient vector does not match sector");

  // Group states by light momentum: Psi = L^-3 sum_p exp(i 2 pi p.eta / L) phi_p(r).
  std::map<Vec3i, std::size_t> p_index;
  for (const auto& s : sector.states()) p_index.emplace(s.p, 0);
  std::vector<Vec3i> ps;
  for (auto& [p, idx] : p_index) {
    idx = ps.size();
    ps.push_back(p);
  }
  const std::size_t np = ps.size();

  // The eta angles are integrated exactly:
  // int dOmega exp(i k.eta) = 4 pi j0(|k| |eta|).
  std::vector<double> kernel(np * np * eta_grid.size());
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < np; ++b) {
      const double k = 2.0 * kPi * std::sqrt(static_cast<double>(norm_sq(ps[a] - ps[b]))) / box_length;
      for (std::size_t j = 0; j < eta_grid.size(); ++j)
        kernel[(a * np + b) * eta_grid.size() + j] = 4.0 * kPi * sinc(k * eta_grid.nodes[j]);
    }

  RadialDensity3D out;
  out.r = r_grid;
  out.eta = eta_grid;
  out.values.assign(r_grid.size() * eta_grid.size(), 0.0);
  const double l6 = std::pow(box_length, 6);

  std::vector<cd> phi(np);
  std::vector<double> gram(np * np);
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    std::fill(gram.begin(), gram.end(), 0.0);
    for (std::size_t k = 0; k < sphere.size(); ++k) {
      std::fill(phi.begin(), phi.end(), cd{});
      const auto& dir = sphere.directions[k];
      const double rad = r_grid.nodes[i];
      for (std::size_t s = 0; s < sector.dim(); ++s) {
        const auto& st = sector[s];
        const Vec3i d = st.n1 - st.n2;
        const double phase = kPi * rad * (d[0] * dir[0] + d[1] * dir[1] + d[2] * dir[2]) / box_length;
        phi[p_index.at(st.p)] += std::polar(coefficients[s], phase);
      }
      for (std::size_t a = 0; a < np; ++a)
        for (std::size_t b = 0; b < np; ++b)
          gram[a * np + b] += sphere.weights[k] * std::real(phi[a] * std::conj(phi[b]));
    }
    for (std::size_t j = 0; j < eta_grid.size(); ++j) {
      double v = 0.0;
      for (std::size_t ab = 0; ab < np * np; ++ab) v += gram[ab] * kernel[ab * eta_grid.size() + j];
      out.values[i * eta_grid.size() + j] = v / l6;
    }
  }
  return out;
}

std::vector<double> PairProjection::r_marginal() const {
  const double h = box_length / static_cast<double>(n());
  std::vector<double> m(n(), 0.0);
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < n(); ++j) m[i] += at(i, j) * h;
  return m;
}

double PairProjection::mass() const {
  const double h = box_length / static_cast<double>(n());
  double m = 0.0;
  for (double v : values) m += v * h * h;
  return m;
}

PairProjection pair_projection_3d(std::span<const double> coefficients, const Sector3D& sector,
                                  double box_length, int r_axis, int eta_axis, std::size_t n) {
  if (r_axis < 0 || r_axis > 2 || eta_axis < 0 || eta_axis > 2)
    throw std::invalid_argument("projection axes must be 0, 1 or 2");
  if (coefficients.size() != sector.dim())
    throw DimensionMismatch("coefficient vector does not match sector");
  if (n == 0) throw std::invalid_argument("projection needs n >= 1");

  // K(delta_d, delta_p) collects c_s c_s' times the integrals over the
  // four marginalized coordinates.
  std::map<std::pair<int, int>, double> k;
  const double l = box_length;
  for (std::size_t s = 0; s < sector.dim(); ++s) {
    if (coefficients[s] == 0.0) continue;
    const auto& a = sector[s];
    const Vec3i da = a.n1 - a.n2;
    for (std::size_t t = 0; t < sector.dim(); ++t) {
      if (coefficients[t] == 0.0) continue;
      const auto& b = sector[t];
      const Vec3i dd = da - (b.n1 - b.n2);
      const Vec3i dp = a.p - b.p;
      double w = coefficients[s] * coefficients[t];
      for (int c = 0; c < 3 && w != 0.0; ++c) {
        if (c != r_axis) w *= half_wave_integral(dd[c], l);
        if (c != eta_axis && dp[c] != 0) w = 0.0;
      }
      if (w == 0.0) continue;
      for (int c = 0; c < 3; ++c)
        if (c != eta_axis) w *= l;
      k[{dd[r_axis], dp[eta_axis]}] += w;
    }
  }

  PairProjection out;
  out.r_axis = r_axis;
  out.eta_axis = eta_axis;
  out.box_length = l;
  out.coordinate = cell_axis(n, l);
  out.values.assign(n * n, 0.0);
  const double l6 = std::pow(l, 6);
  for (const auto& [key, w] : k) {
    const auto [dd, dp] = key;
    for (std::size_t i = 0; i < n; ++i) {
      const double pr = kPi * dd * out.coordinate[i] / l;
      for (std::size_t j = 0; j < n; ++j)
        out.values[i * n + j] += w * std::cos(pr + 2.0 * kPi * dp * out.coordinate[j] / l) / l6;
    }
  }
  return out;
}

double AutocorrelationSeries::spectral_mass() const {
  double m = 0.0;
  for (std::size_t i = 1; i < energy_axis.size(); ++i)
    m += 0.5 * (spectral_density[i] + spectral_density[i - 1]) * (energy_axis[i] - energy_axis[i - 1]);
  return m;
}

std::complex<double> autocorrelation_at(std::span<const double> weights,
                                        std::span<const double> energies, double t) {
  cd c{};
  for (std::size_t n = 0; n < weights.size(); ++n) c += std::polar(weights[n], -energies[n] * t);
  return c;
}

AutocorrelationSeries autocorrelation(std::span<const std::complex<double>> coefficients,
                                      std::span<const double> energies,
                                      std::span<const double> times, double broadening,
                                      std::span<const double> energy_axis) {
  if (coefficients.size() != energies.size())
    throw DimensionMismatch("coefficients and energies differ in length");
  if (!(broadening > 0.0)) throw std::invalid_argument("broadening must be positive");

  AutocorrelationSeries out;
  out.broadening = broadening;
  out.energies.assign(energies.begin(), energies.end());
  for (const auto& c : coefficients) out.weights.push_back(std::norm(c));
  out.times.assign(times.begin(), times.end());
  for (double t : times) out.values.push_back(autocorrelation_at(out.weights, out.energies, t));

  if (energy_axis.empty()) {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (std::size_t n = 0; n < energies.size(); ++n) {
      if (out.weights[n] <= 0.0) continue;
      lo = any ? std::min(lo, energies[n]) : energies[n];
      hi = any ? std::max(hi, energies[n]) : energies[n];
      any = true;
    }
    lo -= 8.0 * broadening;
    hi += 8.0 * broadening;
    const double step = 0.1 * broadening;
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    for (std::size_t i = 0; i <= steps; ++i) out.energy_axis.push_back(lo + step * static_cast<double>(i));
  } else {
    out.energy_axis.assign(energy_axis.begin(), energy_axis.end());
  }

  const double norm = 1.0 / (broadening * std::sqrt(2.0 * kPi));
  out.spectral_density.assign(out.energy_axis.size(), 0.0);
  for (std::size_t i = 0; i < out.energy_axis.size(); ++i) {
    double s = 0.0;
    for (std::size_t n = 0; n < energies.size(); ++n) {
      const double x = (out.energy_axis[i] - energies[n]) / broadening;
      if (std::abs(x) < 40.0) s += out.weights[n] * std::exp(-0.5 * x * x);
    }
    out.spectral_density[i] = s * norm;
  }
  return out;
}

double first_recurrence_time(std::span<const double> weights, std::span<const double> energies,
                             double scan_step, double t_max) {
  if (weights.size() != energies.size()) throw DimensionMismatch("weights and energies differ");
  if (!(scan_step > 0.0)) throw std::invalid_argument("scan step must be positive");

  // d|C|^2/dt = 2 Re(C' conj(C))
  auto slope = [&](double t) {
    cd c{}, dc{};
    for (std::size_t n = 0; n < weights.size(); ++n) {
      const cd e = std::polar(weights[n], -energies[n] * t);
      c += e;
      dc += cd(0.0, -energies[n]) * e;
    }
    return 2.0 * std::real(dc * std::conj(c));
  };
  auto bisect = [&](double a, double b) {
    double fa = slope(a);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
      const double m = 0.5 * (a + b);
      const double fm = slope(m);
      if ((fm > 0.0) == (fa > 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };

  bool past_minimum = false;
  double t0 = scan_step;
  double s0 = slope(t0);
  while (t0 < t_max) {
    const double t1 = t0 + scan_step;
    const double s1 = slope(t1);
    if (!past_minimum && s0 < 0.0 && s1 >= 0.0) past_minimum = true;
    else if (past_minimum && s0 > 0.0 && s1 <= 0.0) return bisect(t0, t1);
    t0 = t1;
    s0 = s1;
  }
  return 0.0;
}

std::vector<std::complex<double>> project_onto_spectrum(
    std::span<const std::complex<double>> initial, const Spectrum& spectrum) {
  if (initial.size() != spectrum.dim()) throw DimensionMismatch("initial state does not match spectrum");
  std::vector<cd> out(spectrum.size());
  for (std::size_t n = 0; n < spectrum.size(); ++n) {
    cd s{};
    for (std::size_t k = 0; k < initial.size(); ++k)
      s += spectrum.eigenvectors(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) * initial[k];
    out[n] = s;
  }
  return out;
}

}  // namespace scarlab
