#include "scarlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "scarlab/errors.hpp"

namespace scarlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Dimensionless f(x, y) = cos 2 pi x - cos(pi x - 2 pi y) - cos(pi x + 2 pi y),
// so U = g (f - 1) / 2L with x = r / L, y = eta / L.
double f_value(double x, double y) {
  return std::cos(2.0 * kPi * x) - std::cos(kPi * x - 2.0 * kPi * y) - std::cos(kPi * x + 2.0 * kPi * y);
}

std::array<double, 2> f_gradient(double x, double y) {
  const double a = kPi * x - 2.0 * kPi * y;
  const double b = kPi * x + 2.0 * kPi * y;
  return {-2.0 * kPi * std::sin(2.0 * kPi * x) + kPi * std::sin(a) + kPi * std::sin(b),
          -2.0 * kPi * std::sin(a) + 2.0 * kPi * std::sin(b)};
}

std::array<double, 3> f_hessian(double x, double y) {
  const double a = kPi * x - 2.0 * kPi * y;
  const double b = kPi * x + 2.0 * kPi * y;
  const double p2 = kPi * kPi;
  return {-4.0 * p2 * std::cos(2.0 * kPi * x) + p2 * std::cos(a) + p2 * std::cos(b),
          -2.0 * p2 * std::cos(a) + 2.0 * p2 * std::cos(b),
          4.0 * p2 * std::cos(a) + 4.0 * p2 * std::cos(b)};
}

double wrap_coordinate(double x, double l, int& shifts) {
  shifts = 0;
  if (x >= -0.5 * l && x < 0.5 * l) return x;
  const double k = std::floor((x + 0.5 * l) / l);
  shifts = static_cast<int>(k);
  double w = x - k * l;
  if (w >= 0.5 * l) w -= l;
  if (w < -0.5 * l) w += l;
  return w;
}

// Stormer-Verlet substep weights for the symmetric compositions.
std::vector<double> composition(int order) {
  switch (order) {
    case 2:
      return {1.0};
    case 4: {
      const double c = std::cbrt(2.0);
      const double x1 = 1.0 / (2.0 - c);
      return {x1, -c * x1, x1};
    }
    case 6: {
      const double w1 = -1.17767998417887;
      const double w2 = 0.235573213359357;
      const double w3 = 0.784513610477560;
      const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
      return {w3, w2, w1, w0, w1, w2, w3};
    }
    default:
      throw std::invalid_argument("integrator order must be 2, 4 or 6");
  }
}

double norm3(const Vec3d& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double inverse_cube(double d) { return 1.0 / (d * d * d); }

void check_options(const IntegratorOptions& opts) {
  if (!(opts.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (opts.record_every == 0) throw std::invalid_argument("record_every must be positive");
}

}  // namespace

double effective_potential(double r, double eta, const ModelParams& params) {
  const double l = params.box_length;
  return params.energy_scale() * params.coupling * (f_value(r / l, eta / l) - 1.0) / (2.0 * l);
}

std::array<double, 2> potential_gradient(double r, double eta, const ModelParams& params) {
  const double l = params.box_length;
  const double c = params.energy_scale() * params.coupling / (2.0 * l * l);
  const auto g = f_gradient(r / l, eta / l);
  return {c * g[0], c * g[1]};
}

std::array<double, 3> potential_hessian(double r, double eta, const ModelParams& params) {
  const double l = params.box_length;
  const double c = params.energy_scale() * params.coupling / (2.0 * l * l * l);
  const auto h = f_hessian(r / l, eta / l);
  return {c * h[0], c * h[1], c * h[2]};
}

double cm_hamiltonian(const ClassicalState& s, const ModelParams& params) {
  const double kin = 2.0 * s.p_r * s.p_r + 0.5 * s.p_eta * s.p_eta / mass_eta(params.gamma);
  return params.energy_scale() * kin + effective_potential(s.r, s.eta, params);
}

StateDerivative hamilton_rhs_1d(const ClassicalState& s, const ModelParams& params) {
  const double e = params.energy_scale();
  const auto g = potential_gradient(s.r, s.eta, params);
  return {e * 4.0 * s.p_r, -g[0], e * s.p_eta / mass_eta(params.gamma), -g[1]};
}

double cm_hamiltonian_3d(const ClassicalState3D& s, const ModelParams& params) {
  double kin = 0.0;
  Vec3d a{}, b{};
  for (int i = 0; i < 3; ++i) {
    kin += 2.0 * s.p_r[i] * s.p_r[i] + 0.5 * s.p_eta[i] * s.p_eta[i] / mass_eta(params.gamma);
    a[i] = 0.5 * s.r[i] - s.eta[i];
    b[i] = 0.5 * s.r[i] + s.eta[i];
  }
  const double pot = 1.0 / norm3(s.r) - 1.0 / norm3(a) - 1.0 / norm3(b);
  return params.energy_scale_3d() * (kin + pot);
}

StateDerivative3D hamilton_rhs_3d(const ClassicalState3D& s, const ModelParams& params,
                                  double singular_distance) {
  const double e = params.energy_scale_3d();
  const double me = mass_eta(params.gamma);
  Vec3d a{}, b{};
  for (int i = 0; i < 3; ++i) {
    a[i] = 0.5 * s.r[i] - s.eta[i];
    b[i] = 0.5 * s.r[i] + s.eta[i];
  }
  const double dr = norm3(s.r), da = norm3(a), db = norm3(b);
  StateDerivative3D d;
  d.near_singularity = dr < singular_distance || da < singular_distance || db < singular_distance;
  const double ir = inverse_cube(dr), ia = inverse_cube(da), ib = inverse_cube(db);
  for (int i = 0; i < 3; ++i) {
    d.r[i] = e * 4.0 * s.p_r[i];
    d.eta[i] = e * s.p_eta[i] / me;
    d.p_r[i] = e * (s.r[i] * ir - 0.5 * a[i] * ia - 0.5 * b[i] * ib);
    d.p_eta[i] = e * (a[i] * ia - b[i] * ib);
  }
  return d;
}

void wrap_state(ClassicalState& s, double box_length) {
  int k = 0;
  s.r = wrap_coordinate(s.r, box_length, k);
  s.eta -= 0.5 * box_length * k;
  int m = 0;
  s.eta = wrap_coordinate(s.eta, box_length, m);
}

int wrap_state(ClassicalState3D& s, double box_length) {
  int moved = 0;
  for (int i = 0; i < 3; ++i) {
    int k = 0;
    s.r[i] = wrap_coordinate(s.r[i], box_length, k);
    moved += k != 0;
    s.eta[i] = wrap_coordinate(s.eta[i], box_length, k);
    moved += k != 0;
  }
  return moved;
}

std::string to_string(OrbitEvent::Kind k) {
  return k == OrbitEvent::Kind::wrap ? "wrap" : "singularity";
}

template <typename State>
double Trajectory<State>::max_relative_drift() const {
  if (energies.empty()) return 0.0;
  const double e0 = energies.front();
  const double ref = e0 != 0.0 ? std::abs(e0) : 1.0;
  double m = 0.0;
  for (double e : energies) m = std::max(m, std::abs(e - e0) / ref);
  return m;
}

template struct Trajectory<ClassicalState>;
template struct Trajectory<ClassicalState3D>;

Trajectory1D integrate_orbit_1d(const ClassicalState& initial, const ModelParams& params,
                                const IntegratorOptions& opts) {
  check_options(opts);
  const auto weights = composition(opts.order);
  const double e = params.energy_scale();
  const double me = mass_eta(params.gamma);
  const double l = params.box_length;

  Trajectory1D out;
  ClassicalState s = initial;
  out.states.push_back(s);
  out.energies.push_back(cm_hamiltonian(s, params));

  for (std::size_t step = 1; step <= opts.steps; ++step) {
    for (double w : weights) {
      const double h = w * opts.dt;
      auto g = potential_gradient(s.r, s.eta, params);
      s.p_r -= 0.5 * h * g[0];
      s.p_eta -= 0.5 * h * g[1];
      s.r += h * e * 4.0 * s.p_r;
      s.eta += h * e * s.p_eta / me;
      g = potential_gradient(s.r, s.eta, params);
      s.p_r -= 0.5 * h * g[0];
      s.p_eta -= 0.5 * h * g[1];
    }
    s.time = initial.time + opts.dt * static_cast<double>(step);
    if (opts.wrap) {
      const double r0 = s.r, eta0 = s.eta;
      wrap_state(s, l);
      if (s.r != r0 || s.eta != eta0)
        out.events.push_back({OrbitEvent::Kind::wrap, s.time, step, "cell"});
    }
    out.steps_taken = step;
    if (step % opts.record_every == 0 || step == opts.steps) {
      out.states.push_back(s);
      out.energies.push_back(cm_hamiltonian(s, params));
    }
  }
  return out;
}

Trajectory3D integrate_orbit_3d(const ClassicalState3D& initial, const ModelParams& params,
                                const IntegratorOptions& opts) {
  check_options(opts);
  const auto weights = composition(opts.order);
  const double l = params.box_length;
  const double eps = opts.singular_fraction * l;

  Trajectory3D out;
  ClassicalState3D s = initial;
  out.states.push_back(s);
  out.energies.push_back(cm_hamiltonian_3d(s, params));

  auto kick = [&](double h, bool& hit) {
    const auto d = hamilton_rhs_3d(s, params, eps);
    hit = hit || d.near_singularity;
    for (int i = 0; i < 3; ++i) {
      s.p_r[i] += h * d.p_r[i];
      s.p_eta[i] += h * d.p_eta[i];
    }
  };
  const double e = params.energy_scale_3d();
  const double me = mass_eta(params.gamma);

  for (std::size_t step = 1; step <= opts.steps; ++step) {
    bool hit = false;
    for (double w : weights) {
      const double h = w * opts.dt;
      kick(0.5 * h, hit);
      for (int i = 0; i < 3; ++i) {
        s.r[i] += h * e * 4.0 * s.p_r[i];
        s.eta[i] += h * e * s.p_eta[i] / me;
      }
      kick(0.5 * h, hit);
    }
    s.time = initial.time + opts.dt * static_cast<double>(step);
    out.steps_taken = step;
    if (hit) {
      out.stopped = true;
      out.events.push_back({OrbitEvent::Kind::singularity, s.time, step, "pair distance below limit"});
      out.states.push_back(s);
      out.energies.push_back(cm_hamiltonian_3d(s, params));
      break;
    }
    if (opts.wrap && wrap_state(s, l) > 0)
      out.events.push_back({OrbitEvent::Kind::wrap, s.time, step, "cell"});
    if (step % opts.record_every == 0 || step == opts.steps) {
      out.states.push_back(s);
      out.energies.push_back(cm_hamiltonian_3d(s, params));
    }
  }
  return out;
}

std::string to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::saddle: return "saddle";
    case CriticalKind::maximum: return "maximum";
    case CriticalKind::degenerate: return "degenerate";
  }
  return "unknown";
}

std::vector<std::array<double, 2>> default_critical_seeds(const ModelParams& params) {
  const double l = params.box_length;
  return {{0.01 * l, -0.01 * l}, {0.32 * l, 0.01 * l}, {-0.35 * l, -0.01 * l}};
}

std::vector<CriticalPoint> find_critical_points(const ModelParams& params,
                                                const std::vector<std::array<double, 2>>& seeds) {
  params.validate();
  const double l = params.box_length;
  std::vector<CriticalPoint> out;
  for (const auto& seed : seeds) {
    double x = seed[0] / l, y = seed[1] / l;
    CriticalPoint cp;
    for (int it = 0; it < 100; ++it) {
      const auto g = f_gradient(x, y);
      cp.iterations = it;
      if (std::hypot(g[0], g[1]) <= 1e-14) {
        cp.converged = true;
        break;
      }
      const auto h = f_hessian(x, y);
      const double det = h[0] * h[2] - h[1] * h[1];
      if (det == 0.0) break;
      const double dx = (h[2] * g[0] - h[1] * g[1]) / det;
      const double dy = (h[0] * g[1] - h[1] * g[0]) / det;
      // Damped so a step never crosses more than a tenth of the cell.
      const double step = std::hypot(dx, dy);
      const double damp = step > 0.1 ? 0.1 / step : 1.0;
      x -= damp * dx;
      y -= damp * dy;
    }
    ClassicalState s{x * l, 0.0, y * l, 0.0, 0.0};
    wrap_state(s, l);
    cp.r = std::abs(s.r) < 1e-13 * l ? 0.0 : s.r;
    cp.eta = std::abs(s.eta) < 1e-13 * l ? 0.0 : s.eta;
    const auto grad = potential_gradient(cp.r, cp.eta, params);
    cp.gradient_norm = std::hypot(grad[0], grad[1]);
    cp.value = effective_potential(cp.r, cp.eta, params);
    const auto h = potential_hessian(cp.r, cp.eta, params);
    const double mean = 0.5 * (h[0] + h[2]);
    const double rad = std::hypot(0.5 * (h[0] - h[2]), h[1]);
    cp.hessian_eigenvalues = {mean - rad, mean + rad};
    const double tol = 1e-12 * std::max(std::abs(h[0]) + std::abs(h[2]), 1e-300);
    if (std::abs(cp.hessian_eigenvalues[0]) <= tol || std::abs(cp.hessian_eigenvalues[1]) <= tol)
      cp.kind = CriticalKind::degenerate;
    else if (cp.hessian_eigenvalues[0] > 0.0)
      cp.kind = CriticalKind::minimum;
    else if (cp.hessian_eigenvalues[1] < 0.0)
      cp.kind = CriticalKind::maximum;
    else
      cp.kind = CriticalKind::saddle;
    out.push_back(cp);
  }
  return out;
}

std::optional<std::size_t> SaddleAnalysis::stable_mode() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (modes[i].stable && (!best || modes[i].frequency > modes[*best].frequency)) best = i;
  return best;
}

std::optional<std::size_t> SaddleAnalysis::unstable_mode() const {
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (!modes[i].stable) return i;
  return std::nullopt;
}

double SaddleAnalysis::omega() const {
  const auto i = stable_mode();
  if (!i) throw NumericalError("critical point has no stable mode");
  return modes[*i].frequency;
}

double SaddleAnalysis::tau() const { return 2.0 * kPi / omega(); }

double SaddleAnalysis::lambda_rate() const {
  const auto i = unstable_mode();
  if (!i) throw NumericalError("critical point has no unstable mode");
  return modes[*i].frequency;
}

double SaddleAnalysis::lambda_curvature() const {
  const auto i = unstable_mode();
  if (!i) throw NumericalError("critical point has no unstable mode");
  return std::abs(modes[*i].sigma);
}

double SaddleAnalysis::tau_min() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& m : modes)
    if (m.frequency > 0.0) t = std::min(t, 2.0 * kPi / m.frequency);
  return t;
}

SaddleAnalysis SaddleAnalysis::scaled() const {
  SaddleAnalysis s = *this;
  for (auto& m : s.modes) {
    m.sigma *= energy_scale;
    m.mass /= energy_scale;
    m.frequency *= energy_scale;
  }
  s.point.hessian_eigenvalues[0] *= energy_scale;
  s.point.hessian_eigenvalues[1] *= energy_scale;
  s.energy_scale = 1.0;
  return s;
}

SaddleAnalysis hessian_analysis(const CriticalPoint& point, const ModelParams& params) {
  ModelParams raw = params;
  raw.scaling = Scaling::raw;
  const auto h = potential_hessian(point.r, point.eta, raw);

  SaddleAnalysis a;
  a.point = point;
  a.energy_scale = params.energy_scale();
  Eigen::Matrix2d hm;
  hm << h[0], h[1], h[1], h[2];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hm);
  const double mu[2] = {mass_r(), mass_eta(params.gamma)};
  const double scale = std::abs(h[0]) + std::abs(h[2]);
  for (int i = 0; i < 2; ++i) {
    auto& m = a.modes[static_cast<std::size_t>(i)];
    m.sigma = es.eigenvalues()(i);
    const Eigen::Vector2d v = es.eigenvectors().col(i);
    m.direction = {v(0), v(1)};
    m.mass = mu[0] * v(0) * v(0) + mu[1] * v(1) * v(1);
    m.frequency = std::sqrt(std::abs(m.sigma) / m.mass);
    m.stable = m.sigma > 0.0;
    if (std::abs(m.sigma) <= 1e-12 * scale) a.degenerate = true;
  }
  return a;
}

double select_time_step(const SaddleAnalysis& analysis, double fraction) {
  const double t = analysis.scaled().tau_min();
  if (!std::isfinite(t)) throw NumericalError("no finite mode period for step selection");
  return fraction * t;
}

std::vector<ClassicalState3D> planar_seed_ensemble(double box_length, std::size_t count,
                                                   double offset_fraction) {
  std::vector<ClassicalState3D> out;
  const std::size_t per_side = std::max<std::size_t>(1, count / 2);
  for (std::size_t k = 0; k < per_side; ++k) {
    const double eta2 = box_length * (-0.3 + 0.6 * (static_cast<double>(k) + 0.5) / static_cast<double>(per_side));
    for (double side : {1.0, -1.0}) {
      ClassicalState3D s;
      s.r[0] = side * offset_fraction * box_length;
      s.eta[1] = eta2;
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace scarlab
