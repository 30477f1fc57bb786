#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scarlab/basis.hpp"
#include "scarlab/classical.hpp"
#include "scarlab/eigensolve.hpp"
#include "scarlab/errors.hpp"
#include "scarlab/export.hpp"
#include "scarlab/hamiltonian_1d.hpp"
#include "scarlab/hamiltonian_3d.hpp"
#include "scarlab/params.hpp"
#include "scarlab/scar_estimates.hpp"
#include "scarlab/wavefunction.hpp"

#ifndef SCARLAB_VERSION
#define SCARLAB_VERSION "unknown"
#endif

namespace scarlab::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model",
       {"gamma", "box_length", "coupling", "heavy_cutoff", "cutoff_sq", "scaling", "scaling_3d",
        "light_mode_1d", "light_mode_3d"}},
      {"solve1d", {"total_momentum", "band_gap", "dense_threshold", "count", "levels"}},
      {"solve3d",
       {"total_momentum", "count", "parity", "solver", "window_lo", "window_hi", "seed",
        "memory_budget_mb", "dense_threshold"}},
      {"analyze",
       {"model", "states", "spectrum_file", "band_gap", "energy_tolerance", "grid_r", "grid_eta",
        "strip_half_width", "initial_eigenstates", "initial_amplitudes", "t_max", "t_steps",
        "broadening", "radial_nodes", "sphere_theta", "sphere_phi", "projection_nodes",
        "small_r_fraction"}},
      {"orbit",
       {"dimension", "r", "eta", "p_r", "p_eta", "steps", "dt", "order", "record_every",
        "reverse", "ensemble", "offset"}},
      {"estimate", {"levels", "convention"}},
      {"report", {"spectrum_file", "band_gap", "levels", "convention"}},
  };
  return keys;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json model_json(const ModelParams& p) {
  return {{"gamma", p.gamma},
          {"box_length", p.box_length},
          {"coupling", p.coupling},
          {"heavy_cutoff", p.heavy_cutoff},
          {"cutoff_sq", p.cutoff_sq},
          {"scaling", std::string(to_string(p.scaling))},
          {"scaling_3d", std::string(to_string(p.scaling_3d))},
          {"light_mode_1d", std::string(to_string(p.light_mode_1d))},
          {"light_mode_3d", std::string(to_string(p.light_mode_3d))}};
}

/// Collects every file a command writes and emits manifest_<command>.json last.
class Manifest {
 public:
  Manifest(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {
    fs::create_directories(dir_);
    doc_["tool"] = "scarlab";
    doc_["version"] = SCARLAB_VERSION;
    doc_["command"] = command_;
  }

  std::ofstream open(const std::string& name) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw Error("cannot write " + (dir_ / name).string());
    files_.push_back(name);
    return os;
  }
  void add_file(const std::string& name) { files_.push_back(name); }
  fs::path path(const std::string& name) const { return dir_ / name; }

  json& operator[](const std::string& key) { return doc_[key]; }
  void timing(const std::string& key, double s) { doc_["timings_s"][key] = s; }

  void write() {
    json list = json::array();
    for (const auto& f : files_) {
      std::error_code ec;
      const auto size = fs::file_size(dir_ / f, ec);
      list.push_back({{"file", f}, {"bytes", ec ? 0 : size}});
    }
    const std::string name = "manifest_" + command_ + ".json";
    list.push_back({{"file", name}});
    doc_["artifacts"] = list;
    std::ofstream os(dir_ / name);
    os << doc_.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path dir_;
  json doc_;
  std::vector<std::string> files_;
};

void write_text(Manifest& m, const std::string& name, const std::string& text) {
  auto os = m.open(name);
  os << text << '\n';
}

int int_key(const ConfigFile& c, const char* section, const char* key, int fallback) {
  return c.get_int(section, key, fallback);
}

std::vector<int> int_list(const ConfigFile& c, const char* section, const char* key) {
  std::vector<int> out;
  for (double v : c.get_doubles(section, key, {})) {
    if (v != std::floor(v)) {
      const auto e = c.find(section, key);
      throw ConfigError(c.source() + ":" + std::to_string(e ? e->line : 0) + ": key '" + key +
                            "' expects integers",
                        key, e ? e->line : 0);
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Vec3i vec3_key(const ConfigFile& c, const char* section, const char* key) {
  const auto v = int_list(c, section, key);
  if (v.empty()) return {0, 0, 0};
  if (v.size() != 3) {
    const auto e = c.find(section, key);
    throw ConfigError(c.source() + ":" + std::to_string(e ? e->line : 0) + ": key '" + key +
                          "' expects three integers",
                      key, e ? e->line : 0);
  }
  return {v[0], v[1], v[2]};
}

IntensityConvention convention_key(const ConfigFile& c, const char* section) {
  const auto s = c.get_string(section, "convention", "rate");
  if (s == "rate") return IntensityConvention::rate;
  if (s == "curvature") return IntensityConvention::curvature;
  const auto e = c.find(section, "convention");
  throw ConfigError(c.source() + ":" + std::to_string(e ? e->line : 0) +
                        ": key 'convention' expects rate|curvature, got '" + s + "'",
                    "convention", e ? e->line : 0);
}

SaddleAnalysis origin_saddle(const ModelParams& p) {
  const auto cps = find_critical_points(p, {{0.0, 0.0}});
  if (cps.empty() || !cps.front().converged || cps.front().kind != CriticalKind::saddle)
    throw NumericalError("saddle at the origin not found");
  return hessian_analysis(cps.front(), p);
}

Spectrum load_spectrum(const fs::path& path, std::size_t expected_dim) {
  if (!fs::exists(path))
    throw ConfigError("spectrum file '" + path.string() + "' not found; run the solve command first",
                      "spectrum_file");
  auto s = read_eigenvectors(path.string());
  if (s.dim() != expected_dim)
    throw ConfigError("spectrum file '" + path.string() + "' has dimension " +
                          std::to_string(s.dim()) + " but the configured sector has " +
                          std::to_string(expected_dim),
                      "spectrum_file");
  return s;
}

/// ground | all | index:I | band:K | band-top:K | energy:E, comma separated.
std::vector<std::size_t> select_states(const std::string& selector, const Spectrum& s,
                                       const std::vector<Band>& bands, double energy_tol) {
  std::set<std::size_t> picked;
  std::stringstream ss(selector);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    const auto colon = tok.find(':');
    const std::string kind = tok.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : tok.substr(colon + 1);
    auto bad = [&] { return ConfigError("bad state selector '" + tok + "'", "states"); };
    try {
      if (kind == "ground") {
        if (s.size()) picked.insert(0);
      } else if (kind == "all") {
        for (std::size_t i = 0; i < s.size(); ++i) picked.insert(i);
      } else if (kind == "index") {
        const auto i = static_cast<std::size_t>(std::stoul(arg));
        if (i < s.size()) picked.insert(i);
      } else if (kind == "band" || kind == "band-top") {
        const int id = std::stoi(arg);
        for (const auto& b : bands) {
          if (b.id != id) continue;
          if (kind == "band-top") {
            picked.insert(b.last);
          } else {
            for (std::size_t i = b.first; i <= b.last; ++i) picked.insert(i);
          }
        }
      } else if (kind == "energy") {
        const double e = std::stod(arg);
        std::size_t best = 0;
        for (std::size_t i = 1; i < s.size(); ++i)
          if (std::abs(s.eigenvalues[i] - e) < std::abs(s.eigenvalues[best] - e)) best = i;
        if (s.size() && std::abs(s.eigenvalues[best] - e) <= energy_tol) picked.insert(best);
      } else {
        throw bad();
      }
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  if (picked.empty()) throw ConfigError("selector '" + selector + "' matches no state", "states");
  return {picked.begin(), picked.end()};
}

int band_of(const std::vector<Band>& bands, std::size_t i) {
  for (const auto& b : bands)
    if (b.contains(i)) return b.id;
  return 0;
}

}  // namespace

void validate_config(const ConfigFile& config) {
  std::set<std::string> sections;
  for (const auto& [name, keys] : known_keys()) {
    sections.insert(name);
    config.require_known_keys(name, keys);
  }
  config.require_known_sections(sections);
}

void apply_overrides(ConfigFile& config, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw ConfigError("override '" + o + "' is not of the form section.key=value", o);
    config.set(o.substr(0, dot), o.substr(dot + 1, eq - dot - 1), o.substr(eq + 1));
  }
}

int solve1d(const ConfigFile& config, const Options& opts, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = model_params_from_config(config);
  p.validate();
  const int total = int_key(config, "solve1d", "total_momentum", 0);
  const double band_gap = config.get_double("solve1d", "band_gap", 2.0);
  const int threshold = int_key(config, "solve1d", "dense_threshold", 4096);
  const int count = int_key(config, "solve1d", "count", 12);
  const int levels = int_key(config, "solve1d", "levels", 3);

  Manifest m("solve1d", opts.out_dir);
  m["parameters"] = {{"model", model_json(p)},
                     {"solve1d",
                      {{"total_momentum", total},
                       {"band_gap", band_gap},
                       {"dense_threshold", threshold},
                       {"count", count},
                       {"levels", levels}}}};

  const auto sector = enumerate_basis_1d(p, total);
  const MatrixElementRule1D rule(p);
  m["basis"] = {{"sector", sector.key()}, {"dimension", sector.dim()}};
  m.timing("basis", seconds_since(t0));

  Spectrum spec;
  const auto t1 = std::chrono::steady_clock::now();
  if (sector.dim() <= static_cast<std::size_t>(threshold)) {
    spec = solve_dense(sector, rule, {static_cast<std::size_t>(threshold), 1e-11});
    m["solver"] = "dense";
  } else {
    const auto h = build_hamiltonian_1d(sector, rule);
    IterativeOptions io;
    io.count = static_cast<std::size_t>(count);
    spec = solve_iterative(h, sector.key(), io);
    m["solver"] = "iterative";
  }
  m.timing("solve", seconds_since(t1));

  const auto bands = assemble_bands(spec, band_gap);
  {
    auto os = m.open("spectrum_1d.csv");
    write_spectrum_csv(os, spec, bands);
  }
  {
    auto os = m.open("bands_1d.csv");
    write_bands_csv(os, bands);
  }
  write_eigenvectors(m.path("eigenvectors_1d.bin").string(), spec);
  m.add_file("eigenvectors_1d.bin");

  const auto saddle = origin_saddle(p);
  const double v0 = effective_potential(0.0, 0.0, p);
  const auto rep = compare_with_spectrum(saddle.scaled(), v0, spec.eigenvalues, bands, levels);
  write_text(m, "comparison_report.json", comparison_report_json(rep));
  m["summary"] = {{"ground_energy", spec.eigenvalues.front()},
                  {"bands", bands.size()},
                  {"band1_top", bands.front().top}};
  m.timing("total", seconds_since(t0));
  m.write();

  out << "solve1d: " << sector.dim() << " states, E0 = " << format_double(spec.eigenvalues.front())
      << ", band 1 top = " << format_double(bands.front().top) << ", " << bands.size()
      << " bands\n";
  return kOk;
}

int solve3d(const ConfigFile& config, const Options& opts, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = model_params_from_config(config);
  p.validate();
  const Vec3i total = vec3_key(config, "solve3d", "total_momentum");
  const int count = int_key(config, "solve3d", "count", 6);
  const std::string parity = config.get_string("solve3d", "parity", "both");
  const std::string solver = config.get_string("solve3d", "solver", "auto");
  const int seed = int_key(config, "solve3d", "seed", 0x5CA7A11);
  const double budget_mb = config.get_double("solve3d", "memory_budget_mb", 64.0);
  const int threshold = int_key(config, "solve3d", "dense_threshold", 4096);
  const auto wlo = config.find("solve3d", "window_lo");
  const auto whi = config.find("solve3d", "window_hi");
  if (parity != "both" && parity != "symmetric" && parity != "antisymmetric")
    throw ConfigError("key 'parity' expects both|symmetric|antisymmetric", "parity");
  if (solver != "auto" && solver != "dense" && solver != "iterative")
    throw ConfigError("key 'solver' expects auto|dense|iterative", "solver");
  if (bool(wlo) != bool(whi)) throw ConfigError("window_lo and window_hi go together", "window_lo");

  const auto budget = static_cast<std::size_t>(budget_mb * 1024.0 * 1024.0);
  const auto required = full_basis_3d_bytes(p.cutoff_sq);
  if (required > budget && !opts.allow_large) {
    std::ostringstream msg;
    msg << "cutoff_sq = " << p.cutoff_sq << " needs about " << required / (1024 * 1024)
        << " MiB for the full basis (budget " << budget / (1024 * 1024)
        << " MiB); pass --allow-large to run it";
    throw ResourceLimitError(msg.str(), required, budget);
  }

  Manifest m("solve3d", opts.out_dir);
  json section = {{"total_momentum", {total[0], total[1], total[2]}},
                  {"count", count},
                  {"parity", parity},
                  {"solver", solver},
                  {"seed", seed},
                  {"memory_budget_mb", budget_mb},
                  {"dense_threshold", threshold},
                  {"allow_large", opts.allow_large}};
  if (wlo) section["window"] = {config.get_double("solve3d", "window_lo", 0), config.get_double("solve3d", "window_hi", 0)};
  m["parameters"] = {{"model", model_json(p)}, {"solve3d", section}};

  const auto sector = enumerate_sector_3d(p.cutoff_sq, total, p.light_mode_3d);
  const MatrixElementRule3D rule(p);
  const auto h = build_hamiltonian_3d(sector, rule);
  auto [sym, anti] = symmetrize_sector(sector);
  m["basis"] = {{"sector", sector.key()},
                {"dimension", sector.dim()},
                {"symmetric", sym.dim()},
                {"antisymmetric", anti.dim()},
                {"nonzeros", h.nonzeros()},
                {"full_basis_bytes_estimate", required}};
  m.timing("build", seconds_since(t0));

  auto os = m.open("spectrum_3d.csv");
  os << "index,energy,residual,parity\n";
  std::map<std::string, double> grounds;
  json solved = json::object();
  for (const auto* block : {&sym, &anti}) {
    const std::string tag = block->parity > 0 ? "symmetric" : "antisymmetric";
    if (parity != "both" && parity != tag) continue;
    if (block->dim() == 0) continue;
    const auto t1 = std::chrono::steady_clock::now();
    const auto hb = build_symmetrized_hamiltonian_3d(sector, *block, h);
    const bool dense = solver == "dense" || (solver == "auto" && block->dim() <= static_cast<std::size_t>(threshold) && !wlo);
    Spectrum s;
    if (dense) {
      s = solve_dense(hb, sector.key() + ":" + tag, {static_cast<std::size_t>(threshold), 1e-11});
    } else {
      IterativeOptions io;
      io.count = static_cast<std::size_t>(count);
      io.seed = static_cast<std::uint64_t>(seed);
      if (wlo) io.window = EnergyWindow{config.get_double("solve3d", "window_lo", 0), config.get_double("solve3d", "window_hi", 0)};
      s = solve_iterative(hb, sector.key() + ":" + tag, io);
    }
    const std::size_t keep = dense ? std::min<std::size_t>(s.size(), static_cast<std::size_t>(count)) : s.size();
    for (std::size_t i = 0; i < keep; ++i)
      os << i << ',' << format_double(s.eigenvalues[i]) << ',' << format_double(s.residuals[i]) << ','
         << tag << '\n';
    write_eigenvectors(m.path("eigenvectors_3d_" + tag + ".bin").string(), s);
    m.add_file("eigenvectors_3d_" + tag + ".bin");
    if (s.size()) grounds[tag] = s.eigenvalues.front();
    solved[tag] = {{"dimension", block->dim()}, {"solver", dense ? "dense" : "iterative"},
                   {"pairs", s.size()}, {"seconds", seconds_since(t1)}};
  }
  os.close();
  m["blocks"] = solved;

  std::string ordering = "n/a";
  if (grounds.count("symmetric") && grounds.count("antisymmetric"))
    ordering = grounds["symmetric"] < grounds["antisymmetric"] ? "symmetric-below-antisymmetric"
                                                               : "antisymmetric-below-symmetric";
  m["ground_ordering"] = ordering;
  m.timing("total", seconds_since(t0));
  m.write();

  out << "solve3d: sector " << sector.key() << ", " << sector.dim() << " states (" << sym.dim()
      << " symmetric, " << anti.dim() << " antisymmetric)";
  for (const auto& [tag, e] : grounds) out << ", " << tag << " ground " << format_double(e);
  out << ", ordering " << ordering << '\n';
  return kOk;
}

namespace {

int analyze_1d(const ConfigFile& config, const Options& opts, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = model_params_from_config(config);
  p.validate();
  const auto sector = enumerate_basis_1d(p, 0);
  const fs::path file = config.get_string("analyze", "spectrum_file",
                                          (opts.out_dir / "eigenvectors_1d.bin").string());
  const auto spec = load_spectrum(file, sector.dim());
  const double band_gap = config.get_double("analyze", "band_gap", 2.0);
  const auto bands = assemble_bands(spec, band_gap);
  const std::string selector = config.get_string("analyze", "states", "band:1");
  const double tol = config.get_double("analyze", "energy_tolerance", 0.01);
  const GridSpec grid{static_cast<std::size_t>(int_key(config, "analyze", "grid_r", 128)),
                      static_cast<std::size_t>(int_key(config, "analyze", "grid_eta", 128))};
  const double strip = config.get_double("analyze", "strip_half_width", 1.0 / 16.0) * p.box_length;
  const auto picked = select_states(selector, spec, bands, tol);

  Manifest m("analyze", opts.out_dir);
  m["parameters"] = {{"model", model_json(p)},
                     {"analyze",
                      {{"model", "1d"},
                       {"states", selector},
                       {"spectrum_file", file.string()},
                       {"band_gap", band_gap},
                       {"energy_tolerance", tol},
                       {"grid_r", grid.nr},
                       {"grid_eta", grid.neta},
                       {"strip_half_width", strip / p.box_length}}}};

  auto table = m.open("overlaps_1d.csv");
  table << "index,energy,band,is_band_top,heavy_overlap,concentration_ratio,grid_norm\n";
  for (std::size_t idx : picked) {
    const auto v = spec.eigenvector(idx);
    const auto g = position_wavefunction_1d(v, sector, p.box_length, grid);
    const double ov = heavy_overlap(g);
    const double conc = concentration_ratio(g, strip);
    const int band = band_of(bands, idx);
    bool top = false;
    for (const auto& b : bands) top = top || (b.id == band && b.last == idx);
    table << idx << ',' << format_double(spec.eigenvalues[idx]) << ',' << band << ','
          << (top ? 1 : 0) << ',' << format_double(ov) << ',' << format_double(conc) << ','
          << format_double(g.norm) << '\n';

    const std::string stem = "grid_1d_state" + std::to_string(idx);
    {
      auto os = m.open(stem + ".csv");
      write_grid_csv(os, g);
    }
    json side = {{"state", idx},
                 {"energy", spec.eigenvalues[idx]},
                 {"band", band},
                 {"is_band_top", top},
                 {"heavy_overlap", ov},
                 {"concentration_ratio", conc},
                 {"grid_norm", g.norm},
                 {"r_axis", {g.r_axis.front(), g.r_axis.back(), g.nr()}},
                 {"eta_axis", {g.eta_axis.front(), g.eta_axis.back(), g.neta()}}};
    write_text(m, stem + ".json", side.dump(2));
  }
  table.close();

  const auto init = int_list(config, "analyze", "initial_eigenstates");
  if (!init.empty()) {
    auto amps = config.get_doubles("analyze", "initial_amplitudes", {});
    if (amps.empty()) amps.assign(init.size(), 1.0);
    if (amps.size() != init.size())
      throw ConfigError("initial_amplitudes must match initial_eigenstates", "initial_amplitudes");
    std::vector<std::complex<double>> c(spec.size());
    double norm = 0.0;
    for (std::size_t k = 0; k < init.size(); ++k) {
      if (init[k] < 0 || static_cast<std::size_t>(init[k]) >= spec.size())
        throw ConfigError("initial eigenstate " + std::to_string(init[k]) + " out of range",
                          "initial_eigenstates");
      c[static_cast<std::size_t>(init[k])] += amps[k];
      norm += amps[k] * amps[k];
    }
    for (auto& x : c) x /= std::sqrt(norm);
    const auto saddle = origin_saddle(p).scaled();
    double width = config.get_double("analyze", "broadening", 0.0);
    if (width <= 0.0) width = saddle.lambda_rate();
    const int steps = int_key(config, "analyze", "t_steps", 512);
    const double t_max = config.get_double("analyze", "t_max", 4.0 * saddle.tau());
    std::vector<double> times(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) times[static_cast<std::size_t>(i)] = t_max * i / steps;
    const auto series = autocorrelation(c, spec.eigenvalues, times, width);
    {
      auto os = m.open("autocorrelation.csv");
      write_autocorrelation_csv(os, series);
    }
    {
      auto os = m.open("spectral_density.csv");
      write_spectral_density_csv(os, series);
    }
    const double rec = first_recurrence_time(series.weights, series.energies, t_max / (20.0 * steps), t_max);
    m["autocorrelation"] = {{"broadening", width},
                            {"t_max", t_max},
                            {"t_steps", steps},
                            {"spectral_mass", series.spectral_mass()},
                            {"first_recurrence", rec}};
  }
  m.timing("total", seconds_since(t0));
  m.write();
  out << "analyze: " << picked.size() << " states from " << file.string() << '\n';
  return kOk;
}

int analyze_3d(const ConfigFile& config, const Options& opts, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = model_params_from_config(config);
  p.validate();
  const Vec3i total = vec3_key(config, "solve3d", "total_momentum");
  if (total != Vec3i{0, 0, 0})
    throw ConfigError("3D analysis needs total momentum 0", "total_momentum");
  const auto required = full_basis_3d_bytes(p.cutoff_sq);
  const auto budget = static_cast<std::size_t>(config.get_double("solve3d", "memory_budget_mb", 64.0) * 1024 * 1024);
  if (required > budget && !opts.allow_large)
    throw ResourceLimitError("3D reconstruction at cutoff_sq = " + std::to_string(p.cutoff_sq) +
                                 " exceeds the memory budget; pass --allow-large",
                             required, budget);
  const auto sector = enumerate_sector_3d(p.cutoff_sq, total, p.light_mode_3d);
  auto [sym, anti] = symmetrize_sector(sector);
  const std::string selector = config.get_string("analyze", "states", "ground");
  const double tol = config.get_double("analyze", "energy_tolerance", 0.01);
  const auto nr = static_cast<std::size_t>(int_key(config, "analyze", "radial_nodes", 24));
  const auto nt = static_cast<std::size_t>(int_key(config, "analyze", "sphere_theta", 12));
  const auto np = static_cast<std::size_t>(int_key(config, "analyze", "sphere_phi", 24));
  const auto npj = static_cast<std::size_t>(int_key(config, "analyze", "projection_nodes", 48));
  const double small = config.get_double("analyze", "small_r_fraction", 0.125);

  Manifest m("analyze", opts.out_dir);
  m["parameters"] = {{"model", model_json(p)},
                     {"analyze",
                      {{"model", "3d"},
                       {"states", selector},
                       {"energy_tolerance", tol},
                       {"radial_nodes", nr},
                       {"sphere_theta", nt},
                       {"sphere_phi", np},
                       {"projection_nodes", npj},
                       {"small_r_fraction", small}}}};

  const double half = 0.5 * p.box_length;
  const auto rg = RadialGrid::gauss_legendre(nr, half);
  const auto rg_small = RadialGrid::gauss_legendre(nr, small * p.box_length);
  const auto sphere = SphereQuadrature::product(nt, np);
  json states = json::array();
  for (const auto* block : {&sym, &anti}) {
    if (block->dim() == 0) continue;
    const std::string tag = block->parity > 0 ? "symmetric" : "antisymmetric";
    const auto spec = load_spectrum(opts.out_dir / ("eigenvectors_3d_" + tag + ".bin"), block->dim());
    for (std::size_t idx : select_states(selector, spec, {}, tol)) {
      const auto plain = expand_symmetrized(spec.eigenvector(idx), *block, sector);
      const auto rho = integrated_probability_3d(plain, sector, p.box_length, rg, rg, sphere);
      const std::string stem = tag + "_state" + std::to_string(idx);
      {
        auto os = m.open("radial_density_3d_" + stem + ".csv");
        write_radial_density_csv(os, rho);
      }
      for (int eta_axis : {0, 1}) {
        const auto proj = pair_projection_3d(plain, sector, p.box_length, 0, eta_axis, npj);
        auto os = m.open("projection_r1_eta" + std::to_string(eta_axis + 1) + "_" + stem + ".csv");
        write_projection_csv(os, proj);
      }
      const double frac =
          integrated_probability_3d(plain, sector, p.box_length, rg_small, rg, sphere).mass() / rho.mass();
      states.push_back({{"parity", tag},
                        {"state", idx},
                        {"energy", spec.eigenvalues[idx]},
                        {"ball_mass", rho.mass()},
                        {"small_r_probability", frac}});
    }
  }
  m["states"] = states;
  m.timing("total", seconds_since(t0));
  m.write();
  out << "analyze: " << states.size() << " 3D states\n";
  return kOk;
}

}  // namespace

int analyze(const ConfigFile& config, const Options& opts, std::ostream& out) {
  const std::string model = config.get_string("analyze", "model", "1d");
  if (model == "1d") return analyze_1d(config, opts, out);
  if (model == "3d") return analyze_3d(config, opts, out);
  throw ConfigError("key 'model' in [analyze] expects 1d|3d, got '" + model + "'", "model");
}

int orbit(const ConfigFile& config, const Options& opts, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = model_params_from_config(config);
  p.validate();
  const int dim = int_key(config, "orbit", "dimension", 1);
  IntegratorOptions io;
  io.steps = static_cast<std::size_t>(int_key(config, "orbit", "steps", 10000));
  io.order = int_key(config, "orbit", "order", 6);
  io.record_every = static_cast<std::size_t>(int_key(config, "orbit", "record_every", 10));
  io.dt = config.get_double("orbit", "dt", 0.0);
  const bool reverse = config.get_bool("orbit", "reverse", false);
  const double l = p.box_length;

  Manifest m("orbit", opts.out_dir);
  json section = {{"dimension", dim}, {"steps", io.steps}, {"order", io.order},
                  {"record_every", io.record_every}, {"reverse", reverse}};

  if (dim == 1) {
    if (io.dt <= 0.0) io.dt = select_time_step(origin_saddle(p));
    ClassicalState s{config.get_double("orbit", "r", 0.0) * l, config.get_double("orbit", "p_r", 0.0),
                     config.get_double("orbit", "eta", 0.0) * l,
                     config.get_double("orbit", "p_eta", 0.0), 0.0};
    section.update({{"dt", io.dt}, {"r", s.r / l}, {"eta", s.eta / l}, {"p_r", s.p_r}, {"p_eta", s.p_eta}});
    m["parameters"] = {{"model", model_json(p)}, {"orbit", section}};
    const auto traj = integrate_orbit_1d(s, p, io);
    {
      auto os = m.open("trajectory_1d.csv");
      write_trajectory_csv(os, traj);
    }
    json res = {{"energy_drift", traj.max_relative_drift()}, {"wraps", traj.events.size()}};
    if (reverse) {
      auto back = traj.final_state();
      back.p_r = -back.p_r;
      back.p_eta = -back.p_eta;
      IntegratorOptions ro = io;
      ro.record_every = io.steps;
      const auto rt = integrate_orbit_1d(back, p, ro).final_state();
      res["closure"] = std::hypot(rt.r - s.r, rt.eta - s.eta) / l;
      res["closure_momentum"] = std::hypot(rt.p_r + s.p_r, rt.p_eta + s.p_eta);
    }
    m["result"] = res;
    out << "orbit: 1D, " << io.steps << " steps, dt " << format_double(io.dt) << ", drift "
        << format_double(traj.max_relative_drift()) << '\n';
  } else if (dim == 3) {
    const int n = int_key(config, "orbit", "ensemble", 8);
    const double offset = config.get_double("orbit", "offset", 0.02);
    if (io.dt <= 0.0) {
      // light-particle Kepler period at the seed offset
      const double d = offset * l;
      io.dt = 2.0 * std::numbers::pi * std::sqrt(mass_eta(p.gamma) * d * d * d) / p.energy_scale_3d() / 200.0;
    }
    section.update({{"dt", io.dt}, {"ensemble", n}, {"offset", offset}});
    m["parameters"] = {{"model", model_json(p)}, {"orbit", section}};
    const auto seeds = planar_seed_ensemble(l, static_cast<std::size_t>(n), offset);
    std::vector<Trajectory3D> orbits;
    std::vector<std::string> labels;
    json list = json::array();
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      auto traj = integrate_orbit_3d(seeds[k], p, io);
      // side by outcome: the sign of r1 up to the first wrap or stop
      bool right = true, left = true;
      double t_end = traj.events.empty() ? traj.final_state().time : traj.events.front().time;
      for (const auto& st : traj.states) {
        if (st.time >= t_end) break;
        right = right && st.r[0] > 0.0;
        left = left && st.r[0] < 0.0;
      }
      const std::string side = right ? "right" : left ? "left" : "crossing";
      {
        auto os = m.open("trajectory_3d_" + std::to_string(k) + ".csv");
        write_trajectory_csv(os, traj);
      }
      list.push_back({{"orbit", k}, {"side", side}, {"stopped", traj.stopped},
                      {"events", traj.events.size()}, {"steps", traj.steps_taken}});
      labels.push_back(side);
      orbits.push_back(std::move(traj));
    }
    {
      auto os = m.open("phase_portrait.csv");
      write_phase_portrait_csv(os, orbits, labels);
    }
    m["orbits"] = list;
    out << "orbit: 3D planar ensemble of " << orbits.size() << ", dt " << format_double(io.dt) << '\n';
  } else {
    throw ConfigError("key 'dimension' in [orbit] expects 1 or 3", "dimension");
  }
  m.timing("total", seconds_since(t0));
  m.write();
  return kOk;
}

int estimate(const ConfigFile& config, const Options& opts, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = model_params_from_config(config);
  p.validate();
  const int levels = int_key(config, "estimate", "levels", 3);
  const auto conv = convention_key(config, "estimate");
  Manifest m("estimate", opts.out_dir);
  m["parameters"] = {{"model", model_json(p)},
                     {"estimate", {{"levels", levels}, {"convention", to_string(conv)}}}};

  const auto cps = find_critical_points(p, default_critical_seeds(p));
  json points = json::array();
  for (const auto& c : cps)
    points.push_back({{"kind", to_string(c.kind)}, {"r", c.r}, {"eta", c.eta}, {"value", c.value},
                      {"hessian_eigenvalues", {c.hessian_eigenvalues[0], c.hessian_eigenvalues[1]}},
                      {"gradient_norm", c.gradient_norm}, {"converged", c.converged}});
  const auto saddle = origin_saddle(p).scaled();
  const double v0 = effective_potential(0.0, 0.0, p);
  json lv = json::array();
  for (int n = 0; n < levels; ++n) {
    const auto e = scar_energy(n, saddle, v0);
    lv.push_back({{"level", n}, {"predicted_gap", e.predicted_gap()}, {"energy", e.expression()}});
  }
  const std::size_t mode = *saddle.stable_mode();
  json doc = {{"saddle_value", v0},
              {"omega", saddle.omega()},
              {"tau", saddle.tau()},
              {"closed_form_gap", closed_form_gap(p)},
              {"lambda_rate", saddle.lambda_rate()},
              {"lambda_curvature", saddle.lambda_curvature()},
              {"intensity", {{"convention", to_string(conv)},
                             {"value", scar_intensity(saddle, mode, conv)},
                             {"curvature", scar_intensity(saddle, mode, IntensityConvention::curvature)},
                             {"rate", scar_intensity(saddle, mode, IntensityConvention::rate)}}},
              {"levels", lv},
              {"critical_points", points}};
  write_text(m, "estimate.json", doc.dump(2));
  m.timing("total", seconds_since(t0));
  m.write();
  out << "estimate: level-0 gap " << format_double(0.5 * saddle.omega()) << ", omega "
      << format_double(saddle.omega()) << '\n';
  return kOk;
}

int report(const ConfigFile& config, const Options& opts, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = model_params_from_config(config);
  p.validate();
  const int levels = int_key(config, "report", "levels", 3);
  const double band_gap = config.get_double("report", "band_gap", 2.0);
  const auto conv = convention_key(config, "report");
  const fs::path file = config.get_string("report", "spectrum_file",
                                          (opts.out_dir / "eigenvectors_1d.bin").string());
  const auto sector = enumerate_basis_1d(p, 0);
  const auto spec = load_spectrum(file, sector.dim());
  const auto bands = assemble_bands(spec, band_gap);
  const auto saddle = origin_saddle(p).scaled();
  const auto rep = compare_with_spectrum(saddle, effective_potential(0.0, 0.0, p), spec.eigenvalues,
                                         bands, levels, conv);

  Manifest m("report", opts.out_dir);
  m["parameters"] = {{"model", model_json(p)},
                     {"report", {{"spectrum_file", file.string()}, {"band_gap", band_gap},
                                 {"levels", levels}, {"convention", to_string(conv)}}}};
  write_text(m, "comparison_report.json", comparison_report_json(rep));
  std::ostringstream text;
  text << "E0 " << format_double(rep.ground_energy) << "\n";
  for (const auto& r : rep.rows) {
    text << "band " << r.band << " (level " << r.level << "): predicted "
         << format_double(r.predicted);
    if (r.measured)
      text << ", measured " << format_double(*r.measured) << ", deviation "
           << format_double(100.0 * *r.relative_deviation) << "%";
    else
      text << ", band missing";
    text << '\n';
  }
  text << "intensity (" << to_string(conv) << ") " << format_double(rep.intensity) << '\n';
  write_text(m, "report.txt", text.str());
  m.timing("total", seconds_since(t0));
  m.write();
  out << text.str();
  return kOk;
}

int run(const std::string& command, const ConfigFile& config, const Options& opts,
        std::ostream& out, std::ostream& err) {
  try {
    validate_config(config);
    if (command == "solve1d") return solve1d(config, opts, out);
    if (command == "solve3d") return solve3d(config, opts, out);
    if (command == "analyze") return analyze(config, opts, out);
    if (command == "orbit") return orbit(config, opts, out);
    if (command == "estimate") return estimate(config, opts, out);
    if (command == "report") return report(config, opts, out);
    err << "unknown command '" << command << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what();
    if (!e.key().empty()) err << " [key: " << e.key() << "]";
    err << '\n';
    return kConfigError;
  } catch (const ResourceLimitError& e) {
    err << "refused: " << e.what() << " (required " << e.required_bytes() << " bytes, budget "
        << e.budget_bytes() << " bytes)\n";
    return kResourceRefusal;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace scarlab::cli
