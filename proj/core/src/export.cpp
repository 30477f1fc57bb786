#include "scarlab/export.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "scarlab/errors.hpp"

namespace scarlab {

namespace {

constexpr char kMagic[8] = {'S', 'C', 'L', 'B', 'E', 'V', '0', '1'};

static_assert(std::endian::native == std::endian::little, "eigenvector files assume little-endian");

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error("truncated eigenvector file");
  return v;
}


}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum, const std::vector<Band>& bands,
                        const std::string& parity) {
  os << "index,energy,residual";
  if (!bands.empty()) os << ",band";
  if (!parity.empty()) os << ",parity";
  os << '\n';
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    os << i << ',' << format_double(spectrum.eigenvalues[i]) << ','
       << format_double(i < spectrum.residuals.size() ? spectrum.residuals[i] : 0.0);
    if (!bands.empty()) {
      int id = 0;
      for (const auto& b : bands)
        if (b.contains(i)) id = b.id;
      os << ',' << id;
    }
    if (!parity.empty()) os << ',' << parity;
    os << '\n';
  }
}

void write_bands_csv(std::ostream& os, const std::vector<Band>& bands) {
  os << "band,first,last,count,head,top\n";
  for (const auto& b : bands)
    os << b.id << ',' << b.first << ',' << b.last << ',' << b.count() << ',' << format_double(b.head)
       << ',' << format_double(b.top) << '\n';
}

void write_triplets_csv(std::ostream& os, const CsrOperator& op) {
  os << "row,col,value\n";
  for (const auto& t : op.triplets()) os << t.row << ',' << t.col << ',' << format_double(t.value) << '\n';
}

void write_grid_csv(std::ostream& os, const WavefunctionGrid& grid) {
  os << "r\\eta";
  for (double eta : grid.eta_axis) os << ',' << format_double(eta);
  os << '\n';
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    os << format_double(grid.r_axis[i]);
    for (std::size_t j = 0; j < grid.neta(); ++j) os << ',' << format_double(grid.density(i, j));
    os << '\n';
  }
}

void write_radial_density_csv(std::ostream& os, const RadialDensity3D& density) {
  os << "r,eta,density\n";
  for (std::size_t i = 0; i < density.r.size(); ++i)
    for (std::size_t j = 0; j < density.eta.size(); ++j)
      os << format_double(density.r.nodes[i]) << ',' << format_double(density.eta.nodes[j]) << ','
         << format_double(density.at(i, j)) << '\n';
}

void write_projection_csv(std::ostream& os, const PairProjection& projection) {
  os << "r" << projection.r_axis + 1 << ",eta" << projection.eta_axis + 1 << ",density\n";
  for (std::size_t i = 0; i < projection.n(); ++i)
    for (std::size_t j = 0; j < projection.n(); ++j)
      os << format_double(projection.coordinate[i]) << ',' << format_double(projection.coordinate[j])
         << ',' << format_double(projection.at(i, j)) << '\n';
}

void write_autocorrelation_csv(std::ostream& os, const AutocorrelationSeries& series) {
  os << "t,re,im,abs2\n";
  for (std::size_t i = 0; i < series.times.size(); ++i)
    os << format_double(series.times[i]) << ',' << format_double(series.values[i].real()) << ','
       << format_double(series.values[i].imag()) << ',' << format_double(std::norm(series.values[i]))
       << '\n';
}

void write_spectral_density_csv(std::ostream& os, const AutocorrelationSeries& series) {
  os << "energy,density\n";
  for (std::size_t i = 0; i < series.energy_axis.size(); ++i)
    os << format_double(series.energy_axis[i]) << ',' << format_double(series.spectral_density[i])
       << '\n';
}

namespace {

std::string events_at(const std::vector<OrbitEvent>& events, double t) {
  std::string s;
  for (const auto& e : events)
    if (e.time == t) {
      if (!s.empty()) s += ';';
      s += to_string(e.kind);
    }
  return s;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory1D& trajectory) {
  os << "t,r,p_r,eta,p_eta,H,event\n";
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const auto& s = trajectory.states[i];
    os << format_double(s.time) << ',' << format_double(s.r) << ',' << format_double(s.p_r) << ','
       << format_double(s.eta) << ',' << format_double(s.p_eta) << ','
       << format_double(trajectory.energies[i]) << ',' << events_at(trajectory.events, s.time) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory3D& trajectory) {
  os << "t";
  for (const char* name : {"r", "p_r", "eta", "p_eta"})
    for (int k = 1; k <= 3; ++k) os << ',' << name << k;
  os << ",H,event\n";
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const auto& s = trajectory.states[i];
    os << format_double(s.time);
    for (const auto* v : {&s.r, &s.p_r, &s.eta, &s.p_eta})
      for (int k = 0; k < 3; ++k) os << ',' << format_double((*v)[static_cast<std::size_t>(k)]);
    os << ',' << format_double(trajectory.energies[i]) << ',' << events_at(trajectory.events, s.time)
       << '\n';
  }
}

void write_phase_portrait_csv(std::ostream& os, const std::vector<Trajectory3D>& orbits,
                              const std::vector<std::string>& side_labels) {
  if (side_labels.size() != orbits.size()) throw DimensionMismatch("one label per orbit expected");
  os << "orbit,side,t,r1,eta2\n";
  for (std::size_t o = 0; o < orbits.size(); ++o)
    for (const auto& s : orbits[o].states)
      os << o << ',' << side_labels[o] << ',' << format_double(s.time) << ',' << format_double(s.r[0])
         << ',' << format_double(s.eta[1]) << '\n';
}

void write_eigenvectors(const std::string& path, const Spectrum& spectrum) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write(kMagic, sizeof kMagic);
  put<std::uint64_t>(os, spectrum.dim());
  put<std::uint64_t>(os, spectrum.size());
  for (double e : spectrum.eigenvalues) put(os, e);
  os.write(reinterpret_cast<const char*>(spectrum.eigenvectors.data()),
           static_cast<std::streamsize>(sizeof(double) * spectrum.dim() * spectrum.size()));
  if (!os) throw Error("failed writing " + path);
}

Spectrum read_eigenvectors(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error(path + " is not an eigenvector file");
  const auto dim = get<std::uint64_t>(is);
  const auto count = get<std::uint64_t>(is);
  Spectrum s;
  s.eigenvalues.resize(count);
  for (auto& e : s.eigenvalues) e = get<double>(is);
  s.eigenvectors.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(count));
  is.read(reinterpret_cast<char*>(s.eigenvectors.data()),
          static_cast<std::streamsize>(sizeof(double) * dim * count));
  if (!is) throw Error("truncated eigenvector file " + path);
  return s;
}

std::string comparison_report_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["ground_energy"] = report.ground_energy;
  j["saddle_value"] = report.saddle_value;
  j["omega"] = report.omega;
  j["localization_penalty"] = "unknown; cancels in gaps";
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["band"] = r.band;
    row["level"] = r.level;
    row["predicted_gap"] = r.predicted;
    row["measured_gap"] = r.measured ? nlohmann::ordered_json(*r.measured) : nullptr;
    row["band_top"] = r.band_top ? nlohmann::ordered_json(*r.band_top) : nullptr;
    row["relative_deviation"] =
        r.relative_deviation ? nlohmann::ordered_json(*r.relative_deviation) : nullptr;
    rows.push_back(row);
  }
  j["gaps"] = rows;
  j["intensity"] = {{"convention", to_string(report.convention)},
                    {"value", report.intensity},
                    {"curvature", report.intensity_curvature},
                    {"rate", report.intensity_rate}};
  return j.dump(2);
}

}  // namespace scarlab
