#include "qaoa_fipso/qaoasim.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qaoa_fipso/error.hpp"
#include "text_format.hpp"

namespace qaoa_fipso {

namespace {

void check_qubits(int n) {
  if (n < 1) throw ArgumentError("qubit count must be positive, got " + std::to_string(n));
  if (n > kMaxNodes) {
    throw CapacityError("statevector simulation supports at most " + std::to_string(kMaxNodes) +
                        " qubits, got " + std::to_string(n));
  }
}

void check_finite(double angle, const char* name) {
  if (!std::isfinite(angle)) throw ArgumentError(std::string(name) + " angle is not finite");
}

}  // namespace

void QaoaParams::validate() const {
  if (gamma.empty()) throw ArgumentError("QAOA depth must be at least 1");
  if (gamma.size() != beta.size()) {
    throw ArgumentError("gamma has " + std::to_string(gamma.size()) + " angles but beta has " +
                        std::to_string(beta.size()));
  }
  for (double g : gamma) check_finite(g, "gamma");
  for (double b : beta) check_finite(b, "beta");
}

QaoaParams QaoaParams::from_vector(std::span<const double> theta) {
  if (theta.empty() || theta.size() % 2 != 0) {
    throw ArgumentError("parameter vector length must be a positive even number, got " +
                        std::to_string(theta.size()));
  }
  const std::size_t p = theta.size() / 2;
  QaoaParams params;
  params.gamma.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(p));
  params.beta.assign(theta.begin() + static_cast<std::ptrdiff_t>(p), theta.end());
  return params;
}

std::vector<double> QaoaParams::to_vector() const {
  std::vector<double> theta(gamma);
  theta.insert(theta.end(), beta.begin(), beta.end());
  return theta;
}

CutSpectrum build_cut_spectrum(const Graph& g) {
  const int n = g.node_count();
  check_qubits(n);
  CutSpectrum spectrum;
  spectrum.n = n;
  spectrum.values.assign(std::size_t{1} << n, 0);
  // Walk the partitions in Gray-code order so each step is one vertex move.
  Mask gray = 0;
  int cut = 0;
  for (std::uint64_t step = 1; step < spectrum.values.size(); ++step) {
    const int v = std::countr_zero(step);
    const Mask side = ((gray >> v) & 1U) ? gray : ~gray;
    cut += 2 * std::popcount(g.neighbor_mask(v) & side) - g.degree(v);
    gray ^= Mask{1} << v;
    spectrum.values[gray] = cut;
    if (cut > spectrum.max_value) spectrum.max_value = cut;
  }
  return spectrum;
}

Statevector::Statevector(int n) : n_(n) {
  check_qubits(n);
  amps_.assign(std::size_t{1} << n, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

double Statevector::norm_squared() const {
  double total = 0.0;
  for (const Amplitude& a : amps_) total += std::norm(a);
  return total;
}

Statevector init_plus_state(int n) {
  Statevector state(n);
  reset_plus_state(state);
  return state;
}

void reset_plus_state(Statevector& state) {
  const double amp = std::pow(2.0, -0.5 * state.qubit_count());
  for (Amplitude& a : state.amplitudes()) a = amp;
}

void apply_cost_layer(Statevector& state, const CutSpectrum& spectrum, double gamma) {
  if (state.qubit_count() != spectrum.n) {
    throw DimensionError("statevector has " + std::to_string(state.qubit_count()) +
                         " qubits but spectrum has " + std::to_string(spectrum.n));
  }
  std::vector<Amplitude> phases(static_cast<std::size_t>(spectrum.max_value) + 1);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    phases[k] = std::polar(1.0, -gamma * static_cast<double>(k));
  }
  auto amps = state.amplitudes();
  for (std::size_t z = 0; z < amps.size(); ++z) amps[z] *= phases[spectrum.values[z]];
}

void apply_mixer_layer(Statevector& state, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  auto amps = state.amplitudes();
  const std::size_t dim = amps.size();
  for (int q = 0; q < state.qubit_count(); ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t z = base; z < base + stride; ++z) {
        const Amplitude a0 = amps[z];
        const Amplitude a1 = amps[z + stride];
        // [[c, -is], [-is, c]]; -i s a = (s a.imag, -s a.real)
        amps[z] = Amplitude(c * a0.real() + s * a1.imag(), c * a0.imag() - s * a1.real());
        amps[z + stride] = Amplitude(c * a1.real() + s * a0.imag(), c * a1.imag() - s * a0.real());
      }
    }
  }
}

double diagonal_expectation(const Statevector& state, const CutSpectrum& spectrum) {
  if (state.qubit_count() != spectrum.n) {
    throw DimensionError("statevector and spectrum disagree on qubit count");
  }
  auto amps = state.amplitudes();
  double total = 0.0;
  for (std::size_t z = 0; z < amps.size(); ++z) total += std::norm(amps[z]) * spectrum.values[z];
  return total;
}

QaoaSimulator::QaoaSimulator(const Graph& g)
    : spectrum_(build_cut_spectrum(g)),
      state_(g.node_count()),
      phases_(static_cast<std::size_t>(spectrum_.max_value) + 1) {}

double QaoaSimulator::expectation(const QaoaParams& params) {
  params.validate();
  reset_plus_state(state_);
  auto amps = state_.amplitudes();
  for (int layer = 0; layer < params.depth(); ++layer) {
    const double gamma = params.gamma[layer];
    for (std::size_t k = 0; k < phases_.size(); ++k) {
      phases_[k] = std::polar(1.0, -gamma * static_cast<double>(k));
    }
    for (std::size_t z = 0; z < amps.size(); ++z) amps[z] *= phases_[spectrum_.values[z]];
    apply_mixer_layer(state_, params.beta[layer]);
  }
  return diagonal_expectation(state_, spectrum_);
}

double QaoaSimulator::expectation(std::span<const double> theta) {
  return expectation(QaoaParams::from_vector(theta));
}

double qaoa_expectation(const Graph& g, const QaoaParams& params) {
  QaoaSimulator sim(g);
  return sim.expectation(params);
}

double AngleRange::at(int i, int resolution) const {
  if (i == resolution - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

Landscape landscape_grid(const Graph& g, AngleRange gamma, AngleRange beta, int resolution) {
  if (resolution < 2) {
    throw ArgumentError("landscape resolution must be at least 2, got " + std::to_string(resolution));
  }
  for (const AngleRange* r : {&gamma, &beta}) {
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || !(r->lo < r->hi)) {
      throw ArgumentError("landscape range needs finite lo < hi");
    }
  }
  Landscape out{gamma, beta, resolution, {}};
  out.values.reserve(static_cast<std::size_t>(resolution) * resolution);
  QaoaSimulator sim(g);
  QaoaParams params{{0.0}, {0.0}};
  for (int a = 0; a < resolution; ++a) {
    params.gamma[0] = gamma.at(a, resolution);
    for (int b = 0; b < resolution; ++b) {
      params.beta[0] = beta.at(b, resolution);
      out.values.push_back(sim.expectation(params));
    }
  }
  return out;
}

void write_landscape_csv(const Landscape& landscape, std::ostream& out) {
  out << "gamma,beta,expectation\n";
  for (int a = 0; a < landscape.resolution; ++a) {
    const std::string gamma = detail::format_double(landscape.gamma.at(a, landscape.resolution));
    for (int b = 0; b < landscape.resolution; ++b) {
      out << gamma << ',' << detail::format_double(landscape.beta.at(b, landscape.resolution)) << ','
          << detail::format_double(landscape.at(a, b)) << '\n';
    }
  }
}

}  // namespace qaoa_fipso
