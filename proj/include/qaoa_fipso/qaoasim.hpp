#ifndef QAOA_FIPSO_QAOASIM_HPP
#define QAOA_FIPSO_QAOASIM_HPP

#include <complex>
#include <ostream>
#include <span>
#include <vector>

#include "qaoa_fipso/graph.hpp"

namespace qaoa_fipso {

using Amplitude = std::complex<double>;

/// Depth-p QAOA angles in radians.
///
/// The flat parameter vector used by the optimizer is laid out as
/// [gamma_1..gamma_p, beta_1..beta_p].
struct QaoaParams {
  std::vector<double> gamma;
  std::vector<double> beta;

  int depth() const noexcept { return static_cast<int>(gamma.size()); }

  /// Throws ArgumentError on length mismatch, zero depth or non-finite angles.
  void validate() const;

  static QaoaParams from_vector(std::span<const double> theta);
  std::vector<double> to_vector() const;
};

/// Diagonal of the MaxCut cost Hamiltonian: values[z] is the cut of partition z.
struct CutSpectrum {
  int n = 0;
  int max_value = 0;
  std::vector<int> values;
};

CutSpectrum build_cut_spectrum(const Graph& g);

/// 2^n amplitudes, little-endian: bit i of the index is qubit i.
class Statevector {
 public:
  explicit Statevector(int n);

  int qubit_count() const noexcept { return n_; }
  std::size_t size() const noexcept { return amps_.size(); }

  std::span<Amplitude> amplitudes() noexcept { return amps_; }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  Amplitude operator[](std::size_t z) const { return amps_[z]; }

  double norm_squared() const;

 private:
  int n_;
  std::vector<Amplitude> amps_;
};

/// |+>^n: every amplitude 2^{-n/2}.
Statevector init_plus_state(int n);
/// Resets `state` to |+>^n in place.
void reset_plus_state(Statevector& state);

/// amplitude_z *= exp(-i gamma values[z]).
void apply_cost_layer(Statevector& state, const CutSpectrum& spectrum, double gamma);

/// exp(-i beta X) on every qubit.
void apply_mixer_layer(Statevector& state, double beta);

/// sum_z |amplitude_z|^2 values[z].
double diagonal_expectation(const Statevector& state, const CutSpectrum& spectrum);

/// Reusable evaluator for one graph. Holds the cut spectrum and a state buffer,
/// so it is not safe to share across threads; make one per thread instead.
class QaoaSimulator {
 public:
  explicit QaoaSimulator(const Graph& g);

  const CutSpectrum& spectrum() const noexcept { return spectrum_; }

  /// Expected cut <psi|H_C|psi> after the alternating cost/mixer layers.
  double expectation(const QaoaParams& params);
  double expectation(std::span<const double> theta);

  /// Final state of the last evaluation.
  const Statevector& state() const noexcept { return state_; }

 private:
  CutSpectrum spectrum_;
  Statevector state_;
  std::vector<Amplitude> phases_;
};

double qaoa_expectation(const Graph& g, const QaoaParams& params);

struct AngleRange {
  double lo = 0.0;
  double hi = 0.0;

  /// Lattice point `i` of `resolution`, endpoints inclusive.
  double at(int i, int resolution) const;
};

/// p = 1 expectation sampled on a resolution x resolution lattice.
struct Landscape {
  AngleRange gamma;
  AngleRange beta;
  int resolution = 0;
  std::vector<double> values;  // row-major: gamma index, then beta index

  double at(int gamma_index, int beta_index) const {
    return values[static_cast<std::size_t>(gamma_index) * resolution + beta_index];
  }
};

Landscape landscape_grid(const Graph& g, AngleRange gamma, AngleRange beta, int resolution);

/// Header `gamma,beta,expectation`, one row per lattice point.
void write_landscape_csv(const Landscape& landscape, std::ostream& out);

}  // namespace qaoa_fipso

#endif  // QAOA_FIPSO_QAOASIM_HPP
