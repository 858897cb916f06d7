#ifndef SLS_DICTIONARY_HPP
#define SLS_DICTIONARY_HPP

#include <string>

#include "sls/errors.hpp"
#include "sls/types.hpp"

namespace sls {

/// Dense dictionary: one atom per column.  `scales` records the Euclidean
/// norm each column had before normalization, so amplitudes found on the
/// normalized atoms can be mapped back to the original column scale.
struct Dictionary {
  Matrix atoms;
  Vector scales;
  bool normalized = false;

  Index n_obs() const { return atoms.rows(); }
  Index n_atoms() const { return atoms.cols(); }

  /// Validates shape and finiteness.  Throws DimensionMismatch.
  static Dictionary from_matrix(Matrix m, bool normalized = false);
};

/// Scales every column to unit norm; the returned dictionary records the
/// original norms in `scales`.  Throws ZeroColumn (index reported).
Dictionary normalize_columns(const Dictionary& d);

/// max_{i != j} |a_i . a_j| over distinct columns.  Requires a normalized
/// dictionary with at least two atoms; throws NotNormalized.
double mutual_coherence(const Dictionary& d);

/// Shift-structured dictionary built from an impulse response placed on a
/// fine grid and sampled on a coarser observation grid.
struct ConvolutionSpec {
  Vector impulse_response;   // filter samples on the fine grid
  Index signal_length = 0;   // number of fine-grid spike positions (atoms)
  Index upsampling = 1;      // fine samples per observation sample
  Index observation_length = 0;

  void validate() const;
};

struct ConvolutionDictionary {
  Dictionary dictionary;
  Index kept_atoms = 0;     // signal_length after trailing-zero exclusion
  Index dropped_atoms = 0;  // trailing positions whose response misses the window
};

/// Atom j is the impulse response started at fine position j, evaluated at
/// observation samples {0, u, 2u, ...}, truncated to the window, then
/// column-normalized.  Trailing positions whose response falls entirely
/// outside the window are excluded (kept/dropped counts reported); an
/// all-zero column at an interior position throws ZeroColumn.
ConvolutionDictionary build_convolution_dictionary(const ConvolutionSpec& spec);

/// Gaussian-windowed cosine h(t) = exp(-t^2 / (2 sigma^2)) cos(2 pi f t)
/// sampled at integer fine-grid offsets t in [-ceil(5 sigma), ceil(5 sigma)].
Vector gaussian_cosine_pulse(double sigma, double freq);

// Defaults calibrated so the N = 350, M = 1000, upsampling 3 dictionary has
// mutual coherence close to 0.81.
inline constexpr double kDefaultPulseSigma = 1.09;
inline constexpr double kDefaultPulseFreq = 0.0;
inline constexpr Index kDefaultObservations = 350;
inline constexpr Index kDefaultAtoms = 1000;
inline constexpr Index kDefaultUpsampling = 3;

ConvolutionSpec default_convolution_spec(Index n_obs = kDefaultObservations,
                                         Index n_atoms = kDefaultAtoms,
                                         Index upsampling = kDefaultUpsampling,
                                         double pulse_sigma = kDefaultPulseSigma,
                                         double pulse_freq = kDefaultPulseFreq);

}  // namespace sls

#endif
