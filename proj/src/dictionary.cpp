#include "sls/dictionary.hpp"

#include <cmath>

namespace sls {

Dictionary Dictionary::from_matrix(Matrix m, bool normalized) {
  if (m.rows() < 1 || m.cols() < 1) throw DimensionMismatch("dictionary must be at least 1x1");
  if (!m.allFinite()) throw DimensionMismatch("dictionary entries must be finite");
  Dictionary d;
  d.scales = Vector::Ones(m.cols());
  d.atoms = std::move(m);
  d.normalized = normalized;
  return d;
}

Dictionary normalize_columns(const Dictionary& d) {
  Dictionary out;
  out.atoms = d.atoms;
  out.scales.resize(d.n_atoms());
  for (Index j = 0; j < d.n_atoms(); ++j) {
    const double norm = out.atoms.col(j).norm();
    if (norm < 1e-300) throw ZeroColumn(j);
    out.atoms.col(j) /= norm;
    out.scales(j) = norm * d.scales(j);
  }
  out.normalized = true;
  return out;
}

double mutual_coherence(const Dictionary& d) {
  if (!d.normalized) throw NotNormalized("mutual coherence requires a normalized dictionary");
  if (d.n_atoms() < 2) throw DimensionMismatch("mutual coherence needs at least two atoms");
  const Matrix gram = d.atoms.transpose() * d.atoms;
  double best = 0.0;
  for (Index j = 0; j < gram.cols(); ++j)
    for (Index i = 0; i < j; ++i) best = std::max(best, std::abs(gram(i, j)));
  return best;
}

void ConvolutionSpec::validate() const {
  if (impulse_response.size() < 1) throw DimensionMismatch("impulse response must be nonempty");
  if (!impulse_response.allFinite())
    throw DimensionMismatch("impulse response entries must be finite");
  if (upsampling < 1) throw DimensionMismatch("upsampling factor must be >= 1");
  if (signal_length < 1 || observation_length < 1)
    throw DimensionMismatch("signal and observation lengths must be >= 1");
}

ConvolutionDictionary build_convolution_dictionary(const ConvolutionSpec& spec) {
  spec.validate();
  const Index n = spec.observation_length;
  const Index m = spec.signal_length;
  const Index u = spec.upsampling;
  const Index filter_len = spec.impulse_response.size();

  Matrix atoms = Matrix::Zero(n, m);
  Index last_nonzero = -1;
  for (Index j = 0; j < m; ++j) {
    bool nonzero = false;
    // first observation sample at or after the response start
    for (Index i = (j + u - 1) / u; i < n; ++i) {
      const Index offset = i * u - j;
      if (offset >= filter_len) break;
      const double v = spec.impulse_response(offset);
      atoms(i, j) = v;
      if (v != 0.0) nonzero = true;
    }
    if (nonzero) last_nonzero = j;
  }
  if (last_nonzero < 0) throw ZeroColumn(0);

  // Trailing all-zero positions are excluded; an interior zero column means
  // the sampling grid never hits the response and cannot be repaired here.
  for (Index j = 0; j < last_nonzero; ++j) {
    if (atoms.col(j).norm() < 1e-300) throw ZeroColumn(j);
  }

  ConvolutionDictionary out;
  out.kept_atoms = last_nonzero + 1;
  out.dropped_atoms = m - out.kept_atoms;
  out.dictionary = normalize_columns(
      Dictionary::from_matrix(atoms.leftCols(out.kept_atoms)));
  return out;
}

Vector gaussian_cosine_pulse(double sigma, double freq) {
  if (!(sigma > 0.0)) throw DimensionMismatch("pulse sigma must be positive");
  const Index half = std::max<Index>(1, static_cast<Index>(std::ceil(5.0 * sigma)));
  Vector h(2 * half + 1);
  for (Index k = 0; k < h.size(); ++k) {
    const double t = static_cast<double>(k - half);
    h(k) = std::exp(-t * t / (2.0 * sigma * sigma)) * std::cos(2.0 * M_PI * freq * t);
  }
  return h;
}

ConvolutionSpec default_convolution_spec(Index n_obs, Index n_atoms, Index upsampling,
                                         double pulse_sigma, double pulse_freq) {
  ConvolutionSpec spec;
  spec.impulse_response = gaussian_cosine_pulse(pulse_sigma, pulse_freq);
  spec.signal_length = n_atoms;
  spec.upsampling = upsampling;
  spec.observation_length = n_obs;
  return spec;
}

}  // namespace sls
