// Dense multipartite quantum states: tensor algebra, partial trace,
// entropies, trace distance, purification.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace entbound {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical tolerances shared across the library.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kEigenvalueClip = 1e-12;
inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kPurityTol = 1e-8;

/// Total-dimension cap for operations that enlarge Hilbert spaces
/// (tensor products, antisymmetric projectors). Default 4096.
int dimension_cap();
void set_dimension_cap(int cap);

/// Density operator on an ordered list of subsystems.
struct MultipartiteState {
  std::vector<int> dims;
  Matrix matrix;
  std::string label;

  MultipartiteState() = default;
  MultipartiteState(std::vector<int> dims_, Matrix matrix_, std::string label_ = {});

  int dim() const;
  int parties() const { return static_cast<int>(dims.size()); }
  double purity() const;

  /// Checks Hermiticity, unit trace, positive semidefiniteness, and
  /// dimension consistency. Throws std::invalid_argument on violation.
  void validate() const;
};

/// Unit vector on an ordered list of subsystems.
struct PureState {
  std::vector<int> dims;
  Vector vector;
  std::string label;

  PureState() = default;
  PureState(std::vector<int> dims_, Vector vector_, std::string label_ = {});

  int dim() const;
  int parties() const { return static_cast<int>(dims.size()); }
  void validate() const;

  MultipartiteState to_state() const;
};

/// Bipartition or tripartition of subsystem indices.
struct CutSpec {
  std::vector<int> side_a;
  std::vector<int> side_b;
  std::vector<int> side_c;  // empty for bipartite cuts

  bool tripartite() const { return !side_c.empty(); }

  /// Disjointness and coverage of {0, ..., n_parties-1}.
  void validate(int n_parties) const;

  /// Parses "0|1", "0,2|1", or "0|1|2" (sides separated by '|',
  /// indices within a side separated by ',').
  static CutSpec parse(const std::string& text, int n_parties);

  std::string str() const;
};

/// Product of the dimensions selected by `side`.
long side_dimension(const std::vector<int>& side, const std::vector<int>& dims);

MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b);
PureState tensor(const PureState& a, const PureState& b);

/// Traces out every subsystem not in `keep`; kept subsystems retain
/// their original order regardless of the order inside `keep`.
MultipartiteState partial_trace(const MultipartiteState& rho, const std::vector<int>& keep);

/// Entropy in bits; eigenvalues below the clip threshold contribute zero.
double von_neumann_entropy(const Matrix& rho);
double von_neumann_entropy(const MultipartiteState& rho);

/// Shannon entropy in bits of a nonnegative vector summing to ~1.
double shannon_entropy(const RealVector& p);

/// Half the trace norm of a - b, in [0, 1] for states.
double trace_distance(const MultipartiteState& a, const MultipartiteState& b);
double trace_distance(const Matrix& a, const Matrix& b);

/// Standard purification: for a state of total dimension n and rank r,
/// returns a pure state on dims [n, r] whose first-factor marginal
/// reproduces the input.
PureState purify(const MultipartiteState& rho);

/// Reorders tensor factors; `order[i]` is the old position of the new
/// i-th subsystem.
MultipartiteState permute_subsystems(const MultipartiteState& rho, const std::vector<int>& order);
PureState permute_subsystems(const PureState& psi, const std::vector<int>& order);

/// Regroups a state as a plain bipartite system [d_A, d_B] with side A
/// factors first (in side order), side B factors after.
MultipartiteState regroup_bipartite(const MultipartiteState& rho, const CutSpec& cut);
PureState regroup_bipartite(const PureState& psi, const CutSpec& cut);

/// Eigenvalues of the reduced state on side A of a bipartite pure
/// vector of shape d_a x d_b (squared singular values of the reshape).
RealVector schmidt_spectrum(const Vector& psi, int d_a, int d_b);

/// Top eigenvector of a nearly pure density operator.
/// Throws std::invalid_argument when purity < 1 - kPurityTol.
PureState dominant_eigenvector(const MultipartiteState& rho);

}  // namespace entbound
