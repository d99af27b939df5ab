#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tsa/linalg.hpp"

namespace tsa {

// One deterministic ingredient of a trajectory model. Epochs and step times
// are expressed in years relative to the model's reference epoch.
struct BasisTerm {
  enum class Kind { Polynomial, Periodic, Offset };

  Kind kind = Kind::Polynomial;
  int degree = 1;          // Polynomial: highest power of t
  double omega = 0.0;      // Periodic: angular frequency, rad/yr
  double step_epoch = 0.0; // Offset: step location, yr

  static BasisTerm polynomial(int degree);
  static BasisTerm periodic(double omega);
  static BasisTerm offset(double step_epoch);
};

// Ordered list of basis terms; column order in the design matrix follows the
// term order (a Polynomial term contributes degree+1 columns, a Periodic term
// a cosine and a sine column, an Offset one step column).
struct TrajectoryModel {
  std::vector<BasisTerm> terms;

  std::size_t column_count() const;
  void validate() const;  // throws SpecError on duplicate terms

  // degree-1 polynomial plus optional annual/semiannual harmonics.
  static TrajectoryModel standard(int poly_degree, bool annual, bool semiannual);
};

struct DesignMatrix {
  Matrix a;                         // N x M, column-major
  std::vector<std::string> labels;  // one per column
};

// Epochs must be strictly increasing and at least column_count() long.
DesignMatrix build_design_matrix(const TrajectoryModel& model,
                                 std::span<const double> epochs);

// Convert a (cos, sin) coefficient pair to amplitude and phase, with
// b cos(wt - psi) = c cos(wt) + s sin(wt); psi returned in [0, 2pi).
struct AmpPhase {
  double amplitude = 0.0;
  double phase = 0.0;
};
AmpPhase amp_phase(double cos_coeff, double sin_coeff);

}  // namespace tsa
