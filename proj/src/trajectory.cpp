#include "tsa/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "tsa/errors.hpp"

namespace tsa {

namespace {

std::string format_label(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

BasisTerm BasisTerm::polynomial(int degree) {
  BasisTerm t;
  t.kind = Kind::Polynomial;
  t.degree = degree;
  return t;
}

BasisTerm BasisTerm::periodic(double omega) {
  BasisTerm t;
  t.kind = Kind::Periodic;
  t.omega = omega;
  return t;
}

BasisTerm BasisTerm::offset(double step_epoch) {
  BasisTerm t;
  t.kind = Kind::Offset;
  t.step_epoch = step_epoch;
  return t;
}

std::size_t TrajectoryModel::column_count() const {
  std::size_t m = 0;
  for (const auto& t : terms) {
    switch (t.kind) {
      case BasisTerm::Kind::Polynomial: m += static_cast<std::size_t>(t.degree) + 1; break;
      case BasisTerm::Kind::Periodic: m += 2; break;
      case BasisTerm::Kind::Offset: m += 1; break;
    }
  }
  return m;
}

void TrajectoryModel::validate() const {
  int polynomials = 0;
  std::set<double> omegas;
  std::set<double> steps;
  for (const auto& t : terms) {
    switch (t.kind) {
      case BasisTerm::Kind::Polynomial:
        if (t.degree < 0) throw SpecError("trajectory: negative polynomial degree");
        if (++polynomials > 1) {
          throw SpecError("trajectory: more than one polynomial term");
        }
        break;
      case BasisTerm::Kind::Periodic:
        if (!(t.omega > 0.0)) throw SpecError("trajectory: non-positive frequency");
        if (!omegas.insert(t.omega).second) {
          throw SpecError("trajectory: duplicate periodic frequency " +
                          format_label("%.6g", t.omega));
        }
        break;
      case BasisTerm::Kind::Offset:
        if (!steps.insert(t.step_epoch).second) {
          throw SpecError("trajectory: duplicate offset epoch " +
                          format_label("%.6g", t.step_epoch));
        }
        break;
    }
  }
}

TrajectoryModel TrajectoryModel::standard(int poly_degree, bool annual, bool semiannual) {
  TrajectoryModel m;
  m.terms.push_back(BasisTerm::polynomial(poly_degree));
  constexpr double kOmegaYear = 2.0 * std::numbers::pi;
  if (annual) m.terms.push_back(BasisTerm::periodic(kOmegaYear));
  if (semiannual) m.terms.push_back(BasisTerm::periodic(2.0 * kOmegaYear));
  return m;
}

DesignMatrix build_design_matrix(const TrajectoryModel& model,
                                 std::span<const double> epochs) {
  model.validate();
  const std::size_t n = epochs.size();
  const std::size_t m = model.column_count();
  if (n == 0) throw DomainError("build_design_matrix: no epochs");
  if (n < m) throw DomainError("build_design_matrix: under-determined (fewer epochs than columns)");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(epochs[i] > epochs[i - 1])) {
      throw DomainError("build_design_matrix: epochs not strictly increasing at index " +
                        std::to_string(i));
    }
  }

  DesignMatrix d;
  d.a = Matrix(n, m);
  d.labels.reserve(m);
  std::size_t col = 0;

  for (const auto& t : model.terms) {
    switch (t.kind) {
      case BasisTerm::Kind::Polynomial: {
        for (int p = 0; p <= t.degree; ++p) {
          auto c = d.a.col(col);
          for (std::size_t i = 0; i < n; ++i) c[i] = std::pow(epochs[i], p);
          if (p == 0) d.labels.emplace_back("intercept");
          else if (p == 1) d.labels.emplace_back("trend");
          else d.labels.emplace_back("t^" + std::to_string(p));
          ++col;
        }
        break;
      }
      case BasisTerm::Kind::Periodic: {
        const double cycles = t.omega / (2.0 * std::numbers::pi);
        auto cc = d.a.col(col);
        auto cs = d.a.col(col + 1);
        for (std::size_t i = 0; i < n; ++i) {
          cc[i] = std::cos(t.omega * epochs[i]);
          cs[i] = std::sin(t.omega * epochs[i]);
        }
        d.labels.push_back(format_label("cos_%.6g_cpy", cycles));
        d.labels.push_back(format_label("sin_%.6g_cpy", cycles));
        col += 2;
        break;
      }
      case BasisTerm::Kind::Offset: {
        auto c = d.a.col(col);
        for (std::size_t i = 0; i < n; ++i) {
          c[i] = epochs[i] >= t.step_epoch ? 1.0 : 0.0;
        }
        d.labels.push_back(format_label("offset_%.6g", t.step_epoch));
        ++col;
        break;
      }
    }
  }
  return d;
}

AmpPhase amp_phase(double cos_coeff, double sin_coeff) {
  AmpPhase ap;
  ap.amplitude = std::hypot(cos_coeff, sin_coeff);
  ap.phase = std::atan2(sin_coeff, cos_coeff);
  if (ap.phase < 0.0) ap.phase += 2.0 * std::numbers::pi;
  return ap;
}

}  // namespace tsa
