// Copyright 2026 The vqcqp Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Homogeneous QCQP containers and the transformations that bring every
// instance into the inequality-only form consumed by the solvers:
//
//   min  v' M_0 v + c_0   s.t.   v' M_i v + c_i <= 0,  i = 1..m.
//
// Complex problems keep Hermitian matrices; real problems keep symmetric
// ones. Matrices are dense throughout.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vqcqp/errors.hpp"

namespace vqcqp {

using Complex = std::complex<double>;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Entrywise tolerance for the Hermitian / symmetric check.
inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kDefaultEqualityBand = 1e-3;

enum class Sense { less_equal, greater_equal, equal, range };

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::less_equal:
      return "le";
    case Sense::greater_equal:
      return "ge";
    case Sense::equal:
      return "eq";
    case Sense::range:
      return "range";
  }
  return "?";
}

inline Sense sense_from_string(const std::string& s) {
  if (s == "le" || s == "<=") return Sense::less_equal;
  if (s == "ge" || s == ">=") return Sense::greater_equal;
  if (s == "eq" || s == "=" || s == "==") return Sense::equal;
  if (s == "range") return Sense::range;
  throw ValidationError("unknown constraint sense '" + s + "'");
}

// One quadratic constraint v' M v (sense) bound. Ranges use [lo, hi] and
// ignore `bound`.
template <class Scalar>
struct Constraint {
  DenseMatrix<Scalar> matrix;
  Sense sense = Sense::less_equal;
  double bound = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  static Constraint le(DenseMatrix<Scalar> m, double c) {
    return {std::move(m), Sense::less_equal, c, 0.0, 0.0};
  }
  static Constraint ge(DenseMatrix<Scalar> m, double c) {
    return {std::move(m), Sense::greater_equal, c, 0.0, 0.0};
  }
  static Constraint eq(DenseMatrix<Scalar> m, double c) {
    return {std::move(m), Sense::equal, c, 0.0, 0.0};
  }
  static Constraint in_range(DenseMatrix<Scalar> m, double lo, double hi) {
    return {std::move(m), Sense::range, 0.0, lo, hi};
  }
};

template <class Scalar>
struct Qcqp {
  std::size_t dimension = 0;
  DenseMatrix<Scalar> objective;
  double objective_offset = 0.0;
  std::vector<Constraint<Scalar>> constraints;
  // Variables restricted to y >= 0; only meaningful for real problems and
  // required by the probability encoding.
  bool nonneg_domain = false;
  // Dimension of the problem this one was split from (0 when not split).
  std::size_t split_from = 0;

  std::size_t constraint_count() const { return constraints.size(); }
};

using ComplexQcqp = Qcqp<Complex>;
using RealQcqp = Qcqp<double>;
using AnyQcqp = std::variant<ComplexQcqp, RealQcqp>;

template <class Scalar>
inline constexpr bool is_complex_v = !std::is_same_v<Scalar, double>;

// v' M v + offset <= 0.
template <class Scalar>
struct Inequality {
  DenseMatrix<Scalar> matrix;
  double offset = 0.0;
};

template <class Scalar>
struct CanonicalQcqp {
  std::size_t dimension = 0;
  DenseMatrix<Scalar> objective;
  double objective_offset = 0.0;
  std::vector<Inequality<Scalar>> inequalities;
  // provenance[k] lists the canonical rows produced by original constraint k.
  std::vector<std::vector<std::size_t>> provenance;
  double equality_band = kDefaultEqualityBand;
  bool nonneg_domain = false;
  std::size_t split_from = 0;

  static constexpr bool complex_encoded = is_complex_v<Scalar>;
  std::size_t inequality_count() const { return inequalities.size(); }
};

using ComplexCanonical = CanonicalQcqp<Complex>;
using RealCanonical = CanonicalQcqp<double>;

namespace detail {

template <class Scalar>
double max_asymmetry(const DenseMatrix<Scalar>& m) {
  if constexpr (is_complex_v<Scalar>) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
  } else {
    return (m - m.transpose()).cwiseAbs().maxCoeff();
  }
}

template <class Scalar>
void check_matrix(const DenseMatrix<Scalar>& m, std::size_t n,
                  const std::string& where) {
  if (static_cast<std::size_t>(m.rows()) != n ||
      static_cast<std::size_t>(m.cols()) != n) {
    throw ValidationError(where + ": expected " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix, got " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw ValidationError(where + ": non-finite entry");
  if (n > 0 && max_asymmetry(m) > kSymmetryTolerance) {
    throw ValidationError(where + (is_complex_v<Scalar>
                                       ? ": matrix is not Hermitian"
                                       : ": matrix is not symmetric"));
  }
}

}  // namespace detail

template <class Scalar>
void validate(const Qcqp<Scalar>& p) {
  if (p.dimension < 1) throw ValidationError("dimension must be >= 1");
  detail::check_matrix(p.objective, p.dimension, "objective");
  if (!std::isfinite(p.objective_offset)) {
    throw ValidationError("objective: non-finite offset");
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    const std::string where = "constraint " + std::to_string(i);
    detail::check_matrix(c.matrix, p.dimension, where);
    if (c.sense == Sense::range) {
      if (!std::isfinite(c.lo) || !std::isfinite(c.hi)) {
        throw ValidationError(where + ": non-finite range bound");
      }
      if (c.lo > c.hi) throw ValidationError(where + ": lo > hi");
    } else if (!std::isfinite(c.bound)) {
      throw ValidationError(where + ": non-finite bound");
    }
  }
}

// Rewrites every constraint as one or two rows of the form v'Mv + c <= 0.
// Equalities become the band [bound - band, bound + band].
template <class Scalar>
CanonicalQcqp<Scalar> canonicalize(const Qcqp<Scalar>& p,
                                   double equality_band = kDefaultEqualityBand) {
  if (!(equality_band > 0.0) || !std::isfinite(equality_band)) {
    throw ParameterError("equality band must be a finite positive number");
  }
  validate(p);

  CanonicalQcqp<Scalar> out;
  out.dimension = p.dimension;
  out.objective = p.objective;
  out.objective_offset = p.objective_offset;
  out.equality_band = equality_band;
  out.nonneg_domain = p.nonneg_domain;
  out.split_from = p.split_from;
  out.provenance.reserve(p.constraints.size());

  auto push = [&](DenseMatrix<Scalar> m, double offset) {
    out.inequalities.push_back({std::move(m), offset});
    return out.inequalities.size() - 1;
  };

  for (const auto& c : p.constraints) {
    std::vector<std::size_t> rows;
    switch (c.sense) {
      case Sense::less_equal:
        rows.push_back(push(c.matrix, -c.bound));
        break;
      case Sense::greater_equal:
        rows.push_back(push(-c.matrix, c.bound));
        break;
      case Sense::equal:
        rows.push_back(push(c.matrix, -(c.bound + equality_band)));
        rows.push_back(push(-c.matrix, c.bound - equality_band));
        break;
      case Sense::range:
        rows.push_back(push(c.matrix, -c.hi));
        rows.push_back(push(-c.matrix, c.lo));
        break;
    }
    out.provenance.push_back(std::move(rows));
  }
  return out;
}

// Embeds a Hermitian matrix into the real symmetric form acting on [Re x; Im x].
inline Eigen::MatrixXd realify(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a.real();
  m.topRightCorner(n, n) = -a.imag();
  m.bottomLeftCorner(n, n) = a.imag();
  m.bottomRightCorner(n, n) = a.real();
  return m;
}

inline RealQcqp complex_to_real(const ComplexQcqp& p) {
  validate(p);
  RealQcqp out;
  out.dimension = 2 * p.dimension;
  out.objective = realify(p.objective);
  out.objective_offset = p.objective_offset;
  out.nonneg_domain = false;
  out.constraints.reserve(p.constraints.size());
  for (const auto& c : p.constraints) {
    out.constraints.push_back({realify(c.matrix), c.sense, c.bound, c.lo, c.hi});
  }
  return out;
}

// B -> [[B, -B], [-B, B]] so that y = y1 - y2 with y1, y2 >= 0.
inline Eigen::MatrixXd split_matrix(const Eigen::MatrixXd& b) {
  const Eigen::Index n = b.rows();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = b;
  m.topRightCorner(n, n) = -b;
  m.bottomLeftCorner(n, n) = -b;
  m.bottomRightCorner(n, n) = b;
  return m;
}

struct SplitResult {
  RealQcqp problem;
  // Set when the input already lived on y >= 0 and was returned unchanged.
  bool already_nonnegative = false;
};

inline SplitResult split_nonnegative(const RealQcqp& p) {
  validate(p);
  if (p.nonneg_domain) return {p, true};
  RealQcqp out;
  out.dimension = 2 * p.dimension;
  out.objective = split_matrix(p.objective);
  out.objective_offset = p.objective_offset;
  out.nonneg_domain = true;
  out.split_from = p.dimension;
  out.constraints.reserve(p.constraints.size());
  for (const auto& c : p.constraints) {
    out.constraints.push_back(
        {split_matrix(c.matrix), c.sense, c.bound, c.lo, c.hi});
  }
  return {std::move(out), false};
}

// v^H M v (or v^T M v) with plain dense arithmetic. For Hermitian M the
// imaginary part is rounding noise.
template <class Scalar>
Scalar eval_quadratic_direct(const DenseMatrix<Scalar>& m,
                             const DenseVector<Scalar>& v) {
  if (m.rows() != v.size() || m.cols() != v.size()) {
    throw DimensionError("quadratic form: matrix is " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", vector has " +
                         std::to_string(v.size()) + " entries");
  }
  return v.dot(m * v);  // Eigen's dot conjugates the left operand.
}

// Max over canonical rows; -inf when there are none.
template <class Scalar>
double max_violation(const CanonicalQcqp<Scalar>& p,
                     const DenseVector<Scalar>& v) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : p.inequalities) {
    worst = std::max(worst,
                     std::real(eval_quadratic_direct(row.matrix, v)) + row.offset);
  }
  return worst;
}

}  // namespace vqcqp
