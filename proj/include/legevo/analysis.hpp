#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace legevo {

/// One group of equal-dimension sample vectors.
struct GroupSample {
  std::string label;
  std::vector<Eigen::VectorXd> vectors;
};

struct LdaResult {
  Eigen::VectorXd direction;  // unit length
  std::vector<double> projected_a;
  std::vector<double> projected_b;
};

/// Two-class Fisher discriminant. The pooled within-class scatter gets
/// epsilon * I added so degenerate groups still give a direction. When the
/// group means coincide the direction falls back to e0.
/// Throws std::domain_error for groups with fewer than two samples.
LdaResult lda_project(const GroupSample& a, const GroupSample& b, double epsilon = 1e-9);

struct MannWhitneyResult {
  double u = 0.0;  // min(U_x, U_y)
  double p = 1.0;  // two-sided
  bool exact = false;
};

/// Midranks for ties. Exact permutation p when both samples have at most
/// kExactLimit values, tie-corrected normal approximation otherwise.
MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kExactLimit = 8;

/// (#{x > y} - #{x < y}) / (n_x n_y).
double cliffs_delta(std::span<const double> x, std::span<const double> y);

/// Holm step-down adjusted p-values, in input order.
std::vector<double> holm_correction(std::span<const double> pvalues);

}  // namespace legevo
