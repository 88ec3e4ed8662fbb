#include "legevo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

namespace legevo {

namespace {

Eigen::VectorXd mean_of(const std::vector<Eigen::VectorXd>& v) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(v.front().size());
  for (const auto& x : v) m += x;
  return m / static_cast<double>(v.size());
}

void require_group(const GroupSample& g, Eigen::Index dim) {
  if (g.vectors.size() < 2)
    throw std::domain_error("group '" + g.label + "' needs at least two samples");
  for (const auto& v : g.vectors)
    if (v.size() != dim) throw std::domain_error("sample dimensions differ");
}

// Midranks (1-based) of the pooled sample and the tie-group sizes.
std::vector<double> midranks(const std::vector<double>& pooled, std::vector<std::size_t>* ties) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    if (ties) ties->push_back(j - i + 1);
    i = j + 1;
  }
  return rank;
}

// Two-sided exact p: share of all splits of the pooled ranks whose
// min(U_x, U_y) is at most the observed one.
double exact_p(const std::vector<double>& ranks, std::size_t nx, double u_obs) {
  const std::size_t n = ranks.size();
  const double nxny = static_cast<double>(nx * (n - nx));
  const double offset = static_cast<double>(nx * (nx + 1)) / 2.0;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(nx), true);
  std::size_t hits = 0;
  std::size_t total = 0;
  // prev_permutation over a sorted-descending mask visits every nx-subset once.
  do {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) r += ranks[i];
    const double ux = r - offset;
    const double u = std::min(ux, nxny - ux);
    if (u <= u_obs + 1e-9) ++hits;
    ++total;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

LdaResult lda_project(const GroupSample& a, const GroupSample& b, double epsilon) {
  if (a.vectors.empty() || b.vectors.empty())
    throw std::domain_error("LDA needs two non-empty groups");
  const Eigen::Index dim = a.vectors.front().size();
  require_group(a, dim);
  require_group(b, dim);

  const Eigen::VectorXd ma = mean_of(a.vectors);
  const Eigen::VectorXd mb = mean_of(b.vectors);
  Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& x : a.vectors) sw += (x - ma) * (x - ma).transpose();
  for (const auto& x : b.vectors) sw += (x - mb) * (x - mb).transpose();
  sw += epsilon * Eigen::MatrixXd::Identity(dim, dim);

  Eigen::VectorXd w = sw.ldlt().solve(ma - mb);
  const double norm = w.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    w = Eigen::VectorXd::Unit(dim, 0);
  } else {
    w /= norm;
  }

  LdaResult out;
  out.direction = w;
  for (const auto& x : a.vectors) out.projected_a.push_back(w.dot(x));
  for (const auto& x : b.vectors) out.projected_b.push_back(w.dot(x));
  return out;
}

MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::domain_error("Mann-Whitney needs non-empty samples");
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::vector<std::size_t> ties;
  const auto ranks = midranks(pooled, &ties);

  const double rx = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(nx), 0.0);
  const double nxny = static_cast<double>(nx) * static_cast<double>(ny);
  const double ux = rx - static_cast<double>(nx * (nx + 1)) / 2.0;

  MannWhitneyResult res;
  res.u = std::min(ux, nxny - ux);
  if (nx <= kExactLimit && ny <= kExactLimit) {
    res.exact = true;
    res.p = exact_p(ranks, nx, res.u);
    return res;
  }

  const double n = static_cast<double>(nx + ny);
  double tie_sum = 0.0;
  for (auto t : ties) {
    const double td = static_cast<double>(t);
    tie_sum += td * td * td - td;
  }
  const double var = nxny / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
  if (!(var > 0.0)) {
    res.p = 1.0;
    return res;
  }
  // Continuity-corrected |U - mean|.
  const double z = std::max(std::abs(ux - nxny / 2.0) - 0.5, 0.0) / std::sqrt(var);
  res.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

double cliffs_delta(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::domain_error("Cliff's delta needs non-empty samples");
  long long score = 0;
  for (double a : x)
    for (double b : y) score += (a > b) - (a < b);
  return static_cast<double>(score) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

std::vector<double> holm_correction(std::span<const double> pvalues) {
  const std::size_t m = pvalues.size();
  for (double p : pvalues)
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p-values must lie in [0, 1]");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double v = std::min(1.0, static_cast<double>(m - j) * pvalues[order[j]]);
    running = std::max(running, v);
    adjusted[order[j]] = running;
  }
  return adjusted;
}

}  // namespace legevo
