// SPDX-License-Identifier: Apache-2.0

#include "kob/fredholm_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kob/error.hpp"
#include "kob/kernels.hpp"

namespace kob::fredholm {

Matrix validated_hermitian(const Matrix &a, double h_tol) {
  if (!a.square())
    throw ValidationError("operator must be a square matrix");
  const double d = hermitian_defect(a);
  if (!(d <= h_tol)) {
    std::ostringstream os;
    os << "operator is not Hermitian (defect " << d << " > h_tol " << h_tol << ")";
    throw ValidationError(os.str());
  }
  return hermitian_part(a);
}

SampledFamily::SampledFamily(std::size_t dim, std::vector<Sample> points, std::vector<Edge> edges,
                             const Tolerances &tol)
    : dim_(dim), points_(std::move(points)), edges_(std::move(edges)) {
  if (dim_ == 0)
    throw InputError("family dimension must be positive");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto &p = points_[i];
    if (p.op.rows() != dim_ || p.op.cols() != dim_)
      throw ValidationError("point '" + p.id + "' has a matrix of the wrong dimension");
    try {
      p.op = validated_hermitian(p.op, tol.h_tol);
    } catch (const ValidationError &e) {
      throw ValidationError("point '" + p.id + "': " + e.what());
    }
    if (!index_.emplace(p.id, i).second)
      throw InputError("duplicate point id '" + p.id + "'");
  }
  for (const auto &[a, b] : edges_) {
    (void)index_of(a);
    (void)index_of(b);
  }
}

std::size_t SampledFamily::index_of(const std::string &id) const {
  const auto it = index_.find(id);
  if (it == index_.end())
    throw InputError("unknown point id '" + id + "'");
  return it->second;
}

void SampledFamily::set_block_size(std::size_t b) {
  if (b != 0 && dim_ % b != 0)
    throw InputError("block size must divide the family dimension");
  block_ = b;
}

std::vector<double> SampledFamily::eigenvalues(std::size_t i) const {
  const Matrix &a = points_.at(i).op;
  if (block_ != 0 && block_ != dim_)
    return eigvalsh_blocked(a, block_);
  return eigvalsh(a);
}

Matrix bounded_transform(const Matrix &a, const Tolerances &tol) {
  EigenDecomposition ed = eigh(validated_hermitian(a, tol.h_tol));
  std::vector<double> f = ed.values;
  kernels::bounded_map(f);
  return spectral_compose(ed, f);
}

double shift_value(int j, int k, double epsilon) {
  return static_cast<double>(j) * epsilon / static_cast<double>(k + 1);
}

Matrix shift_deform(const Matrix &f, int j, int k, double epsilon, const Tolerances &tol) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InputError("shift_deform needs 0 < epsilon < 1");
  if (k < 0 || j < 0 || j > k)
    throw InputError("shift index j must satisfy 0 <= j <= k");
  EigenDecomposition ed = eigh(validated_hermitian(f, tol.h_tol));
  const double norm = ed.values.empty()
                          ? 0.0
                          : std::max(std::abs(ed.values.front()), std::abs(ed.values.back()));
  if (norm > 1.0 + tol.h_tol)
    throw ValidationError("shift_deform needs operator norm <= 1");
  std::vector<double> g = ed.values;
  kernels::shift_map(g, shift_value(j, k, epsilon));
  return spectral_compose(ed, g);
}

int count_in_window(std::span<const double> values, double epsilon, double b_tol) {
  if (!(epsilon > 0.0))
    throw InputError("epsilon must be positive");
  int count = 0;
  for (double v : values) {
    const double dist = std::abs(std::abs(v) - epsilon);
    if (dist <= b_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "eigenvalue " << v << " lies within b_tol of the window edge " << epsilon;
      throw BoundaryAmbiguity(os.str());
    }
    if (std::abs(v) < epsilon)
      ++count;
  }
  return count;
}

int spectral_count(const Matrix &a, double epsilon, const Tolerances &tol) {
  const auto v = eigvalsh(validated_hermitian(a, tol.h_tol));
  return count_in_window(v, epsilon, tol.b_tol);
}

CoverReport build_cover(const SampledFamily &fam, int k, double epsilon, const Tolerances &tol,
                        unsigned jobs) {
  if (k < 0)
    throw InputError("k must be non-negative");
  if (!(epsilon > 0.0))
    throw InputError("epsilon must be positive");

  CoverReport rep;
  rep.k = k;
  rep.epsilon = epsilon;
  for (int j = 0; j <= k; ++j)
    rep.shifts.push_back(shift_value(j, k, epsilon));
  rep.sets.resize(static_cast<std::size_t>(k) + 1);

  const std::size_t n = fam.size();
  // membership[i][j]: 1 invertible, 0 singular, -1 ambiguous
  std::vector<std::vector<int>> membership(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const auto ev = fam.eigenvalues(i);
    double scale = 1.0;
    for (double v : ev)
      scale = std::max(scale, std::abs(v));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    auto &row = membership[i];
    row.resize(rep.shifts.size());
    for (std::size_t j = 0; j < rep.shifts.size(); ++j) {
      // Hermitian: smallest singular value of A - a I is min |lambda - a|.
      double sigma = std::numeric_limits<double>::infinity();
      for (double v : ev)
        sigma = std::min(sigma, std::abs(v - rep.shifts[j]));
      if (sigma > tol.inv_tol)
        row[j] = 1;
      else
        row[j] = sigma > floor ? -1 : 0;
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    const std::string &id = fam.points()[i].id;
    bool any = false;
    bool ambiguous = false;
    for (std::size_t j = 0; j < rep.shifts.size(); ++j) {
      if (membership[i][j] == 1) {
        rep.sets[j].push_back(id);
        any = true;
      } else if (membership[i][j] == -1) {
        ambiguous = true;
      }
    }
    if (!any)
      rep.uncovered_ids.push_back(id);
    if (ambiguous)
      rep.indeterminate_ids.push_back(id);
  }
  rep.covered = rep.uncovered_ids.empty();
  return rep;
}

int spectral_flow(const SampledFamily &fam, const PathSpec &path, double eta, unsigned jobs) {
  if (!(eta > 0.0))
    throw InputError("eta must be positive");
  if (path.ids.empty())
    throw InputError("path is empty");

  std::vector<std::size_t> idx;
  idx.reserve(path.ids.size());
  for (const auto &id : path.ids)
    idx.push_back(fam.index_of(id));
  for (std::size_t s = 0; s + 1 < idx.size(); ++s)
    if (idx[s] == idx[s + 1])
      throw InputError("consecutive path ids must differ ('" + path.ids[s] + "')");

  std::vector<std::pair<std::size_t, std::size_t>> steps;
  for (std::size_t s = 0; s + 1 < idx.size(); ++s)
    steps.emplace_back(s, s + 1);
  if (path.closed && idx.size() > 1 && idx.front() != idx.back())
    steps.emplace_back(idx.size() - 1, 0);

  // Step fineness in operator norm; the Frobenius norm bounds it from above
  // and settles most steps without an eigensolve.
  std::vector<double> step_norm(steps.size());
  parallel_for(steps.size(), jobs, [&](std::size_t s) {
    const Matrix &a = fam.points()[idx[steps[s].first]].op;
    const Matrix &b = fam.points()[idx[steps[s].second]].op;
    const double frob = frobenius_distance(a, b);
    step_norm[s] = frob < eta ? frob : hermitian_operator_norm(b - a);
  });
  for (std::size_t s = 0; s < steps.size(); ++s)
    if (!(step_norm[s] < eta)) {
      std::ostringstream os;
      os.precision(17);
      os << "refinement required on edge " << path.ids[steps[s].first] << " -> "
         << path.ids[steps[s].second] << ": step norm " << step_norm[s] << " >= eta " << eta;
      throw RefinementRequired(os.str());
    }

  std::vector<int> negatives(idx.size());
  std::vector<double> gap(idx.size());
  parallel_for(idx.size(), jobs, [&](std::size_t s) {
    const auto ev = fam.eigenvalues(idx[s]);
    int neg = 0;
    double g = std::numeric_limits<double>::infinity();
    for (double v : ev) {
      if (v < 0.0)
        ++neg;
      g = std::min(g, std::abs(v));
    }
    negatives[s] = neg;
    gap[s] = g;
  });

  if (!path.closed) {
    for (std::size_t s : {std::size_t{0}, idx.size() - 1})
      if (gap[s] <= eta) {
        std::ostringstream os;
        os.precision(17);
        os << "endpoint " << path.ids[s] << " has an eigenvalue within eta " << eta
           << " of zero (|lambda| = " << gap[s] << ")";
        throw EndpointDegeneracy(os.str());
      }
  }

  int flow = 0;
  for (const auto &[from, to] : steps)
    flow += negatives[from] - negatives[to];
  return flow;
}

} // namespace kob::fredholm
