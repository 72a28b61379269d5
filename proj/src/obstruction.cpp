// SPDX-License-Identifier: Apache-2.0

#include "kob/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "kob/cohomology.hpp"
#include "kob/error.hpp"
#include "kob/parallel.hpp"

namespace kob::obstruction {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<int> unflatten(std::size_t flat, int k, int m) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int c = k - 1; c >= 0; --c) {
    idx[static_cast<std::size_t>(c)] = static_cast<int>(flat % static_cast<std::size_t>(m));
    flat /= static_cast<std::size_t>(m);
  }
  return idx;
}

std::vector<double> angles_of(std::span<const int> index, int m) {
  std::vector<double> a;
  a.reserve(index.size());
  for (int i : index)
    a.push_back(static_cast<double>(i) / static_cast<double>(m));
  return a;
}

// Normalized DFT matrix, a fixed non-diagonal unitary.
Matrix dft(std::size_t k) {
  Matrix q(k, k);
  const double norm = 1.0 / std::sqrt(static_cast<double>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      q(a, b) = std::polar(norm, two_pi * static_cast<double>(a * b) / static_cast<double>(k));
  return q;
}

// (I (x) Q) D (I (x) Q)* for a block-diagonal D with k x k blocks.
Matrix conjugate_blocks(const Matrix &d, const Matrix &q) {
  const std::size_t k = q.rows();
  const Matrix qa = q.adjoint();
  Matrix out(d.rows(), d.cols());
  Matrix block(k, k);
  for (std::size_t b0 = 0; b0 < d.rows(); b0 += k) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        block(i, j) = d(b0 + i, b0 + j);
    const Matrix r = hermitian_part(q * block * qa);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        out(b0 + i, b0 + j) = r(i, j);
  }
  return out;
}

std::set<std::vector<int>> excluded_set(const TorusGridSpec &spec) {
  return {spec.excluded.begin(), spec.excluded.end()};
}

} // namespace

void TorusGridSpec::validate() const {
  if (k < 1)
    throw InputError("grid needs k >= 1");
  if (resolution < 2)
    throw InputError("grid resolution must be at least 2");
  if (truncation < 1)
    throw InputError("truncation needs N >= 1");
  if (!(scale > 0.0))
    throw InputError("scale must be positive");
  (void)grid_size();
  for (const auto &e : excluded) {
    if (e.size() != static_cast<std::size_t>(k))
      throw InputError("excluded grid index has the wrong length");
    for (int i : e)
      if (i < 0 || i >= resolution)
        throw InputError("excluded grid index out of range");
  }
}

std::size_t TorusGridSpec::grid_size() const {
  std::size_t n = 1;
  for (int c = 0; c < k; ++c) {
    n *= static_cast<std::size_t>(resolution);
    if (n > max_grid_points)
      throw InputError("grid of " + std::to_string(resolution) + "^" + std::to_string(k) +
                       " points exceeds the limit of " + std::to_string(max_grid_points));
  }
  return n;
}

std::string grid_id(std::span<const int> index) {
  std::string s;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i > 0)
      s += '_';
    s += std::to_string(index[i]);
  }
  return s;
}

std::vector<int> parse_grid_id(const std::string &id, int k, int resolution) {
  std::vector<int> idx;
  std::stringstream ss(id);
  std::string part;
  while (std::getline(ss, part, '_')) {
    if (part.empty() || part.size() > 9 ||
        !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw InputError("malformed grid id '" + id + "'");
    idx.push_back(std::stoi(part));
  }
  if (idx.size() != static_cast<std::size_t>(k))
    throw InputError("grid id '" + id + "' does not have " + std::to_string(k) + " coordinates");
  for (int i : idx)
    if (i >= resolution)
      throw InputError("grid id '" + id + "' is out of range");
  return idx;
}

circle::HolonomySpec grid_holonomy(const TorusGridSpec &spec, std::span<const int> index) {
  const auto angles = angles_of(index, spec.resolution);
  if (spec.diagonal_only)
    return circle::HolonomySpec::from_angles(angles);
  const Matrix q = dft(angles.size());
  return circle::HolonomySpec::from_matrix(q * circle::diagonal_unitary(angles) * q.adjoint());
}

fredholm::SampledFamily tautological_family(const TorusGridSpec &spec, const Tolerances &tol) {
  spec.validate();
  const std::size_t total = spec.grid_size();
  const auto skip = excluded_set(spec);
  const int m = spec.resolution;
  const Matrix q = dft(static_cast<std::size_t>(spec.k));

  std::vector<fredholm::Sample> samples;
  std::set<std::vector<int>> present;
  for (std::size_t flat = 0; flat < total; ++flat) {
    auto idx = unflatten(flat, spec.k, m);
    if (skip.count(idx))
      continue;
    auto angles = angles_of(idx, m);
    Matrix op = circle::dirac_ladder(angles, spec.spin, spec.truncation, spec.scale);
    if (!spec.diagonal_only)
      op = conjugate_blocks(op, q);
    samples.push_back({grid_id(idx), std::move(angles), std::move(op)});
    present.insert(std::move(idx));
  }

  std::vector<fredholm::Edge> edges;
  for (const auto &idx : present) {
    for (int c = 0; c < spec.k; ++c) {
      auto nb = idx;
      auto &coord = nb[static_cast<std::size_t>(c)];
      coord = (coord + 1) % m;
      if (m == 2 && idx[static_cast<std::size_t>(c)] == 1)
        continue;
      if (present.count(nb))
        edges.emplace_back(grid_id(idx), grid_id(nb));
    }
  }

  const std::size_t dim = static_cast<std::size_t>(spec.k) * (2 * static_cast<std::size_t>(spec.truncation) + 1);
  fredholm::SampledFamily fam(dim, std::move(samples), std::move(edges), tol);
  fam.set_block_size(static_cast<std::size_t>(spec.k));
  return fam;
}

ObstructionVerdict verify_contrapositive(const TorusGridSpec &spec, std::span<const double> epsilons,
                                         const VerifyOptions &opt) {
  spec.validate();
  if (epsilons.empty())
    throw InputError("need at least one epsilon");
  for (double e : epsilons)
    if (!(e > 0.0))
      throw InputError("epsilon must be positive");

  ObstructionVerdict v;
  v.grid = spec;
  v.bounded = opt.bounded;
  v.tolerances = opt.tol;

  const cohomology::AlgebraContext ctx(spec.k);
  std::vector<int> all(static_cast<std::size_t>(spec.k));
  std::iota(all.begin(), all.end(), 1);
  const auto product = cohomology::obstruction_product(ctx, all);
  v.cohomology_product = product.to_string();
  v.cohomology_product_nonzero = !product.is_zero();

  fredholm::SampledFamily fam = tautological_family(spec, opt.tol);
  if (opt.bounded) {
    std::vector<fredholm::Sample> transformed(fam.points().begin(), fam.points().end());
    parallel_for(transformed.size(), opt.jobs, [&](std::size_t i) {
      transformed[i].op = fredholm::bounded_transform(transformed[i].op, opt.tol);
    });
    fam = fredholm::SampledFamily(fam.dim(), std::move(transformed), fam.edges(), opt.tol);
  }

  const std::size_t n = fam.size();
  if (n == 0)
    throw InputError("every grid point is excluded");
  std::vector<std::vector<double>> spectra(n);
  parallel_for(n, opt.jobs, [&](std::size_t i) { spectra[i] = fam.eigenvalues(i); });

  for (double eps : epsilons) {
    EpsilonVerdict ev;
    ev.epsilon = eps;
    ev.window = opt.bounded ? fredholm::bounded_scalar(eps) : eps;
    std::vector<int> counts(n);
    for (std::size_t i = 0; i < n; ++i) {
      try {
        counts[i] = fredholm::count_in_window(spectra[i], ev.window, opt.tol.b_tol);
      } catch (const BoundaryAmbiguity &e) {
        throw BoundaryAmbiguity("grid point " + fam.points()[i].id + ": " + e.what());
      }
    }
    ev.max_count = *std::max_element(counts.begin(), counts.end());

    int best_kernel = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] != ev.max_count)
        continue;
      const auto &pt = fam.points()[i];
      const auto idx = parse_grid_id(pt.id, spec.k, spec.resolution);
      const int kd = circle::kernel_dim(grid_holonomy(spec, idx), spec.spin, opt.tol);
      if (kd > best_kernel) {
        best_kernel = kd;
        ev.witness_id = pt.id;
        ev.witness_coords = pt.coords.value_or(std::vector<double>{});
      }
    }
    ev.witness_kernel_dim = best_kernel;
    ev.cover_ok = fredholm::build_cover(fam, ev.max_count, ev.window, opt.tol, opt.jobs).covered;
    ev.pass = ev.max_count >= spec.k;
    v.per_epsilon.push_back(std::move(ev));
  }

  v.reported = static_cast<std::size_t>(
      std::min_element(epsilons.begin(), epsilons.end()) - epsilons.begin());
  v.pass = v.cohomology_product_nonzero &&
           std::all_of(v.per_epsilon.begin(), v.per_epsilon.end(),
                       [](const EpsilonVerdict &e) { return e.pass; });
  if (!v.cohomology_product_nonzero) {
    v.note = "top cup product vanished";
  } else if (!v.pass) {
    v.note = std::string("sampled grid has no point with ") + std::to_string(spec.k) +
             " eigenvalues in some window; the grid misses the kernel witness at (" +
             (spec.spin == circle::SpinStructure::antiperiodic ? "1/2" : "0") +
             ", ...); this is a sampling gap, not a counterexample";
  }
  return v;
}

fredholm::PathSpec generator_loop(const TorusGridSpec &spec, int j) {
  spec.validate();
  if (j < 1 || j > spec.k)
    throw InputError("generator loop coordinate must be in 1..k");
  const int m = spec.resolution;
  const int quarter = static_cast<int>(std::lround(static_cast<double>(m) / 4.0)) % m;
  std::vector<int> idx(static_cast<std::size_t>(spec.k), quarter);
  fredholm::PathSpec p;
  p.closed = true;
  for (int i = 0; i < m; ++i) {
    idx[static_cast<std::size_t>(j - 1)] = i;
    p.ids.push_back(grid_id(idx));
  }
  return p;
}

int c1_pairing(const TorusGridSpec &spec, const fredholm::PathSpec &loop, std::optional<double> eta,
               unsigned jobs) {
  spec.validate();
  if (loop.ids.empty())
    throw InputError("loop is empty");
  const int m = spec.resolution;
  const auto skip = excluded_set(spec);

  std::vector<std::vector<int>> idx;
  for (const auto &id : loop.ids) {
    idx.push_back(parse_grid_id(id, spec.k, m));
    if (skip.count(idx.back()))
      throw InputError("loop visits excluded grid point " + id);
  }

  // Lift the walk to R^k: each grid edge moves one coordinate by +-1/m.
  auto step = [&](const std::vector<int> &a, const std::vector<int> &b, std::size_t s) {
    std::vector<int> d(a.size(), 0);
    int moved = 0;
    for (std::size_t c = 0; c < a.size(); ++c) {
      const int diff = ((b[c] - a[c]) % m + m) % m;
      if (diff == 0)
        continue;
      ++moved;
      if (diff == 1)
        d[c] = 1;
      else if (diff == m - 1)
        d[c] = -1;
      else
        moved = 2;
    }
    if (moved != 1)
      throw InputError("loop step " + loop.ids[s] + " -> " + loop.ids[(s + 1) % loop.ids.size()] +
                       " is not a grid edge");
    return d;
  };

  std::vector<std::vector<long>> lifted{{idx[0].begin(), idx[0].end()}};
  const std::size_t n = idx.size();
  const std::size_t nsteps = loop.closed && n > 1 ? n : n - 1;
  for (std::size_t s = 0; s < nsteps; ++s) {
    const auto d = step(idx[s], idx[(s + 1) % n], s);
    auto next = lifted.back();
    for (std::size_t c = 0; c < d.size(); ++c)
      next[c] += d[c];
    lifted.push_back(std::move(next));
  }
  if (lifted.size() == 1)
    return 0;

  const double step_norm = two_pi * spec.scale / static_cast<double>(m);
  const double gap = eta.value_or(1.25 * step_norm);

  const Matrix q = dft(static_cast<std::size_t>(spec.k));
  auto ladder_at = [&](const std::vector<long> &pos) {
    std::vector<double> angles;
    for (long p : pos)
      angles.push_back(static_cast<double>(p) / static_cast<double>(m));
    Matrix op = circle::dirac_ladder(angles, spec.spin, spec.truncation, spec.scale);
    return spec.diagonal_only ? op : conjugate_blocks(op, q);
  };

  // On a closed loop the base point is free; start where the spectrum has
  // a gap of at least eta around zero.
  std::size_t base = 0;
  if (loop.closed) {
    base = n;
    for (std::size_t s = 0; s < n; ++s) {
      const auto ev = eigvalsh_blocked(ladder_at(lifted[s]), static_cast<std::size_t>(spec.k));
      const bool gapped =
          std::all_of(ev.begin(), ev.end(), [&](double x) { return std::abs(x) > gap; });
      if (gapped) {
        base = s;
        break;
      }
    }
    if (base == n)
      throw EndpointDegeneracy("every point of the loop has an eigenvalue within eta of zero");
  }

  // Walk base -> ... -> end -> (wrap, shifted by the winding) -> base + winding.
  std::vector<std::vector<long>> walk(lifted.begin() + static_cast<long>(base), lifted.end());
  if (loop.closed && base > 0) {
    std::vector<long> winding(lifted.back().size());
    for (std::size_t c = 0; c < winding.size(); ++c)
      winding[c] = lifted.back()[c] - lifted.front()[c];
    for (std::size_t s = 1; s <= base; ++s) {
      auto p = lifted[s];
      for (std::size_t c = 0; c < p.size(); ++c)
        p[c] += winding[c];
      walk.push_back(std::move(p));
    }
  }

  std::vector<fredholm::Sample> samples(walk.size());
  parallel_for(walk.size(), jobs, [&](std::size_t s) {
    samples[s] = {"s" + std::to_string(s), std::nullopt, ladder_at(walk[s])};
  });
  fredholm::PathSpec path;
  for (const auto &smp : samples)
    path.ids.push_back(smp.id);
  const std::size_t dim = samples.front().op.rows();
  fredholm::SampledFamily fam(dim, std::move(samples));
  fam.set_block_size(static_cast<std::size_t>(spec.k));
  return fredholm::spectral_flow(fam, path, gap, jobs);
}

std::string summary_table(const ObstructionVerdict &v) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-12s %-9s %-16s %-10s %-6s %s\n", "epsilon", "window",
                "max_count", "witness", "kernel_dim", "cover", "result");
  os << line;
  for (const auto &e : v.per_epsilon) {
    std::snprintf(line, sizeof line, "%-12.6g %-12.6g %-9d %-16s %-10d %-6s %s\n", e.epsilon,
                  e.window, e.max_count, e.witness_id.c_str(), e.witness_kernel_dim,
                  e.cover_ok ? "ok" : "FAIL", e.pass ? "pass" : "FAIL");
    os << line;
  }
  os << "top product c1..c" << v.grid.k << ": "
     << (v.cohomology_product_nonzero ? "nonzero" : "zero") << " (" << v.cohomology_product << ")\n";
  os << "verdict: " << (v.pass ? "PASS" : "FAIL") << "\n";
  if (!v.note.empty())
    os << "note: " << v.note << "\n";
  return os.str();
}

} // namespace kob::obstruction
