// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "kob/circle_dirac.hpp"
#include "kob/cohomology.hpp"
#include "kob/error.hpp"
#include "kob/fredholm_family.hpp"
#include "kob/io.hpp"
#include "kob/obstruction.hpp"
#include "test_support.hpp"

using namespace kob;
namespace co = kob::cohomology;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string &what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// 1. Exterior-algebra obstruction shadow.
Outcome criterion_cohomology() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  testing::Rng rng(1);
  long products = 0;
  for (int k = 1; k <= 6; ++k) {
    const co::AlgebraContext ctx(k);
    std::vector<int> all(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      all[static_cast<std::size_t>(i)] = i + 1;
    o.require(!co::obstruction_product(ctx, all).is_zero(), "product c1..ck vanished for k=" + std::to_string(k));

    auto product_of = [&](const std::vector<int> &t) {
      co::CohomologyClass p = co::CohomologyClass::unit(ctx);
      for (int i : t)
        p = co::cup(p, co::CohomologyClass::generator(ctx, i));
      ++products;
      return p;
    };
    // Every multiset of k+1 indices from 1..k+1 (k+1 is out of range), each
    // in ascending and in a shuffled order.
    std::vector<int> t(static_cast<std::size_t>(k) + 1, 1);
    for (;;) {
      o.require(product_of(t).is_zero(), "nonzero product of k+1 classes");
      auto shuffled = t;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      o.require(product_of(shuffled).is_zero(), "nonzero shuffled product of k+1 classes");
      std::size_t pos = t.size();
      while (pos > 0 && t[pos - 1] == k + 1)
        --pos;
      if (pos == 0)
        break;
      const int v = ++t[pos - 1];
      for (std::size_t r = pos; r < t.size(); ++r)
        t[r] = v;
    }
    // All ordered tuples for small k.
    if (k <= 4) {
      std::vector<int> u(static_cast<std::size_t>(k) + 1, 1);
      for (;;) {
        o.require(product_of(u).is_zero(), "nonzero ordered product of k+1 classes");
        std::size_t pos = 0;
        while (pos < u.size() && u[pos] == k + 1)
          u[pos++] = 1;
        if (pos == u.size())
          break;
        ++u[pos];
      }
    }
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "runtime " + fmt("%.3f", dt) + " s >= 1 s");
  if (o.pass)
    o.detail = std::to_string(products) + " products, " + fmt("%.3f", dt) + " s";
  return o;
}

// 2. Odd Chern character coefficients.
Outcome criterion_odd_chern() {
  Outcome o;
  const co::AlgebraContext ctx(10);
  std::vector<co::CohomologyClass> gens;
  for (int n = 1; n <= 10; ++n)
    gens.push_back(co::CohomologyClass::generator(ctx, n));
  const auto ch = co::odd_chern_character(gens);
  mpz_class fact = 1;  // (n-1)!, built by repeated multiplication
  for (int n = 1; n <= 10; ++n) {
    if (n > 1)
      fact *= n - 1;
    co::Rational want(n % 2 == 1 ? 1 : -1, fact);
    want.canonicalize();
    o.require(ch.coefficient({n}) == want, "coefficient of c" + std::to_string(n));
    o.require(co::odd_chern_coefficient(n) == want, "odd_chern_coefficient(" + std::to_string(n) + ")");
  }
  o.require(ch.terms().size() == 10, "unexpected extra terms");
  if (o.pass)
    o.detail = "n = 1..10 exact, c10 coefficient " + ch.coefficient({10}).get_str();
  return o;
}

// 3. Kernel dimension witnesses.
Outcome criterion_kernel_dim() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto minus = circle::HolonomySpec::from_matrix(Matrix::identity(k) * cplx(-1.0));
    const auto plus = circle::HolonomySpec::from_matrix(Matrix::identity(k));
    const int a = circle::kernel_dim(minus, circle::SpinStructure::antiperiodic);
    const int b = circle::kernel_dim(plus, circle::SpinStructure::periodic);
    o.require(a == static_cast<int>(k), "kernel_dim(-I_k, 1/2) != k for k=" + std::to_string(k));
    o.require(b == static_cast<int>(k), "kernel_dim(I_k, 0) != k for k=" + std::to_string(k));
    // the truncated operator must carry exactly that many zero modes
    const auto ev = circle::truncation_eigenvalues(minus, circle::SpinStructure::antiperiodic, 4);
    const auto zeros = std::count_if(ev.begin(), ev.end(), [](double x) { return std::abs(x) < 1e-9; });
    o.require(zeros == static_cast<long>(k), "truncation zero modes disagree");
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "runtime " + fmt("%.3f", dt) + " s >= 1 s");
  if (o.pass)
    o.detail = "k = 1..4, " + fmt("%.3f", dt) + " s";
  return o;
}

// 4. Truncation against the closed form.
Outcome criterion_truncation() {
  Outcome o;
  testing::Rng rng(4);
  std::uniform_int_distribution<int> kd(1, 8);
  const double eps = std::numbers::pi;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = static_cast<std::size_t>(kd(rng));
    const auto theta = testing::uniform_values(k, 0.0, 1.0, rng);
    const Matrix v = testing::random_unitary(k, rng);
    const auto h = circle::HolonomySpec::from_matrix(v * circle::diagonal_unitary(theta) * v.adjoint());
    for (auto s : {circle::SpinStructure::periodic, circle::SpinStructure::antiperiodic}) {
      std::vector<double> inside;
      for (double x : circle::truncation_eigenvalues(h, s, 4))
        if (std::abs(x) < eps)
          inside.push_back(x);
      std::vector<double> closed;
      for (const auto &l : circle::analytic_spectrum(h, s, eps).lines)
        closed.insert(closed.end(), static_cast<std::size_t>(l.multiplicity), l.value);
      if (inside.size() != closed.size()) {
        o.require(false, "window sizes differ in trial " + std::to_string(trial));
        continue;
      }
      for (std::size_t i = 0; i < inside.size(); ++i)
        worst = std::max(worst, std::abs(inside[i] - closed[i]));
    }
  }
  o.require(worst < 1e-9, "max deviation " + fmt("%.3e", worst));
  if (o.pass)
    o.detail = "200 spectra, max deviation " + fmt("%.2e", worst);
  return o;
}

// 5. Cover completeness and sharpness.
Outcome criterion_cover() {
  Outcome o;
  testing::Rng rng(5);
  std::uniform_int_distribution<int> dim_d(1, 20), pts_d(1, 50), k_d(1, 3), mode_d(0, 3);
  int accepted = 0, generated = 0;
  while (accepted < 500) {
    ++generated;
    const int k = k_d(rng);
    const double eps = testing::uniform_values(1, 0.05, 0.95, rng)[0];
    const std::size_t dim = static_cast<std::size_t>(dim_d(rng));
    const int np = pts_d(rng);
    std::vector<fredholm::Sample> pts;
    for (int p = 0; p < np; ++p) {
      Matrix a;
      switch (mode_d(rng)) {
      case 0:  // unstructured
        a = testing::random_hermitian(dim, rng, 0.5);
        break;
      default: {  // planted: up to k eigenvalues in the window, some pinned on shifts
        std::uniform_int_distribution<int> c_d(0, std::min<int>(k, static_cast<int>(dim)));
        const int c = c_d(rng);
        std::vector<double> lambda;
        for (int i = 0; i < c; ++i) {
          if (i % 2 == 0)
            lambda.push_back(fredholm::shift_value((i + p) % (k + 1), k, eps));
          else
            lambda.push_back(testing::uniform_values(1, -eps, eps, rng)[0]);
        }
        while (lambda.size() < dim) {
          const double x = testing::uniform_values(1, eps, 1.0, rng)[0];
          lambda.push_back(lambda.size() % 2 ? x : -x);
        }
        a = testing::hermitian_with_spectrum(lambda, rng);
      }
      }
      pts.push_back({"p" + std::to_string(p), std::nullopt, std::move(a)});
    }
    const fredholm::SampledFamily fam(dim, std::move(pts));
    int max_count = 0;
    try {
      for (std::size_t i = 0; i < fam.size(); ++i)
        max_count = std::max(max_count, fredholm::count_in_window(fam.eigenvalues(i), eps, 1e-8));
    } catch (const BoundaryAmbiguity &) {
      continue;
    }
    if (max_count > k)
      continue;
    ++accepted;
    const auto rep = fredholm::build_cover(fam, k, eps, default_tolerances(), 2);
    o.require(rep.covered, "uncovered family with max count <= k (instance " + std::to_string(accepted) + ")");
  }
  for (int k = 1; k <= 3; ++k) {
    std::vector<double> shifts;
    for (int j = 0; j <= k; ++j)
      shifts.push_back(fredholm::shift_value(j, k, 0.6));
    const fredholm::SampledFamily bad(shifts.size(), {{"bad", std::nullopt, Matrix::diagonal(shifts)}});
    o.require(!fredholm::build_cover(bad, k, 0.6).covered, "all-shifts point reported covered");
  }
  if (o.pass)
    o.detail = std::to_string(accepted) + " of " + std::to_string(generated) +
               " families accepted, all covered; all-shifts points uncovered";
  return o;
}

// 6. Kernel equality for g_j.
Outcome criterion_shift_kernel() {
  Outcome o;
  testing::Rng rng(6);
  double worst = 0.0;
  long cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 10);
    auto lambda = testing::uniform_values(n, -1.0, 1.0, rng);
    // pin some eigenvalues on shift values of a few (k, eps) pairs
    const int pk = 1 + trial % 3;
    const double peps = trial % 2 ? 0.3 : 0.9;
    for (std::size_t i = 0; i < n / 2; ++i)
      lambda[i] = fredholm::shift_value(static_cast<int>(i) % (pk + 1), pk, peps);
    const Matrix f = testing::hermitian_with_spectrum(lambda, rng);
    const auto fev = eigvalsh(f);
    for (int k : {1, 2, 3})
      for (double eps : {0.3, 0.9})
        for (int j = 0; j <= k; ++j) {
          ++cases;
          const double a = fredholm::shift_value(j, k, eps);
          const auto got = eigvalsh(fredholm::shift_deform(f, j, k, eps));
          std::vector<double> want;
          for (double x : fev)
            want.push_back(testing::shift_reference(x, a));
          std::sort(want.begin(), want.end());
          for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(got[i] - want[i]));
          const auto zeros = std::count_if(got.begin(), got.end(), [](double x) { return std::abs(x) <= 1e-8; });
          const auto at_a = std::count_if(fev.begin(), fev.end(), [&](double x) { return std::abs(x - a) <= 1e-8; });
          o.require(zeros == at_a, "kernel multiplicity mismatch in trial " + std::to_string(trial));
        }
  }
  o.require(worst < 1e-10, "max eigenvalue deviation " + fmt("%.3e", worst));
  if (o.pass)
    o.detail = std::to_string(cases) + " cases, max deviation " + fmt("%.2e", worst);
  return o;
}

// 7. Spectral flow normalization.
Outcome criterion_flow() {
  Outcome o;
  auto lifted_flow = [](int steps, bool reverse) {
    std::vector<fredholm::Sample> pts;
    fredholm::PathSpec path;
    for (int i = 0; i <= steps; ++i) {
      const std::vector<double> ang{static_cast<double>(i) / steps};
      pts.push_back({"t" + std::to_string(i), ang,
                     circle::dirac_ladder(ang, circle::SpinStructure::antiperiodic, 4)});
      path.ids.push_back("t" + std::to_string(i));
    }
    if (reverse)
      std::reverse(path.ids.begin(), path.ids.end());
    const fredholm::SampledFamily fam(9, std::move(pts));
    return fredholm::spectral_flow(fam, path, 0.5);
  };
  o.require(lifted_flow(64, false) == 1, "64-step loop flow != +1");
  o.require(lifted_flow(64, true) == -1, "reversed loop flow != -1");
  o.require(lifted_flow(128, false) == 1, "128-step loop flow != +1");

  const auto ladder = circle::dirac_ladder(std::vector<double>{0.25}, circle::SpinStructure::antiperiodic, 4);
  const fredholm::SampledFamily constant(9, {{"a", std::nullopt, ladder}, {"b", std::nullopt, ladder}});
  o.require(fredholm::spectral_flow(constant, {{"a", "b", "a"}, false}, 0.5) == 0, "constant loop flow != 0");

  for (int m : {64, 128}) {
    obstruction::TorusGridSpec g;
    g.k = 1;
    g.resolution = m;
    g.truncation = 4;
    auto loop = obstruction::generator_loop(g, 1);
    o.require(obstruction::c1_pairing(g, loop) == 1, "c1 pairing != +1 at m=" + std::to_string(m));
    std::reverse(loop.ids.begin(), loop.ids.end());
    o.require(obstruction::c1_pairing(g, loop) == -1, "reversed c1 pairing != -1");
  }
  if (o.pass)
    o.detail = "flow +1 / -1 / 0, unchanged at 128 steps";
  return o;
}

// 8. End-to-end contrapositive check through the command line.
Outcome criterion_verify() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"kob", "verify", "--k", "3", "--resolution", "8", "--delta", "1/2", "--truncation",
                             "4", "--epsilons", "1,0.1,0.01"},
                            out, err);
  const double dt = seconds_since(t0);
  o.require(code == cli::ok, "exit code " + std::to_string(code) + ": " + err.str());
  if (code == cli::ok || code == cli::verified_negative) {
    const auto j = io::json::parse(out.str());
    o.require(j["pass"] == true, "verdict failed");
    o.require(j["cohomology_product_nonzero"] == true, "triple product vanished");
    for (const auto &e : j["per_epsilon"]) {
      o.require(e["max_count"].get<int>() >= 3, "max_count < 3");
      o.require(e["witness"] == "4_4_4", "witness not at (1/2,1/2,1/2)");
      o.require(e["witness_kernel_dim"] == 3, "witness kernel_dim != 3");
    }
  }
  o.require(dt < 30.0, "runtime " + fmt("%.2f", dt) + " s >= 30 s");
  if (o.pass)
    o.detail = "witness 4_4_4 with kernel_dim 3 at every epsilon, " + fmt("%.2f", dt) + " s";
  return o;
}

// 9. Bounded transform properties.
Outcome criterion_bounded() {
  Outcome o;
  testing::Rng rng(9);
  std::uniform_int_distribution<int> nd(1, 24);
  double worst = 0.0;
  int invariance_checked = 0, ambiguous = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(nd(rng));
    const double scale = trial % 4 == 0 ? 100.0 : 2.0;
    const Matrix a = testing::random_hermitian(n, rng, scale);
    const Matrix f = fredholm::bounded_transform(a);
    o.require(hermitian_operator_norm(f) < 1.0, "output norm >= 1");
    const auto ea = eigvalsh(a);
    const auto ef = eigvalsh(f);
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(ef[i] - ea[i] / std::sqrt(1.0 + ea[i] * ea[i])));
    const double eps = testing::uniform_values(1, 0.05, 3.0 * scale, rng)[0];
    try {
      const int c = fredholm::spectral_count(a, eps);
      const int cf = fredholm::spectral_count(f, fredholm::bounded_scalar(eps));
      o.require(c == cf, "spectral count changed under phi");
      ++invariance_checked;
    } catch (const BoundaryAmbiguity &) {
      ++ambiguous;
    }
  }
  o.require(worst < 1e-10, "eigenvalue map deviation " + fmt("%.3e", worst));
  if (o.pass)
    o.detail = "200 matrices, max deviation " + fmt("%.2e", worst) + ", count invariance on " +
               std::to_string(invariance_checked) + " (" + std::to_string(ambiguous) + " ambiguous skipped)";
  return o;
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exterior-algebra obstruction shadow", criterion_cohomology},
      {"odd Chern character coefficients", criterion_odd_chern},
      {"kernel dimension witnesses for -I_k and I_k", criterion_kernel_dim},
      {"Fourier truncation matches the closed-form spectrum", criterion_truncation},
      {"cover completeness and sharpness", criterion_cover},
      {"kernel equality of the shift maps g_j", criterion_shift_kernel},
      {"spectral flow normalization", criterion_flow},
      {"contrapositive end-to-end verify", criterion_verify},
      {"bounded transform properties", criterion_bounded},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << (i + 1) << "] " << criteria[i].first << ": " << o.detail
              << "\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " acceptance criteria passed\n";
  return failed == 0 ? 0 : 1;
}
