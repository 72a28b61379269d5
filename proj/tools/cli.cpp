// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "kob/circle_dirac.hpp"
#include "kob/cohomology.hpp"
#include "kob/error.hpp"
#include "kob/fredholm_family.hpp"
#include "kob/io.hpp"
#include "kob/obstruction.hpp"
#include "kob/parallel.hpp"

namespace kob::cli {

namespace {

using io::json;

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(item);
  if (out.empty() || std::any_of(out.begin(), out.end(), [](const auto &x) { return x.empty(); }))
    throw InputError("malformed comma-separated list '" + s + "'");
  return out;
}

std::vector<double> parse_real_list(const std::string &s) {
  std::vector<double> out;
  for (const auto &x : split_list(s))
    out.push_back(io::parse_real(x));
  return out;
}

std::vector<int> parse_int_list(const std::string &s) {
  std::vector<int> out;
  for (const auto &x : split_list(s)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(x, &used);
    } catch (const std::logic_error &) {
      used = 0;
    }
    if (used != x.size() || used == 0)
      throw InputError("'" + x + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

struct Common {
  unsigned jobs = default_jobs();
  Tolerances tol;
  std::string output;
};

void add_tolerance_flags(CLI::App &app, Common &c) {
  auto pos = CLI::PositiveNumber;
  app.add_option("--u-tol", c.tol.u_tol, "unitarity tolerance")->check(pos)->capture_default_str();
  app.add_option("--r-tol", c.tol.r_tol, "eigen-residual tolerance")->check(pos)->capture_default_str();
  app.add_option("--c-tol", c.tol.c_tol, "multiplicity clustering tolerance")->check(pos)->capture_default_str();
  app.add_option("--i-tol", c.tol.i_tol, "integrality tolerance")->check(pos)->capture_default_str();
  app.add_option("--h-tol", c.tol.h_tol, "Hermitian symmetry tolerance")->check(pos)->capture_default_str();
  app.add_option("--inv-tol", c.tol.inv_tol, "invertibility threshold")->check(pos)->capture_default_str();
  app.add_option("--b-tol", c.tol.b_tol, "window-edge ambiguity band")->check(pos)->capture_default_str();
}

void emit(const std::string &text, const Common &c, std::ostream &out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output);
  if (!f)
    throw InputError("cannot write '" + c.output + "'");
  f << text;
}

struct HolonomyArgs {
  std::string file;
  std::string angles;
  std::string delta;
};

void add_holonomy_flags(CLI::App *sub, HolonomyArgs &h) {
  sub->add_option("holonomy", h.file, "holonomy JSON file");
  sub->add_option("--angles", h.angles, "comma-separated angles in [0,1) (decimals or p/q)");
  sub->add_option("--delta", h.delta, "spin structure: 0 or 1/2 (default 1/2)");
}

std::pair<circle::HolonomySpec, circle::SpinStructure> load_holonomy(const HolonomyArgs &h,
                                                                     const Tolerances &tol) {
  if (h.file.empty() == h.angles.empty())
    throw InputError("give exactly one of a holonomy file or --angles");
  std::optional<circle::SpinStructure> spin;
  std::optional<circle::HolonomySpec> hol;
  if (!h.file.empty()) {
    auto parsed = io::parse_holonomy(io::read_json_file(h.file), tol);
    spin = parsed.spin;
    hol = std::move(parsed.holonomy);
  } else {
    hol = circle::HolonomySpec::from_angles(parse_real_list(h.angles));
  }
  if (!h.delta.empty())
    spin = circle::parse_spin(h.delta);
  return {std::move(*hol), spin.value_or(circle::default_spin)};
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Kernel-dimension obstruction toolkit for twisted Dirac operators on the circle"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--jobs", common.jobs, "worker threads (default: KOB_JOBS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("-o,--output", common.output, "write the result to this file");
  add_tolerance_flags(app, common);

  // spectrum
  HolonomyArgs spec_h;
  double spec_eps = 0.0;
  int spec_trunc = 0;
  double spec_scale = 1.0;
  auto *spectrum = app.add_subcommand("spectrum", "eigenvalues inside (-eps, eps) as CSV");
  add_holonomy_flags(spectrum, spec_h);
  spectrum->add_option("--epsilon", spec_eps, "window half-width")->required()->check(CLI::PositiveNumber);
  spectrum->add_option("--truncation", spec_trunc, "use the N-mode Fourier truncation instead of the closed form")
      ->check(CLI::PositiveNumber);
  spectrum->add_option("--scale", spec_scale, "eigenvalue scale factor")->check(CLI::PositiveNumber);

  // kernel-dim
  HolonomyArgs kd_h;
  auto *kdim = app.add_subcommand("kernel-dim", "dimension of the kernel of the twisted Dirac operator");
  add_holonomy_flags(kdim, kd_h);

  // cohomology
  int coh_k = 0;
  std::string coh_indices;
  auto *coh = app.add_subcommand("cohomology", "cup product of odd generators in Lambda[c1..ck]");
  coh->add_option("--k", coh_k, "number of generators")->required();
  coh->add_option("--indices", coh_indices, "strictly ascending comma-separated indices")->required();

  // cover
  std::string cov_file;
  int cov_k = 0;
  double cov_eps = 0.0;
  auto *cover = app.add_subcommand("cover", "invertibility cover U_0..U_k of a sampled family");
  cover->add_option("family", cov_file, "family JSON file")->required();
  cover->add_option("--k", cov_k, "spectral count bound")->required()->check(CLI::NonNegativeNumber);
  cover->add_option("--epsilon", cov_eps, "window half-width")->required()->check(CLI::PositiveNumber);

  // verify
  obstruction::TorusGridSpec grid;
  std::string ver_delta = "1/2";
  std::string ver_eps;
  std::string ver_exclude;
  bool ver_bounded = false;
  bool ver_full = false;
  auto *verify = app.add_subcommand("verify", "check the obstruction on the tautological torus family");
  verify->add_option("--k", grid.k, "rank of the twist")->required();
  verify->add_option("--resolution", grid.resolution, "grid points per angle (>= 2)")->required();
  verify->add_option("--delta", ver_delta, "spin structure: 0 or 1/2")->capture_default_str();
  verify->add_option("--truncation", grid.truncation, "Fourier modes -N..N")->required();
  verify->add_option("--epsilons", ver_eps, "comma-separated window half-widths")->required();
  verify->add_option("--scale", grid.scale, "eigenvalue scale factor");
  verify->add_option("--exclude", ver_exclude, "comma-separated grid ids to leave out (e.g. 4_4)");
  verify->add_flag("--bounded", ver_bounded, "count on the bounded transform with window phi(eps)");
  verify->add_flag("--conjugate", ver_full, "conjugate each diagonal holonomy by a fixed DFT unitary");

  // flow
  std::string flow_file;
  std::string flow_path;
  double flow_eta = 0.0;
  bool flow_closed = false;
  auto *flow = app.add_subcommand("flow", "spectral flow along a path of family points");
  flow->add_option("family", flow_file, "family JSON file")->required();
  flow->add_option("--path", flow_path, "comma-separated point ids")->required();
  flow->add_option("--eta", flow_eta, "spectral gap / step bound")->required()->check(CLI::PositiveNumber);
  flow->add_flag("--closed", flow_closed, "include the step from the last id back to the first");

  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return input_error;
  }

  try {
    const Tolerances &tol = common.tol;

    if (*spectrum) {
      const auto [h, spin] = load_holonomy(spec_h, tol);
      circle::SpectrumWindow w;
      if (spec_trunc > 0) {
        const auto ev = circle::truncation_eigenvalues(h, spin, spec_trunc, tol, spec_scale);
        w = circle::cluster_window(ev, spec_eps, tol.c_tol);
      } else {
        w = circle::analytic_spectrum(h, spin, spec_eps, tol, spec_scale);
      }
      emit(io::spectrum_csv(w), common, out);
      return ok;
    }

    if (*kdim) {
      const auto [h, spin] = load_holonomy(kd_h, tol);
      emit(std::to_string(circle::kernel_dim(h, spin, tol)) + "\n", common, out);
      return ok;
    }

    if (*coh) {
      const cohomology::AlgebraContext ctx(coh_k);
      const auto idx = parse_int_list(coh_indices);
      const auto cls = cohomology::obstruction_product(ctx, idx);
      emit(cls.to_string() + "\n" + (cls.is_zero() ? "zero" : "nonzero") + "\n", common, out);
      return ok;
    }

    if (*cover) {
      const auto fam = io::parse_family(io::read_json_file(cov_file), tol);
      int max_count = 0;
      for (std::size_t i = 0; i < fam.size(); ++i) {
        try {
          max_count = std::max(max_count, fredholm::count_in_window(fam.eigenvalues(i), cov_eps, tol.b_tol));
        } catch (const BoundaryAmbiguity &e) {
          throw BoundaryAmbiguity("point " + fam.points()[i].id + ": " + e.what());
        }
      }
      const auto rep = fredholm::build_cover(fam, cov_k, cov_eps, tol, common.jobs);
      json j = io::cover_to_json(rep);
      j["max_spectral_count"] = max_count;
      j["tolerances"] = io::tolerances_to_json(tol);
      emit(j.dump(2) + "\n", common, out);
      return rep.covered ? ok : verified_negative;
    }

    if (*verify) {
      grid.spin = circle::parse_spin(ver_delta);
      grid.diagonal_only = !ver_full;
      if (!ver_exclude.empty())
        for (const auto &id : split_list(ver_exclude))
          grid.excluded.push_back(obstruction::parse_grid_id(id, grid.k, grid.resolution));
      const auto eps = parse_real_list(ver_eps);
      obstruction::VerifyOptions opt;
      opt.bounded = ver_bounded;
      opt.jobs = common.jobs;
      opt.tol = tol;
      const auto verdict = obstruction::verify_contrapositive(grid, eps, opt);
      const std::string table = obstruction::summary_table(verdict);
      emit(io::verdict_to_json(verdict).dump(2) + "\n", common, out);
      (common.output.empty() ? err : out) << table;
      return verdict.pass ? ok : verified_negative;
    }

    if (*flow) {
      const auto fam = io::parse_family(io::read_json_file(flow_file), tol);
      fredholm::PathSpec path{split_list(flow_path), flow_closed};
      emit(std::to_string(fredholm::spectral_flow(fam, path, flow_eta, common.jobs)) + "\n", common, out);
      return ok;
    }
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const json::exception &e) {
    err << "error: malformed input: " << e.what() << "\n";
    return input_error;
  }
  return input_error;
}

} // namespace kob::cli
