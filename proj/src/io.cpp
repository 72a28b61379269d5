// SPDX-License-Identifier: Apache-2.0

#include "kob/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "kob/error.hpp"

namespace kob::io {

namespace {

void reject_unknown_keys(const json &j, std::initializer_list<std::string_view> allowed,
                         std::string_view what) {
  if (!j.is_object())
    throw InputError(std::string(what) + " must be a JSON object");
  for (const auto &[key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed)
      ok = ok || key == a;
    if (!ok)
      throw InputError("unknown key '" + key + "' in " + std::string(what));
  }
}

double real_from_json(const json &v) {
  if (v.is_number())
    return v.get<double>();
  if (v.is_string())
    return parse_real(v.get<std::string>());
  throw InputError("expected a number or \"p/q\" string");
}

std::size_t positive_int(const json &v, std::string_view what) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw InputError(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

} // namespace

double parse_real(std::string_view text) {
  const std::string s(text);
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v))
        throw InputError("bad number");
      return v;
    }
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    const long long p = std::stoll(num, &used);
    if (used != num.size())
      throw InputError("bad numerator");
    const long long q = std::stoll(den, &used);
    if (used != den.size() || q <= 0)
      throw InputError("bad denominator");
    return static_cast<double>(p) / static_cast<double>(q);
  } catch (const std::logic_error &) {
    throw InputError("cannot parse number '" + s + "'");
  } catch (const InputError &) {
    throw InputError("cannot parse number '" + s + "'");
  }
}

std::string format_double(double x) {
  if (x == 0.0)
    return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Matrix parse_matrix(const json &j, std::size_t expected_dim) {
  if (!j.is_array() || j.empty())
    throw InputError("matrix must be a non-empty array of rows");
  const std::size_t n = j.size();
  if (expected_dim != 0 && n != expected_dim)
    throw InputError("matrix has " + std::to_string(n) + " rows, expected " +
                     std::to_string(expected_dim));
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const json &row = j[i];
    if (!row.is_array() || row.size() != n)
      throw InputError("matrix row " + std::to_string(i) + " must hold " + std::to_string(n) +
                       " entries");
    for (std::size_t c = 0; c < n; ++c) {
      const json &e = row[c];
      if (!e.is_array() || e.size() != 2)
        throw InputError("matrix entries must be [re, im] pairs");
      m(i, c) = cplx(real_from_json(e[0]), real_from_json(e[1]));
    }
  }
  return m;
}

json matrix_to_json(const Matrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(i, c).real(), m(i, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

HolonomyFile parse_holonomy(const json &j, const Tolerances &tol) {
  reject_unknown_keys(j, {"k", "matrix", "angles", "delta"}, "holonomy");
  if (!j.contains("k"))
    throw InputError("holonomy is missing \"k\"");
  const std::size_t k = positive_int(j["k"], "k");
  const bool has_matrix = j.contains("matrix");
  const bool has_angles = j.contains("angles");
  if (has_matrix == has_angles)
    throw InputError("holonomy needs exactly one of \"matrix\" or \"angles\"");

  std::optional<circle::SpinStructure> spin;
  if (j.contains("delta")) {
    if (!j["delta"].is_string())
      throw InputError("\"delta\" must be the string \"0\" or \"1/2\"");
    spin = circle::parse_spin(j["delta"].get<std::string>());
  }

  if (has_matrix)
    return {circle::HolonomySpec::from_matrix(parse_matrix(j["matrix"], k), tol), spin};

  const json &a = j["angles"];
  if (!a.is_array() || a.size() != k)
    throw InputError("\"angles\" must hold k entries");
  std::vector<double> angles;
  for (const auto &v : a)
    angles.push_back(real_from_json(v));
  return {circle::HolonomySpec::from_angles(std::move(angles)), spin};
}

json holonomy_to_json(const circle::HolonomySpec &h, std::optional<circle::SpinStructure> spin) {
  json j;
  j["k"] = h.k();
  if (const auto *m = h.matrix())
    j["matrix"] = matrix_to_json(*m);
  else
    j["angles"] = *h.angles();
  if (spin)
    j["delta"] = circle::to_string(*spin);
  return j;
}

fredholm::SampledFamily parse_family(const json &j, const Tolerances &tol) {
  reject_unknown_keys(j, {"dim", "points", "edges"}, "family");
  if (!j.contains("dim") || !j.contains("points"))
    throw InputError("family needs \"dim\" and \"points\"");
  const std::size_t dim = positive_int(j["dim"], "dim");
  const json &pts = j["points"];
  if (!pts.is_array())
    throw InputError("\"points\" must be an array");

  std::vector<fredholm::Sample> samples;
  for (const auto &p : pts) {
    reject_unknown_keys(p, {"id", "coords", "matrix"}, "family point");
    if (!p.contains("id") || !p["id"].is_string() || !p.contains("matrix"))
      throw InputError("each point needs a string \"id\" and a \"matrix\"");
    fredholm::Sample s;
    s.id = p["id"].get<std::string>();
    if (p.contains("coords")) {
      if (!p["coords"].is_array())
        throw InputError("\"coords\" must be an array");
      std::vector<double> c;
      for (const auto &x : p["coords"])
        c.push_back(real_from_json(x));
      s.coords = std::move(c);
    }
    s.op = parse_matrix(p["matrix"], dim);
    samples.push_back(std::move(s));
  }

  std::vector<fredholm::Edge> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array())
      throw InputError("\"edges\" must be an array of id pairs");
    for (const auto &e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw InputError("each edge must be a pair of ids");
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  return fredholm::SampledFamily(dim, std::move(samples), std::move(edges), tol);
}

json family_to_json(const fredholm::SampledFamily &fam) {
  json j;
  j["dim"] = fam.dim();
  json pts = json::array();
  for (const auto &p : fam.points()) {
    json pj;
    pj["id"] = p.id;
    if (p.coords)
      pj["coords"] = *p.coords;
    pj["matrix"] = matrix_to_json(p.op);
    pts.push_back(std::move(pj));
  }
  j["points"] = std::move(pts);
  if (!fam.edges().empty()) {
    json edges = json::array();
    for (const auto &[a, b] : fam.edges())
      edges.push_back(json::array({a, b}));
    j["edges"] = std::move(edges);
  }
  return j;
}

json tolerances_to_json(const Tolerances &tol) {
  return {{"u_tol", tol.u_tol},   {"r_tol", tol.r_tol}, {"c_tol", tol.c_tol},
          {"i_tol", tol.i_tol},   {"h_tol", tol.h_tol}, {"inv_tol", tol.inv_tol},
          {"b_tol", tol.b_tol}};
}

json cover_to_json(const fredholm::CoverReport &rep) {
  json j;
  j["k"] = rep.k;
  j["epsilon"] = rep.epsilon;
  j["shifts"] = rep.shifts;
  json sets = json::array();
  for (std::size_t i = 0; i < rep.sets.size(); ++i)
    sets.push_back({{"j", i}, {"ids", rep.sets[i]}});
  j["sets"] = std::move(sets);
  j["covered"] = rep.covered;
  j["uncovered_ids"] = rep.uncovered_ids;
  j["indeterminate_ids"] = rep.indeterminate_ids;
  return j;
}

json verdict_to_json(const obstruction::ObstructionVerdict &v) {
  json j;
  j["k"] = v.grid.k;
  j["grid"] = {{"resolution", v.grid.resolution},
               {"delta", circle::to_string(v.grid.spin)},
               {"truncation", v.grid.truncation},
               {"diagonal_only", v.grid.diagonal_only},
               {"scale", v.grid.scale},
               {"excluded", v.grid.excluded}};
  j["bounded_transform"] = v.bounded;
  j["cohomology_product"] = v.cohomology_product;
  j["cohomology_product_nonzero"] = v.cohomology_product_nonzero;
  json eps = json::array();
  std::vector<double> list;
  for (const auto &e : v.per_epsilon) {
    list.push_back(e.epsilon);
    eps.push_back({{"epsilon", e.epsilon},
                   {"window", e.window},
                   {"max_count", e.max_count},
                   {"witness", e.witness_id},
                   {"witness_coords", e.witness_coords},
                   {"witness_kernel_dim", e.witness_kernel_dim},
                   {"cover_ok", e.cover_ok},
                   {"pass", e.pass}});
  }
  j["epsilon_list"] = list;
  j["per_epsilon"] = std::move(eps);
  if (!v.per_epsilon.empty()) {
    const auto &r = v.per_epsilon[v.reported];
    j["witness"] = {{"epsilon", r.epsilon},
                    {"id", r.witness_id},
                    {"coords", r.witness_coords},
                    {"kernel_dim", r.witness_kernel_dim}};
  }
  j["pass"] = v.pass;
  if (!v.note.empty())
    j["note"] = v.note;
  j["tolerances"] = tolerances_to_json(v.tolerances);
  return j;
}

std::string spectrum_csv(const circle::SpectrumWindow &w) {
  std::string out = "value,multiplicity\n";
  for (const auto &l : w.lines)
    out += format_double(l.value) + "," + std::to_string(l.multiplicity) + "\n";
  return out;
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

} // namespace kob::io
