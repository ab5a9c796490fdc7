#include "twistlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "twistlab/error.hpp"
#include "twistlab/gf.hpp"
#include "twistlab/json_io.hpp"
#include "twistlab/matpoly.hpp"
#include "twistlab/mtheta.hpp"
#include "twistlab/random.hpp"
#include "twistlab/transpositions.hpp"
#include "twistlab/ybe.hpp"

namespace twistlab::cli {
namespace {

using io::Json;

struct RunConfig {
  std::string subcommand;
  double tol = 1e-8;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::string tau = "0,1";
  std::size_t m = 0;  // 0: subcommand default
  std::size_t n = 0;
  std::string c;
  std::string in;
  std::string json;
  std::string format = "json";
  std::string map = "scalar_rational";
  std::string r = "relabel_swap";
  std::string gf = "trivial";
  std::size_t dim = 2;
  std::string q = "1,0";
  std::string q_shift = "0,0";
};

struct Outcome {
  double max_residual = 0.0;
  bool passed = true;
  Json failures = Json::array();
  Json artifacts = Json::object();
};

Complex parse_complex(const std::string& text, const std::string& flag) {
  std::istringstream in(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw Error(ErrorKind::Usage, flag + ": expected re,im");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw Error(ErrorKind::Usage, flag + ": expected re,im");
  }
  std::string rest;
  if (in >> rest) throw Error(ErrorKind::Usage, flag + ": trailing characters");
  return {re, im};
}

std::size_t pick(std::size_t value, std::size_t fallback) { return value == 0 ? fallback : value; }

Complex tau_of(const RunConfig& cfg) {
  const Complex tau = parse_complex(cfg.tau, "--tau");
  if (!(tau.imag() >= mtheta::kMinImTau)) throw Error(ErrorKind::Usage, "--tau: Im tau must be at least 0.3");
  return tau;
}

std::optional<Json> input_of(const RunConfig& cfg) {
  if (!cfg.json.empty()) return io::load_json(cfg.json);
  if (!cfg.in.empty()) return io::load_json(cfg.in);
  return std::nullopt;
}

void absorb(Outcome& out, const VerificationReport& r) {
  out.max_residual = std::max(out.max_residual, r.max_residual);
  out.passed = out.passed && r.passed();
  for (const auto& f : r.failures) {
    Json item{{"check", r.check}, {"sample", f.sample}, {"residual", f.residual}};
    if (!f.note.empty()) item["note"] = f.note;
    out.failures.push_back(std::move(item));
  }
}

void absorb(Outcome& out, double residual, double tol, const std::string& check) {
  out.max_residual = std::max(out.max_residual, residual);
  if (!(residual <= tol)) {
    out.passed = false;
    out.failures.push_back(Json{{"check", check}, {"sample", 0}, {"residual", residual}});
  }
}

TwistedMap map_of(const RunConfig& cfg, std::size_t default_m = 2) {
  if (cfg.map == "matpoly") return matpoly::pair_map(pick(cfg.m, default_m));
  if (cfg.map == "theta_mu") return mtheta::theta_map(tau_of(cfg), pick(cfg.m, 1));
  MapParams params;
  params.m = pick(cfg.m, default_m);
  params.q_scale = parse_complex(cfg.q, "--q");
  params.q_shift = parse_complex(cfg.q_shift, "--q-shift");
  return builtin_map(cfg.map, params);
}

Point point_from(const Json& j, DomainKind domain, const std::string& path) {
  switch (domain) {
    case DomainKind::Scalar: return io::complex_from(j, path);
    case DomainKind::Matrix: return io::matrix_from(j, path);
    case DomainKind::OrderedMatrix:
      return OrderedMatrix{io::matrix_from(io::member(j, "matrix", path), path + ".matrix"),
                           io::complex_list_from(io::member(j, "spectrum", path), path + ".spectrum")};
    case DomainKind::Theta: break;
  }
  throw Error(ErrorKind::Usage, "theta points are not accepted here; use theta-mu");
}

Json point_json(const Point& p) {
  if (const auto* z = std::get_if<Complex>(&p)) return io::to_json(*z);
  if (const auto* m = std::get_if<CMatrix>(&p)) return io::to_json(*m);
  if (const auto* o = std::get_if<OrderedMatrix>(&p))
    return Json{{"matrix", io::to_json(o->matrix)}, {"spectrum", io::to_json(o->spectrum)}};
  const auto& t = as_theta(p);
  return Json{{"element", io::to_json(t.element)}, {"zeros", io::to_json(t.zeros)}};
}

SigmaWord random_word(Rng& rng, std::size_t tuple, std::size_t length) {
  SigmaWord word;
  for (std::size_t i = 0; i < length; ++i) word.push_back(1 + rng.next() % (tuple - 1));
  return word;
}

Json word_json(const SigmaWord& w) { return Json(w); }

// ---------------------------------------------------------------------------

Outcome verify_map(const RunConfig& cfg) {
  const TwistedMap map = map_of(cfg);
  Outcome out;
  const auto inv = verify_involution(map, cfg.samples, cfg.seed, cfg.tol);
  const auto braid = verify_braid(map, cfg.samples, cfg.seed, cfg.tol);
  absorb(out, inv);
  absorb(out, braid);
  out.artifacts = Json{{"map", map.name}, {"involution", io::to_json(inv)}, {"braid", io::to_json(braid)}};
  return out;
}

Outcome act_cmd(const RunConfig& cfg) {
  TwistedMap map = map_of(cfg);
  if (map.domain == DomainKind::Theta) throw Error(ErrorKind::Usage, "act: theta maps are not supported");
  std::vector<Point> tuple;
  SigmaWord word;
  if (auto j = input_of(cfg)) {
    const Json& t = io::member(*j, "tuple");
    if (!t.is_array() || t.size() < 2) throw Error(ErrorKind::SchemaError, "$.tuple: expected at least two points");
    for (std::size_t i = 0; i < t.size(); ++i)
      tuple.push_back(point_from(t[i], map.domain, "$.tuple[" + std::to_string(i) + "]"));
    word = io::index_list_from(io::member(*j, "word"), "$.word");
  } else {
    Rng rng(mix_seed(cfg.seed, 0));
    const std::size_t size = pick(cfg.n, 3);
    if (size < 2) throw Error(ErrorKind::Usage, "act: tuple needs at least two points");
    for (std::size_t i = 0; i < size; ++i) tuple.push_back(map.sample(rng));
    word = random_word(rng, size, 6);
  }
  const auto result = act(map, word, tuple);
  const auto back = act(map, SigmaWord(word.rbegin(), word.rend()), result);
  double r = 0.0;
  for (std::size_t i = 0; i < tuple.size(); ++i) r = std::max(r, map.distance(back[i], tuple[i]));
  Outcome out;
  absorb(out, r, cfg.tol, "act.reverse_word");
  Json pts = Json::array();
  for (const auto& p : result) pts.push_back(point_json(p));
  out.artifacts = Json{{"map", map.name}, {"word", word_json(word)}, {"tuple", std::move(pts)}};
  return out;
}

Outcome factor_poly(const RunConfig& cfg) {
  matpoly::MatrixPolynomial poly;
  matpoly::Partition partition;
  if (auto j = input_of(cfg)) {
    poly = io::polynomial_from(io::member(*j, "poly"), "$.poly");
    const Json& p = io::member(*j, "partition");
    if (!p.is_array()) throw Error(ErrorKind::SchemaError, "$.partition: expected an array of blocks");
    for (std::size_t i = 0; i < p.size(); ++i)
      partition.push_back(io::complex_list_from(p[i], "$.partition[" + std::to_string(i) + "]"));
  } else {
    Rng rng(mix_seed(cfg.seed, 0));
    const std::size_t m = pick(cfg.m, 2);
    std::vector<CMatrix> bs;
    for (std::size_t i = 0; i < pick(cfg.n, 2); ++i)
      bs.push_back(rng.complex_normal_matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));
    const auto tuple = matpoly::make_factor_tuple(bs);
    poly = matpoly::multiply(tuple);
    partition = tuple.spectra;
  }
  const auto factors = matpoly::factorize(poly, partition);
  Outcome out;
  absorb(out, matpoly::polynomial_distance(matpoly::multiply(factors), poly), cfg.tol, "factor_poly.product");
  out.artifacts = Json{{"poly", io::to_json(poly)}, {"factors", io::to_json(factors)}};
  return out;
}

Outcome pair_swap(const RunConfig& cfg) {
  CMatrix a1;
  CMatrix a2;
  if (auto j = input_of(cfg)) {
    a1 = io::matrix_from(io::member(*j, "a1"), "$.a1");
    a2 = io::matrix_from(io::member(*j, "a2"), "$.a2");
  } else {
    Rng rng(mix_seed(cfg.seed, 0));
    const auto m = static_cast<Eigen::Index>(pick(cfg.m, 2));
    a1 = rng.complex_normal_matrix(m, m);
    a2 = rng.complex_normal_matrix(m, m);
  }
  const auto swap = matpoly::transpose_pair(a1, a2);
  Outcome out;
  const double r = std::max(linalg::relative_distance(swap.b1 + swap.b2, a1 + a2),
                            linalg::relative_distance(swap.b1 * swap.b2, a1 * a2));
  absorb(out, r, cfg.tol, "pair_swap.product");
  out.artifacts = Json{{"b1", io::to_json(swap.b1)}, {"b2", io::to_json(swap.b2)}, {"lambda", io::to_json(swap.lambda)}};
  return out;
}

mtheta::LatticeParams lattice_of(const RunConfig& cfg, std::size_t default_n) {
  return mtheta::LatticeParams{tau_of(cfg), pick(cfg.m, 1), pick(cfg.n, default_n),
                               cfg.c.empty() ? Complex{} : parse_complex(cfg.c, "--c")};
}

mtheta::ThetaElement element_of(const RunConfig& cfg, Rng& rng, std::size_t default_n) {
  const auto params = lattice_of(cfg, default_n);
  if (cfg.c.empty()) return mtheta::random_element(params.tau, params.m, params.n, rng);
  const auto basis = mtheta::mtheta_basis(params);
  return mtheta::ThetaElement(basis, rng.complex_normal_vector(static_cast<Eigen::Index>(basis->dimension())));
}

CVector kernel_of(const mtheta::ThetaElement& f, Complex z) {
  if (f.params().m == 1) return CVector::Ones(1);
  return linalg::nullspace_vector(f(z));
}

Outcome theta_basis(const RunConfig& cfg) {
  const auto params = lattice_of(cfg, 1);
  const auto basis = mtheta::mtheta_basis(params);
  Outcome out;
  absorb(out, basis->holdout_residual(), cfg.tol, "theta_basis.holdout");
  out.artifacts = Json{{"params", io::to_json(params)},
                       {"dimension", basis->dimension()},
                       {"expected", params.m * params.m * params.n},
                       {"holdout_residual", basis->holdout_residual()},
                       {"truncation", basis->scalar().truncation()}};
  return out;
}

Outcome theta_zeros(const RunConfig& cfg) {
  Rng rng(mix_seed(cfg.seed, 0));
  const auto j = input_of(cfg);
  const mtheta::ThetaElement f = j ? io::theta_from(*j) : element_of(cfg, rng, 1);
  const auto zeros = mtheta::det_zeros(f);
  double r = mtheta::sum_rule_defect(f.params(), zeros);
  for (const Complex& z : zeros) {
    const CMatrix v = f(z);
    const double smallest = v.size() == 1 ? std::abs(v(0, 0)) : linalg::min_singular_value(v);
    r = std::max(r, smallest / f.scale(z));
  }
  Outcome out;
  absorb(out, r, cfg.tol, "theta_zeros.sum_rule");
  out.artifacts = Json{{"element", io::to_json(f)}, {"zeros", io::to_json(zeros)}};
  return out;
}

Outcome theta_interp(const RunConfig& cfg) {
  Outcome out;
  mtheta::LatticeParams params;
  std::vector<Complex> points;
  std::vector<CVector> vectors;
  std::optional<mtheta::ThetaElement> source;
  if (auto j = input_of(cfg)) {
    params = io::lattice_from(io::member(*j, "params"), "$.params");
    points = io::complex_list_from(io::member(*j, "points"), "$.points");
    const Json& vs = io::member(*j, "vectors");
    if (!vs.is_array()) throw Error(ErrorKind::SchemaError, "$.vectors: expected an array of vectors");
    for (std::size_t i = 0; i < vs.size(); ++i) vectors.push_back(io::vector_from(vs[i], "$.vectors[" + std::to_string(i) + "]"));
  } else {
    Rng rng(mix_seed(cfg.seed, 0));
    source = element_of(cfg, rng, 1);
    params = source->params();
    points = mtheta::det_zeros(*source);
    for (const Complex& z : points) vectors.push_back(kernel_of(*source, z));
  }
  const auto f = mtheta::interpolate(params, points, vectors);
  double r = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    r = std::max(r, (f(points[i]) * vectors[i].normalized()).norm() / f.scale(points[i]));
  out.artifacts = Json{{"element", io::to_json(f)}};
  if (source) {
    const double alignment = mtheta::coefficient_alignment(f, *source);
    out.artifacts["alignment"] = alignment;
    r = std::max(r, 1.0 - alignment);
  }
  absorb(out, r, cfg.tol, "theta_interp.vanishing");
  return out;
}

Outcome theta_factor(const RunConfig& cfg) {
  std::optional<mtheta::ThetaElement> f;
  std::vector<std::vector<Complex>> partition;
  std::vector<Complex> split;
  if (auto j = input_of(cfg)) {
    f = io::theta_from(io::member(*j, "element"), "$.element");
    const Json& p = io::member(*j, "partition");
    if (!p.is_array()) throw Error(ErrorKind::SchemaError, "$.partition: expected an array of blocks");
    for (std::size_t i = 0; i < p.size(); ++i)
      partition.push_back(io::complex_list_from(p[i], "$.partition[" + std::to_string(i) + "]"));
    if (j->contains("c_split")) split = io::complex_list_from((*j)["c_split"], "$.c_split");
  } else {
    Rng rng(mix_seed(cfg.seed, 0));
    const Complex tau = tau_of(cfg);
    const std::size_t m = pick(cfg.m, 2);
    const std::size_t n = pick(cfg.n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      auto part = mtheta::make_theta_point(mtheta::random_element(tau, m, 1, rng));
      partition.push_back(part.zeros);
      split.push_back(part.element.params().c);
      f = f ? mtheta::multiply(*f, part.element) : part.element;
    }
  }
  const auto factors = split.empty() ? mtheta::factorize_theta(*f, partition) : mtheta::factorize_theta(*f, partition, split);
  std::vector<const mtheta::ThetaElement*> parts;
  for (const auto& e : factors) parts.push_back(&e);
  Outcome out;
  absorb(out, mtheta::product_defect({&*f}, parts), std::max(cfg.tol, 1e-6), "theta_factor.product");
  Json fs = Json::array();
  for (const auto& e : factors) fs.push_back(io::to_json(e));
  Json ps = Json::array();
  for (const auto& block : partition) ps.push_back(io::to_json(block));
  out.artifacts = Json{{"element", io::to_json(*f)}, {"factors", std::move(fs)}, {"partition", std::move(ps)}};
  return out;
}

Outcome theta_mu_cmd(const RunConfig& cfg) {
  std::optional<mtheta::ThetaPoint> f;
  std::optional<mtheta::ThetaPoint> g;
  if (auto j = input_of(cfg)) {
    f = mtheta::make_theta_point(io::theta_from(io::member(*j, "f"), "$.f"));
    g = mtheta::make_theta_point(io::theta_from(io::member(*j, "g"), "$.g"));
  } else {
    Rng rng(mix_seed(cfg.seed, 0));
    const TwistedMap map = mtheta::theta_map(tau_of(cfg), pick(cfg.m, 2));
    f = as_theta(map.sample(rng));
    g = as_theta(map.sample(rng));
  }
  const auto [f1, g1] = mtheta::theta_mu(*f, *g);
  const auto [f2, g2] = mtheta::theta_mu(f1, g1);
  Outcome out;
  absorb(out, mtheta::product_defect({&f->element, &g->element}, {&f1.element, &g1.element}), std::max(cfg.tol, 1e-6),
         "theta_mu.product");
  absorb(out,
         std::max(mtheta::projective_distance(f2.element, f->element), mtheta::projective_distance(g2.element, g->element)),
         cfg.tol, "theta_mu.involution");
  out.artifacts = Json{{"f1", Json{{"element", io::to_json(f1.element)}, {"zeros", io::to_json(f1.zeros)}}},
                       {"g1", Json{{"element", io::to_json(g1.element)}, {"zeros", io::to_json(g1.zeros)}}}};
  return out;
}

ybe::RMatrix r_of(const RunConfig& cfg, const TwistedMap& map, const std::optional<Json>& input) {
  if (input && input->contains("r_matrix"))
    return ybe::constant_R("constant", io::matrix_from((*input)["r_matrix"], "$.r_matrix"), map);
  return ybe::builtin_R(cfg.r, map, cfg.dim);
}

Outcome verify_ybe(const RunConfig& cfg) {
  const TwistedMap map = map_of(cfg);
  const auto input = input_of(cfg);
  const auto r = r_of(cfg, map, input);
  Outcome out;
  const auto inv = ybe::verify_inverse(r, cfg.samples, cfg.seed, cfg.tol);
  const auto tybe = ybe::verify_tybe(r, cfg.samples, cfg.seed, cfg.tol);
  absorb(out, inv);
  absorb(out, tybe);
  out.artifacts = Json{{"map", map.name}, {"r", r.name}, {"inverse", io::to_json(inv)}, {"tybe", io::to_json(tybe)}};
  return out;
}

ybe::LOperator l_of(const RunConfig& cfg, const std::optional<Json>& input) {
  if (input && input->contains("l")) {
    const Json& l = (*input)["l"];
    const CMatrix a = io::matrix_from(io::member(l, "matrix", "$.l"), "$.l.matrix");
    const std::size_t w = l.contains("w") ? l["w"].get<std::size_t>() : 1;
    const std::size_t n = static_cast<std::size_t>(a.rows()) / std::max<std::size_t>(w, 1);
    const std::string kind = l.contains("kind") ? l["kind"].get<std::string>() : "constant";
    if (kind == "constant") return ybe::constant_L("constant", a, n, w);
    if (kind == "linear") return ybe::linear_L("linear", a, n, w);
    throw Error(ErrorKind::SchemaError, "$.l.kind: expected constant or linear");
  }
  if (input && input->contains("diagonal")) return ybe::diagonal_L(cfg.dim);
  Rng rng(mix_seed(cfg.seed, 0));
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  return ybe::constant_L("constant", rng.complex_normal_matrix(d, d), cfg.dim, 1);
}

Outcome verify_l(const RunConfig& cfg) {
  const TwistedMap map = map_of(cfg);
  const auto input = input_of(cfg);
  const auto r = r_of(cfg, map, input);
  const auto l = l_of(cfg, input);
  Outcome out;
  const auto report = ybe::verify_L(l, r, cfg.samples, cfg.seed, cfg.tol);
  absorb(out, report);
  out.artifacts = Json{{"map", map.name}, {"r", r.name}, {"l", l.name}, {"report", io::to_json(report)}};
  return out;
}

Outcome q_check_cmd(const RunConfig& cfg) {
  const TwistedMap map = map_of(cfg);
  const auto l = l_of(cfg, input_of(cfg));
  Outcome out;
  const auto report = ybe::q_check(l, map, cfg.samples, cfg.seed, cfg.tol);
  absorb(out, report);
  out.artifacts = Json{{"map", map.name}, {"l", l.name}, {"report", io::to_json(report)}};
  return out;
}

Outcome scatter(const RunConfig& cfg) {
  const TwistedMap map = map_of(cfg);
  if (map.domain == DomainKind::Theta) throw Error(ErrorKind::Usage, "scatter: theta maps are not supported");
  const auto input = input_of(cfg);
  const auto r = r_of(cfg, map, input);
  std::vector<Point> params;
  SigmaWord word;
  if (input) {
    const Json& p = io::member(*input, "params");
    if (!p.is_array() || p.size() < 2) throw Error(ErrorKind::SchemaError, "$.params: expected at least two points");
    for (std::size_t i = 0; i < p.size(); ++i)
      params.push_back(point_from(p[i], map.domain, "$.params[" + std::to_string(i) + "]"));
    word = io::index_list_from(io::member(*input, "word"), "$.word");
  } else {
    Rng rng(mix_seed(cfg.seed, 0));
    const std::size_t size = pick(cfg.n, 3);
    if (size < 2) throw Error(ErrorKind::Usage, "scatter: needs at least two particles");
    for (std::size_t i = 0; i < size; ++i) params.push_back(map.sample(rng));
    word = random_word(rng, size, 5);
  }
  if (params.size() > 4 || r.n > 4) throw Error(ErrorKind::Usage, "scatter: at most 4 particles of dimension 4");
  const auto result = ybe::scattering(r, word, params);
  const SigmaWord reduced = reduced_word(word_permutation(word, params.size()));
  Outcome out;
  absorb(out, ybe::scattering_path_residual(r, word, reduced, params), cfg.tol, "scatter.path_independence");
  Json ps = Json::array();
  for (const auto& p : result.params) ps.push_back(point_json(p));
  out.artifacts = Json{{"word", word_json(word)},
                       {"reduced_word", word_json(reduced)},
                       {"operator", io::to_json(result.op.matrix)},
                       {"params", std::move(ps)}};
  return out;
}

gf::GFSystem gf_of(const RunConfig& cfg) {
  const std::size_t m = pick(cfg.m, 2);
  if (cfg.gf == "trivial") return gf::trivial_gf_system(m, cfg.dim);
  if (cfg.gf == "sign") return gf::sign_gf_system(m, cfg.dim);
  if (cfg.gf == "perturbed") return gf::perturbed_gf_system(m, cfg.dim, cfg.seed);
  throw Error(ErrorKind::Usage, "--gf: expected trivial, sign or perturbed");
}

Outcome gf_verify_cmd(const RunConfig& cfg) {
  const auto sys = gf_of(cfg);
  Outcome out;
  const auto report = gf::gf_verify(sys, cfg.samples, cfg.seed, cfg.tol);
  absorb(out, report);
  out.artifacts = Json{{"system", sys.name}, {"m", sys.m}, {"report", io::to_json(report)}};
  return out;
}

Outcome gf_compose_cmd(const RunConfig& cfg) {
  const auto sys = gf_of(cfg);
  const auto [mu, r] = gf::gf_compose(sys);
  const auto shuffle = run_verification("gf.shuffle", cfg.samples, cfg.seed, cfg.tol, [&](Rng& rng) {
    const Point u = sys.sample(rng);
    const Point v = sys.sample(rng);
    return gf::shuffle_residual(sys, mu, u, v);
  });
  const auto inv = ybe::verify_inverse(r, cfg.samples, cfg.seed, cfg.tol);
  const auto tybe = ybe::verify_tybe(r, cfg.samples, cfg.seed, cfg.tol);
  Outcome out;
  absorb(out, shuffle);
  absorb(out, inv);
  absorb(out, tybe);
  out.artifacts = Json{{"system", sys.name},
                       {"m", sys.m},
                       {"word", word_json(gf::gf_word(sys.m))},
                       {"shuffle", io::to_json(shuffle)},
                       {"inverse", io::to_json(inv)},
                       {"tybe", io::to_json(tybe)}};
  return out;
}

const std::map<std::string, std::pair<std::string, std::function<Outcome(const RunConfig&)>>>& commands() {
  static const std::map<std::string, std::pair<std::string, std::function<Outcome(const RunConfig&)>>> table{
      {"verify-map", {"involution and braid checks of a twisted map", verify_map}},
      {"act", {"apply a sigma word to a tuple of points", act_cmd}},
      {"factor-poly", {"factor a monic matrix polynomial along a spectrum partition", factor_poly}},
      {"pair-swap", {"exchange the spectra of two linear factors", pair_swap}},
      {"theta-basis", {"build a basis of a matrix theta space", theta_basis}},
      {"theta-zeros", {"zeros of det f for a matrix theta function", theta_zeros}},
      {"theta-interp", {"matrix theta function from zeros and kernel vectors", theta_interp}},
      {"theta-factor", {"factor a matrix theta function into degree-one factors", theta_factor}},
      {"theta-mu", {"exchange the zero sets of two degree-one theta functions", theta_mu_cmd}},
      {"verify-ybe", {"inverse and twisted Yang-Baxter checks of an R-matrix", verify_ybe}},
      {"verify-l", {"L-operator relation check", verify_l}},
      {"q-check", {"Q-operator product relation check", q_check_cmd}},
      {"scatter", {"scattering operator along a sigma word", scatter}},
      {"gf-verify", {"relations of a GF system", gf_verify_cmd}},
      {"gf-compose", {"twisted map and R-matrix composed from a GF system", gf_compose_cmd}},
  };
  return table;
}

void emit(std::ostream& out, const Json& report, const std::string& format) {
  if (format == "text") {
    for (const auto& key : {"subcommand", "status", "max_residual", "tol", "seed", "timing_ms"})
      if (report.contains(key)) out << key << ": " << report[key].dump() << "\n";
    if (report.contains("error")) out << "error: " << report["error"].dump() << "\n";
    out << "failures: " << report["failures"].size() << "\n";
    out << "artifacts: " << report["artifacts"].dump() << "\n";
  } else {
    out << report.dump(2) << "\n";
  }
}

std::uint64_t default_seed() {
  const char* env = std::getenv("TWISTLAB_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw Error(ErrorKind::Usage, "TWISTLAB_SEED must be a non-negative integer");
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg.seed = default_seed();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Twisted transpositions, refactorizations and twisted Yang-Baxter checks", "twistlab"};
  app.require_subcommand(1, 1);
  for (const auto& [name, entry] : commands()) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--samples", cfg.samples, "number of samples")->check(CLI::Range(1, 1000000));
    sub->add_option("--seed", cfg.seed, "random seed (default $TWISTLAB_SEED or 0)");
    sub->add_option("--tau", cfg.tau, "lattice parameter re,im");
    sub->add_option("--m", cfg.m, "matrix size")->check(CLI::Range(1, 8));
    sub->add_option("--n", cfg.n, "degree or tuple length")->check(CLI::Range(1, 8));
    sub->add_option("--c", cfg.c, "theta characteristic re,im");
    sub->add_option("--in", cfg.in, "input JSON file, or - for standard input");
    sub->add_option("--json", cfg.json, "inline input JSON");
    sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--map", cfg.map, "q_swap, scalar_rational, matrix_rational, matpoly or theta_mu");
    sub->add_option("--r", cfg.r, "relabel_id or relabel_swap");
    sub->add_option("--gf", cfg.gf, "trivial, sign or perturbed");
    sub->add_option("--dim", cfg.dim, "dimension of V")->check(CLI::Range(1, 4));
    sub->add_option("--q", cfg.q, "q_swap scale re,im");
    sub->add_option("--q-shift", cfg.q_shift, "q_swap shift re,im");
    sub->callback([&cfg, name = name] { cfg.subcommand = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  if (cfg.subcommand.empty()) {
    for (CLI::App* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  }

  Json report{{"schema", kSchema}, {"subcommand", cfg.subcommand}, {"seed", cfg.seed}, {"tol", cfg.tol}};
  const auto start = std::chrono::steady_clock::now();
  int code = kPass;
  try {
    const Outcome outcome = commands().at(cfg.subcommand).second(cfg);
    report["status"] = outcome.passed ? "pass" : "fail";
    report["max_residual"] = outcome.max_residual;
    report["failures"] = outcome.failures;
    report["artifacts"] = outcome.artifacts;
    code = outcome.passed ? kPass : kFail;
  } catch (const Error& e) {
    report["status"] = "error";
    report["max_residual"] = nullptr;
    report["failures"] = Json::array();
    report["artifacts"] = Json::object();
    report["error"] = Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    err << e.what() << "\n";
    code = kUsage;
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["max_residual"] = nullptr;
    report["failures"] = Json::array();
    report["artifacts"] = Json::object();
    report["error"] = Json{{"kind", "Internal"}, {"message", e.what()}};
    err << e.what() << "\n";
    code = kUsage;
  }
  report["timing_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit(out, report, cfg.format);
  return code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace twistlab::cli
