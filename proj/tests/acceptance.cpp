// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "twistlab/cli.hpp"
#include "twistlab/gf.hpp"
#include "twistlab/json_io.hpp"
#include "twistlab/matpoly.hpp"
#include "twistlab/mtheta.hpp"
#include "twistlab/transpositions.hpp"
#include "twistlab/ybe.hpp"

namespace {

using namespace twistlab;

// Pinned tolerances.
constexpr double kInvolutionTol = 1e-9;
constexpr double kBraidTol = 1e-8;
constexpr double kPlainSeconds = 60.0;
constexpr double kThetaSeconds = 300.0;
constexpr double kWorkedTol = 1e-10;
constexpr double kFactorTol = 1e-7;
constexpr double kProductTol = 1e-7;
constexpr double kGroupTol = 1e-6;
constexpr double kSumRuleTol = 1e-6;
constexpr double kAlignmentGap = 1e-5;
constexpr double kThetaProductTol = 1e-6;
constexpr double kYbeTol = 1e-9;
constexpr double kComposeInflation = 4.0;
constexpr double kShuffleTol = 1e-8;
constexpr std::uint64_t kSeed = 20240601;

const Complex kRandomTau{0.23, 0.91};

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

/// Runs `fn`, turning an escaped error into a FAIL line.
void guarded(int id, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, std::string("error: ") + e.what());
  }
}

Permutation random_permutation(Rng& rng, std::size_t n) {
  Permutation p = identity_permutation(n);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(p[i], p[rng.next() % (i + 1)]);
  return p;
}

double tuple_distance(const matpoly::FactorTuple& a, const matpoly::FactorTuple& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, linalg::relative_distance(a.factors[i], b.factors[i]));
  return r;
}

void functional_equations() {
  double worst_inv = 0.0, worst_braid = 0.0;
  bool ok = true;
  std::string failed;
  const auto check = [&](const TwistedMap& map, const std::string& label) {
    const auto inv = verify_involution(map, 500, kSeed, kInvolutionTol);
    const auto braid = verify_braid(map, 500, kSeed, kBraidTol);
    worst_inv = std::max(worst_inv, inv.max_residual);
    worst_braid = std::max(worst_braid, braid.max_residual);
    if (!inv.passed() || !braid.passed()) ok = false, failed += " " + label;
  };
  MapParams q;
  q.q_scale = Complex(0.5, 1.0);
  q.q_shift = Complex(2.0, -1.0);
  const auto t0 = std::chrono::steady_clock::now();
  check(builtin_map("q_swap", q), "q_swap");
  check(builtin_map("scalar_rational"), "scalar_rational");
  check(builtin_map("matrix_rational", MapParams{2}), "matrix_rational2");
  check(builtin_map("matrix_rational", MapParams{3}), "matrix_rational3");
  check(matpoly::pair_map(2), "matpoly2");
  check(matpoly::pair_map(3), "matpoly3");
  const double plain = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  check(mtheta::theta_map(kRandomTau, 1), "theta1");
  check(mtheta::theta_map(kRandomTau, 2), "theta2");
  const double theta = seconds_since(t1);
  ok = ok && plain < kPlainSeconds && theta < kThetaSeconds;
  report(1, ok,
         "involution " + fmt(worst_inv) + " < " + fmt(kInvolutionTol) + ", braid " + fmt(worst_braid) + " < " +
             fmt(kBraidTol) + ", time " + fmt(plain) + " s + theta " + fmt(theta) + " s" + failed);
}

void worked_pair() {
  CMatrix a1(2, 2), a2(2, 2), b1(2, 2), b2(2, 2);
  a1 << 1, 0, 0, 2;
  a2 << 3, 1, 0, 4;
  b1 << 3, 2, 0, 4;
  b2 << 1, -1, 0, 2;
  const auto s = matpoly::transpose_pair(a1, a2);
  const double entries = std::max((s.b1 - b1).cwiseAbs().maxCoeff(), (s.b2 - b2).cwiseAbs().maxCoeff());
  const double sum = (s.b1 + s.b2 - a1 - a2).cwiseAbs().maxCoeff();
  const double product = (s.b1 * s.b2 - a1 * a2).cwiseAbs().maxCoeff();
  const auto e1 = linalg::eigenvalues(s.b1);
  const auto e2 = linalg::eigenvalues(s.b2);
  const double spectra = std::max({std::abs(e1[0] - 3.0), std::abs(e1[1] - 4.0), std::abs(e2[0] - 1.0),
                                   std::abs(e2[1] - 2.0)});
  const double worst = std::max({entries, sum, product, spectra});
  report(2, worst <= kWorkedTol, "b1, b2, sum, product and spectra within " + fmt(worst) + " <= " + fmt(kWorkedTol));
}

void factorization_round_trip() {
  Rng rng(kSeed);
  double recover = 0.0, reproduce = 0.0;
  bool labels_exact = true;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng.next() % 3;
    const std::size_t d = 1 + rng.next() % 3;
    std::vector<CMatrix> bs;
    for (std::size_t i = 0; i < d; ++i)
      bs.push_back(rng.complex_normal_matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));
    const auto f = matpoly::make_factor_tuple(bs);
    const auto p = matpoly::multiply(f);
    recover = std::max(recover, tuple_distance(matpoly::factorize(p, f.spectra), f));
    for (int k = 0; k < 3; ++k) {
      auto labels = f.labels();
      labels = permute(random_permutation(rng, labels.size()), labels);
      matpoly::Partition part;
      for (std::size_t i = 0; i < d; ++i) part.emplace_back(labels.begin() + static_cast<std::ptrdiff_t>(i * m),
                                                            labels.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
      const auto g = matpoly::factorize(p, part);
      reproduce = std::max(reproduce, matpoly::polynomial_distance(matpoly::multiply(g), p));
      labels_exact = labels_exact && g.spectra == part;
    }
  }
  report(3, recover <= kFactorTol && reproduce <= kFactorTol && labels_exact,
         "recovery " + fmt(recover) + ", other partitions " + fmt(reproduce) + " <= " + fmt(kFactorTol) +
             (labels_exact ? ", spectra exact" : ", spectra differ"));
}

void symmetric_action() {
  Rng rng(kSeed + 4);
  double product = 0.0, group = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CMatrix> bs;
    for (int i = 0; i < 3; ++i) bs.push_back(rng.complex_normal_matrix(2, 2));
    const auto f = matpoly::make_factor_tuple(bs);
    const auto s1 = random_permutation(rng, 6);
    const auto s2 = random_permutation(rng, 6);
    const auto one = matpoly::act_ordered(s1, f);
    const auto two = matpoly::act_ordered(s2, one);
    const auto direct = matpoly::act_ordered(compose(s2, s1), f);
    product = std::max({product, matpoly::polynomial_distance(matpoly::multiply(one), matpoly::multiply(f)),
                        matpoly::polynomial_distance(matpoly::multiply(two), matpoly::multiply(f))});
    group = std::max(group, tuple_distance(two, direct));
  }
  report(4, product < kProductTol && group < kGroupTol,
         "product " + fmt(product) + " < " + fmt(kProductTol) + ", composition " + fmt(group) + " < " + fmt(kGroupTol));
}

void theta_dimensions() {
  Rng rng(kSeed + 5);
  bool dims = true, counts = true;
  double sum_rule = 0.0;
  for (const Complex tau : {Complex(0.0, 1.0), kRandomTau}) {
    for (const auto& [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {1, 2}, {2, 1}, {3, 1}, {2, 2}}) {
      const mtheta::LatticeParams p{tau, m, n, Complex(rng.uniform(), rng.uniform())};
      dims = dims && mtheta::mtheta_basis(p)->dimension() == m * m * n;
      for (int k = 0; k < 10; ++k) {
        const auto f = mtheta::random_element(tau, m, n, rng);
        const auto zeros = mtheta::det_zeros(f);
        counts = counts && zeros.size() == m * n;
        sum_rule = std::max(sum_rule, mtheta::sum_rule_defect(f.params(), zeros));
      }
    }
  }
  report(5, dims && counts && sum_rule <= kSumRuleTol,
         std::string(dims ? "dimensions m^2 n" : "dimension mismatch") + ", " +
             (counts ? "zero counts mn" : "zero count mismatch") + ", sum rule " + fmt(sum_rule) +
             " <= " + fmt(kSumRuleTol));
}

void theta_round_trips() {
  Rng rng(kSeed + 6);
  double alignment = 1.0, product = 0.0;
  for (int k = 0; k < 10; ++k) {
    const std::size_t m = 1 + static_cast<std::size_t>(k % 2);
    const auto f = mtheta::random_element(kRandomTau, m, 2, rng);
    const auto zeros = mtheta::det_zeros(f);
    std::vector<CVector> vs;
    for (const Complex& z : zeros) vs.push_back(m == 1 ? CVector::Ones(1) : linalg::nullspace_vector(f(z)));
    alignment = std::min(alignment, mtheta::coefficient_alignment(mtheta::interpolate(f.params(), zeros, vs), f));
  }
  for (int k = 0; k < 10; ++k) {
    const auto f1 = mtheta::make_theta_point(mtheta::random_element(kRandomTau, 2, 1, rng));
    const auto f2 = mtheta::make_theta_point(mtheta::random_element(kRandomTau, 2, 1, rng));
    const auto h = mtheta::multiply(f1.element, f2.element);
    const auto parts = mtheta::factorize_theta(h, {f1.zeros, f2.zeros}, {f1.element.params().c, f2.element.params().c});
    product = std::max(product, mtheta::product_defect({&h}, {&parts[0], &parts[1]}));
  }
  report(6, alignment > 1.0 - kAlignmentGap && product < kThetaProductTol,
         "interpolation alignment 1 - " + fmt(1.0 - alignment) + ", factorization product " + fmt(product) + " < " +
             fmt(kThetaProductTol));
}

void twisted_ybe() {
  MapParams q;
  q.q_scale = Complex(0.5, 1.0);
  const std::vector<TwistedMap> maps{builtin_map("q_swap", q),
                                     builtin_map("scalar_rational"),
                                     builtin_map("matrix_rational", MapParams{2}),
                                     builtin_map("matrix_rational", MapParams{3}),
                                     matpoly::pair_map(2),
                                     matpoly::pair_map(3),
                                     mtheta::theta_map(kRandomTau, 1),
                                     mtheta::theta_map(kRandomTau, 2)};
  double worst = 0.0;
  bool ok = true;
  for (const auto& map : maps) {
    for (const char* name : {"relabel_id", "relabel_swap"}) {
      const auto r = ybe::builtin_R(name, map, 2);
      const auto inv = ybe::verify_inverse(r, 100, kSeed, kYbeTol);
      const auto tybe = ybe::verify_tybe(r, 100, kSeed, kYbeTol);
      worst = std::max({worst, inv.max_residual, tybe.max_residual});
      ok = ok && inv.passed() && tybe.passed();
    }
  }
  Rng rng(kSeed + 7);
  const auto perturbed =
      ybe::constant_R("perturbed", ybe::flip(2) + 0.1 * rng.complex_normal_matrix(4, 4), builtin_map("scalar_rational"));
  const auto neg_inv = ybe::verify_inverse(perturbed, 100, kSeed, kYbeTol);
  const auto neg_tybe = ybe::verify_tybe(perturbed, 100, kSeed, kYbeTol);
  const bool negative = !neg_inv.passed() && !neg_tybe.passed();
  report(7, ok && negative,
         "relabelings " + fmt(worst) + " < " + fmt(kYbeTol) + " over " + std::to_string(maps.size()) + " maps" +
             (negative ? ", perturbed R reported as failure" : ", perturbed R not detected"));
}

void l_and_q() {
  Rng rng(kSeed + 8);
  const auto map = builtin_map("scalar_rational");
  const auto swap = ybe::builtin_R("relabel_swap", map, 2);
  const auto la = ybe::constant_L("A", rng.complex_normal_matrix(2, 2), 2, 1);
  const auto lb = ybe::constant_L("B", rng.complex_normal_matrix(2, 2), 2, 1);
  const auto ra = ybe::verify_L(la, swap, 100, kSeed, kYbeTol);
  const auto rb = ybe::verify_L(lb, swap, 100, kSeed, kYbeTol);
  const auto qa = ybe::q_check(la, map, 100, kSeed, kYbeTol);
  const auto qb = ybe::q_check(lb, map, 100, kSeed, kYbeTol);
  const auto composite = ybe::compose_L(la, lb);
  const double inflated = kComposeInflation * std::max({ra.max_residual, rb.max_residual, kYbeTol});
  const auto rc = ybe::verify_L(composite, swap, 100, kSeed, inflated);
  const auto qc = ybe::q_check(composite, map, 100, kSeed, inflated);
  const bool fixtures = ra.passed() && rb.passed() && qa.passed() && qb.passed();
  const bool composed = rc.passed() && qc.passed();
  const auto id = ybe::builtin_R("relabel_id", map, 2);
  const auto control = ybe::diagonal_L(2);
  const bool negative = !ybe::verify_L(control, id, 100, kSeed, kYbeTol).passed() &&
                        !ybe::q_check(control, map, 100, kSeed, kYbeTol).passed();
  report(8, fixtures && composed && negative,
         "fixtures " + fmt(std::max({ra.max_residual, rb.max_residual, qa.max_residual, qb.max_residual})) +
             ", composite " + fmt(std::max(rc.max_residual, qc.max_residual)) + " <= " + fmt(inflated) +
             (negative ? ", diag(1,u) control fails both" : ", control not detected"));
}

void gf_layer() {
  const auto sys = gf::trivial_gf_system(2);
  const auto verify = gf::gf_verify(sys, 100, kSeed, kYbeTol);
  const auto [mu, r] = gf::gf_compose(sys);
  const auto shuffle = run_verification("gf.shuffle", 50, kSeed, kShuffleTol, [&, &mu = mu](Rng& rng) {
    const Point u = sys.sample(rng);
    const Point v = sys.sample(rng);
    return gf::shuffle_residual(sys, mu, u, v);
  });
  const auto tybe = ybe::verify_tybe(r, 100, kSeed, kYbeTol);
  report(9, verify.passed() && shuffle.passed() && tybe.passed(),
         "gf_verify " + fmt(verify.max_residual) + ", shuffle word " + fmt(shuffle.max_residual) + " < " +
             fmt(kShuffleTol) + ", tybe " + fmt(tybe.max_residual));
}

void cli_determinism() {
  const std::vector<std::vector<std::string>> runs{
      {"verify-map", "--samples", "20"},       {"act"},
      {"factor-poly"},                         {"pair-swap"},
      {"theta-basis", "--m", "2"},             {"theta-zeros", "--m", "2"},
      {"theta-interp", "--m", "2"},            {"theta-factor"},
      {"theta-mu"},                            {"verify-ybe", "--samples", "20"},
      {"verify-l", "--samples", "20"},         {"q-check", "--samples", "20"},
      {"scatter"},                             {"gf-verify", "--samples", "20"},
      {"gf-compose", "--samples", "20"},
  };
  bool ok = true;
  std::string bad;
  const auto once = [](const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = cli::run(args, out, err);
    auto j = io::Json::parse(out.str());
    j.erase("timing_ms");
    return j.dump();
  };
  for (const auto& args : runs) {
    int c1 = -1, c2 = -1;
    const auto a = once(args, c1);
    const auto b = once(args, c2);
    if (a != b || c1 != cli::kPass || c2 != cli::kPass) ok = false, bad += " " + args[0];
  }
  int fail_code = -1, usage_code = -1;
  once({"gf-verify", "--gf", "perturbed", "--samples", "5"}, fail_code);
  std::ostringstream out, err;
  usage_code = cli::run({"factor-poly", "--json", R"({"poly": {"m": 1, "coeffs": [[[1]]]}, "partition": [[1, 2]]})"},
                        out, err);
  ok = ok && fail_code == cli::kFail && usage_code == cli::kUsage;
  report(10, ok,
         std::to_string(runs.size()) + " subcommands repeated, exit codes pass/fail/usage = 0/" +
             std::to_string(fail_code) + "/" + std::to_string(usage_code) + bad);
}

}  // namespace

int main() {
  guarded(1, functional_equations);
  guarded(2, worked_pair);
  guarded(3, factorization_round_trip);
  guarded(4, symmetric_action);
  guarded(5, theta_dimensions);
  guarded(6, theta_round_trips);
  guarded(7, twisted_ybe);
  guarded(8, l_and_q);
  guarded(9, gf_layer);
  guarded(10, cli_determinism);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
