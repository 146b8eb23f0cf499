#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "proxres/effmodel/effmodel.hpp"
#include "proxres/error.hpp"

using namespace proxres;
using namespace proxres::effmodel;

namespace {

std::vector<double> sorted_widths(const std::vector<ModeReport>& modes) {
  std::vector<double> w;
  for (const auto& m : modes) w.push_back(m.width);
  std::sort(w.begin(), w.end());
  return w;
}

// Exact eigenvalues of the mirror-symmetric 2x2 block of the shifted triangle,
// in the basis a = (1,1,1)/sqrt3, e = (1,1,-2)/sqrt6, with T12 = t, T13 = T23 = u.
std::pair<Complex, Complex> symmetric_block(double eps0, Complex t, Complex u, double gc, double gd) {
  const Complex i(0.0, 1.0);
  const Complex haa = eps0 - (2.0 * t + 4.0 * u) / 3.0 - 0.5 * i * (3.0 * gc + gd);
  const Complex hee = eps0 - (t - 4.0 * u) / 3.0 - 0.5 * i * gd;
  const Complex hae = -std::sqrt(2.0) * (t - u) / 3.0;
  const Complex mean = 0.5 * (haa + hee);
  const Complex root = std::sqrt(0.25 * (haa - hee) * (haa - hee) + hae * hae);
  return {mean + root, mean - root};
}

}  // namespace

TEST_CASE("single site with individual loss") {
  SiteNetwork net;
  net.site_energies = {1.5};
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(1, 1);
  net.coupling_override = zero;
  net.channels = individual_channels(1, 0.04);
  const auto h = build_heff(net);
  REQUIRE(h.rows() == 1);
  CHECK(std::abs(h(0, 0) - Complex(1.5, -0.02)) <= 1e-15);
}

TEST_CASE("two sites with a common channel, by formula") {
  const double T = 0.3;
  const double gc = 0.1;
  const auto h = build_heff(two_site_network(1.0, T, gc, 0.0));
  CHECK(std::abs(h(0, 0) - Complex(1.0, -gc / 2)) <= 1e-15);
  CHECK(std::abs(h(1, 1) - Complex(1.0, -gc / 2)) <= 1e-15);
  CHECK(std::abs(h(0, 1) - Complex(-T, -gc / 2)) <= 1e-15);
  CHECK(std::abs(h(1, 0) - Complex(-T, -gc / 2)) <= 1e-15);
}

TEST_CASE("exponential coupling rule") {
  SiteNetwork net;
  net.site_energies = {1.0, 1.0, 1.0};
  net.positions = {{0.0, 0.0}, {1.2, 0.0}, {1.6, 0.0}};
  net.rule = {0.05, {4.0, 0.0}};
  const auto t = net.couplings();
  // edge distances 0.2 (1-2) and 0.6 (1-3): three times longer
  CHECK(std::abs(std::log(0.05 / t(0, 2).real()) - 3.0 * std::log(0.05 / t(0, 1).real())) <= 1e-12);
  CHECK(t(0, 0) == 0.0);
  CHECK(t(0, 1) == t(1, 0));
}

TEST_CASE("complex kappa dresses the coupling with a phase") {
  SiteNetwork net;
  net.site_energies = {1.0, 1.0};
  net.positions = {{0.0, 0.0}, {1.5, 0.0}};
  net.rule = {0.1, {3.0, 2.0}};
  const Complex t = net.couplings()(0, 1);
  CHECK(std::abs(t) == doctest::Approx(0.1 * std::exp(-1.5)).epsilon(1e-14));
  CHECK(std::arg(t) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("network validation") {
  SiteNetwork net;
  net.site_energies = {1.0, 1.0};
  net.positions = {{0.0, 0.0}, {0.9, 0.0}};
  CHECK_THROWS_AS(build_heff(net), GeometryError);
  net.positions = {{0.0, 0.0}};
  CHECK_THROWS_AS(build_heff(net), DomainError);
  net.positions = {{0.0, 0.0}, {2.0, 0.0}};
  net.rule.kappa = {-1.0, 0.0};
  CHECK_THROWS_AS(build_heff(net), DomainError);
  Eigen::MatrixXcd asym = Eigen::MatrixXcd::Zero(2, 2);
  asym(0, 1) = 0.1;
  net.coupling_override = asym;
  CHECK_THROWS_AS(build_heff(net), DomainError);
  SiteNetwork big;
  big.site_energies.assign(17, 1.0);
  big.coupling_override = Eigen::MatrixXcd::Zero(17, 17);
  CHECK_THROWS_AS(build_heff(big), DomainError);
}

TEST_CASE("two-level closed form") {
  const double T = 0.7;
  const double gc = 0.2;
  for (double gd : {0.0, 0.05}) {
    const auto modes = spectrum(two_site_network(1.0, T, gc, gd));
    REQUIRE(modes.size() == 2);
    CHECK(std::abs(modes[0].eigenvalue - Complex(1.0 - T, -(2 * gc + gd) / 2)) <= 1e-12);
    CHECK(std::abs(modes[1].eigenvalue - Complex(1.0 + T, -gd / 2)) <= 1e-12);
    CHECK(modes[0].irrep.name == "even");
    CHECK(modes[1].irrep.name == "odd");
    CHECK(std::abs(modes[0].width - (2 * gc + gd)) <= 1e-12);
    CHECK(std::abs(modes[1].width - gd) <= 1e-12);
    CHECK(std::abs(modes[1].eigenvalue.real() - modes[0].eigenvalue.real() - 2 * T) <= 1e-12);
  }
}

TEST_CASE("equilateral triangle with a common channel") {
  TriangleParams p;
  p.gamma_individual = 0.0;
  const auto net = triangle_network(p, 0.0);
  const Complex T = net.couplings()(0, 1);
  const auto modes = spectrum(net);
  REQUIRE(modes.size() == 3);
  // A1 = (1,1,1)/sqrt3 is an eigenvector of J with eigenvalue 3
  CHECK(std::abs(modes[0].eigenvalue - (1.0 - 2.0 * T - Complex(0, 1.5 * p.gamma_common))) <= 1e-12);
  CHECK(modes[0].irrep.name == "A1");
  for (int k : {1, 2}) {
    CHECK(std::abs(modes[k].eigenvalue - (1.0 + T)) <= 1e-12);
    CHECK(modes[k].irrep.name == "E");
  }
}

TEST_CASE("triangle couplings") {
  TriangleParams p;
  const auto flat = triangle_network(p, 0.0).couplings();
  CHECK(std::abs(flat(0, 1) / flat(0, 2) - 1.0) <= 1e-12);
  CHECK(std::abs(flat(1, 2) / flat(0, 2) - 1.0) <= 1e-12);

  const double b = 0.05;
  const auto net = triangle_network(p, b);
  const auto t = net.couplings();
  CHECK(t(0, 2) == t(1, 2));
  CHECK(t(0, 2) != t(0, 1));
  const double s = p.side_s;
  const double moved = std::hypot(s / 2, s * std::sqrt(3.0) / 2 + b);
  CHECK(std::abs(t(0, 2).real() / t(0, 1).real() - std::exp(-p.kappa.real() * (moved - s))) <= 1e-12);
}

TEST_CASE("triangle geometry errors") {
  TriangleParams p;
  p.side_s = 1.0;
  CHECK_THROWS_AS(triangle_network(p, 0.0), GeometryError);
  p.side_s = 1.1;
  try {
    triangle_network(p, -0.2);
    FAIL("expected overlap");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("b = -0.2") != std::string::npos);
  }
}

TEST_CASE("three-site widths at b = 0") {
  TriangleParams p;
  const auto w = sorted_widths(spectrum(triangle_network(p, 0.0)));
  CHECK(std::abs(w[0] - p.gamma_individual) <= 1e-10);
  CHECK(std::abs(w[1] - p.gamma_individual) <= 1e-10);
  CHECK(std::abs(w[2] - (3 * p.gamma_common + p.gamma_individual)) <= 1e-10);
}

TEST_CASE("width sum rule and nonnegativity on random networks") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    SiteNetwork net;
    const int n = 2 + trial % 6;
    for (int i = 0; i < n; ++i) {
      net.site_energies.push_back(1.0 + 0.1 * u(rng));
      net.positions.push_back({1.5 * i + 0.3 * u(rng), 0.4 * u(rng)});
    }
    // real kappa: an imaginary part makes -T non-Hermitian and can produce gain
    net.rule = {0.05 + 0.1 * u(rng), {2.0 + 4.0 * u(rng), 0.0}};
    const int channels = 1 + trial % 3;
    for (int c = 0; c < channels; ++c) {
      DecayChannel ch{ChannelKind::Common, {}};
      for (int i = 0; i < n; ++i) ch.amplitudes.push_back({0.2 * u(rng), 0.2 * (u(rng) - 0.5)});
      net.channels.push_back(ch);
    }
    for (auto& c : individual_channels(n, 0.01 * u(rng))) net.channels.push_back(c);
    const auto modes = spectrum(net);
    const double trace = net.decay_matrix().trace().real();
    double sum = 0.0;
    for (const auto& m : modes) {
      sum += m.width;
      CHECK(m.width >= -1e-12);
    }
    CHECK(std::abs(sum - trace) <= 1e-10 * trace);
  }
}

TEST_CASE("width sum rule holds for dressed couplings") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    TriangleParams p;
    p.kappa = {3.0 + 3.0 * u(rng), 2.0 * (u(rng) - 0.5)};
    p.gamma_common = 0.02 * u(rng);
    p.gamma_individual = 0.005 * u(rng);
    const auto net = triangle_network(p, 0.5 * u(rng));
    double sum = 0.0;
    for (const auto& m : spectrum(net)) sum += m.width;
    const double trace = 3.0 * (p.gamma_common + p.gamma_individual);
    CHECK(std::abs(sum - trace) <= 1e-10 * trace);
  }
}

TEST_CASE("decay matrix is Hermitian positive semidefinite") {
  TriangleParams p;
  p.channel_shift_coeff = 0.7;
  const auto g = triangle_network(p, 0.3).decay_matrix();
  CHECK((g - g.adjoint()).norm() <= 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  CHECK(es.eigenvalues().minCoeff() >= -1e-15);
}

TEST_CASE("dark-state count for one common channel") {
  for (int n : {2, 3, 5}) {
    SiteNetwork net;
    net.site_energies.assign(n, 1.0);
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Constant(n, n, 0.2);
    t.diagonal().setZero();
    net.coupling_override = t;
    net.channels.push_back(common_channel(n, 0.1));
    for (auto& c : individual_channels(n, 0.003)) net.channels.push_back(c);
    int dark = 0;
    for (const auto& m : spectrum(net)) dark += m.width <= 0.003 + 1e-10;
    CHECK(dark == n - 1);
  }
}

TEST_CASE("Hermitian limit") {
  TriangleParams p;
  p.gamma_common = 0.0;
  p.gamma_individual = 0.0;
  for (const auto& m : spectrum(triangle_network(p, 0.2))) {
    CHECK(std::abs(m.width) <= 1e-12);
    CHECK(std::abs(m.eigenvalue.imag()) <= 1e-12);
  }
}

TEST_CASE("classify_symmetry") {
  Eigen::VectorXcd odd(2);
  odd << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  auto label = classify_symmetry(odd, SymmetryGroup::Z2);
  CHECK(label.name == "odd");
  CHECK(label.score == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::VectorXcd a1 = Eigen::VectorXcd::Constant(3, 1.0 / std::sqrt(3.0));
  label = classify_symmetry(a1, SymmetryGroup::C3v);
  CHECK(label.name == "A1");
  CHECK(label.score == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::VectorXcd pair(3);
  pair << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
  label = classify_symmetry(pair, SymmetryGroup::C3v);
  CHECK(label.name == "mixed");
  CHECK(label.score == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  CHECK_THROWS_AS(classify_symmetry(pair, SymmetryGroup::Z2), DomainError);
  CHECK_THROWS_AS(classify_symmetry(odd, SymmetryGroup::C3v), DomainError);
}

TEST_CASE("sharpest mode label is stable under coupling scaling") {
  TriangleParams p;
  const auto reference = spectrum(triangle_network(p, 0.0));
  const std::string label = reference[sharpest_mode(reference)].irrep.name;
  CHECK(label == "E");
  for (double s : {0.1, 0.5, 2.0, 10.0}) {
    TriangleParams q = p;
    q.T0 = p.T0 * s;
    const auto modes = spectrum(triangle_network(q, 0.0));
    CHECK(modes[sharpest_mode(modes)].irrep.name == label);
  }
}

TEST_CASE("sharpest mode tie break") {
  std::vector<ModeReport> modes(3);
  modes[0].eigenvalue = {1.2, -0.001};
  modes[0].width = 0.002;
  modes[1].eigenvalue = {1.1, -0.001};
  modes[1].width = 0.002;
  modes[2].eigenvalue = {0.9, -0.02};
  modes[2].width = 0.04;
  CHECK(sharpest_mode(modes) == 1);
  CHECK_THROWS_AS(sharpest_mode({}), DomainError);
}

TEST_CASE("mirror-symmetric modes match the exact 2x2 block") {
  TriangleParams p;
  for (double b : {0.0, 0.01, 0.1, 0.3, 0.5}) {
    const auto net = triangle_network(p, b);
    const auto t = net.couplings();
    const auto [l1, l2] = symmetric_block(p.site_energy, t(0, 1), t(0, 2), p.gamma_common,
                                          p.gamma_individual);
    const auto rows = symmetry_break_sweep(p, {b});
    const auto& row = *rows[0].row;
    const double bright = std::max(-2 * l1.imag(), -2 * l2.imag());
    const double mid = std::min(-2 * l1.imag(), -2 * l2.imag());
    CHECK(std::abs(row.bright_width - bright) <= 1e-10);
    CHECK(std::abs(row.mid_width - mid) <= 1e-10);
    // the mirror-odd mode is untouched by a shift along the mirror line
    CHECK(std::abs(row.sharp_width - p.gamma_individual) <= 1e-12);
  }
}

TEST_CASE("small-b excess width follows second-order perturbation theory") {
  TriangleParams p;
  const double gc = p.gamma_common;
  for (double b : {1e-3, 2e-3, 5e-3, 1e-2}) {
    const auto net = triangle_network(p, b);
    const auto t = net.couplings();
    const double T = t(0, 1).real();
    const double delta = t(0, 2).real() - t(0, 1).real();
    const double V2 = 2.0 * delta * delta / 9.0;
    // real gap between the dark E partner and the bright A1 state
    const double gap = (T + 8.0 * t(0, 2).real()) / 3.0;
    const double predicted = 3.0 * gc * V2 / (gap * gap + 2.25 * gc * gc);
    const auto row = *symmetry_break_sweep(p, {b})[0].row;
    const double excess = row.mid_width - p.gamma_individual;
    CAPTURE(b);
    CHECK(std::abs(excess / predicted - 1.0) <= 0.05);
    CHECK(T > 0.0);
  }
  // quadratic law over a decade
  const auto lo = *symmetry_break_sweep(p, {1e-4})[0].row;
  const auto hi = *symmetry_break_sweep(p, {1e-3})[0].row;
  const double ratio = (hi.mid_width - p.gamma_individual) / (lo.mid_width - p.gamma_individual);
  CHECK(std::abs(ratio / 100.0 - 1.0) <= 0.05);
}

TEST_CASE("symmetry sweep bookkeeping") {
  TriangleParams p;
  const auto rows = symmetry_break_sweep(p, {0.0, 0.1, 0.2});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].row->sharp_width == doctest::Approx(p.gamma_individual).epsilon(1e-12));
  const Complex f = 9.45 * std::sqrt(rows[0].row->modes[sharpest_mode(rows[0].row->modes)].eigenvalue);
  CHECK(rows[0].row->sharp_Q == doctest::Approx(f.real() / (-2.0 * f.imag())).epsilon(1e-9));
  CHECK(rows[2].row->mid_width > rows[1].row->mid_width);
  CHECK_THROWS_AS(symmetry_break_sweep(p, {0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(symmetry_break_sweep(p, {-0.1}), DomainError);

  // outward shifts never overlap
  CHECK(symmetry_break_sweep(p, {0.0, 5.0})[1].row.has_value());
}

TEST_CASE("channel perturbation keeps the mirror-odd mode dark") {
  TriangleParams p;
  p.channel_shift_coeff = 2.0;
  for (double b : {0.0, 0.2, 0.4}) {
    const auto row = *symmetry_break_sweep(p, {b})[0].row;
    CHECK(std::abs(row.sharp_width - p.gamma_individual) <= 1e-12);
  }
}
