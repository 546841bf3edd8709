#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qcc/classical.hpp"
#include "qcc/errors.hpp"
#include "qcc/spectral.hpp"

using namespace qcc;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sampled(std::size_t n, double dt, auto&& f) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = f(static_cast<double>(k) * dt);
  return out;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

SpectralLines lines_from(std::initializer_list<double> q1, std::initializer_list<double> q2) {
  SpectralLines lines;
  double omega = 1.0;
  for (double w : q1) lines.q1.push_back({omega++, w});
  for (double w : q2) lines.q2.push_back({omega++, w});
  return lines;
}

}  // namespace

TEST_CASE("pure cosine on the grid") {
  const double dt = 2 * kPi / 1024;
  const auto x = sampled(1 << 16, dt, [](double t) { return std::cos(t); });
  const auto s = power_spectrum(x, dt, Window::None);
  CHECK(s.spacing == doctest::Approx(2 * kPi / ((1 << 16) * dt)).epsilon(1e-15));
  const std::size_t j = argmax(s.intensities);
  CHECK(s.frequencies[j] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s.bin_weight(j) - 0.5) < 1e-6);
  const double peak = s.intensities[j];
  for (std::size_t i = 0; i < s.intensities.size(); ++i) {
    if (i + 2 < j || i > j + 2) CHECK(s.intensities[i] < 1e-10 * peak);
  }

  const auto lines = extract_lines(s, s, 1e-6);
  CHECK(lines.q1.size() == 1);
  CHECK(std::abs(lines.q1[0].omega - 1.0) < s.spacing);
}

TEST_CASE("constant series") {
  const std::vector<double> x(256, 3.0);
  const auto s = power_spectrum(x, 0.1, Window::None);
  CHECK(std::abs(s.bin_weight(0) - 9.0) < 1e-12);
  for (std::size_t j = 1; j < s.intensities.size(); ++j) CHECK(s.intensities[j] < 1e-20);
}

TEST_CASE("two components") {
  const double dt = 2 * kPi / 1024;
  const auto x = sampled(1 << 16, dt, [](double t) { return 2 * std::cos(t) + std::cos(3 * t); });
  const auto s = power_spectrum(x, dt, Window::None);
  const std::vector<double> zero(1 << 16, 0.0);
  const auto silent = power_spectrum(zero, dt, Window::None, Observable::Q2);
  const auto lines = extract_lines(s, silent, 1e-3);
  REQUIRE(lines.q1.size() == 2);
  CHECK(lines.q2.empty());
  CHECK(std::abs(lines.q1[0].weight / lines.q1[1].weight - 4.0) < 1e-6);
  CHECK(extract_lines(s, silent, 0.5).total() == 1);
}

TEST_CASE("hann window keeps weights for off-grid tones") {
  const double dt = 0.125;
  const auto x = sampled(1 << 16, dt, [](double t) { return 1.5 * std::cos(1.2345 * t) + 0.5 * std::sin(0.7 * t); });
  const auto s = power_spectrum(x, dt, Window::Hann);
  const auto lines = extract_lines(s, s, 1e-4);
  REQUIRE(lines.q1.size() == 2);
  CHECK(std::abs(lines.q1[0].omega - 0.7) < s.spacing / 4);
  CHECK(std::abs(lines.q1[1].omega - 1.2345) < s.spacing / 4);
  CHECK(std::abs(lines.q1[1].weight / (1.5 * 1.5 / 2) - 1.0) < 0.05);
  CHECK(std::abs(lines.q1[0].weight / (0.5 * 0.5 / 2) - 1.0) < 0.05);
}

TEST_CASE("window sidelobes are not reported as lines") {
  const double dt = 0.125;
  const auto x = sampled(1 << 17, dt, [](double t) { return std::cos(1.00173 * t) + 1e-2 * std::cos(2.71 * t); });
  const auto s = power_spectrum(x, dt, Window::Hann);
  const auto lines = extract_lines(s, s, 1e-6);
  REQUIRE(lines.q1.size() == 2);
  CHECK(std::abs(lines.q1[0].omega - 1.00173) < s.spacing);
  CHECK(std::abs(lines.q1[1].omega - 2.71) < s.spacing);
  CHECK(extract_lines(s, s, 1e-6).total() == extract_lines(s, s, 1e-8).total());
}

TEST_CASE("raising the threshold never adds lines") {
  const double dt = 0.125;
  const auto x = sampled(1 << 15, dt, [](double t) {
    return std::cos(0.9 * t) + 0.1 * std::cos(1.7 * t) + 0.01 * std::cos(2.6 * t) + 1e-3 * std::cos(3.3 * t);
  });
  const auto s = power_spectrum(x, dt, Window::Hann);
  std::size_t previous = extract_lines(s, s, 1e-9).total();
  for (double th : {1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.5}) {
    const std::size_t now = extract_lines(s, s, th).total();
    CHECK(now <= previous);
    previous = now;
  }
  CHECK(extract_lines(s, s, 1e-8).q1.size() == 4);
}

TEST_CASE("parseval for stationary signals") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const double dt = 0.05;
  const auto x = sampled(1 << 15, dt, [&](double t) { return std::cos(2.1 * t) + 0.3 * std::cos(5.3 * t) + 0.1 * g(rng); });
  double mean_square = 0.0;
  for (double v : x) mean_square += v * v;
  mean_square /= static_cast<double>(x.size());
  for (Window w : {Window::None, Window::Hann}) {
    const auto s = power_spectrum(x, dt, w);
    CHECK(std::abs(s.total_weight() / mean_square - 1.0) < 0.02);
  }
}

TEST_CASE("padding and input validation") {
  const std::vector<double> x(1000, 1.0);
  const auto s = power_spectrum(x, 0.5, Window::None);
  CHECK(s.intensities.size() == 513);
  CHECK(s.duration == doctest::Approx(512.0));
  CHECK(s.bin_weight(0) == doctest::Approx(1000.0 / 1024.0));
  CHECK_THROWS_AS(power_spectrum(std::vector<double>(15, 1.0), 0.1, Window::None), InputError);
  CHECK_THROWS_AS(power_spectrum(x, 0.0, Window::None), InputError);
  for (double v : s.intensities) CHECK(v >= 0.0);
}

TEST_CASE("empty spectra") {
  const auto s = power_spectrum(std::vector<double>(64, 0.0), 0.1, Window::Hann);
  CHECK_THROWS_AS(extract_lines(s, s), EmptyLinesError);
  CHECK_THROWS_AS(extract_lines(s, s, 0.0), InputError);
  CHECK_THROWS_AS(extract_lines(s, s, 1.0), InputError);
  CHECK_THROWS_AS(frequency_entropy_continuous(s, s), InputError);
  CHECK_THROWS_AS(frequency_entropy(SpectralLines{}), InputError);
}

TEST_CASE("frequency entropy values") {
  CHECK(frequency_entropy(lines_from({0.7}, {})).value == 0.0);
  CHECK(std::abs(frequency_entropy(lines_from({1.0}, {1.0})).value - std::log(2.0)) < 1e-9);
  CHECK(std::abs(frequency_entropy(lines_from({0.75, 0.25}, {})).value - 0.562335144618808) < 1e-9);
  CHECK(frequency_entropy(lines_from({0.75, 0.25}, {})).count == 2);

  SUBCASE("invariances") {
    const auto base = frequency_entropy(lines_from({0.1, 0.4, 0.2}, {0.3, 0.05})).value;
    CHECK(std::abs(frequency_entropy(lines_from({10, 40, 20}, {30, 5})).value - base) < 1e-12);
    CHECK(std::abs(frequency_entropy(lines_from({0.05, 0.3}, {0.2, 0.4, 0.1})).value - base) < 1e-12);
    CHECK(base <= std::log(5.0));
  }
}

TEST_CASE("continuous frequency entropy") {
  PowerSpectrum a;
  a.spacing = 0.1;
  a.intensities.assign(100, 0.0);
  std::fill(a.intensities.begin() + 10, a.intensities.begin() + 42, 2.0);
  PowerSpectrum b = a;
  std::fill(b.intensities.begin(), b.intensities.end(), 0.0);
  const auto uniform = frequency_entropy_continuous(a, b);
  CHECK(std::abs(uniform.value - std::log(32.0)) < 1e-12);
  CHECK(uniform.count == 32);
  CHECK(uniform.mode == EntropyMode::Continuous);

  PowerSpectrum single = b;
  single.intensities[7] = 1.0;
  CHECK(frequency_entropy_continuous(single, b).value == 0.0);

  SUBCASE("halving the bin width adds ln 2") {
    auto density = [](double w) { return std::exp(-(w - 2.0) * (w - 2.0)) + 0.5 * std::exp(-4.0 * (w - 4.0) * (w - 4.0)); };
    auto make = [&](double spacing) {
      PowerSpectrum s;
      s.spacing = spacing;
      for (double w = 0.0; w < 8.0; w += spacing) s.intensities.push_back(density(w));
      return s;
    };
    PowerSpectrum coarse = make(0.02);
    PowerSpectrum fine = make(0.01);
    PowerSpectrum zc = coarse;
    PowerSpectrum zf = fine;
    std::fill(zc.intensities.begin(), zc.intensities.end(), 0.0);
    std::fill(zf.intensities.begin(), zf.intensities.end(), 0.0);
    const double gain = frequency_entropy_continuous(fine, zf).value - frequency_entropy_continuous(coarse, zc).value;
    CHECK(std::abs(gain / std::log(2.0) - 1.0) < 0.05);
  }

  PowerSpectrum other = a;
  other.spacing = 0.2;
  CHECK_THROWS_AS(frequency_entropy_continuous(a, other), InputError);
}

TEST_CASE("regular orbit lines sit on an integer lattice") {
  const auto m = test::pe(0.0075);
  const double q2 = std::sqrt(10.0);
  const PhasePoint x0{0.0, 0.242 * q2, q2, solve_p2(m, 0.0, 0.242 * q2, q2, 58.0)};
  const auto traj = integrate(m, x0, 1.0 / 64, 1 << 14, 8);
  const auto s1 = power_spectrum(traj.series(Observable::Q1), traj.sample_interval(), Window::Hann, Observable::Q1);
  const auto s2 = power_spectrum(traj.series(Observable::Q2), traj.sample_interval(), Window::Hann, Observable::Q2);
  const auto lines = extract_lines(s1, s2, 1e-4);
  REQUIRE(lines.total() >= 3);

  // two strongest lines with independent frequencies as the base
  std::vector<SpectralLine> all(lines.q1);
  all.insert(all.end(), lines.q2.begin(), lines.q2.end());
  std::sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.weight > b.weight; });
  const double w1 = all[0].omega;
  double w2 = 0.0;
  for (const auto& l : all) {
    if (std::abs(l.omega - w1) > 4 * s1.spacing && std::abs(l.omega - 2 * w1) > 4 * s1.spacing && l.omega > 0.1) {
      w2 = l.omega;
      break;
    }
  }
  REQUIRE(w2 > 0.0);
  for (const auto& l : all) {
    double best = 1e9;
    for (int a = -12; a <= 12; ++a)
      for (int b = -12; b <= 12; ++b) best = std::min(best, std::abs(l.omega - a * w1 - b * w2));
    CHECK(best < 2 * s1.spacing);
  }
}
