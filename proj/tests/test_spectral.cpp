#include <backcast/spectral.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"

namespace {

using backcast::Field;
using backcast::Grid;
using backcast::Spectrum;

double rel_l2(const Field& a, const Field& b) {
  return backcast::l2_norm(a - b) / backcast::l2_norm(b);
}

TEST(Grid, SpacingProductIsTwoPi) {
  for (auto [L, N] : {std::pair{1.0, 8ul}, {12.0, 512ul}, {std::numbers::pi, 64ul}, {3.7, 1000ul}}) {
    const Grid g(L, N);
    EXPECT_NEAR(g.dx() * g.dxi() * static_cast<double>(N), 2.0 * std::numbers::pi, 1e-13);
    EXPECT_DOUBLE_EQ(g.node(0), -L);
  }
}

TEST(Grid, FrequenciesSymmetricExceptUnpairedMode) {
  const Grid g(5.0, 16);
  EXPECT_DOUBLE_EQ(g.freq(0), -g.max_freq());
  EXPECT_DOUBLE_EQ(g.freq(8), 0.0);
  for (std::size_t k = 1; k < 8; ++k) EXPECT_DOUBLE_EQ(g.freq(8 + k), -g.freq(8 - k));
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid(1.0, 6), backcast::DomainError);
  EXPECT_THROW(Grid(1.0, 9), backcast::DomainError);
  EXPECT_THROW(Grid(0.0, 8), backcast::DomainError);
  EXPECT_THROW(Grid(-1.0, 8), backcast::DomainError);
}

TEST(Field, RejectsNonFinite) {
  std::vector<double> v(8, 0.0);
  v[3] = std::nan("");
  EXPECT_THROW(Field(Grid(1.0, 8), v), backcast::DomainError);
  EXPECT_THROW(Field(Grid(1.0, 8), std::vector<double>(7, 0.0)), backcast::DomainError);
}

TEST(ForwardTransform, ZeroFieldGivesZeroSpectrum) {
  const auto s = backcast::forward_transform(Field::zeros(Grid(3.0, 32)));
  for (const auto& c : s.coeffs()) EXPECT_EQ(std::abs(c), 0.0);
}

TEST(ForwardTransform, ConstantMapsToZeroFrequency) {
  const Grid g(std::numbers::pi, 8);
  const auto s = backcast::forward_transform(Field(g, std::vector<double>(8, 1.0)));
  for (std::size_t k = 0; k < 8; ++k) {
    const double expected = (k == 4) ? std::sqrt(2.0 * std::numbers::pi) : 0.0;
    EXPECT_NEAR(s[k].real(), expected, 1e-12);
    EXPECT_NEAR(s[k].imag(), 0.0, 1e-12);
  }
}

TEST(ForwardTransform, GaussianMatchesQuadratureOracle) {
  const Grid g(10.0, 256);
  const auto s = backcast::forward_transform(Field::sample(g, [](double x) { return std::exp(-x * x); }));
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double ref = static_cast<double>(oracle::gaussian_transform_quadrature(g.freq(k)));
    worst = std::max(worst, std::abs(s[k] - std::complex<double>(ref, 0.0)));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(ForwardTransform, AgreesWithDirectSummation) {
  for (std::size_t n : {8ul, 30ul, 64ul, 250ul}) {
    const Grid g(4.5, n);
    const auto v = oracle::random_field(n, 100 + n);
    const auto fast = backcast::forward_transform(Field(g, v));
    const auto slow = oracle::direct_transform(v, g.half_width());
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      err += std::norm(fast[k] - slow[k]);
      ref += std::norm(slow[k]);
    }
    EXPECT_LT(std::sqrt(err / ref), 1e-12) << "N=" << n;
  }
}

TEST(InverseTransform, ZeroSpectrumGivesZeroField) {
  const Grid g(2.0, 16);
  const auto f = backcast::inverse_transform(Spectrum(g, std::vector<std::complex<double>>(16)));
  for (double v : f.values()) EXPECT_EQ(v, 0.0);
}

TEST(InverseTransform, GaussianSpectrumGivesGaussian) {
  const Grid g(10.0, 256);
  std::vector<std::complex<double>> c(g.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = static_cast<double>(oracle::gaussian_transform_quadrature(g.freq(k)));
  }
  const auto f = backcast::inverse_transform(Spectrum(g, c));
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_NEAR(f[j], std::exp(-g.node(j) * g.node(j)), 1e-10);
  }
}

TEST(InverseTransform, RejectsNonHermitianSpectrum) {
  const Grid g(2.0, 16);
  std::vector<std::complex<double>> c(16);
  c[9] = {1.0, 0.0};  // single +xi mode, no partner
  EXPECT_THROW(backcast::inverse_transform(Spectrum(g, c)), backcast::ImaginaryResidueTooLarge);
}

TEST(Norms, ZeroAndConstant) {
  EXPECT_EQ(backcast::l2_norm(Field::zeros(Grid(1.0, 64))), 0.0);
  EXPECT_NEAR(backcast::l2_norm(Field(Grid(1.0, 64), std::vector<double>(64, 1.0))), std::sqrt(2.0),
              1e-15);
}

TEST(Norms, GaussianMatchesQuadrature) {
  const Grid g(10.0, 512);
  const double ref = static_cast<double>(std::sqrt(
      oracle::integrate([](oracle::real x) { return std::exp(-2.0L * x * x); }, -12.0L, 12.0L)));
  EXPECT_NEAR(ref, std::pow(std::numbers::pi / 2.0, 0.25), 1e-14);
  EXPECT_NEAR(backcast::l2_norm(Field::sample(g, [](double x) { return std::exp(-x * x); })), ref,
              1e-10);
}

TEST(SobolevNorm, IndexZeroIsL2) {
  const Grid g(6.0, 128);
  const auto s = backcast::forward_transform(Field(g, oracle::random_decaying_field(128, 6.0, 3)));
  EXPECT_DOUBLE_EQ(backcast::sobolev_norm(s, 0.0), backcast::l2_norm(s));
  EXPECT_EQ(backcast::sobolev_norm(Spectrum(g, std::vector<std::complex<double>>(128)), 2.0), 0.0);
  EXPECT_THROW(backcast::sobolev_norm(s, -1.0), backcast::DomainError);
}

TEST(SobolevNorm, GaussianH2MatchesQuadrature) {
  const Grid g(10.0, 512);
  std::vector<std::complex<double>> c(g.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = std::exp(-g.freq(k) * g.freq(k) / 4.0) / std::sqrt(2.0);
  }
  const double ref = static_cast<double>(std::sqrt(oracle::integrate(
      [](oracle::real xi) {
        const oracle::real w = 1.0L + xi * xi;
        return w * w * 0.5L * std::exp(-xi * xi / 2.0L);
      },
      -40.0L, 40.0L)));
  EXPECT_NEAR(backcast::sobolev_norm(Spectrum(g, c), 2.0) / ref, 1.0, 1e-8);
}

// Properties over randomly drawn fields.

TEST(SpectralProperties, RoundTripParsevalHermitianLinearity) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 8 + 2 * (seed * 37 % 300);
    const double L = 1.0 + static_cast<double>(seed % 7);
    const Grid g(L, n);
    const Field f(g, oracle::random_field(n, seed));
    const Field h(g, oracle::random_field(n, seed + 1000));
    const auto sf = backcast::forward_transform(f);

    EXPECT_LT(rel_l2(backcast::inverse_transform(sf), f), 1e-12) << "seed " << seed;
    EXPECT_LT(std::abs(backcast::l2_norm(f) - backcast::l2_norm(sf)), 1e-12 * backcast::l2_norm(f));

    for (std::size_t k = 1; k < n / 2; ++k) {
      const auto& plus = sf[n / 2 + k];
      const auto& minus = sf[n / 2 - k];
      EXPECT_LT(std::abs(minus - std::conj(plus)), 1e-12 * (1.0 + std::abs(plus)));
    }

    const double a = 0.3 + static_cast<double>(seed);
    const double b = -1.7;
    const auto lhs = backcast::forward_transform(a * f + b * h);
    const auto sh = backcast::forward_transform(h);
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(lhs[k] - (a * sf[k] + b * sh[k])));
    EXPECT_LT(err, 1e-12 * (std::abs(a) + std::abs(b)) * std::sqrt(static_cast<double>(n)) * L);
  }
}

TEST(Csv, FieldRoundTripIsExact) {
  const Grid g(3.25, 40);
  const Field f(g, oracle::random_field(40, 9));
  std::stringstream ss;
  backcast::write_field_csv(ss, f);
  const Field back = backcast::read_field_csv(ss);
  EXPECT_EQ(back.grid(), g);
  for (std::size_t j = 0; j < 40; ++j) EXPECT_EQ(back[j], f[j]);
}

TEST(Csv, SpectrumHeader) {
  const Grid g(1.0, 8);
  std::stringstream ss;
  backcast::write_spectrum_csv(ss, backcast::forward_transform(Field(g, std::vector<double>(8, 1.0))));
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "xi,re,im");
}

TEST(Csv, ParseErrors) {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return backcast::read_field_csv(is);
  };
  EXPECT_THROW(parse("a,b\n"), backcast::ParseError);
  EXPECT_THROW(parse("x,value\n-1,abc\n"), backcast::ParseError);
  EXPECT_THROW(parse("x,value\n-1,0\n0,0\n"), backcast::ParseError);  // too few rows
  std::string skewed = "x,value\n";
  for (int j = 0; j < 8; ++j) skewed += std::to_string(-1.0 + 0.25 * j + (j == 5 ? 0.01 : 0.0)) + ",0\n";
  EXPECT_THROW(parse(skewed), backcast::ParseError);
  std::string ok = "# comment\nx,value\n";
  for (int j = 0; j < 8; ++j) ok += std::to_string(-1.0 + 0.25 * j) + ",1\n";
  EXPECT_NO_THROW(parse(ok));
}

}  // namespace
