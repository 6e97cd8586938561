#include "doctest.h"

#include <cmath>

#include "scalim/spectral.hpp"

using namespace scalim;

TEST_CASE("free field constructors") {
  const ModelSpec m4 = free_field(SpacetimeDim(4), 1.0);
  REQUIRE(m4.measure.atoms.size() == 1);
  CHECK(m4.measure.atoms[0].mass == 1.0);
  CHECK(m4.measure.atoms[0].weight == 1.0);
  CHECK_FALSE(m4.measure.density.has_value());

  const ModelSpec m3 = free_field(SpacetimeDim(3), 0.5);
  CHECK(m3.measure.atoms[0].mass == 0.5);

  CHECK_THROWS_AS(free_field(SpacetimeDim(2), 0.0), DomainError);
  CHECK_THROWS_AS(free_field(SpacetimeDim(4), -1.0), DomainError);
}

TEST_CASE("log-periodic density reduces correctly") {
  const ModelSpec plain = log_periodic_gff(SpacetimeDim(4), 0.5, 0.0, 4.0, 1.0, 0.01, 10.0);
  REQUIRE(plain.measure.density.has_value());
  CHECK_FALSE(plain.measure.density->log_periodic);
  CHECK(plain.measure.density->eval(2.0) == doctest::Approx(std::pow(2.0, 1.0)));

  const ModelSpec mod = log_periodic_gff(SpacetimeDim(4), 1.0, 0.5, 4.0, 1.5, 0.01, 10.0);
  // sin(0) = 0 at the reference mass
  CHECK(mod.measure.density->eval(1.5) == doctest::Approx(std::pow(1.5, 2.0)));

  CHECK_THROWS_AS(log_periodic_gff(SpacetimeDim(4), 1.0, 1.5, 4.0, 1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(log_periodic_gff(SpacetimeDim(4), 1.0, 0.5, 0.9, 1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("d=2 requires mass gap") {
  SpectralMeasure m;
  m.dim = SpacetimeDim(2);
  m.atoms.push_back({0.0, 1.0});
  CHECK_THROWS_AS(m.validate(), DomainError);

  SpectralMeasure c;
  c.dim = SpacetimeDim(2);
  DensityDescriptor rho;
  rho.lo = 0.0;
  rho.hi = 1.0;
  c.density = rho;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("integrate_mass: atom exactness, constant and quadratic kernels") {
  SpectralMeasure atom;
  atom.dim = SpacetimeDim(4);
  atom.atoms.push_back({1.7, 1.0});
  auto k = [](double m) -> cplx { return {m * m, -m}; };
  const MassIntegral a = integrate_mass(atom, k);
  CHECK(a.value.real() == 1.7 * 1.7);
  CHECK(a.value.imag() == -1.7);
  CHECK(a.abs_error == 0.0);

  SpectralMeasure flat;
  flat.dim = SpacetimeDim(4);
  DensityDescriptor rho;
  rho.lo = 0.0;
  rho.hi = 1.0;
  flat.density = rho;
  flat.validate();
  const MassIntegral one = integrate_mass(flat, [](double) -> cplx { return 1.0; });
  CHECK(std::abs(one.value.real() - 1.0) < 1e-12);
  const MassIntegral msq = integrate_mass(flat, [](double m) -> cplx { return m * m; });
  CHECK(std::abs(msq.value.real() - 1.0 / 3.0) < 1e-10);
}

TEST_CASE("integrate_mass is linear and monotone in the kernel") {
  SpectralMeasure meas;
  meas.dim = SpacetimeDim(3);
  meas.atoms.push_back({0.5, 2.0});
  DensityDescriptor rho;
  rho.lo = 0.1;
  rho.hi = 2.0;
  rho.exponent_2a = 1.0;
  meas.density = rho;
  meas.validate();

  auto k1 = [](double m) -> cplx { return std::sin(m) + 2.0; };
  auto k2 = [](double m) -> cplx { return std::cos(m); };
  const cplx lhs = integrate_mass(meas, [&](double m) { return 2.0 * k1(m) - 0.5 * k2(m); }).value;
  const cplx rhs = 2.0 * integrate_mass(meas, k1).value - 0.5 * integrate_mass(meas, k2).value;
  CHECK(std::abs(lhs - rhs) < 1e-12);

  const double pos = integrate_mass(meas, [](double m) -> cplx { return m * m + 0.1; }).value.real();
  CHECK(pos > 0);
}

TEST_CASE("doubling the density nodes stays within the reported error") {
  SpectralMeasure meas;
  meas.dim = SpacetimeDim(4);
  DensityDescriptor rho;
  rho.lo = 0.05;
  rho.hi = 50.0;
  rho.exponent_2a = 1.0;
  rho.log_periodic = true;
  rho.eps = 0.5;
  rho.tau = 4.0;
  rho.m_ref = 1.0;
  rho.log_axis = true;
  rho.nodes = 128;
  meas.density = rho;
  meas.validate();

  auto kernel = [](double m) -> cplx { return std::exp(-m * m / 4.0); };
  const MassIntegral base = integrate_mass(meas, kernel);
  SpectralMeasure finer = meas;
  finer.density->nodes = 256;
  const MassIntegral fine = integrate_mass(finer, kernel);
  CHECK(std::abs(fine.value - base.value) <= base.abs_error + 1e-14);
}

TEST_CASE("non-finite kernels are reported with the offending mass") {
  SpectralMeasure atom;
  atom.dim = SpacetimeDim(4);
  atom.atoms.push_back({2.0, 1.0});
  auto bad = [](double m) -> cplx { return m > 1 ? std::numeric_limits<double>::infinity() : 0.0; };
  CHECK_THROWS_AS(integrate_mass(atom, bad), NumericalError);
}

TEST_CASE("negative densities are rejected at validation") {
  SpectralMeasure meas;
  meas.dim = SpacetimeDim(4);
  DensityDescriptor rho;
  rho.lo = 0.1;
  rho.hi = 1.0;
  rho.scale = -1.0;
  meas.density = rho;
  CHECK_THROWS_AS(meas.validate(), DomainError);
}
