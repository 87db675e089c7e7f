#include <catch2/catch.hpp>

#include "chanlab/recovery.hpp"

using namespace chanlab;

TEST_CASE("quadrature grid", "[recovery]") {
  QuadratureGrid grid = QuadratureGrid::make();

  SECTION("defaults: 129 symmetric nodes with tiny tail") {
    REQUIRE(grid.nodes.size() == 129);
    REQUIRE_NOTHROW(grid.validate());
    // analytic tail mass of beta0 beyond the truncation
    const double tail = 1.0 - std::tanh(M_PI * grid.truncation / 2.0);
    REQUIRE(tail <= 1e-8);
  }

  SECTION("beta0 mass matches the antiderivative tanh(pi t / 2)/2") {
    // closed-form integral over [-T, T]
    const double expected = std::tanh(M_PI * grid.truncation / 2.0);
    REQUIRE(grid.beta0_mass() == Approx(expected).margin(1e-6));
    REQUIRE(std::abs(grid.beta0_mass() - 1.0) <= 1e-6);
  }

  SECTION("doubling the panel count changes the mass by < 1e-6") {
    QuadratureGrid fine = QuadratureGrid::make(grid.truncation, 86, 3);
    REQUIRE(std::abs(fine.beta0_mass() - grid.beta0_mass()) < 1e-6);
  }
}

TEST_CASE("Petz map", "[recovery]") {
  Rng rng(13);

  SECTION("unitary channel: Petz map is the inverse unitary channel") {
    Matrix u = rng.haar_unitary(3);
    KrausChannel ch = KrausChannel::make({u}, 3, 3);
    DensityOperator sigma = random_density(3, 3, rng);
    PetzMap petz(sigma, ch);
    for (int i = 0; i < 10; ++i) {
      DensityOperator rho = random_density(3, 2, rng);
      Matrix recovered = petz.apply_matrix(ch.apply_matrix(rho.mat()));
      REQUIRE(trace_norm(Matrix(recovered - rho.mat())) < 1e-9);
    }
  }

  SECTION("(P o N)(sigma) = sigma on random pairs, seed 13") {
    for (int i = 0; i < 10; ++i) {
      Rng sub = rng.substream(static_cast<std::uint64_t>(i));
      KrausChannel ch = random_channel(3, 2, 2, sub);
      DensityOperator sigma = random_density(3, 3, sub);
      PetzMap petz(sigma, ch);
      Matrix back = petz.apply_matrix(ch.apply_matrix(sigma.mat()));
      REQUIRE(trace_norm(Matrix(back - sigma.mat())) < 1e-8);
    }
  }

  SECTION("CPTP on the support of N(sigma)") {
    KrausChannel ch = random_channel(2, 3, 2, rng);
    DensityOperator sigma = random_density(2, 2, rng);
    PetzMap petz(sigma, ch);
    REQUIRE(petz.support_completeness_residual() < 1e-8);
    REQUIRE(verify_cptp(petz.reverse()).choi_min_eigenvalue >= -1e-9);
  }

  SECTION("input escaping supp N(sigma) raises SupportError") {
    // channel embeds a qubit into the first two levels of a qutrit
    Matrix v = Matrix::Zero(3, 2);
    v(0, 0) = v(1, 1) = Complex(1, 0);
    KrausChannel ch = KrausChannel::make({v}, 2, 3);
    DensityOperator sigma = random_density(2, 2, rng);
    PetzMap petz(sigma, ch);
    Matrix outside = Matrix::Zero(3, 3);
    outside(2, 2) = Complex(1, 0);
    REQUIRE_THROWS_AS(petz.apply_matrix(outside), SupportError);
  }
}

TEST_CASE("recoverability gap", "[recovery]") {
  Rng rng(14);

  SECTION("unitary channel has zero gap") {
    Matrix u = rng.haar_unitary(2);
    KrausChannel ch = KrausChannel::make({u}, 2, 2);
    DensityOperator rho = random_density(2, 1, rng);
    DensityOperator sigma = random_density(2, 2, rng);
    REQUIRE(std::abs(recoverability_gap(ch, rho, sigma)) < 1e-9);
  }

  SECTION("completely mixing channel keeps the whole relative entropy") {
    KrausChannel mix = kraus_from_choi(
        ChoiOperator{Operator::square(Matrix(Matrix::Identity(4, 4) / 2.0), Dims{2, 2}), 2, 2});
    DensityOperator rho = random_density(2, 1, rng);
    DensityOperator sigma = random_density(2, 2, rng);
    const double gap = recoverability_gap(mix, rho, sigma);
    REQUIRE(gap == Approx(relative_entropy(rho, sigma)).margin(1e-9));
    REQUIRE(gap > 0.0);
  }
}

TEST_CASE("universal recovery", "[recovery]") {
  QuadratureGrid grid = QuadratureGrid::make();
  Rng rng(17);

  SECTION("unitary channel: R inverts within quadrature tolerance") {
    Matrix u = rng.haar_unitary(2);
    KrausChannel ch = KrausChannel::make({u}, 2, 2);
    DensityOperator sigma = random_density(2, 2, rng);
    RecoveryChannel recovery(sigma, ch, grid);
    DensityOperator rho = random_density(2, 2, rng);
    Matrix back = recovery.apply_matrix(ch.apply_matrix(rho.mat()));
    REQUIRE(trace_norm(Matrix(back - rho.mat())) < 1e-6);
  }

  SECTION("matches the Petz map when recovery is exact") {
    // erasure-structured channel: exact Petz recovery, rotations commute
    ErasureExample ex = erasure_example(2, 2, 2, 0, 2, (RealVector(2) << 0.3, 0.7).finished(),
                                        /*seed=*/5, /*n_random_states=*/4);
    PetzMap petz(ex.sigma, ex.channel);
    RecoveryChannel recovery(ex.sigma, ex.channel, grid);
    for (int i = 0; i < 4; ++i) {
      Rng sub = rng.substream(static_cast<std::uint64_t>(i));
      DensityOperator rho = random_density(2, 2, sub);
      Matrix n_rho = ex.channel.apply_matrix(rho.mat());
      REQUIRE(trace_norm(Matrix(recovery.apply_matrix(n_rho) - petz.apply_matrix(n_rho))) <
              1e-6);
    }
  }

  SECTION("random qubit channel, sigma = I/2, seed 17: bound slack >= -1e-6") {
    KrausChannel ch = random_channel(2, 2, 2, rng);
    DensityOperator sigma = make_density(Matrix(0.5 * Matrix::Identity(2, 2)), Dims{2});
    DensityOperator rho = random_density(2, 2, rng);
    RecoveryReport report = recovery_report(ch, rho, sigma, grid);
    REQUIRE(report.bound_slack >= -1e-6);
    REQUIRE(report.fvdg_consistent);
  }

  SECTION("materialized Kraus form agrees with the node sum") {
    KrausChannel ch = random_channel(2, 3, 2, rng);
    DensityOperator sigma = random_density(2, 2, rng);
    RecoveryChannel recovery(sigma, ch, grid);
    REQUIRE(recovery.materialized().has_value());
    REQUIRE(static_cast<Index>(recovery.materialized()->kraus().size()) <= 2 * 3);
    // adjoint is unital up to quadrature error
    Matrix unital = recovery.apply_adjoint(Matrix::Identity(2, 2));
    REQUIRE(operator_norm(Matrix(unital - Matrix::Identity(3, 3))) < 1e-5);
  }

  SECTION("doubling the node count moves outputs by < 1e-6") {
    QuadratureGrid fine = QuadratureGrid::make(grid.truncation, 86, 3);
    KrausChannel ch = random_channel(2, 2, 3, rng);
    DensityOperator sigma = random_density(2, 2, rng);
    RecoveryChannel coarse_r(sigma, ch, grid), fine_r(sigma, ch, fine);
    for (int i = 0; i < 5; ++i) {
      DensityOperator rho = random_density(2, 2, rng);
      Matrix n_rho = ch.apply_matrix(rho.mat());
      REQUIRE(trace_norm(Matrix(coarse_r.apply_matrix(n_rho) - fine_r.apply_matrix(n_rho))) <
              1e-6);
    }
  }

  SECTION("exactness at tolerance in both directions") {
    // gap ~ 0 implies Petz residual ~ 0, and vice versa
    ErasureExample ex = erasure_example(2, 2, 3, 0, 2, (RealVector(2) << 0.4, 0.6).finished(),
                                        /*seed=*/8, /*n_random_states=*/6);
    REQUIRE(ex.max_pair_gap <= 1e-7);
    REQUIRE(ex.max_petz_residual <= 1e-6);
  }
}

TEST_CASE("recovery bound fuzz", "[recovery][slow]") {
  QuadratureGrid grid = QuadratureGrid::make();
  Rng rng(170);
  double worst = 1.0;
  for (int i = 0; i < 60; ++i) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(i));
    const Index din = 2 + static_cast<Index>(sub.integer(2));
    const Index dout = 2 + static_cast<Index>(sub.integer(2));
    KrausChannel ch = random_channel(din, dout, 1 + static_cast<Index>(sub.integer(3)), sub);
    DensityOperator rho = random_density(din, 1 + static_cast<Index>(sub.integer(
                                                   static_cast<std::uint64_t>(din))),
                                         sub);
    DensityOperator sigma = random_density(din, din, sub);
    RecoveryReport r = recovery_report(ch, rho, sigma, grid);
    worst = std::min(worst, r.bound_slack);
    REQUIRE(r.bound_slack >= -1e-6);
    REQUIRE(r.trace_distance_residual <= 2.0 * std::sqrt(std::max(r.gap, 0.0)) + 1e-6);
  }
  INFO("worst bound slack " << worst);
}

TEST_CASE("erasure example", "[recovery]") {
  const RealVector spectrum = (RealVector(2) << 0.3, 0.7).finished();

  SECTION("exact recovery at the default dimensions") {
    ErasureExample ex = erasure_example(2, 2, 2, 0, 2, spectrum, 11);
    REQUIRE(ex.max_petz_residual <= 1e-8);
    REQUIRE(ex.max_pair_gap <= 1e-8);
    REQUIRE(ex.chi_trace == Approx(1.0).margin(1e-10));
    REQUIRE(verify_cptp(ex.channel).passed);
  }

  SECTION("isometry certificate") {
    ErasureExample ex = erasure_example(2, 2, 2, 0, 2, spectrum, 11);
    Matrix vtv = ex.code_isometry.mat().adjoint() * ex.code_isometry.mat();
    REQUIRE(operator_norm(Matrix(vtv - Matrix::Identity(2, 2))) < 1e-12);
  }

  SECTION("padding dimension d3 > 0 still recovers exactly") {
    ErasureExample ex = erasure_example(2, 2, 2, 3, 2, spectrum, 12, 8);
    REQUIRE(ex.max_petz_residual <= 1e-8);
  }

  SECTION("invalid inputs") {
    REQUIRE_THROWS_AS(erasure_example(2, 3, 2, 0, 2, spectrum, 1), DimensionError);
    const RealVector bad = (RealVector(2) << 1.0, 0.0).finished();
    REQUIRE_THROWS_AS(erasure_example(2, 2, 2, 0, 2, bad, 1), ValidationError);
  }
}
