#include <catch2/catch.hpp>

#include "chanlab/channels.hpp"

using namespace chanlab;

namespace {

KrausChannel identity_channel(Index d) {
  return KrausChannel::make({Matrix::Identity(d, d)}, d, d);
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  return operator_norm(Matrix(choi_of(a).matrix.mat() - choi_of(b).matrix.mat()));
}

}  // namespace

TEST_CASE("apply", "[channels]") {
  Rng rng(1);
  DensityOperator rho = random_density(2, 2, rng);

  SECTION("identity channel leaves states unchanged") {
    DensityOperator out = apply(identity_channel(2), rho);
    REQUIRE(operator_norm(Matrix(out.mat() - rho.mat())) < 1e-12);
  }

  SECTION("unitary channel conjugates and preserves entropy") {
    Matrix u = rng.haar_unitary(2);
    KrausChannel ch = KrausChannel::make({u}, 2, 2);
    DensityOperator out = apply(ch, rho);
    REQUIRE(operator_norm(Matrix(out.mat() - u * rho.mat() * u.adjoint())) < 1e-12);
    REQUIRE(std::abs(von_neumann_entropy(out) - von_neumann_entropy(rho)) < 1e-9);
  }

  SECTION("environment channel matches Tr_B[U(rho x |0><0|)U^dag]") {
    const Index da = 2, db = 3;
    Matrix u = rng.haar_unitary(da * db);
    // Kraus operators M_j = (I x <j|) U (I x |0>).
    std::vector<Matrix> kraus;
    for (Index j = 0; j < db; ++j) {
      Matrix m(da, da);
      for (Index r = 0; r < da; ++r)
        for (Index c = 0; c < da; ++c) m(r, c) = u(r * db + j, c * db + 0);
      kraus.push_back(std::move(m));
    }
    KrausChannel ch = KrausChannel::make(std::move(kraus), da, da);

    for (int trial = 0; trial < 5; ++trial) {
      DensityOperator input = random_density(da, 2, rng);
      Matrix zero = Matrix::Zero(db, db);
      zero(0, 0) = Complex(1, 0);
      Matrix big = u * kron(input.mat(), zero) * u.adjoint();
      Operator reduced = partial_trace(Operator::square(big, Dims{da, db}), {0});
      REQUIRE(operator_norm(Matrix(ch.apply_matrix(input.mat()) - reduced.mat())) < 1e-9);
    }
  }

  SECTION("dimension mismatch") {
    REQUIRE_THROWS_AS(apply(identity_channel(3), rho), DimensionError);
  }

  SECTION("trace preserved on random channels") {
    for (int i = 0; i < 10; ++i) {
      KrausChannel ch = random_channel(3, 2, 2, rng);
      DensityOperator out = apply(ch, random_density(3, 2, rng));
      REQUIRE(std::abs(out.mat().trace() - Complex(1, 0)) < 1e-9);
    }
  }
}

TEST_CASE("verify_cptp", "[channels]") {
  SECTION("identity passes with zero residual") {
    auto r = verify_cptp(identity_channel(2));
    REQUIRE(r.passed);
    REQUIRE(r.completeness_residual < 1e-12);
    REQUIRE(r.choi_min_eigenvalue >= -1e-12);
  }

  SECTION("{X, Z}/sqrt(2) is complete") {
    auto r = verify_cptp(KrausChannel::make(
        {Matrix(M_SQRT1_2 * pauli_x()), Matrix(M_SQRT1_2 * pauli_z())}, 2, 2));
    REQUIRE(r.passed);
  }

  SECTION("{I, I} is over-complete and fails") {
    KrausChannel bad =
        KrausChannel::trusted({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}, 2, 2);
    auto r = verify_cptp(bad);
    REQUIRE_FALSE(r.passed);
    REQUIRE(r.completeness_residual == Approx(1.0));
    REQUIRE_THROWS_AS(KrausChannel::make({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}, 2, 2),
                      ValidationError);
  }
}

TEST_CASE("Choi operator", "[channels]") {
  SECTION("identity qubit channel gives |Gamma><Gamma|") {
    ChoiOperator c = choi_of(identity_channel(2));
    auto sys = herm_eigendecompose(c.matrix.mat());
    REQUIRE(sys.eigenvalues(0) == Approx(2.0));
    REQUIRE(std::abs(sys.eigenvalues(1)) < 1e-12);
    Vector gamma = max_entangled(2, false).amplitudes();
    REQUIRE(operator_norm(Matrix(c.matrix.mat() - gamma * gamma.adjoint())) < 1e-12);
  }

  SECTION("reset-to-|0> channel gives I_R x |0><0|") {
    Matrix m0 = Matrix::Zero(2, 2), m1 = Matrix::Zero(2, 2);
    m0(0, 0) = Complex(1, 0);  // |0><0|
    m1(0, 1) = Complex(1, 0);  // |0><1|
    ChoiOperator c = choi_of(KrausChannel::make({m0, m1}, 2, 2));
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = Complex(1, 0);
    REQUIRE(operator_norm(Matrix(c.matrix.mat() - kron(Matrix::Identity(2, 2), p0))) < 1e-12);
  }

  SECTION("partial trace over the output gives I_R") {
    Rng rng(70);
    KrausChannel ch = random_channel(3, 4, 2, rng);
    Operator reduced = partial_trace(choi_of(ch).matrix, {0});
    REQUIRE(operator_norm(Matrix(reduced.mat() - Matrix::Identity(3, 3))) < 1e-8);
  }

  SECTION("transpose map fails complete positivity through the same formula") {
    ChoiOperator c = choi_of_linear_map(transpose_map, 2, 2);
    // the Choi operator of transposition is the SWAP operator
    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = Complex(1, 0);
    REQUIRE(operator_norm(Matrix(c.matrix.mat() - swap)) < 1e-12);
    auto sys = herm_eigendecompose(c.matrix.mat());
    REQUIRE(sys.eigenvalues(sys.eigenvalues.size() - 1) == Approx(-1.0).margin(1e-10));
    REQUIRE_THROWS_AS(kraus_from_choi(c), ValidationError);
  }
}

TEST_CASE("kraus_from_choi", "[channels]") {
  SECTION("Choi of the identity returns a single Kraus equal to I up to phase") {
    KrausChannel back = kraus_from_choi(choi_of(identity_channel(2)));
    REQUIRE(back.kraus().size() == 1);
    const Complex scale = back.kraus()[0](0, 0);
    REQUIRE(std::abs(std::abs(scale) - 1.0) < 1e-9);
    REQUIRE(operator_norm(Matrix(back.kraus()[0] - scale * Matrix::Identity(2, 2))) < 1e-9);
  }

  SECTION("round trip on 100 random channels up to 4x4") {
    Rng rng(42);
    for (int i = 0; i < 100; ++i) {
      Rng sub = rng.substream(static_cast<std::uint64_t>(i));
      const Index din = 2 + static_cast<Index>(sub.integer(3));
      const Index dout = 2 + static_cast<Index>(sub.integer(3));
      const Index env = 1 + static_cast<Index>(sub.integer(3));
      KrausChannel ch = random_channel(din, dout, env, sub);
      KrausChannel back = kraus_from_choi(choi_of(ch));
      REQUIRE(choi_distance(ch, back) < 1e-8);
      REQUIRE(static_cast<Index>(back.kraus().size()) <= din * dout);
    }
  }

  SECTION("maximally mixing channel has full Kraus rank") {
    // Choi = I_RB / d_B corresponds to N(rho) = Tr[rho] I / d_B.
    const Index d = 2;
    ChoiOperator c{Operator::square(Matrix(Matrix::Identity(4, 4) / 2.0), Dims{d, d}), d, d};
    KrausChannel ch = kraus_from_choi(c);
    REQUIRE(ch.kraus().size() == 4);
    REQUIRE(verify_cptp(ch).passed);
  }
}

TEST_CASE("isometric dilation", "[channels]") {
  SECTION("unitary channel dilates with env_dim 1") {
    Rng rng(77);
    Matrix u = rng.haar_unitary(3);
    IsometricDilation d = dilate(KrausChannel::make({u}, 3, 3));
    REQUIRE(d.env_dim == 1);
    REQUIRE(operator_norm(Matrix(d.v.mat() - u)) < 1e-12);
  }

  SECTION("|0> -> (|0>+|1>)/sqrt(2) is already an isometry") {
    Matrix v(2, 1);
    v << M_SQRT1_2, M_SQRT1_2;
    KrausChannel ch = KrausChannel::make({v}, 1, 2);
    IsometricDilation d = dilate(ch);
    Matrix vv = d.v.mat().adjoint() * d.v.mat();
    REQUIRE(vv.rows() == 1);
    REQUIRE(std::abs(vv(0, 0) - Complex(1, 0)) < 1e-12);
  }

  SECTION("V^dag V = I and the trace-out round trip on random channels") {
    Rng rng(31);
    for (int i = 0; i < 20; ++i) {
      KrausChannel ch = random_channel(2, 2, 3, rng);
      IsometricDilation d = dilate(ch);
      REQUIRE(operator_norm(Matrix(d.v.mat().adjoint() * d.v.mat() -
                                   Matrix::Identity(2, 2))) < 1e-9);
      // VV^dag is a projector
      Matrix p = d.v.mat() * d.v.mat().adjoint();
      REQUIRE(operator_norm(Matrix(p * p - p)) < 1e-8);
      // round trip including a non-hermitian input
      Matrix x = rng.gaussian_matrix(2, 2);
      REQUIRE(operator_norm(Matrix(d.apply_and_trace_env(x) - ch.apply_matrix(x))) < 1e-9);
    }
  }
}

TEST_CASE("rotate_kraus", "[channels]") {
  Rng rng(55);
  KrausChannel ch = random_channel(2, 2, 3, rng);

  SECTION("identity rotation keeps the list") {
    KrausChannel r = rotate_kraus(ch, Matrix(Matrix::Identity(3, 3)));
    for (std::size_t i = 0; i < 3; ++i)
      REQUIRE(operator_norm(Matrix(r.kraus()[i] - ch.kraus()[i])) < 1e-12);
  }

  SECTION("swap of two Kraus operators keeps the Choi operator") {
    Matrix w = Matrix::Zero(3, 3);
    w(1, 0) = w(0, 1) = w(2, 2) = Complex(1, 0);
    KrausChannel r = rotate_kraus(ch, w);
    REQUIRE(operator_norm(Matrix(r.kraus()[0] - ch.kraus()[1])) < 1e-12);
    REQUIRE(choi_distance(ch, r) < 1e-9);
  }

  SECTION("random unitary rotation has Choi distance 0") {
    Matrix w = rng.haar_unitary(3);
    REQUIRE(choi_distance(ch, rotate_kraus(ch, w)) < 1e-9);
  }

  SECTION("non-unitary rotation rejected") {
    Matrix w = 2.0 * Matrix::Identity(3, 3);
    REQUIRE_THROWS_AS(rotate_kraus(ch, w), ValidationError);
  }
}

TEST_CASE("adjoint channel", "[channels]") {
  Rng rng(66);

  SECTION("adjoint of a unitary channel is the inverse conjugation") {
    Matrix u = rng.haar_unitary(2);
    AdjointChannel adj = adjoint(KrausChannel::make({u}, 2, 2));
    Matrix x = rng.gaussian_matrix(2, 2);
    REQUIRE(operator_norm(Matrix(adj.apply_matrix(x) - u.adjoint() * x * u)) < 1e-12);
  }

  SECTION("unitality N^dag(I) = I on 50 random channels") {
    for (int i = 0; i < 50; ++i) {
      Rng sub = rng.substream(static_cast<std::uint64_t>(i));
      const Index din = 2 + static_cast<Index>(sub.integer(2));
      const Index dout = 2 + static_cast<Index>(sub.integer(2));
      KrausChannel ch = random_channel(din, dout, 2, sub);
      AdjointChannel adj = adjoint(ch);
      REQUIRE(operator_norm(Matrix(adj.apply_matrix(Matrix::Identity(dout, dout)) -
                                   Matrix::Identity(din, din))) < 1e-9);
    }
  }

  SECTION("trace inner product identity <N(t), w> = <t, N^dag(w)>") {
    KrausChannel ch = random_channel(3, 2, 2, rng);
    AdjointChannel adj = adjoint(ch);
    for (int i = 0; i < 20; ++i) {
      Matrix t = rng.gaussian_matrix(3, 3), w = rng.gaussian_matrix(2, 2);
      const Complex lhs = (ch.apply_matrix(t).adjoint() * w).trace();
      const Complex rhs = (t.adjoint() * adj.apply_matrix(w)).trace();
      REQUIRE(std::abs(lhs - rhs) < 1e-9);
    }
  }
}

TEST_CASE("compose", "[channels]") {
  Rng rng(88);

  SECTION("identity is a left unit") {
    KrausChannel ch = random_channel(2, 3, 2, rng);
    REQUIRE(choi_distance(compose(identity_channel(3), ch), ch) < 1e-9);
  }

  SECTION("U then U^dag is the identity channel") {
    Matrix u = rng.haar_unitary(2);
    KrausChannel fwd = KrausChannel::make({u}, 2, 2);
    KrausChannel bwd = KrausChannel::make({Matrix(u.adjoint())}, 2, 2);
    REQUIRE(choi_distance(compose(bwd, fwd), identity_channel(2)) < 1e-9);
  }

  SECTION("application factorizes and the Kraus count stays bounded") {
    KrausChannel a = random_channel(2, 3, 3, rng);
    KrausChannel b = random_channel(3, 2, 3, rng);
    KrausChannel both = compose(b, a);
    REQUIRE(static_cast<Index>(both.kraus().size()) <= 2 * 2);
    for (int i = 0; i < 10; ++i) {
      DensityOperator rho = random_density(2, 2, rng);
      Matrix direct = b.apply_matrix(a.apply_matrix(rho.mat()));
      REQUIRE(operator_norm(Matrix(both.apply_matrix(rho.mat()) - direct)) < 1e-9);
    }
  }

  SECTION("dimension chain enforced") {
    KrausChannel a = random_channel(2, 3, 2, rng);
    REQUIRE_THROWS_AS(compose(a, a), DimensionError);
  }
}

TEST_CASE("nonlinear counterexample", "[channels]") {
  Matrix p0 = (Matrix(2, 2) << 1, 0, 0, 0).finished();
  Matrix p1 = (Matrix(2, 2) << 0, 0, 0, 1).finished();
  Vector plus(2);
  plus << M_SQRT1_2, M_SQRT1_2;
  Matrix pp = plus * plus.adjoint();

  SECTION("rho_1 = (|0><0| + |1><1|)/2 is a fixed point") {
    DensityOperator rho1 = make_density(Matrix(0.5 * (p0 + p1)), Dims{2});
    DensityOperator out = nonlinear_counterexample(rho1);
    REQUIRE(operator_norm(Matrix(out.mat() - rho1.mat())) < 1e-12);
  }

  SECTION("rho_2 = (|0><0| + |+><+|)/2 maps to X rho_2 X") {
    DensityOperator rho2 = make_density(Matrix(0.5 * (p0 + pp)), Dims{2});
    DensityOperator out = nonlinear_counterexample(rho2);
    Matrix expected = pauli_x() * rho2.mat() * pauli_x();
    REQUIRE(operator_norm(Matrix(out.mat() - expected)) < 1e-12);
  }

  SECTION("linearity violation witness") {
    // |0><0| and |+><+| are fixed points of E, so the ensemble of images
    // is rho_2 itself, while E(rho_2) = X rho_2 X differs.
    DensityOperator z0 = make_density(p0, Dims{2});
    DensityOperator pl = make_density(pp, Dims{2});
    DensityOperator rho2 = make_density(Matrix(0.5 * (p0 + pp)), Dims{2});
    Matrix mixture_of_images =
        0.5 * nonlinear_counterexample(z0).mat() + 0.5 * nonlinear_counterexample(pl).mat();
    REQUIRE(operator_norm(Matrix(mixture_of_images - rho2.mat())) < 1e-12);
    const double violation =
        operator_norm(Matrix(nonlinear_counterexample(rho2).mat() - mixture_of_images));
    REQUIRE(violation == Approx(0.5).margin(1e-12));
  }

  SECTION("non-qubit input rejected") {
    Rng rng(5);
    REQUIRE_THROWS_AS(nonlinear_counterexample(random_density(3, 2, rng)), DimensionError);
  }
}

TEST_CASE("monotonicity of relative entropy", "[channels]") {
  Rng rng(111);

  SECTION("unitary channels have zero slack") {
    Matrix u = rng.haar_unitary(3);
    KrausChannel ch = KrausChannel::make({u}, 3, 3);
    DensityOperator rho = random_density(3, 2, rng);
    DensityOperator sigma = random_density(3, 3, rng);
    auto r = monotonicity_audit(ch, rho, sigma);
    REQUIRE(r.passed);
    REQUIRE(r.slack == Approx(0.0).margin(1e-8));
  }

  SECTION("completely mixing channel recovers the full relative entropy as slack") {
    KrausChannel mix = kraus_from_choi(
        ChoiOperator{Operator::square(Matrix(Matrix::Identity(4, 4) / 2.0), Dims{2, 2}), 2, 2});
    DensityOperator rho = random_density(2, 1, rng);
    DensityOperator sigma = random_density(2, 2, rng);
    auto r = monotonicity_audit(mix, rho, sigma);
    REQUIRE(r.passed);
    REQUIRE(r.lhs == Approx(0.0).margin(1e-9));
    REQUIRE(r.slack == Approx(relative_entropy(rho, sigma)).margin(1e-8));
  }

  SECTION("100 random triples: no violations") {
    for (int i = 0; i < 100; ++i) {
      Rng sub = rng.substream(static_cast<std::uint64_t>(i));
      const Index din = 2 + static_cast<Index>(sub.integer(2));
      const Index dout = 2 + static_cast<Index>(sub.integer(2));
      KrausChannel ch = random_channel(din, dout, 2, sub);
      DensityOperator rho = random_density(din, 1 + static_cast<Index>(sub.integer(
                                                     static_cast<std::uint64_t>(din))),
                                           sub);
      DensityOperator sigma = random_density(din, din, sub);
      REQUIRE(monotonicity_audit(ch, rho, sigma).passed);
    }
  }
}
