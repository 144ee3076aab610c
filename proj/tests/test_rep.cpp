#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spinnet/rep/clebsch_gordan.hpp"
#include "spinnet/rep/intertwiner.hpp"
#include "spinnet/rep/random.hpp"
#include "spinnet/rep/wigner.hpp"
#include "spinnet/tensor/monte_carlo.hpp"

using namespace spinnet;

namespace {

std::vector<GroupElement> random_elements(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(haar_sample(rng));
  return out;
}

}  // namespace

TEST(GroupElement, ProductMatchesMatrixProduct) {
  auto g = random_elements(40, 1);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    Eigen::Matrix2cd lhs = (g[i] * g[i + 1]).matrix();
    Eigen::Matrix2cd rhs = g[i].matrix() * g[i + 1].matrix();
    EXPECT_LT((lhs - rhs).norm(), 1e-14);
    EXPECT_TRUE((g[i] * g[i + 1]).is_unit());
    EXPECT_LT(((g[i] * g[i].inverse()).matrix() - Eigen::Matrix2cd::Identity()).norm(), 1e-14);
  }
}

TEST(Wigner, IdentityAndZQuaternion) {
  EXPECT_LT((wigner_matrix(Spin(1), GroupElement::identity()) - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-15);
  Eigen::MatrixXcd expected(2, 2);
  expected << cplx(0, 1), 0, 0, cplx(0, -1);
  EXPECT_LT((wigner_matrix(Spin(1), {0, 0, 0, 1}) - expected).norm(), 1e-15);
}

TEST(Wigner, MultiplicativeUnitaryUnimodular) {
  auto g = random_elements(201, 2);
  for (int tj = 0; tj <= 6; ++tj) {
    Spin j(tj);
    for (std::size_t i = 0; i < 100; ++i) {
      auto a = wigner_matrix(j, g[2 * i]);
      auto b = wigner_matrix(j, g[2 * i + 1]);
      auto ab = wigner_matrix(j, g[2 * i] * g[2 * i + 1]);
      EXPECT_LT((a * b - ab).cwiseAbs().maxCoeff(), 1e-10) << "2j=" << tj;
      EXPECT_LT((a.adjoint() * a - Eigen::MatrixXcd::Identity(j.dim(), j.dim())).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
  for (int tj = 0; tj <= kMaxTwiceJ; ++tj) {
    auto d = wigner_matrix(Spin(tj), g[tj]);
    EXPECT_LT(std::abs(d.determinant() - cplx(1.0)), 1e-10) << "2j=" << tj;
    EXPECT_LT((d.adjoint() * d - Eigen::MatrixXcd::Identity(tj + 1, tj + 1)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Wigner, SpinOneIsSymmetricBlockOfTensorSquare) {
  Eigen::MatrixXd cg = clebsch_gordan(Spin(1), Spin(1), Spin(2));
  for (const auto& g : random_elements(20, 3)) {
    Eigen::MatrixXcd half = wigner_matrix(Spin(1), g);
    Eigen::MatrixXcd block = cg.transpose().cast<cplx>() * oracle::kron(half, half) * cg.cast<cplx>();
    EXPECT_LT((block - wigner_matrix(Spin(2), g)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Wigner, CharacterMatchesClassFunction) {
  // chi_j = sin((2j+1) t) / sin t with w = cos t.
  for (const auto& g : random_elements(20, 4)) {
    double t = std::acos(g.w);
    for (int tj = 0; tj <= 8; ++tj) {
      double expected = std::sin((tj + 1) * t) / std::sin(t);
      EXPECT_NEAR(character(Spin(tj), g).real(), expected, 1e-10);
      EXPECT_NEAR(character(Spin(tj), g).imag(), 0.0, 1e-12);
    }
  }
}

TEST(Haar, MomentsMatchOrthogonality) {
  const std::size_t n = 1'000'000;
  auto chi = mc_expectation(1, [](auto g) { return character(Spin(1), g[0]); }, n, 11);
  EXPECT_TRUE(chi.agrees_with(0.0, 3.0)) << chi.mean << " +- " << chi.stderr();
  auto chi2 = mc_expectation(1, [](auto g) { return cplx(std::norm(character(Spin(1), g[0]))); }, n, 12);
  EXPECT_TRUE(chi2.agrees_with(1.0, 3.0)) << chi2.mean << " +- " << chi2.stderr();
  auto d00 = mc_expectation(1, [](auto g) { return wigner_matrix(Spin(1), g[0])(0, 0); }, n, 13);
  EXPECT_TRUE(d00.agrees_with(0.0, 3.0)) << d00.mean << " +- " << d00.stderr();
}

TEST(Haar, SamplesAreUnitQuaternions) {
  for (const auto& g : random_elements(1000, 5)) EXPECT_TRUE(g.is_unit(1e-12));
}

TEST(Haar, SeededStreamIsReproducible) {
  auto a = random_elements(10, 77);
  auto b = random_elements(10, 77);
  EXPECT_EQ(a, b);
  EXPECT_NE(random_elements(10, 78), a);
}

TEST(ClebschGordan, TrivialCouplingIsIdentity) {
  Eigen::MatrixXd c = clebsch_gordan(Spin(1), Spin(0), Spin(1));
  EXPECT_LT((c - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
}

TEST(ClebschGordan, SingletMatchesInvariantSubspaceOracle) {
  Eigen::MatrixXd c = clebsch_gordan(Spin(1), Spin(1), Spin(0));
  // Row k1*2+k2; <1/2,-1/2; 1/2,+1/2|0,0> is row (1, 0).
  EXPECT_NEAR(std::abs(c(2, 0)), 1.0 / std::sqrt(2.0), 1e-14);
  Eigen::MatrixXcd inv = oracle::invariant_subspace({Spin(1), Spin(1)});
  ASSERT_EQ(inv.cols(), 1);
  EXPECT_NEAR(std::abs(inv(2, 0)), 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(std::abs(inv.col(0).dot(c.col(0).cast<cplx>())), 1.0, 1e-10);
  // Condon-Shortley sign: <+1/2, -1/2 | 0 0> = +1/sqrt 2.
  EXPECT_NEAR(c(1, 0), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(ClebschGordan, TripletIsSymmetrizerIsometry) {
  Eigen::MatrixXd c = clebsch_gordan(Spin(1), Spin(1), Spin(2));
  Eigen::MatrixXd sym(4, 3);
  const double r = 1.0 / std::sqrt(2.0);
  sym << 1, 0, 0,
         0, r, 0,
         0, r, 0,
         0, 0, 1;
  EXPECT_LT((c - sym).norm(), 1e-14);
  Eigen::MatrixXd swap = Eigen::MatrixXd::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1;
  EXPECT_LT((c * c.transpose() - 0.5 * (Eigen::MatrixXd::Identity(4, 4) + swap)).norm(), 1e-14);
}

TEST(ClebschGordan, ColumnsOrthonormalAndEquivariant) {
  auto g = random_elements(3, 6);
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int J = std::abs(a - b); J <= a + b; J += 2) {
        Eigen::MatrixXd c = clebsch_gordan(Spin(a), Spin(b), Spin(J));
        EXPECT_LT((c.transpose() * c - Eigen::MatrixXd::Identity(J + 1, J + 1)).norm(), 1e-12);
        for (const auto& x : g) {
          Eigen::MatrixXcd lhs = oracle::kron(wigner_matrix(Spin(a), x), wigner_matrix(Spin(b), x)) * c.cast<cplx>();
          Eigen::MatrixXcd rhs = c.cast<cplx>() * wigner_matrix(Spin(J), x);
          EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10) << a << " " << b << " " << J;
        }
      }
}

TEST(ClebschGordan, RejectsInadmissible) {
  EXPECT_THROW(clebsch_gordan(Spin(1), Spin(1), Spin(4)), AdmissibilityError);
  EXPECT_THROW(clebsch_gordan(Spin(1), Spin(1), Spin(1)), AdmissibilityError);
  EXPECT_THROW(clebsch_gordan(Spin(4), Spin(1), Spin(1)), AdmissibilityError);
}

TEST(Epsilon, KnownValues) {
  Eigen::MatrixXcd e0 = epsilon(Spin(0));
  EXPECT_EQ(e0.rows(), 1);
  EXPECT_NEAR(std::abs(e0(0, 0) - 1.0), 0.0, 1e-15);
  Eigen::MatrixXcd e1(2, 2);
  e1 << 0, 1, -1, 0;
  EXPECT_LT((epsilon(Spin(1)) - e1).norm(), 1e-15);
}

TEST(Epsilon, DefiningRelation) {
  auto g = random_elements(10, 7);
  for (int tj = 0; tj <= kMaxTwiceJ; ++tj) {
    Spin j(tj);
    Eigen::MatrixXcd c = epsilon(j);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(j.dim(), j.dim());
    EXPECT_LT((c.adjoint() * c - id).cwiseAbs().maxCoeff(), 1e-12);
    double sign = tj % 2 == 0 ? 1.0 : -1.0;
    EXPECT_LT((c * c.conjugate() - sign * id).cwiseAbs().maxCoeff(), 1e-12);
    for (const auto& x : g) {
      Eigen::MatrixXcd d = wigner_matrix(j, x);
      EXPECT_LT((d.conjugate() - c * d * c.inverse()).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Epsilon, SpinOneMatchesLeastSquaresSolution) {
  // Solve conj(D(g)) C - C D(g) = 0 for several g as a linear system in vec(C).
  const int d = 3;
  auto g = random_elements(4, 8);
  Eigen::MatrixXcd sys(static_cast<Eigen::Index>(g.size()) * d * d, d * d);
  for (std::size_t k = 0; k < g.size(); ++k) {
    Eigen::MatrixXcd dg = wigner_matrix(Spin(2), g[k]);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    // vec(A C) = (I (x) A) vec(C), vec(C B) = (B^T (x) I) vec(C), column-major vec.
    sys.block(static_cast<Eigen::Index>(k) * d * d, 0, d * d, d * d) =
        oracle::kron(id, Eigen::MatrixXcd(dg.conjugate())) - oracle::kron(dg.transpose(), id);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeFullV);
  Eigen::VectorXcd v = svd.matrixV().col(d * d - 1);
  EXPECT_LT(svd.singularValues()(d * d - 1), 1e-10);
  EXPECT_GT(svd.singularValues()(d * d - 2), 1e-3);
  Eigen::MatrixXcd sol = Eigen::Map<Eigen::MatrixXcd>(v.data(), d, d);
  Eigen::MatrixXcd c = epsilon(Spin(2));
  cplx phase = (c.array() * sol.conjugate().array()).sum();
  phase /= std::abs(phase);
  EXPECT_LT((sol * phase - c / std::sqrt(3.0)).norm(), 1e-10);
  // real signed permutation
  for (int r = 0; r < d; ++r) {
    int nonzero = 0;
    for (int col = 0; col < d; ++col) {
      double x = c(r, col).real();
      EXPECT_EQ(c(r, col).imag(), 0.0);
      if (x != 0.0) {
        ++nonzero;
        EXPECT_EQ(std::abs(x), 1.0);
      }
    }
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(Intertwiner, BasisSizes) {
  const IntertwinerLeg hin{Spin(1), Direction::in};
  EXPECT_EQ(intertwiner_basis({hin, hin}).size(), 1u);
  EXPECT_EQ(intertwiner_basis({hin, hin, hin}).size(), 0u);
  EXPECT_EQ(intertwiner_basis({hin, hin, hin, hin}).size(), 2u);
  EXPECT_EQ(intertwiner_basis({}).size(), 1u);
  for (int tj = 0; tj <= kMaxTwiceJ; ++tj) {
    IntertwinerLeg leg{Spin(tj), Direction::in};
    EXPECT_EQ(intertwiner_basis({leg, leg}).size(), 1u) << tj;
  }
}

TEST(Intertwiner, FourHalvesDimensionMatchesCharacterIntegral) {
  auto est = mc_expectation(
      1, [](auto g) { return cplx(std::pow(character(Spin(1), g[0]).real(), 4)); }, 1'000'000, 21);
  EXPECT_TRUE(est.agrees_with(2.0, 3.0)) << est.mean << " +- " << est.stderr();
}

TEST(Intertwiner, OrthonormalEquivariantAndComplete) {
  auto g = random_elements(20, 9);
  std::vector<std::vector<IntertwinerLeg>> cases;
  const auto in = Direction::in, out = Direction::out;
  cases.push_back({{Spin(1), in}, {Spin(1), out}});
  cases.push_back({{Spin(1), out}, {Spin(1), out}, {Spin(2), out}});
  cases.push_back({{Spin(1), in}, {Spin(1), out}, {Spin(2), in}});
  cases.push_back({{Spin(2), in}, {Spin(2), in}, {Spin(2), out}});
  cases.push_back({{Spin(1), in}, {Spin(1), in}, {Spin(1), out}, {Spin(1), out}});
  cases.push_back({{Spin(2), out}, {Spin(1), in}, {Spin(3), in}, {Spin(2), out}});
  cases.push_back({{Spin(3), in}, {Spin(3), out}, {Spin(2), out}, {Spin(2), in}});
  cases.push_back({{Spin(1), out}, {Spin(1), out}, {Spin(1), out}, {Spin(1), out}, {Spin(1), out}, {Spin(1), out}});
  for (const auto& legs : cases) {
    auto basis = intertwiner_basis(legs);
    std::vector<Spin> spins;
    std::vector<bool> dual;
    for (const auto& l : legs) {
      spins.push_back(l.spin);
      dual.push_back(l.direction == Direction::in);
    }
    EXPECT_EQ(static_cast<Eigen::Index>(basis.size()), oracle::invariant_subspace(spins, dual).cols());
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t b = 0; b < basis.size(); ++b)
        EXPECT_NEAR(std::abs(hs_inner(basis[a], basis[b]) - cplx(a == b ? 1.0 : 0.0)), 0.0, 1e-12);
      for (const auto& x : g) EXPECT_LT(equivariance_residual(basis[a], x), 1e-9);
    }
  }
}

TEST(Intertwiner, CanonicalBivalentIsEquivariant) {
  auto g = random_elements(10, 10);
  for (int tj = 1; tj <= 6; ++tj)
    for (auto d1 : {Direction::in, Direction::out})
      for (auto d2 : {Direction::in, Direction::out}) {
        auto t = canonical_bivalent({Spin(tj), d1}, {Spin(tj), d2});
        for (const auto& x : g) EXPECT_LT(equivariance_residual(t, x), 1e-10);
      }
  EXPECT_THROW(canonical_bivalent({Spin(1), Direction::in}, {Spin(2), Direction::out}), ValidationError);
}
