#include <gtest/gtest.h>

#include <cmath>

#include "geodnc/oracle.hpp"
#include "geodnc/synthesis.hpp"
#include "test_util.hpp"

using namespace geodnc;

namespace {

Synthesis chain(int n, int d, std::uint64_t seed, const std::string& set = "weak",
                double strength = 0.6) {
  return synthesis_of_circuit(fixtures::random_circuit({1, n}, d, seed, set, strength));
}

}  // namespace

TEST(Synthesis, TrivialSynthesisHasAllQubitsInN) {
  const Synthesis s = chain(6, 1, 1);
  EXPECT_TRUE(s.L.empty());
  EXPECT_TRUE(s.M.empty());
  EXPECT_EQ(s.N.size(), 6u);
  EXPECT_EQ(s.dimension(), 2);
  EXPECT_EQ(s.width(), 6);
  EXPECT_NO_THROW(check_registers(s));
}

TEST(Synthesis, SliceRegistersAndPostselection) {
  const Synthesis s = chain(8, 1, 2);
  const Slice sl{1, 3, 5};
  const SliceRegisters r = slice_registers(s, sl);
  EXPECT_EQ(r.back, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(r.slice, (std::vector<int>{3, 4}));
  EXPECT_EQ(r.front, (std::vector<int>{5, 6, 7}));
  const Synthesis p = postselect_slice(s, sl);
  EXPECT_EQ(p.M, r.slice);
  EXPECT_EQ(p.N.size(), 6u);
  EXPECT_NO_THROW(check_registers(p));
  EXPECT_THROW(slice_registers(s, {0, 0, 1}), Error);
}

TEST(Synthesis, SliceWeightOfIdentityIsOne) {
  const Synthesis s = synthesis_of_circuit(identity_circuit({1, 6}, 1));
  EXPECT_NEAR(synthesis_value_exact(slice_weight_synthesis(s, {1, 2, 4})), 1.0, 1e-15);
}

TEST(Synthesis, SliceWeightIsMarginalProbability) {
  const LatticeCircuit c = fixtures::random_circuit({1, 6}, 2, 3, "haar");
  const Synthesis s = synthesis_of_circuit(c);
  double want = 0;
  for (int x = 0; x < 64; ++x) {
    if (x >> 2 & 3) continue;  // qubits 2, 3 in the slice must be 0
    std::vector<int> bits(6);
    for (int q = 0; q < 6; ++q) bits[q] = x >> q & 1;
    want += output_probability(c, bits);
  }
  EXPECT_NEAR(synthesis_value_exact(slice_weight_synthesis(s, {1, 2, 4})), want, 1e-13);
}

TEST(Synthesis, SpectrumFromFactorMatchesDenseSpectrum) {
  const Synthesis s = chain(10, 2, 4, "haar");
  const Slice sl{1, 4, 8};
  const CutSpectrum a = cut_spectrum(s, sl, Side::B);
  const CutSpectrum b = spectrum_of(cut_state(s, sl, Side::B));
  ASSERT_EQ(a.values.size(), b.values.size());
  EXPECT_LT((a.values - b.values).norm(), 1e-12);
  const Matrix pa = a.vectors * a.values.cast<cplx>().asDiagonal() * a.vectors.adjoint();
  EXPECT_LT((pa - cut_state(s, sl, Side::B).matrix).norm(), 1e-12);
  EXPECT_NEAR(a.trace(), cut_state(s, sl, Side::B).trace(), 1e-13);
}

TEST(Synthesis, KappaOfPureAndMixedStates) {
  DensityOperator pure{{0}, Matrix::Zero(2, 2)};
  pure.matrix(0, 0) = 0.5;  // weight 1/2, rank one
  EXPECT_NEAR(kappa_of(pure, 3), 0.5, 1e-15);
  DensityOperator mixed{{0}, Matrix::Identity(2, 2) * 0.25};
  EXPECT_NEAR(kappa_of(mixed, 1), 0.25 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(kappa_of(mixed, 2), 0.25 * std::pow(2.0, 0.25), 1e-15);
  DensityOperator zero{{0}, Matrix::Zero(2, 2)};
  EXPECT_THROW(kappa_of(zero, 1), Error);
}

TEST(Synthesis, CutOperatorsByCalculus) {
  DensityOperator rho{{0, 1}, Matrix::Zero(4, 4)};
  rho.matrix(0, 0) = 0.6;
  rho.matrix(3, 3) = 0.2;
  const double k = kappa_of(rho, 2);
  CutCalculus exact;
  exact.K = 2;
  const Matrix pi = projector_of(rho, k, exact).dense();
  EXPECT_NEAR(pi(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(pi(3, 3).real(), 1.0, 1e-14);
  EXPECT_NEAR(pi(1, 1).real(), 0.0, 1e-14);
  EXPECT_LT((cut_operator(rho, k, exact).dense() - std::pow(k, 2) * pi).norm(), 1e-14);
  CutCalculus power = exact;
  power.mode = CutMode::PowerEncoding;
  const Matrix pp = projector_of(rho, k, power).dense();
  EXPECT_NEAR(pp(0, 0).real(), std::pow(0.6 / k, 4), 1e-14);
  const Matrix w = cut_operator(rho, k, power).dense();
  EXPECT_NEAR(w(3, 3).real(), 0.04, 1e-14);
}

TEST(Synthesis, AppendBlockChecksAndScalars) {
  const Synthesis s = chain(4, 1, 5);
  EXPECT_THROW(append_block(s, {0}, Matrix(2.0 * Matrix::Identity(2, 2)), "big"), Error);
  Matrix scalar(1, 1);
  scalar(0, 0) = 0.5;
  const Synthesis t = append_block(s, {}, scalar, "w");
  EXPECT_DOUBLE_EQ(t.scale, 0.25);
  EXPECT_EQ(t.gamma.num_qubits(), s.gamma.num_qubits());
  const Synthesis u = append_block(s, {1, 2}, Matrix(0.5 * Matrix::Identity(4, 4)), "half");
  EXPECT_EQ(u.gamma.num_qubits(), 5);
  EXPECT_EQ(u.M, std::vector<int>{4});
  EXPECT_EQ(u.gamma.labels[4].tag, "cut");
  EXPECT_NEAR(synthesis_value_exact(u), 0.25 * synthesis_value_exact(s), 1e-14);
}

TEST(Synthesis, LowRankAndDenseBlocksAgree) {
  const Synthesis s = chain(8, 2, 6, "haar");
  const Slice sl{1, 2, 6};
  CutCalculus calc;
  calc.mode = CutMode::PowerEncoding;
  const CutData cut = prepare_cut(s, sl, calc);
  const Synthesis lr = right_child(s, cut);
  Synthesis dense = append_block(postselect_slice(s, sl), cut.regs.front, cut.w_front.dense(), "W");
  dense.L = lr.L;
  dense.N = lr.N;
  EXPECT_NEAR(synthesis_value_exact(lr), synthesis_value_exact(dense), 1e-13);
  EXPECT_NEAR(synthesis_value_exact(lr), fixtures::value_from_unitary(lr), 1e-13);
}

// With a rank-one cut state, one cut reproduces the value exactly:
// value = A(S_L) A(S_R) / kappa^{4K+1}.
TEST(Synthesis, SingleCutIdentityForProductCut) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Synthesis s = chain(10, 1, seed, "weak", 0.9);
    const Slice sl{1, 4, 6};
    CutCalculus calc;
    const SplitResult sp = split_at_cuts(s, sl, std::nullopt, calc);
    const double got = synthesis_value_exact(sp.left) * synthesis_value_exact(sp.right) /
                       std::pow(sp.kappa_i, 4 * calc.K + 1);
    EXPECT_NEAR(got, synthesis_value_exact(s), 1e-12);
    EXPECT_EQ(sp.left.N, (std::vector<int>{0, 1, 2, 3}));
    EXPECT_EQ(sp.right.N, (std::vector<int>{6, 7, 8, 9}));
  }
}

TEST(Synthesis, MiddleChildRegisters) {
  const Synthesis s = chain(12, 1, 7);
  CutCalculus calc;
  const SplitResult sp = split_at_cuts(s, {1, 2, 4}, Slice{1, 7, 9}, calc);
  ASSERT_TRUE(sp.middle.has_value());
  EXPECT_EQ(sp.middle->N, (std::vector<int>{4, 5, 6}));
  EXPECT_NO_THROW(check_registers(*sp.middle));
  EXPECT_TRUE(sp.kappa_j.has_value());
  EXPECT_EQ(sp.right.N, (std::vector<int>{9, 10, 11}));
  EXPECT_THROW(split_at_cuts(s, {1, 7, 9}, Slice{1, 2, 4}, calc), Error);
  EXPECT_THROW(split_at_cuts(s, {1, 11, 13}, std::nullopt, calc), Error);
}

TEST(Synthesis, InsertCutProjectorPostselectsSlice) {
  const Synthesis s = chain(10, 1, 8);
  const Synthesis p = insert_cut_projector(s, {1, 4, 6}, CutCalculus{});
  EXPECT_EQ(p.N.size(), 8u);
  EXPECT_EQ(p.M.size(), 3u);  // two slice qubits and the cut ancilla
  // Pi is the support projector of rho_F, so it leaves phi unchanged.
  EXPECT_NEAR(synthesis_value_exact(p), synthesis_value_exact(postselect_slice(s, {1, 4, 6})),
              1e-12);
}

TEST(Synthesis, DimensionReduceMovesLastAxis) {
  const Synthesis s = synthesis_of_circuit(fixtures::random_circuit({2, 3, 5}, 1, 9));
  const Synthesis r = dimension_reduce(s);
  EXPECT_EQ(r.dims, (std::vector<int>{2, 3}));
  EXPECT_EQ(r.thickness, std::vector<int>{5});
  EXPECT_EQ(r.gamma.labels[7].site, (Coord{0, 1}));
  EXPECT_EQ(r.gamma.labels[7].absorbed, Coord{2});
  EXPECT_EQ(r.N, s.N);
  EXPECT_NEAR(synthesis_value_exact(r), synthesis_value_exact(s), 1e-15);
  const Synthesis rr = dimension_reduce(r);
  EXPECT_EQ(rr.gamma.labels[7].absorbed, (Coord{1, 2}));
}
