// Copyright 2026 The projens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "projens/hilbert.hpp"

namespace projens {
namespace {

// Brute-force oracle: walk all 2^N strings.
std::size_t brute_dim(int n, bool blockade, Sector sector) {
  std::size_t count = 0;
  for (std::uint64_t z = 0; z < (1ULL << n); ++z) {
    if (blockade && (z & (z >> 1))) continue;
    std::string s;
    for (int i = 0; i < n; ++i) s += ((z >> (n - 1 - i)) & 1) ? '1' : '0';
    std::string r(s.rbegin(), s.rend());
    if (sector == Sector::kAll) ++count;
    else if (s < r) ++count;
    else if (s == r && sector == Sector::kEven) ++count;
  }
  return count;
}

TEST(Basis, Dimensions) {
  EXPECT_EQ(build_basis(10, Constraint::kBlockade).dim(), 144u);
  EXPECT_EQ(build_basis(1, Constraint::kFull).dim(), 2u);
  EXPECT_EQ(build_basis(10, Constraint::kBlockade, Sector::kEven).dim(), 76u);
  EXPECT_EQ(count_blockade_palindromes(10), 8u);
}

TEST(Basis, MatchesBruteForce) {
  for (int n = 1; n <= 12; ++n) {
    for (auto c : {Constraint::kFull, Constraint::kBlockade}) {
      for (auto s : {Sector::kAll, Sector::kEven, Sector::kOdd}) {
        EXPECT_EQ(build_basis(n, c, s).dim(), brute_dim(n, c == Constraint::kBlockade, s))
            << n << " " << to_string(c) << " " << to_string(s);
      }
      EXPECT_EQ(build_basis(n, c, Sector::kEven).dim() + build_basis(n, c, Sector::kOdd).dim(),
                build_basis(n, c).dim());
    }
  }
}

TEST(Basis, FibonacciRecurrence) {
  std::size_t a = 2, b = 3;
  EXPECT_EQ(build_basis(1, Constraint::kBlockade).dim(), a);
  EXPECT_EQ(build_basis(2, Constraint::kBlockade).dim(), b);
  for (int n = 3; n <= 32; ++n) {
    const std::size_t c = a + b;
    EXPECT_EQ(build_basis(n, Constraint::kBlockade).dim(), c) << n;
    a = b;
    b = c;
  }
}

TEST(Basis, RangeErrors) {
  EXPECT_THROW(build_basis(0, Constraint::kFull), ConfigError);
  EXPECT_THROW(build_basis(25, Constraint::kFull), ConfigError);
  EXPECT_THROW(build_basis(33, Constraint::kBlockade), ConfigError);
  EXPECT_NO_THROW(build_basis(24, Constraint::kFull, Sector::kEven));
}

TEST(Basis, RoundTripAndOrdering) {
  for (int n = 1; n <= 14; ++n) {
    for (auto c : {Constraint::kFull, Constraint::kBlockade}) {
      for (auto s : {Sector::kAll, Sector::kEven, Sector::kOdd}) {
        const BasisMap b(n, c, s);
        for (std::size_t i = 0; i < b.dim(); ++i) {
          ASSERT_EQ(b.index(b.bitstring(i)), i);
          if (i > 0) ASSERT_LT(b.bitstring(i - 1).str(), b.bitstring(i).str());
        }
      }
    }
  }
}

TEST(Basis, MirrorSharesIndex) {
  const BasisMap b(9, Constraint::kBlockade, Sector::kEven);
  for (std::uint64_t z = 0; z < (1ULL << 9); ++z) {
    if (!blockade_legal(z)) {
      EXPECT_FALSE(b.contains(z));
      continue;
    }
    EXPECT_EQ(b.find(z), b.find(reverse_sites(z, 9)));
  }
}

TEST(Basis, SectorProjectorsAreComplementary) {
  for (int n = 2; n <= 10; ++n) {
    const BasisMap all(n, Constraint::kBlockade);
    const CMatrix pe = CMatrix(sector_isometry(BasisMap(n, Constraint::kBlockade, Sector::kEven), all));
    const CMatrix po = CMatrix(sector_isometry(BasisMap(n, Constraint::kBlockade, Sector::kOdd), all));
    const CMatrix ee = pe * pe.adjoint();
    const CMatrix oo = po * po.adjoint();
    const auto d = static_cast<Eigen::Index>(all.dim());
    EXPECT_LT((ee * ee - ee).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((oo * oo - oo).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((ee * oo).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((ee + oo - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
    const CMatrix q = CMatrix(reversal_operator(all));
    EXPECT_LT((q * pe - pe).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((q * po + po).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Bitstring, ParseAndPrint) {
  const auto z = Bitstring::parse("1010010010");
  EXPECT_EQ(z.str(), "1010010010");
  EXPECT_TRUE(z.at(1));
  EXPECT_FALSE(z.at(2));
  EXPECT_EQ(z.count_ones(), 4);
  EXPECT_THROW(Bitstring::parse("10a"), InputDataError);
}

TEST(Bitstring, ParityPartner) {
  EXPECT_EQ(parity_partner(Bitstring::parse("100")).str(), "001");
  EXPECT_EQ(parity_partner(Bitstring::parse("010")).str(), "010");
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 32);
    const Bitstring z(rng() & ((1ULL << n) - 1), n);
    EXPECT_EQ(parity_partner(parity_partner(z)), z);
  }
}

TEST(Bipartition, SubsystemDims) {
  EXPECT_EQ(subsystem_dim(Bipartition::contiguous(10, 5, 2, true), Constraint::kBlockade), 3u);
  EXPECT_EQ(subsystem_dim(Bipartition::contiguous(10, 5, 1), Constraint::kBlockade), 2u);
  EXPECT_EQ(subsystem_dim(Bipartition::contiguous(10, 4, 3, true), Constraint::kBlockade), 5u);
  EXPECT_EQ(subsystem_dim(Bipartition::contiguous(10, 4, 3), Constraint::kFull), 8u);
  // Discontiguous A: sites 2 and 4 are not neighbours, so all four z_A survive.
  EXPECT_EQ(subsystem_dim(Bipartition(6, {2, 4}, true), Constraint::kBlockade), 4u);
}

TEST(Bipartition, Split) {
  const Bipartition p(10, {1, 2});
  const auto [za, zb] = split_bitstring(Bitstring::parse("1010010010"), p);
  EXPECT_EQ(za.str(), "10");
  EXPECT_EQ(zb.str(), "10010010");
  const auto [a2, b2] = split_bitstring(Bitstring::parse("0000"), Bipartition(4, {2, 4}));
  EXPECT_EQ(a2.str(), "00");
  EXPECT_EQ(b2.str(), "00");
}

TEST(Bipartition, SplitJoinRoundTrip) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + static_cast<int>(rng() % 20);
    std::vector<int> a;
    for (int s = 1; s <= n; ++s) {
      if (rng() % 3 == 0) a.push_back(s);
    }
    if (a.empty() || static_cast<int>(a.size()) == n) a = {1};
    const Bipartition p(n, a);
    const Bitstring z(rng() & ((1ULL << n) - 1), n);
    const auto [za, zb] = p.split(z);
    ASSERT_EQ(p.join(za, zb), z);
  }
}

TEST(Bipartition, BoundaryRule) {
  const Bipartition p = Bipartition::contiguous(8, 4, 2, true);
  const std::vector<int> expected{3, 6};
  EXPECT_TRUE(std::equal(p.boundary_sites().begin(), p.boundary_sites().end(), expected.begin(), expected.end()));
  EXPECT_TRUE(p.admissible(Bitstring::parse("10011001").bits()));
  EXPECT_FALSE(p.admissible(Bitstring::parse("00100000").bits()));
  EXPECT_FALSE(p.admissible(Bitstring::parse("00000100").bits()));
}

TEST(StateVector, NormEnforced) {
  const auto b = make_basis(2, Constraint::kFull);
  EXPECT_THROW(StateVector(b, CVector::Ones(4)), NumericalError);
  const auto s = StateVector::normalized(b, CVector::Ones(4));
  EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
  const auto z = StateVector::zeros_state(b);
  EXPECT_EQ(z.amplitude(Bitstring::parse("00")), cplx(1.0));
}

}  // namespace
}  // namespace projens
