#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tbi/two_level.hpp"

using namespace tbi;

namespace {

constexpr double kPi = 3.14159265358979323846;

RabiParams unit_rabi() { return RabiParams::from_omega(1.0); }

TwoLevelState random_unit_state(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  TwoLevelState s{{gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)}};
  const double norm = std::sqrt(s.norm_sq());
  s.c_plus /= norm;
  s.c_minus /= norm;
  return s;
}

} // namespace

TEST_CASE("prepared states are unit norm") {
  CHECK(TwoLevelState::plus().norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(TwoLevelState::minus().norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(TwoLevelState::prepared(-1).c_minus.real() == 1.0);
}

TEST_CASE("rabi params hold period * omega = 2 pi") {
  const auto p = RabiParams::from_omega(3.7e9);
  CHECK(p.period * p.omega == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(std::isinf(RabiParams::from_omega(0.0).period));
  CHECK_THROWS_AS(RabiParams::from_omega(-1.0), std::invalid_argument);
}

TEST_CASE("evolve: identity at dt = 0") {
  const auto out = evolve(TwoLevelState::plus(), unit_rabi(), 0.0);
  CHECK(out.c_plus == std::complex<double>{1.0, 0.0});
  CHECK(out.c_minus == std::complex<double>{0.0, 0.0});
}

TEST_CASE("evolve: quarter and eighth turns") {
  const auto quarter = evolve(TwoLevelState::plus(), unit_rabi(), kPi / 2.0);
  CHECK(std::norm(quarter.c_minus) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::norm(quarter.c_plus) == doctest::Approx(0.0).epsilon(1e-12));

  const auto eighth = evolve(TwoLevelState::plus(), unit_rabi(), kPi / 4.0);
  CHECK(std::norm(eighth.c_plus) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::norm(eighth.c_minus) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evolve: negative dt rejected") {
  CHECK_THROWS_AS(evolve(TwoLevelState::plus(), unit_rabi(), -1e-9), std::invalid_argument);
}

TEST_CASE("evolve preserves norm over random states and times") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> time(0.0, 100.0);
  const auto params = unit_rabi();
  for (int i = 0; i < 10000; ++i) {
    const auto s = random_unit_state(rng);
    const auto out = evolve(s, params, time(rng));
    CHECK(std::abs(out.norm_sq() - 1.0) < 1e-12);
  }
}

TEST_CASE("apply_projector on eigenstates") {
  const auto [kept, p_kept] = apply_projector(TwoLevelState::plus(), spin_outcome(+1));
  CHECK(p_kept == 1.0);
  CHECK(kept.c_plus == std::complex<double>{1.0, 0.0});

  const auto [gone, p_gone] = apply_projector(TwoLevelState::plus(), spin_outcome(-1));
  CHECK(p_gone == 0.0);
  CHECK(gone.norm_sq() == 0.0);
}

TEST_CASE("apply_projector keeps the selected branch unnormalized") {
  const TwoLevelState s{{0.6, 0.0}, {0.0, 0.8}};
  const auto [filtered, prob] = apply_projector(s, spin_outcome(-1));
  CHECK(filtered.c_plus == std::complex<double>{0.0, 0.0});
  CHECK(filtered.c_minus == std::complex<double>{0.0, 0.8});
  CHECK(prob == doctest::Approx(0.64).epsilon(1e-12));
}

TEST_CASE("apply_projector is idempotent") {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_unit_state(rng);
    const auto outcome = spin_outcome(i % 2 == 0 ? +1 : -1);
    const auto [once, p1] = apply_projector(s, outcome);
    if (once.norm_sq() == 0.0) {
      CHECK_THROWS_AS(apply_projector(once, outcome), std::domain_error);
      continue;
    }
    const auto [twice, p2] = apply_projector(once, outcome);
    CHECK(p2 == 1.0);
    CHECK(twice.c_plus == once.c_plus);
    CHECK(twice.c_minus == once.c_minus);
    (void)p1;
  }
}

TEST_CASE("apply_projector rejects the zero state") {
  CHECK_THROWS_AS(apply_projector(TwoLevelState{}, spin_outcome(+1)), std::domain_error);
}

TEST_CASE("projector completeness: branch probabilities sum to one") {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_unit_state(rng);
    const auto p_plus = apply_projector(s, spin_outcome(+1)).second;
    const auto p_minus = apply_projector(s, spin_outcome(-1)).second;
    CHECK(std::abs(p_plus + p_minus - 1.0) < 1e-12);
  }
}

TEST_CASE("pair_probability closed values") {
  const auto params = unit_rabi();
  CHECK(pair_probability(spin_outcome(+1), 0.0, spin_outcome(+1), params) == 1.0);
  CHECK(pair_probability(spin_outcome(+1), kPi / 4.0, spin_outcome(-1), params) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pair_probability(spin_outcome(+1), kPi / 3.0, spin_outcome(-1), params) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("pair_probability equals sin^2 for the flip branch") {
  const auto params = unit_rabi();
  for (int i = 0; i <= 64; ++i) {
    const double t = i * kTwoPi / 64.0;
    const double s = std::sin(t);
    CHECK(std::abs(pair_probability(spin_outcome(+1), t, spin_outcome(-1), params) - s * s) <
          1e-10);
  }
}

TEST_CASE("pair_probability rejects mismatched magnitudes") {
  CHECK_THROWS_AS(pair_probability(spin_outcome(+1), 1.0, flux_outcome(-1), unit_rabi()),
                  std::invalid_argument);
}

TEST_CASE("sequential joint closed values") {
  const auto params = unit_rabi();
  CHECK(sequential_joint_probability(spin_outcome(+1), kPi / 4.0, spin_outcome(+1), kPi / 4.0,
                                     spin_outcome(-1), params) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sequential_joint_probability(spin_outcome(+1), kPi / 3.0, spin_outcome(-1), kPi / 3.0,
                                     spin_outcome(+1), params) ==
        doctest::Approx(0.5625).epsilon(1e-12));
}

TEST_CASE("immediate remeasurement repeats the intermediate result") {
  const auto params = unit_rabi();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> time(0.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double t_ab = time(rng);
    for (const int s : {+1, -1}) {
      const double joint = sequential_joint_probability(
          spin_outcome(+1), t_ab, spin_outcome(s), 0.0, spin_outcome(s), params);
      const double pair = pair_probability(spin_outcome(+1), t_ab, spin_outcome(s), params);
      CHECK(std::abs(joint - pair) < 1e-12);
    }
  }
}

TEST_CASE("marginal law over a 64x64 grid") {
  const auto params = unit_rabi();
  const int n = 64;
  for (int i = 0; i < n; ++i) {
    const double t_ab = (i + 0.5) * kTwoPi / n;
    for (int j = 0; j < n; ++j) {
      const double t_bc = (j + 0.5) * kTwoPi / n;
      for (const int mid : {+1, -1}) {
        double sum = 0.0;
        for (const int fin : {+1, -1}) {
          sum += sequential_joint_probability(spin_outcome(+1), t_ab, spin_outcome(mid), t_bc,
                                              spin_outcome(fin), params);
        }
        const double pair = pair_probability(spin_outcome(+1), t_ab, spin_outcome(mid), params);
        CHECK(std::abs(sum - pair) < 1e-10);
      }
    }
  }
}

TEST_CASE("effective uncertainty reductions") {
  const auto params = unit_rabi();
  const auto x = spin_outcome(+1).magnitude;

  // ab, prep +, assigned mid -, angle pi/4: 2|X| sqrt(cos^2) = 1.41421 |X|
  CHECK(effective_uncertainty(UncertaintyKind::ab, spin_outcome(+1), spin_outcome(-1),
                              spin_outcome(-1), kPi / 4.0, 0.0, params) ==
        doctest::Approx(1.41421 * x).epsilon(1e-5));

  // ac, prep +, assigned fin -, total angle pi/2: p^{ac}_{++} = 0
  CHECK(effective_uncertainty(UncertaintyKind::ac, spin_outcome(+1), spin_outcome(+1),
                              spin_outcome(-1), kPi / 4.0, kPi / 4.0, params) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // bc, prep +, mid +, assigned fin -, both angles pi/4: 2|X| sqrt(p^{bc}_{+++})
  CHECK(effective_uncertainty(UncertaintyKind::bc, spin_outcome(+1), spin_outcome(+1),
                              spin_outcome(-1), kPi / 4.0, kPi / 4.0, params) ==
        doctest::Approx(1.0 * x).epsilon(1e-12));
}

TEST_CASE("effective uncertainty stays within [0, 2|X|]") {
  const auto params = unit_rabi();
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> time(0.0, 30.0);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const auto kind = static_cast<UncertaintyKind>(i % 3);
    const auto prep = spin_outcome(coin(rng) ? +1 : -1);
    const auto mid = spin_outcome(coin(rng) ? +1 : -1);
    const auto fin = spin_outcome(coin(rng) ? +1 : -1);
    const double dx = effective_uncertainty(kind, prep, mid, fin, time(rng), time(rng), params);
    CHECK(dx >= 0.0);
    CHECK(dx <= 2.0 * prep.magnitude + 1e-12);
  }
}

TEST_CASE("spin closed form at the named angles") {
  const auto params = unit_rabi();

  auto table = spin_closed_form(kPi / 4.0, kPi / 4.0, params);
  CHECK(table.ab(+1, -1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(table.ac(+1, -1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.bc(+1, +1, -1) == doctest::Approx(0.25).epsilon(1e-12));

  table = spin_closed_form(0.0, 0.0, params);
  CHECK(table.ab(+1, -1) == 0.0);
  CHECK(table.ac(+1, -1) == 0.0);
  CHECK(table.ab(+1, +1) == 1.0);
  CHECK(table.ac(-1, -1) == 1.0);

  table = spin_closed_form(kPi / 3.0, kPi / 3.0, params);
  CHECK(table.ab(+1, -1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(table.ac(+1, -1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(table.bc(+1, +1, -1) == doctest::Approx(0.1875).epsilon(1e-12));
}

TEST_CASE("propagation matches the closed form on a 64x64 grid") {
  const auto params = RabiParams::from_omega(2.3);
  const int n = 64;
  const double tau = params.period;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t_ab = (i + 0.5) * tau / n;
    for (int j = 0; j < n; ++j) {
      const double t_bc = (j + 0.5) * tau / n;
      const auto prop = correlation_table(t_ab, t_bc, params);
      const auto closed = spin_closed_form(t_ab, t_bc, params);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          worst = std::max(worst, std::abs(prop.p_ab[a][b] - closed.p_ab[a][b]));
          worst = std::max(worst, std::abs(prop.p_ac[a][b] - closed.p_ac[a][b]));
          for (int c = 0; c < 2; ++c) {
            worst = std::max(worst, std::abs(prop.p_bc[a][b][c] - closed.p_bc[a][b][c]));
          }
        }
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("correlation table rows are normalized and marginals consistent") {
  const auto params = RabiParams::from_omega(0.7);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> time(0.0, 40.0);
  for (int i = 0; i < 300; ++i) {
    const auto table = correlation_table(time(rng), time(rng), params);
    for (int a = 0; a < 2; ++a) {
      CHECK(std::abs(table.p_ab[a][0] + table.p_ab[a][1] - 1.0) < 1e-10);
      CHECK(std::abs(table.p_ac[a][0] + table.p_ac[a][1] - 1.0) < 1e-10);
      for (int b = 0; b < 2; ++b) {
        CHECK(std::abs(table.p_bc[a][b][0] + table.p_bc[a][b][1] - table.p_ab[a][b]) < 1e-10);
        for (int c = 0; c < 2; ++c) {
          CHECK(table.p_bc[a][b][c] >= 0.0);
          CHECK(table.p_bc[a][b][c] <= 1.0 + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("argument folding keeps large phases accurate") {
  const auto params = unit_rabi();
  const double t = 1e9 * kTwoPi + kPi / 4.0;
  CHECK(std::abs(pair_probability(spin_outcome(+1), t, spin_outcome(-1), params) - 0.5) < 1e-5);
  CHECK(fold_angle(-0.5) == doctest::Approx(kTwoPi - 0.5).epsilon(1e-12));
  CHECK(fold_angle(kTwoPi) == 0.0);
}
