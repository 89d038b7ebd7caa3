#include "qss/identities.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qss/adversary.hpp"
#include "qss/protocol.hpp"

namespace qss {

namespace {

constexpr double kFidelityTolerance = 1e-10;

const std::array<Label, 4> kPatternLabels{labels::kAlice, labels::kBobKept, labels::kBob, labels::kCharlie};
const std::array<Label, 3> kCarrierLabels{labels::kAlice, labels::kBob, labels::kCharlie};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

StateVector apply_triple(StateVector s, const UnitaryMatrix& a, const UnitaryMatrix& b, const UnitaryMatrix& c) {
  s.apply(a, {kCarrierLabels[0]});
  s.apply(b, {kCarrierLabels[1]});
  s.apply(c, {kCarrierLabels[2]});
  return s;
}

IdentityCheck fidelity_check(std::string name, double f) {
  return {std::move(name), f >= 1.0 - kFidelityTolerance, "1-F = " + fmt(1.0 - f)};
}

}  // namespace

StateVector fraud_pattern(BellKind ab, BellKind bc) {
  return make_bell(ab, {kPatternLabels[0], kPatternLabels[1]}).tensor(make_bell(bc, {kPatternLabels[2], kPatternLabels[3]}));
}

StateVector apply_step(StateVector pattern, const PatternStep& step) {
  pattern.apply(step.alice, {labels::kAlice});
  pattern.apply(step.kept, {labels::kBobKept});
  pattern.apply(step.bob, {labels::kBob});
  pattern.apply(step.charlie, {labels::kCharlie});
  return pattern;
}

PatternStep forward_step_u(double theta_a, double theta_c) {
  return {gates::h_theta(theta_a), gates::h_theta(-theta_a), gates::h_theta(-theta_c), gates::h_theta(theta_c)};
}

PatternStep forward_step_v(double theta_a, double theta_c) {
  return {gates::h_theta(theta_a), gates::h_theta(theta_a).transpose(), gates::h_theta(theta_c).transpose(),
          gates::h_theta(theta_c)};
}

PatternStep inverse_step(const PatternStep& f) {
  return {f.alice.adjoint(), f.kept.adjoint(), f.bob.adjoint(), f.charlie.adjoint()};
}

PsiMatch best_psi_pattern(const StateVector& pattern) {
  PsiMatch best{BellKind::PsiPlus, BellKind::PsiPlus, -1.0};
  for (BellKind ab : {BellKind::PsiPlus, BellKind::PsiMinus}) {
    for (BellKind bc : {BellKind::PsiPlus, BellKind::PsiMinus}) {
      const double f = fidelity(fraud_pattern(ab, bc), pattern);
      if (f > best.fidelity) best = {ab, bc, f};
    }
  }
  return best;
}

std::vector<IdentityCheck> run_identity_suite(double ta, double tb, double tc) {
  std::vector<IdentityCheck> out;
  const auto ghz = make_carrier(CarrierKind::GHZ, kCarrierLabels);
  const auto even = make_carrier(CarrierKind::EvenParity, kCarrierLabels);
  const auto h = gates::hadamard();

  out.push_back(fidelity_check("toggle: H^3 GHZ = E", fidelity(apply_triple(ghz, h, h, h), even)));
  out.push_back(fidelity_check("toggle: H^3 E = GHZ", fidelity(apply_triple(even, h, h, h), ghz)));

  const double residual = angle_sum_residual(ta, tb, tc);
  {
    auto c = fidelity_check("theta toggle: H(ta)H(tb)H(tc) GHZ = E",
                            fidelity(apply_triple(ghz, gates::h_theta(ta), gates::h_theta(tb), gates::h_theta(tc)), even));
    c.detail += ", angle sum residual " + fmt(residual);
    out.push_back(std::move(c));
  }
  out.push_back(fidelity_check(
      "theta toggle: inverse triple E = GHZ",
      fidelity(apply_triple(even, gates::h_theta_inverse(ta), gates::h_theta_inverse(tb), gates::h_theta_inverse(tc)),
               ghz)));

  {
    IdentityCheck c{"hardened angles", true, "all angles clear of {0, pi}"};
    try {
      ThetaTriple::make(ta, tb, tc, 1e-9).validate_hardened();
    } catch (const std::invalid_argument& e) {
      c.passed = false;
      c.detail = e.what();
    }
    out.push_back(std::move(c));
  }

  // Splitting maps.
  try {
    const SplitUnitary su = synthesize_split_unitary();
    out.push_back({"split: U_b12 unitary", su.unitarity_defect < 1e-10, "defect " + fmt(su.unitarity_defect)});
    out.push_back({"split: q2=0 -> phi+ (a,bt) x phi+ (b,c)", su.residuals[0] < 1e-8, "residual " + fmt(su.residuals[0])});
    out.push_back({"split: q2=1 -> psi+ (a,bt) x psi+ (b,c)", su.residuals[1] < 1e-8, "residual " + fmt(su.residuals[1])});

    const std::array<Label, 3> bob_side{labels::kBob, labels::kToBob, labels::kToCharlie};
    const auto s0 = apply_unitary(split_input_state(0), su.matrix, bob_side);
    const auto s1 = apply_unitary(split_input_state(1), su.matrix, bob_side);
    const double td = trace_distance(reduced_density(s0, bob_side), reduced_density(s1, bob_side));
    out.push_back({"split: Bob's qubits independent of q2", td < 1e-12, "trace distance " + fmt(td)});
  } catch (const SynthesisError& e) {
    out.push_back({"split: synthesis", false, e.what()});
  }

  // Plain maintenance closure under H on all four qubits.
  {
    const PatternStep plain{h, h, h, h};
    auto s = fraud_pattern(BellKind::PhiPlus, BellKind::PhiPlus);
    auto t = fraud_pattern(BellKind::PhiMinus, BellKind::PhiMinus);
    double worst = 1.0;
    for (int step = 0; step < 10; ++step) {
      s = apply_step(std::move(s), plain);
      t = apply_step(std::move(t), plain);
      worst = std::min(worst, fidelity(s, fraud_pattern(BellKind::PhiPlus, BellKind::PhiPlus)));
      const BellKind k = step % 2 == 0 ? BellKind::PsiPlus : BellKind::PhiMinus;
      worst = std::min(worst, fidelity(t, fraud_pattern(k, k)));
    }
    out.push_back(fidelity_check("plain maintenance: patterns closed over 10 toggles", worst));
  }

  // Theta maintenance at (ta, tc).
  const auto phi_pp = fraud_pattern(BellKind::PhiPlus, BellKind::PhiPlus);
  const auto phi_mm = fraud_pattern(BellKind::PhiMinus, BellKind::PhiMinus);
  const PatternStep u = forward_step_u(ta, tc);
  const PatternStep v = forward_step_v(ta, tc);
  out.push_back(fidelity_check("maintenance: U keeps phi+ x phi+", fidelity(apply_step(phi_pp, u), phi_pp)));
  out.push_back(fidelity_check("maintenance (inverse direction): U^-1 keeps phi+ x phi+",
                               fidelity(apply_step(phi_pp, inverse_step(u)), phi_pp)));
  {
    const PsiMatch m = best_psi_pattern(apply_step(phi_mm, v));
    out.push_back({"maintenance: V maps phi- x phi- to a psi pattern", m.fidelity >= 1.0 - kFidelityTolerance,
                   "best " + std::string(to_string(m.ab)) + " x " + std::string(to_string(m.bc)) + ", 1-F = " +
                       fmt(1.0 - m.fidelity)});
  }

  // Transpose degeneracy.
  {
    const double d0 = transpose_identity_defect(0.0);
    const double dpi = transpose_identity_defect(std::numbers::pi);
    out.push_back({"transpose identity holds at 0 and pi", d0 < 1e-12 && dpi < 1e-12,
                   "defects " + fmt(d0) + ", " + fmt(dpi)});
    const double da = transpose_identity_defect(ta);
    const double dc = transpose_identity_defect(tc);
    out.push_back({"transpose identity fails at theta_a and theta_c", da > 1e-3 && dc > 1e-3,
                   "defects " + fmt(da) + ", " + fmt(dc)});
  }
  return out;
}

}  // namespace qss
