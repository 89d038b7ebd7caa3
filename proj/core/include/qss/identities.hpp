#pragma once

// Numerical checks of the algebraic identities the protocol and the attack
// rely on. Each check reports pass/fail plus a short measured detail.

#include <string>
#include <vector>

#include "qss/gates.hpp"

namespace qss {

/// Fraud-carrier pattern Bell(a, b̃) ⊗ Bell(b, c) over the register
/// (a, bt, b, c).
StateVector fraud_pattern(BellKind ab, BellKind bc);

/// Single-qubit operators applied at one maintenance step.
struct PatternStep {
  UnitaryMatrix alice;
  UnitaryMatrix kept;
  UnitaryMatrix bob;
  UnitaryMatrix charlie;
};

StateVector apply_step(StateVector pattern, const PatternStep& step);

/// Forward step for the θ variant: H(θa) on a, H(θc) on c, Bob's choice.
PatternStep forward_step_u(double theta_a, double theta_c);
PatternStep forward_step_v(double theta_a, double theta_c);
/// Inverse-direction step: every operator of the forward step inverted.
PatternStep inverse_step(const PatternStep& forward);

/// Best fidelity of `state` with any Ψ±⊗Ψ± product, and the signs achieving it.
struct PsiMatch {
  BellKind ab;
  BellKind bc;
  double fidelity;
};
PsiMatch best_psi_pattern(const StateVector& pattern);

struct IdentityCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every identity at the given angles. The angles are used as given, so
/// a triple that violates the sum rule acts as a negative control.
std::vector<IdentityCheck> run_identity_suite(double theta_a, double theta_b, double theta_c);

}  // namespace qss
