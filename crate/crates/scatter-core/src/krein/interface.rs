//! Interface parameters `θ = (θ1, θ2)` and the matrices `A_θ`, `B_θ` with
//! `A_θ Γ0 u = B_θ Γ1 u` on the domain of the perturbed operator.

use serde::{Deserialize, Serialize};

use super::boundary::OneSidedTraces;
use crate::numerics::linalg::CMatrix4;
use crate::C64;

/// `θ1` scales values, `θ2` scales derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThetaPair {
    pub theta1: C64,
    pub theta2: C64,
}

impl ThetaPair {
    pub fn new(theta1: C64, theta2: C64) -> Self {
        Self { theta1, theta2 }
    }

    pub fn real(theta1: f64, theta2: f64) -> Self {
        Self::new(C64::new(theta1, 0.0), C64::new(theta2, 0.0))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.theta1 == C64::new(0.0, 0.0) && self.theta2 == C64::new(0.0, 0.0)
    }

    /// `|θ1| + |θ2|`.
    pub fn size(&self) -> f64 {
        self.theta1.norm() + self.theta2.norm()
    }

    /// Parameters of the adjoint operator, `(-θ2*, -θ1*)`.
    pub fn adjoint_partner(&self) -> Self {
        Self::new(-self.theta2.conj(), -self.theta1.conj())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.theta1 * s, self.theta2 * s)
    }
}

/// `1 + e^{θ/2}`.
pub fn alpha(theta: C64) -> C64 {
    1.0 + (theta / 2.0).exp()
}

/// `1 - e^{θ/2}`.
pub fn beta(theta: C64) -> C64 {
    1.0 - (theta / 2.0).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceMatrices {
    pub theta: ThetaPair,
    pub a: CMatrix4,
    pub b: CMatrix4,
    /// Diagonal of `A`: `α(θ2), α(θ1), α(-θ2), α(-θ1)`.
    pub alpha: [C64; 4],
    /// `β(θ2), β(θ1), β(-θ2), β(-θ1)`.
    pub beta: [C64; 4],
}

pub fn interface_matrices(theta: ThetaPair) -> InterfaceMatrices {
    let (t1, t2) = (theta.theta1, theta.theta2);
    let al = [alpha(t2), alpha(t1), alpha(-t2), alpha(-t1)];
    let be = [beta(t2), beta(t1), beta(-t2), beta(-t1)];
    let a = CMatrix4::from_diagonal(&al.into());
    let mut b = CMatrix4::zeros();
    b[(0, 1)] = 2.0 * be[0];
    b[(1, 0)] = -2.0 * be[1];
    b[(2, 3)] = 2.0 * be[2];
    b[(3, 2)] = -2.0 * be[3];
    InterfaceMatrices { theta, a, b, alpha: al, beta: be }
}

/// Residuals of the four interface conditions, plus the literal printed form of the
/// derivative condition at `a` (which mixes `u'(a-)` with `u(a+)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceResiduals {
    pub b_value: f64,
    pub b_derivative: f64,
    pub a_value: f64,
    pub a_derivative: f64,
    pub a_derivative_literal: f64,
}

impl InterfaceResiduals {
    /// Largest of the four enforced conditions.
    pub fn max(&self) -> f64 {
        self.b_value.max(self.b_derivative).max(self.a_value).max(self.a_derivative)
    }
}

/// `u(b-) = e^{-θ1/2} u(b+)`, `u'(b-) = e^{-θ2/2} u'(b+)`,
/// `u(a+) = e^{-θ1/2} u(a-)`, `u'(a+) = e^{-θ2/2} u'(a-)`.
pub fn interface_residuals(t: &OneSidedTraces, theta: ThetaPair) -> InterfaceResiduals {
    let s1 = (-theta.theta1 / 2.0).exp();
    let s2 = (-theta.theta2 / 2.0).exp();
    InterfaceResiduals {
        b_value: (t.b_minus.0 - s1 * t.b_plus.0).norm(),
        b_derivative: (t.b_minus.1 - s2 * t.b_plus.1).norm(),
        a_value: (t.a_plus.0 - s1 * t.a_minus.0).norm(),
        a_derivative: (t.a_plus.1 - s2 * t.a_minus.1).norm(),
        a_derivative_literal: (t.a_plus.0 - s2 * t.a_minus.1).norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krein::boundary::BoundaryData;
    use crate::I;

    #[test]
    fn identity_case() {
        let m = interface_matrices(ThetaPair::zero());
        assert_eq!(m.a, CMatrix4::identity() * C64::new(2.0, 0.0));
        assert_eq!(m.b, CMatrix4::zeros());
    }

    #[test]
    fn log_two_slot() {
        let m = interface_matrices(ThetaPair::real(2.0 * 2f64.ln(), 0.0));
        assert!((m.alpha[1] - 3.0).norm() < 1e-15);
        assert!((m.beta[1] + 1.0).norm() < 1e-15);
        let m = interface_matrices(ThetaPair::new(I * std::f64::consts::PI, I * std::f64::consts::PI));
        assert!((m.alpha[0] - (1.0 + I)).norm() < 1e-15);
        assert!((m.alpha[1] - (1.0 + I)).norm() < 1e-15);
    }

    #[test]
    fn compliant_traces_satisfy_matrix_relation() {
        let theta = ThetaPair::new(C64::new(0.3, -0.2), C64::new(-0.1, 0.4));
        let s1 = (-theta.theta1 / 2.0).exp();
        let s2 = (-theta.theta2 / 2.0).exp();
        let (va, da) = (C64::new(0.7, 0.1), C64::new(-0.2, 0.5));
        let (vb, db) = (C64::new(1.1, -0.3), C64::new(0.4, 0.9));
        let t = OneSidedTraces {
            a_minus: (va, da),
            a_plus: (s1 * va, s2 * da),
            b_minus: (s1 * vb, s2 * db),
            b_plus: (vb, db),
        };
        assert!(interface_residuals(&t, theta).max() < 1e-15);
        let d = BoundaryData::from_traces(&t);
        let m = interface_matrices(theta);
        assert!((m.a * d.gamma0 - m.b * d.gamma1).norm() < 1e-14);
    }

    #[test]
    fn adjoint_partner_is_involution() {
        let t = ThetaPair::new(C64::new(0.03, 0.0), C64::new(0.0, 0.01));
        assert_eq!(t.adjoint_partner().adjoint_partner(), t);
    }
}
