//! The decomposition-identity oracle suite.
//!
//! Every rewrite rule and every frontend lowering template is checked for
//! unitary equality (up to global phase) against the dense oracle at the
//! rule tolerance. The `check-rules` CLI command and the acceptance tests
//! both run this list; a red entry here means the rule catalog is wrong and
//! nothing downstream can be trusted.

use num_complex::Complex64;
use smallvec::smallvec;

use crate::angle::Angle;
use crate::gate::{Gate, GateId, GateKind};
use crate::native::{self, Rule};
use crate::oracle::{equal_up_to_global_phase, specs_unitary, Unitary, RULE_TOL};

#[derive(Clone, Debug)]
pub struct RuleCheck {
    pub name: String,
    pub passed: bool,
}

fn gate(kind: GateKind, qubits: &[usize], params: &[f64]) -> Gate {
    Gate {
        id: GateId(0),
        kind,
        qubits: qubits.into(),
        params: params.iter().map(|&v| Angle::from_pi(v)).collect(),
    }
}

fn rule_holds(rule: Rule, g: &Gate, n: usize) -> bool {
    let rhs = match rule.apply(g) {
        Some(rhs) => rhs,
        None => return false,
    };
    let lhs = specs_unitary(n, &[g.spec()]);
    let out = specs_unitary(n, &rhs);
    equal_up_to_global_phase(&lhs, &out, RULE_TOL).unwrap_or(false)
}

/// Runs the whole identity suite. All matrices are at most 8x8.
pub fn verify_all_rules() -> Vec<RuleCheck> {
    let mut checks = Vec::new();
    let mut push = |name: String, passed: bool| checks.push(RuleCheck { name, passed });

    // CRy macro: identity holds for arbitrary angles, not just the
    // multiples of pi the pass is allowed to use
    for theta in [0.5, 1.0, 1.5, 0.3127] {
        let g = gate(GateKind::Cry, &[0, 1], &[theta]);
        let rhs = native::cry_macro(0, 1, Angle::from_pi(theta));
        let lhs = specs_unitary(2, &[g.spec()]);
        let out = specs_unitary(2, &rhs);
        push(
            format!("cry_macro theta={theta}pi"),
            equal_up_to_global_phase(&lhs, &out, RULE_TOL).unwrap_or(false),
        );
    }
    // the 2pi-rotation corner: CRy(2pi) = Z on the control
    {
        let rhs = native::cry_macro(0, 1, Angle::PI);
        let mut rhs_fixed = rhs;
        // instantiate Eq-style with theta = 2pi by hand: ZZ(pi), Rz(pi)
        rhs_fixed[1].params = smallvec![Angle::PI];
        rhs_fixed[2].params = smallvec![Angle::PI];
        let out = specs_unitary(2, &rhs_fixed);
        let mut z_on_control = Unitary::identity(2);
        let m = native::gate_matrix(GateKind::Z, &[]);
        z_on_control.apply_gate(&m, &[0]);
        push(
            "cry_macro theta=2pi (Z on control)".into(),
            equal_up_to_global_phase(&z_on_control, &out, RULE_TOL).unwrap_or(false),
        );
    }

    for theta in [0.3, 0.77, 1.9, 0.25] {
        push(
            format!("zz_to_native theta={theta}pi"),
            rule_holds(Rule::ZzToNative, &gate(GateKind::Zz, &[0, 1], &[theta]), 2),
        );
    }
    push(
        "cnot_to_native".into(),
        rule_holds(Rule::CnotToNative, &gate(GateKind::Cnot, &[0, 1], &[]), 2),
    );
    push(
        "cnot_to_native reversed".into(),
        rule_holds(Rule::CnotToNative, &gate(GateKind::Cnot, &[1, 0], &[]), 2),
    );
    for (a, b, g) in [(0.2, 0.4, 0.6), (1.3, 0.9, 1.7), (0.0, 0.5, 1.0)] {
        push(
            format!("tk1_to_native ({a},{b},{g})pi"),
            rule_holds(Rule::Tk1ToNative, &gate(GateKind::Tk1, &[0], &[a, b, g]), 1),
        );
    }
    for theta in [0.25, 0.77, 1.5, 1.9] {
        let g = gate(GateKind::Rx, &[0], &[theta]);
        let rhs = native::rx_restriction(0, Angle::from_pi(theta));
        let lhs = specs_unitary(1, &[g.spec()]);
        let out = specs_unitary(1, &rhs);
        push(
            format!("rx_restriction theta={theta}pi"),
            equal_up_to_global_phase(&lhs, &out, RULE_TOL).unwrap_or(false),
        );
    }
    push(
        "zz_pi".into(),
        rule_holds(Rule::ZzPi, &gate(GateKind::Zz, &[0, 1], &[1.0]), 2),
    );
    push(
        "zz_3pi_half".into(),
        rule_holds(Rule::Zz3PiHalf, &gate(GateKind::Zz, &[0, 1], &[1.5]), 2),
    );
    push(
        "cz_to_cnot".into(),
        rule_holds(Rule::CzToCnot, &gate(GateKind::Cz, &[0, 1], &[]), 2),
    );
    for lambda in [0.5, 0.81, 1.75] {
        push(
            format!("cu1_to_cnot lambda={lambda}pi"),
            rule_holds(Rule::Cu1ToCnot, &gate(GateKind::Cu1, &[0, 1], &[lambda]), 2),
        );
    }
    push(
        "swap_to_cnot".into(),
        rule_holds(Rule::SwapToCnot, &gate(GateKind::Swap, &[0, 1], &[]), 2),
    );
    for theta in [0.3, 0.5, 1.0, 1.6] {
        push(
            format!("cry_to_cnot theta={theta}pi"),
            rule_holds(Rule::CryToCnot, &gate(GateKind::Cry, &[0, 1], &[theta]), 2),
        );
    }
    push(
        "ccx_to_cnot".into(),
        rule_holds(Rule::CcxToCnot, &gate(GateKind::Ccx, &[0, 1, 2], &[]), 3),
    );
    push(
        "ccx_to_cnot permuted".into(),
        rule_holds(Rule::CcxToCnot, &gate(GateKind::Ccx, &[2, 0, 1], &[]), 3),
    );

    // frontend lowering templates
    for (theta, phi, lambda) in [(0.3, 0.7, 1.1), (0.5, 0.2, 1.9), (1.5, 1.25, 0.4)] {
        let direct = u3_reference(theta, phi, lambda);
        let spec = crate::gate::build::tk1(
            0,
            Angle::from_pi(phi + 0.5),
            Angle::from_pi(theta),
            Angle::from_pi(lambda - 0.5),
        );
        let out = specs_unitary(1, &[spec]);
        push(
            format!("frontend u3({theta},{phi},{lambda})pi"),
            equal_up_to_global_phase(&direct, &out, RULE_TOL).unwrap_or(false),
        );
    }
    {
        let (phi, lambda) = (0.4, 0.9);
        let direct = u3_reference(0.5, phi, lambda);
        let spec = crate::gate::build::tk1(
            0,
            Angle::from_pi(phi + 0.5),
            Angle::HALF_PI,
            Angle::from_pi(lambda - 0.5),
        );
        let out = specs_unitary(1, &[spec]);
        push(
            "frontend u2(0.4,0.9)pi".into(),
            equal_up_to_global_phase(&direct, &out, RULE_TOL).unwrap_or(false),
        );
    }
    {
        // u1 is Rz up to phase
        let lambda = 0.37;
        let mut direct = Unitary::identity(1);
        direct.apply_gate(
            &vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, lambda * std::f64::consts::PI),
            ],
            &[0],
        );
        let out = specs_unitary(1, &[crate::gate::build::rz(0, Angle::from_pi(lambda))]);
        push(
            "frontend u1(0.37)pi".into(),
            equal_up_to_global_phase(&direct, &out, RULE_TOL).unwrap_or(false),
        );
    }
    {
        // the Toffoli network against the permutation matrix itself
        let net = native::ccx_network(0, 1, 2);
        let out = specs_unitary(3, &net);
        let mut direct = Unitary::identity(3);
        let m = native::gate_matrix(GateKind::Ccx, &[]);
        direct.apply_gate(&m, &[0, 1, 2]);
        push(
            "frontend ccx network".into(),
            equal_up_to_global_phase(&direct, &out, RULE_TOL).unwrap_or(false),
        );
    }
    checks
}

/// Independent reference for u3: `u3(t, p, l) = Rz(p) Ry(t) Rz(l)` up to
/// phase, built from its own matrix elements (angles in pi units).
fn u3_reference(theta: f64, phi: f64, lambda: f64) -> Unitary {
    let pi = std::f64::consts::PI;
    let (t, p, l) = (theta * pi, phi * pi, lambda * pi);
    let m = vec![
        Complex64::new((t / 2.0).cos(), 0.0),
        -Complex64::from_polar((t / 2.0).sin(), l),
        Complex64::from_polar((t / 2.0).sin(), p),
        Complex64::from_polar((t / 2.0).cos(), p + l),
    ];
    let mut u = Unitary::identity(1);
    u.apply_gate(&m, &[0]);
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_whole_suite_is_green() {
        let checks = verify_all_rules();
        assert!(checks.len() > 25);
        for c in &checks {
            assert!(c.passed, "rule identity failed: {}", c.name);
        }
    }
}
