//! The native gate set, gate matrices, and the decomposition rule catalog.
//!
//! The hardware executes `R(theta, phi)`, `Rz(phi)` and `ZZ(theta)`; with the
//! pulse areas pinned to calibrated values the restricted set is
//! `R(pi/2, phi)`, `R(pi, phi)`, `Rz(phi)`, `ZZ(pi/2)`. Every rewrite rule in
//! this module preserves the unitary up to a global phase, which the test
//! suite checks against the dense oracle rule by rule.

use num_complex::Complex64;
use smallvec::smallvec;

use crate::angle::Angle;
use crate::gate::{build, Gate, GateKind, GateSpec, QubitId};

pub type Matrix = Vec<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Dense matrix of a gate, dimension `2^arity`, row-major. The first listed
/// qubit is the most significant bit of the local basis index, so a CNOT
/// matrix reads in the `|control target>` basis.
pub fn gate_matrix(kind: GateKind, params: &[Angle]) -> Matrix {
    use GateKind::*;
    let p = |i: usize| params[i].radians();
    match kind {
        R => r_matrix(p(0), p(1)),
        Rx => r_matrix(p(0), 0.0),
        Ry => r_matrix(p(0), std::f64::consts::FRAC_PI_2),
        Rz => rz_matrix(p(0)),
        Zz => {
            let e = cis(-p(0) / 2.0);
            let f = cis(p(0) / 2.0);
            diag4(e, f, f, e)
        }
        X => vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        Y => vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
        Z => vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
        H => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            vec![c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]
        }
        S => vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)],
        Sdg => vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., -1.)],
        T => vec![c(1., 0.), c(0., 0.), c(0., 0.), cis(std::f64::consts::FRAC_PI_4)],
        Tdg => vec![c(1., 0.), c(0., 0.), c(0., 0.), cis(-std::f64::consts::FRAC_PI_4)],
        Tk1 => mat2_mul(
            &rz_matrix(p(0)),
            &mat2_mul(&r_matrix(p(1), 0.0), &rz_matrix(p(2))),
        ),
        Cnot => perm4(&[0, 1, 3, 2]),
        Cz => diag4(c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.)),
        Cu1 => diag4(c(1., 0.), c(1., 0.), c(1., 0.), cis(p(0))),
        Swap => perm4(&[0, 2, 1, 3]),
        Cry => {
            let ry = r_matrix(p(0), std::f64::consts::FRAC_PI_2);
            let mut m = vec![c(0., 0.); 16];
            m[0] = c(1., 0.);
            m[5] = c(1., 0.);
            m[10] = ry[0];
            m[11] = ry[1];
            m[14] = ry[2];
            m[15] = ry[3];
            m
        }
        Ccx => {
            // controls q0 q1 (high bits), target q2 (low bit)
            let mut map = [0usize; 8];
            for (b, m) in map.iter_mut().enumerate() {
                *m = if b & 0b110 == 0b110 { b ^ 1 } else { b };
            }
            let mut m = vec![c(0., 0.); 64];
            for (src, dst) in map.iter().enumerate() {
                m[dst * 8 + src] = c(1., 0.);
            }
            m
        }
    }
}

/// `R(theta, phi) = exp(-i theta/2 (cos phi X + sin phi Y))`, in radians.
fn r_matrix(theta: f64, phi: f64) -> Matrix {
    let ch = (theta / 2.0).cos();
    let sh = (theta / 2.0).sin();
    vec![
        c(ch, 0.),
        c(0., -1.) * cis(-phi) * sh,
        c(0., -1.) * cis(phi) * sh,
        c(ch, 0.),
    ]
}

fn rz_matrix(phi: f64) -> Matrix {
    vec![cis(-phi / 2.0), c(0., 0.), c(0., 0.), cis(phi / 2.0)]
}

fn diag4(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Matrix {
    let z = c(0., 0.);
    vec![a, z, z, z, z, b, z, z, z, z, cc, z, z, z, z, d]
}

fn perm4(map: &[usize; 4]) -> Matrix {
    let mut m = vec![c(0., 0.); 16];
    for (src, &dst) in map.iter().enumerate() {
        m[dst * 4 + src] = c(1., 0.);
    }
    m
}

fn mat2_mul(a: &Matrix, b: &Matrix) -> Matrix {
    vec![
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

// ---------------------------------------------------------------------------
// Gate set predicates
// ---------------------------------------------------------------------------

/// Membership in the native gate set `M`: `R`, `Rz`, `ZZ` with free angles,
/// plus the axis-aligned special forms.
pub fn in_native_set(g: &Gate) -> bool {
    matches!(
        g.kind,
        GateKind::R
            | GateKind::Rz
            | GateKind::Zz
            | GateKind::Rx
            | GateKind::Ry
            | GateKind::X
            | GateKind::Y
            | GateKind::Z
    )
}

/// Membership in the restricted native gate set `N`: pulse areas pinned to
/// `pi/2` or `pi` for `R`, `pi/2` for `ZZ`; `Rz` phases stay free.
pub fn in_restricted_set(g: &Gate) -> bool {
    match g.kind {
        GateKind::Rz => true,
        GateKind::R | GateKind::Rx | GateKind::Ry => g.params[0].is_native_pulse_area(),
        GateKind::Zz => g.params[0].approx_eq(Angle::HALF_PI),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Decomposition rules
// ---------------------------------------------------------------------------

/// The rewrite rules the passes apply. Each one is unitary-preserving up to
/// global phase; `check-rules` and the rule-identity test suite verify every
/// entry against the dense oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// CRy macro: applicable when the rotation angle is a multiple of pi.
    CryMacro,
    /// ZZ with a pulse area outside `{pi/2, pi, 3pi/2}`.
    ZzToNative,
    /// CNOT into ten native gates around one ZZ(pi/2).
    CnotToNative,
    /// TK1 into Rz-Rx-Rz (zero-angle factors dropped).
    Tk1ToNative,
    /// Rx pulse-area restriction.
    RxRestrict,
    /// ZZ(pi) into two ZZ(pi/2).
    ZzPi,
    /// ZZ(3pi/2) into three ZZ(pi/2).
    Zz3PiHalf,
    /// CZ via a Hadamard-conjugated CNOT.
    CzToCnot,
    /// CU1 via two CNOTs and three Rz.
    Cu1ToCnot,
    /// SWAP gate left in the circuit, via three CNOTs.
    SwapToCnot,
    /// CRy with a free angle, via two CNOTs.
    CryToCnot,
    /// CCX via the standard 15-gate Clifford+T network.
    CcxToCnot,
}

impl Rule {
    pub const ALL: [Rule; 12] = [
        Rule::CryMacro,
        Rule::ZzToNative,
        Rule::CnotToNative,
        Rule::Tk1ToNative,
        Rule::RxRestrict,
        Rule::ZzPi,
        Rule::Zz3PiHalf,
        Rule::CzToCnot,
        Rule::Cu1ToCnot,
        Rule::SwapToCnot,
        Rule::CryToCnot,
        Rule::CcxToCnot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::CryMacro => "cry_macro",
            Rule::ZzToNative => "zz_to_native",
            Rule::CnotToNative => "cnot_to_native",
            Rule::Tk1ToNative => "tk1_to_native",
            Rule::RxRestrict => "rx_restrict",
            Rule::ZzPi => "zz_pi",
            Rule::Zz3PiHalf => "zz_3pi_half",
            Rule::CzToCnot => "cz_to_cnot",
            Rule::Cu1ToCnot => "cu1_to_cnot",
            Rule::SwapToCnot => "swap_to_cnot",
            Rule::CryToCnot => "cry_to_cnot",
            Rule::CcxToCnot => "ccx_to_cnot",
        }
    }

    /// Instantiates the rule on a gate. `None` when the left-hand side does
    /// not match the gate's kind and angle pattern.
    pub fn apply(self, g: &Gate) -> Option<Vec<GateSpec>> {
        match self {
            Rule::CryMacro => {
                if g.kind == GateKind::Cry && g.params[0].is_pi_multiple() {
                    Some(cry_macro(g.qubits[0], g.qubits[1], g.params[0]))
                } else {
                    None
                }
            }
            Rule::ZzToNative => {
                if g.kind == GateKind::Zz
                    && !g.params[0].is_zero()
                    && !(g.params[0].is_half_pi_multiple())
                {
                    Some(zz_to_native(g.qubits[0], g.qubits[1], g.params[0]))
                } else {
                    None
                }
            }
            Rule::CnotToNative => {
                (g.kind == GateKind::Cnot).then(|| cnot_to_native(g.qubits[0], g.qubits[1]))
            }
            Rule::Tk1ToNative => (g.kind == GateKind::Tk1)
                .then(|| tk1_to_native(g.qubits[0], g.params[0], g.params[1], g.params[2])),
            Rule::RxRestrict => {
                if g.kind == GateKind::Rx && !g.params[0].is_native_pulse_area() {
                    Some(rx_restriction(g.qubits[0], g.params[0]))
                } else {
                    None
                }
            }
            Rule::ZzPi => {
                if g.kind == GateKind::Zz && g.params[0].approx_eq(Angle::PI) {
                    Some(vec![
                        build::zz(g.qubits[0], g.qubits[1], Angle::HALF_PI),
                        build::zz(g.qubits[0], g.qubits[1], Angle::HALF_PI),
                    ])
                } else {
                    None
                }
            }
            Rule::Zz3PiHalf => {
                if g.kind == GateKind::Zz && g.params[0].approx_eq(Angle::THREE_HALF_PI) {
                    Some(vec![
                        build::zz(g.qubits[0], g.qubits[1], Angle::HALF_PI),
                        build::zz(g.qubits[0], g.qubits[1], Angle::HALF_PI),
                        build::zz(g.qubits[0], g.qubits[1], Angle::HALF_PI),
                    ])
                } else {
                    None
                }
            }
            Rule::CzToCnot => (g.kind == GateKind::Cz).then(|| cz_to_cnot(g.qubits[0], g.qubits[1])),
            Rule::Cu1ToCnot => (g.kind == GateKind::Cu1)
                .then(|| cu1_to_cnot(g.qubits[0], g.qubits[1], g.params[0])),
            Rule::SwapToCnot => {
                (g.kind == GateKind::Swap).then(|| swap_to_cnot(g.qubits[0], g.qubits[1]))
            }
            Rule::CryToCnot => {
                (g.kind == GateKind::Cry).then(|| cry_to_cnot(g.qubits[0], g.qubits[1], g.params[0]))
            }
            Rule::CcxToCnot => (g.kind == GateKind::Ccx)
                .then(|| ccx_network(g.qubits[0], g.qubits[1], g.qubits[2])),
        }
    }
}

/// `CRy_{i,j}(theta) = Rx_j(pi/2) ZZ(theta/2) Rz_j(-theta/2) Rx_j(-pi/2)`,
/// written as an operator product; the returned list is in circuit order.
pub fn cry_macro(i: QubitId, j: QubitId, theta: Angle) -> Vec<GateSpec> {
    vec![
        build::rx(j, -Angle::HALF_PI),
        build::rz(j, -theta.half()),
        build::zz(i, j, theta.half()),
        build::rx(j, Angle::HALF_PI),
    ]
}

/// ZZ with a free pulse area, rebuilt from two ZZ(pi/2) and local rotations.
pub fn zz_to_native(i: QubitId, j: QubitId, theta: Angle) -> Vec<GateSpec> {
    vec![
        build::rz(i, Angle::PI),
        build::rz(j, Angle::THREE_HALF_PI),
        build::rx(j, Angle::THREE_HALF_PI),
        build::zz(i, j, Angle::HALF_PI),
        build::rx(j, -theta),
        build::rz(j, Angle::PI),
        build::zz(i, j, Angle::HALF_PI),
        build::rx(j, Angle::HALF_PI),
        build::rz(j, Angle::HALF_PI),
    ]
}

/// CNOT as one ZZ(pi/2) plus nine local rotations, in circuit order.
pub fn cnot_to_native(i: QubitId, j: QubitId) -> Vec<GateSpec> {
    vec![
        build::rx(i, Angle::HALF_PI),
        build::rz(i, Angle::PI),
        build::rx(i, Angle::HALF_PI),
        build::rz(j, Angle::HALF_PI),
        build::rx(j, Angle::HALF_PI),
        build::zz(i, j, Angle::HALF_PI),
        build::rz(i, Angle::HALF_PI),
        build::rz(j, Angle::HALF_PI),
        build::rx(j, Angle::HALF_PI),
        build::rz(j, Angle::HALF_PI),
    ]
}

/// `TK1(alpha, beta, gamma) = Rz(alpha) Rx(beta) Rz(gamma)`; the gamma
/// rotation acts first. Zero-angle factors are dropped.
pub fn tk1_to_native(q: QubitId, alpha: Angle, beta: Angle, gamma: Angle) -> Vec<GateSpec> {
    let mut out = Vec::with_capacity(3);
    if !gamma.is_zero() {
        out.push(build::rz(q, gamma));
    }
    if !beta.is_zero() {
        out.push(build::rx(q, beta));
    }
    if !alpha.is_zero() {
        out.push(build::rz(q, alpha));
    }
    out
}

/// Pulse-area restriction for Rx: `0` vanishes, `pi/2` and `pi` stay, `3pi/2`
/// splits into two native pulses, anything else costs two Rx(pi/2) wrapped in
/// free Rz rotations.
pub fn rx_restriction(q: QubitId, theta: Angle) -> Vec<GateSpec> {
    if theta.is_zero() {
        vec![]
    } else if theta.is_native_pulse_area() {
        vec![build::rx(q, theta)]
    } else if theta.approx_eq(Angle::THREE_HALF_PI) {
        vec![build::rx(q, Angle::PI), build::rx(q, Angle::HALF_PI)]
    } else {
        vec![
            build::rz(q, Angle::HALF_PI),
            build::rx(q, Angle::HALF_PI),
            build::rz(q, theta + Angle::PI),
            build::rx(q, Angle::HALF_PI),
            build::rz(q, Angle::HALF_PI),
        ]
    }
}

// Intermediate templates lowering input-level two- and three-qubit gates to
// {TK1, CNOT, Rz}. Not in the hardware catalog themselves; each is verified
// by the rule-identity suite before anything relies on it.

fn h_as_tk1(q: QubitId) -> GateSpec {
    build::tk1(q, Angle::HALF_PI, Angle::HALF_PI, Angle::HALF_PI)
}

pub fn cz_to_cnot(i: QubitId, j: QubitId) -> Vec<GateSpec> {
    vec![h_as_tk1(j), build::cnot(i, j), h_as_tk1(j)]
}

pub fn cu1_to_cnot(i: QubitId, j: QubitId, lambda: Angle) -> Vec<GateSpec> {
    let half = lambda.half();
    vec![
        build::rz(i, half),
        build::cnot(i, j),
        build::rz(j, -half),
        build::cnot(i, j),
        build::rz(j, half),
    ]
}

pub fn swap_to_cnot(i: QubitId, j: QubitId) -> Vec<GateSpec> {
    vec![build::cnot(i, j), build::cnot(j, i), build::cnot(i, j)]
}

/// Generic CRy via two CNOTs; `Ry(a) = TK1(pi/2, a, 3pi/2)` exactly.
pub fn cry_to_cnot(i: QubitId, j: QubitId, theta: Angle) -> Vec<GateSpec> {
    let ry = |a: Angle| build::tk1(j, Angle::HALF_PI, a, Angle::THREE_HALF_PI);
    vec![
        ry(theta.half()),
        build::cnot(i, j),
        ry(-theta.half()),
        build::cnot(i, j),
    ]
}

/// The standard 15-gate Clifford+T realization of the Toffoli gate.
pub fn ccx_network(a: QubitId, b: QubitId, t: QubitId) -> Vec<GateSpec> {
    use GateKind::*;
    vec![
        build::simple(H, t),
        build::cnot(b, t),
        build::simple(Tdg, t),
        build::cnot(a, t),
        build::simple(T, t),
        build::cnot(b, t),
        build::simple(Tdg, t),
        build::cnot(a, t),
        build::simple(T, b),
        build::simple(T, t),
        build::simple(H, t),
        build::cnot(a, b),
        build::simple(T, a),
        build::simple(Tdg, b),
        build::cnot(a, b),
    ]
}

// ---------------------------------------------------------------------------
// Single-qubit resynthesis
// ---------------------------------------------------------------------------

/// ZXZ Euler angles of a single-qubit unitary: `U ~ Rz(alpha) Rx(beta)
/// Rz(gamma)` up to a global phase. At the gimbal-locked points (`beta` near
/// 0 or pi) the whole z-rotation folds into `alpha` and `gamma` is 0.
pub fn zxz_angles(u: &Matrix) -> (Angle, Angle, Angle) {
    debug_assert_eq!(u.len(), 4);
    let n00 = u[0].norm();
    let n01 = u[1].norm();
    let beta = 2.0 * n01.atan2(n00);
    let eps = 1e-9;
    if n01 < eps {
        // diagonal: alpha + gamma determined only in sum
        let alpha = (u[3] / u[0]).arg();
        (Angle::from_radians(alpha), Angle::ZERO, Angle::ZERO)
    } else if n00 < eps {
        // anti-diagonal
        let alpha = (u[2] / u[1]).arg();
        (
            Angle::from_radians(alpha),
            Angle::from_pi(1.0),
            Angle::ZERO,
        )
    } else {
        // the entry ratios fix alpha+gamma and alpha-gamma modulo 2 pi, so
        // halving leaves a pi branch shared by alpha and gamma; the wrong
        // branch shows up as Rx(-beta) and is cured by flipping beta
        let sum = (u[3] / u[0]).arg();
        let diff = (u[2] / u[1]).arg();
        let alpha = Angle::from_radians((sum + diff) / 2.0);
        let gamma = Angle::from_radians((sum - diff) / 2.0);
        let beta = Angle::from_radians(beta);
        let probe = run_product([
            (GateKind::Rz, vec![gamma]),
            (GateKind::Rx, vec![beta]),
            (GateKind::Rz, vec![alpha]),
        ]);
        // compare off-diagonal phases of probe vs u
        let q = probe[1] / u[1];
        let same = (q * u[0] - probe[0]).norm() < 1e-6;
        if same {
            (alpha, beta, gamma)
        } else {
            (alpha, -beta, gamma)
        }
    }
}

/// Squashes the operator product of a run of single-qubit gates into one TK1.
pub fn squash_to_tk1(product: &Matrix) -> GateSpec {
    let (alpha, beta, gamma) = zxz_angles(product);
    GateSpec {
        kind: GateKind::Tk1,
        qubits: smallvec![0],
        params: smallvec![alpha, beta, gamma],
    }
}

/// Operator product (later gates on the left) of single-qubit gates given in
/// circuit order.
pub fn run_product(gates: impl IntoIterator<Item = (GateKind, Vec<Angle>)>) -> Matrix {
    let mut acc = vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)];
    for (kind, params) in gates {
        let m = gate_matrix(kind, &params);
        acc = mat2_mul(&m, &acc);
    }
    acc
}

/// Is the 2x2 matrix the identity up to a global phase?
pub fn is_identity_up_to_phase(u: &Matrix, tol: f64) -> bool {
    if u[1].norm() > tol || u[2].norm() > tol {
        return false;
    }
    (u[0] - u[3]).norm() < tol && (u[0].norm() - 1.0).abs() < tol
}
