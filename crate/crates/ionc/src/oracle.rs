//! Dense brute-force reference semantics.
//!
//! Builds the full `2^n x 2^n` circuit unitary by applying each gate's
//! matrix to every column, and decides the equivalence relations the passes
//! must preserve. Qubit 0 is the least significant basis bit; within a
//! gate's local matrix the first listed qubit is the most significant local
//! bit (fixed by the CNOT truth-table test in `native`).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dag::CircuitDag;
use crate::error::OracleError;
use crate::gate::QubitId;
use crate::native::{gate_matrix, Matrix};

/// Default cap on the qubit count for dense oracle runs.
pub const DEFAULT_QUBIT_CAP: usize = 10;

/// Default Frobenius tolerance factor for circuit-level checks; the actual
/// bound is `tol * dim`.
pub const CIRCUIT_TOL: f64 = 1e-8;

/// Tolerance for single-rule identity checks on matrices up to 8x8.
pub const RULE_TOL: f64 = 1e-10;

/// A dense unitary, stored column-major so that each column can be updated
/// like a statevector.
#[derive(Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    cols: Vec<Complex64>,
}

impl Unitary {
    pub fn identity(n_qubits: usize) -> Unitary {
        let dim = 1usize << n_qubits;
        let mut cols = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            cols[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Unitary { dim, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.cols[col * self.dim + row]
    }

    /// Left-multiplies by a gate acting on the listed qubits.
    pub fn apply_gate(&mut self, m: &Matrix, qubits: &[QubitId]) {
        let dim = self.dim;
        match qubits.len() {
            1 => {
                let mask = 1usize << qubits[0];
                self.cols.par_chunks_mut(dim).for_each(|col| {
                    for base in 0..dim {
                        if base & mask != 0 {
                            continue;
                        }
                        let a = col[base];
                        let b = col[base | mask];
                        col[base] = m[0] * a + m[1] * b;
                        col[base | mask] = m[2] * a + m[3] * b;
                    }
                });
            }
            2 => {
                // first listed qubit = high local bit
                let hi = 1usize << qubits[0];
                let lo = 1usize << qubits[1];
                let offs = [0, lo, hi, hi | lo];
                self.cols.par_chunks_mut(dim).for_each(|col| {
                    for base in 0..dim {
                        if base & (hi | lo) != 0 {
                            continue;
                        }
                        let mut amp = [Complex64::new(0.0, 0.0); 4];
                        for (k, &o) in offs.iter().enumerate() {
                            amp[k] = col[base | o];
                        }
                        for (r, &o) in offs.iter().enumerate() {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for k in 0..4 {
                                acc += m[r * 4 + k] * amp[k];
                            }
                            col[base | o] = acc;
                        }
                    }
                });
            }
            3 => {
                let b2 = 1usize << qubits[0];
                let b1 = 1usize << qubits[1];
                let b0 = 1usize << qubits[2];
                let offs: Vec<usize> = (0..8)
                    .map(|l| {
                        (if l & 4 != 0 { b2 } else { 0 })
                            | (if l & 2 != 0 { b1 } else { 0 })
                            | (if l & 1 != 0 { b0 } else { 0 })
                    })
                    .collect();
                self.cols.par_chunks_mut(dim).for_each(|col| {
                    for base in 0..dim {
                        if base & (b2 | b1 | b0) != 0 {
                            continue;
                        }
                        let mut amp = [Complex64::new(0.0, 0.0); 8];
                        for (k, &o) in offs.iter().enumerate() {
                            amp[k] = col[base | o];
                        }
                        for (r, &o) in offs.iter().enumerate() {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for k in 0..8 {
                                acc += m[r * 8 + k] * amp[k];
                            }
                            col[base | o] = acc;
                        }
                    }
                });
            }
            _ => unreachable!("gates act on at most three qubits"),
        }
    }

    /// Frobenius norm of `self - other`.
    pub fn frobenius_distance(&self, other: &Unitary) -> f64 {
        self.cols
            .iter()
            .zip(other.cols.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `tr(self . other^dagger)`.
    fn trace_with_dagger(&self, other: &Unitary) -> Complex64 {
        self.cols
            .iter()
            .zip(other.cols.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// Left-multiplies by the qubit-permutation operator `P` with
    /// `P|x> = |y>` where bit `j` of `y` equals bit `perm[j]` of `x`.
    pub fn permute_qubits(&self, perm: &[QubitId]) -> Result<Unitary, OracleError> {
        let n = perm.len();
        if 1usize << n != self.dim {
            return Err(OracleError::InvalidPermutation);
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(OracleError::InvalidPermutation);
            }
            seen[p] = true;
        }
        let dim = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for colidx in 0..dim {
            let src = &self.cols[colidx * dim..(colidx + 1) * dim];
            let dst = &mut out[colidx * dim..(colidx + 1) * dim];
            for (x, &v) in src.iter().enumerate() {
                let mut y = 0usize;
                for (j, &p) in perm.iter().enumerate() {
                    if x & (1 << p) != 0 {
                        y |= 1 << j;
                    }
                }
                dst[y] = v;
            }
        }
        Ok(Unitary { dim, cols: out })
    }

    /// Largest deviation of `self . self^dagger` from the identity, sampled
    /// via column norms and one off-diagonal probe; cheap sanity check.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim;
        let mut worst: f64 = 0.0;
        for c in 0..dim {
            let col = &self.cols[c * dim..(c + 1) * dim];
            let norm: f64 = col.iter().map(|v| v.norm_sqr()).sum();
            worst = worst.max((norm - 1.0).abs());
        }
        worst
    }
}

/// Builds the full circuit unitary in execution order. The empty circuit
/// yields the identity.
pub fn circuit_unitary(c: &CircuitDag, cap: usize) -> Result<Unitary, OracleError> {
    let n = c.qubit_count();
    if n > cap {
        return Err(OracleError::CapacityExceeded { n, cap });
    }
    let mut u = Unitary::identity(n);
    for id in c.execution_order() {
        let g = c.gate(id).expect("execution order lists live gates");
        let m = gate_matrix(g.kind, &g.params);
        u.apply_gate(&m, &g.qubits);
    }
    Ok(u)
}

/// Extracts the best global-phase estimate `c` with `|c| = 1` such that
/// `a ~ c * b`: the normalized trace of `a . b^dagger`, falling back to the
/// largest-modulus entry ratio when the trace is near zero.
fn phase_estimate(a: &Unitary, b: &Unitary) -> Complex64 {
    let tr = a.trace_with_dagger(b);
    if tr.norm() > 1e-9 * a.dim as f64 {
        return tr / tr.norm();
    }
    let mut best = 0usize;
    let mut best_norm = 0.0f64;
    for (i, v) in b.cols.iter().enumerate() {
        let n = v.norm();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    if best_norm < 1e-12 {
        return Complex64::new(1.0, 0.0);
    }
    let ratio = a.cols[best] / b.cols[best];
    if ratio.norm() < 1e-12 {
        Complex64::new(1.0, 0.0)
    } else {
        ratio / ratio.norm()
    }
}

/// Equality up to a global phase: exists `c`, `|c| = 1`, with
/// `||A - cB||_F < tol * dim`.
pub fn equal_up_to_global_phase(a: &Unitary, b: &Unitary, tol: f64) -> Result<bool, OracleError> {
    if a.dim != b.dim {
        return Err(OracleError::DimensionMismatch { a: a.dim, b: b.dim });
    }
    let c = phase_estimate(a, b);
    let dist: f64 = a
        .cols
        .iter()
        .zip(b.cols.iter())
        .map(|(x, y)| (x - c * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(dist < tol * a.dim as f64)
}

/// Equality up to the recorded qubit permutation and a global phase:
/// `A ~ P(perm) . B`.
pub fn equal_up_to_permutation_and_phase(
    a: &Unitary,
    b: &Unitary,
    perm: &[QubitId],
    tol: f64,
) -> Result<bool, OracleError> {
    let pb = b.permute_qubits(perm)?;
    equal_up_to_global_phase(a, &pb, tol)
}

/// Equality up to a diagonal unitary on the left: `A = D . B` with `D`
/// diagonal and unit-modulus. Row `r` of `A` must be proportional to row `r`
/// of `B` with a unit-modulus factor.
pub fn equal_up_to_diagonal(a: &Unitary, b: &Unitary, tol: f64) -> Result<bool, OracleError> {
    if a.dim != b.dim {
        return Err(OracleError::DimensionMismatch { a: a.dim, b: b.dim });
    }
    let dim = a.dim;
    let bound = tol * dim as f64;
    for r in 0..dim {
        // find the largest |B[r, c]| to estimate d_r
        let mut best = None;
        let mut best_norm = 0.0f64;
        for col in 0..dim {
            let n = b.entry(r, col).norm();
            if n > best_norm {
                best_norm = n;
                best = Some(col);
            }
        }
        let d = match best {
            Some(col) if best_norm > 1e-12 => {
                let d = a.entry(r, col) / b.entry(r, col);
                if (d.norm() - 1.0).abs() > bound {
                    return Ok(false);
                }
                d / d.norm()
            }
            _ => {
                // zero row in B: A's row must be zero too
                Complex64::new(1.0, 0.0)
            }
        };
        let mut dist = 0.0f64;
        for col in 0..dim {
            dist += (a.entry(r, col) - d * b.entry(r, col)).norm_sqr();
        }
        if dist.sqrt() > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality up to permutation and a diagonal unitary (used when terminal Rz
/// gates are dropped): `A ~ D . P(perm) . B`.
pub fn equal_up_to_diagonal_and_permutation(
    a: &Unitary,
    b: &Unitary,
    perm: &[QubitId],
    tol: f64,
) -> Result<bool, OracleError> {
    let pb = b.permute_qubits(perm)?;
    equal_up_to_diagonal(a, &pb, tol)
}

/// Dense unitary of a gate list on `n` qubits, for rule-identity checks.
pub fn specs_unitary(n: usize, specs: &[crate::gate::GateSpec]) -> Unitary {
    let mut u = Unitary::identity(n);
    for s in specs {
        let m = gate_matrix(s.kind, &s.params);
        u.apply_gate(&m, &s.qubits);
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::gate::{build, GateKind, GateSpec};

    #[test]
    fn empty_circuit_is_identity() {
        let c = CircuitDag::new(3).unwrap();
        let u = circuit_unitary(&c, DEFAULT_QUBIT_CAP).unwrap();
        let i = Unitary::identity(3);
        assert!(equal_up_to_global_phase(&u, &i, RULE_TOL).unwrap());
        assert_eq!(u.dim(), 8);
    }

    #[test]
    fn cap_is_enforced() {
        let c = CircuitDag::new(11).unwrap();
        assert!(matches!(
            circuit_unitary(&c, 10),
            Err(OracleError::CapacityExceeded { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn rz_then_r_equals_shifted_r_with_trailing_rz() {
        // [Rz(phi), R(theta, psi)] ~ R(theta, psi - phi) followed by Rz(phi)
        let phi = Angle::from_pi(0.37);
        let theta = Angle::from_pi(0.81);
        let psi = Angle::from_pi(1.21);
        let mut c1 = CircuitDag::new(1).unwrap();
        c1.append_gate(build::rz(0, phi)).unwrap();
        c1.append_gate(build::r(0, theta, psi)).unwrap();
        let mut c2 = CircuitDag::new(1).unwrap();
        c2.append_gate(build::r(0, theta, psi - phi)).unwrap();
        c2.append_gate(build::rz(0, phi)).unwrap();
        let u1 = circuit_unitary(&c1, 10).unwrap();
        let u2 = circuit_unitary(&c2, 10).unwrap();
        assert!(equal_up_to_global_phase(&u1, &u2, RULE_TOL).unwrap());
    }

    #[test]
    fn pure_phase_is_accepted() {
        let c = Complex64::from_polar(1.0, std::f64::consts::PI / 7.0);
        let u = Unitary::identity(2);
        let mut v = u.clone();
        for x in v.cols.iter_mut() {
            *x *= c;
        }
        assert!(equal_up_to_global_phase(&u, &v, RULE_TOL).unwrap());
    }

    #[test]
    fn x_equals_i_rx_pi() {
        let x = specs_unitary(1, &[build::simple(GateKind::X, 0)]);
        let rx = specs_unitary(1, &[build::rx(0, Angle::PI)]);
        assert!(equal_up_to_global_phase(&x, &rx, RULE_TOL).unwrap());
    }

    #[test]
    fn identity_and_x_differ() {
        let i = Unitary::identity(1);
        let x = specs_unitary(1, &[build::simple(GateKind::X, 0)]);
        assert!(!equal_up_to_global_phase(&i, &x, RULE_TOL).unwrap());
    }

    #[test]
    fn trace_free_pair_uses_entry_fallback() {
        // tr(X . I^dagger) = 0, the fallback must still classify correctly
        let i = Unitary::identity(1);
        let x = specs_unitary(1, &[build::simple(GateKind::X, 0)]);
        assert!(!equal_up_to_global_phase(&x, &i, RULE_TOL).unwrap());
        // and X vs i*X is equal via the fallback too
        let mut ix = x.clone();
        for v in ix.cols.iter_mut() {
            *v *= Complex64::new(0.0, 1.0);
        }
        assert!(equal_up_to_global_phase(&x, &ix, RULE_TOL).unwrap());
    }

    #[test]
    fn swap_circuit_vs_empty_with_transposition() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::swap(0, 1)).unwrap();
        let u = circuit_unitary(&c, 10).unwrap();
        let empty = Unitary::identity(2);
        assert!(equal_up_to_permutation_and_phase(&u, &empty, &[1, 0], CIRCUIT_TOL).unwrap());
        // identity permutation reduces to plain phase equality
        assert!(!equal_up_to_permutation_and_phase(&u, &empty, &[0, 1], CIRCUIT_TOL).unwrap());
    }

    #[test]
    fn diagonal_equivalence() {
        let mut c1 = CircuitDag::new(2).unwrap();
        c1.append_gate(build::cnot(0, 1)).unwrap();
        let b = circuit_unitary(&c1, 10).unwrap();
        // A = Rz_0(phi) . B
        let mut c2 = CircuitDag::new(2).unwrap();
        c2.append_gate(build::cnot(0, 1)).unwrap();
        c2.append_gate(build::rz(0, Angle::from_pi(0.3))).unwrap();
        let a = circuit_unitary(&c2, 10).unwrap();
        assert!(equal_up_to_diagonal(&a, &b, CIRCUIT_TOL).unwrap());

        // A = Rx(pi/2) . B is not diagonal-equivalent
        let mut c3 = CircuitDag::new(2).unwrap();
        c3.append_gate(build::cnot(0, 1)).unwrap();
        c3.append_gate(build::rx(0, Angle::HALF_PI)).unwrap();
        let a = circuit_unitary(&c3, 10).unwrap();
        assert!(!equal_up_to_diagonal(&a, &b, CIRCUIT_TOL).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Unitary::identity(1);
        let b = Unitary::identity(2);
        assert!(matches!(
            equal_up_to_global_phase(&a, &b, RULE_TOL),
            Err(OracleError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invalid_permutation_is_an_error() {
        let b = Unitary::identity(2);
        assert!(matches!(
            b.permute_qubits(&[0, 0]),
            Err(OracleError::InvalidPermutation)
        ));
    }

    #[test]
    fn embedding_respects_gate_qubit_order() {
        // CNOT with control 1, target 0 on a 2-qubit register:
        // |01> (q0=1, q1=0) stays; |10> (q1=1) flips q0 -> |11>
        let u = specs_unitary(2, &[build::cnot(1, 0)]);
        assert!((u.entry(2, 2).norm() - 0.0).abs() < 1e-12);
        assert!((u.entry(3, 2).norm() - 1.0).abs() < 1e-12);
        assert!((u.entry(1, 1).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_under_commuting_reorder() {
        // same gates appended in different order on disjoint wires
        let specs_a = [
            build::rx(0, Angle::from_pi(0.3)),
            build::rz(1, Angle::from_pi(0.7)),
            build::zz(2, 3, Angle::HALF_PI),
        ];
        let specs_b = [
            build::zz(2, 3, Angle::HALF_PI),
            build::rz(1, Angle::from_pi(0.7)),
            build::rx(0, Angle::from_pi(0.3)),
        ];
        let mut c1 = CircuitDag::new(4).unwrap();
        let mut c2 = CircuitDag::new(4).unwrap();
        for s in specs_a {
            c1.append_gate(s).unwrap();
        }
        for s in specs_b {
            c2.append_gate(s).unwrap();
        }
        let u1 = circuit_unitary(&c1, 10).unwrap();
        let u2 = circuit_unitary(&c2, 10).unwrap();
        assert!(equal_up_to_global_phase(&u1, &u2, RULE_TOL).unwrap());
    }

    #[test]
    fn circuit_unitaries_are_unitary() {
        // columns of U stay orthonormal: U^dagger U = I
        let mut c = CircuitDag::new(4).unwrap();
        for spec in [
            build::simple(GateKind::H, 0),
            build::cnot(0, 1),
            build::r(2, Angle::from_pi(0.3), Angle::from_pi(1.7)),
            build::zz(2, 3, Angle::from_pi(0.9)),
            GateSpec::new(GateKind::Ccx, &[1, 2, 3], &[]),
            build::tk1(0, Angle::from_pi(0.1), Angle::from_pi(0.2), Angle::from_pi(0.3)),
        ] {
            c.append_gate(spec).unwrap();
        }
        let u = circuit_unitary(&c, 10).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        let dim = u.dim();
        for i in 0..dim {
            for j in 0..dim {
                let dot: Complex64 = (0..dim).map(|r| u.entry(r, i).conj() * u.entry(r, j)).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (dot - Complex64::new(expect, 0.0)).norm() < 1e-8 * dim as f64,
                    "columns {i},{j} not orthonormal"
                );
            }
        }
    }

    #[test]
    fn toffoli_matrix_from_network() {
        let net = crate::native::ccx_network(0, 1, 2);
        let u = specs_unitary(3, &net);
        // independent 8x8 Toffoli: flips q2 when q0 and q1 are set
        let mut t = Unitary::identity(3);
        t.cols = vec![Complex64::new(0.0, 0.0); 64];
        for b in 0..8usize {
            let dst = if b & 0b011 == 0b011 { b ^ 0b100 } else { b };
            t.cols[b * 8 + dst] = Complex64::new(1.0, 0.0);
        }
        assert!(equal_up_to_global_phase(&t, &u, RULE_TOL).unwrap());
    }
}
