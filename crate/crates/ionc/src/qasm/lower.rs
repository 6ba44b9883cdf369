//! Lowering from the parsed AST to the circuit DAG.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use crate::angle::Angle;
use crate::dag::CircuitDag;
use crate::error::QasmError;
use crate::gate::{build, GateKind, GateSpec, QubitId};
use crate::native::ccx_network;

use super::{Arg, GateApp, GateDef, Pos, QasmProgram, Stmt};

/// Counters for constructs stripped during lowering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LowerStats {
    pub measures_stripped: usize,
    pub barriers_stripped: usize,
}

struct Lowerer<'p> {
    qregs: Vec<(String, usize, usize)>, // name, offset, size
    cregs: HashMap<String, usize>,
    defs: HashMap<String, &'p GateDef>,
    dag: CircuitDag,
    stats: LowerStats,
}

/// Lowers a parsed program: registers flattened into one, qelib1 gates
/// mapped to IR kinds, `ccx` expanded into its Clifford+T network, user
/// gate definitions inlined recursively, `measure`/`barrier` stripped and
/// counted.
pub fn lower_to_dag(p: &QasmProgram) -> Result<(CircuitDag, LowerStats), QasmError> {
    let mut qregs = Vec::new();
    let mut total = 0usize;
    for stmt in &p.statements {
        if let Stmt::QReg { name, size, pos } = stmt {
            if qregs.iter().any(|(n, _, _)| n == name) {
                return Err(semantic(*pos, format!("duplicate register `{name}`")));
            }
            qregs.push((name.clone(), total, *size));
            total += size;
        }
    }
    if total == 0 {
        return Err(QasmError::Semantic {
            line: 1,
            col: 1,
            msg: "program declares no qubits".into(),
        });
    }

    let mut l = Lowerer {
        qregs,
        cregs: HashMap::new(),
        defs: HashMap::new(),
        dag: CircuitDag::new(total)?,
        stats: LowerStats::default(),
    };

    for stmt in &p.statements {
        match stmt {
            Stmt::QReg { .. } => {}
            Stmt::CReg { name, size, .. } => {
                l.cregs.insert(name.clone(), *size);
            }
            Stmt::GateDef(def) => {
                l.defs.insert(def.name.clone(), def);
            }
            Stmt::App(app) => l.apply(app)?,
            Stmt::Measure { qarg, carg, pos } => {
                l.resolve_qubits(qarg)?;
                if !l.cregs.contains_key(&carg.reg) {
                    return Err(semantic(
                        *pos,
                        format!("undeclared classical register `{}`", carg.reg),
                    ));
                }
                l.stats.measures_stripped += 1;
            }
            Stmt::Barrier { args, .. } => {
                for a in args {
                    l.resolve_qubits(a)?;
                }
                l.stats.barriers_stripped += 1;
            }
        }
    }
    Ok((l.dag, l.stats))
}

fn semantic(pos: Pos, msg: String) -> QasmError {
    QasmError::Semantic {
        line: pos.line,
        col: pos.col,
        msg,
    }
}

impl<'p> Lowerer<'p> {
    fn resolve_qubits(&self, arg: &Arg) -> Result<Vec<QubitId>, QasmError> {
        let (_, offset, size) = self
            .qregs
            .iter()
            .find(|(n, _, _)| *n == arg.reg)
            .ok_or_else(|| semantic(arg.pos, format!("undeclared register `{}`", arg.reg)))?;
        match arg.index {
            Some(i) if i < *size => Ok(vec![offset + i]),
            Some(i) => Err(semantic(
                arg.pos,
                format!("index {i} out of range for `{}[{size}]`", arg.reg),
            )),
            None => Ok((*offset..offset + size).collect()),
        }
    }

    /// Top-level application with register broadcast.
    fn apply(&mut self, app: &GateApp) -> Result<(), QasmError> {
        let resolved: Vec<Vec<QubitId>> = app
            .args
            .iter()
            .map(|a| self.resolve_qubits(a))
            .collect::<Result<_, _>>()?;
        let lanes = resolved.iter().map(|v| v.len()).max().unwrap_or(1);
        for v in &resolved {
            if v.len() != 1 && v.len() != lanes {
                return Err(semantic(
                    app.pos,
                    "register arguments of mismatched length".into(),
                ));
            }
        }
        let params: Vec<f64> = app
            .params
            .iter()
            .map(|e| e.eval(&|_| None).map_err(|m| semantic(app.pos, m)))
            .collect::<Result<_, _>>()?;

        for lane in 0..lanes {
            let qubits: Vec<QubitId> = resolved
                .iter()
                .map(|v| if v.len() == 1 { v[0] } else { v[lane] })
                .collect();
            let mut stack = Vec::new();
            self.emit(&app.name, &params, &qubits, app.pos, &mut stack)?;
        }
        Ok(())
    }

    /// Emits one concrete gate application, inlining user definitions.
    fn emit(
        &mut self,
        name: &str,
        params: &[f64],
        qubits: &[QubitId],
        pos: Pos,
        stack: &mut Vec<String>,
    ) -> Result<(), QasmError> {
        if let Some(specs) = builtin(name, params, qubits) {
            let specs = specs.map_err(|m| semantic(pos, m))?;
            for s in specs {
                self.dag.append_gate(s)?;
            }
            return Ok(());
        }

        let def = match self.defs.get(name) {
            Some(d) => *d,
            None => {
                return Err(QasmError::UnsupportedGate {
                    line: pos.line,
                    col: pos.col,
                    name: name.to_owned(),
                })
            }
        };
        if stack.iter().any(|n| n == name) {
            return Err(QasmError::RecursiveGate(name.to_owned()));
        }
        if def.qubits.len() != qubits.len() || def.params.len() != params.len() {
            return Err(semantic(
                pos,
                format!(
                    "`{name}` expects {} qubits and {} params",
                    def.qubits.len(),
                    def.params.len()
                ),
            ));
        }
        let qbind: HashMap<&str, QubitId> = def
            .qubits
            .iter()
            .map(|s| s.as_str())
            .zip(qubits.iter().copied())
            .collect();
        let pbind: HashMap<&str, f64> = def
            .params
            .iter()
            .map(|s| s.as_str())
            .zip(params.iter().copied())
            .collect();

        stack.push(name.to_owned());
        for inner in &def.body {
            let ip: Vec<f64> = inner
                .params
                .iter()
                .map(|e| {
                    e.eval(&|n| pbind.get(n).copied())
                        .map_err(|m| semantic(inner.pos, m))
                })
                .collect::<Result<_, _>>()?;
            let iq: Vec<QubitId> = inner
                .args
                .iter()
                .map(|a| {
                    if a.index.is_some() {
                        return Err(semantic(
                            a.pos,
                            "indexed arguments are not allowed inside gate bodies".into(),
                        ));
                    }
                    qbind.get(a.reg.as_str()).copied().ok_or_else(|| {
                        semantic(a.pos, format!("unknown qubit `{}` in gate body", a.reg))
                    })
                })
                .collect::<Result<_, _>>()?;
            self.emit(&inner.name, &ip, &iq, inner.pos, stack)?;
        }
        stack.pop();
        Ok(())
    }
}

/// Builtin qelib1 subset. Angles arrive in radians; `u2`/`u3` lower to TK1
/// via `u3(theta, phi, lambda) ~ TK1(phi + pi/2, theta, lambda - pi/2)`.
fn builtin(
    name: &str,
    params: &[f64],
    qubits: &[QubitId],
) -> Option<Result<Vec<GateSpec>, String>> {
    use GateKind::*;
    let need = |np: usize, nq: usize| -> Result<(), String> {
        if params.len() != np {
            return Err(format!("`{name}` expects {np} parameter(s)"));
        }
        if qubits.len() != nq {
            return Err(format!("`{name}` expects {nq} qubit(s)"));
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(format!("`{name}` applied to duplicate qubits"));
            }
        }
        Ok(())
    };
    let a = |i: usize| Angle::from_radians(params[i]);

    let result = match name {
        "x" | "y" | "z" | "h" | "s" | "sdg" | "t" | "tdg" | "id" => need(0, 1).map(|_| {
            let kind = match name {
                "x" => X,
                "y" => Y,
                "z" => Z,
                "h" => H,
                "s" => S,
                "sdg" => Sdg,
                "t" => T,
                "tdg" => Tdg,
                _ => return vec![],
            };
            vec![build::simple(kind, qubits[0])]
        }),
        "rx" => need(1, 1).map(|_| vec![build::rx(qubits[0], a(0))]),
        "ry" => need(1, 1).map(|_| vec![build::ry(qubits[0], a(0))]),
        "rz" | "u1" => need(1, 1).map(|_| vec![build::rz(qubits[0], a(0))]),
        "u2" => need(2, 1).map(|_| {
            vec![build::tk1(
                qubits[0],
                Angle::from_radians(params[0] + FRAC_PI_2),
                Angle::HALF_PI,
                Angle::from_radians(params[1] - FRAC_PI_2),
            )]
        }),
        "u3" | "U" | "u" => need(3, 1).map(|_| {
            vec![build::tk1(
                qubits[0],
                Angle::from_radians(params[1] + FRAC_PI_2),
                Angle::from_radians(params[0]),
                Angle::from_radians(params[2] - FRAC_PI_2),
            )]
        }),
        "cx" | "CX" => need(0, 2).map(|_| vec![build::cnot(qubits[0], qubits[1])]),
        "cz" => need(0, 2).map(|_| vec![GateSpec::new(Cz, &[qubits[0], qubits[1]], &[])]),
        "cu1" => need(1, 2).map(|_| vec![GateSpec::new(Cu1, &[qubits[0], qubits[1]], &[a(0)])]),
        "swap" => need(0, 2).map(|_| vec![build::swap(qubits[0], qubits[1])]),
        "cry" => need(1, 2).map(|_| vec![GateSpec::new(Cry, &[qubits[0], qubits[1]], &[a(0)])]),
        "ccx" => need(0, 3).map(|_| ccx_network(qubits[0], qubits[1], qubits[2])),
        _ => return None,
    };
    Some(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{circuit_unitary, equal_up_to_global_phase, specs_unitary, RULE_TOL};
    use crate::qasm::parse_qasm;

    fn lower(src: &str) -> (CircuitDag, LowerStats) {
        lower_to_dag(&parse_qasm(src).unwrap()).unwrap()
    }

    #[test]
    fn clifford_t_statements_lower_in_wire_order() {
        let (dag, _) = lower(
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\nt q[1];\ntdg q[0];\ncx q[0],q[1];\n",
        );
        let kinds: Vec<GateKind> = dag
            .execution_order()
            .iter()
            .map(|&id| dag.gate(id).unwrap().kind)
            .collect();
        assert_eq!(
            kinds,
            vec![GateKind::H, GateKind::T, GateKind::Tdg, GateKind::Cnot]
        );
    }

    #[test]
    fn cu1_keeps_its_angle_in_pi_units() {
        let (dag, _) = lower("OPENQASM 2.0;\nqreg q[2];\ncu1(pi/2) q[0],q[1];\n");
        let g = dag.gates().next().unwrap();
        assert_eq!(g.kind, GateKind::Cu1);
        assert!(g.params[0].approx_eq(Angle::HALF_PI));
    }

    #[test]
    fn measure_and_barrier_are_stripped_and_counted() {
        let (dag, stats) = lower(
            "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nh q[0];\nbarrier q;\nmeasure q[0] -> c[0];\nmeasure q[1] -> c[1];\n",
        );
        assert_eq!(dag.gate_count(), 1);
        assert_eq!(stats.measures_stripped, 2);
        assert_eq!(stats.barriers_stripped, 1);
    }

    #[test]
    fn ccx_expands_to_the_toffoli_network() {
        let (dag, _) = lower("OPENQASM 2.0;\nqreg q[3];\nccx q[0],q[1],q[2];\n");
        assert_eq!(dag.gate_count(), 15);
        let u = circuit_unitary(&dag, 10).unwrap();
        let t = specs_unitary(3, &[GateSpec::new(GateKind::Ccx, &[0, 1, 2], &[])]);
        assert!(equal_up_to_global_phase(&u, &t, RULE_TOL).unwrap());
    }

    #[test]
    fn unknown_gates_error_out() {
        let err = lower_to_dag(&parse_qasm("OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n").unwrap());
        assert!(matches!(err, Err(QasmError::UnsupportedGate { .. })));
    }

    #[test]
    fn user_gates_inline_recursively() {
        let src = "OPENQASM 2.0;\nqreg q[3];\ngate peres a,b,c { ccx a,b,c; cx a,b; }\nperes q[2],q[1],q[0];\n";
        let (dag, _) = lower(src);
        assert_eq!(dag.gate_count(), 16);
        // matches a hand-lowered version
        let mut specs = ccx_network(2, 1, 0);
        specs.push(build::cnot(2, 1));
        let u = circuit_unitary(&dag, 10).unwrap();
        let v = specs_unitary(3, &specs);
        assert!(equal_up_to_global_phase(&u, &v, RULE_TOL).unwrap());
    }

    #[test]
    fn recursive_definitions_are_rejected() {
        let src = "OPENQASM 2.0;\nqreg q[1];\ngate loop a { loop a; }\nloop q[0];\n";
        let err = lower_to_dag(&parse_qasm(src).unwrap());
        assert!(matches!(err, Err(QasmError::RecursiveGate(_))));
    }

    #[test]
    fn multiple_qregs_flatten_in_order() {
        let (dag, _) = lower("OPENQASM 2.0;\nqreg a[2];\nqreg b[2];\ncx a[1],b[0];\n");
        assert_eq!(dag.qubit_count(), 4);
        let g = dag.gates().next().unwrap();
        assert_eq!(g.qubits.as_slice(), &[1, 2]);
    }

    #[test]
    fn broadcast_applies_per_qubit() {
        let (dag, _) = lower("OPENQASM 2.0;\nqreg q[3];\nh q;\n");
        assert_eq!(dag.gate_count(), 3);
    }

    #[test]
    fn out_of_range_index_is_semantic_error() {
        let err = lower_to_dag(&parse_qasm("OPENQASM 2.0;\nqreg q[2];\nx q[5];\n").unwrap());
        assert!(matches!(err, Err(QasmError::Semantic { .. })));
    }
}
