//! JSON serialization of circuits, block schedules and reports.
//!
//! The circuit format is
//! `{"n": int, "gates": [{"id", "kind", "qubits", "params_pi"}...],
//!   "output_permutation": [int]}` with the gate array in execution order.

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::dag::CircuitDag;
use crate::error::CircuitError;
use crate::gate::{GateKind, GateSpec, QubitId};
use crate::passes::{BlockSet, ScheduleItem};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitJson {
    pub n: usize,
    pub gates: Vec<GateJson>,
    pub output_permutation: Vec<QubitId>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateJson {
    pub id: u32,
    pub kind: GateKind,
    pub qubits: Vec<QubitId>,
    pub params_pi: Vec<f64>,
}

impl CircuitJson {
    pub fn from_dag(c: &CircuitDag) -> CircuitJson {
        let gates = c
            .execution_order()
            .into_iter()
            .map(|id| {
                let g = c.gate(id).expect("live gate");
                GateJson {
                    id: id.0,
                    kind: g.kind,
                    qubits: g.qubits.to_vec(),
                    params_pi: g.params.iter().map(|a| a.units()).collect(),
                }
            })
            .collect();
        CircuitJson {
            n: c.qubit_count(),
            gates,
            output_permutation: c.output_permutation().to_vec(),
        }
    }

    /// Rebuilds a circuit. Gate ids are reassigned in array order; the
    /// array order must be a valid execution order, which appending
    /// guarantees by construction.
    pub fn to_dag(&self) -> Result<CircuitDag, CircuitError> {
        let mut c = CircuitDag::new(self.n)?;
        for g in &self.gates {
            let params: Vec<Angle> = g.params_pi.iter().map(|&v| Angle::from_pi(v)).collect();
            c.append_gate(GateSpec::new(g.kind, &g.qubits, &params))?;
        }
        if self.output_permutation.len() != self.n {
            return Err(CircuitError::InvariantViolation(
                "output_permutation length differs from qubit count".into(),
            ));
        }
        let mut seen = vec![false; self.n];
        for &p in &self.output_permutation {
            if p >= self.n || seen[p] {
                return Err(CircuitError::InvariantViolation(
                    "output_permutation is not a bijection".into(),
                ));
            }
            seen[p] = true;
        }
        c.set_output_permutation(self.output_permutation.clone());
        Ok(c)
    }
}

/// One entry of the serialized block schedule.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScheduleEntryJson {
    #[serde(rename = "type")]
    pub entry_type: String,
    pub qubits: Vec<QubitId>,
    pub gates: Vec<u32>,
}

/// Expands the schedule items into explicit gate-id lists for the
/// downstream shuttling scheduler.
pub fn schedule_to_json(set: &BlockSet, schedule: &[ScheduleItem]) -> Vec<ScheduleEntryJson> {
    schedule
        .iter()
        .map(|item| match item {
            ScheduleItem::Block(b) => {
                let blk = &set.blocks[*b];
                let mut gates = Vec::new();
                for pair in &blk.p {
                    gates.push(pair[0].0);
                    gates.push(pair[1].0);
                }
                for z in &blk.zz {
                    gates.push(z.0);
                }
                for pair in &blk.s {
                    gates.push(pair[0].0);
                    gates.push(pair[1].0);
                }
                ScheduleEntryJson {
                    entry_type: "block".into(),
                    qubits: blk.qubits.to_vec(),
                    gates,
                }
            }
            ScheduleItem::Sequence(s) => {
                let seq = &set.blockless[*s];
                ScheduleEntryJson {
                    entry_type: "sequence".into(),
                    qubits: vec![seq.qubit],
                    gates: seq.gates.iter().map(|g| g.0).collect(),
                }
            }
        })
        .collect()
}
