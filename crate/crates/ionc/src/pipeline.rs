//! The compilation pipeline, metrics and the naive baseline.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::dag::{CircuitDag, Vertex};
use crate::error::CompileError;
use crate::gate::{GateKind, GateSpec, QubitId};
use crate::json::{schedule_to_json, ScheduleEntryJson};
use crate::native::{self, in_restricted_set, Rule};
use crate::oracle;
use crate::passes::{self, BlockSet, PassResult};

/// Options controlling a compilation run.
#[derive(Clone, Debug)]
pub struct CompileOptions {
    /// Check the compiled circuit against the input unitary (dense oracle).
    pub verify: bool,
    /// Dense verification only runs at or below this qubit count.
    pub verify_qubit_cap: usize,
    /// Drop the terminal Rz gates emitted by phase tracking. Output then
    /// matches the input only up to a diagonal (measurement statistics in
    /// the computational basis are unaffected).
    pub drop_terminal_rz: bool,
    /// Run these named passes instead of the standard pipeline (debugging).
    pub pass_override: Option<Vec<String>>,
    /// Macros the matcher may apply.
    pub macro_set: Vec<passes::Macro>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            verify: false,
            verify_qubit_cap: oracle::DEFAULT_QUBIT_CAP,
            drop_terminal_rz: false,
            pass_override: None,
            macro_set: vec![passes::Macro::Cry],
        }
    }
}

/// Gate counts and timing recorded after one pipeline stage.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageSnapshot {
    pub name: String,
    pub single_qubit: usize,
    pub two_qubit: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BoundChecks {
    /// single-qubit count <= 4w + 3n after sequence building
    pub sequences_4w_3n: Option<bool>,
    /// single-qubit count <= 8w + 5n after pulse-area restriction
    pub restricted_8w_5n: Option<bool>,
    /// single-qubit count <= 4w + 3n after phase tracking
    pub tracking_4w_3n: Option<bool>,
}

/// Everything the compiler reports about one run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompileReport {
    pub qubits: usize,
    pub input_single_qubit: usize,
    pub input_two_qubit: usize,
    pub stages: Vec<StageSnapshot>,
    /// ZZ count before the final angle restriction (Eq.-style omega).
    pub omega: usize,
    pub bounds: BoundChecks,
    /// Final gate counts, terminal Rz included.
    pub single_qubit: usize,
    pub two_qubit: usize,
    pub terminal_rz: usize,
    /// Every final gate is in the restricted native set.
    pub restricted: bool,
    pub verification: String,
    pub output_permutation: Vec<QubitId>,
    pub schedule: Vec<ScheduleEntryJson>,
    pub total_ms: f64,
    /// Constructs stripped by the frontend, when compiled from QASM.
    pub measures_stripped: usize,
    pub barriers_stripped: usize,
}

/// Counts (single-qubit, two-or-more-qubit) gates. Terminal Rz gates (an Rz
/// directly before an output vertex) are excluded unless requested.
pub fn count_gates(c: &CircuitDag, include_terminal_rz: bool) -> (usize, usize) {
    let mut single = 0usize;
    let mut multi = 0usize;
    for g in c.gates() {
        if g.arity() == 1 {
            if include_terminal_rz || !is_terminal_rz(c, g.id) {
                single += 1;
            }
        } else {
            multi += 1;
        }
    }
    (single, multi)
}

pub fn terminal_rz_count(c: &CircuitDag) -> usize {
    c.gates()
        .filter(|g| is_terminal_rz(c, g.id))
        .count()
}

fn is_terminal_rz(c: &CircuitDag, id: crate::gate::GateId) -> bool {
    let g = match c.gate(id) {
        Ok(g) => g,
        Err(_) => return false,
    };
    if g.kind != GateKind::Rz {
        return false;
    }
    matches!(
        c.succ_of(Vertex::Sub { gate: id, slot: 0 }),
        Some(Vertex::Output(_))
    )
}

struct StageRunner {
    stages: Vec<StageSnapshot>,
    started: Instant,
}

impl StageRunner {
    fn new() -> StageRunner {
        StageRunner {
            stages: Vec::new(),
            started: Instant::now(),
        }
    }

    fn run<F>(&mut self, c: &mut CircuitDag, name: &str, f: F) -> Result<PassResult, CompileError>
    where
        F: FnOnce(&mut CircuitDag) -> Result<PassResult, CompileError>,
    {
        let t0 = Instant::now();
        let res = f(c).map_err(|e| e.at_stage(stage_static_name(name)))?;
        let (single, two) = count_gates(c, true);
        self.stages.push(StageSnapshot {
            name: name.to_owned(),
            single_qubit: single,
            two_qubit: two,
            elapsed_ms: t0.elapsed().as_secs_f64() * 1e3,
        });
        Ok(res)
    }
}

fn stage_static_name(name: &str) -> &'static str {
    for s in ALL_STAGE_NAMES {
        if *s == name {
            return s;
        }
    }
    "pipeline"
}

pub const ALL_STAGE_NAMES: &[&str] = &[
    "eliminate_swaps",
    "reduce_fixpoint",
    "remove_redundancies",
    "commute_through_multis",
    "match_macros",
    "rebase_to_native",
    "build_rx_rz_sequences",
    "restrict_single_qubit_angles",
    "merge_rz_sweep",
    "phase_tracking",
    "block_aggregation",
    "restrict_zz_angles",
];

/// Compiles a circuit into the restricted native gate set, reporting
/// per-stage counts, the block schedule and the verification verdict.
pub fn compile(
    input: CircuitDag,
    opts: &CompileOptions,
) -> Result<(CircuitDag, CompileReport), CompileError> {
    let n = input.qubit_count();
    let (in_single, in_two) = count_gates(&input, true);
    let want_verify = opts.verify && n <= opts.verify_qubit_cap;
    let original = want_verify.then(|| input.clone());

    let mut c = input;
    let mut runner = StageRunner::new();
    let mut bounds = BoundChecks::default();
    let mut omega = 0usize;
    let mut schedule: Vec<ScheduleEntryJson> = Vec::new();

    if let Some(names) = &opts.pass_override {
        let mut blocks: Option<(BlockSet, Vec<passes::ScheduleItem>)> = None;
        for name in names {
            run_named_stage(&mut c, name, &mut runner, opts, &mut blocks)?;
            record_bounds(&c, name, &mut bounds, &mut omega);
        }
        if let Some((set, sched)) = &blocks {
            schedule = schedule_to_json(set, sched);
        }
    } else {
        runner.run(&mut c, "eliminate_swaps", passes::eliminate_swaps)?;
        runner.run(&mut c, "reduce_fixpoint", passes::reduce_fixpoint)?;
        let macros = opts.macro_set.clone();
        runner.run(&mut c, "match_macros", |c| {
            passes::match_macros_with(c, &macros)
        })?;
        runner.run(&mut c, "reduce_fixpoint", passes::reduce_fixpoint)?;
        runner.run(&mut c, "rebase_to_native", passes::rebase_to_native)?;
        runner.run(&mut c, "build_rx_rz_sequences", passes::build_rx_rz_sequences)?;
        omega = zz_count(&c);
        let (s1, _) = count_gates(&c, true);
        bounds.sequences_4w_3n = Some(s1 <= 4 * omega + 3 * n);
        runner.run(
            &mut c,
            "restrict_single_qubit_angles",
            passes::restrict_single_qubit_angles,
        )?;
        let (s2, _) = count_gates(&c, true);
        bounds.restricted_8w_5n = Some(s2 <= 8 * omega + 5 * n);
        runner.run(&mut c, "merge_rz_sweep", passes::merge_rz_sweep)?;
        let drop = opts.drop_terminal_rz;
        runner.run(&mut c, "phase_tracking", |c| passes::phase_tracking(c, drop))?;
        let (s3, _) = count_gates(&c, true);
        bounds.tracking_4w_3n = Some(s3 <= 4 * omega + 3 * n);

        let t0 = Instant::now();
        let mut set = passes::build_blocks(&c)?;
        passes::rearrange_blocks(&c, &mut set)?;
        passes::split_angles(&mut c, &mut set)?;
        let (_, sched) = passes::order_blocks(&c, &mut set)?;
        passes::restrict_zz_angles(&mut c, Some(&mut set))?;
        schedule = schedule_to_json(&set, &sched);
        let (single, two) = count_gates(&c, true);
        runner.stages.push(StageSnapshot {
            name: "block_aggregation".into(),
            single_qubit: single,
            two_qubit: two,
            elapsed_ms: t0.elapsed().as_secs_f64() * 1e3,
        });
    }

    let restricted = c.gates().all(in_restricted_set);
    if !restricted && opts.pass_override.is_none() {
        let offender = c
            .gates()
            .find(|g| !in_restricted_set(g))
            .map(|g| format!("{}({:?})", g.kind, g.params))
            .unwrap_or_default();
        return Err(CompileError::GateSetViolation(offender));
    }

    let verification = match original {
        Some(orig) => {
            let a = oracle::circuit_unitary(&orig, opts.verify_qubit_cap)?;
            let b = oracle::circuit_unitary(&c, opts.verify_qubit_cap)?;
            let ok = if opts.drop_terminal_rz {
                oracle::equal_up_to_diagonal_and_permutation(
                    &a,
                    &b,
                    c.output_permutation(),
                    oracle::CIRCUIT_TOL,
                )?
            } else {
                oracle::equal_up_to_permutation_and_phase(
                    &a,
                    &b,
                    c.output_permutation(),
                    oracle::CIRCUIT_TOL,
                )?
            };
            if !ok {
                return Err(CompileError::VerificationFailed(format!(
                    "{n}-qubit circuit differs from its compilation"
                )));
            }
            "passed".to_owned()
        }
        None if opts.verify => format!(
            "skipped: {} qubits above the cap of {}",
            n, opts.verify_qubit_cap
        ),
        None => "not requested".to_owned(),
    };

    let (single, two) = count_gates(&c, true);
    let report = CompileReport {
        qubits: n,
        input_single_qubit: in_single,
        input_two_qubit: in_two,
        stages: runner.stages,
        omega,
        bounds,
        single_qubit: single,
        two_qubit: two,
        terminal_rz: terminal_rz_count(&c),
        restricted,
        verification,
        output_permutation: c.output_permutation().to_vec(),
        schedule,
        total_ms: runner.started.elapsed().as_secs_f64() * 1e3,
        measures_stripped: 0,
        barriers_stripped: 0,
    };
    Ok((c, report))
}

fn run_named_stage(
    c: &mut CircuitDag,
    name: &str,
    runner: &mut StageRunner,
    opts: &CompileOptions,
    blocks: &mut Option<(BlockSet, Vec<passes::ScheduleItem>)>,
) -> Result<(), CompileError> {
    match name {
        "eliminate_swaps" => runner.run(c, name, passes::eliminate_swaps)?,
        "reduce_fixpoint" => runner.run(c, name, passes::reduce_fixpoint)?,
        "remove_redundancies" => runner.run(c, name, passes::remove_redundancies)?,
        "commute_through_multis" => runner.run(c, name, passes::commute_through_multis)?,
        "match_macros" => {
            let macros = opts.macro_set.clone();
            runner.run(c, name, |c| passes::match_macros_with(c, &macros))?
        }
        "rebase_to_native" => runner.run(c, name, passes::rebase_to_native)?,
        "build_rx_rz_sequences" => runner.run(c, name, passes::build_rx_rz_sequences)?,
        "restrict_single_qubit_angles" => {
            runner.run(c, name, passes::restrict_single_qubit_angles)?
        }
        "merge_rz_sweep" => runner.run(c, name, passes::merge_rz_sweep)?,
        "phase_tracking" => {
            let drop = opts.drop_terminal_rz;
            runner.run(c, name, |c| passes::phase_tracking(c, drop))?
        }
        "block_aggregation" => {
            let t0 = Instant::now();
            let mut set = passes::build_blocks(c)?;
            passes::rearrange_blocks(c, &mut set)?;
            passes::split_angles(c, &mut set)?;
            let (_, sched) = passes::order_blocks(c, &mut set)?;
            let (single, two) = count_gates(c, true);
            runner.stages.push(StageSnapshot {
                name: name.to_owned(),
                single_qubit: single,
                two_qubit: two,
                elapsed_ms: t0.elapsed().as_secs_f64() * 1e3,
            });
            *blocks = Some((set, sched));
            PassResult::default()
        }
        "restrict_zz_angles" => runner.run(c, name, |c| {
            passes::restrict_zz_angles(c, blocks.as_mut().map(|(set, _)| set))
        })?,
        other => return Err(CompileError::UnknownPass(other.to_owned())),
    };
    Ok(())
}

fn record_bounds(c: &CircuitDag, stage: &str, bounds: &mut BoundChecks, omega: &mut usize) {
    let n = c.qubit_count();
    match stage {
        "build_rx_rz_sequences" => {
            *omega = zz_count(c);
            let (s, _) = count_gates(c, true);
            bounds.sequences_4w_3n = Some(s <= 4 * *omega + 3 * n);
        }
        "restrict_single_qubit_angles" => {
            let (s, _) = count_gates(c, true);
            bounds.restricted_8w_5n = Some(s <= 8 * *omega + 5 * n);
        }
        "phase_tracking" => {
            let (s, _) = count_gates(c, true);
            bounds.tracking_4w_3n = Some(s <= 4 * *omega + 3 * n);
        }
        _ => {}
    }
}

fn zz_count(c: &CircuitDag) -> usize {
    c.gates().filter(|g| g.kind == GateKind::Zz).count()
}

/// The standard pipeline stage names, in order. An override equal to this
/// list reproduces `compile` exactly.
pub fn default_pass_names() -> Vec<String> {
    [
        "eliminate_swaps",
        "reduce_fixpoint",
        "match_macros",
        "reduce_fixpoint",
        "rebase_to_native",
        "build_rx_rz_sequences",
        "restrict_single_qubit_angles",
        "merge_rz_sweep",
        "phase_tracking",
        "block_aggregation",
        "restrict_zz_angles",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Naive compilation: SWAP elimination, then every gate substituted in
/// place through the fixed decompositions, then per-gate pulse-area
/// restriction. No optimization. With `remove_trivial_redundancies`, one
/// redundancy-removal fixpoint runs before the substitution.
pub fn compile_naive(
    input: CircuitDag,
    remove_trivial_redundancies: bool,
    opts: &CompileOptions,
) -> Result<(CircuitDag, CompileReport), CompileError> {
    let n = input.qubit_count();
    let (in_single, in_two) = count_gates(&input, true);
    let want_verify = opts.verify && n <= opts.verify_qubit_cap;
    let original = want_verify.then(|| input.clone());

    let mut c = input;
    let mut runner = StageRunner::new();
    runner.run(&mut c, "eliminate_swaps", passes::eliminate_swaps)?;
    if remove_trivial_redundancies {
        runner.run(&mut c, "remove_redundancies", |c| {
            let mut acc = PassResult::default();
            loop {
                let r = passes::remove_redundancies(c)?;
                acc.merge(r);
                if !r.changed {
                    return Ok(acc);
                }
            }
        })?;
    }
    runner.run(&mut c, "naive_substitution", naive_substitution)?;

    let restricted = c.gates().all(in_restricted_set);
    if !restricted {
        let offender = c
            .gates()
            .find(|g| !in_restricted_set(g))
            .map(|g| format!("{}({:?})", g.kind, g.params))
            .unwrap_or_default();
        return Err(CompileError::GateSetViolation(offender));
    }

    let verification = match original {
        Some(orig) => {
            let a = oracle::circuit_unitary(&orig, opts.verify_qubit_cap)?;
            let b = oracle::circuit_unitary(&c, opts.verify_qubit_cap)?;
            let ok = oracle::equal_up_to_permutation_and_phase(
                &a,
                &b,
                c.output_permutation(),
                oracle::CIRCUIT_TOL,
            )?;
            if !ok {
                return Err(CompileError::VerificationFailed(
                    "naive compilation differs from its input".into(),
                ));
            }
            "passed".to_owned()
        }
        None if opts.verify => format!(
            "skipped: {} qubits above the cap of {}",
            n, opts.verify_qubit_cap
        ),
        None => "not requested".to_owned(),
    };

    let (single, two) = count_gates(&c, true);
    let report = CompileReport {
        qubits: n,
        input_single_qubit: in_single,
        input_two_qubit: in_two,
        stages: runner.stages,
        omega: zz_count(&c),
        bounds: BoundChecks::default(),
        single_qubit: single,
        two_qubit: two,
        terminal_rz: terminal_rz_count(&c),
        restricted,
        verification,
        output_permutation: c.output_permutation().to_vec(),
        schedule: Vec::new(),
        total_ms: runner.started.elapsed().as_secs_f64() * 1e3,
        measures_stripped: 0,
        barriers_stripped: 0,
    };
    Ok((c, report))
}

/// Substitutes every gate by its native realization, gate by gate, with no
/// cross-gate optimization.
fn naive_substitution(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    loop {
        let mut any = false;
        for id in c.execution_order() {
            if !c.contains(id) {
                continue;
            }
            let g = c.gate(id)?.clone();
            if in_restricted_set(&g) && !matches!(g.kind, GateKind::Ry | GateKind::R) {
                continue;
            }
            let rhs: Vec<GateSpec> = match g.kind {
                GateKind::Cz => Rule::CzToCnot.apply(&g).unwrap(),
                GateKind::Cu1 => Rule::Cu1ToCnot.apply(&g).unwrap(),
                GateKind::Swap => Rule::SwapToCnot.apply(&g).unwrap(),
                GateKind::Cry => Rule::CryToCnot.apply(&g).unwrap(),
                GateKind::Ccx => Rule::CcxToCnot.apply(&g).unwrap(),
                GateKind::Cnot => Rule::CnotToNative.apply(&g).unwrap(),
                GateKind::Tk1 => {
                    native::tk1_to_native(g.qubits[0], g.params[0], g.params[1], g.params[2])
                }
                GateKind::Zz => {
                    if g.params[0].is_zero() {
                        vec![]
                    } else if g.params[0].approx_eq(Angle::PI)
                        || g.params[0].approx_eq(Angle::THREE_HALF_PI)
                    {
                        Rule::ZzPi
                            .apply(&g)
                            .or_else(|| Rule::Zz3PiHalf.apply(&g))
                            .unwrap()
                    } else {
                        native::zz_to_native(g.qubits[0], g.qubits[1], g.params[0])
                    }
                }
                GateKind::Rx => native::rx_restriction(g.qubits[0], g.params[0]),
                GateKind::Rz => continue,
                // any other single-qubit gate squashes alone into a TK1
                _ => {
                    let m = native::run_product([(g.kind, g.params.to_vec())]);
                    if native::is_identity_up_to_phase(&m, 1e-10) {
                        vec![]
                    } else {
                        let mut tk1 = native::squash_to_tk1(&m);
                        tk1.qubits[0] = g.qubits[0];
                        vec![tk1]
                    }
                }
            };
            c.splice(id, &rhs)?;
            any = true;
            changed = true;
        }
        if !any {
            break;
        }
    }
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}
