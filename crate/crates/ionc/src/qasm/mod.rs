//! OpenQASM 2.0 frontend for the benchmark circuit format.
//!
//! Supports the qelib1 subset found in the benchmark library: register
//! declarations, gate applications (with register broadcast), user-defined
//! gates (inlined recursively), `measure` and `barrier` (stripped and
//! counted). Classical control flow is rejected rather than skipped.

mod lex;
mod lower;
mod parse;

pub use lower::{lower_to_dag, LowerStats};
pub use parse::parse_qasm;

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

/// A parsed OpenQASM 2.0 program.
#[derive(Clone, Debug)]
pub struct QasmProgram {
    pub version: String,
    pub statements: Vec<Stmt>,
}

#[derive(Clone, Debug)]
pub enum Stmt {
    QReg { name: String, size: usize, pos: Pos },
    CReg { name: String, size: usize, pos: Pos },
    GateDef(GateDef),
    App(GateApp),
    Measure { qarg: Arg, carg: Arg, pos: Pos },
    Barrier { args: Vec<Arg>, pos: Pos },
}

/// User gate definition `gate name(params) qubits { body }`.
#[derive(Clone, Debug)]
pub struct GateDef {
    pub name: String,
    pub params: Vec<String>,
    pub qubits: Vec<String>,
    pub body: Vec<GateApp>,
    pub pos: Pos,
}

/// One gate application statement.
#[derive(Clone, Debug)]
pub struct GateApp {
    pub name: String,
    pub params: Vec<Expr>,
    pub args: Vec<Arg>,
    pub pos: Pos,
}

/// A register reference, optionally indexed.
#[derive(Clone, Debug)]
pub struct Arg {
    pub reg: String,
    pub index: Option<usize>,
    pub pos: Pos,
}

/// Angle expression grammar of OpenQASM 2.0.
#[derive(Clone, Debug)]
pub enum Expr {
    Num(f64),
    Pi,
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
}

impl Expr {
    /// Evaluates with the given parameter bindings, in radians.
    pub fn eval(&self, env: &dyn Fn(&str) -> Option<f64>) -> Result<f64, String> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Pi => std::f64::consts::PI,
            Expr::Ident(name) => env(name).ok_or_else(|| format!("unknown parameter `{name}`"))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Div(a, b) => {
                let d = b.eval(env)?;
                if d == 0.0 {
                    return Err("division by zero in angle expression".into());
                }
                a.eval(env)? / d
            }
            Expr::Pow(a, b) => a.eval(env)?.powf(b.eval(env)?),
            Expr::Call(f, e) => {
                let v = e.eval(env)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tan => v.tan(),
                    Func::Exp => v.exp(),
                    Func::Ln => v.ln(),
                    Func::Sqrt => v.sqrt(),
                }
            }
        })
    }
}
