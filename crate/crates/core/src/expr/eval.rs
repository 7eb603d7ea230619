use std::collections::BTreeMap;

use super::ast::{BinOp, Expr, Func, Var};
use super::ExprError;

/// Evaluation environment: chart coordinates plus named constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Env {
    pub u: f64,
    pub v: f64,
    pub z: f64,
    constants: BTreeMap<String, f64>,
}

impl Default for Env {
    fn default() -> Self {
        let mut constants = BTreeMap::new();
        constants.insert("pi".to_string(), std::f64::consts::PI);
        constants.insert("e".to_string(), std::f64::consts::E);
        Env {
            u: 0.0,
            v: 0.0,
            z: 0.0,
            constants,
        }
    }
}

impl Env {
    pub fn at(u: f64, v: f64, z: f64) -> Self {
        Env {
            u,
            v,
            z,
            ..Env::default()
        }
    }

    pub fn with_constants<'a>(mut self, consts: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        for (k, v) in consts {
            self.constants.insert(k.to_string(), v);
        }
        self
    }

    pub fn set_point(&mut self, p: [f64; 3]) {
        self.u = p[0];
        self.v = p[1];
        self.z = p[2];
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.contains_key(name)
    }
}

fn domain_error(reason: &str) -> ExprError {
    ExprError::Eval {
        reason: reason.to_string(),
    }
}

pub fn apply_func(f: Func, x: f64) -> Result<f64, ExprError> {
    Ok(match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Exp => x.exp(),
        Func::Log => {
            if x <= 0.0 {
                return Err(domain_error("log of a non-positive number"));
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(domain_error("sqrt of a negative number"));
            }
            x.sqrt()
        }
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Tanh => x.tanh(),
        Func::Atan => x.atan(),
        Func::Abs => x.abs(),
    })
}

pub fn apply_binary(op: BinOp, a: f64, b: f64) -> Result<f64, ExprError> {
    Ok(match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b == 0.0 {
                return Err(domain_error("division by zero"));
            }
            a / b
        }
        BinOp::Pow => {
            if a < 0.0 && b.fract() != 0.0 {
                return Err(domain_error("non-integer power of a negative base"));
            }
            if a == 0.0 && b < 0.0 {
                return Err(domain_error("negative power of zero"));
            }
            a.powf(b)
        }
    })
}

fn finite(x: f64) -> Result<f64, ExprError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(domain_error("non-finite result"))
    }
}

/// Evaluates `e` in IEEE double precision. Domain violations are errors,
/// never NaN or infinity.
pub fn eval(e: &Expr, env: &Env) -> Result<f64, ExprError> {
    match e {
        Expr::Constant(c) => Ok(*c),
        Expr::Variable(Var::U) => Ok(env.u),
        Expr::Variable(Var::V) => Ok(env.v),
        Expr::Variable(Var::Z) => Ok(env.z),
        Expr::NamedConst(n) => env
            .constant(n)
            .ok_or_else(|| ExprError::UnboundName { name: n.clone() }),
        Expr::Neg(c) => Ok(-eval(c, env)?),
        Expr::Binary(op, l, r) => finite(apply_binary(*op, eval(l, env)?, eval(r, env)?)?),
        Expr::Call(f, a) => finite(apply_func(*f, eval(a, env)?)?),
    }
}
