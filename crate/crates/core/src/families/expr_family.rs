use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use super::{Domain, FamilyKind, Immersion};
use crate::error::{Error, Result};
use crate::expr::{eval, Env, Expr, ExprError};
use crate::kernel::Point5;

/// Norm deviation above which evaluation logs a warning (once per immersion).
pub const EXPR_NORM_WARN: f64 = 1e-8;
/// Norm deviation above which evaluation fails with `NotOnSphere`.
pub const EXPR_NORM_ERROR: f64 = 1e-4;

/// Immersion whose five components are parsed expressions in u, v, z and
/// named constants. Jets come from finite differences only.
pub fn make_expr_immersion(
    label: impl Into<String>,
    components: [Expr; 5],
    constants: &BTreeMap<String, f64>,
    domain: Domain,
) -> Result<Immersion> {
    let env = Env::default().with_constants(constants.iter().map(|(k, v)| (k.as_str(), *v)));
    for e in &components {
        for name in e.named_constants() {
            if !env.has_constant(name) {
                let name = name.to_string();
                return Err(ExprError::UnboundName { name }.into());
            }
        }
    }
    let warned = Arc::new(AtomicBool::new(false));
    let label = label.into();
    let tag = label.clone();
    let eval_fn = Arc::new(move |p: [f64; 3]| {
        let mut env = env.clone();
        env.set_point(p);
        let mut x = Point5::ZERO;
        for (k, e) in components.iter().enumerate() {
            x[k] = eval(e, &env)?;
        }
        let deviation = (x.norm() - 1.0).abs();
        if deviation > EXPR_NORM_ERROR {
            return Err(Error::NotOnSphere { deviation });
        }
        if deviation > EXPR_NORM_WARN && !warned.swap(true, Ordering::Relaxed) {
            log::warn!("{tag}: |x| deviates from 1 by {deviation:e} at {p:?}");
        }
        Ok(x)
    });
    Ok(Immersion::new(label, domain, FamilyKind::Expr, eval_fn, None))
}
