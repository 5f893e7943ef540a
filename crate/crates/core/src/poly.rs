//! Polynomial-level operations: exact division by a linear difference and
//! divided differences with their telescoping identity.
//!
//! Polynomials are multivectors without odd content; the division routines
//! also accept mixed elements, treating wedge words as inert tags.

use std::sync::Arc;

use crate::context::Context;
use crate::error::AlgebraError;
use crate::mv::{subst, Mv};

/// Product of two polynomials (no odd content allowed).
pub fn poly_mul(a: &Mv, b: &Mv) -> Result<Mv, AlgebraError> {
    for t in a.terms.keys().chain(b.terms.keys()) {
        if !t.wedge.is_empty() {
            return Err(AlgebraError::Invalid("not a polynomial".into()));
        }
    }
    a.mul(b)
}

/// Simultaneous substitution of even variables of one family.
pub fn poly_subst(
    p: &Mv,
    fam: &str,
    values: Vec<Mv>,
    target: &Arc<Context>,
) -> Result<Mv, AlgebraError> {
    let fi = p.ctx.family_or_err(fam)?;
    subst(p, &[(fi, values)], &[], target)
}

/// Exact division by `v - w` where `v`, `w` are the even variables at flat
/// exponent slots `xslot` and `yslot`. Errors if the remainder is nonzero.
pub fn divexact_slots(p: &Mv, xslot: usize, yslot: usize) -> Result<Mv, AlgebraError> {
    let mut quot = Mv::zero(&p.ctx);
    let mut rem = p.clone();
    loop {
        // highest x-exponent still present
        let d = rem
            .terms
            .keys()
            .map(|t| t.exps[xslot])
            .max()
            .unwrap_or(0);
        if d == 0 {
            if rem.is_zero() {
                return Ok(quot);
            }
            return Err(AlgebraError::NotDivisible(format!(
                "slots {xslot} - {yslot}"
            )));
        }
        let mut lead = Mv::zero(&p.ctx);
        for (t, c) in &rem.terms {
            if t.exps[xslot] == d {
                let mut tt = t.clone();
                tt.exps[xslot] = d - 1;
                lead.add_term(tt, c.clone());
            }
        }
        // quot += lead ; rem -= lead * (x - y)
        quot = quot.add(&lead)?;
        let mut shift = Mv::zero(&p.ctx);
        for (t, c) in &lead.terms {
            let mut tx = t.clone();
            tx.exps[xslot] += 1;
            shift.add_term(tx, c.clone());
            let mut ty = t.clone();
            ty.exps[yslot] += 1;
            shift.add_term(ty, -c.clone());
        }
        rem = rem.sub(&shift)?;
    }
}

/// Exact division by `xfam[k] - yfam[k]`.
pub fn divexact_linear(p: &Mv, xfam: &str, yfam: &str, k: usize) -> Result<Mv, AlgebraError> {
    let xf = p.ctx.family_or_err(xfam)?;
    let yf = p.ctx.family_or_err(yfam)?;
    let xslot = p.ctx.even_range(xf).start + k;
    let yslot = p.ctx.even_range(yf).start + k;
    divexact_slots(p, xslot, yslot)
}

/// Divided differences of `f(x)` with respect to the given variable order.
///
/// Returns `d[k] = (f(..,x_k,..) - f(..,y_k,..)) / (x_k - y_k)` indexed by
/// variable, where variables earlier in `order` have already been moved to
/// `y` and later ones are still at `x`. The telescoping identity
/// `f(x) - f(y) = sum_k (x_k - y_k) d[k]` holds exactly.
pub fn divided_differences(
    f: &Mv,
    order: &[usize],
    xfam: &str,
    yfam: &str,
    target: &Arc<Context>,
) -> Result<Vec<Mv>, AlgebraError> {
    let xf = f.ctx.family_or_err(xfam)?;
    let n = f.ctx.families[xf].arity;
    if order.len() != n {
        return Err(AlgebraError::Invalid("order must permute 1..n".into()));
    }
    let mut pos = vec![usize::MAX; n];
    for (p, &k) in order.iter().enumerate() {
        if k >= n || pos[k] != usize::MAX {
            return Err(AlgebraError::Invalid("order must permute 1..n".into()));
        }
        pos[k] = p;
    }
    let xv: Vec<Mv> = (0..n).map(|i| Mv::var_by_name(target, xfam, i)).collect();
    let yv: Vec<Mv> = (0..n).map(|i| Mv::var_by_name(target, yfam, i)).collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let hi: Vec<Mv> = (0..n)
            .map(|j| {
                if pos[j] < pos[k] {
                    yv[j].clone()
                } else {
                    xv[j].clone()
                }
            })
            .collect();
        let mut lo = hi.clone();
        lo[k] = yv[k].clone();
        let t1 = subst(f, &[(xf, hi)], &[], target)?;
        let t2 = subst(f, &[(xf, lo)], &[], target)?;
        out.push(divexact_linear(&t1.sub(&t2)?, xfam, yfam, k)?);
    }
    Ok(out)
}

/// `f(x) - f(y)` in the target context (telescoping oracle helper).
pub fn difference(
    f: &Mv,
    xfam: &str,
    yfam: &str,
    target: &Arc<Context>,
) -> Result<Mv, AlgebraError> {
    let xf = f.ctx.family_or_err(xfam)?;
    let n = f.ctx.families[xf].arity;
    let xv: Vec<Mv> = (0..n).map(|i| Mv::var_by_name(target, xfam, i)).collect();
    let yv: Vec<Mv> = (0..n).map(|i| Mv::var_by_name(target, yfam, i)).collect();
    let fx = subst(f, &[(xf, xv)], &[], target)?;
    let fy = subst(f, &[(xf, yv)], &[], target)?;
    fx.sub(&fy)
}
