//! Boundary operators.
//!
//! On primal content the boundary is the graded derivation fixed by the
//! generator assignments. On dual (functional) content it is the signed
//! adjoint of the input complex's boundary, expanded in closed form on the
//! dual monomial basis. A mixed term `m · φ` (output part times functional
//! part) gets `∂[m]·φ + (-1)^{|m|} m·∂*[φ]`, which is exactly the Hom
//! complex differential `∂[a].c = ∂[a.c] - (-1)^{|a|} a.∂[c]` in element
//! form; the adjointness is locked by tests, not assumed.

use std::sync::Arc;

use crate::context::{Context, Gen, Parity, Polarity};
use crate::error::AlgebraError;
use crate::mv::{Mv, Term, Q};
use crate::pairing::contract;

/// Generator assignments `ĝ_i ↦ g_i`, stored per odd primal family name.
/// Values may live in a smaller context than the operands; their even
/// variables are matched by family name when the boundary is taken.
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    pub map: Vec<(String, Vec<Mv>)>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(mut self, fam: &str, values: Vec<Mv>) -> Self {
        self.map.push((fam.to_string(), values));
        self
    }

    pub fn get(&self, fam: &str) -> Option<&Vec<Mv>> {
        self.map.iter().find(|(n, _)| n == fam).map(|(_, v)| v)
    }
}

/// Where an even family of an assignment value lands in the operand
/// context: shifted down on a dual partner, or multiplied into the primal
/// slots.
enum EvenRoute {
    Shift(usize),
    PassThrough(usize),
}

/// Routing for one even family of an assignment value. The primal
/// derivation channel always multiplies into the primal family; the
/// adjoint channel shifts the dual partner down when one is present
/// (input variables) and otherwise multiplies through (output variables,
/// over which the complex is linear).
fn even_route(ctx: &Context, name: &str, adjoint: bool) -> Result<EvenRoute, AlgebraError> {
    if adjoint {
        for (i, f) in ctx.families.iter().enumerate() {
            if f.parity == Parity::Even
                && f.polarity == Polarity::Dual
                && f.partner.as_deref() == Some(name)
            {
                return Ok(EvenRoute::Shift(i));
            }
        }
    }
    if let Some(i) = ctx.family(name) {
        if ctx.families[i].parity == Parity::Even && ctx.families[i].polarity == Polarity::Primal {
            return Ok(EvenRoute::PassThrough(i));
        }
    }
    Err(AlgebraError::MissingFamily(name.to_string()))
}

/// Multiply the even monomial of `value_term` (in the assignment value's
/// own context) into `term` of the operand context, routing each family
/// through pass-through or dual shift. Returns `None` when a shift
/// underflows (that contribution is zero).
fn route_even(
    ctx: &Context,
    val_ctx: &Context,
    term: &mut Term,
    val_exps: &[u16],
    adjoint: bool,
) -> Result<Option<()>, AlgebraError> {
    for (vfi, vf) in val_ctx.families.iter().enumerate() {
        if vf.parity != Parity::Even {
            continue;
        }
        let src = val_ctx.even_range(vfi);
        if val_exps[src.clone()].iter().all(|&e| e == 0) {
            continue;
        }
        match even_route(ctx, &vf.name, adjoint)? {
            EvenRoute::PassThrough(fi) => {
                let dst = ctx.even_range(fi);
                for (k, off) in dst.enumerate() {
                    term.exps[off] += val_exps[src.start + k];
                }
            }
            EvenRoute::Shift(fi) => {
                let dst = ctx.even_range(fi);
                for (k, off) in dst.enumerate() {
                    let g = val_exps[src.start + k];
                    if term.exps[off] < g {
                        return Ok(None);
                    }
                    term.exps[off] -= g;
                }
            }
        }
    }
    Ok(Some(()))
}

/// The boundary of a (possibly mixed) multivector.
pub fn boundary(mv: &Mv, asg: &Assignment) -> Result<Mv, AlgebraError> {
    let ctx = &mv.ctx;
    let mut out = Mv::zero(ctx);
    for (t, c) in &mv.terms {
        let split = t
            .wedge
            .iter()
            .position(|&(f, _)| ctx.is_dual(f as usize))
            .unwrap_or(t.wedge.len());
        debug_assert!(
            t.wedge[split..].iter().all(|&(f, _)| ctx.is_dual(f as usize)),
            "wedge word must split as [primal][dual]"
        );
        let m_parity = split % 2;

        // derivation over the primal generators
        for (p, &(f, i)) in t.wedge[..split].iter().enumerate() {
            let fam = &ctx.families[f as usize];
            let values = asg.get(&fam.name).ok_or_else(|| {
                AlgebraError::UnassignedGenerator(format!("{}[{}]", fam.name, i))
            })?;
            let value = &values[i as usize];
            let sign = if p % 2 == 0 { 1i32 } else { -1 };
            let mut base = t.clone();
            base.wedge.remove(p);
            for (vt, vc) in &value.terms {
                debug_assert!(vt.wedge.is_empty(), "assignment values must be even");
                let mut nt = base.clone();
                if route_even(ctx, &value.ctx, &mut nt, &vt.exps, false)?.is_none() {
                    continue;
                }
                let mut cc = c * vc;
                if sign < 0 {
                    cc = -cc;
                }
                out.add_term(nt, cc);
            }
        }

        // adjoint on the dual generators: insert one paired generator
        for (dfi, dfam) in ctx.families.iter().enumerate() {
            if dfam.parity != Parity::Odd || dfam.polarity != Polarity::Dual {
                continue;
            }
            let partner = dfam.partner.as_deref().unwrap();
            let values = match asg.get(partner) {
                Some(v) => v,
                None => {
                    if dfam.arity == 0 {
                        continue;
                    }
                    return Err(AlgebraError::UnassignedGenerator(partner.to_string()));
                }
            };
            for i in 0..dfam.arity {
                let gen: Gen = (dfi as u16, i as u16);
                if t.wedge[split..].contains(&gen) {
                    continue;
                }
                // position of the inserted generator in the extended dual
                // word, 1-based
                let pos = t.wedge[split..].iter().filter(|&&g| g < gen).count() + 1;
                let mut sign = if (pos - 1) % 2 == 0 { -1i32 } else { 1 };
                if m_parity == 1 {
                    sign = -sign;
                }
                let value = &values[i];
                let mut base = t.clone();
                let insert_at = split + pos - 1;
                base.wedge.insert(insert_at, gen);
                for (vt, vc) in &value.terms {
                    let mut nt = base.clone();
                    if route_even(ctx, &value.ctx, &mut nt, &vt.exps, true)?.is_none() {
                        continue;
                    }
                    let mut cc = c * vc;
                    if sign < 0 {
                        cc = -cc;
                    }
                    out.add_term(nt, cc);
                }
            }
        }
    }
    Ok(out)
}

pub fn is_cycle(mv: &Mv, asg: &Assignment) -> Result<bool, AlgebraError> {
    Ok(boundary(mv, asg)?.is_zero())
}

/// Composition of two operator elements: contract `a`'s functional slots
/// against `b`'s matching output families. `pairs` names the contracted
/// `(dual, primal)` families; `b`'s own functional slots spectate.
pub fn compose(
    a: &Mv,
    b: &Mv,
    big: &Arc<Context>,
    pairs: &[(&str, &str)],
) -> Result<Mv, AlgebraError> {
    let prod = a.embed(big)?.mul(&b.embed(big)?)?;
    contract(&prod, pairs)
}

/// The Hom-complex boundary applied through the defining formula:
/// `∂[op].c = ∂[op(c)] - (-1)^{op_parity} op(∂[c])` for a function-backed
/// operator.
pub fn hom_boundary_apply<F>(
    op: F,
    op_parity: u8,
    c: &Mv,
    in_asg: &Assignment,
    out_asg: &Assignment,
) -> Result<Mv, AlgebraError>
where
    F: Fn(&Mv) -> Result<Mv, AlgebraError>,
{
    let oc = op(c)?;
    let lhs = boundary(&oc, out_asg)?;
    let odc = op(&boundary(c, in_asg)?)?;
    if op_parity % 2 == 0 {
        lhs.sub(&odc)
    } else {
        lhs.add(&odc)
    }
}

/// Evaluate a pure functional against a multivector (scalar pairing over
/// the given family pairs).
pub fn eval_functional(
    phi: &Mv,
    c: &Mv,
    big: &Arc<Context>,
    pairs: &[(&str, &str)],
) -> Result<Q, AlgebraError> {
    crate::pairing::pair_scalar(phi, c, big, pairs)
}
