//! Seeded random generation of polynomials, multivectors and systems for
//! the property-test suites. All randomness flows through a caller-provided
//! ChaCha generator so runs are reproducible bit-for-bit.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bezout::PolySystem;
use crate::context::{Context, ContextBuilder, Parity};
use crate::mv::{q, sort_wedge, Mv, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_coeff(r: &mut ChaCha8Rng) -> crate::mv::Q {
    let mut c = 0i64;
    while c == 0 {
        c = r.gen_range(-4..=4);
    }
    q(c)
}

fn random_exps(r: &mut ChaCha8Rng, slots: usize, maxdeg: u32) -> Vec<u16> {
    let mut exps = vec![0u16; slots];
    if slots == 0 {
        return exps;
    }
    let d = r.gen_range(0..=maxdeg);
    for _ in 0..d {
        let k = r.gen_range(0..slots);
        exps[k] += 1;
    }
    exps
}

/// Random polynomial in the even variables of `fam`, other families left
/// untouched (zero exponents, no generators).
pub fn random_poly(r: &mut ChaCha8Rng, ctx: &Arc<Context>, fam: &str, maxdeg: u32) -> Mv {
    let fi = ctx.family(fam).expect("family");
    let range = ctx.even_range(fi);
    let nterms = r.gen_range(1..=4);
    let mut out = Mv::zero(ctx);
    for _ in 0..nterms {
        let mut t = Term::scalar(ctx);
        let e = random_exps(r, range.len(), maxdeg);
        t.exps[range.clone()].copy_from_slice(&e);
        out.add_term(t, random_coeff(r));
    }
    out
}

/// Random multivector: monomials over all even slots up to `maxdeg`, wedge
/// words drawn over the odd generators of `ctx` (respecting canonical
/// order).
pub fn random_element(r: &mut ChaCha8Rng, ctx: &Arc<Context>, maxdeg: u32) -> Mv {
    let mut gens = Vec::new();
    for (fi, f) in ctx.families.iter().enumerate() {
        if f.parity == Parity::Odd {
            for i in 0..f.arity {
                gens.push((fi as u16, i as u16));
            }
        }
    }
    let nterms = r.gen_range(1..=4);
    let mut out = Mv::zero(ctx);
    for _ in 0..nterms {
        let mut t = Term::scalar(ctx);
        t.exps = random_exps(r, ctx.even_arity, maxdeg);
        let word: Vec<_> = gens
            .iter()
            .copied()
            .filter(|_| r.gen_bool(0.4))
            .collect();
        let (wedge, _) = sort_wedge(&word).expect("distinct by construction");
        t.wedge = wedge;
        out.add_term(t, random_coeff(r));
    }
    out
}

/// Like [`random_element`] but with every term's wedge word of the exact
/// length `wlen`, so the result is fdeg-homogeneous.
pub fn random_homogeneous(
    r: &mut ChaCha8Rng,
    ctx: &Arc<Context>,
    maxdeg: u32,
    wlen: usize,
) -> Mv {
    let mut gens = Vec::new();
    for (fi, f) in ctx.families.iter().enumerate() {
        if f.parity == Parity::Odd {
            for i in 0..f.arity {
                gens.push((fi as u16, i as u16));
            }
        }
    }
    if wlen > gens.len() {
        return Mv::zero(ctx);
    }
    let nterms = r.gen_range(1..=4);
    let mut out = Mv::zero(ctx);
    for _ in 0..nterms {
        let mut t = Term::scalar(ctx);
        t.exps = random_exps(r, ctx.even_arity, maxdeg);
        let mut pool = gens.clone();
        let mut word = Vec::with_capacity(wlen);
        for _ in 0..wlen {
            let k = r.gen_range(0..pool.len());
            word.push(pool.remove(k));
        }
        let (wedge, _) = sort_wedge(&word).expect("distinct");
        t.wedge = wedge;
        out.add_term(t, random_coeff(r));
    }
    out
}

/// Random polynomial system with `s` polynomials over `n` variables.
pub fn random_system(r: &mut ChaCha8Rng, n: usize, s: usize, maxdeg: u32) -> PolySystem {
    let ctx = ContextBuilder::new().even("x", n).build();
    let f: Vec<Mv> = (0..s).map(|_| random_poly(r, &ctx, "x", maxdeg)).collect();
    PolySystem::new(n, f, None).expect("valid system")
}
