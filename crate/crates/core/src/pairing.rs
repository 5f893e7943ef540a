//! The dual pairing on wedge words and the ⊤ / ⊥ contractions.
//!
//! The pairing of a dual word against a primal word of the same index set,
//! both canonically sorted, is `(-1)^{r(r-1)/2}`; mismatched sets (or
//! lengths) pair to zero. This closed form is derived once from the
//! recursive coproduct definition of the product on the dual algebra and is
//! locked by the `pair_oracle` tests below.
//!
//! Contractions put every term into the normal form
//! `[spectators] · [dual part] · [primal part]`, picking up the parity sign
//! of the reordering, and then pair the named families.

use std::sync::Arc;


use crate::context::{Context, ContextBuilder, Gen, Parity, Polarity};
use crate::error::AlgebraError;
use crate::mv::{sort_wedge, Mv, Term, Q};

/// `(-1)^{r(r-1)/2}`: the pairing sign of two sorted words of length `r`
/// with equal index sets.
pub fn pair_sign(r: usize) -> i32 {
    if (r * r.saturating_sub(1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Pair a sorted dual word against a sorted primal word (indices within one
/// family pair). Zero unless the index sets coincide.
fn pair_words(dual: &[u16], primal: &[u16]) -> i32 {
    if dual.len() != primal.len() || dual != primal {
        return 0;
    }
    pair_sign(dual.len())
}

/// Context with the listed families removed, order otherwise preserved.
pub fn drop_families(ctx: &Arc<Context>, removed: &[usize]) -> Arc<Context> {
    let mut b = ContextBuilder::new();
    for (i, f) in ctx.families.iter().enumerate() {
        if removed.contains(&i) {
            continue;
        }
        b = match (f.parity, f.polarity) {
            (Parity::Even, Polarity::Primal) => b.even(&f.name, f.arity),
            (Parity::Even, Polarity::Dual) => {
                b.even_dual(&f.name, f.arity, f.partner.as_deref().unwrap())
            }
            (Parity::Odd, Polarity::Primal) => b.odd(&f.name, f.arity),
            (Parity::Odd, Polarity::Dual) => {
                b.odd_dual(&f.name, f.arity, f.partner.as_deref().unwrap())
            }
        };
    }
    b.build()
}

/// Sign of the stable reordering of `word` into groups given by `key`
/// (smaller keys first; within a group the stored order is kept).
fn regroup_sign(keys: &[u8]) -> i32 {
    let mut sign = 1i32;
    for i in 0..keys.len() {
        for j in (i + 1)..keys.len() {
            if keys[i] > keys[j] {
                sign = -sign;
            }
        }
    }
    sign
}

struct PairSet {
    even: Vec<(usize, usize)>,
    odd: Option<(usize, usize)>,
    removed: Vec<usize>,
}

fn resolve_pairs(ctx: &Context, pairs: &[(&str, &str)]) -> Result<PairSet, AlgebraError> {
    let mut even = Vec::new();
    let mut odd = None;
    let mut removed = Vec::new();
    for (dname, pname) in pairs {
        let d = ctx.family_or_err(dname)?;
        let p = ctx.family_or_err(pname)?;
        if ctx.families[d].polarity != Polarity::Dual
            || ctx.families[p].polarity != Polarity::Primal
            || ctx.families[d].parity != ctx.families[p].parity
            || ctx.families[d].arity != ctx.families[p].arity
        {
            return Err(AlgebraError::Invalid(format!(
                "cannot pair families {dname} and {pname}"
            )));
        }
        removed.push(d);
        removed.push(p);
        if ctx.families[d].parity == Parity::Even {
            even.push((d, p));
        } else {
            if odd.is_some() {
                return Err(AlgebraError::Invalid(
                    "at most one odd family pair per contraction".into(),
                ));
            }
            odd = Some((d, p));
        }
    }
    Ok(PairSet { even, odd, removed })
}

fn split_word(
    word: &[Gen],
    dual_fam: Option<usize>,
    primal_fam: Option<usize>,
) -> (Vec<Gen>, Vec<u16>, Vec<u16>, i32) {
    // keys: 0 spectator, 1 dual part, 2 primal part
    let keys: Vec<u8> = word
        .iter()
        .map(|&(f, _)| {
            if Some(f as usize) == dual_fam {
                1
            } else if Some(f as usize) == primal_fam {
                2
            } else {
                0
            }
        })
        .collect();
    let sign = regroup_sign(&keys);
    let mut spect = Vec::new();
    let mut dual = Vec::new();
    let mut primal = Vec::new();
    for (g, k) in word.iter().zip(&keys) {
        match k {
            0 => spect.push(*g),
            1 => dual.push(g.1),
            _ => primal.push(g.1),
        }
    }
    (spect, dual, primal, sign)
}

fn sort_sign(word: &[Gen]) -> i32 {
    sort_wedge(word).map(|(_, s)| s).unwrap_or(0)
}

/// ⊤-contraction: fully pair each dual family against its primal partner,
/// leaving the spectators. Terms whose paired content does not match
/// contribute zero.
pub fn contract(mv: &Mv, pairs: &[(&str, &str)]) -> Result<Mv, AlgebraError> {
    let ps = resolve_pairs(&mv.ctx, pairs)?;
    let target = drop_families(&mv.ctx, &ps.removed);
    let mut out = Mv::zero(&target);
    for (t, c) in &mv.terms {
        // even pairs: exponents must match exactly
        let mut dead = false;
        for &(d, p) in &ps.even {
            if t.exps[mv.ctx.even_range(d)] != t.exps[mv.ctx.even_range(p)] {
                dead = true;
                break;
            }
        }
        if dead {
            continue;
        }
        let (spect, dual, primal, mut sign) = split_word(
            &t.wedge,
            ps.odd.map(|(d, _)| d),
            ps.odd.map(|(_, p)| p),
        );
        sign *= pair_words(&dual, &primal);
        if sign == 0 {
            continue;
        }
        let remapped: Vec<Gen> = spect
            .iter()
            .map(|&(f, i)| {
                (
                    target.family(&mv.ctx.families[f as usize].name).unwrap() as u16,
                    i,
                )
            })
            .collect();
        let (sorted, s2) = sort_wedge(&remapped).expect("no repeats");
        sign *= s2;
        let removed_even: Vec<usize> = ps.even.iter().flat_map(|&(d, p)| [d, p]).collect();
        let mut tt = Term::scalar(&target);
        for (fi, fam) in mv.ctx.families.iter().enumerate() {
            if fam.parity == Parity::Even && !removed_even.contains(&fi) {
                let src = mv.ctx.even_range(fi);
                let ti = target.family(&fam.name).unwrap();
                let dst = target.even_range(ti);
                tt.exps[dst].copy_from_slice(&t.exps[src]);
            }
        }
        tt.wedge = sorted;
        let mut cc = c.clone();
        if sign < 0 {
            cc = -cc;
        }
        out.add_term(tt, cc);
    }
    Ok(out)
}

/// ⊥-contraction: pair the primal part into the dual part, keeping the
/// leftover dual slots open. The result is a functional-valued element in
/// the context with the primal families removed.
pub fn contract_left(mv: &Mv, pairs: &[(&str, &str)]) -> Result<Mv, AlgebraError> {
    let ps = resolve_pairs(&mv.ctx, pairs)?;
    let primal_removed: Vec<usize> = {
        let mut v: Vec<usize> = ps.even.iter().map(|&(_, p)| p).collect();
        if let Some((_, p)) = ps.odd {
            v.push(p);
        }
        v
    };
    let target = drop_families(&mv.ctx, &primal_removed);
    let mut out = Mv::zero(&target);
    'term: for (t, c) in &mv.terms {
        let mut new_exps = t.exps.clone();
        for &(d, p) in &ps.even {
            let (droff, proff) = (mv.ctx.even_range(d), mv.ctx.even_range(p));
            for k in 0..droff.len() {
                let a = t.exps[droff.start + k];
                let b = t.exps[proff.start + k];
                if b > a {
                    continue 'term;
                }
                new_exps[droff.start + k] = a - b;
            }
        }
        let (spect, dual, primal, mut sign) = split_word(
            &t.wedge,
            ps.odd.map(|(d, _)| d),
            ps.odd.map(|(_, p)| p),
        );
        // primal word must embed into the dual word; leftover keeps pairing
        // ⟨ψ, b⟩ = ⟨w_*, v·b⟩ exact.
        let mut leftover: Vec<u16> = Vec::new();
        {
            let mut pi = 0usize;
            for &g in &dual {
                if pi < primal.len() && primal[pi] == g {
                    pi += 1;
                } else {
                    leftover.push(g);
                }
            }
            if pi < primal.len() {
                continue 'term;
            }
        }
        let r = dual.len();
        let rb = leftover.len();
        // sign of merging primal·leftover back into the sorted dual word
        let merged: Vec<Gen> = primal
            .iter()
            .map(|&i| (0u16, i))
            .chain(leftover.iter().map(|&i| (0u16, i)))
            .collect();
        let merge_sign = sort_sign(&merged);
        sign *= merge_sign * pair_sign(r) * pair_sign(rb);
        if sign == 0 {
            continue;
        }
        let dual_fam = ps.odd.map(|(d, _)| d);
        let mut word: Vec<Gen> = spect.clone();
        if let Some(df) = dual_fam {
            word.extend(leftover.iter().map(|&i| (df as u16, i)));
        }
        let remapped: Vec<Gen> = word
            .iter()
            .map(|&(f, i)| (target.family(&mv.ctx.families[f as usize].name).unwrap() as u16, i))
            .collect();
        let (sorted, s2) = sort_wedge(&remapped).expect("no repeats");
        sign *= s2;
        let skip: Vec<usize> = ps.even.iter().map(|&(_, p)| p).collect();
        let mut tt = Term::scalar(&target);
        for (fi, fam) in mv.ctx.families.iter().enumerate() {
            if fam.parity == Parity::Even && !skip.contains(&fi) {
                let src = mv.ctx.even_range(fi);
                let ti = target.family(&fam.name).unwrap();
                let dst = target.even_range(ti);
                tt.exps[dst].copy_from_slice(&new_exps[src]);
            }
        }
        tt.wedge = sorted;
        let mut cc = c.clone();
        if sign < 0 {
            cc = -cc;
        }
        out.add_term(tt, cc);
    }
    Ok(out)
}

/// Evaluate a functional-valued element against a multivector over the
/// named family pairs: embeds both into a common context, multiplies, and
/// fully contracts. `dual_elem` is on the left, matching `a.c` in the
/// conventions used throughout.
pub fn apply_functional(
    dual_elem: &Mv,
    c: &Mv,
    big: &Arc<Context>,
    pairs: &[(&str, &str)],
) -> Result<Mv, AlgebraError> {
    let a = dual_elem.embed(big)?;
    let b = c.embed(big)?;
    contract(&a.mul(&b)?, pairs)
}

/// Full scalar pairing when nothing spectates.
pub fn pair_scalar(
    dual_elem: &Mv,
    c: &Mv,
    big: &Arc<Context>,
    pairs: &[(&str, &str)],
) -> Result<Q, AlgebraError> {
    let r = apply_functional(dual_elem, c, big, pairs)?;
    for t in r.terms.keys() {
        if t.total_degree() != 0 || !t.wedge.is_empty() {
            return Err(AlgebraError::Invalid(
                "pairing left non-scalar residue".into(),
            ));
        }
    }
    Ok(r.scalar_part())
}

/// Dual basis element of a primal basis term: the dual word with the
/// normalization sign so that it evaluates to 1 on its primal mate.
pub fn dual_basis_sign(word_len: usize) -> Q {
    let mut c = Q::from(num::BigInt::from(1));
    if pair_sign(word_len) < 0 {
        c = -c;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ContextBuilder;
    use crate::mv::q;

    /// Direct recursive expansion of the coproduct definition of the dual
    /// pairing, independent of `pair_words`.
    fn pair_oracle(dual: &[usize], primal: &[usize]) -> i64 {
        if primal.is_empty() {
            return if dual.is_empty() { 1 } else { 0 };
        }
        if dual.is_empty() {
            return 0;
        }
        let head = primal[0];
        let tail = &primal[1..];
        let mut total = 0i64;
        for p in 0..dual.len() {
            // send position p to the primed copy, the rest to the double
            // primed one; reorder to [double-primed][primed] by moving the
            // primed factor to the end
            let sign = if (dual.len() - 1 - p) % 2 == 0 { 1 } else { -1 };
            if dual[p] == head {
                let rest: Vec<usize> = dual
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != p)
                    .map(|(_, &g)| g)
                    .collect();
                total += sign * pair_oracle(&rest, tail);
            }
        }
        total
    }

    #[test]
    fn pairing_matches_recursive_oracle() {
        // all sorted words over 3 generators, r <= 3
        let gens = [0usize, 1, 2];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for r in 1..=3 {
            for c in combinations(&gens, r) {
                words.push(c);
            }
        }
        for a in &words {
            for c in &words {
                let expect = pair_oracle(a, c);
                let au: Vec<u16> = a.iter().map(|&x| x as u16).collect();
                let cu: Vec<u16> = c.iter().map(|&x| x as u16).collect();
                assert_eq!(
                    pair_words(&au, &cu) as i64,
                    expect,
                    "pairing mismatch for {a:?} . {c:?}"
                );
            }
        }
        // one permuted spot check: <f*1 f*2, f2 f1> = -<f*1 f*2, f1 f2> = +1
        assert_eq!(pair_oracle(&[0, 1], &[1, 0]), 1);
    }

    fn combinations(items: &[usize], r: usize) -> Vec<Vec<usize>> {
        if r == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            for mut rest in combinations(&items[i + 1..], r - 1) {
                let mut v = vec![x];
                v.append(&mut rest);
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn rank_one_pairing() {
        let ctx = ContextBuilder::new()
            .odd("f", 2)
            .odd_dual("f*", 2, "f")
            .build();
        let fs1 = Mv::gen_by_name(&ctx, "f*", 0);
        let f1 = Mv::gen_by_name(&ctx, "f", 0);
        let f2 = Mv::gen_by_name(&ctx, "f", 1);
        let p = contract(&fs1.mul(&f1).unwrap(), &[("f*", "f")]).unwrap();
        assert_eq!(p.scalar_part(), q(1));
        let p0 = contract(&fs1.mul(&f2).unwrap(), &[("f*", "f")]).unwrap();
        assert!(p0.is_zero());
    }

    #[test]
    fn two_form_pairing_sign() {
        let ctx = ContextBuilder::new()
            .odd("f", 2)
            .odd_dual("f*", 2, "f")
            .build();
        let w = Mv::gen_by_name(&ctx, "f*", 0)
            .mul(&Mv::gen_by_name(&ctx, "f*", 1))
            .unwrap();
        let v = Mv::gen_by_name(&ctx, "f", 0)
            .mul(&Mv::gen_by_name(&ctx, "f", 1))
            .unwrap();
        let p = contract(&w.mul(&v).unwrap(), &[("f*", "f")]).unwrap();
        // the convention constant: (f*^1 f*^2).(f^1 f^2) = -1
        assert_eq!(p.scalar_part(), -q(1));
    }

    #[test]
    fn degree_mismatch_pairs_to_zero() {
        let ctx = ContextBuilder::new()
            .odd("f", 1)
            .odd("u", 1)
            .odd_dual("u*", 1, "u")
            .build();
        // ⊤_u[(−u*^1)·f^1] = 0: the dual u* factor finds no u to pair
        let e = Mv::gen_by_name(&ctx, "u*", 0)
            .neg()
            .mul(&Mv::gen_by_name(&ctx, "f", 0))
            .unwrap();
        assert!(contract(&e, &[("u*", "u")]).unwrap().is_zero());
        // ⊤_u[(−u*^1)·(−u^1)] = +1
        let e2 = Mv::gen_by_name(&ctx, "u*", 0)
            .neg()
            .mul(&Mv::gen_by_name(&ctx, "u", 0).neg())
            .unwrap();
        assert_eq!(contract(&e2, &[("u*", "u")]).unwrap().scalar_part(), q(1));
    }

    #[test]
    fn empty_family_contraction_is_identity() {
        let ctx = ContextBuilder::new()
            .even("x", 1)
            .odd("f", 1)
            .odd("p", 0)
            .odd_dual("p*", 0, "p")
            .build();
        let c = Mv::var_by_name(&ctx, "x", 0)
            .mul(&Mv::gen_by_name(&ctx, "f", 0))
            .unwrap();
        let r = contract(&c, &[("p*", "p")]).unwrap();
        let tgt = r.ctx.clone();
        let expect = c.project(&tgt).unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn contract_left_unit_and_monomial() {
        let ctx = ContextBuilder::new()
            .even("x", 1)
            .even_dual("x*", 1, "x")
            .build();
        // functional (x^1)_*, c = x: ⟨⊥, b⟩ = ⟨(x^1)_*, x·b⟩ → (x^0)_*
        let mut t = Term::scalar(&ctx);
        t.exps[1] = 1; // x* slot
        let mut f = Mv::zero(&ctx);
        f.terms.insert(t, q(1));
        let x = Mv::var_by_name(&ctx, "x", 0);
        let r = contract_left(&f.mul(&x).unwrap(), &[("x*", "x")]).unwrap();
        // result: the (x^0)_* functional, i.e. the scalar-selecting dual term
        assert_eq!(r.terms.len(), 1);
        let (t0, c0) = r.terms.iter().next().unwrap();
        assert_eq!(c0, &q(1));
        assert!(t0.exps.iter().all(|&e| e == 0));
        // ⊥ with c = 1 leaves the functional unchanged
        let r2 = contract_left(&f, &[("x*", "x")]).unwrap();
        assert_eq!(r2.terms.len(), 1);
        // ⊥ of zero is zero
        let z = Mv::zero(&ctx);
        assert!(contract_left(&z, &[("x*", "x")]).unwrap().is_zero());
    }

    #[test]
    fn contract_left_consistency_with_pairing() {
        // ⟨⊥(w · v), b⟩ == ⟨w, v·b⟩ for words over 3 generators
        let ctx = ContextBuilder::new()
            .odd("f", 3)
            .odd_dual("f*", 3, "f")
            .build();
        let word = |fam: &str, idxs: &[usize]| -> Mv {
            let mut m = Mv::one(&ctx);
            for &i in idxs {
                m = m.mul(&Mv::gen_by_name(&ctx, fam, i)).unwrap();
            }
            m
        };
        let sets: Vec<Vec<usize>> = vec![
            vec![],
            vec![0],
            vec![1],
            vec![0, 1],
            vec![0, 2],
            vec![0, 1, 2],
        ];
        for w in &sets {
            for v in &sets {
                for b in &sets {
                    let lhs_elem =
                        contract_left(&word("f*", w).mul(&word("f", v)).unwrap(), &[("f*", "f")])
                            .unwrap();
                    let lhs =
                        pair_scalar(&lhs_elem, &word("f", b), &ctx, &[("f*", "f")]).unwrap();
                    let vb = word("f", v).mul(&word("f", b)).unwrap();
                    let rhs = pair_scalar(&word("f*", w), &vb, &ctx, &[("f*", "f")]).unwrap();
                    assert_eq!(lhs, rhs, "w={w:?} v={v:?} b={b:?}");
                }
            }
        }
    }
}
