//! Sparse multivectors: finitely supported sums of
//! `coefficient * monomial * wedge word` over a [`Context`].
//!
//! Wedge words are stored canonically sorted (family declaration order,
//! then index) with the reordering sign absorbed into the coefficient, so
//! structural equality is semantic equality.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::context::{Context, Gen, Parity, Polarity};
use crate::error::AlgebraError;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub exps: Vec<u16>,
    pub wedge: Vec<Gen>,
}

impl Term {
    pub fn scalar(ctx: &Context) -> Term {
        Term {
            exps: vec![0; ctx.even_arity],
            wedge: Vec::new(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }
}

/// Sort a wedge word into canonical order.
/// Returns `None` if a generator repeats (the term vanishes), otherwise the
/// sorted word and the sign of the permutation.
pub fn sort_wedge(word: &[Gen]) -> Option<(Vec<Gen>, i32)> {
    let mut w = word.to_vec();
    let mut sign = 1i32;
    // insertion sort, counting transpositions
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for i in 1..w.len() {
        if w[i - 1] == w[i] {
            return None;
        }
    }
    Some((w, sign))
}

/// Merge two canonically sorted wedge words, returning the merged word and
/// the parity sign of interleaving, or `None` on a repeated generator.
pub fn merge_wedge(a: &[Gen], b: &[Gen]) -> Option<(Vec<Gen>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i32;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            // b[j] moves left past the remaining a[i..]
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

#[derive(Debug, Clone)]
pub struct Mv {
    pub ctx: Arc<Context>,
    pub terms: BTreeMap<Term, Q>,
}

impl PartialEq for Mv {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}
impl Eq for Mv {}

impl Mv {
    pub fn zero(ctx: &Arc<Context>) -> Mv {
        Mv {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(ctx: &Arc<Context>, c: Q) -> Mv {
        let mut mv = Mv::zero(ctx);
        if !c.is_zero() {
            mv.terms.insert(Term::scalar(ctx), c);
        }
        mv
    }

    pub fn one(ctx: &Arc<Context>) -> Mv {
        Mv::scalar(ctx, Q::one())
    }

    /// The variable `fam[idx]` as a degree-one monomial.
    pub fn var(ctx: &Arc<Context>, fam: usize, idx: usize) -> Mv {
        assert_eq!(ctx.families[fam].parity, Parity::Even);
        assert!(idx < ctx.families[fam].arity);
        let mut t = Term::scalar(ctx);
        t.exps[ctx.even_range(fam).start + idx] = 1;
        let mut mv = Mv::zero(ctx);
        mv.terms.insert(t, Q::one());
        mv
    }

    /// The odd generator `fam[idx]`.
    pub fn gen(ctx: &Arc<Context>, fam: usize, idx: usize) -> Mv {
        assert_eq!(ctx.families[fam].parity, Parity::Odd);
        assert!(idx < ctx.families[fam].arity);
        let mut t = Term::scalar(ctx);
        t.wedge = vec![(fam as u16, idx as u16)];
        let mut mv = Mv::zero(ctx);
        mv.terms.insert(t, Q::one());
        mv
    }

    pub fn var_by_name(ctx: &Arc<Context>, fam: &str, idx: usize) -> Mv {
        Mv::var(ctx, ctx.family(fam).expect("family"), idx)
    }

    pub fn gen_by_name(ctx: &Arc<Context>, fam: &str, idx: usize) -> Mv {
        Mv::gen(ctx, ctx.family(fam).expect("family"), idx)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: Term, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get_mut();
                *v += c;
                if v.is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ctx(&self, other: &Mv) -> Result<(), AlgebraError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Mv) -> Result<Mv, AlgebraError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Mv) -> Result<Mv, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mv {
        let mut out = Mv::zero(&self.ctx);
        for (t, c) in &self.terms {
            out.terms.insert(t.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Mv {
        let mut out = Mv::zero(&self.ctx);
        if k.is_zero() {
            return out;
        }
        for (t, c) in &self.terms {
            out.terms.insert(t.clone(), c * k);
        }
        out
    }

    /// Wedge/ring product. Signs come from interleaving odd generators;
    /// repeated generators kill the term.
    pub fn mul(&self, other: &Mv) -> Result<Mv, AlgebraError> {
        self.check_ctx(other)?;
        let mut out = Mv::zero(&self.ctx);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                if let Some((wedge, sign)) = merge_wedge(&ta.wedge, &tb.wedge) {
                    let exps = ta
                        .exps
                        .iter()
                        .zip(&tb.exps)
                        .map(|(a, b)| a + b)
                        .collect();
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(Term { exps, wedge }, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Mv, AlgebraError> {
        let mut out = Mv::one(&self.ctx);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// f̂-degree of a term: +1 per primal odd generator, −1 per dual one.
    pub fn term_fdegree(&self, t: &Term) -> i64 {
        t.wedge
            .iter()
            .map(|&(f, _)| {
                if self.ctx.families[f as usize].polarity == Polarity::Dual {
                    -1
                } else {
                    1
                }
            })
            .sum()
    }

    /// f̂-degree if homogeneous.
    pub fn fdegree(&self) -> Result<i64, AlgebraError> {
        let mut deg = None;
        for t in self.terms.keys() {
            let d = self.term_fdegree(t);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                _ => return Err(AlgebraError::Inhomogeneous),
            }
        }
        Ok(deg.unwrap_or(0))
    }

    /// Wedge parity if homogeneous (0 even, 1 odd).
    pub fn parity(&self) -> Result<u8, AlgebraError> {
        let mut p = None;
        for t in self.terms.keys() {
            let tp = (t.wedge.len() % 2) as u8;
            match p {
                None => p = Some(tp),
                Some(p0) if p0 == tp => {}
                _ => return Err(AlgebraError::Inhomogeneous),
            }
        }
        Ok(p.unwrap_or(0))
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|t| t.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient magnitude (for diagnostics).
    pub fn coeff_height(&self) -> Q {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Re-express this multivector in `target`, matching families by name.
    /// Families absent from `self` get zero exponents / no generators.
    pub fn embed(&self, target: &Arc<Context>) -> Result<Mv, AlgebraError> {
        if &self.ctx == target {
            return Ok(self.clone());
        }
        // family index map
        let mut fam_map = Vec::with_capacity(self.ctx.families.len());
        for f in &self.ctx.families {
            let ti = target
                .family(&f.name)
                .ok_or_else(|| AlgebraError::MissingFamily(f.name.clone()))?;
            let tf = &target.families[ti];
            if tf.arity != f.arity || tf.parity != f.parity || tf.polarity != f.polarity {
                return Err(AlgebraError::ArityMismatch(f.name.clone()));
            }
            fam_map.push(ti);
        }
        let mut out = Mv::zero(target);
        for (t, c) in &self.terms {
            let mut exps = vec![0u16; target.even_arity];
            for (fi, fam) in self.ctx.families.iter().enumerate() {
                if fam.parity == Parity::Even {
                    let src = self.ctx.even_range(fi);
                    let dst = target.even_range(fam_map[fi]);
                    exps[dst].copy_from_slice(&t.exps[src]);
                }
            }
            let word: Vec<Gen> = t
                .wedge
                .iter()
                .map(|&(f, i)| (fam_map[f as usize] as u16, i))
                .collect();
            match sort_wedge(&word) {
                Some((wedge, sign)) => {
                    let mut cc = c.clone();
                    if sign < 0 {
                        cc = -cc;
                    }
                    out.add_term(Term { exps, wedge }, cc);
                }
                None => unreachable!("embedding cannot repeat generators"),
            }
        }
        Ok(out)
    }

    /// Re-express in `target` with families renamed through `map`
    /// (old name, new name); unlisted families keep their name. Arities,
    /// parities and polarities must agree.
    pub fn rename(&self, map: &[(&str, &str)], target: &Arc<Context>) -> Result<Mv, AlgebraError> {
        let mut fam_map = Vec::with_capacity(self.ctx.families.len());
        for f in &self.ctx.families {
            let new_name = map
                .iter()
                .find(|(o, _)| *o == f.name)
                .map(|(_, n)| *n)
                .unwrap_or(&f.name);
            let ti = target
                .family(new_name)
                .ok_or_else(|| AlgebraError::MissingFamily(new_name.to_string()))?;
            let tf = &target.families[ti];
            if tf.arity != f.arity || tf.parity != f.parity || tf.polarity != f.polarity {
                return Err(AlgebraError::ArityMismatch(new_name.to_string()));
            }
            fam_map.push(ti);
        }
        let mut out = Mv::zero(target);
        for (t, c) in &self.terms {
            let mut exps = vec![0u16; target.even_arity];
            for (fi, fam) in self.ctx.families.iter().enumerate() {
                if fam.parity == Parity::Even {
                    let src = self.ctx.even_range(fi);
                    let dst = target.even_range(fam_map[fi]);
                    exps[dst].copy_from_slice(&t.exps[src]);
                }
            }
            let word: Vec<Gen> = t
                .wedge
                .iter()
                .map(|&(f, i)| (fam_map[f as usize] as u16, i))
                .collect();
            let (wedge, sign) = sort_wedge(&word).expect("renaming cannot repeat generators");
            let mut cc = c.clone();
            if sign < 0 {
                cc = -cc;
            }
            out.add_term(Term { exps, wedge }, cc);
        }
        Ok(out)
    }

    /// Restrict to the sub-context `target`: like `embed`, but families of
    /// `self` that are missing from `target` must not occur in any term.
    pub fn project(&self, target: &Arc<Context>) -> Result<Mv, AlgebraError> {
        let mut out = Mv::zero(target);
        for (t, c) in &self.terms {
            let mut exps = vec![0u16; target.even_arity];
            for (fi, fam) in self.ctx.families.iter().enumerate() {
                match (fam.parity, target.family(&fam.name)) {
                    (Parity::Even, Some(ti)) => {
                        let src = self.ctx.even_range(fi);
                        let dst = target.even_range(ti);
                        exps[dst].copy_from_slice(&t.exps[src]);
                    }
                    (Parity::Even, None) => {
                        if t.exps[self.ctx.even_range(fi)].iter().any(|&e| e != 0) {
                            return Err(AlgebraError::MissingFamily(fam.name.clone()));
                        }
                    }
                    (Parity::Odd, _) => {}
                }
            }
            let mut word = Vec::with_capacity(t.wedge.len());
            for &(f, i) in &t.wedge {
                let name = &self.ctx.families[f as usize].name;
                match target.family(name) {
                    Some(ti) => word.push((ti as u16, i)),
                    None => return Err(AlgebraError::MissingFamily(name.clone())),
                }
            }
            let (wedge, sign) = sort_wedge(&word).expect("no repeats possible");
            let mut cc = c.clone();
            if sign < 0 {
                cc = -cc;
            }
            out.add_term(Term { exps, wedge }, cc);
        }
        Ok(out)
    }

    /// The scalar part (coefficient of the empty monomial/word).
    pub fn scalar_part(&self) -> Q {
        self.terms
            .get(&Term::scalar(&self.ctx))
            .cloned()
            .unwrap_or_else(Q::zero)
    }
}

/// Simultaneous substitution morphism: even variables of the listed families
/// map to even values, odd generators to values of matching parity; all
/// other families embed unchanged into `target`.
///
/// Values are given per family as one multivector per index, already in
/// `target`'s context. Substituted factors multiply in the stored term
/// order, so the morphism is order-preserving.
pub fn subst(
    mv: &Mv,
    even_map: &[(usize, Vec<Mv>)],
    odd_map: &[(usize, Vec<Mv>)],
    target: &Arc<Context>,
) -> Result<Mv, AlgebraError> {
    for (fam, vals) in even_map {
        let f = &mv.ctx.families[*fam];
        if vals.len() != f.arity {
            return Err(AlgebraError::ArityMismatch(f.name.clone()));
        }
        for v in vals {
            if v.parity()? != 0 || v.fdegree()? != 0 {
                return Err(AlgebraError::ParityViolation(format!(
                    "even substitution value for {} is not even of degree 0",
                    f.name
                )));
            }
        }
    }
    for (fam, vals) in odd_map {
        let f = &mv.ctx.families[*fam];
        if vals.len() != f.arity {
            return Err(AlgebraError::ArityMismatch(f.name.clone()));
        }
        for v in vals {
            if !v.is_zero() && v.parity()? != 1 {
                return Err(AlgebraError::ParityViolation(format!(
                    "odd substitution value for {} is not odd",
                    f.name
                )));
            }
        }
    }
    let mut out = Mv::zero(target);
    'term: for (t, c) in &mv.terms {
        let mut acc = Mv::scalar(target, c.clone());
        // untouched even content first (it is central, order irrelevant)
        let mut base = Term::scalar(target);
        for (fi, fam) in mv.ctx.families.iter().enumerate() {
            if fam.parity != Parity::Even {
                continue;
            }
            if even_map.iter().any(|(f, _)| *f == fi) {
                continue;
            }
            let ti = target
                .family(&fam.name)
                .ok_or_else(|| AlgebraError::MissingFamily(fam.name.clone()))?;
            let src = mv.ctx.even_range(fi);
            let dst = target.even_range(ti);
            base.exps[dst].copy_from_slice(&t.exps[src]);
        }
        acc = acc.mul(&Mv {
            ctx: target.clone(),
            terms: [(base, Q::one())].into_iter().collect(),
        })?;
        // substituted even powers
        for (fi, vals) in even_map {
            let src = mv.ctx.even_range(*fi);
            for (k, &e) in t.exps[src].iter().enumerate() {
                if e > 0 {
                    acc = acc.mul(&vals[k].pow(e as u32)?)?;
                    if acc.is_zero() {
                        continue 'term;
                    }
                }
            }
        }
        // wedge word in stored order
        for &(f, i) in &t.wedge {
            let fu = f as usize;
            if let Some((_, vals)) = odd_map.iter().find(|(ff, _)| *ff == fu) {
                acc = acc.mul(&vals[i as usize])?;
            } else {
                let name = &mv.ctx.families[fu].name;
                let ti = target
                    .family(name)
                    .ok_or_else(|| AlgebraError::MissingFamily(name.clone()))?;
                acc = acc.mul(&Mv::gen(target, ti, i as usize))?;
            }
            if acc.is_zero() {
                continue 'term;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ContextBuilder;

    fn ctx2() -> Arc<Context> {
        ContextBuilder::new().even("x", 2).odd("f", 3).build()
    }

    #[test]
    fn anticommutation_and_square_zero() {
        let ctx = ctx2();
        let f1 = Mv::gen_by_name(&ctx, "f", 0);
        let f2 = Mv::gen_by_name(&ctx, "f", 1);
        let a = f1.mul(&f2).unwrap();
        let b = f2.mul(&f1).unwrap();
        assert_eq!(a, b.neg());
        assert!(f1.mul(&f1).unwrap().is_zero());
        let s = f1.add(&f2).unwrap();
        assert!(s.mul(&s).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let ctx = ctx2();
        let x = Mv::var_by_name(&ctx, "x", 0);
        let one = Mv::one(&ctx);
        let p = x.add(&one).unwrap().mul(&x.sub(&one).unwrap()).unwrap();
        let expect = x.mul(&x).unwrap().sub(&one).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn mul_by_zero() {
        let ctx = ctx2();
        let x = Mv::var_by_name(&ctx, "x", 0);
        assert!(x.mul(&Mv::zero(&ctx)).unwrap().is_zero());
    }

    #[test]
    fn subst_renaming() {
        let ctx = ContextBuilder::new().even("x", 1).build();
        let tgt = ContextBuilder::new().even("y", 1).build();
        let x = Mv::var_by_name(&ctx, "x", 0);
        let y = Mv::var_by_name(&tgt, "y", 0);
        let p = x.pow(2).unwrap();
        let r = subst(&p, &[(0, vec![y.clone()])], &[], &tgt).unwrap();
        assert_eq!(r, y.pow(2).unwrap());
    }

    #[test]
    fn subst_inverse_shift() {
        let ctx = ContextBuilder::new().even("x", 1).build();
        let x = Mv::var_by_name(&ctx, "x", 0);
        let p = x.add(&Mv::one(&ctx)).unwrap();
        let xm1 = x.sub(&Mv::one(&ctx)).unwrap();
        let r = subst(&p, &[(0, vec![xm1])], &[], &ctx).unwrap();
        assert_eq!(r, x);
    }

    #[test]
    fn subst_order_preserving_on_generators() {
        let ctx = ContextBuilder::new().odd("fz", 2).build();
        let tgt = ContextBuilder::new().odd("fy", 2).build();
        let c = Mv::gen_by_name(&ctx, "fz", 0)
            .mul(&Mv::gen_by_name(&ctx, "fz", 1))
            .unwrap();
        let b = vec![Mv::gen_by_name(&tgt, "fy", 0), Mv::gen_by_name(&tgt, "fy", 1)];
        let r = subst(&c, &[], &[(0, b)], &tgt).unwrap();
        let expect = Mv::gen_by_name(&tgt, "fy", 0)
            .mul(&Mv::gen_by_name(&tgt, "fy", 1))
            .unwrap();
        assert_eq!(r, expect);
    }
}
