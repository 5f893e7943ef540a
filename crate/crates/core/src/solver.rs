//! Exact truncated-degree linear algebra over the Koszul complex:
//! boundary-membership certificates, homology ranks, quotient-ring
//! dimensions, and the unit preimage `(e, t)` with
//! `j_map(e) = 1 + ∂[t]`.
//!
//! Everything is rational Gaussian elimination on finite bases; every
//! certificate returned is re-verified against the boundary operator
//! before it leaves this module.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{Signed, Zero};

use crate::bezout::{j_map, j_product, PolySystem};
use crate::boundary::{boundary, is_cycle, Assignment};
use crate::context::{Context, Parity, Polarity};
use crate::error::AlgebraError;
use crate::mv::{q, Mv, Term, Q};
use crate::pairing::contract_left;
use crate::sample;

/// Macaulay-style default truncation degree
/// `max(Σ(deg f_i − 1) + 1, max deg f_i)`.
pub fn default_truncation(sys: &PolySystem) -> u32 {
    let degs: Vec<u32> = sys.f.iter().map(|p| p.max_total_degree()).collect();
    let sum: u32 = degs.iter().map(|&d| d.saturating_sub(1)).sum::<u32>() + 1;
    let max = degs.iter().copied().max().unwrap_or(0);
    sum.max(max)
}

/// All basis terms of the context with signed f̂-degree `fdeg` and total
/// monomial degree ≤ `d`, in canonical (graded, then lexicographic) order.
pub fn basis_enumerate(ctx: &Arc<Context>, fdeg: i64, d: u32) -> Vec<Term> {
    // wedge words of the right signed degree
    let mut gens: Vec<(u16, u16, i64)> = Vec::new();
    for (fi, f) in ctx.families.iter().enumerate() {
        if f.parity == Parity::Odd {
            let w = if f.polarity == Polarity::Dual { -1 } else { 1 };
            for i in 0..f.arity {
                gens.push((fi as u16, i as u16, w));
            }
        }
    }
    let mut words: Vec<Vec<(u16, u16)>> = Vec::new();
    fn rec(
        gens: &[(u16, u16, i64)],
        from: usize,
        acc: &mut Vec<(u16, u16)>,
        deg: i64,
        want: i64,
        out: &mut Vec<Vec<(u16, u16)>>,
    ) {
        if deg == want {
            out.push(acc.clone());
        }
        for k in from..gens.len() {
            acc.push((gens[k].0, gens[k].1));
            rec(gens, k + 1, acc, deg + gens[k].2, want, out);
            acc.pop();
        }
    }
    // note: a word can reach `fdeg` and be extendable back to it, so every
    // prefix that matches is recorded, including the empty word for fdeg 0
    rec(&gens, 0, &mut Vec::new(), 0, fdeg, &mut words);
    words.retain(|w| w.iter().map(|&(f, _)| if ctx.is_dual(f as usize) { -1i64 } else { 1 }).sum::<i64>() == fdeg);
    words.sort();
    words.dedup();

    // monomials of total degree ≤ d
    let mut monos: Vec<Vec<u16>> = Vec::new();
    fn mono_rec(slots: usize, left: u32, acc: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if acc.len() == slots {
            out.push(acc.clone());
            return;
        }
        for e in 0..=left {
            acc.push(e as u16);
            mono_rec(slots, left - e, acc, out);
            acc.pop();
        }
    }
    mono_rec(ctx.even_arity, d, &mut Vec::new(), &mut monos);

    let mut out: Vec<Term> = Vec::new();
    for w in &words {
        for m in &monos {
            out.push(Term {
                exps: m.clone(),
                wedge: w.clone(),
            });
        }
    }
    out.sort_by_key(|t| (t.total_degree(), t.clone()));
    out
}

fn term_mv(ctx: &Arc<Context>, t: &Term) -> Mv {
    let mut m = Mv::zero(ctx);
    m.terms.insert(t.clone(), q(1));
    m
}

/// Canonical index over the union of the supports of `mvs`.
fn support_index(mvs: &[&Mv]) -> (Vec<Term>, BTreeMap<Term, usize>) {
    let mut terms: Vec<Term> = mvs
        .iter()
        .flat_map(|m| m.terms.keys().cloned())
        .collect();
    terms.sort_by_key(|t| (t.total_degree(), t.clone()));
    terms.dedup();
    let pos = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    (terms, pos)
}

fn coords(m: &Mv, pos: &BTreeMap<Term, usize>, len: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); len];
    for (t, c) in &m.terms {
        v[pos[t]] = c.clone();
    }
    v
}

/// Pivot preference: smallest |numerator|, then smallest denominator.
fn pivot_key(x: &Q) -> (num::BigInt, num::BigInt) {
    (x.numer().abs(), x.denom().abs())
}

/// Row echelon with deterministic smallest-numerator pivoting. Returns the
/// reduced rows and the pivot (row, column) list.
pub fn echelon(mut rows: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<(usize, usize)>) {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        let mut best: Option<usize> = None;
        for r in next_row..nrows {
            if !rows[r][col].is_zero() {
                best = match best {
                    None => Some(r),
                    Some(b) if pivot_key(&rows[r][col]) < pivot_key(&rows[b][col]) => Some(r),
                    keep => keep,
                };
            }
        }
        let Some(p) = best else { continue };
        rows.swap(next_row, p);
        let inv = {
            let pv = rows[next_row][col].clone();
            Q::from(num::BigInt::from(1)) / pv
        };
        for e in rows[next_row].iter_mut() {
            *e *= &inv;
        }
        for r in 0..nrows {
            if r != next_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for cc in col..ncols {
                    let sub = &rows[next_row][cc] * &factor;
                    rows[r][cc] -= sub;
                }
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
        if next_row == nrows {
            break;
        }
    }
    (rows, pivots)
}

/// Solve `Σ_j λ_j col_j = rhs`; free variables are set to zero, pivots are
/// chosen deterministically. Returns `None` when inconsistent.
pub fn solve_columns(cols: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let nrows = rhs.len();
    let ncols = cols.len();
    // augmented row-major system
    let mut rows: Vec<Vec<Q>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    // drop all-zero rows early to keep elimination small
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let (rows, pivots) = echelon(rows);
    let mut sol = vec![Q::zero(); ncols];
    for &(r, c) in &pivots {
        if c == ncols {
            return None; // pivot in the rhs column: inconsistent
        }
        sol[c] = rows[r][ncols].clone();
    }
    // verify rows without pivots (all-zero coefficient rows)
    for (ri, row) in rows.iter().enumerate() {
        if pivots.iter().any(|&(r, _)| r == ri) {
            continue;
        }
        if !row[ncols].is_zero() && row[..ncols].iter().all(|x| x.is_zero()) {
            return None;
        }
    }
    // Gauss-Jordan leaves free columns with nonzero entries in pivot rows;
    // with free variables at zero the pivot values above are the solution,
    // but verify exactly to be safe.
    for r in 0..rhs.len() {
        let mut acc = Q::zero();
        for (j, c) in cols.iter().enumerate() {
            if !sol[j].is_zero() {
                acc += &c[r] * &sol[j];
            }
        }
        if acc != rhs[r] {
            return None;
        }
    }
    Some(sol)
}

/// Rank of a list of vectors.
pub fn rank(vecs: Vec<Vec<Q>>) -> usize {
    echelon(vecs).1.len()
}

/// Basis of `{λ : Σ_j λ_j col_j = 0}`.
pub fn nullspace(cols: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let ncols = cols.len();
    let nrows = cols.first().map(|c| c.len()).unwrap_or(0);
    let rows: Vec<Vec<Q>> = (0..nrows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let (rref, pivots) = echelon(rows);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::from(num::BigInt::from(1));
        for &(r, p) in &pivots {
            v[p] = -rref[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// A boundary-membership result: an exact preimage certificate, or a
/// refusal at the truncation degree used (not a failure — retry higher).
#[derive(Debug, Clone)]
pub enum Membership {
    Certificate(Mv),
    Refusal { degree: u32 },
}

impl Membership {
    pub fn certificate(&self) -> Option<&Mv> {
        match self {
            Membership::Certificate(m) => Some(m),
            Membership::Refusal { .. } => None,
        }
    }
}

/// Find `ξ` with `∂[ξ] = z` over the degree-`d` truncated basis of `z`'s
/// context. Errors if `z` is not a cycle; refuses if no preimage exists at
/// this truncation. Certificates are re-verified exactly.
pub fn solve_boundary_membership(
    z: &Mv,
    asg: &Assignment,
    d: u32,
) -> Result<Membership, AlgebraError> {
    if !is_cycle(z, asg)? {
        return Err(AlgebraError::Invalid(
            "boundary membership target is not a cycle".into(),
        ));
    }
    if z.is_zero() {
        return Ok(Membership::Certificate(Mv::zero(&z.ctx)));
    }
    // inhomogeneous targets split into f̂-degree components, which the
    // boundary operator treats independently
    let parts = split_fdeg(z)?;
    if parts.len() > 1 {
        let mut xi = Mv::zero(&z.ctx);
        for p in parts {
            match solve_boundary_membership(&p, asg, d)? {
                Membership::Refusal { degree } => return Ok(Membership::Refusal { degree }),
                Membership::Certificate(c) => xi = xi.add(&c)?,
            }
        }
        return Ok(Membership::Certificate(xi));
    }
    let fdeg = z.fdegree()? + 1;
    let dom = basis_enumerate(&z.ctx, fdeg, d);
    let images: Vec<Mv> = dom
        .iter()
        .map(|t| boundary(&term_mv(&z.ctx, t), asg))
        .collect::<Result<_, _>>()?;
    let mut refs: Vec<&Mv> = images.iter().collect();
    refs.push(z);
    let (terms, pos) = support_index(&refs);
    let cols: Vec<Vec<Q>> = images.iter().map(|m| coords(m, &pos, terms.len())).collect();
    let rhs = coords(z, &pos, terms.len());
    match solve_columns(&cols, &rhs) {
        None => Ok(Membership::Refusal { degree: d }),
        Some(sol) => {
            let mut xi = Mv::zero(&z.ctx);
            for (t, c) in dom.iter().zip(&sol) {
                if !c.is_zero() {
                    xi.add_term(t.clone(), c.clone());
                }
            }
            debug_assert_eq!(&boundary(&xi, asg)?, z);
            if &boundary(&xi, asg)? != z {
                return Err(AlgebraError::Invalid("certificate failed re-check".into()));
            }
            Ok(Membership::Certificate(xi))
        }
    }
}

/// Dimension of `R[x]/(f)` truncated at total degree `d`, and whether the
/// value is stable from `d` to `d + 1`.
pub fn quotient_dimension(sys: &PolySystem, d: u32) -> (usize, bool) {
    let at = |d: u32| -> usize {
        let monos = basis_enumerate(&sys.ctx_poly, 0, d);
        let pos: BTreeMap<Term, usize> = monos
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let mut gens: Vec<Vec<Q>> = Vec::new();
        for f in &sys.f {
            let df = f.max_total_degree();
            if df > d {
                continue;
            }
            for m in basis_enumerate(&sys.ctx_poly, 0, d - df) {
                let p = term_mv(&sys.ctx_poly, &m).mul(f).expect("mul");
                gens.push(coords(&p, &pos, monos.len()));
            }
        }
        monos.len() - rank(gens)
    };
    let dim = at(d);
    (dim, dim == at(d + 1))
}

/// Homology rank of the system's Koszul complex at f̂-degree `fdeg`,
/// truncated at polynomial degree `d`: `dim(Z ∩ V) − dim(B ∩ V)` where `V`
/// is the truncated slice. Also reports stability from `d` to `d + 1`.
pub fn homology_rank(sys: &PolySystem, fdeg: i64, d: u32) -> Result<(usize, bool), AlgebraError> {
    let ctx = sys.ctx_cx();
    let asg = sys.assignment(&[("f^x", "x")]);
    let at = |d: u32| -> Result<usize, AlgebraError> {
        let v = basis_enumerate(&ctx, fdeg, d);
        if v.is_empty() {
            return Ok(0);
        }
        // cycles inside V: exact kernel of ∂ restricted to V
        let imgs: Vec<Mv> = v
            .iter()
            .map(|t| boundary(&term_mv(&ctx, t), &asg))
            .collect::<Result<_, _>>()?;
        let refs: Vec<&Mv> = imgs.iter().collect();
        let (terms, pos) = support_index(&refs);
        let dim_z = v.len()
            - rank(
                imgs.iter()
                    .map(|m| coords(m, &pos, terms.len()))
                    .collect(),
            );
        // boundaries meeting V: echelon with the escaping coordinates
        // ordered first, then count pivots that land inside V
        let dom = basis_enumerate(&ctx, fdeg + 1, d);
        let bimgs: Vec<Mv> = dom
            .iter()
            .map(|t| boundary(&term_mv(&ctx, t), &asg))
            .collect::<Result<_, _>>()?;
        let brefs: Vec<&Mv> = bimgs.iter().collect();
        let (bterms, _) = support_index(&brefs);
        let inside: BTreeMap<Term, usize> = v
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let outside: Vec<&Term> = bterms.iter().filter(|t| !inside.contains_key(t)).collect();
        let n_out = outside.len();
        let full_pos: BTreeMap<Term, usize> = outside
            .iter()
            .enumerate()
            .map(|(i, t)| ((*t).clone(), i))
            .chain(inside.iter().map(|(t, &i)| (t.clone(), n_out + i)))
            .collect();
        let rows: Vec<Vec<Q>> = bimgs
            .iter()
            .map(|m| coords(m, &full_pos, n_out + v.len()))
            .collect();
        let (_, pivots) = echelon(rows);
        let dim_bv = pivots.iter().filter(|&&(_, c)| c >= n_out).count();
        Ok(dim_z - dim_bv)
    };
    let r = at(d)?;
    Ok((r, r == at(d + 1)?))
}

/// Search for `(e, t)` with `j_map(e) = 1 + ∂[t]` and `e` a cycle of the
/// degree-`d` truncated dual complex, by one joint exact solve. Returns
/// `None` (a refusal, retry with larger `d`) when the linear system has no
/// solution at this truncation.
///
/// The cycle condition is the truncated one: `⟨e, ∂b⟩ = 0` for every
/// primal basis element `b` whose boundary stays within degree `d`. The
/// exact annihilator of the ideal often has no nonzero finitely supported
/// element at all (already for `f = x²-1` it forces infinite parity
/// chains like `Σ (x^{2k+1})_*`), so the finite `e` is the truncation of
/// such a series and is a cycle against every test of degree ≤ `d`.
pub fn find_unit_preimage(sys: &PolySystem, d: u32) -> Result<Option<(Mv, Mv)>, AlgebraError> {
    if sys.s < sys.n {
        return Ok(None);
    }
    let ctx_d = sys.ctx_dx();
    let ctx_x = sys.ctx_cx();
    let asg_x = sys.assignment(&[("f^x", "x")]);
    let r = (sys.s - sys.n) as i64;
    let e_basis = basis_enumerate(&ctx_d, -r, d);
    let tests = cycle_tests(sys, r, d)?;
    let de: Vec<Vec<Q>> = e_basis
        .iter()
        .map(|t| {
            let e_j = term_mv(&ctx_d, t);
            tests
                .iter()
                .map(|tb| pair_against(sys, &e_j, tb))
                .collect::<Result<Vec<Q>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let je: Vec<Mv> = e_basis
        .iter()
        .map(|t| j_map(sys, &term_mv(&ctx_d, t)))
        .collect::<Result<_, _>>()?;
    let dt_deg = je.iter().map(|m| m.max_total_degree()).max().unwrap_or(0);
    let t_basis = basis_enumerate(&ctx_x, 1, dt_deg);
    let dt: Vec<Mv> = t_basis
        .iter()
        .map(|t| boundary(&term_mv(&ctx_x, t), &asg_x))
        .collect::<Result<_, _>>()?;

    let n1 = tests.len();
    let one = Mv::one(&ctx_x);
    let mut refs2: Vec<&Mv> = je.iter().chain(dt.iter()).collect();
    refs2.push(&one);
    let (terms2, pos2) = support_index(&refs2);
    let n2 = terms2.len();

    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(e_basis.len() + t_basis.len());
    for (dm, jm) in de.iter().zip(&je) {
        let mut v = dm.clone();
        v.extend(coords(jm, &pos2, n2));
        cols.push(v);
    }
    for dm in &dt {
        let mut v = vec![Q::zero(); n1];
        let neg = dm.neg();
        v.extend(coords(&neg, &pos2, n2));
        cols.push(v);
    }
    let mut rhs = vec![Q::zero(); n1];
    rhs.extend(coords(&one, &pos2, n2));

    let Some(sol) = solve_columns(&cols, &rhs) else {
        return Ok(None);
    };
    let mut e = Mv::zero(&ctx_d);
    for (t, c) in e_basis.iter().zip(&sol) {
        if !c.is_zero() {
            e.add_term(t.clone(), c.clone());
        }
    }
    let mut tt = Mv::zero(&ctx_x);
    for (t, c) in t_basis.iter().zip(&sol[e_basis.len()..]) {
        if !c.is_zero() {
            tt.add_term(t.clone(), c.clone());
        }
    }
    // re-verify both defining identities exactly
    for tb in &tests {
        if !pair_against(sys, &e, tb)?.is_zero() {
            return Err(AlgebraError::Invalid(
                "unit preimage: e is not a truncated cycle".into(),
            ));
        }
    }
    let check = j_map(sys, &e)?;
    let expect = Mv::one(&ctx_x).add(&boundary(&tt, &asg_x)?)?;
    if check != expect {
        return Err(AlgebraError::Invalid(
            "unit preimage: j_map(e) != 1 + boundary(t)".into(),
        ));
    }
    Ok(Some((e, tt)))
}

/// Boundaries of primal basis elements at f̂-degree `r + 1`, kept only when
/// they stay within total degree `d`: the test set for the truncated cycle
/// condition on dual-degree `-r` functionals.
fn cycle_tests(sys: &PolySystem, r: i64, d: u32) -> Result<Vec<Mv>, AlgebraError> {
    let ctx_x = sys.ctx_cx();
    let asg_x = sys.assignment(&[("f^x", "x")]);
    let mut out = Vec::new();
    for b in basis_enumerate(&ctx_x, r + 1, d) {
        let db = boundary(&term_mv(&ctx_x, &b), &asg_x)?;
        if !db.is_zero() && db.max_total_degree() <= d {
            out.push(db);
        }
    }
    Ok(out)
}

/// Full pairing of a dual-complex element against a primal element.
fn pair_against(sys: &PolySystem, dual: &Mv, primal: &Mv) -> Result<Q, AlgebraError> {
    let big = crate::context::ContextBuilder::new()
        .even("x", sys.n)
        .odd("f^x", sys.s)
        .odd_dual("f*^x", sys.s, "f^x")
        .even_dual("x*", sys.n, "x")
        .build();
    crate::pairing::pair_scalar(dual, primal, &big, &[("x*", "x"), ("f*^x", "f^x")])
}

/// `c − j_map(⊥ e c)` for primal `c`: the primal-side defect of the
/// homotopy inverse (items 1 and 3 of the check).
pub fn defect_primal(sys: &PolySystem, e: &Mv, c: &Mv) -> Result<Mv, AlgebraError> {
    let big = crate::context::ContextBuilder::new()
        .even("x", sys.n)
        .odd("f^x", sys.s)
        .odd_dual("f*^x", sys.s, "f^x")
        .even_dual("x*", sys.n, "x")
        .build();
    let prod = e.embed(&big)?.mul(&c.embed(&big)?)?;
    let ec = contract_left(&prod, &[("x*", "x"), ("f*^x", "f^x")])?.project(&sys.ctx_dx())?;
    c.sub(&j_map(sys, &ec)?)
}

/// `c − ⊥ e (j_map c)` for dual `c`: the dual-side defect of the homotopy
/// inverse (items 2 and 4 of the check).
pub fn defect_dual(sys: &PolySystem, e: &Mv, c: &Mv) -> Result<Mv, AlgebraError> {
    c.sub(&j_product(sys, e, c)?)
}

#[derive(Debug, Clone)]
pub struct InverseItemResult {
    pub item: u8,
    pub sample: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Default)]
pub struct InverseReport {
    pub results: Vec<InverseItemResult>,
}

impl InverseReport {
    pub fn all_ok(&self) -> bool {
        self.results.iter().all(|r| r.ok)
    }
}

/// Hom-complex certificate for the operator-level identities (items 1–2)
/// on one sample: find `(ξ, η)` with `∂ξ + η = defect(c)` and
/// `∂η = defect(∂c)` (the element form of `defect = ⊤ ∂[R]·`, with
/// `ξ = R.c` and `η = R.∂c`).
///
/// Both equations are asserted on the coordinates of total degree ≤
/// `window`: a truncated `e` perturbs the defects only above its accuracy
/// degree (the obstruction is `⊥(∂e, ·)`, supported near the truncation),
/// so the windowed statement is the correct truncated analogue.
fn hom_certificate(
    defect_c: &Mv,
    defect_dc: &Mv,
    asg: &Assignment,
    d: u32,
    window: u32,
) -> Result<bool, AlgebraError> {
    let proj = |m: &Mv| -> Mv {
        let mut out = Mv::zero(&m.ctx);
        for (t, c) in &m.terms {
            if t.total_degree() <= window {
                out.add_term(t.clone(), c.clone());
            }
        }
        out
    };
    let defect_c = &proj(defect_c);
    let defect_dc = &proj(defect_dc);
    let ctx = defect_c.ctx.clone();
    let fdeg = if defect_c.is_zero() {
        if defect_dc.is_zero() {
            return Ok(true);
        }
        defect_dc.fdegree()? + 1
    } else {
        defect_c.fdegree()?
    };
    let xi_basis = basis_enumerate(&ctx, fdeg + 1, d);
    let eta_basis = basis_enumerate(&ctx, fdeg, d);
    let dxi: Vec<Mv> = xi_basis
        .iter()
        .map(|t| boundary(&term_mv(&ctx, t), asg).map(|m| proj(&m)))
        .collect::<Result<_, _>>()?;
    let eta_mv: Vec<Mv> = eta_basis.iter().map(|t| term_mv(&ctx, t)).collect();
    let deta: Vec<Mv> = eta_mv
        .iter()
        .map(|m| boundary(m, asg).map(|m| proj(&m)))
        .collect::<Result<_, _>>()?;
    let mut refs1: Vec<&Mv> = dxi.iter().chain(eta_mv.iter()).collect();
    refs1.push(defect_c);
    let (terms1, pos1) = support_index(&refs1);
    let mut refs2: Vec<&Mv> = deta.iter().collect();
    refs2.push(defect_dc);
    let (terms2, pos2) = support_index(&refs2);
    let (n1, n2) = (terms1.len(), terms2.len());
    let mut cols = Vec::with_capacity(xi_basis.len() + eta_basis.len());
    for m in &dxi {
        let mut v = coords(m, &pos1, n1);
        v.extend(vec![Q::zero(); n2]);
        cols.push(v);
    }
    for (m, dm) in eta_mv.iter().zip(&deta) {
        let mut v = coords(&proj(m), &pos1, n1);
        v.extend(coords(dm, &pos2, n2));
        cols.push(v);
    }
    let mut rhs = coords(defect_c, &pos1, n1);
    rhs.extend(coords(defect_dc, &pos2, n2));
    Ok(solve_columns(&cols, &rhs).is_some())
}

/// Verify the four statements making `⊥ e ·` a homotopy inverse of the
/// J-map, on seeded
/// random samples, producing boundary certificates (items 3–4) and
/// Hom-complex certificates (items 1–2).
pub fn homotopy_inverse_check(
    sys: &PolySystem,
    e: &Mv,
    t: &Mv,
    d: u32,
    seed: u64,
    samples_per_item: usize,
) -> Result<InverseReport, AlgebraError> {
    let _ = t;
    let mut report = InverseReport::default();
    let ctx_x = sys.ctx_cx();
    let ctx_d = sys.ctx_dx();
    let asg_x = sys.assignment(&[("f^x", "x")]);
    let asg_d = sys.assignment(&[("f^x", "x")]);
    let mut r = sample::rng(seed);

    // items 1 and 2: general samples, Hom-complex certificates
    for k in 0..samples_per_item {
        let c = sample::random_element(&mut r, &ctx_x, 2);
        let ok = (|| -> Result<bool, AlgebraError> {
            let mut all = true;
            for part in split_fdeg(&c)? {
                let dc = boundary(&part, &asg_x)?;
                let d1 = defect_primal(sys, e, &part)?;
                let d2 = defect_primal(sys, e, &dc)?;
                all &= hom_certificate(&d1, &d2, &asg_x, d + 2, d)?;
            }
            Ok(all)
        })()?;
        report.results.push(InverseItemResult {
            item: 1,
            sample: k,
            ok,
        });
    }
    for k in 0..samples_per_item {
        let c = sample::random_element(&mut r, &ctx_d, 2);
        let ok = (|| -> Result<bool, AlgebraError> {
            let mut all = true;
            for part in split_fdeg(&c)? {
                let dc = boundary(&part, &asg_d)?;
                let d1 = defect_dual(sys, e, &part)?;
                let d2 = defect_dual(sys, e, &dc)?;
                all &= hom_certificate(&d1, &d2, &asg_d, d + 2, d)?;
            }
            Ok(all)
        })()?;
        report.results.push(InverseItemResult {
            item: 2,
            sample: k,
            ok,
        });
    }

    // item 3: primal cycles (fdeg-0 elements and boundaries)
    for k in 0..samples_per_item {
        let c = if k % 2 == 0 {
            sample::random_poly(&mut r, &ctx_x, "x", 2)
        } else {
            boundary(&sample::random_homogeneous(&mut r, &ctx_x, 2, 1 + k % sys.s), &asg_x)?
        };
        let defect = defect_primal(sys, e, &c)?;
        let ok = matches!(
            solve_boundary_membership(&defect, &asg_x, d + 2)?,
            Membership::Certificate(_)
        );
        report.results.push(InverseItemResult {
            item: 3,
            sample: k,
            ok,
        });
    }

    // item 4: dual cycles (e itself when it is an exact cycle, boundaries
    // of random dual elements)
    for k in 0..samples_per_item {
        let c = if k == 0 && is_cycle(e, &asg_d)? {
            e.clone()
        } else {
            boundary(&sample::random_element(&mut r, &ctx_d, 2), &asg_d)?
        };
        let defect = defect_dual(sys, e, &c)?;
        let ok = matches!(
            solve_boundary_membership(&defect, &asg_d, d + 2)?,
            Membership::Certificate(_)
        );
        report.results.push(InverseItemResult {
            item: 4,
            sample: k,
            ok,
        });
    }
    Ok(report)
}

/// Split into fdeg-homogeneous components (the certificates work degree by
/// degree).
fn split_fdeg(m: &Mv) -> Result<Vec<Mv>, AlgebraError> {
    let mut parts: BTreeMap<i64, Mv> = BTreeMap::new();
    for (t, c) in &m.terms {
        let fd = m.term_fdegree(t);
        parts
            .entry(fd)
            .or_insert_with(|| Mv::zero(&m.ctx))
            .add_term(t.clone(), c.clone());
    }
    Ok(parts.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ContextBuilder;

    fn sys_from(n: usize, f: Vec<Mv>) -> PolySystem {
        PolySystem::new(n, f, None).unwrap()
    }

    fn xsys(fs: &[&dyn Fn(&Mv) -> Mv]) -> PolySystem {
        let ctx = ContextBuilder::new().even("x", 1).build();
        let x = Mv::var_by_name(&ctx, "x", 0);
        sys_from(1, fs.iter().map(|f| f(&x)).collect())
    }

    #[test]
    fn basis_enumeration_examples() {
        let ctx = ContextBuilder::new().even("x", 1).odd("f^x", 1).build();
        let b = basis_enumerate(&ctx, 1, 1);
        assert_eq!(b.len(), 2); // f̂₁ and x·f̂₁
        assert!(b.iter().all(|t| t.wedge.len() == 1));
        assert!(basis_enumerate(&ctx, 2, 3).is_empty());
        let ctx2 = ContextBuilder::new().even("x", 1).odd("f^x", 2).build();
        let b2 = basis_enumerate(&ctx2, 2, 0);
        assert_eq!(b2.len(), 1);
    }

    #[test]
    fn membership_examples() {
        let sys = xsys(&[&|x: &Mv| x.pow(2).unwrap()]);
        let ctx = sys.ctx_cx();
        let asg = sys.assignment(&[("f^x", "x")]);
        // z = x²: preimage f̂₁
        let x = Mv::var_by_name(&ctx, "x", 0);
        let z = x.pow(2).unwrap();
        let m = solve_boundary_membership(&z, &asg, 3).unwrap();
        let xi = m.certificate().expect("certificate");
        assert_eq!(&boundary(xi, &asg).unwrap(), &z);
        // z = 1 is not in (x²): refusal at any degree
        let one = Mv::one(&ctx);
        for d in [1, 3, 5] {
            assert!(matches!(
                solve_boundary_membership(&one, &asg, d).unwrap(),
                Membership::Refusal { .. }
            ));
        }
        // non-cycle input is an error, not a refusal
        let f1 = Mv::gen_by_name(&ctx, "f^x", 0);
        assert!(solve_boundary_membership(&f1, &asg, 2).is_err());
    }

    #[test]
    fn jacobian_order_independence_certified() {
        // J computed with different variable orders differs by a boundary
        let ctx = ContextBuilder::new().even("x", 2).build();
        let x1 = Mv::var_by_name(&ctx, "x", 0);
        let x2 = Mv::var_by_name(&ctx, "x", 1);
        let f = vec![
            x1.mul(&x2).unwrap(),
            x1.pow(2).unwrap().add(&x2.pow(2).unwrap()).unwrap(),
        ];
        let s1 = PolySystem::new(2, f.clone(), Some(vec![0, 1])).unwrap();
        let s2 = PolySystem::new(2, f, Some(vec![1, 0])).unwrap();
        let j1 = crate::bezout::difference_jacobian(&s1).unwrap();
        let j2 = crate::bezout::difference_jacobian(&s2).unwrap();
        let z = j1.sub(&j2).unwrap();
        let asg = s1.assignment(&[("f^x", "x"), ("f^y", "y")]);
        let m = solve_boundary_membership(&z, &asg, 3).unwrap();
        assert!(m.certificate().is_some());
    }

    #[test]
    fn quotient_dimensions() {
        let s1 = xsys(&[&|x: &Mv| x.clone()]);
        assert_eq!(quotient_dimension(&s1, default_truncation(&s1)), (1, true));
        let s2 = xsys(&[&|x: &Mv| x.pow(2).unwrap()]);
        assert_eq!(quotient_dimension(&s2, default_truncation(&s2)), (2, true));
        let ctx = ContextBuilder::new().even("x", 2).build();
        let one = Mv::one(&ctx);
        let f = vec![
            Mv::var_by_name(&ctx, "x", 0).pow(2).unwrap().sub(&one).unwrap(),
            Mv::var_by_name(&ctx, "x", 1).pow(2).unwrap().sub(&one).unwrap(),
        ];
        let s3 = sys_from(2, f);
        assert_eq!(quotient_dimension(&s3, default_truncation(&s3)), (4, true));
    }

    #[test]
    fn homology_ranks() {
        let ctx = ContextBuilder::new().even("x", 2).build();
        let one = Mv::one(&ctx);
        let f = vec![
            Mv::var_by_name(&ctx, "x", 0).pow(2).unwrap().sub(&one).unwrap(),
            Mv::var_by_name(&ctx, "x", 1).pow(2).unwrap().sub(&one).unwrap(),
        ];
        let s = sys_from(2, f);
        let d = default_truncation(&s);
        assert_eq!(homology_rank(&s, 0, d).unwrap(), (4, true));

        // identity system: H₀ has rank 1
        let fid = vec![
            Mv::var_by_name(&ctx, "x", 0),
            Mv::var_by_name(&ctx, "x", 1),
        ];
        let sid = sys_from(2, fid);
        let did = default_truncation(&sid);
        assert_eq!(homology_rank(&sid, 0, did).unwrap().0, 1);

        // overdetermined: (x₁, x₂, x₁+x₂) has H₀ of rank 1
        let f3 = vec![
            Mv::var_by_name(&ctx, "x", 0),
            Mv::var_by_name(&ctx, "x", 1),
            Mv::var_by_name(&ctx, "x", 0)
                .add(&Mv::var_by_name(&ctx, "x", 1))
                .unwrap(),
        ];
        let s3 = sys_from(2, f3);
        assert_eq!(homology_rank(&s3, 0, default_truncation(&s3)).unwrap().0, 1);
    }

    #[test]
    fn unit_preimage_examples() {
        // f = x: J = 1, e = (x⁰)_*, t = 0
        let s_lin = xsys(&[&|x: &Mv| x.clone()]);
        let (e, t) = find_unit_preimage(&s_lin, default_truncation(&s_lin))
            .unwrap()
            .expect("preimage");
        assert_eq!(e, Mv::one(&s_lin.ctx_dx()));
        assert!(t.is_zero());

        // f = x²: e = (x¹)_*, t = 0
        let s_sq = xsys(&[&|x: &Mv| x.pow(2).unwrap()]);
        let (e, t) = find_unit_preimage(&s_sq, default_truncation(&s_sq))
            .unwrap()
            .expect("preimage");
        let ctx_d = s_sq.ctx_dx();
        let mut expect_t = Term::scalar(&ctx_d);
        expect_t.exps[0] = 1;
        assert_eq!(e.terms.len(), 1);
        assert!(e.terms.contains_key(&expect_t));
        assert!(t.is_zero());

        // f = x² − 1: solver finds e on {(x⁰)_*, (x¹)_*}
        let s_q = xsys(&[&|x: &Mv| x.pow(2).unwrap().sub(&Mv::one(&x.ctx)).unwrap()]);
        let (e, _t) = find_unit_preimage(&s_q, default_truncation(&s_q))
            .unwrap()
            .expect("preimage");
        assert!(!e.is_zero());
        assert!(e
            .terms
            .keys()
            .all(|t| t.wedge.is_empty() && t.exps[0] <= 1));
    }

    #[test]
    fn homotopy_inverse_small() {
        let s_sq = xsys(&[&|x: &Mv| x.pow(2).unwrap()]);
        let d = default_truncation(&s_sq);
        let (e, t) = find_unit_preimage(&s_sq, d).unwrap().expect("preimage");
        let report = homotopy_inverse_check(&s_sq, &e, &t, d, 7, 3).unwrap();
        assert!(report.all_ok(), "{:?}", report.results);
    }
}
