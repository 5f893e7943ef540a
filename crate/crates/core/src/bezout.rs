//! The difference Jacobian (multivariate Bezoutian), the difference
//! homotopy `∇`, the correction operator `T`, and the `J`-map / `J`-product
//! duality.
//!
//! For a system `f = (f_1..f_s)` in variables `x_1..x_n` the difference
//! Jacobian is
//!
//! ```text
//! J(x, y) = ⊤_u [ (-û*ⁿ)···(-û*¹) · ∏_i (f̂_{i,x} - f̂_{i,y} - û∇f_i(x,y)) ]
//! ```
//!
//! where `û∇f_i = Σ_k û_k ∇ᵏf_i` is built from divided differences taken in
//! a fixed variable order. `J` is a cycle in `C(x, y, f̂_x, f̂_y)` and for
//! `n = s = 1` reduces to the classical Bezoutian `(f(x) - f(y))/(x - y)`.

use std::sync::Arc;

use crate::boundary::Assignment;
use crate::context::{Context, ContextBuilder};
use crate::error::AlgebraError;
use crate::mv::{subst, Mv};
use crate::pairing::contract;
use crate::poly::{divexact_linear, divided_differences};

/// A polynomial system `f_1..f_s` over `x_1..x_n`, together with the
/// variable order used for divided differences.
#[derive(Debug, Clone)]
pub struct PolySystem {
    pub n: usize,
    pub s: usize,
    /// The polynomials, in the context with the single even family `x`.
    pub f: Vec<Mv>,
    /// Variable order for `∇` (a permutation of `0..n`).
    pub order: Vec<usize>,
    pub ctx_poly: Arc<Context>,
}

impl PolySystem {
    pub fn new(n: usize, f: Vec<Mv>, order: Option<Vec<usize>>) -> Result<Self, AlgebraError> {
        let ctx_poly = ContextBuilder::new().even("x", n).build();
        let s = f.len();
        let mut fs = Vec::with_capacity(s);
        for p in f {
            let p = p.project(&ctx_poly)?;
            if p.parity()? != 0 || p.fdegree()? != 0 {
                return Err(AlgebraError::ParityViolation(
                    "system polynomials must be even scalars".into(),
                ));
            }
            fs.push(p);
        }
        let order = order.unwrap_or_else(|| (0..n).collect());
        if order.len() != n {
            return Err(AlgebraError::Invalid("order must permute 1..n".into()));
        }
        let mut seen = vec![false; n];
        for &k in &order {
            if k >= n || seen[k] {
                return Err(AlgebraError::Invalid("order must permute 1..n".into()));
            }
            seen[k] = true;
        }
        Ok(PolySystem {
            n,
            s,
            f: fs,
            order,
            ctx_poly,
        })
    }

    /// Largest total degree among the polynomials.
    pub fn max_degree(&self) -> u32 {
        self.f.iter().map(|p| p.max_total_degree()).max().unwrap_or(0)
    }

    /// `C(x, f̂_x)`: the Koszul complex of the system.
    pub fn ctx_cx(&self) -> Arc<Context> {
        ContextBuilder::new()
            .even("x", self.n)
            .odd("f^x", self.s)
            .build()
    }

    /// `C(z, f̂_z)`: an isomorphic copy used for operator arguments.
    pub fn ctx_cz(&self) -> Arc<Context> {
        ContextBuilder::new()
            .even("z", self.n)
            .odd("f^z", self.s)
            .build()
    }

    /// `C(x, y, f̂_x, f̂_y)`: home of the difference Jacobian.
    pub fn ctx_cxy(&self) -> Arc<Context> {
        ContextBuilder::new()
            .even("x", self.n)
            .even("y", self.n)
            .odd("f^x", self.s)
            .odd("f^y", self.s)
            .build()
    }

    /// Dual complex `C(x_*, f̂_*^x)` of functionals.
    pub fn ctx_dx(&self) -> Arc<Context> {
        ContextBuilder::new()
            .even_dual("x*", self.n, "x")
            .odd_dual("f*^x", self.s, "f^x")
            .build()
    }

    /// The system evaluated at another variable family: `f_i(v)`.
    pub fn f_at(&self, var: &str) -> Vec<Mv> {
        let ctx = ContextBuilder::new().even(var, self.n).build();
        self.f
            .iter()
            .map(|p| p.rename(&[("x", var)], &ctx).expect("rename"))
            .collect()
    }

    /// Boundary assignment `f̂_v ↦ f(v)` for each (generator family,
    /// variable family) pair.
    pub fn assignment(&self, pairs: &[(&str, &str)]) -> Assignment {
        let mut asg = Assignment::new();
        for (gen_fam, var_fam) in pairs {
            asg = asg.assign(gen_fam, self.f_at(var_fam));
        }
        asg
    }

    /// Divided-difference rows `d[i][j] = ∇ʲf_i(v, w)` in `target`.
    pub fn nabla_rows(
        &self,
        xname: &str,
        yname: &str,
        target: &Arc<Context>,
    ) -> Result<Vec<Vec<Mv>>, AlgebraError> {
        let fs = self.f_at(xname);
        fs.iter()
            .map(|p| divided_differences(p, &self.order, xname, yname, target))
            .collect()
    }
}

/// Apply the difference homotopy `∇` to `c`.
///
/// `c` depends on the input families `xin` (even) and `uin` (odd);
/// everything else spectates. The result lives in `target`, which carries
/// the output families `xout`, `yout` (even) and `uout` (odd):
///
/// ```text
/// ∇.c = Σ_k û_k · ( Δᵏ.c ) / (x_k - y_k)
/// ```
///
/// with `Δᵏ` substituting `y` for the variables before `k` in `order`,
/// killing their `û`'s, and differencing in the `k`-th variable.
pub fn nabla_apply(
    c: &Mv,
    xin: &str,
    uin: &str,
    xout: &str,
    yout: &str,
    uout: &str,
    order: &[usize],
    target: &Arc<Context>,
) -> Result<Mv, AlgebraError> {
    let xi = c.ctx.family_or_err(xin)?;
    let ui = c.ctx.family_or_err(uin)?;
    let n = c.ctx.families[xi].arity;
    if c.ctx.families[ui].arity != n || order.len() != n {
        return Err(AlgebraError::Invalid(
            "nabla: x and u families must have matching arity".into(),
        ));
    }
    let mut pos = vec![usize::MAX; n];
    for (p, &k) in order.iter().enumerate() {
        pos[k] = p;
    }
    let xv: Vec<Mv> = (0..n).map(|j| Mv::var_by_name(target, xout, j)).collect();
    let yv: Vec<Mv> = (0..n).map(|j| Mv::var_by_name(target, yout, j)).collect();
    let uv: Vec<Mv> = (0..n).map(|j| Mv::gen_by_name(target, uout, j)).collect();
    let zero = Mv::zero(target);
    let mut out = Mv::zero(target);
    for k in 0..n {
        // Δᵏ: earlier variables at y with their û's killed, later ones
        // still at x; the k-th variable is differenced.
        let mut ev: Vec<Mv> = (0..n)
            .map(|j| {
                if pos[j] < pos[k] {
                    yv[j].clone()
                } else {
                    xv[j].clone()
                }
            })
            .collect();
        let ov: Vec<Mv> = (0..n)
            .map(|j| {
                if pos[j] <= pos[k] {
                    zero.clone()
                } else {
                    uv[j].clone()
                }
            })
            .collect();
        let hi = subst(c, &[(xi, ev.clone())], &[(ui, ov.clone())], target)?;
        ev[k] = yv[k].clone();
        let lo = subst(c, &[(xi, ev)], &[(ui, ov)], target)?;
        let diff = uv[k].mul(&hi.sub(&lo)?)?;
        out = out.add(&divexact_linear(&diff, xout, yout, k)?)?;
    }
    Ok(out)
}

/// `û∇f_i(v, w) = Σ_k û_k ∇ᵏf_i(v, w)` for every `i`, in `target`.
pub fn u_nabla_f(
    sys: &PolySystem,
    xname: &str,
    yname: &str,
    uname: &str,
    target: &Arc<Context>,
) -> Result<Vec<Mv>, AlgebraError> {
    let rows = sys.nabla_rows(xname, yname, target)?;
    rows.iter()
        .map(|row| {
            let mut acc = Mv::zero(target);
            for (k, d) in row.iter().enumerate() {
                acc = acc.add(&Mv::gen_by_name(target, uname, k).mul(d)?)?;
            }
            Ok(acc)
        })
        .collect()
}

/// The difference Jacobian `J(x, y) ∈ C(x, y, f̂_x, f̂_y)`.
///
/// For `s < n` the auxiliary `û_*` word can never be saturated and the
/// result is zero.
pub fn difference_jacobian(sys: &PolySystem) -> Result<Mv, AlgebraError> {
    let (n, s) = (sys.n, sys.s);
    let big = ContextBuilder::new()
        .even("x", n)
        .even("y", n)
        .odd("u", n)
        .odd("f^x", s)
        .odd("f^y", s)
        .odd_dual("u*", n, "u")
        .build();
    let unf = u_nabla_f(sys, "x", "y", "u", &big)?;
    let mut prod = Mv::one(&big);
    for k in (0..n).rev() {
        prod = prod.mul(&Mv::gen_by_name(&big, "u*", k).neg())?;
    }
    for i in 0..s {
        let factor = Mv::gen_by_name(&big, "f^x", i)
            .sub(&Mv::gen_by_name(&big, "f^y", i))?
            .sub(&unf[i])?;
        prod = prod.mul(&factor)?;
    }
    contract(&prod, &[("u*", "u")])?.project(&sys.ctx_cxy())
}

/// The correction operator `T` applied to `a(z, f̂_z)`, yielding an element
/// of `C(x, y, f̂_x, f̂_y)`:
///
/// ```text
/// T.a = ⊤_u [ det‖ ∇f  û_* ; -f̂_x+f̂_y  0 ‖ · ∇_{(x',û')}.( a(x', f̂_y + û'∇f(x',y)) ) ]
/// ```
pub fn t_apply(sys: &PolySystem, a: &Mv) -> Result<Mv, AlgebraError> {
    let (n, s) = (sys.n, sys.s);
    // a(x', f̂_y + û'∇f(x', y))
    let ctx_m1 = ContextBuilder::new()
        .even("x'", n)
        .even("y", n)
        .odd("u'", n)
        .odd("f^y", s)
        .build();
    let unf1 = u_nabla_f(sys, "x'", "y", "u'", &ctx_m1)?;
    let zi = a.ctx.family_or_err("z")?;
    let fzi = a.ctx.family_or_err("f^z")?;
    let xs: Vec<Mv> = (0..n).map(|j| Mv::var_by_name(&ctx_m1, "x'", j)).collect();
    let fvals: Vec<Mv> = (0..s)
        .map(|i| Mv::gen_by_name(&ctx_m1, "f^y", i).add(&unf1[i]))
        .collect::<Result<_, _>>()?;
    let m1 = subst(a, &[(zi, xs)], &[(fzi, fvals)], &ctx_m1)?;

    // ∇ over (x', û') with outputs (x, y, û)
    let ctx_m2 = ContextBuilder::new()
        .even("x", n)
        .even("y", n)
        .odd("u", n)
        .odd("f^y", s)
        .build();
    let m2 = nabla_apply(&m1, "x'", "u'", "x", "y", "u", &sys.order, &ctx_m2)?;

    // det‖ ∇f  û_* ; -f̂_x+f̂_y  0 ‖, with the inner ⊤ over an auxiliary
    // copy u2 of û
    let ctx_d = ContextBuilder::new()
        .even("x", n)
        .even("y", n)
        .odd("u2", n)
        .odd("f^x", s)
        .odd("f^y", s)
        .odd_dual("u2*", n, "u2")
        .odd_dual("u*", n, "u")
        .build();
    let unf2 = u_nabla_f(sys, "x", "y", "u2", &ctx_d)?;
    let mut det = Mv::one(&ctx_d);
    for k in (0..n).rev() {
        let top = Mv::gen_by_name(&ctx_d, "u*", k).add(&Mv::gen_by_name(&ctx_d, "u2*", k))?;
        det = det.mul(&top)?;
    }
    for i in 0..s {
        let bottom = Mv::gen_by_name(&ctx_d, "f^y", i)
            .sub(&Mv::gen_by_name(&ctx_d, "f^x", i))?
            .add(&unf2[i])?;
        det = det.mul(&bottom)?;
    }
    let det = contract(&det, &[("u2*", "u2")])?;

    let ctx_t = ContextBuilder::new()
        .even("x", n)
        .even("y", n)
        .odd("u", n)
        .odd("f^x", s)
        .odd("f^y", s)
        .odd_dual("u*", n, "u")
        .build();
    let prod = det.embed(&ctx_t)?.mul(&m2.embed(&ctx_t)?)?;
    contract(&prod, &[("u*", "u")])?.project(&sys.ctx_cxy())
}

/// Parity of the operator `T` (and of `∂`-conjugation signs built on it).
pub fn t_parity(sys: &PolySystem) -> u8 {
    ((sys.n + sys.s + 1) % 2) as u8
}

/// The `J`-map: `c(x_*, f̂_*^x) ↦ ⊤_{(y, f̂_y)} J(x,y) · c(y_*, f̂_*^y)`,
/// an element of `C(x, f̂_x)`.
pub fn j_map(sys: &PolySystem, c: &Mv) -> Result<Mv, AlgebraError> {
    let (n, s) = (sys.n, sys.s);
    let jac = difference_jacobian(sys)?;
    let big = ContextBuilder::new()
        .even("x", n)
        .even("y", n)
        .odd("f^x", s)
        .odd("f^y", s)
        .odd_dual("f*^y", s, "f^y")
        .even_dual("y*", n, "y")
        .build();
    let cy = c.rename(&[("x*", "y*"), ("f*^x", "f*^y")], &big)?;
    let prod = jac.embed(&big)?.mul(&cy)?;
    contract(&prod, &[("y*", "y"), ("f*^y", "f^y")])?.project(&sys.ctx_cx())
}

/// The `J`-product:
/// `(c_1, c_2) ↦ ⊥_{(x, f̂_x)} c_1(x_*, f̂_*^x) · (J-map of c_2)`,
/// an element of the dual complex `C(x_*, f̂_*^x)`.
pub fn j_product(sys: &PolySystem, c1: &Mv, c2: &Mv) -> Result<Mv, AlgebraError> {
    let (n, s) = (sys.n, sys.s);
    let jm = j_map(sys, c2)?;
    let big = ContextBuilder::new()
        .even("x", n)
        .odd("f^x", s)
        .odd_dual("f*^x", s, "f^x")
        .even_dual("x*", n, "x")
        .build();
    let prod = c1.embed(&big)?.mul(&jm.embed(&big)?)?;
    crate::pairing::contract_left(&prod, &[("x*", "x"), ("f*^x", "f^x")])?.project(&sys.ctx_dx())
}

/// Both sides of the homotopy skewlinearity identity of the `J`-map:
/// `(J-map c)·a − J-map(⊥_y c a)` on the left and
/// `(−1)^{|c||a|} ⊤_y (J·(a(x) − a(y)))·c(y_*)` on the right, where the
/// right side is `⊤_y ⊤_z ∂[T] c a` rewritten through the boundary
/// formula for `T` and the factor-reordering sign. Requires
/// parity-homogeneous `c` and `a`.
pub fn skewlinearity_sides(
    sys: &PolySystem,
    c: &Mv,
    a: &Mv,
) -> Result<(Mv, Mv), AlgebraError> {
    let (n, s) = (sys.n, sys.s);
    let jc_a = j_map(sys, c)?.mul(a)?;
    let bigb = ContextBuilder::new()
        .even("y", n)
        .odd("f^y", s)
        .odd_dual("f*^y", s, "f^y")
        .even_dual("y*", n, "y")
        .build();
    let cy = c.rename(&[("x*", "y*"), ("f*^x", "f*^y")], &bigb)?;
    let ay = a.rename(&[("x", "y"), ("f^x", "f^y")], &bigb)?;
    let bca = crate::pairing::contract_left(&cy.mul(&ay)?, &[("y*", "y"), ("f*^y", "f^y")])?;
    let bca_x = bca.rename(&[("y*", "x*"), ("f*^y", "f*^x")], &sys.ctx_dx())?;
    let lhs = jc_a.sub(&j_map(sys, &bca_x)?)?;

    let bigr = ContextBuilder::new()
        .even("x", n)
        .even("y", n)
        .odd("f^x", s)
        .odd("f^y", s)
        .odd_dual("f*^y", s, "f^y")
        .even_dual("y*", n, "y")
        .build();
    let jac = difference_jacobian(sys)?;
    let ax = a.embed(&bigr)?;
    let ayr = a.rename(&[("x", "y"), ("f^x", "f^y")], &bigr)?;
    let e = jac.embed(&bigr)?.mul(&ax.sub(&ayr)?)?;
    let cyr = c.rename(&[("x*", "y*"), ("f*^x", "f*^y")], &bigr)?;
    let mut rhs =
        contract(&e.mul(&cyr)?, &[("y*", "y"), ("f*^y", "f^y")])?.project(&sys.ctx_cx())?;
    if c.parity()? == 1 && a.parity()? == 1 {
        rhs = rhs.neg();
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::boundary;
    use crate::mv::q;
    use crate::poly::difference;

    fn sys1(fs: &[fn(&Mv) -> Mv]) -> PolySystem {
        let ctx = ContextBuilder::new().even("x", 1).build();
        let x = Mv::var_by_name(&ctx, "x", 0);
        PolySystem::new(1, fs.iter().map(|f| f(&x)).collect(), None).unwrap()
    }

    /// For n = s = 1 the difference Jacobian is the classical Bezoutian
    /// `(f(x) - f(y))/(x - y)`.
    #[test]
    fn univariate_bezoutian() {
        for f in [
            |x: &Mv| x.pow(2).unwrap(),
            |x: &Mv| x.pow(3).unwrap(),
            |x: &Mv| {
                x.pow(3)
                    .unwrap()
                    .sub(&x.scale(&q(2)))
                    .unwrap()
                    .add(&Mv::one(&x.ctx))
                    .unwrap()
            },
        ] {
            let sys = sys1(&[f]);
            let jac = difference_jacobian(&sys).unwrap();
            let ctx = sys.ctx_cxy();
            let expect = divexact_linear(
                &difference(&sys.f[0], "x", "y", &ctx).unwrap(),
                "x",
                "y",
                0,
            )
            .unwrap();
            assert_eq!(jac, expect);
        }
    }

    /// The sign convention: the identity system has `J = 1`.
    #[test]
    fn identity_system_jacobian_is_one() {
        let sys = sys1(&[|x: &Mv| x.clone()]);
        let jac = difference_jacobian(&sys).unwrap();
        assert_eq!(jac, Mv::one(&sys.ctx_cxy()));

        let ctx2 = ContextBuilder::new().even("x", 2).build();
        let f: Vec<Mv> = (0..2).map(|i| Mv::var_by_name(&ctx2, "x", i)).collect();
        let sys2 = PolySystem::new(2, f, None).unwrap();
        let jac2 = difference_jacobian(&sys2).unwrap();
        assert_eq!(jac2, Mv::one(&sys2.ctx_cxy()));
    }

    #[test]
    fn underdetermined_system_has_zero_jacobian() {
        let ctx2 = ContextBuilder::new().even("x", 2).build();
        let f = vec![Mv::var_by_name(&ctx2, "x", 0)
            .add(&Mv::var_by_name(&ctx2, "x", 1))
            .unwrap()];
        let sys = PolySystem::new(2, f, None).unwrap();
        assert!(difference_jacobian(&sys).unwrap().is_zero());
    }

    fn sys2(fs: &[fn(&Mv, &Mv) -> Mv]) -> PolySystem {
        let ctx = ContextBuilder::new().even("x", 2).build();
        let x1 = Mv::var_by_name(&ctx, "x", 0);
        let x2 = Mv::var_by_name(&ctx, "x", 1);
        PolySystem::new(2, fs.iter().map(|f| f(&x1, &x2)).collect(), None).unwrap()
    }

    #[test]
    fn jacobian_is_a_cycle() {
        let systems = vec![
            sys1(&[|x: &Mv| x.pow(3).unwrap()]),
            sys2(&[
                |a: &Mv, _: &Mv| a.pow(2).unwrap(),
                |_: &Mv, b: &Mv| b.pow(3).unwrap(),
            ]),
            sys2(&[
                |a: &Mv, b: &Mv| a.mul(b).unwrap(),
                |a: &Mv, b: &Mv| a.add(b).unwrap(),
            ]),
        ];
        for sys in systems {
            let jac = difference_jacobian(&sys).unwrap();
            let asg = sys.assignment(&[("f^x", "x"), ("f^y", "y")]);
            assert!(boundary(&jac, &asg).unwrap().is_zero());
        }
    }

    /// `∂[∇.c] + ∇.∂[c] = c - c|_{x↦y, û↦0}` in `C(x, y, û; û ↦ x-y)`.
    #[test]
    fn nabla_telescoping() {
        let n = 2;
        let ctx = ContextBuilder::new()
            .even("x", n)
            .even("y", n)
            .odd("u", n)
            .build();
        let x1 = Mv::var_by_name(&ctx, "x", 0);
        let x2 = Mv::var_by_name(&ctx, "x", 1);
        let u1 = Mv::gen_by_name(&ctx, "u", 0);
        let u2 = Mv::gen_by_name(&ctx, "u", 1);
        let samples = vec![
            x1.pow(3).unwrap(),
            x1.mul(&x2).unwrap().mul(&u1).unwrap(),
            x2.pow(2).unwrap().mul(&u2).unwrap().add(&x1.mul(&u1).unwrap()).unwrap(),
            u1.mul(&u2).unwrap().mul(&x1).unwrap(),
        ];
        // û ↦ x - y
        let uval: Vec<Mv> = (0..n)
            .map(|j| {
                Mv::var_by_name(&ctx, "x", j)
                    .sub(&Mv::var_by_name(&ctx, "y", j))
                    .unwrap()
            })
            .collect();
        let mut asg = Assignment::new();
        asg = asg.assign("u", uval);
        let order = [0usize, 1];
        for c in samples {
            let nc = nabla_apply(&c, "x", "u", "x", "y", "u", &order, &ctx).unwrap();
            let lhs = boundary(&nc, &asg)
                .unwrap()
                .add(&nabla_apply(&boundary(&c, &asg).unwrap(), "x", "u", "x", "y", "u", &order, &ctx).unwrap())
                .unwrap();
            // Δ.c = c - c(y, 0)
            let xi = ctx.family("x").unwrap();
            let ui = ctx.family("u").unwrap();
            let yv: Vec<Mv> = (0..n).map(|j| Mv::var_by_name(&ctx, "y", j)).collect();
            let zv: Vec<Mv> = (0..n).map(|_| Mv::zero(&ctx)).collect();
            let cy = subst(&c, &[(xi, yv)], &[(ui, zv)], &ctx).unwrap();
            let rhs = c.sub(&cy).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    /// The main theorem: `J · (a(x, f̂_x) - a(y, f̂_y)) = ∂[T.a]`, with the
    /// operator boundary expanded through the Hom formula.
    #[test]
    fn main_theorem() {
        let systems = vec![
            sys1(&[|x: &Mv| x.clone()]),
            sys1(&[|x: &Mv| x.pow(2).unwrap()]),
            sys1(&[|x: &Mv| {
                x.pow(2).unwrap().sub(&Mv::one(&x.ctx)).unwrap()
            }]),
            sys2(&[
                |a: &Mv, _: &Mv| a.clone(),
                |_: &Mv, b: &Mv| b.clone(),
            ]),
            sys2(&[
                |a: &Mv, _: &Mv| a.pow(2).unwrap(),
                |a: &Mv, b: &Mv| b.pow(2).unwrap().add(a).unwrap(),
            ]),
        ];
        for sys in systems {
            let ctx_z = sys.ctx_cz();
            let mut samples = vec![
                Mv::var_by_name(&ctx_z, "z", 0),
                Mv::gen_by_name(&ctx_z, "f^z", 0),
                Mv::var_by_name(&ctx_z, "z", 0)
                    .pow(2)
                    .unwrap()
                    .mul(&Mv::gen_by_name(&ctx_z, "f^z", 0))
                    .unwrap(),
            ];
            if sys.n == 2 {
                samples.push(
                    Mv::var_by_name(&ctx_z, "z", 1)
                        .mul(&Mv::gen_by_name(&ctx_z, "f^z", 0))
                        .unwrap()
                        .mul(&Mv::gen_by_name(&ctx_z, "f^z", 1))
                        .unwrap(),
                );
            }
            let jac = difference_jacobian(&sys).unwrap();
            let ctx_xy = sys.ctx_cxy();
            let asg_xy = sys.assignment(&[("f^x", "x"), ("f^y", "y")]);
            let asg_z = sys.assignment(&[("f^z", "z")]);
            for a in samples {
                // a(x, f̂_x) - a(y, f̂_y)
                let zi = a.ctx.family("z").unwrap();
                let fzi = a.ctx.family("f^z").unwrap();
                let to = |v: &str, g: &str| {
                    let ev: Vec<Mv> =
                        (0..sys.n).map(|j| Mv::var_by_name(&ctx_xy, v, j)).collect();
                    let ov: Vec<Mv> =
                        (0..sys.s).map(|i| Mv::gen_by_name(&ctx_xy, g, i)).collect();
                    subst(&a, &[(zi, ev)], &[(fzi, ov)], &ctx_xy).unwrap()
                };
                let lhs = jac.mul(&to("x", "f^x").sub(&to("y", "f^y")).unwrap()).unwrap();
                let ta = t_apply(&sys, &a).unwrap();
                let tda = t_apply(&sys, &boundary(&a, &asg_z).unwrap()).unwrap();
                let mut rhs = boundary(&ta, &asg_xy).unwrap();
                rhs = if t_parity(&sys) == 0 {
                    rhs.sub(&tda).unwrap()
                } else {
                    rhs.add(&tda).unwrap()
                };
                assert_eq!(lhs, rhs, "n={} s={}", sys.n, sys.s);
            }
        }
    }

    /// The J-map is a chain map: `∂[Jc] = (-1)^{|J|} J(∂c)`.
    #[test]
    fn j_map_is_a_chain_map() {
        let systems = vec![
            sys1(&[|x: &Mv| x.pow(2).unwrap()]),
            sys2(&[
                |a: &Mv, _: &Mv| a.pow(2).unwrap(),
                |a: &Mv, b: &Mv| b.pow(2).unwrap().add(a).unwrap(),
            ]),
        ];
        for sys in systems {
            let ctx_d = sys.ctx_dx();
            let asg_d = sys.assignment(&[("f^x", "x")]);
            let asg_x = sys.assignment(&[("f^x", "x")]);
            // dual samples: (x^a)_*, (x^a)_* f̂_*^1, f̂_*-words
            let xs = |a: u16| {
                let mut t = crate::mv::Term::scalar(&ctx_d);
                t.exps[0] = a;
                let mut m = Mv::zero(&ctx_d);
                m.terms.insert(t, q(1));
                m
            };
            let fs1 = Mv::gen_by_name(&ctx_d, "f*^x", 0);
            let samples = vec![
                xs(0),
                xs(2),
                xs(1).mul(&fs1).unwrap(),
                fs1.clone(),
            ];
            for c in samples {
                let jc = j_map(&sys, &c).unwrap();
                let lhs = boundary(&jc, &asg_x).unwrap();
                let jdc = j_map(&sys, &boundary(&c, &asg_d).unwrap()).unwrap();
                // |J| = s - n ≡ 0 for the square systems tested here
                assert_eq!(lhs, jdc);
            }
        }
    }

    /// Homotopy skewlinearity of the J-map over a grid of dual functionals
    /// and multipliers of every parity combination.
    #[test]
    fn j_map_skewlinearity() {
        let systems = vec![
            sys1(&[|x: &Mv| x.pow(2).unwrap()]),
            sys1(&[|x: &Mv| x.pow(2).unwrap(), |x: &Mv| x.pow(3).unwrap()]),
        ];
        for sys in systems {
            let ctx_d = sys.ctx_dx();
            let ctx_x = sys.ctx_cx();
            let xsd = |a: u16| {
                let mut t = crate::mv::Term::scalar(&ctx_d);
                t.exps[0] = a;
                let mut m = Mv::zero(&ctx_d);
                m.terms.insert(t, q(1));
                m
            };
            let fs1 = Mv::gen_by_name(&ctx_d, "f*^x", 0);
            let xv = Mv::var_by_name(&ctx_x, "x", 0);
            let f1 = Mv::gen_by_name(&ctx_x, "f^x", 0);
            let cs = vec![xsd(0), xsd(2), xsd(1).mul(&fs1).unwrap(), fs1.clone()];
            let avs = vec![
                Mv::one(&ctx_x),
                xv.pow(2).unwrap(),
                f1.clone(),
                xv.mul(&f1).unwrap(),
            ];
            for c in &cs {
                for a in &avs {
                    let (lhs, rhs) = skewlinearity_sides(&sys, c, a).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    /// Homotopy skewcommutativity of the J-product: the signed difference
    /// vanishes for fdeg-0 cycles over a square system and is a certified
    /// boundary over an overdetermined one.
    #[test]
    fn j_product_skewcommutative() {
        use crate::solver::{default_truncation, solve_boundary_membership, Membership};
        let sq = sys1(&[|x: &Mv| x.pow(2).unwrap()]);
        let ctx_d = sq.ctx_dx();
        let xsd = |a: u16| {
            let mut t = crate::mv::Term::scalar(&ctx_d);
            t.exps[0] = a;
            let mut m = Mv::zero(&ctx_d);
            m.terms.insert(t, q(1));
            m
        };
        // fdeg-0 cycles of (x²): both |c|' even, so the identity is plain
        // commutativity, and the difference lands in the zero boundary
        // space of top dual degree — exact equality
        let c1 = xsd(0).add(&xsd(1).scale(&q(3))).unwrap();
        let c2 = xsd(1);
        let a = j_product(&sq, &c1, &c2).unwrap();
        let b = j_product(&sq, &c2, &c1).unwrap();
        assert!(!a.is_zero());
        assert_eq!(a, b);

        // s > n: differences of boundary cycles certified up to boundary
        let over = sys1(&[|x: &Mv| x.pow(2).unwrap(), |x: &Mv| x.pow(3).unwrap()]);
        let d2 = over.ctx_dx();
        let asg_d2 = over.assignment(&[("f^x", "x")]);
        let mut r = crate::sample::rng(5);
        let mut seen = 0;
        for _ in 0..6 {
            let b1 = boundary(
                &crate::sample::random_poly(&mut r, &d2, "x*", 4),
                &asg_d2,
            )
            .unwrap();
            let b2 = boundary(
                &crate::sample::random_poly(&mut r, &d2, "x*", 5),
                &asg_d2,
            )
            .unwrap();
            if b1.is_zero() || b2.is_zero() {
                continue;
            }
            let jpar = (over.s - over.n) as u8 % 2;
            let p1 = (b1.parity().unwrap() + jpar) % 2;
            let p2 = (b2.parity().unwrap() + jpar) % 2;
            let a = j_product(&over, &b1, &b2).unwrap();
            let b = j_product(&over, &b2, &b1).unwrap();
            let diff = if (p1 * p2) % 2 == 1 {
                a.add(&b).unwrap()
            } else {
                a.sub(&b).unwrap()
            };
            if diff.is_zero() {
                continue;
            }
            let m =
                solve_boundary_membership(&diff, &asg_d2, default_truncation(&over) + 3).unwrap();
            assert!(matches!(m, Membership::Certificate(_)));
            seen += 1;
        }
        assert!(seen >= 1, "no nonzero skew differences sampled");
    }
}
