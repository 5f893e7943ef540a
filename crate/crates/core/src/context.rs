//! Variable and generator family declarations.
//!
//! A [`Context`] is an ordered list of families: even (commuting) variable
//! families like `x`, `y`, and odd (anticommuting) generator families like
//! `f^x` or `u`. Each family is primal or dual; a dual family records the
//! name of its primal partner, which fixes the pairing used by contractions
//! and by the adjoint differential.
//!
//! The declaration order of families is the canonical order for monomials
//! and wedge words. All contexts built here declare primal odd families
//! before dual odd families, so a stored wedge word always splits as
//! `[primal generators][dual generators]`.

use std::sync::Arc;

use crate::error::AlgebraError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Primal,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    pub arity: usize,
    pub parity: Parity,
    pub polarity: Polarity,
    /// For a dual family, the name of the primal family it pairs with.
    pub partner: Option<String>,
}

/// A single odd generator: (family index, index within the family).
pub type Gen = (u16, u16);

#[derive(Debug, PartialEq, Eq)]
pub struct Context {
    pub families: Vec<Family>,
    /// Offset of each even family's variables in the flattened exponent
    /// vector; `None` for odd families.
    pub even_offset: Vec<Option<usize>>,
    pub even_arity: usize,
}

impl Context {
    pub fn family(&self, name: &str) -> Option<usize> {
        self.families.iter().position(|f| f.name == name)
    }

    pub fn family_or_err(&self, name: &str) -> Result<usize, AlgebraError> {
        self.family(name)
            .ok_or_else(|| AlgebraError::UnknownFamily(name.to_string()))
    }

    /// Slice range of an even family in the exponent vector.
    pub fn even_range(&self, fam: usize) -> std::ops::Range<usize> {
        let off = self.even_offset[fam].expect("not an even family");
        off..off + self.families[fam].arity
    }

    pub fn is_odd(&self, fam: usize) -> bool {
        self.families[fam].parity == Parity::Odd
    }

    pub fn is_dual(&self, fam: usize) -> bool {
        self.families[fam].polarity == Polarity::Dual
    }

    /// Index of the primal family paired with the given dual family.
    pub fn partner_of(&self, dual_fam: usize) -> Option<usize> {
        let name = self.families[dual_fam].partner.as_deref()?;
        self.family(name)
    }
}

#[derive(Debug, Default)]
pub struct ContextBuilder {
    families: Vec<Family>,
}

impl ContextBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn even(mut self, name: &str, arity: usize) -> Self {
        self.families.push(Family {
            name: name.to_string(),
            arity,
            parity: Parity::Even,
            polarity: Polarity::Primal,
            partner: None,
        });
        self
    }

    /// Dual even family (functionals on monomials of `partner`).
    pub fn even_dual(mut self, name: &str, arity: usize, partner: &str) -> Self {
        self.families.push(Family {
            name: name.to_string(),
            arity,
            parity: Parity::Even,
            polarity: Polarity::Dual,
            partner: Some(partner.to_string()),
        });
        self
    }

    pub fn odd(mut self, name: &str, arity: usize) -> Self {
        self.families.push(Family {
            name: name.to_string(),
            arity,
            parity: Parity::Odd,
            polarity: Polarity::Primal,
            partner: None,
        });
        self
    }

    pub fn odd_dual(mut self, name: &str, arity: usize, partner: &str) -> Self {
        self.families.push(Family {
            name: name.to_string(),
            arity,
            parity: Parity::Odd,
            polarity: Polarity::Dual,
            partner: Some(partner.to_string()),
        });
        self
    }

    pub fn build(self) -> Arc<Context> {
        let mut seen = std::collections::HashSet::new();
        for f in &self.families {
            assert!(seen.insert(f.name.clone()), "duplicate family {}", f.name);
        }
        // Keep the [primal odd][dual odd] split invariant: a dual odd family
        // must never precede a primal odd family.
        let mut saw_dual_odd = false;
        for f in &self.families {
            if f.parity == Parity::Odd {
                if f.polarity == Polarity::Dual {
                    saw_dual_odd = true;
                } else {
                    assert!(
                        !saw_dual_odd,
                        "primal odd family {} declared after a dual odd family",
                        f.name
                    );
                }
            }
        }
        let mut even_offset = Vec::with_capacity(self.families.len());
        let mut off = 0usize;
        for f in &self.families {
            if f.parity == Parity::Even {
                even_offset.push(Some(off));
                off += f.arity;
            } else {
                even_offset.push(None);
            }
        }
        Arc::new(Context {
            families: self.families,
            even_offset,
            even_arity: off,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets() {
        let ctx = ContextBuilder::new()
            .even("x", 2)
            .even("y", 2)
            .odd("f^x", 3)
            .odd_dual("f*^x", 3, "f^x")
            .build();
        assert_eq!(ctx.even_arity, 4);
        assert_eq!(ctx.even_range(1), 2..4);
        assert_eq!(ctx.partner_of(3), Some(2));
        assert!(ctx.is_dual(3));
        assert!(!ctx.is_dual(2));
    }

    #[test]
    #[should_panic]
    fn rejects_primal_after_dual() {
        let _ = ContextBuilder::new()
            .odd_dual("u*", 1, "u")
            .odd("u", 1)
            .build();
    }
}
