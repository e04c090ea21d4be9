use alloc::format;
use alloc::vec::Vec;

use crate::algebra::parse::parse_poly;
use crate::algebra::poly::{MultiPoly, Vars};
use crate::algebra::{Field, FieldElem};
use crate::error::{Error, Result};

/// Generators of an ideal, all over one variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGens {
    vars: Vars,
    gens: Vec<MultiPoly>,
}

impl IdealGens {
    /// Zero generators are dropped; an ideal with no nonzero generator is rejected.
    pub fn new(vars: &Vars, gens: Vec<MultiPoly>) -> Result<Self> {
        for g in &gens {
            if g.vars() != vars {
                return Err(Error::VariableMismatch(format!(
                    "generator {g} is over ({}), expected ({})",
                    g.vars().join(","),
                    vars.join(",")
                )));
            }
        }
        let gens: Vec<MultiPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(Error::Precondition(
                "the ideal has no nonzero generator".into(),
            ));
        }
        Ok(IdealGens {
            vars: vars.clone(),
            gens,
        })
    }

    /// The zero ideal, which every jet is contained in.
    pub fn zero(vars: &Vars) -> Self {
        IdealGens {
            vars: vars.clone(),
            gens: Vec::new(),
        }
    }

    pub fn parse<S: AsRef<str>>(vars: &Vars, gens: &[S]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| parse_poly(g.as_ref(), vars))
            .collect::<Result<Vec<_>>>()?;
        IdealGens::new(vars, gens)
    }

    /// The ideal generated by the listed variables.
    pub fn coordinates(vars: &Vars, which: &[usize]) -> Self {
        IdealGens {
            vars: vars.clone(),
            gens: which
                .iter()
                .map(|&i| MultiPoly::variable(vars, Field::Rationals, i))
                .collect(),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn to_field(&self, field: Field) -> Result<Self> {
        Ok(IdealGens {
            vars: self.vars.clone(),
            gens: self
                .gens
                .iter()
                .map(|g| g.to_field(field))
                .collect::<Result<_>>()?,
        })
    }

    /// Re-embeds every generator into a larger variable list.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        Ok(IdealGens {
            vars: target.clone(),
            gens: self
                .gens
                .iter()
                .map(|g| g.embed(target))
                .collect::<Result<_>>()?,
        })
    }

    /// Sets one variable to a constant and removes it. May produce the zero ideal.
    pub fn specialize(&self, var: usize, value: &FieldElem) -> Result<Self> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.specialize(var, value))
            .collect::<Result<Vec<_>>>()?;
        let vars = match gens.first() {
            Some(g) => g.vars().clone(),
            None => self
                .vars
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != var)
                .map(|(_, v)| v.clone())
                .collect(),
        };
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealGens { vars, gens })
    }
}
