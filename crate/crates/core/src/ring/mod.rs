//! Polynomial rings K[x_ij, y_j]: variables, monomials, lex orders,
//! sparse polynomials and their textual form.

mod monomial;
mod order;
mod parse;
mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{CoeffError, CoeffField};

pub use monomial::ExponentVector;
pub use order::MonomialOrder;
pub use parse::{Bindings, Parsed};
pub use poly::{Polynomial, Term};
pub(crate) use poly::sub_scaled;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent overflow at line {line}, column {col}")]
    ExponentOverflow { line: usize, col: usize },
    #[error("variable index {0} is not covered by the monomial order")]
    VariableNotInOrder(usize),
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("leading term of the zero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// An indeterminate. `X` and `Y` are the matrix and column variables;
/// `Aux` variables are adjoined temporarily for elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variable {
    X(u16, u16),
    Y(u16),
    Aux(u16),
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::X(i, j) => write!(f, "x[{i}][{j}]"),
            Variable::Y(j) => write!(f, "y[{j}]"),
            Variable::Aux(k) => write!(f, "t[{k}]"),
        }
    }
}

/// A polynomial ring: coefficient field plus an indexed variable list.
///
/// Variable indices are dense and stable: extending a ring with auxiliary
/// variables appends them, so polynomials of the base ring stay valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    field: CoeffField,
    vars: Vec<Variable>,
    index: HashMap<Variable, usize>,
}

impl Ring {
    /// Builds a ring. Variables are stored X (row-major), then Y, then Aux.
    pub fn new(field: CoeffField, vars: impl IntoIterator<Item = Variable>) -> Self {
        let mut vars: Vec<Variable> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        let index = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Ring { field, vars, index }
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, v: Variable) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn variable(&self, i: usize) -> Variable {
        self.vars[i]
    }

    /// The variable as a polynomial. Panics if it is not in the ring.
    pub fn var(&self, v: Variable) -> Polynomial {
        let i = self
            .index_of(v)
            .unwrap_or_else(|| panic!("variable {v} not in ring"));
        Polynomial::monomial(self.field.one(), ExponentVector::var(i))
    }

    pub fn x(&self, i: usize, j: usize) -> Polynomial {
        self.var(Variable::X(i as u16, j as u16))
    }

    pub fn y(&self, j: usize) -> Polynomial {
        self.var(Variable::Y(j as u16))
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        Polynomial::constant(self.field.from_i64(c))
    }

    /// Appends `k` fresh auxiliary variables; returns the new ring and their indices.
    pub fn with_aux(&self, k: usize) -> (Arc<Ring>, Vec<usize>) {
        let used = self
            .vars
            .iter()
            .filter_map(|v| match v {
                Variable::Aux(a) => Some(*a + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let fresh: Vec<Variable> = (0..k as u16).map(|a| Variable::Aux(used + a)).collect();
        let ring = Ring::new(self.field, self.vars.iter().copied().chain(fresh.iter().copied()));
        let idx = fresh.iter().map(|&v| ring.index_of(v).unwrap()).collect();
        (Arc::new(ring), idx)
    }

    /// Prints `p` with terms sorted descending under `order` (ring order if `None`).
    pub fn fmt_poly(&self, p: &Polynomial, order: Option<&MonomialOrder>) -> String {
        let mut terms: Vec<_> = p.terms().iter().collect();
        if let Some(o) = order {
            terms.sort_by(|a, b| o.cmp(&b.0, &a.0));
        }
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.fmt_monomial(m, order);
            match (mag.is_one(), m.is_one()) {
                (_, true) => out.push_str(&mag.fmt_bare()),
                (true, false) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&mag.fmt_bare());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    pub fn fmt_monomial(&self, m: &ExponentVector, order: Option<&MonomialOrder>) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut factors: Vec<(usize, u16)> = m.iter().collect();
        if let Some(o) = order {
            factors.sort_by_key(|&(i, _)| o.rank(i));
        }
        factors
            .into_iter()
            .map(|(i, e)| {
                if e == 1 {
                    self.vars[i].to_string()
                } else {
                    format!("{}^{}", self.vars[i], e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring22() -> Ring {
        let mut v = vec![];
        for i in 1..=2 {
            for j in 1..=2 {
                v.push(Variable::X(i, j));
            }
            v.push(Variable::Y(i));
        }
        Ring::new(CoeffField::Rationals, v)
    }

    #[test]
    fn variable_layout_is_x_row_major_then_y() {
        let r = ring22();
        let names: Vec<String> = r.vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(
            names,
            ["x[1][1]", "x[1][2]", "x[2][1]", "x[2][2]", "y[1]", "y[2]"]
        );
    }

    #[test]
    fn aux_variables_are_appended() {
        let r = ring22();
        let (r2, idx) = r.with_aux(2);
        assert_eq!(idx, vec![6, 7]);
        assert_eq!(r2.variable(6), Variable::Aux(0));
        let (r3, idx) = r2.with_aux(1);
        assert_eq!(r3.variable(idx[0]), Variable::Aux(2));
    }

    #[test]
    fn printing() {
        let r = ring22();
        let g1 = &(&r.x(1, 1) * &r.y(1)) + &(&r.x(1, 2) * &r.y(2));
        assert_eq!(r.fmt_poly(&g1, None), "x[1][1]*y[1] + x[1][2]*y[2]");
        let p = &(&r.x(1, 1) * &r.x(1, 1)) - &Polynomial::constant("1/2".parse().unwrap());
        assert_eq!(r.fmt_poly(&p, None), "x[1][1]^2 - 1/2");
        assert_eq!(r.fmt_poly(&-&p, None), "-x[1][1]^2 + 1/2");
        assert_eq!(r.fmt_poly(&Polynomial::zero(), None), "0");
    }
}
