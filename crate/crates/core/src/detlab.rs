//! Symbolic matrices X (generic, symmetric, skew-symmetric), the column Y,
//! the entries g_i of XY, determinants, cofactors and maximal minors.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::CoeffField;
use crate::error::{Error, Result};
use crate::ring::{Bindings, MonomialOrder, Polynomial, Ring, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Generic,
    Symmetric,
    Skew,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 3] = [MatrixKind::Generic, MatrixKind::Symmetric, MatrixKind::Skew];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Generic => "generic",
            MatrixKind::Symmetric => "symmetric",
            MatrixKind::Skew => "skew",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "generic" | "gen" => Ok(MatrixKind::Generic),
            "symmetric" | "sym" => Ok(MatrixKind::Symmetric),
            "skew" | "skew-symmetric" | "alt" => Ok(MatrixKind::Skew),
            other => Err(Error::InvalidArgument(format!("unknown matrix kind `{other}`"))),
        }
    }
}

/// Named lex orders used by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderPreset {
    /// x11 > x22 > ... > x_kk > rest
    RegseqGeneric,
    /// x_{n-1,n} > ... > x_{23} > x_{12} > rest
    RegseqSkew,
    /// y1 > ... > yn > x (row-major)
    Grob,
}

impl FromStr for OrderPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "regseq-generic" => Ok(OrderPreset::RegseqGeneric),
            "regseq-skew" => Ok(OrderPreset::RegseqSkew),
            "grob" => Ok(OrderPreset::Grob),
            other => Err(Error::InvalidArgument(format!("unknown order preset `{other}`"))),
        }
    }
}

impl fmt::Display for OrderPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderPreset::RegseqGeneric => "regseq-generic",
            OrderPreset::RegseqSkew => "regseq-skew",
            OrderPreset::Grob => "grob",
        })
    }
}

/// An m×n matrix of indeterminates together with the column Y = (y_1..y_n).
///
/// Indices are 1-based throughout. Symmetric and skew matrices store only
/// x(i,j) with i ≤ j (resp. i < j); the other entries are synthesized.
#[derive(Debug, Clone)]
pub struct SymbolicMatrix {
    kind: MatrixKind,
    m: usize,
    n: usize,
    ring: Arc<Ring>,
}

impl SymbolicMatrix {
    pub fn build(kind: MatrixKind, m: usize, n: usize, field: CoeffField) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Shape(format!("empty shape {m}x{n}")));
        }
        if kind != MatrixKind::Generic && m != n {
            return Err(Error::Shape(format!("{kind} matrices must be square, got {m}x{n}")));
        }
        if m > u16::MAX as usize || n > u16::MAX as usize {
            return Err(Error::Shape(format!("shape {m}x{n} too large")));
        }
        let mut vars = Vec::new();
        for i in 1..=m {
            for j in 1..=n {
                let keep = match kind {
                    MatrixKind::Generic => true,
                    MatrixKind::Symmetric => i <= j,
                    MatrixKind::Skew => i < j,
                };
                if keep {
                    vars.push(Variable::X(i as u16, j as u16));
                }
            }
        }
        vars.extend((1..=n).map(|j| Variable::Y(j as u16)));
        Ok(SymbolicMatrix {
            kind,
            m,
            n,
            ring: Arc::new(Ring::new(field, vars)),
        })
    }

    pub fn square(kind: MatrixKind, n: usize, field: CoeffField) -> Result<Self> {
        Self::build(kind, n, n, field)
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Shape(format!("{what} needs a square matrix, got {}x{}", self.m, self.n)))
        }
    }

    fn check_index(&self, i: usize, bound: usize, what: &str) -> Result<()> {
        if (1..=bound).contains(&i) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("{what} index {i} outside 1..={bound}")))
        }
    }

    /// Entry (i, j) of X. Panics on out-of-range indices.
    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        assert!((1..=self.m).contains(&i) && (1..=self.n).contains(&j), "entry ({i},{j}) out of range");
        match self.kind {
            MatrixKind::Generic => self.ring.x(i, j),
            MatrixKind::Symmetric => self.ring.x(i.min(j), i.max(j)),
            MatrixKind::Skew if i == j => Polynomial::zero(),
            MatrixKind::Skew if i < j => self.ring.x(i, j),
            MatrixKind::Skew => -&self.ring.x(j, i),
        }
    }

    pub fn y(&self, j: usize) -> Polynomial {
        self.ring.y(j)
    }

    /// g_i = Σ_k entry(i,k)·y_k.
    pub fn g(&self, i: usize) -> Polynomial {
        let terms = (1..=self.n).flat_map(|k| {
            let e = self.entry(i, k);
            let yk = self.y(k);
            (&e * &yk).into_terms()
        });
        Polynomial::from_terms(terms)
    }

    /// The entries g_1..g_m of XY.
    pub fn xy_entries(&self) -> Vec<Polynomial> {
        (1..=self.m).map(|i| self.g(i)).collect()
    }

    /// Determinant of the submatrix on `rows` × `cols` (equal lengths),
    /// by Laplace expansion along successive rows with sub-minors memoized
    /// by their column set.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        assert_eq!(rows.len(), cols.len());
        assert!(cols.len() < 64);
        let k = rows.len();
        let entries: Vec<Vec<Polynomial>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.entry(r, c)).collect())
            .collect();
        let mut memo: HashMap<u64, Polynomial> = HashMap::new();
        let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        laplace(&entries, full, &mut memo)
    }

    pub fn determinant(&self) -> Result<Polynomial> {
        self.require_square("determinant")?;
        let idx: Vec<usize> = (1..=self.n).collect();
        Ok(self.minor(&idx, &idx))
    }

    /// A_ji = (−1)^{i+j} · det(X without row j and column i).
    pub fn cofactor(&self, j: usize, i: usize) -> Result<Polynomial> {
        self.require_square("cofactor")?;
        self.check_index(j, self.n, "row")?;
        self.check_index(i, self.n, "column")?;
        let rows: Vec<usize> = (1..=self.n).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (1..=self.n).filter(|&c| c != i).collect();
        let d = self.minor(&rows, &cols);
        Ok(if (i + j).is_multiple_of(2) { d } else { -d })
    }

    /// Δ_i: the maximal minor of an (n+1)×n matrix with row i removed.
    pub fn row_deleted_minor(&self, i: usize) -> Result<Polynomial> {
        if self.m != self.n + 1 {
            return Err(Error::Shape(format!(
                "row-deleted minors need an (n+1)xn matrix, got {}x{}",
                self.m, self.n
            )));
        }
        self.check_index(i, self.m, "row")?;
        let rows: Vec<usize> = (1..=self.m).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (1..=self.n).collect();
        Ok(self.minor(&rows, &cols))
    }

    /// Δ·y_i − Σ_j A_ji·g_j, which the cofactor identity says is zero.
    pub fn cofactor_identity_residual(&self, i: usize) -> Result<Polynomial> {
        let det = self.determinant()?;
        self.check_index(i, self.n, "column")?;
        let mut acc = &det * &self.y(i);
        for j in 1..=self.n {
            acc = &acc - &(&self.cofactor(j, i)? * &self.g(j));
        }
        Ok(acc)
    }

    pub fn cofactor_identity_check(&self, i: usize) -> Result<bool> {
        Ok(self.cofactor_identity_residual(i)?.is_zero())
    }

    /// Σ_j A_ji·entry(j,k), which equals Δ for k = i and 0 otherwise.
    pub fn cofactor_column_sum(&self, i: usize, k: usize) -> Result<Polynomial> {
        self.check_index(k, self.n, "column")?;
        let mut acc = Polynomial::zero();
        for j in 1..=self.n {
            acc = &acc + &(&self.cofactor(j, i)? * &self.entry(j, k));
        }
        Ok(acc)
    }

    pub fn alien_cofactor_check(&self, i: usize, k: usize) -> Result<bool> {
        if i == k {
            return Ok(self.cofactor_column_sum(i, k)? == self.determinant()?);
        }
        Ok(self.cofactor_column_sum(i, k)?.is_zero())
    }

    /// Yᵗ·X·Y = Σ_i y_i·g_i.
    pub fn yt_x_y(&self) -> Result<Polynomial> {
        self.require_square("YᵗXY")?;
        Ok((1..=self.n).fold(Polynomial::zero(), |acc, i| &acc + &(&self.y(i) * &self.g(i))))
    }

    /// y_n·g_n − Σ_{i<n} (−y_i)·g_i; zero for skew X.
    pub fn skew_relation_residual(&self) -> Result<Polynomial> {
        if self.kind != MatrixKind::Skew {
            return Err(Error::InvalidArgument("skew relation needs a skew-symmetric matrix".into()));
        }
        let n = self.n;
        let lhs = &self.y(n) * &self.g(n);
        let rhs = (1..n).fold(Polynomial::zero(), |acc, i| &acc + &(&(-&self.y(i)) * &self.g(i)));
        Ok(&lhs - &rhs)
    }

    pub fn skew_relation_check(&self) -> Result<bool> {
        Ok(self.skew_relation_residual()?.is_zero())
    }

    /// Coefficient of g_i with respect to x_{i,n}, the tower variable of
    /// the i-th generator.
    pub fn tower_lead_coefficient(&self, i: usize) -> Result<Polynomial> {
        self.check_index(i, self.m, "row")?;
        let var = match self.kind {
            MatrixKind::Generic => Variable::X(i as u16, self.n as u16),
            MatrixKind::Symmetric => Variable::X(i.min(self.n) as u16, i.max(self.n) as u16),
            MatrixKind::Skew if i == self.n => {
                return Err(Error::InvalidArgument(format!(
                    "g[{i}] has no tower variable in a skew matrix"
                )))
            }
            MatrixKind::Skew => Variable::X(i as u16, self.n as u16),
        };
        let idx = self.ring.index_of(var).expect("tower variable in ring");
        let (deg, lc) = crate::ideal::leading_coefficient_in(&self.g(i), idx);
        debug_assert_eq!(deg, 1);
        Ok(lc)
    }

    /// The completed lex order for a preset.
    pub fn order(&self, preset: OrderPreset) -> MonomialOrder {
        let head: Vec<Variable> = match preset {
            OrderPreset::RegseqGeneric => (1..=self.m.min(self.n))
                .filter(|_| self.kind != MatrixKind::Skew)
                .map(|i| Variable::X(i as u16, i as u16))
                .collect(),
            OrderPreset::RegseqSkew => (1..self.n.min(self.m))
                .rev()
                .map(|i| Variable::X(i as u16, (i + 1) as u16))
                .filter(|v| self.ring.index_of(*v).is_some())
                .collect(),
            OrderPreset::Grob => return crate::ideal::canonical_order(&self.ring),
        };
        MonomialOrder::lex_completed(&self.ring, &head).expect("preset variables are in the ring")
    }

    /// The order for the regular-sequence certificate of this kind.
    pub fn regseq_order(&self) -> MonomialOrder {
        match self.kind {
            MatrixKind::Skew => self.order(OrderPreset::RegseqSkew),
            _ => self.order(OrderPreset::RegseqGeneric),
        }
    }

    /// A preset name (`regseq-generic`, `regseq-skew`, `grob`, or `regseq`
    /// for the kind's own) or an explicit `order lex: ...` line.
    pub fn resolve_order(&self, spec: &str) -> Result<MonomialOrder> {
        let spec = spec.trim();
        if spec.starts_with("order") {
            return Ok(self.ring.parse_order(spec)?);
        }
        if spec == "regseq" {
            return Ok(self.regseq_order());
        }
        Ok(self.order(spec.parse()?))
    }

    /// g_1..g_m, followed by Δ (square) or Δ_1..Δ_{m} ((n+1)×n) when `with_det`.
    pub fn ideal_generators(&self, with_det: bool) -> Result<Vec<Polynomial>> {
        let mut gens = self.xy_entries();
        if with_det {
            if self.is_square() {
                gens.push(self.determinant()?);
            } else {
                for i in 1..=self.m {
                    gens.push(self.row_deleted_minor(i)?);
                }
            }
        }
        Ok(gens)
    }

    /// Parses a polynomial list with `det`, `minor[i]`, `g[i]` bound.
    pub fn parse_list(&self, text: &str) -> Result<Vec<Polynomial>> {
        Ok(self.ring.parse_poly_list(text, &self.bindings())?)
    }

    pub fn parse_poly(&self, text: &str) -> Result<Polynomial> {
        Ok(self.ring.parse_poly_with(text, &self.bindings())?)
    }

    /// Named polynomials for parsing: `g[i]`, `det` when square,
    /// `minor[i]` when the shape is (n+1)×n.
    pub fn bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        for i in 1..=self.m {
            b.insert(format!("g[{i}]"), self.g(i));
        }
        if let Ok(det) = self.determinant() {
            b.insert("det".into(), det);
        }
        if self.m == self.n + 1 {
            for i in 1..=self.m {
                b.insert(format!("minor[{i}]"), self.row_deleted_minor(i).expect("shape checked"));
            }
        }
        b
    }

    pub fn describe(&self) -> String {
        format!("{} {}x{}", self.kind, self.m, self.n)
    }
}

fn laplace(entries: &[Vec<Polynomial>], cols: u64, memo: &mut HashMap<u64, Polynomial>) -> Polynomial {
    if cols == 0 {
        return Polynomial::constant(one_like(entries));
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let row = entries.len() - cols.count_ones() as usize;
    let mut acc = Polynomial::zero();
    let mut sign_pos = true;
    for c in 0..entries[row].len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let e = &entries[row][c];
        if !e.is_zero() {
            let sub = laplace(entries, cols & !(1 << c), memo);
            let term = e * &sub;
            acc = if sign_pos { &acc + &term } else { &acc - &term };
        }
        sign_pos = !sign_pos;
    }
    memo.insert(cols, acc.clone());
    acc
}

fn one_like(entries: &[Vec<Polynomial>]) -> crate::coeff::Coeff {
    entries
        .iter()
        .flatten()
        .find_map(|p| p.field())
        .unwrap_or(CoeffField::Rationals)
        .one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(kind: MatrixKind, m: usize, n: usize) -> SymbolicMatrix {
        SymbolicMatrix::build(kind, m, n, CoeffField::Rationals).unwrap()
    }

    fn show(x: &SymbolicMatrix, p: &Polynomial) -> String {
        x.ring().fmt_poly(p, None)
    }

    /// Leibniz formula over all permutations, independent of `laplace`.
    fn permutation_sum(x: &SymbolicMatrix) -> Polynomial {
        let n = x.cols();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut acc = Polynomial::zero();
        loop {
            let inversions = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|&(a, b)| perm[a] > perm[b])
                .count();
            let prod = (0..n).fold(x.ring().constant(1), |p, r| &p * &x.entry(r + 1, perm[r] + 1));
            acc = if inversions % 2 == 0 { &acc + &prod } else { &acc - &prod };
            // next permutation
            let Some(a) = (0..n.saturating_sub(1)).rev().find(|&a| perm[a] < perm[a + 1]) else {
                break;
            };
            let b = (a + 1..n).rev().find(|&b| perm[b] > perm[a]).unwrap();
            perm.swap(a, b);
            perm[a + 1..].reverse();
        }
        acc
    }

    #[test]
    fn shapes() {
        let s = mat(MatrixKind::Skew, 3, 3);
        assert!(s.entry(1, 1).is_zero());
        assert_eq!(s.entry(2, 1), -&s.ring().x(1, 2));
        let g = mat(MatrixKind::Generic, 3, 2);
        assert_eq!(g.ring().nvars(), 6 + 2);
        let y = mat(MatrixKind::Symmetric, 2, 2);
        assert_eq!(y.entry(1, 2), y.entry(2, 1));
        assert_eq!(y.entry(1, 2), y.ring().x(1, 2));
        assert!(matches!(SymbolicMatrix::build(MatrixKind::Skew, 3, 2, CoeffField::Rationals), Err(Error::Shape(_))));
        assert!(SymbolicMatrix::build(MatrixKind::Generic, 0, 2, CoeffField::Rationals).is_err());
    }

    #[test]
    fn entries_of_xy() {
        let g = mat(MatrixKind::Generic, 2, 2);
        let gs: Vec<String> = g.xy_entries().iter().map(|p| show(&g, p)).collect();
        assert_eq!(gs, ["x[1][1]*y[1] + x[1][2]*y[2]", "x[2][1]*y[1] + x[2][2]*y[2]"]);
        let s = mat(MatrixKind::Skew, 3, 3);
        let gs: Vec<String> = s.xy_entries().iter().map(|p| show(&s, p)).collect();
        assert_eq!(
            gs,
            [
                "x[1][2]*y[2] + x[1][3]*y[3]",
                "-x[1][2]*y[1] + x[2][3]*y[3]",
                "-x[1][3]*y[1] - x[2][3]*y[2]"
            ]
        );
        let y = mat(MatrixKind::Symmetric, 2, 2);
        assert_eq!(show(&y, &y.g(2)), "x[1][2]*y[1] + x[2][2]*y[2]");
    }

    #[test]
    fn determinants() {
        let g = mat(MatrixKind::Generic, 2, 2);
        assert_eq!(show(&g, &g.determinant().unwrap()), "x[1][1]*x[2][2] - x[1][2]*x[2][1]");
        assert!(mat(MatrixKind::Skew, 3, 3).determinant().unwrap().is_zero());
        assert!(mat(MatrixKind::Generic, 3, 2).determinant().is_err());
        for kind in MatrixKind::ALL {
            for n in 1..=4 {
                let x = mat(kind, n, n);
                assert_eq!(x.determinant().unwrap(), permutation_sum(&x), "{kind} {n}");
            }
        }
    }

    #[test]
    fn laplace_along_first_column() {
        let x = mat(MatrixKind::Generic, 3, 3);
        let det = permutation_sum(&x);
        assert_eq!(x.cofactor_column_sum(1, 1).unwrap(), det);
    }

    #[test]
    fn cofactor_identity() {
        let g = mat(MatrixKind::Generic, 2, 2);
        let lhs = &(&g.ring().x(2, 2) * &g.g(1)) - &(&g.ring().x(1, 2) * &g.g(2));
        assert_eq!(lhs, &g.determinant().unwrap() * &g.y(1));
        for kind in [MatrixKind::Generic, MatrixKind::Symmetric] {
            for n in 1..=4 {
                let x = mat(kind, n, n);
                for i in 1..=n {
                    assert!(x.cofactor_identity_check(i).unwrap());
                    for k in 1..=n {
                        assert!(x.alien_cofactor_check(i, k).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn skew_relation() {
        for n in 2..=5 {
            let s = mat(MatrixKind::Skew, n, n);
            assert!(s.skew_relation_check().unwrap(), "n = {n}");
            assert!(s.yt_x_y().unwrap().is_zero());
        }
        let s3 = mat(MatrixKind::Skew, 3, 3);
        let lhs = &s3.y(3) * &s3.g(3);
        assert_eq!(show(&s3, &lhs), "-x[1][3]*y[1]*y[3] - x[2][3]*y[2]*y[3]");
        assert!(mat(MatrixKind::Generic, 2, 2).skew_relation_check().is_err());
    }

    #[test]
    fn row_deleted_minors() {
        let x = mat(MatrixKind::Generic, 3, 2);
        assert_eq!(show(&x, &x.row_deleted_minor(3).unwrap()), "x[1][1]*x[2][2] - x[1][2]*x[2][1]");
        assert_eq!(show(&x, &x.row_deleted_minor(1).unwrap()), "x[2][1]*x[3][2] - x[2][2]*x[3][1]");
        assert!(mat(MatrixKind::Generic, 2, 2).row_deleted_minor(1).is_err());
        assert!(x.row_deleted_minor(4).is_err());
    }

    #[test]
    fn presets() {
        let g = mat(MatrixKind::Generic, 2, 2);
        let o = g.order(OrderPreset::RegseqGeneric);
        assert_eq!(
            o.describe(g.ring()),
            "order lex: x[1][1] > x[2][2] > x[1][2] > x[2][1] > y[1] > y[2]"
        );
        let s = mat(MatrixKind::Skew, 3, 3);
        assert_eq!(
            s.regseq_order().describe(s.ring()),
            "order lex: x[2][3] > x[1][2] > x[1][3] > y[1] > y[2] > y[3]"
        );
        let (_, lt) = s.g(2).leading_term(&s.regseq_order()).unwrap();
        assert_eq!(s.ring().fmt_monomial(&lt, None), "x[2][3]*y[3]");
        assert_eq!(
            g.order(OrderPreset::Grob).describe(g.ring()),
            "order lex: y[1] > y[2] > x[1][1] > x[1][2] > x[2][1] > x[2][2]"
        );
    }

    #[test]
    fn tower_coefficients() {
        for kind in MatrixKind::ALL {
            let x = mat(kind, 3, 3);
            let top = if kind == MatrixKind::Skew { 2 } else { 3 };
            for i in 1..=top {
                assert_eq!(x.tower_lead_coefficient(i).unwrap(), x.y(3));
            }
        }
        assert!(mat(MatrixKind::Skew, 3, 3).tower_lead_coefficient(3).is_err());
    }

    #[test]
    fn named_atoms() {
        let g = mat(MatrixKind::Generic, 2, 2);
        let p = g.ring().parse_poly_with("det*y[2]", &g.bindings()).unwrap();
        assert_eq!(p, &g.determinant().unwrap() * &g.y(2));
        let r = mat(MatrixKind::Generic, 3, 2);
        let b = r.bindings();
        assert!(b.contains_key("minor[3]") && !b.contains_key("det"));
        assert_eq!(r.ring().parse_poly_with("g[3]", &b).unwrap(), r.g(3));
    }
}
