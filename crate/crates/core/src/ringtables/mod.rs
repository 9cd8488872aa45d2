//! Product tables on the exceptional algebra: the span of the formal class
//! `s = i_*[S]` and the degree-2 basis `e_1..e_n` (orbifold side) or
//! `E_1..E_n` (resolution side).
//!
//! Three structures are built: the Chen-Ruan product, the cup product of the
//! crepant resolution, and its quantum-corrected deformation. Only products
//! of two degree-2 generators are tabulated.

mod render;

use std::collections::BTreeSet;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::CartanData;
use crate::coeffring::{BaseScalar, Coefficient, QuantumScalar};
use crate::corrections::{r_function, CorrectionFunction, DeltaIndex, EvalError};
use crate::exactnum::{rat, Cyclotomic};

pub use render::{render_latex, render_text, ToLatex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("pole at (μ,ν) = ({},{}): product E{i}·E{j} is undefined", .index.mu, .index.nu)]
    Pole {
        i: usize,
        j: usize,
        index: DeltaIndex,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("malformed table: {0}")]
    Malformed(String),
}

/// `c_s · s + Σ_l c_l · E_l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: DeserializeOwned"))]
pub struct ExcClass<C> {
    s_coeff: C,
    basis_coeffs: Vec<C>,
}

impl<C: Coefficient> ExcClass<C> {
    pub fn zero(rank: usize) -> Self {
        ExcClass {
            s_coeff: C::zero(rank as u32),
            basis_coeffs: vec![C::zero(rank as u32); rank],
        }
    }

    pub fn new(s_coeff: C, basis_coeffs: Vec<C>) -> Self {
        ExcClass {
            s_coeff,
            basis_coeffs,
        }
    }

    /// `c · s`.
    pub fn of_s(rank: usize, c: C) -> Self {
        ExcClass {
            s_coeff: c,
            ..Self::zero(rank)
        }
    }

    /// `c · E_l`, with `l` 1-based.
    pub fn of_basis(rank: usize, l: usize, c: C) -> Self {
        let mut out = Self::zero(rank);
        out.basis_coeffs[l - 1] = c;
        out
    }

    /// The generator `E_l` itself.
    pub fn generator(rank: usize, l: usize) -> Self {
        Self::of_basis(
            rank,
            l,
            C::from_base(&BaseScalar::constant(rank as u32, Cyclotomic::one())),
        )
    }

    pub fn rank(&self) -> usize {
        self.basis_coeffs.len()
    }

    pub fn s_coeff(&self) -> &C {
        &self.s_coeff
    }

    pub fn basis_coeffs(&self) -> &[C] {
        &self.basis_coeffs
    }

    /// Coefficient of `E_l`, 1-based.
    pub fn basis_coeff(&self, l: usize) -> &C {
        &self.basis_coeffs[l - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.s_coeff.is_zero() && self.basis_coeffs.iter().all(C::is_zero)
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, C::plus)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, C::minus)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        ExcClass {
            s_coeff: f(&self.s_coeff, &other.s_coeff),
            basis_coeffs: self
                .basis_coeffs
                .iter()
                .zip(&other.basis_coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn map<D>(&self, f: impl Fn(&C) -> D) -> ExcClass<D> {
        ExcClass {
            s_coeff: f(&self.s_coeff),
            basis_coeffs: self.basis_coeffs.iter().map(f).collect(),
        }
    }

    fn try_map<D, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<ExcClass<D>, E> {
        Ok(ExcClass {
            s_coeff: f(&self.s_coeff)?,
            basis_coeffs: self.basis_coeffs.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn scaled(&self, c: &Cyclotomic) -> Self {
        self.map(|x| x.scaled(c))
    }

    pub fn times_base(&self, b: &BaseScalar) -> Self {
        self.map(|x| x.times_base(b))
    }

    /// `E_l ↦ E_{n+1-l}` combined with the coefficient involution.
    pub fn relabeled(&self) -> Self {
        ExcClass {
            s_coeff: self.s_coeff.relabeled(),
            basis_coeffs: self.basis_coeffs.iter().rev().map(C::relabeled).collect(),
        }
    }

    pub fn substituted(&self, first: &BaseScalar, second: &BaseScalar) -> Self {
        self.map(|x| x.substituted(first, second))
    }

    /// `s` coefficient of degree 0 and each basis coefficient homogeneous of
    /// degree 0 or 2.
    pub fn is_graded(&self) -> bool {
        let ok = |d: BTreeSet<u32>| d.len() <= 1 && d.iter().all(|&x| x == 0 || x == 2);
        self.s_coeff.degrees().iter().all(|&d| d == 0)
            && self.basis_coeffs.iter().all(|c| ok(c.degrees()))
    }
}

/// Which ring structure a table records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TableKind {
    ChenRuan,
    Cup,
    /// Symbolic in `q`.
    Quantum,
    /// Quantum product evaluated at a point.
    QuantumAt {
        q: Vec<Cyclotomic>,
    },
}

/// Symmetric `n × n` table of products of degree-2 generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: DeserializeOwned"))]
pub struct ProductTable<C> {
    rank: usize,
    kind: TableKind,
    entries: Vec<Vec<ExcClass<C>>>,
}

impl<C: Coefficient> ProductTable<C> {
    /// Builds every entry independently from a 1-based rule.
    pub fn from_fn(rank: usize, kind: TableKind, f: impl Fn(usize, usize) -> ExcClass<C>) -> Self {
        let entries = (1..=rank)
            .map(|i| (1..=rank).map(|j| f(i, j)).collect())
            .collect();
        ProductTable {
            rank,
            kind,
            entries,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> &TableKind {
        &self.kind
    }

    /// Product of generators `i` and `j`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &ExcClass<C> {
        &self.entries[i - 1][j - 1]
    }

    pub fn entries(&self) -> &[Vec<ExcClass<C>>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.rank).all(|i| (1..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    pub fn is_graded(&self) -> bool {
        self.entries.iter().flatten().all(ExcClass::is_graded)
    }

    pub fn map<D: Coefficient>(&self, kind: TableKind, f: impl Fn(&C) -> D) -> ProductTable<D> {
        ProductTable {
            rank: self.rank,
            kind,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.map(&f)).collect())
                .collect(),
        }
    }

    /// The table after `E_l ↦ E_{n+1-l}`, `ℓ ↔ m`,
    /// `δ_{μν} ↦ δ_{(n+1-ν)(n+1-μ)}`.
    pub fn relabeled(&self) -> Self {
        let n = self.rank;
        Self::from_fn(n, self.kind.clone(), |i, j| {
            self.entry(n + 1 - i, n + 1 - j).relabeled()
        })
    }

    /// The table with `m := -ℓ` (or `κ := 0` in rank 1) substituted.
    pub fn symplectic(&self) -> Self {
        let n = self.rank as u32;
        let (first, second) = if n == 1 {
            (BaseScalar::zero(1), BaseScalar::zero(1))
        } else {
            (BaseScalar::ell(n), -&BaseScalar::ell(n))
        };
        Self::from_fn(self.rank, self.kind.clone(), |i, j| {
            self.entry(i, j).substituted(&first, &second)
        })
    }

    /// Parses and validates shape and symmetry.
    pub fn from_json(text: &str) -> Result<Self, TableError>
    where
        C: DeserializeOwned,
    {
        let table: Self =
            serde_json::from_str(text).map_err(|e| TableError::Malformed(e.to_string()))?;
        let n = table.rank;
        let shaped = n >= 1
            && table.entries.len() == n
            && table
                .entries
                .iter()
                .all(|row| row.len() == n && row.iter().all(|e| e.basis_coeffs.len() == n));
        if !shaped {
            return Err(TableError::Malformed(format!("expected a {n}×{n} table")));
        }
        if !table.is_symmetric() {
            return Err(TableError::Malformed("table is not symmetric".into()));
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String
    where
        C: Serialize,
    {
        serde_json::to_string_pretty(self).expect("tables always serialize")
    }
}

fn base_const(rank: usize, num: i64, den: i64) -> BaseScalar {
    BaseScalar::rational(rank as u32, rat(num, den))
}

/// Chen-Ruan product: `e_a·e_b` is `s/(n+1)` when `a + b ≡ 0 (mod n+1)`,
/// `ℓ·e_{a+b}/(n+1)` below and `m·e_{a+b-n-1}/(n+1)` above.
pub fn cr_table(rank: usize) -> ProductTable<BaseScalar> {
    assert!(rank >= 1, "rank must be at least 1");
    let n1 = rank + 1;
    let w = rat(1, n1 as i64);
    ProductTable::from_fn(rank, TableKind::ChenRuan, |a, b| {
        let r = rank as u32;
        if (a + b) % n1 == 0 {
            ExcClass::of_s(rank, base_const(rank, 1, n1 as i64))
        } else if a + b < n1 {
            ExcClass::of_basis(rank, a + b, BaseScalar::ell(r).scale_rational(&w))
        } else {
            ExcClass::of_basis(rank, a + b - n1, BaseScalar::em(r).scale_rational(&w))
        }
    })
}

/// Right-hand side of the linear system for the basis part of `E_i ∪ E_j`.
/// Entries falling outside `1..=n` are dropped.
fn cup_rhs(rank: usize, i: usize, j: usize) -> Vec<BaseScalar> {
    let r = rank as u32;
    let k = BaseScalar::kappa(r);
    let m = BaseScalar::em(r);
    let kk = |c: i64| k.scale_rational(&rat(c, 1));
    let mut rhs = vec![BaseScalar::zero(r); rank];
    let mut put = |pos: usize, v: BaseScalar| {
        if (1..=rank).contains(&pos) {
            rhs[pos - 1] = v;
        }
    };
    let (lo, hi) = (i.min(j), i.max(j));
    if lo == hi {
        let j = hi as i64;
        put(hi - 1, &m - &kk(j - 1));
        put(hi, kk(-4));
        put(hi + 1, &kk(j + 1) - &m);
    } else if hi - lo == 1 {
        let j = hi as i64;
        put(hi - 1, &kk(j) - &m);
        put(hi, &m - &kk(j - 1));
    }
    rhs
}

/// Cup product on the resolution: `s` coefficient `-2`, `1` or `0` by
/// adjacency, basis coefficients `c_n^{-1} · rhs`. Rank 1 gives
/// `E·E = -2s + 2κE`.
pub fn cup_table(cd: &CartanData) -> ProductTable<BaseScalar> {
    let rank = cd.rank();
    let r = rank as u32;
    if rank == 1 {
        let entry = ExcClass::new(
            base_const(1, -2, 1),
            vec![BaseScalar::kappa(1).scale_rational(&rat(2, 1))],
        );
        return ProductTable::from_fn(1, TableKind::Cup, |_, _| entry.clone());
    }
    ProductTable::from_fn(rank, TableKind::Cup, |i, j| {
        let s = match i.abs_diff(j) {
            0 => base_const(rank, -2, 1),
            1 => base_const(rank, 1, 1),
            _ => BaseScalar::zero(r),
        };
        let rhs = cup_rhs(rank, i, j);
        let basis = (1..=rank)
            .map(|l| {
                (1..=rank).fold(BaseScalar::zero(r), |acc, m| {
                    &acc + &rhs[m - 1].scale_rational(cd.inverse_entry(l, m))
                })
            })
            .collect();
        ExcClass::new(s, basis)
    })
}

/// Quantum-corrected product: the cup product plus
/// `Σ_l [Σ_m (c_n^{-1})_{lm} R_{ijm}(q)] κ E_l`.
pub fn qc_table(cd: &CartanData) -> ProductTable<QuantumScalar> {
    let rank = cd.rank();
    let r = rank as u32;
    let cup = cup_table(cd);
    let kappa = BaseScalar::kappa(r);
    ProductTable::from_fn(rank, TableKind::Quantum, |i, j| {
        let base = cup.entry(i, j).map(QuantumScalar::from_base);
        let correction = ExcClass::new(
            QuantumScalar::zero(r),
            (1..=rank)
                .map(|l| {
                    let f = (1..=rank).fold(CorrectionFunction::zero(r), |acc, m| {
                        let c = Cyclotomic::from_rational(cd.inverse_entry(l, m).clone());
                        acc.plus(&r_function(cd, i, j, m).scaled(&c))
                    });
                    QuantumScalar::product(&kappa, &f)
                })
                .collect(),
        );
        base.plus(&correction)
    })
}

/// Evaluates a symbolic quantum table at `q`.
pub fn qc_eval(
    table: &ProductTable<QuantumScalar>,
    q: &[Cyclotomic],
) -> Result<ProductTable<BaseScalar>, TableError> {
    let n = table.rank();
    if q.len() != n {
        return Err(EvalError::WrongLength {
            expected: n,
            got: q.len(),
        }
        .into());
    }
    let mut entries = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            let e = table
                .entry(i, j)
                .try_map(|c| c.eval(q))
                .map_err(|e| match e {
                    EvalError::Pole(index) => TableError::Pole { i, j, index },
                    other => TableError::Eval(other),
                })?;
            row.push(e);
        }
        entries.push(row);
    }
    Ok(ProductTable {
        rank: n,
        kind: TableKind::QuantumAt { q: q.to_vec() },
        entries,
    })
}

/// Drops every `δ` term, i.e. the `q → 0` limit.
pub fn strip_corrections(table: &ProductTable<QuantumScalar>) -> ProductTable<BaseScalar> {
    table.map(TableKind::Cup, QuantumScalar::constant_part)
}

/// Outcome of checking `(x·y)·z = x·(y·z)` on generator triples.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    pub checked: Vec<(usize, usize, usize)>,
    pub failures: Vec<(usize, usize, usize)>,
    /// Triples whose evaluation needs products against `s`, which the
    /// exceptional algebra does not model.
    pub excluded: Vec<(usize, usize, usize)>,
}

impl AssociativityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl ProductTable<BaseScalar> {
    /// Bilinear product of two classes; `None` if either has an `s` part.
    pub fn multiply(
        &self,
        x: &ExcClass<BaseScalar>,
        y: &ExcClass<BaseScalar>,
    ) -> Option<ExcClass<BaseScalar>> {
        if !x.s_coeff.is_zero() || !y.s_coeff.is_zero() {
            return None;
        }
        let mut out = ExcClass::zero(self.rank);
        for (a, xa) in x.basis_coeffs.iter().enumerate() {
            for (b, yb) in y.basis_coeffs.iter().enumerate() {
                if xa.is_zero() || yb.is_zero() {
                    continue;
                }
                out = out.plus(&self.entries[a][b].times_base(&(xa * yb)));
            }
        }
        Some(out)
    }

    pub fn associativity_report(&self) -> AssociativityReport {
        let n = self.rank;
        let g = |l| ExcClass::<BaseScalar>::generator(n, l);
        let mut report = AssociativityReport::default();
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    let left = self.multiply(self.entry(a, b), &g(c));
                    let right = self.multiply(&g(a), self.entry(b, c));
                    match (left, right) {
                        (Some(l), Some(r)) => {
                            report.checked.push((a, b, c));
                            if l != r {
                                report.failures.push((a, b, c));
                            }
                        }
                        _ => report.excluded.push((a, b, c)),
                    }
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Monomial;

    fn third(l: i64, m: i64) -> BaseScalar {
        let ell = BaseScalar::ell(2).scale_rational(&rat(l, 3));
        let em = BaseScalar::em(2).scale_rational(&rat(m, 3));
        &ell + &em
    }

    #[test]
    fn chen_ruan_small() {
        let t = cr_table(2);
        assert_eq!(t.entry(1, 1), &ExcClass::of_basis(2, 2, third(1, 0)));
        assert_eq!(t.entry(1, 2), &ExcClass::of_s(2, base_const(2, 1, 3)));
        assert_eq!(t.entry(2, 2), &ExcClass::of_basis(2, 1, third(0, 1)));
        assert_eq!(
            cr_table(1).entry(1, 1),
            &ExcClass::of_s(1, base_const(1, 1, 2))
        );
        let t4 = cr_table(4);
        assert_eq!(t4.entry(2, 3), &ExcClass::of_s(4, base_const(4, 1, 5)));
        let m5 = BaseScalar::em(4).scale_rational(&rat(1, 5));
        assert_eq!(t4.entry(3, 3), &ExcClass::of_basis(4, 1, m5));
    }

    #[test]
    fn cup_small() {
        let t = cup_table(&CartanData::build(2));
        assert_eq!(
            t.entry(1, 1),
            &ExcClass::new(base_const(2, -2, 1), vec![third(2, 3), third(0, 2)])
        );
        assert_eq!(
            t.entry(1, 2),
            &ExcClass::new(base_const(2, 1, 1), vec![third(-1, 0), third(0, -1)])
        );
        assert_eq!(
            t.entry(2, 2),
            &ExcClass::new(base_const(2, -2, 1), vec![third(2, 0), third(3, 2)])
        );
        let t1 = cup_table(&CartanData::build(1));
        let two_k = BaseScalar::kappa(1).scale_rational(&rat(2, 1));
        assert_eq!(
            t1.entry(1, 1),
            &ExcClass::new(base_const(1, -2, 1), vec![two_k])
        );
    }

    #[test]
    fn quantum_rank_one() {
        let t = qc_table(&CartanData::build(1));
        let e = t.entry(1, 1);
        assert_eq!(
            e.s_coeff(),
            &QuantumScalar::from_base(&base_const(1, -2, 1))
        );
        let f = CorrectionFunction::constant(1, Cyclotomic::from_int(2))
            .with_term(DeltaIndex::new(1, 1), Cyclotomic::from_int(4));
        assert_eq!(
            e.basis_coeff(1),
            &QuantumScalar::product(&BaseScalar::kappa(1), &f)
        );
        let at = qc_eval(&t, &[Cyclotomic::from_int(-1)]).unwrap();
        assert_eq!(at.entry(1, 1), &ExcClass::of_s(1, base_const(1, -2, 1)));
    }

    fn qfun(c: i64, d1: i64, d2: i64, d3: i64) -> CorrectionFunction {
        let third = |v: i64| Cyclotomic::from_rational(rat(v, 3));
        CorrectionFunction::constant(2, third(c))
            .with_term(DeltaIndex::new(1, 1), third(d1))
            .with_term(DeltaIndex::new(2, 2), third(d2))
            .with_term(DeltaIndex::new(1, 2), third(d3))
    }

    fn qcoeff(l: CorrectionFunction, m: CorrectionFunction) -> QuantumScalar {
        QuantumScalar::product(&BaseScalar::monomial(2, Monomial { l: 1, m: 0 }), &l).plus(
            &QuantumScalar::product(&BaseScalar::monomial(2, Monomial { l: 0, m: 1 }), &m),
        )
    }

    #[test]
    fn quantum_rank_two_matches_published_table() {
        let t = qc_table(&CartanData::build(2));
        let e11 = t.entry(1, 1);
        assert_eq!(
            e11.basis_coeff(1),
            &qcoeff(qfun(2, 4, 0, 1), qfun(3, 4, 0, 1))
        );
        assert_eq!(
            e11.basis_coeff(2),
            &qcoeff(qfun(0, 0, 1, 1), qfun(2, 0, 1, 1))
        );
        let e12 = t.entry(1, 2);
        assert_eq!(
            e12.s_coeff(),
            &QuantumScalar::from_base(&base_const(2, 1, 1))
        );
        assert_eq!(
            e12.basis_coeff(1),
            &qcoeff(qfun(-1, -2, 0, 1), qfun(0, -2, 0, 1))
        );
        assert_eq!(
            e12.basis_coeff(2),
            &qcoeff(qfun(0, 0, -2, 1), qfun(-1, 0, -2, 1))
        );
        let e22 = t.entry(2, 2);
        assert_eq!(
            e22.basis_coeff(1),
            &qcoeff(qfun(2, 1, 0, 1), qfun(0, 1, 0, 1))
        );
        assert_eq!(
            e22.basis_coeff(2),
            &qcoeff(qfun(3, 0, 4, 1), qfun(2, 0, 4, 1))
        );
    }

    #[test]
    fn pole_reports_entry_and_index() {
        let t = qc_table(&CartanData::build(2));
        let m1 = Cyclotomic::from_int(-1);
        match qc_eval(&t, &[m1.clone(), m1]) {
            Err(TableError::Pole { index, .. }) => assert_eq!(index, DeltaIndex::new(1, 2)),
            other => panic!("expected pole, got {other:?}"),
        }
        let z = Cyclotomic::zeta(3, 1);
        assert!(qc_eval(&t, &[z.clone(), z]).is_ok());
    }

    #[test]
    fn structural_invariants() {
        for n in 1..=6 {
            let cd = CartanData::build(n);
            let cr = cr_table(n);
            let cup = cup_table(&cd);
            let qc = qc_table(&cd);
            assert!(cr.is_symmetric() && cup.is_symmetric() && qc.is_symmetric());
            assert!(cr.is_graded() && cup.is_graded() && qc.is_graded());
            assert_eq!(strip_corrections(&qc), cup);
            let sym_cup = cup
                .symplectic()
                .map(TableKind::Quantum, QuantumScalar::from_base);
            assert_eq!(qc.symplectic(), sym_cup);
            if n <= 4 {
                assert_eq!(cr.relabeled(), cr);
                assert_eq!(cup.relabeled(), cup);
                assert_eq!(qc.relabeled(), qc);
            }
        }
    }

    #[test]
    fn chen_ruan_associative_where_modeled() {
        for n in 1..=6 {
            let report = cr_table(n).associativity_report();
            assert!(report.holds(), "n = {n}: {:?}", report.failures);
            assert_eq!(report.checked.len() + report.excluded.len(), n * n * n);
        }
    }

    #[test]
    fn json_round_trip_validates() {
        let t = qc_table(&CartanData::build(2));
        let text = t.to_json();
        assert_eq!(ProductTable::<QuantumScalar>::from_json(&text).unwrap(), t);
        let cr = cr_table(3);
        let mut v: serde_json::Value = serde_json::from_str(&cr.to_json()).unwrap();
        v["entries"][0].as_array_mut().unwrap().pop();
        assert!(ProductTable::<BaseScalar>::from_json(&v.to_string()).is_err());
    }
}
