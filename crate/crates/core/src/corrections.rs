//! Quantum-correction functions: finite combinations of
//! `δ_{μν}(q) = q_μ⋯q_ν / (1 - q_μ⋯q_ν)` plus a constant.
//!
//! Every genus-zero contribution to the corrected product comes from classes
//! `a·β_{μν}`, and the geometric series over `a` sums to `δ_{μν}`, so this
//! span holds all q-dependence. The `δ_{μν}` are treated as a formal basis:
//! two functions are equal iff their coefficients are.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::CartanData;
use crate::exactnum::Cyclotomic;

/// Index `(μ, ν)` of the class `β_{μν} = β_μ + … + β_ν`, with `1 <= μ <= ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DeltaIndex {
    pub mu: u32,
    pub nu: u32,
}

impl DeltaIndex {
    pub fn new(mu: u32, nu: u32) -> Self {
        assert!(1 <= mu && mu <= nu, "invalid delta index ({mu}, {nu})");
        DeltaIndex { mu, nu }
    }

    /// All indices for rank `n`, in lexicographic order.
    pub fn all(rank: u32) -> impl Iterator<Item = DeltaIndex> {
        (1..=rank).flat_map(move |mu| (mu..=rank).map(move |nu| DeltaIndex { mu, nu }))
    }

    /// Image under the diagram flip `l ↦ n + 1 - l`.
    pub fn flipped(self, rank: u32) -> DeltaIndex {
        DeltaIndex {
            mu: rank + 1 - self.nu,
            nu: rank + 1 - self.mu,
        }
    }
}

impl fmt::Display for DeltaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ{}{}", self.mu, self.nu)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    /// `q_μ⋯q_ν = 1`: the corrected product is undefined at this point.
    #[error("pole: q_{}⋯q_{} = 1", .0.mu, .0.nu)]
    Pole(DeltaIndex),
    #[error("expected {expected} q-parameters, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("q_{0} is zero")]
    ZeroParameter(usize),
}

fn check_point(rank: u32, q: &[Cyclotomic]) -> Result<(), EvalError> {
    if q.len() != rank as usize {
        return Err(EvalError::WrongLength {
            expected: rank as usize,
            got: q.len(),
        });
    }
    if let Some(pos) = q.iter().position(|x| x.is_zero()) {
        return Err(EvalError::ZeroParameter(pos + 1));
    }
    Ok(())
}

/// `δ_{μν}(q)` evaluated exactly. `q` is indexed from `q_1`.
pub fn delta_eval(idx: DeltaIndex, q: &[Cyclotomic]) -> Result<Cyclotomic, EvalError> {
    let product = q[idx.mu as usize - 1..idx.nu as usize]
        .iter()
        .fold(Cyclotomic::one(), |acc, x| &acc * x);
    let denom = &Cyclotomic::one() - &product;
    denom
        .inverse()
        .map(|inv| &product * &inv)
        .map_err(|_| EvalError::Pole(idx))
}

/// `constant + Σ coeff · δ_{μν}` for a fixed rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionFunction {
    rank: u32,
    constant: Cyclotomic,
    terms: BTreeMap<DeltaIndex, Cyclotomic>,
}

impl CorrectionFunction {
    pub fn zero(rank: u32) -> Self {
        Self::constant(rank, Cyclotomic::zero())
    }

    pub fn constant(rank: u32, c: Cyclotomic) -> Self {
        CorrectionFunction {
            rank,
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    /// The single basis function `δ_{μν}`.
    pub fn delta(rank: u32, idx: DeltaIndex) -> Self {
        assert!(idx.nu <= rank, "delta index beyond rank");
        Self::zero(rank).with_term(idx, Cyclotomic::one())
    }

    /// Builder: adds `coeff · δ_idx`.
    pub fn with_term(mut self, idx: DeltaIndex, coeff: Cyclotomic) -> Self {
        self.add_term(idx, &coeff);
        self
    }

    fn add_term(&mut self, idx: DeltaIndex, coeff: &Cyclotomic) {
        let slot = self.terms.entry(idx).or_insert_with(Cyclotomic::zero);
        *slot = &*slot + coeff;
        if slot.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn constant_term(&self) -> &Cyclotomic {
        &self.constant
    }

    pub fn terms(&self) -> &BTreeMap<DeltaIndex, Cyclotomic> {
        &self.terms
    }

    pub fn coefficient(&self, idx: DeltaIndex) -> Cyclotomic {
        self.terms
            .get(&idx)
            .cloned()
            .unwrap_or_else(Cyclotomic::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        out.constant = &out.constant + &other.constant;
        for (idx, c) in &other.terms {
            out.add_term(*idx, c);
        }
        out
    }

    pub fn negated(&self) -> Self {
        self.scaled(&Cyclotomic::from_int(-1))
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn scaled(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        CorrectionFunction {
            rank: self.rank,
            constant: &self.constant * c,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Exact value at `q = (q_1, …, q_n)`; only indices with nonzero
    /// coefficient are checked for poles.
    pub fn eval(&self, q: &[Cyclotomic]) -> Result<Cyclotomic, EvalError> {
        check_point(self.rank, q)?;
        self.terms
            .iter()
            .try_fold(self.constant.clone(), |acc, (idx, c)| {
                Ok(&acc + &(c * &delta_eval(*idx, q)?))
            })
    }

    /// Substitutes values for the `δ_{μν}` themselves, treating them as
    /// independent unknowns.
    pub fn eval_formal(&self, values: &BTreeMap<DeltaIndex, Cyclotomic>) -> Cyclotomic {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (idx, c)| {
                &acc + &(c * values.get(idx).expect("missing delta value"))
            })
    }

    /// Applies `δ_{μν} ↦ δ_{(n+1-ν)(n+1-μ)}`.
    pub fn relabeled(&self) -> Self {
        CorrectionFunction {
            rank: self.rank,
            constant: self.constant.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.flipped(self.rank), v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for CorrectionFunction {
    /// Compact form such as `2+4·δ11`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.constant.is_zero() || self.terms.is_empty() {
            parts.push(crate::coeffring::coefficient_text(&self.constant));
        }
        for (idx, c) in &self.terms {
            let coeff = crate::coeffring::coefficient_text(c);
            parts.push(match coeff.as_str() {
                "1" => idx.to_string(),
                "-1" => format!("-{idx}"),
                _ => format!("{coeff}·{idx}"),
            });
        }
        write!(f, "{}", crate::coeffring::join_signed(&parts, ""))
    }
}

/// `R_{ijm} = Σ_{μ<=ν} (E_i·β_{μν})(E_j·β_{μν})(E_m·β_{μν}) δ_{μν}`, with zero
/// constant term.
pub fn r_function(cd: &CartanData, i: usize, j: usize, m: usize) -> CorrectionFunction {
    let rank = cd.rank() as u32;
    DeltaIndex::all(rank).fold(CorrectionFunction::zero(rank), |acc, idx| {
        let (mu, nu) = (idx.mu as usize, idx.nu as usize);
        let weight =
            cd.beta_pairing(i, mu, nu) * cd.beta_pairing(j, mu, nu) * cd.beta_pairing(m, mu, nu);
        if weight == 0 {
            acc
        } else {
            acc.with_term(idx, Cyclotomic::from_int(weight))
        }
    })
}

mod serde_impl {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{CorrectionFunction, DeltaIndex};
    use crate::exactnum::Cyclotomic;

    #[derive(Serialize, Deserialize)]
    struct Term {
        mu: u32,
        nu: u32,
        coeff: Cyclotomic,
    }

    #[derive(Serialize, Deserialize)]
    struct Repr {
        rank: u32,
        constant: Cyclotomic,
        terms: Vec<Term>,
    }

    impl Serialize for CorrectionFunction {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            Repr {
                rank: self.rank,
                constant: self.constant.clone(),
                terms: self
                    .terms
                    .iter()
                    .map(|(k, c)| Term {
                        mu: k.mu,
                        nu: k.nu,
                        coeff: c.clone(),
                    })
                    .collect(),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for CorrectionFunction {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            use serde::de::Error;
            let repr = Repr::deserialize(d)?;
            let mut f = CorrectionFunction::constant(repr.rank, repr.constant);
            for t in repr.terms {
                if t.mu < 1 || t.mu > t.nu || t.nu > repr.rank {
                    return Err(D::Error::custom(format!(
                        "bad delta index ({}, {})",
                        t.mu, t.nu
                    )));
                }
                f.add_term(DeltaIndex { mu: t.mu, nu: t.nu }, &t.coeff);
            }
            Ok(f)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn z3() -> Cyclotomic {
        Cyclotomic::zeta(3, 1)
    }

    #[test]
    fn delta_examples() {
        let minus_one = Cyclotomic::from_int(-1);
        assert_eq!(
            delta_eval(DeltaIndex::new(1, 1), std::slice::from_ref(&minus_one)).unwrap(),
            Cyclotomic::from_rational(rat(-1, 2))
        );
        assert_eq!(
            delta_eval(DeltaIndex::new(1, 2), &[minus_one.clone(), minus_one]),
            Err(EvalError::Pole(DeltaIndex::new(1, 2)))
        );
        let z = z3();
        let z2 = &z * &z;
        let expected = &z2 * &(&Cyclotomic::one() - &z2).inverse().unwrap();
        assert_eq!(
            delta_eval(DeltaIndex::new(1, 2), &[z.clone(), z]).unwrap(),
            expected
        );
    }

    #[test]
    fn correction_examples() {
        let f = CorrectionFunction::constant(1, Cyclotomic::from_int(2))
            .with_term(DeltaIndex::new(1, 1), Cyclotomic::from_int(4));
        assert!(f.eval(&[Cyclotomic::from_int(-1)]).unwrap().is_zero());
        assert!(CorrectionFunction::zero(2)
            .eval(&[z3(), z3()])
            .unwrap()
            .is_zero());

        let g = CorrectionFunction::delta(2, DeltaIndex::new(1, 1))
            .plus(&CorrectionFunction::delta(2, DeltaIndex::new(2, 2)))
            .plus(&CorrectionFunction::delta(2, DeltaIndex::new(1, 2)));
        let z = z3();
        let one = Cyclotomic::one();
        let z2 = &z * &z;
        let expected = &(&Cyclotomic::from_int(2) * &z) * &(&one - &z).inverse().unwrap()
            + &z2 * &(&one - &z2).inverse().unwrap();
        assert_eq!(g.eval(&[z.clone(), z]).unwrap(), expected);
    }

    #[test]
    fn pole_only_reported_for_live_terms() {
        // δ12 has zero coefficient, so (-1, -1) is fine
        let f = CorrectionFunction::delta(2, DeltaIndex::new(1, 1));
        let m1 = Cyclotomic::from_int(-1);
        assert!(f.eval(&[m1.clone(), m1.clone()]).is_ok());
        assert!(matches!(
            f.eval(&[m1]),
            Err(EvalError::WrongLength {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn r_function_examples() {
        let c1 = CartanData::build(1);
        assert_eq!(
            r_function(&c1, 1, 1, 1),
            CorrectionFunction::zero(1).with_term(DeltaIndex::new(1, 1), Cyclotomic::from_int(-8))
        );
        let c2 = CartanData::build(2);
        let expected = CorrectionFunction::zero(2)
            .with_term(DeltaIndex::new(1, 1), Cyclotomic::from_int(-8))
            .with_term(DeltaIndex::new(2, 2), Cyclotomic::from_int(1))
            .with_term(DeltaIndex::new(1, 2), Cyclotomic::from_int(-1));
        assert_eq!(r_function(&c2, 1, 1, 1), expected);
    }

    #[test]
    fn r_function_by_enumeration() {
        // oracle: pairings recomputed directly from the tridiagonal rule
        let pairing = |i: i64, mu: i64, nu: i64| -> i64 {
            (mu..=nu)
                .map(|j| match (i - j).abs() {
                    0 => -2,
                    1 => 1,
                    _ => 0,
                })
                .sum()
        };
        let c2 = CartanData::build(2);
        for m in 1..=2 {
            let f = r_function(&c2, 1, 2, m as usize);
            for idx in DeltaIndex::all(2) {
                let (mu, nu) = (idx.mu as i64, idx.nu as i64);
                let w = pairing(1, mu, nu) * pairing(2, mu, nu) * pairing(m, mu, nu);
                assert_eq!(f.coefficient(idx), Cyclotomic::from_int(w));
            }
        }
    }

    #[test]
    fn r_function_symmetric_with_zero_constant() {
        for n in 1..=5 {
            let cd = CartanData::build(n);
            for i in 1..=n {
                for j in 1..=n {
                    for m in 1..=n {
                        let f = r_function(&cd, i, j, m);
                        assert!(f.constant_term().is_zero());
                        assert_eq!(f, r_function(&cd, j, i, m));
                        assert_eq!(f, r_function(&cd, m, j, i));
                        assert_eq!(f, r_function(&cd, i, m, j));
                    }
                }
            }
        }
    }

    #[test]
    fn display_compact() {
        let f = CorrectionFunction::constant(1, Cyclotomic::from_int(2))
            .with_term(DeltaIndex::new(1, 1), Cyclotomic::from_int(4));
        assert_eq!(f.to_string(), "2+4·δ11");
        let g = CorrectionFunction::zero(2)
            .with_term(DeltaIndex::new(1, 1), Cyclotomic::from_int(-2))
            .with_term(DeltaIndex::new(1, 2), Cyclotomic::from_int(1));
        assert_eq!(g.to_string(), "-2·δ11+δ12");
    }

    #[test]
    fn json_shape() {
        let f = CorrectionFunction::delta(1, DeltaIndex::new(1, 1));
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["terms"][0]["mu"], 1);
        assert_eq!(v["terms"][0]["coeff"]["coefficients"][0], "1/1");
        let back: CorrectionFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }
}
