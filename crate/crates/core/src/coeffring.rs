//! The coefficient ring standing in for `H*(S)`: polynomials in the formal
//! first Chern classes `ℓ = c₁(L)` and `m = c₁(M)` with cyclotomic
//! coefficients. The class `κ = c₁(K)` is eliminated through
//! `ℓ + m = (n+1)κ`.
//!
//! For rank 1 there is a single generator `κ`; its exponent is stored in the
//! first slot of [`Monomial`] and the second slot is always zero.
//!
//! The ring is free: no truncation by `dim S` is imposed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::corrections::{CorrectionFunction, EvalError};
use crate::exactnum::{Cyclotomic, Rational};

/// Exponents `(a, b)` of `ℓ^a m^b` (or `κ^a` in rank 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub l: u32,
    pub m: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { l: 0, m: 0 };

    /// Cohomological degree; each generator has degree 2.
    pub fn degree(self) -> u32 {
        2 * (self.l + self.m)
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial {
            l: self.l + other.l,
            m: self.m + other.m,
        }
    }

    fn text(self, rank: u32) -> String {
        let power = |name: &str, e: u32| match e {
            0 => None,
            1 => Some(name.to_string()),
            _ => Some(format!("{name}^{e}")),
        };
        let parts: Vec<String> = if rank == 1 {
            power("K", self.l).into_iter().collect()
        } else {
            power("L", self.l)
                .into_iter()
                .chain(power("M", self.m))
                .collect()
        };
        parts.join("·")
    }
}

impl Ord for Monomial {
    /// Lower degree first; within a degree, higher power of `ℓ` first.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.l + self.m)
            .cmp(&(other.l + other.m))
            .then(other.l.cmp(&self.l))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Text for a cyclotomic coefficient: rationals bare, anything else in
/// parentheses.
pub(crate) fn coefficient_text(c: &Cyclotomic) -> String {
    match c.as_rational() {
        Some(r) => crate::exactnum::rational::display_rational(&r),
        None => format!("({c})"),
    }
}

/// Joins signed terms, turning `+ -x` into `- x`.
pub(crate) fn join_signed(parts: &[String], pad: &str) -> String {
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(&format!("{pad}-{pad}{rest}"));
        } else {
            out.push_str(&format!("{pad}+{pad}{p}"));
        }
    }
    out
}

fn term_text(coeff: String, mono: Monomial, rank: u32) -> String {
    if mono == Monomial::ONE {
        return coeff;
    }
    let m = mono.text(rank);
    match coeff.as_str() {
        "1" => m,
        "-1" => format!("-{m}"),
        _ => format!("{coeff}·{m}"),
    }
}

/// Element of the generic coefficient ring for rank `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseScalar {
    rank: u32,
    terms: BTreeMap<Monomial, Cyclotomic>,
}

impl BaseScalar {
    pub fn zero(rank: u32) -> Self {
        assert!(rank >= 1, "rank must be at least 1");
        BaseScalar {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: u32, c: Cyclotomic) -> Self {
        Self::zero(rank).with_term(Monomial::ONE, c)
    }

    pub fn rational(rank: u32, r: Rational) -> Self {
        Self::constant(rank, Cyclotomic::from_rational(r))
    }

    pub fn monomial(rank: u32, mono: Monomial) -> Self {
        assert!(rank >= 2 || mono.m == 0, "rank 1 has a single generator");
        Self::zero(rank).with_term(mono, Cyclotomic::one())
    }

    /// `ℓ = c₁(L)`; rank must be at least 2.
    pub fn ell(rank: u32) -> Self {
        assert!(rank >= 2, "L is not a generator in rank 1");
        Self::monomial(rank, Monomial { l: 1, m: 0 })
    }

    /// `m = c₁(M)`; rank must be at least 2.
    pub fn em(rank: u32) -> Self {
        assert!(rank >= 2, "M is not a generator in rank 1");
        Self::monomial(rank, Monomial { l: 0, m: 1 })
    }

    /// `κ = c₁(K)`: the generator in rank 1, `(ℓ + m)/(n + 1)` otherwise.
    pub fn kappa(rank: u32) -> Self {
        if rank == 1 {
            Self::monomial(1, Monomial { l: 1, m: 0 })
        } else {
            let third = Rational::new(1.into(), (rank as i64 + 1).into());
            (&Self::ell(rank) + &Self::em(rank)).scale_rational(&third)
        }
    }

    pub fn with_term(mut self, mono: Monomial, c: Cyclotomic) -> Self {
        self.add_term(mono, &c);
        self
    }

    fn add_term(&mut self, mono: Monomial, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono).or_insert_with(Cyclotomic::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Cyclotomic> {
        &self.terms
    }

    pub fn coefficient(&self, mono: Monomial) -> Cyclotomic {
        self.terms
            .get(&mono)
            .cloned()
            .unwrap_or_else(Cyclotomic::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the element is a pure constant (or zero).
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        match self.terms.len() {
            0 => Some(Cyclotomic::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::zero(self.rank);
        for (k, v) in &self.terms {
            out.add_term(*k, &(v * c));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&Cyclotomic::from_rational(r.clone()))
    }

    /// Set of cohomological degrees of the nonzero terms.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.degree()).collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(self.rank, Cyclotomic::one()), |acc, _| {
            &acc * self
        })
    }

    /// Polynomial substitution of the two generators (`ℓ ↦ first`,
    /// `m ↦ second`); in rank 1 only `κ ↦ first` applies.
    pub fn substitute(&self, first: &BaseScalar, second: &BaseScalar) -> Self {
        let mut out = Self::zero(self.rank);
        for (mono, c) in &self.terms {
            let img = &first.pow(mono.l) * &second.pow(mono.m);
            out = &out + &img.scale(c);
        }
        out
    }

    /// The involution `ℓ ↔ m` (identity in rank 1, where it fixes `κ`).
    pub fn swap_generators(&self) -> Self {
        if self.rank == 1 {
            return self.clone();
        }
        BaseScalar {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (Monomial { l: k.m, m: k.l }, v.clone()))
                .collect(),
        }
    }

    /// Substitution forcing `κ = 0`: `m ↦ -ℓ`, or `κ ↦ 0` in rank 1.
    pub fn symplectic_degeneration(&self) -> Self {
        if self.rank == 1 {
            let zero = Self::zero(1);
            self.substitute(&zero, &zero)
        } else {
            let l = Self::ell(self.rank);
            self.substitute(&l, &-&l)
        }
    }
}

impl fmt::Display for BaseScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(mono, c)| term_text(coefficient_text(c), *mono, self.rank))
            .collect();
        write!(f, "{}", join_signed(&parts, ""))
    }
}

impl Add<&BaseScalar> for &BaseScalar {
    type Output = BaseScalar;
    fn add(self, rhs: &BaseScalar) -> BaseScalar {
        debug_assert_eq!(self.rank, rhs.rank);
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v);
        }
        out
    }
}

impl Sub<&BaseScalar> for &BaseScalar {
    type Output = BaseScalar;
    fn sub(self, rhs: &BaseScalar) -> BaseScalar {
        self + &-rhs
    }
}

impl Neg for &BaseScalar {
    type Output = BaseScalar;
    fn neg(self) -> BaseScalar {
        self.scale(&Cyclotomic::from_int(-1))
    }
}

impl Mul<&BaseScalar> for &BaseScalar {
    type Output = BaseScalar;
    fn mul(self, rhs: &BaseScalar) -> BaseScalar {
        debug_assert_eq!(self.rank, rhs.rank);
        let mut out = BaseScalar::zero(self.rank);
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.add_term(ka.times(*kb), &(va * vb));
            }
        }
        out
    }
}

/// Coefficient ring with correction functions as coefficients:
/// `Σ f_{ab}(q) ℓ^a m^b`. This is a module over [`BaseScalar`], not a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumScalar {
    rank: u32,
    terms: BTreeMap<Monomial, CorrectionFunction>,
}

impl QuantumScalar {
    pub fn zero(rank: u32) -> Self {
        QuantumScalar {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_base(b: &BaseScalar) -> Self {
        let mut out = Self::zero(b.rank);
        for (mono, c) in &b.terms {
            out.add_term(*mono, &CorrectionFunction::constant(b.rank, c.clone()));
        }
        out
    }

    /// `b · f(q)`.
    pub fn product(b: &BaseScalar, f: &CorrectionFunction) -> Self {
        let mut out = Self::zero(b.rank);
        for (mono, c) in &b.terms {
            out.add_term(*mono, &f.scaled(c));
        }
        out
    }

    fn add_term(&mut self, mono: Monomial, f: &CorrectionFunction) {
        if f.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(mono)
            .or_insert_with(|| CorrectionFunction::zero(self.rank));
        *slot = slot.plus(f);
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, CorrectionFunction> {
        &self.terms
    }

    pub fn coefficient(&self, mono: Monomial) -> CorrectionFunction {
        self.terms
            .get(&mono)
            .cloned()
            .unwrap_or_else(|| CorrectionFunction::zero(self.rank))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates every correction function at `q`.
    pub fn eval(&self, q: &[Cyclotomic]) -> Result<BaseScalar, EvalError> {
        let mut out = BaseScalar::zero(self.rank);
        for (mono, f) in &self.terms {
            out.add_term(*mono, &f.eval(q)?);
        }
        Ok(out)
    }

    /// Drops every `δ` term, keeping the constants.
    pub fn constant_part(&self) -> BaseScalar {
        let mut out = BaseScalar::zero(self.rank);
        for (mono, f) in &self.terms {
            out.add_term(*mono, f.constant_term());
        }
        out
    }

    pub fn has_corrections(&self) -> bool {
        self.terms.values().any(|f| !f.is_constant())
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mono, f) in &other.terms {
            out.add_term(*mono, f);
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::zero(self.rank);
        for (mono, f) in &self.terms {
            out.add_term(*mono, &f.scaled(c));
        }
        out
    }

    pub fn times_base(&self, b: &BaseScalar) -> Self {
        let mut out = Self::zero(self.rank);
        for (mono, f) in &self.terms {
            let shifted = &BaseScalar::monomial(self.rank, *mono) * b;
            out = out.plus(&QuantumScalar::product(&shifted, f));
        }
        out
    }

    pub fn substitute(&self, first: &BaseScalar, second: &BaseScalar) -> Self {
        let mut out = Self::zero(self.rank);
        for (mono, f) in &self.terms {
            let img = BaseScalar::monomial(self.rank, *mono).substitute(first, second);
            out = out.plus(&QuantumScalar::product(&img, f));
        }
        out
    }

    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.degree()).collect()
    }
}

impl fmt::Display for QuantumScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(mono, cf)| {
                let coeff = if cf.is_constant() {
                    coefficient_text(cf.constant_term())
                } else {
                    format!("({cf})")
                };
                term_text(coeff, *mono, self.rank)
            })
            .collect();
        write!(f, "{}", join_signed(&parts, ""))
    }
}

/// Operations shared by the two coefficient types so that product tables and
/// transport checks can be written once.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero(rank: u32) -> Self;
    fn from_base(b: &BaseScalar) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Cyclotomic) -> Self;
    fn times_base(&self, b: &BaseScalar) -> Self;
    /// The involution `ℓ ↔ m` together with `δ_{μν} ↦ δ_{(n+1-ν)(n+1-μ)}`.
    fn relabeled(&self) -> Self;
    fn substituted(&self, first: &BaseScalar, second: &BaseScalar) -> Self;
    fn degrees(&self) -> BTreeSet<u32>;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&Cyclotomic::from_int(-1)))
    }
}

impl Coefficient for BaseScalar {
    fn zero(rank: u32) -> Self {
        BaseScalar::zero(rank)
    }
    fn from_base(b: &BaseScalar) -> Self {
        b.clone()
    }
    fn is_zero(&self) -> bool {
        BaseScalar::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn scaled(&self, c: &Cyclotomic) -> Self {
        self.scale(c)
    }
    fn times_base(&self, b: &BaseScalar) -> Self {
        self * b
    }
    fn relabeled(&self) -> Self {
        self.swap_generators()
    }
    fn substituted(&self, first: &BaseScalar, second: &BaseScalar) -> Self {
        self.substitute(first, second)
    }
    fn degrees(&self) -> BTreeSet<u32> {
        BaseScalar::degrees(self)
    }
}

impl Coefficient for QuantumScalar {
    fn zero(rank: u32) -> Self {
        QuantumScalar::zero(rank)
    }
    fn from_base(b: &BaseScalar) -> Self {
        QuantumScalar::from_base(b)
    }
    fn is_zero(&self) -> bool {
        QuantumScalar::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        QuantumScalar::plus(self, other)
    }
    fn scaled(&self, c: &Cyclotomic) -> Self {
        self.scale(c)
    }
    fn times_base(&self, b: &BaseScalar) -> Self {
        QuantumScalar::times_base(self, b)
    }
    fn relabeled(&self) -> Self {
        let mut out = QuantumScalar::zero(self.rank);
        for (mono, f) in &self.terms {
            let m = if self.rank == 1 {
                *mono
            } else {
                Monomial {
                    l: mono.m,
                    m: mono.l,
                }
            };
            out.add_term(m, &f.relabeled());
        }
        out
    }
    fn substituted(&self, first: &BaseScalar, second: &BaseScalar) -> Self {
        self.substitute(first, second)
    }
    fn degrees(&self) -> BTreeSet<u32> {
        QuantumScalar::degrees(self)
    }
}

mod serde_impl {
    use serde::de::{DeserializeOwned, Error};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{BaseScalar, Monomial, QuantumScalar};
    use crate::corrections::CorrectionFunction;
    use crate::exactnum::Cyclotomic;

    #[derive(Serialize, Deserialize)]
    #[serde(bound(deserialize = "C: DeserializeOwned"))]
    struct Term<C> {
        exp_l: u32,
        exp_m: u32,
        coeff: C,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(bound(deserialize = "C: DeserializeOwned"))]
    struct Repr<C> {
        rank: u32,
        terms: Vec<Term<C>>,
    }

    fn check<E: Error>(rank: u32, t_m: u32) -> Result<(), E> {
        if rank == 0 {
            return Err(E::custom("rank must be positive"));
        }
        if rank == 1 && t_m != 0 {
            return Err(E::custom("rank 1 scalars have a single generator"));
        }
        Ok(())
    }

    impl Serialize for BaseScalar {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            Repr {
                rank: self.rank,
                terms: self
                    .terms
                    .iter()
                    .map(|(k, c)| Term {
                        exp_l: k.l,
                        exp_m: k.m,
                        coeff: c.clone(),
                    })
                    .collect(),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for BaseScalar {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let repr = Repr::<Cyclotomic>::deserialize(d)?;
            let mut out = BaseScalar::zero(repr.rank.max(1));
            for t in repr.terms {
                check::<D::Error>(repr.rank, t.exp_m)?;
                out.add_term(
                    Monomial {
                        l: t.exp_l,
                        m: t.exp_m,
                    },
                    &t.coeff,
                );
            }
            Ok(out)
        }
    }

    impl Serialize for QuantumScalar {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            Repr {
                rank: self.rank,
                terms: self
                    .terms
                    .iter()
                    .map(|(k, c)| Term {
                        exp_l: k.l,
                        exp_m: k.m,
                        coeff: c.clone(),
                    })
                    .collect(),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for QuantumScalar {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let repr = Repr::<CorrectionFunction>::deserialize(d)?;
            let mut out = QuantumScalar::zero(repr.rank.max(1));
            for t in repr.terms {
                check::<D::Error>(repr.rank, t.exp_m)?;
                if t.coeff.rank() != repr.rank {
                    return Err(D::Error::custom("correction rank mismatch"));
                }
                out.add_term(
                    Monomial {
                        l: t.exp_l,
                        m: t.exp_m,
                    },
                    &t.coeff,
                );
            }
            Ok(out)
        }
    }
}
