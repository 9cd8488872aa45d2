//! Elements of `Q(ζ_N)` in the power basis `1, ζ, …, ζ^{φ(N)-1}`, reduced
//! modulo the cyclotomic polynomial `Φ_N`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::complex::Complex64;
use num::integer::Integer;
use num::{One, ToPrimitive, Zero};

use super::linalg::{solve_linear, LinearSolution};
use super::poly::QPoly;
use super::rational::display_rational;
use super::{ExactError, Rational};

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    // x^n - 1 divided by Φ_d for each proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for shift in (0..quot.len()).rev() {
        let c = rem[shift + dd];
        quot[shift] = c;
        for (i, d) in den.iter().enumerate() {
            rem[shift + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Per-conductor reduction data.
struct Context {
    phi: usize,
    modulus: Vec<i64>,
    /// `powers[j]` is `x^j mod Φ_N` for `0 <= j < N`.
    powers: Vec<Vec<i64>>,
}

impl Context {
    fn build(n: u64) -> Context {
        let modulus = cyclotomic_polynomial(n);
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x, then fold x^phi = -sum modulus[i] x^i
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] = cur[i]
                        .checked_sub(top.checked_mul(modulus[i]).expect("overflow"))
                        .expect("overflow");
                }
            }
        }
        Context {
            phi,
            modulus,
            powers,
        }
    }
}

fn context(n: u64) -> Arc<Context> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Context>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = cache.lock().unwrap().get(&n) {
        return ctx.clone();
    }
    let ctx = Arc::new(Context::build(n));
    cache.lock().unwrap().entry(n).or_insert(ctx).clone()
}

/// An exact element of the cyclotomic field `Q(ζ_N)`.
///
/// Elements of different conductors may be combined freely: both operands
/// are lifted to the least common multiple first. Equality is field
/// equality, so `ζ_4^2 == -1` regardless of where `-1` was built.
#[derive(Clone)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(v.into()))
    }

    /// Builds an element from power-basis coefficients, reducing modulo `Φ_N`.
    /// The slice may be longer than `φ(N)`.
    pub fn from_coefficients(conductor: u64, coeffs: &[Rational]) -> Result<Self, ExactError> {
        if conductor == 0 {
            return Err(ExactError::ZeroConductor);
        }
        let ctx = context(conductor);
        let mut out = vec![Rational::zero(); ctx.phi];
        for (j, c) in coeffs.iter().enumerate() {
            add_scaled_power(&mut out, &ctx, j % conductor as usize, c);
        }
        Ok(Cyclotomic {
            conductor,
            coeffs: out,
        })
    }

    /// `ζ_N^j` for any integer `j`.
    pub fn root_of_unity(conductor: u64, j: i64) -> Result<Self, ExactError> {
        if conductor == 0 {
            return Err(ExactError::ZeroConductor);
        }
        let ctx = context(conductor);
        let idx = j.rem_euclid(conductor as i64) as usize;
        Ok(Cyclotomic {
            conductor,
            coeffs: ctx.powers[idx]
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        })
    }

    /// `ζ_N^j`; panics on a zero conductor.
    pub fn zeta(conductor: u64, j: i64) -> Self {
        Self::root_of_unity(conductor, j).expect("positive conductor")
    }

    /// The imaginary unit `ζ_4`.
    pub fn i() -> Self {
        Self::zeta(4, 1)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(ζ_M)`; `M` must be a multiple of the
    /// current conductor.
    pub fn lift(&self, target: u64) -> Self {
        assert!(
            target.is_multiple_of(self.conductor),
            "cannot lift conductor {} to {}",
            self.conductor,
            target
        );
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let ctx = context(target);
        let mut out = vec![Rational::zero(); ctx.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            add_scaled_power(&mut out, &ctx, (j * step) % target as usize, c);
        }
        Cyclotomic {
            conductor: target,
            coeffs: out,
        }
    }

    /// Expresses the element in `Q(ζ_d)` for a divisor `d` of the conductor,
    /// or `None` when it does not lie in that subfield.
    pub fn try_restrict(&self, target: u64) -> Option<Self> {
        if target == 0 || !self.conductor.is_multiple_of(target) {
            return None;
        }
        if target == self.conductor {
            return Some(self.clone());
        }
        let phi_t = euler_phi(target) as usize;
        // Columns are images of the basis of Q(ζ_target).
        let images: Vec<Cyclotomic> = (0..phi_t)
            .map(|j| Cyclotomic::zeta(target, j as i64).lift(self.conductor))
            .collect();
        let rows = self.coeffs.len();
        let matrix: Vec<Vec<Rational>> = (0..rows)
            .map(|r| images.iter().map(|im| im.coeffs[r].clone()).collect())
            .collect();
        match solve_linear(&matrix, &self.coeffs) {
            LinearSolution::Unique(x) => Some(Cyclotomic {
                conductor: target,
                coeffs: x,
            }),
            _ => None,
        }
    }

    /// The same element expressed over the smallest conductor dividing the
    /// current one that contains it.
    pub fn minimized(&self) -> Self {
        let n = self.conductor;
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find_map(|d| self.try_restrict(d))
            .unwrap_or_else(|| self.clone())
    }

    fn pair(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            (self.clone(), other.clone())
        } else {
            let m = lcm(self.conductor, other.conductor);
            (self.lift(m), other.lift(m))
        }
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        let ctx = context(self.conductor);
        let mut out = vec![Rational::zero(); ctx.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            add_scaled_power(&mut out, &ctx, (n - j) % n, c);
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: out,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclotomic {
                conductor: self.conductor,
                coeffs: Cyclotomic::from_rational(r.recip())
                    .lift(self.conductor)
                    .coeffs,
            });
        }
        let ctx = context(self.conductor);
        let modulus = QPoly(
            ctx.modulus
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        );
        let inv = QPoly(self.coeffs.clone())
            .inverse_mod(&modulus)
            .ok_or(ExactError::DivisionByZero)?;
        let mut coeffs = inv.0;
        coeffs.resize(ctx.phi, Rational::zero());
        Ok(Cyclotomic {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclotomic::one().lift(self.conductor);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// If the element is a root of unity `exp(2πi j/k)`, returns `(j, k)` in
    /// lowest terms with `0 <= j < k`.
    pub fn as_root_of_unity(&self) -> Option<(u64, u64)> {
        // Roots of unity in Q(ζ_N) have order dividing lcm(2, N).
        let order = lcm(2, self.conductor);
        (0..order).find_map(|j| {
            (Cyclotomic::zeta(order, j as i64) == *self).then(|| {
                let g = j.gcd(&order);
                (j / g, order / g)
            })
        })
    }

    /// Floating-point value, for display and numerical cross-checks only.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (j, c)| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n;
                acc + Complex64::from_polar(1.0, theta) * c.to_f64().unwrap_or(f64::NAN)
            })
    }

    /// Approximate decimal rendering, e.g. `"-1.5000000000-0.8660254038i"`.
    /// Not authoritative.
    pub fn to_decimal_string(&self) -> String {
        let z = self.to_complex();
        format!("{:.10}{:+.10}i", z.re, z.im)
    }
}

fn add_scaled_power(out: &mut [Rational], ctx: &Context, power: usize, c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (slot, &p) in out.iter_mut().zip(&ctx.powers[power]) {
        if p != 0 {
            *slot += c * Rational::from_integer(p.into());
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.pair(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({}; {})", self.conductor, self)
    }
}

impl fmt::Display for Cyclotomic {
    /// Power-basis form over the minimal conductor, e.g. `1/2 + 3·ζ12^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let me = self.minimized();
        let mut parts = Vec::new();
        for (j, c) in me.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = display_rational(c);
            parts.push(match j {
                0 => coeff,
                _ => {
                    let z = if j == 1 {
                        format!("ζ{}", me.conductor)
                    } else {
                        format!("ζ{}^{}", me.conductor, j)
                    };
                    match coeff.as_str() {
                        "1" => z,
                        "-1" => format!("-{z}"),
                        _ => format!("{coeff}·{z}"),
                    }
                }
            });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        write!(f, "{out}")
    }
}

impl Add<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.pair(rhs);
        Cyclotomic {
            conductor: a.conductor,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.pair(rhs);
        Cyclotomic {
            conductor: a.conductor,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Mul<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if let Some(r) = self.as_rational() {
            return rhs.scale(&r).lift(lcm(self.conductor, rhs.conductor));
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(&r).lift(lcm(self.conductor, rhs.conductor));
        }
        let (a, b) = self.pair(rhs);
        let ctx = context(a.conductor);
        let n = a.conductor as usize;
        let mut prod = vec![Rational::zero(); 2 * ctx.phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out = vec![Rational::zero(); ctx.phi];
        for (k, c) in prod.iter().enumerate() {
            if k < ctx.phi {
                out[k] += c;
            } else {
                add_scaled_power(&mut out, &ctx, k % n, c);
            }
        }
        Cyclotomic {
            conductor: a.conductor,
            coeffs: out,
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn z(n: u64, j: i64) -> Cyclotomic {
        Cyclotomic::zeta(n, j)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_constructor() {
        let i = z(4, 1);
        assert_eq!(i.coefficients(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(z(2, 1), Cyclotomic::from_int(-1));
        assert!(z(3, 3).is_one());
        assert_eq!(z(3, -1), z(3, 2));
    }

    #[test]
    fn field_examples() {
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_int(-1));
        let a = &Cyclotomic::one() - &z(3, 1);
        assert!((&a * &a.inverse().unwrap()).is_one());
        let pole = &Cyclotomic::one() - &(&z(3, 1) * &z(3, 2));
        assert_eq!(pole.inverse(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn mixed_conductors() {
        // i * ζ_3 lives in Q(ζ_12)
        let w = &z(4, 1) * &z(3, 1);
        assert_eq!(w.conductor(), 12);
        assert_eq!(w, z(12, 7));
        assert_eq!(z(12, 4), z(3, 1));
        assert_eq!(z(6, 1).try_restrict(3), Some(-z(3, 2)));
        assert_eq!(z(12, 1).try_restrict(3), None);
    }

    #[test]
    fn root_of_unity_recognition() {
        assert_eq!(z(12, 8).as_root_of_unity(), Some((2, 3)));
        assert_eq!(Cyclotomic::from_int(-1).as_root_of_unity(), Some((1, 2)));
        assert_eq!(Cyclotomic::from_int(2).as_root_of_unity(), None);
    }

    #[test]
    fn display_is_minimal() {
        assert_eq!(z(12, 4).to_string(), "ζ3");
        assert_eq!(Cyclotomic::from_rational(rat(-1, 2)).to_string(), "-1/2");
        assert_eq!((&z(12, 1) + &z(12, 11)).to_string(), "2·ζ12 - ζ12^3");
    }
}

mod serde_impl {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Cyclotomic;
    use crate::exactnum::{format_rational, parse_rational};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        conductor: u64,
        coefficients: Vec<String>,
    }

    impl Serialize for Cyclotomic {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            Repr {
                conductor: self.conductor,
                coefficients: self.coeffs.iter().map(format_rational).collect(),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Cyclotomic {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            use serde::de::Error;
            let repr = Repr::deserialize(d)?;
            let coeffs = repr
                .coefficients
                .iter()
                .map(|c| parse_rational(c))
                .collect::<Result<Vec<_>, _>>()
                .map_err(D::Error::custom)?;
            Cyclotomic::from_coefficients(repr.conductor, &coeffs).map_err(D::Error::custom)
        }
    }
}
