//! Dense univariate polynomials over `Q`, used only for inversion modulo a
//! cyclotomic polynomial.

use num::{One, Zero};

use super::Rational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct QPoly(pub Vec<Rational>);

impl QPoly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    fn sub(&self, other: &QPoly) -> QPoly {
        let len = self.0.len().max(other.0.len());
        let mut out = vec![Rational::zero(); len];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] -= c;
        }
        QPoly(out).trim()
    }

    fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly(vec![]);
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly(out).trim()
    }

    /// Euclidean division; `divisor` must be nonzero.
    fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.0[dd].clone();
        let mut rem = self.clone().trim();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = &rem.0[rd] / &lead;
            let shift = rd - dd;
            for (i, c) in divisor.0.iter().enumerate().take(dd + 1) {
                rem.0[shift + i] -= &factor * c;
            }
            quot[shift] += factor;
            rem = rem.trim();
        }
        (QPoly(quot).trim(), rem)
    }

    /// Inverse of `self` modulo `modulus`, or `None` when they share a factor.
    pub(crate) fn inverse_mod(&self, modulus: &QPoly) -> Option<QPoly> {
        // Extended Euclid tracking only the coefficient of `self`.
        let (mut r0, mut r1) = (modulus.clone().trim(), self.div_rem(modulus).1);
        let (mut t0, mut t1) = (QPoly(vec![]), QPoly(vec![Rational::one()]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t2;
        }
        // r0 is a gcd; invertible iff it is a nonzero constant.
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.0[0].clone();
        let inv = QPoly(t0.0.into_iter().map(|x| x / &c).collect());
        Some(inv.div_rem(modulus).1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn p(c: &[i64]) -> QPoly {
        QPoly(c.iter().map(|&x| rat(x, 1)).collect())
    }

    #[test]
    fn inverse_modulo_x2_plus_1() {
        // (1 + x)^{-1} = (1 - x)/2 mod x^2 + 1
        let inv = p(&[1, 1]).inverse_mod(&p(&[1, 0, 1])).unwrap();
        assert_eq!(inv, QPoly(vec![rat(1, 2), rat(-1, 2)]));
    }

    #[test]
    fn shared_factor_has_no_inverse() {
        // x - 1 divides x^2 - 1
        assert!(p(&[-1, 1]).inverse_mod(&p(&[-1, 0, 1])).is_none());
    }
}
