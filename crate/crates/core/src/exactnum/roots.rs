//! Square roots that are exactly representable in cyclotomic fields.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, ToPrimitive, Zero};

use super::{Cyclotomic, ExactError, Rational};

/// `(ζ^k + ζ^{-k} - 2)^{1/2}` for `ζ = exp(2πi m/(n+1))`, on the branch
/// `i·|(2 - ζ^k - ζ^{-k})^{1/2}|` when `0 < m < (n+1)/2` and `-i·|…|` otherwise.
///
/// `m` is first reduced modulo `n + 1`. The modulus is obtained symbolically:
/// `2 - ζ^k - ζ^{-k} = 4 sin²(πkm/(n+1))` and
/// `2 sin(πj/(n+1)) = -i(ω^j - ω^{-j})` with `ω = ζ_{2(n+1)}`, with the sign
/// of the sine read off from `j mod 2(n+1)`. The result lives in `Q(ζ_{4(n+1)})`.
pub fn branch_sqrt(n: u64, m: i64, k: i64) -> Result<Cyclotomic, ExactError> {
    let order = n + 1;
    if n == 0 {
        return Err(ExactError::InvalidRoot { order, m });
    }
    let m_red = m.rem_euclid(order as i64);
    if (m_red as u64).gcd(&order) != 1 {
        return Err(ExactError::InvalidRoot { order, m });
    }
    if k < 1 || k as u64 > n {
        return Err(ExactError::IndexOutOfRange { k, n });
    }
    let conductor = 4 * order;
    let two_order = 2 * order as i64;
    let j = (k * m_red).rem_euclid(two_order);
    // j is never 0 or n+1 here: n+1 would have to divide k.
    let sine_positive = j < order as i64;
    // ω = ζ_{2(n+1)} = ζ_{4(n+1)}^2, i = ζ_{4(n+1)}^{n+1}
    let omega_j = Cyclotomic::zeta(conductor, 2 * j);
    let omega_mj = Cyclotomic::zeta(conductor, -2 * j);
    let minus_i = Cyclotomic::zeta(conductor, 3 * order as i64);
    let two_sine = &minus_i * &(&omega_j - &omega_mj);
    let modulus = if sine_positive { two_sine } else { -two_sine };
    let upper_branch = 0 < m_red && 2 * m_red < order as i64;
    let i = Cyclotomic::zeta(conductor, order as i64);
    Ok(if upper_branch {
        &i * &modulus
    } else {
        -(&i * &modulus)
    })
}

/// A square root of `r` inside some cyclotomic field, built from quadratic
/// Gauss sums. Returns `None` when the squarefree part cannot be factored by
/// trial division below `10^6`. The sign of the returned root is not
/// normalised.
pub fn sqrt_rational(r: &Rational) -> Option<Cyclotomic> {
    if r.is_zero() {
        return Some(Cyclotomic::zero());
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    // sqrt(p/q) = sqrt(p q) / q
    let (square, free) = square_decomposition(&(num * &den))?;
    let mut root = Cyclotomic::from_rational(Rational::new(square, den));
    if negative {
        root = &root * &Cyclotomic::i();
    }
    for p in free {
        root = &root * &sqrt_prime(p);
    }
    Some(root)
}

/// Splits `v = s² · Π primes` with distinct primes.
fn square_decomposition(v: &BigInt) -> Option<(BigInt, Vec<u64>)> {
    let mut rest = v.clone();
    let mut square = BigInt::one();
    let mut free = Vec::new();
    let mut p: u64 = 2;
    while BigInt::from(p) * BigInt::from(p) <= rest {
        if p > 1_000_000 {
            return None;
        }
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &bp;
        }
        if e % 2 == 1 {
            free.push(p);
        }
        p += 1;
    }
    if rest > BigInt::one() {
        free.push(rest.to_u64()?);
    }
    Some((square, free))
}

/// `sqrt(p)` for a prime `p`, as a positive real cyclotomic number.
fn sqrt_prime(p: u64) -> Cyclotomic {
    if p == 2 {
        return &Cyclotomic::zeta(8, 1) + &Cyclotomic::zeta(8, -1);
    }
    // Gauss sum g = Σ (a/p) ζ_p^a with g² = (-1)^{(p-1)/2} p, g = sqrt(p*).
    let mut g = Cyclotomic::zero();
    for a in 1..p {
        let term = Cyclotomic::zeta(p, a as i64);
        g = if legendre(a, p) == 1 {
            &g + &term
        } else {
            &g - &term
        };
    }
    if p % 4 == 1 {
        g
    } else {
        // g = i·sqrt(p)
        &g * &Cyclotomic::zeta(4, 3)
    }
}

fn legendre(a: u64, p: u64) -> i32 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn sqrt3() -> Cyclotomic {
        &Cyclotomic::zeta(12, 1) + &Cyclotomic::zeta(12, -1)
    }

    #[test]
    fn branch_values() {
        let i = Cyclotomic::i();
        assert_eq!(
            branch_sqrt(1, 1, 1).unwrap(),
            -(&i * &Cyclotomic::from_int(2))
        );
        assert_eq!(branch_sqrt(2, 1, 1).unwrap(), &i * &sqrt3());
        assert_eq!(branch_sqrt(2, 2, 1).unwrap(), -(&i * &sqrt3()));
    }

    #[test]
    fn branch_rejects_non_primitive() {
        assert_eq!(
            branch_sqrt(3, 2, 1),
            Err(ExactError::InvalidRoot { order: 4, m: 2 })
        );
        assert!(matches!(
            branch_sqrt(3, 1, 4),
            Err(ExactError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn rational_square_roots() {
        for (p, q) in [
            (3, 1),
            (-3, 1),
            (-4, 1),
            (9, 1),
            (2, 3),
            (-5, 7),
            (11, 1),
            (30, 1),
        ] {
            let r = rat(p, q);
            let s = sqrt_rational(&r).unwrap();
            assert_eq!(&s * &s, Cyclotomic::from_rational(r), "sqrt({p}/{q})");
        }
        assert_eq!(
            sqrt_rational(&rat(-4, 1)).unwrap(),
            &Cyclotomic::i() * &Cyclotomic::from_int(2)
        );
        assert_eq!(sqrt_rational(&rat(3, 1)).unwrap(), sqrt3());
    }
}
