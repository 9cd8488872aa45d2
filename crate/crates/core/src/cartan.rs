//! The matrix `c_n` (minus the `A_n` Cartan matrix), its exact inverse, and
//! the intersection numbers `E_i · β_{μν}`.
//!
//! Indices in the public API are 1-based, matching the labelling `E_1..E_n`.

use serde::Serialize;

use crate::exactnum::linalg::inverse;
use crate::exactnum::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct CartanData {
    rank: usize,
    c: Vec<Vec<i64>>,
    c_inverse: Vec<Vec<Rational>>,
}

impl CartanData {
    /// Builds `c_n` and inverts it by exact elimination.
    pub fn build(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be at least 1");
        let c: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match i.abs_diff(j) {
                        0 => -2,
                        1 => 1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let as_rational: Vec<Vec<Rational>> = c
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| Rational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        let c_inverse = inverse(&as_rational).expect("c_n is nondegenerate");
        CartanData { rank, c, c_inverse }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn inverse(&self) -> &[Vec<Rational>] {
        &self.c_inverse
    }

    /// `(c_n)_{ij}`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.c[i - 1][j - 1]
    }

    /// `(c_n^{-1})_{lm}`, 1-based.
    pub fn inverse_entry(&self, l: usize, m: usize) -> &Rational {
        &self.c_inverse[l - 1][m - 1]
    }

    /// `E_i · β_{μν} = Σ_{j=μ}^{ν} (c_n)_{ij}`; always one of `0, 1, -1, -2`.
    pub fn beta_pairing(&self, i: usize, mu: usize, nu: usize) -> i64 {
        assert!(
            (1..=self.rank).contains(&i) && 1 <= mu && mu <= nu && nu <= self.rank,
            "pairing indices out of range"
        );
        (mu..=nu).map(|j| self.entry(i, j)).sum()
    }
}

impl Serialize for CartanData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            rank: usize,
            c: &'a [Vec<i64>],
            c_inverse: Vec<Vec<String>>,
        }
        Repr {
            rank: self.rank,
            c: &self.c,
            c_inverse: self
                .c_inverse
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn rank_one_and_two() {
        let c1 = CartanData::build(1);
        assert_eq!(c1.matrix(), &[vec![-2]]);
        assert_eq!(c1.inverse_entry(1, 1), &rat(-1, 2));
        let c2 = CartanData::build(2);
        assert_eq!(
            c2.inverse(),
            &[vec![rat(-2, 3), rat(-1, 3)], vec![rat(-1, 3), rat(-2, 3)]]
        );
    }

    #[test]
    fn pairings() {
        let c2 = CartanData::build(2);
        assert_eq!(c2.beta_pairing(1, 1, 1), -2);
        assert_eq!(c2.beta_pairing(1, 1, 2), -1);
        assert_eq!(CartanData::build(5).beta_pairing(3, 2, 4), 0);
    }

    #[test]
    fn pairing_case_analysis() {
        for n in 1..=6 {
            let cd = CartanData::build(n);
            for i in 1..=n {
                for mu in 1..=n {
                    for nu in mu..=n {
                        let expected = if i == mu && i == nu {
                            -2
                        } else if i == mu || i == nu {
                            -1
                        } else if i + 1 == mu || i == nu + 1 {
                            1
                        } else {
                            0
                        };
                        assert_eq!(
                            cd.beta_pairing(i, mu, nu),
                            expected,
                            "n={n} i={i} μ={mu} ν={nu}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn leading_minors_alternate() {
        // negative definite: sign of k-th leading minor is (-1)^k
        for n in 1..=8 {
            let cd = CartanData::build(n);
            for k in 1..=n {
                let minor: Vec<Vec<Rational>> = cd.c[..k]
                    .iter()
                    .map(|r| r[..k].iter().map(|&x| rat(x, 1)).collect())
                    .collect();
                let det = crate::exactnum::linalg::determinant(&minor);
                // det of -Cartan(A_k) = (-1)^k (k+1)
                assert_eq!(
                    det,
                    rat(if k % 2 == 0 { 1 } else { -1 } * (k as i64 + 1), 1)
                );
            }
        }
    }
}
