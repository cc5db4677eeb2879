//! GF(2^s) arithmetic backing the finite-geometry constructions.
//!
//! An element is the integer in `0..2^s` whose bit `i` is the coefficient
//! of `x^i`. The modulus is the monic irreducible polynomial of degree `s`
//! with the smallest integer encoding, found by trial division when the
//! field is built. Fixing the polynomial this way fixes every downstream
//! point ordering, so generated matrices are bit-reproducible.

use crate::error::{Error, Result};

/// Largest supported field exponent; keeps the multiplication table at
/// 2^16 entries.
pub(crate) const MAX_S: u32 = 8;

pub(crate) struct Field {
    s: u32,
    q: usize,
    poly: u64,
    mul_table: Vec<u16>,
    inv_table: Vec<u16>,
}

impl Field {
    pub fn new(s: u32) -> Result<Field> {
        if s == 0 || s > MAX_S {
            return Err(Error::BadGeometryParams(format!(
                "field exponent s must be in 1..={MAX_S}, got {s}"
            )));
        }
        let q = 1usize << s;
        let poly = smallest_irreducible(s);
        let mut mul_table = vec![0u16; q * q];
        for a in 0..q {
            for b in a..q {
                let prod = poly_rem(clmul(a as u64, b as u64), poly) as u16;
                mul_table[a * q + b] = prod;
                mul_table[b * q + a] = prod;
            }
        }
        let mut inv_table = vec![0u16; q];
        for a in 1..q {
            for b in 1..q {
                if mul_table[a * q + b] == 1 {
                    inv_table[a] = b as u16;
                    break;
                }
            }
        }
        Ok(Field {
            s,
            q,
            poly,
            mul_table,
            inv_table,
        })
    }

    #[allow(dead_code)]
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Field size 2^s.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Integer encoding of the modulus polynomial.
    #[allow(dead_code)]
    pub fn poly(&self) -> u64 {
        self.poly
    }

    #[allow(dead_code)]
    pub fn add(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.q && b < self.q);
        a ^ b
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.q && b < self.q);
        self.mul_table[a * self.q + b] as usize
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    /// Panics on 0.
    #[allow(dead_code)]
    pub fn inv(&self, a: usize) -> usize {
        assert!(a != 0, "inverse of zero");
        debug_assert!(a < self.q);
        self.inv_table[a] as usize
    }
}

/// Product of two GF(2)[x] polynomials (carryless multiplication).
fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut i = 0;
    while i < 64 && (b >> i) != 0 {
        if (b >> i) & 1 == 1 {
            acc ^= a << i;
        }
        i += 1;
    }
    acc
}

/// Remainder of `a` modulo `b` in GF(2)[x]; `b` must be nonzero.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Monic irreducible polynomial of degree `s` with the smallest integer
/// encoding. Candidates have constant term 1 (otherwise x divides), and a
/// degree-s polynomial is irreducible iff no polynomial of degree in
/// 1..=s/2 divides it.
fn smallest_irreducible(s: u32) -> u64 {
    let lo = (1u64 << s) | 1;
    let hi = 1u64 << (s + 1);
    let mut cand = lo;
    while cand < hi {
        if is_irreducible(cand, s) {
            return cand;
        }
        cand += 2;
    }
    unreachable!("GF(2) has irreducible polynomials of every degree");
}

fn is_irreducible(p: u64, s: u32) -> bool {
    for d in 1..=s / 2 {
        for div in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(p, div) == 0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Degree of a nonzero polynomial.
    fn deg(p: u64) -> u32 {
        63 - p.leading_zeros()
    }

    fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let r = poly_rem(a, b);
            a = b;
            b = r;
        }
        a
    }

    /// x^(2^e) mod p by repeated squaring of x.
    fn frobenius_power(p: u64, e: u32) -> u64 {
        let mut acc = poly_rem(2, p); // the polynomial x, reduced
        for _ in 0..e {
            acc = poly_rem(clmul(acc, acc), p);
        }
        acc
    }

    /// Rabin irreducibility: p of degree s is irreducible iff
    /// x^(2^s) = x (mod p) and gcd(x^(2^(s/t)) - x, p) = 1 for every
    /// prime t dividing s. Independent of the trial-division route.
    fn rabin_irreducible(p: u64, s: u32) -> bool {
        if frobenius_power(p, s) != poly_rem(2, p) {
            return false;
        }
        for t in 2..=s {
            if s % t == 0 && (2..t).all(|d| t % d != 0) {
                let g = poly_gcd(p, frobenius_power(p, s / t) ^ 2);
                if deg(g) != 0 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn smallest_polys_match_hand_derivation() {
        // s=1: x+1. s=2: x^2+x+1. s=3: x^3+1 = (x+1)(x^2+x+1) is out,
        // so x^3+x+1. s=4: x^4+1 = (x+1)^4 is out, so x^4+x+1.
        assert_eq!(smallest_irreducible(1), 0b11);
        assert_eq!(smallest_irreducible(2), 0b111);
        assert_eq!(smallest_irreducible(3), 0b1011);
        assert_eq!(smallest_irreducible(4), 0b10011);
    }

    #[test]
    fn trial_division_agrees_with_rabin() {
        for s in 1..=MAX_S {
            for cand in ((1u64 << s) | 1..1 << (s + 1)).step_by(2) {
                assert_eq!(
                    is_irreducible(cand, s),
                    rabin_irreducible(cand, s),
                    "disagreement at s={s}, candidate {cand:#b}"
                );
            }
            // The chosen modulus is minimal among the irreducible ones.
            let chosen = smallest_irreducible(s);
            assert!(rabin_irreducible(chosen, s));
            for cand in ((1u64 << s) | 1..chosen).step_by(2) {
                assert!(!rabin_irreducible(cand, s));
            }
        }
    }

    #[test]
    fn rejects_out_of_range_exponent() {
        assert!(Field::new(0).is_err());
        assert!(Field::new(MAX_S + 1).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for s in 1..=4 {
            let f = Field::new(s).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.mul(a, 0), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    // No zero divisors.
                    assert_eq!(f.mul(a, b) == 0, a == 0 || b == 0);
                    for c in 0..q {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_order_divides_q_minus_1() {
        for s in 1..=MAX_S {
            let f = Field::new(s).unwrap();
            for a in 1..f.q() {
                let mut acc = 1;
                for _ in 0..f.q() - 1 {
                    acc = f.mul(acc, a);
                }
                assert_eq!(acc, 1, "a^(q-1) != 1 at s={s}, a={a}");
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = Field::new(4).unwrap();
        for a in 0..f.q() {
            for b in 0..f.q() {
                let lhs = f.mul(f.add(a, b), f.add(a, b));
                let rhs = f.add(f.mul(a, a), f.mul(b, b));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
