//! Arithmetic in GF(p^k) for p <= 13 and k <= 3.
//!
//! Elements are integers `0..q` read as base-p digit vectors, low digit
//! first; the digit vector is the coefficient list of a polynomial reduced
//! modulo a fixed monic irreducible of degree k.

use crate::error::{domain, Result};

/// Low-to-high coefficients `c0, c1, ...` of a monic irreducible
/// `x^k + c_{k-1} x^{k-1} + ... + c0` over GF(p).
const IRREDUCIBLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 0, 1]),
    (3, 2, &[1, 0]),
    (3, 3, &[1, 0, 2]),
    (5, 2, &[1, 1]),
    (5, 3, &[1, 0, 1]),
    (7, 2, &[1, 0]),
    (7, 3, &[1, 0, 1]),
    (11, 2, &[1, 0]),
    (11, 3, &[1, 0, 4]),
    (13, 2, &[1, 3]),
    (13, 3, &[1, 0, 4]),
];

const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

/// Split `q` as `p^k` with `p` in the supported range, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    for p in PRIMES {
        let mut x = q;
        let mut k = 0;
        while x > 1 && x.is_multiple_of(p) {
            x /= p;
            k += 1;
        }
        if x == 1 && k >= 1 {
            return Some((p, k));
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct Field {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl Field {
    pub fn new(q: u32) -> Result<Field> {
        let (p, k) = prime_power(q)
            .filter(|&(_, k)| k <= 3)
            .ok_or_else(|| domain(format!("{q} is not p^k with p <= 13, k <= 3")))?;
        let modulus: Vec<u32> = if k == 1 {
            Vec::new()
        } else {
            IRREDUCIBLE.iter().find(|e| e.0 == p && e.1 == k).expect("table covers p<=13, k<=3").2.to_vec()
        };
        let digits = |x: u32| -> Vec<u32> { (0..k).map(|i| (x / p.pow(i)) % p).collect() };
        let pack = |d: &[u32]| -> u32 { d.iter().enumerate().map(|(i, &c)| c * p.pow(i as u32)).sum() };
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = pack(&sum);
                let mut prod = vec![0u32; (2 * k - 1) as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // x^k = -(c0 + c1 x + ...), applied from the top degree down
                for deg in (k as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (i, m) in modulus.iter().enumerate() {
                        let slot = deg - k as usize + i;
                        prod[slot] = (prod[slot] + (p - c) * m) % p;
                    }
                }
                mul[a as usize * qs + b as usize] = pack(&prod[..k as usize]);
            }
        }
        Ok(Field { p, k, q, add, mul })
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }
}
