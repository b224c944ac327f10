use crate::error::{invalid, Result};

/// Symbol carried by each tuple position: two 1s, then a 2, then a 3.
pub const SYMBOLS: [u8; 4] = [1, 1, 2, 3];

/// A [2,1,1] word in tuple form, stored as point indices.
///
/// Canonical words have four distinct points and `a1 < a2`. Words read from
/// untrusted files may be degenerate; [`Codeword::is_valid`] tells which.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword(pub(crate) [u32; 4]);

impl Codeword {
    /// Canonicalize a raw tuple: order the unordered pair, reject repeats.
    pub fn new(t: [u32; 4]) -> Result<Codeword> {
        let w = Codeword::raw(t);
        if w.is_valid() {
            Ok(w)
        } else {
            Err(invalid(format!("repeated point in word {t:?}")))
        }
    }

    /// Canonical pair order without the distinctness check.
    pub fn raw(mut t: [u32; 4]) -> Codeword {
        if t[0] > t[1] {
            t.swap(0, 1);
        }
        Codeword(t)
    }

    pub fn points(&self) -> [u32; 4] {
        self.0
    }

    pub fn is_valid(&self) -> bool {
        let t = self.0;
        t[0] != t[1] && t[0] != t[2] && t[0] != t[3] && t[1] != t[2] && t[1] != t[3] && t[2] != t[3]
    }

    /// Symbol at point `x` (0 when `x` is outside the support).
    pub fn symbol_at(&self, x: u32) -> u8 {
        self.0.iter().position(|&p| p == x).map_or(0, |i| SYMBOLS[i])
    }

    pub fn to_vector(&self, n: u32) -> Result<Vec<u8>> {
        if !self.is_valid() || self.0.iter().any(|&p| p >= n) {
            return Err(invalid(format!("word {:?} does not fit length {n}", self.0)));
        }
        let mut v = vec![0u8; n as usize];
        for (p, s) in self.0.iter().zip(SYMBOLS) {
            v[*p as usize] = s;
        }
        Ok(v)
    }

    pub fn from_vector(v: &[u8]) -> Result<Codeword> {
        let comp = composition(v, 4);
        if comp != [2, 1, 1] {
            return Err(invalid(format!("composition {comp:?} is not [2, 1, 1]")));
        }
        let find = |s: u8| v.iter().enumerate().filter(move |(_, &x)| x == s).map(|(i, _)| i as u32);
        let ones: Vec<u32> = find(1).collect();
        let two = find(2).next().unwrap();
        let three = find(3).next().unwrap();
        Codeword::new([ones[0], ones[1], two, three])
    }
}

/// Hamming distance of two valid tuple words: `8 - c - e` where `c` counts
/// common support points and `e` those carrying the same symbol.
#[inline]
pub fn distance(u: &Codeword, v: &Codeword) -> u32 {
    let mut c = 0;
    let mut e = 0;
    for (i, a) in u.0.iter().enumerate() {
        for (j, b) in v.0.iter().enumerate() {
            if a == b {
                c += 1;
                if SYMBOLS[i] == SYMBOLS[j] {
                    e += 1;
                }
            }
        }
    }
    8 - c - e
}

/// Plain Hamming distance of two vectors over any alphabet.
pub fn hamming(a: &[u8], b: &[u8]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(crate::error::domain(format!(
            "vectors of lengths {} and {} are not comparable",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// Counts of symbols `1..q` in `v`; symbols `>= q` are ignored.
pub fn composition(v: &[u8], q: u8) -> Vec<usize> {
    let mut c = vec![0usize; q.saturating_sub(1) as usize];
    for &x in v {
        if x >= 1 && x < q {
            c[x as usize - 1] += 1;
        }
    }
    c
}
