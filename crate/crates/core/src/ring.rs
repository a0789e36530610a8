//! Arithmetic in the finite local rings `Z/p^l` and `F_p[t]/t^l`.
//!
//! Elements are stored as small integer codes in `[0, p^l)`. For `Z/p^l` the
//! code is the canonical integer; for `F_p[t]/t^l` it is `sum a_i p^i` where
//! `a_i` is the coefficient of `t^i`. With this encoding the uniformizer power
//! `w^k` has code `p^k` in both flavors, reduction to length `i` is `code mod
//! p^i`, and lifting is the identity on codes.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element code; see the module documentation.
pub type Elem = u16;

/// Largest supported ring cardinality (keeps the operation tables small).
pub const MAX_RING_SIZE: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Integers modulo `p^l`; the uniformizer is `p`.
    Zmod,
    /// Truncated polynomials `F_p[t]/t^l`; the uniformizer is `t`.
    Tpoly,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Zmod => write!(f, "zmod"),
            Flavor::Tpoly => write!(f, "tpoly"),
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zmod" => Ok(Flavor::Zmod),
            "tpoly" => Ok(Flavor::Tpoly),
            other => Err(Error::BadParam(format!("unknown flavor `{other}`"))),
        }
    }
}

struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    val: Vec<u8>,
}

/// A validated ring `o_l` together with precomputed operation tables.
#[derive(Clone)]
pub struct Ring {
    p: u32,
    ell: u32,
    flavor: Flavor,
    size: u32,
    tables: Arc<Tables>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({}, l={}, {})", self.p, self.ell, self.flavor)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ell == other.ell && self.flavor == other.flavor
    }
}
impl Eq for Ring {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    /// Builds `o_l` for an odd prime `p` and length `ell >= 1`.
    pub fn new(p: u32, ell: u32, flavor: Flavor) -> Result<Ring> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::BadParam(format!("p = {p} must be an odd prime")));
        }
        if ell == 0 {
            return Err(Error::BadParam("ell must be at least 1".into()));
        }
        let size = (p as u64).checked_pow(ell).unwrap_or(u64::MAX);
        if size > MAX_RING_SIZE as u64 {
            return Err(Error::BudgetExceeded(format!("ring of size {size} exceeds {MAX_RING_SIZE}")));
        }
        let size = size as u32;
        let n = size as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        let digits: Vec<Vec<u32>> = (0..size).map(|x| to_digits(x, p, ell)).collect();
        for x in 0..n {
            for y in 0..n {
                let (s, m) = match flavor {
                    Flavor::Zmod => ((x + y) % n, (x * y) % n),
                    Flavor::Tpoly => {
                        let dx = &digits[x];
                        let dy = &digits[y];
                        let s: Vec<u32> = (0..ell as usize).map(|i| (dx[i] + dy[i]) % p).collect();
                        let mut m = vec![0u32; ell as usize];
                        for i in 0..ell as usize {
                            for j in 0..(ell as usize - i) {
                                m[i + j] = (m[i + j] + dx[i] * dy[j]) % p;
                            }
                        }
                        (from_digits(&s, p) as usize, from_digits(&m, p) as usize)
                    }
                };
                add[x * n + y] = s as Elem;
                mul[x * n + y] = m as Elem;
            }
        }
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        let mut val = vec![0u8; n];
        for x in 0..n {
            neg[x] = (0..n).find(|&y| add[x * n + y] == 0).unwrap() as Elem;
            val[x] = if x == 0 {
                ell as u8
            } else {
                let mut v = 0;
                let mut c = x as u32;
                while c.is_multiple_of(p) {
                    c /= p;
                    v += 1;
                }
                v
            };
            if val[x] == 0 {
                inv[x] = (0..n).find(|&y| mul[x * n + y] == 1).unwrap() as Elem;
            }
        }
        Ok(Ring { p, ell, flavor, size, tables: Arc::new(Tables { add, mul, neg, inv, val }) })
    }

    /// The ring of the same prime and flavor with length `i`.
    pub fn with_length(&self, i: u32) -> Result<Ring> {
        Ring::new(self.p, i, self.flavor)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    /// Residue field size (equal to `p`; only prime residue fields are modeled).
    pub fn q(&self) -> u32 {
        self.p
    }
    pub fn ell(&self) -> u32 {
        self.ell
    }
    pub fn ell1(&self) -> u32 {
        self.ell / 2
    }
    pub fn ell2(&self) -> u32 {
        self.ell.div_ceil(2)
    }
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn unit_count(&self) -> u32 {
        self.size / self.p * (self.p - 1)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.tables.add[x as usize * self.size as usize + y as usize]
    }
    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.tables.mul[x as usize * self.size as usize + y as usize]
    }
    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.tables.neg[x as usize]
    }
    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }
    #[inline]
    pub fn is_unit(&self, x: Elem) -> bool {
        self.tables.val[x as usize] == 0
    }
    #[inline]
    pub fn val(&self, x: Elem) -> u32 {
        self.tables.val[x as usize] as u32
    }
    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if self.is_unit(x) {
            Ok(self.tables.inv[x as usize])
        } else {
            Err(Error::NonUnit)
        }
    }
    /// Inverse of a unit; returns 0 for non-units.
    #[inline]
    pub fn inv_unit(&self, x: Elem) -> Elem {
        self.tables.inv[x as usize]
    }

    /// `w^k`, zero when `k >= ell`.
    pub fn pi_pow(&self, k: u32) -> Elem {
        if k >= self.ell {
            0
        } else {
            self.p.pow(k) as Elem
        }
    }

    /// The image of the integer `k` under `Z -> o_l`.
    pub fn from_int(&self, k: i64) -> Elem {
        let m = match self.flavor {
            Flavor::Zmod => self.size as i64,
            Flavor::Tpoly => self.p as i64,
        };
        k.rem_euclid(m) as Elem
    }

    /// Reduction `o_l -> o_i`.
    pub fn project(&self, x: Elem, i: u32) -> Result<Elem> {
        if i > self.ell {
            return Err(Error::BadIndex(format!("cannot project to length {i} > {}", self.ell)));
        }
        Ok((x as u32 % self.p.pow(i)) as Elem)
    }

    /// Canonical lift of an element of `o_i` (given by its code) to `o_l`.
    pub fn lift(&self, x: Elem, i: u32) -> Result<Elem> {
        if i > self.ell {
            return Err(Error::BadIndex(format!("cannot lift from length {i} > {}", self.ell)));
        }
        if x as u32 >= self.p.pow(i) {
            return Err(Error::BadParam(format!("code {x} is not an element of o_{i}")));
        }
        Ok(x)
    }

    /// Exponent `e` with `psi(x) = exp(2 pi i e / p^l)` for the fixed primitive
    /// additive character: the integer itself for `Z/p^l`, the top coefficient
    /// scaled by `p^(l-1)` for `F_p[t]/t^l`.
    #[inline]
    pub fn psi_exp(&self, x: Elem) -> u32 {
        match self.flavor {
            Flavor::Zmod => x as u32,
            Flavor::Tpoly => {
                let top = self.p.pow(self.ell - 1);
                (x as u32 / top) * top
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.is_unit(x)).collect()
    }

    /// Integer power of a unit (negative exponents allowed).
    pub fn pow(&self, x: Elem, e: i64) -> Elem {
        let base = if e < 0 { self.inv_unit(x) } else { x };
        let mut r = 1;
        for _ in 0..e.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    /// Coefficient digits `(a_0, .., a_{l-1})` of the code in base `p`.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        to_digits(x as u32, self.p, self.ell)
    }

    pub fn format(&self, x: Elem) -> String {
        match self.flavor {
            Flavor::Zmod => x.to_string(),
            Flavor::Tpoly => {
                let terms: Vec<String> = self
                    .digits(x)
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(i, a)| match i {
                        0 => a.to_string(),
                        1 => format!("{a}t"),
                        _ => format!("{a}t^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
        }
    }
}

fn to_digits(mut x: u32, p: u32, ell: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(ell as usize);
    for _ in 0..ell {
        d.push(x % p);
        x /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &a| acc * p + a)
}
