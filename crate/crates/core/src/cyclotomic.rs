//! Exact arithmetic in cyclotomic integers `Z[zeta_n]`.
//!
//! A value is kept as a dense coefficient vector over the powers `zeta_n^k`,
//! reduced to a canonical basis. Writing `n` as a product of prime powers
//! `n_i`, the ring `Z[zeta_n]` is the tensor product of the `Z[zeta_{n_i}]`,
//! and the canonical basis consists of the products of `zeta_{n_i}^{a_i}` with
//! `a_i < phi(n_i)`. Reduction uses the sparse relation
//! `zeta^{(p-1)p^{k-1} + r} = -sum_{j<p-1} zeta^{r + j p^{k-1}}` per factor.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

/// Reduction data for one conductor `n`.
#[derive(Debug)]
pub struct CycloField {
    n: u32,
    /// `(prime, prime power, CRT idempotent)` for each prime power factor.
    factors: Vec<(u32, u32, u32)>,
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn factor(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut pk = 1;
            while n.is_multiple_of(d) {
                n /= d;
                pk *= d;
            }
            out.push((d, pk));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl CycloField {
    fn new(n: u32) -> CycloField {
        let factors = factor(n)
            .into_iter()
            .map(|(p, pk)| {
                // e = 1 mod pk, 0 mod n/pk
                let m = n / pk;
                let e = (0..pk).map(|j| j * m).find(|&e| e % pk == 1 % pk).unwrap_or(0);
                (p, pk, e)
            })
            .collect();
        CycloField { n, factors }
    }

    /// Shared instance for conductor `n`.
    pub fn get(n: u32) -> Arc<CycloField> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
        let mut map = CACHE.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
        map.entry(n).or_insert_with(|| Arc::new(CycloField::new(n))).clone()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Degree `phi(n)` of the field.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(p, pk, _)| pk / p * (p - 1)).product()
    }

    /// Reduces a dense length-`n` coefficient vector in place to canonical form.
    pub fn reduce(&self, v: &mut [i64]) {
        let n = self.n as u64;
        for &(p, pk, e) in &self.factors {
            let step = pk / p;
            let phi = step * (p - 1);
            for k in 0..self.n {
                let a = k % pk;
                if a < phi {
                    continue;
                }
                let c = v[k as usize];
                if c == 0 {
                    continue;
                }
                v[k as usize] = 0;
                let r = a - phi;
                for j in 0..p - 1 {
                    let newa = r + j * step;
                    // replace the pk-coordinate of k by newa
                    let delta = (newa as i64 - a as i64).rem_euclid(pk as i64) as u64;
                    let k2 = (k as u64 + delta * e as u64) % n;
                    v[k2 as usize] -= c;
                }
            }
        }
    }
}

/// An element of `Z[zeta_n]` in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u32,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Cyclotomic {
        Cyclotomic { n, coeffs: vec![0; n as usize] }
    }

    pub fn from_int(n: u32, a: i64) -> Cyclotomic {
        let mut z = Cyclotomic::zero(n);
        z.coeffs[0] = a;
        z
    }

    /// `zeta_n^k`.
    pub fn root(n: u32, k: u32) -> Cyclotomic {
        Cyclotomic::from_dense(n, {
            let mut v = vec![0; n as usize];
            v[(k % n) as usize] = 1;
            v
        })
    }

    /// Canonicalizes an unreduced dense coefficient vector.
    pub fn from_dense(n: u32, mut v: Vec<i64>) -> Cyclotomic {
        assert_eq!(v.len(), n as usize);
        CycloField::get(n).reduce(&mut v);
        Cyclotomic { n, coeffs: v }
    }

    /// Canonicalizes a sparse list of `(exponent, coefficient)` terms.
    pub fn from_terms(n: u32, terms: &[(u32, i64)]) -> Cyclotomic {
        let mut v = vec![0; n as usize];
        for &(k, c) in terms {
            v[(k % n) as usize] += c;
        }
        Cyclotomic::from_dense(n, v)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as an integer, if it is rational.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn add(&self, o: &Cyclotomic) -> Cyclotomic {
        let (a, b) = unify(self, o);
        Cyclotomic { n: a.n, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, o: &Cyclotomic) -> Cyclotomic {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Cyclotomic {
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, o: &Cyclotomic) -> Cyclotomic {
        let (a, b) = unify(self, o);
        let n = a.n as usize;
        let mut v = vec![0i64; n];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    v[(i + j) % n] += x * y;
                }
            }
        }
        Cyclotomic::from_dense(a.n, v)
    }

    /// Division by an integer when every coordinate is divisible.
    pub fn div_exact(&self, k: i64) -> Option<Cyclotomic> {
        if self.coeffs.iter().all(|c| c % k == 0) {
            Some(Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| c / k).collect() })
        } else {
            None
        }
    }

    /// Complex conjugate (`zeta -> zeta^{-1}`).
    pub fn conj(&self) -> Cyclotomic {
        let n = self.n as usize;
        let mut v = vec![0i64; n];
        for (i, &x) in self.coeffs.iter().enumerate() {
            v[(n - i) % n] += x;
        }
        Cyclotomic::from_dense(self.n, v)
    }

    /// The same number written over a multiple `m` of the conductor.
    pub fn lift(&self, m: u32) -> Cyclotomic {
        assert_eq!(m % self.n, 0, "lift target must be a multiple of the conductor");
        let f = m / self.n;
        let mut v = vec![0i64; m as usize];
        for (i, &x) in self.coeffs.iter().enumerate() {
            v[i * f as usize] += x;
        }
        Cyclotomic::from_dense(m, v)
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * k as f64 / n))
            .sum()
    }
}

fn unify(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
    if a.n == b.n {
        (a.clone(), b.clone())
    } else {
        let m = lcm(a.n as u64, b.n as u64) as u32;
        (a.lift(m), b.lift(m))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.as_integer() {
            return write!(f, "{k}");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| if k == 0 { c.to_string() } else { format!("{c}*z{}^{k}", self.n) })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Sparse sum of roots of unity `sum c_k zeta_n^k`, used as an accumulator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootSum {
    terms: Vec<(u32, i64)>,
}

impl RootSum {
    pub fn new() -> RootSum {
        RootSum { terms: Vec::new() }
    }

    pub fn from_terms(mut terms: Vec<(u32, i64)>) -> RootSum {
        terms.sort_unstable();
        let mut out: Vec<(u32, i64)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        RootSum { terms: out }
    }

    /// Builds from a dense exponent histogram.
    pub fn from_hist(hist: &[i64]) -> RootSum {
        RootSum {
            terms: hist.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k as u32, c)).collect(),
        }
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_cyclotomic(&self, n: u32) -> Cyclotomic {
        Cyclotomic::from_terms(n, &self.terms)
    }

    pub fn to_complex(&self, n: u32) -> Complex64 {
        self.terms
            .iter()
            .map(|&(k, c)| Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .sum()
    }
}
