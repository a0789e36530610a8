//! Arithmetic modulo a word-size prime `P`: dense linear algebra,
//! characteristic polynomials, square-free factorization and root finding.
//!
//! Character values are sums of roots of unity; choosing `P = 1 mod N` gives
//! an embedding `zeta_N -> omega` of the cyclotomic integers into `F_P`, so
//! exact integer-valued quantities can be computed there.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ring::is_prime;

#[inline]
pub fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

#[inline]
pub fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invm(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    powm(a, p - 2, p)
}

/// Signed representative in `(-P/2, P/2]`.
pub fn signed(a: u64, p: u64) -> i64 {
    if a > p / 2 {
        a as i64 - p as i64
    } else {
        a as i64
    }
}

pub fn from_signed(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime field `F_P` with `P = 1 mod m`, together with a fixed primitive
/// `m`-th root of unity.
#[derive(Clone, Debug)]
pub struct PrimeField {
    pub p: u64,
    pub m: u64,
    pub omega: u64,
    powers: Vec<u64>,
}

impl PrimeField {
    /// The `index`-th prime `P = 1 mod m` above `2^30` (index selects
    /// independent primes for cross-checks).
    pub fn new(m: u64, index: usize) -> PrimeField {
        let mut k = (1u64 << 30) / m + 1;
        let mut found = 0;
        let p = loop {
            let cand = k * m + 1;
            assert!(cand < (1u64 << 31), "no prime below 2^31 for modulus {m}");
            if is_prime(cand) {
                if found == index {
                    break cand;
                }
                found += 1;
            }
            k += 1;
        };
        let divs = prime_divisors(m);
        let omega = (2..p)
            .map(|g| powm(g, (p - 1) / m, p))
            .find(|&w| divs.iter().all(|&r| powm(w, m / r, p) != 1))
            .expect("primitive root exists");
        let mut powers = Vec::with_capacity(m as usize);
        let mut acc = 1;
        for _ in 0..m {
            powers.push(acc);
            acc = mulm(acc, omega, p);
        }
        PrimeField { p, m, omega, powers }
    }

    /// Image of `zeta_m^k`.
    #[inline]
    pub fn root(&self, k: u32) -> u64 {
        self.powers[(k as u64 % self.m) as usize]
    }
}

/// Dense square matrix over `F_P`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatP {
    pub n: usize,
    pub a: Vec<u64>,
}

impl MatP {
    pub fn zeros(n: usize) -> MatP {
        MatP { n, a: vec![0; n * n] }
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &MatP, p: u64) -> MatP {
        let n = self.n;
        let mut r = MatP::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = o.get(k, j);
                    if y != 0 {
                        r.a[i * n + j] = (r.a[i * n + j] + x * y) % p;
                    }
                }
            }
        }
        r
    }

    pub fn apply(&self, v: &[u64], p: u64) -> Vec<u64> {
        (0..self.n).map(|i| (0..self.n).fold(0, |acc, j| (acc + self.get(i, j) * v[j]) % p)).collect()
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients low to high.
    pub fn charpoly(&self, p: u64) -> Vec<u64> {
        let n = self.n;
        let mut h = self.a.clone();
        let idx = |i: usize, j: usize| i * n + j;
        // reduce to upper Hessenberg form by similarity transforms
        for m in 1..n.saturating_sub(1) {
            let piv = (m..n).find(|&i| h[idx(i, m - 1)] != 0);
            let Some(i0) = piv else { continue };
            if i0 != m {
                for j in 0..n {
                    h.swap(idx(i0, j), idx(m, j));
                }
                for i in 0..n {
                    h.swap(idx(i, i0), idx(i, m));
                }
            }
            let inv = invm(h[idx(m, m - 1)], p);
            for i in m + 1..n {
                let u = mulm(h[idx(i, m - 1)], inv, p);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = mulm(u, h[idx(m, j)], p);
                    h[idx(i, j)] = subm(h[idx(i, j)], t, p);
                }
                for r in 0..n {
                    let t = mulm(u, h[idx(r, i)], p);
                    h[idx(r, m)] = addm(h[idx(r, m)], t, p);
                }
            }
        }
        // recurrence on leading principal minors
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for m in 0..n {
            // p_{m+1} = (x - h_mm) p_m - sum_{i=1}^{m} h_{m-i,m} prod_{j=m-i+1}^{m} h_{j,j-1} p_{m-i}
            let mut next = vec![0u64; m + 2];
            for (k, &c) in polys[m].iter().enumerate() {
                next[k + 1] = addm(next[k + 1], c, p);
                next[k] = subm(next[k], mulm(c, h[idx(m, m)], p), p);
            }
            let mut prod = 1u64;
            for i in 1..=m {
                prod = mulm(prod, h[idx(m - i + 1, m - i)], p);
                if prod == 0 {
                    break;
                }
                let coef = mulm(h[idx(m - i, m)], prod, p);
                if coef == 0 {
                    continue;
                }
                for (k, &c) in polys[m - i].iter().enumerate() {
                    next[k] = subm(next[k], mulm(coef, c, p), p);
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

/// Basis of the null space of a (rows x cols) matrix given row-major.
pub fn nullspace(rows: usize, cols: usize, m: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
        for j in 0..cols {
            a.swap(pr * cols + j, r * cols + j);
        }
        let inv = invm(a[r * cols + c], p);
        for j in 0..cols {
            a[r * cols + j] = mulm(a[r * cols + j], inv, p);
        }
        for i in 0..rows {
            if i != r && a[i * cols + c] != 0 {
                let f = a[i * cols + c];
                for j in 0..cols {
                    let t = mulm(f, a[r * cols + j], p);
                    a[i * cols + j] = subm(a[i * cols + j], t, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = subm(0, a[ri * cols + f], p);
            }
            v
        })
        .collect()
}

/// Rank of a (rows x cols) matrix.
pub fn rank(rows: usize, cols: usize, m: &[u64], p: u64) -> usize {
    cols - nullspace(rows, cols, m, p).len()
}

// ---------------------------------------------------------------------------
// Polynomials over F_P, coefficients low to high, no trailing zeros.

pub fn ptrim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn pderiv(f: &[u64], p: u64) -> Vec<u64> {
    ptrim(f.iter().enumerate().skip(1).map(|(i, &c)| mulm(c, i as u64 % p, p)).collect())
}

pub fn psub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    ptrim((0..n).map(|i| subm(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p)).collect())
}

pub fn pmul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            r[i + j] = (r[i + j] + a * b) % p;
        }
    }
    ptrim(r)
}

/// Quotient and remainder of `f / g` (g nonzero).
pub fn pdivrem(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let g = ptrim(g.to_vec());
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut r = ptrim(f.to_vec());
    if r.len() < g.len() {
        return (vec![], r);
    }
    let inv = invm(*g.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - g.len() + 1];
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let c = mulm(*r.last().unwrap(), inv, p);
        q[shift] = c;
        for (i, &b) in g.iter().enumerate() {
            r[shift + i] = subm(r[shift + i], mulm(c, b, p), p);
        }
        r = ptrim(r);
    }
    (ptrim(q), r)
}

pub fn pmonic(f: &[u64], p: u64) -> Vec<u64> {
    let f = ptrim(f.to_vec());
    match f.last() {
        None => f,
        Some(&lc) => {
            let inv = invm(lc, p);
            f.iter().map(|&c| mulm(c, inv, p)).collect()
        }
    }
}

pub fn pgcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = ptrim(f.to_vec());
    let mut b = ptrim(g.to_vec());
    while !b.is_empty() {
        let (_, r) = pdivrem(&a, &b, p);
        a = b;
        b = r;
    }
    pmonic(&a, p)
}

pub fn pdeg(f: &[u64]) -> usize {
    f.len().saturating_sub(1)
}

/// Yun's square-free decomposition of a monic `f` (degree below `P`):
/// returns `a_1, a_2, ...` with `f = prod a_i^i` and the `a_i` square-free and
/// pairwise coprime.
pub fn squarefree_decomposition(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let f = pmonic(f, p);
    let mut out = Vec::new();
    let df = pderiv(&f, p);
    let a0 = pgcd(&f, &df, p);
    let mut b = pdivrem(&f, &a0, p).0;
    let c = pdivrem(&df, &a0, p).0;
    let mut d = psub(&c, &pderiv(&b, p), p);
    while pdeg(&b) > 0 {
        let a = pgcd(&b, &d, p);
        let bn = pdivrem(&b, &a, p).0;
        let cn = pdivrem(&d, &a, p).0;
        d = psub(&cn, &pderiv(&bn, p), p);
        b = bn;
        out.push(a);
    }
    out
}

fn pmulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    pdivrem(&pmul(a, b, p), m, p).1
}

fn ppowmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = pdivrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = pmulmod(&r, &b, m, p);
        }
        b = pmulmod(&b, &b, m, p);
        e >>= 1;
    }
    r
}

/// All roots of a square-free polynomial that splits into linear factors.
/// Returns `None` if the polynomial does not split over `F_P`.
pub fn split_roots(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Option<Vec<u64>> {
    let f = pmonic(f, p);
    let mut roots = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match pdeg(&g) {
            0 => continue,
            1 => roots.push(subm(0, g[0], p)),
            d => {
                let mut tries = 0;
                loop {
                    tries += 1;
                    if tries > 200 {
                        return None;
                    }
                    let a = rng.random_range(0..p);
                    let h = ppowmod(&[a, 1], (p - 1) / 2, &g, p);
                    let h1 = psub(&h, &[1], p);
                    let s = pgcd(&g, &h1, p);
                    let ds = pdeg(&s);
                    if ds > 0 && ds < d {
                        let t = pdivrem(&g, &s, p).0;
                        stack.push(s);
                        stack.push(t);
                        break;
                    }
                }
            }
        }
    }
    roots.sort_unstable();
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn prime_field_has_roots_of_unity() {
        let f = PrimeField::new(216, 0);
        assert_eq!(f.p % 216, 1);
        assert_eq!(powm(f.omega, 216, f.p), 1);
        assert_ne!(powm(f.omega, 108, f.p), 1);
        assert_ne!(powm(f.omega, 72, f.p), 1);
        let g = PrimeField::new(216, 1);
        assert_ne!(f.p, g.p);
    }

    #[test]
    fn charpoly_small() {
        let p = PrimeField::new(2, 0).p;
        let m = MatP { n: 2, a: vec![1, 2, 3, 4] };
        // x^2 - 5x - 2
        assert_eq!(m.charpoly(p), vec![p - 2, p - 5, 1]);
    }

    #[test]
    fn charpoly_matches_cayley_hamilton() {
        let p = PrimeField::new(6, 0).p;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 3, 6, 10] {
            let mut m = MatP::zeros(n);
            for v in m.a.iter_mut() {
                *v = rng.random_range(0..5);
            }
            let cp = m.charpoly(p);
            assert_eq!(cp.len(), n + 1);
            // evaluate cp(M) = 0
            let mut acc = MatP::zeros(n);
            let mut pw = MatP::zeros(n);
            for i in 0..n {
                pw.set(i, i, 1);
            }
            for &c in &cp {
                for k in 0..n * n {
                    acc.a[k] = (acc.a[k] + c * pw.a[k]) % p;
                }
                pw = pw.mul(&m, p);
            }
            assert!(acc.a.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn squarefree_parts() {
        let p = PrimeField::new(2, 0).p;
        // (x-1)(x-2)^2(x-3)^3
        let mut f = vec![1u64];
        for (r, e) in [(1u64, 1), (2, 2), (3, 3)] {
            for _ in 0..e {
                f = pmul(&f, &[p - r, 1], p);
            }
        }
        let parts = squarefree_decomposition(&f, p);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts.iter().map(|a| pdeg(a)).collect::<Vec<_>>(), vec![1, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(split_roots(&parts[2], p, &mut rng).unwrap(), vec![3]);
    }

    #[test]
    fn roots_of_split_polynomial() {
        let p = PrimeField::new(2, 0).p;
        let mut f = vec![1u64];
        let want: Vec<u64> = vec![0, 5, 17, 99, 1234567];
        for &r in &want {
            f = pmul(&f, &[subm(0, r, p), 1], p);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(split_roots(&f, p, &mut rng).unwrap(), want);
    }

    #[test]
    fn nullspace_dimension() {
        let p = 101;
        let m = vec![1, 2, 3, 2, 4, 6, 1, 1, 1];
        let ns = nullspace(3, 3, &m, p);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        for i in 0..3 {
            assert_eq!((0..3).fold(0, |a, j| (a + m[i * 3 + j] * v[j]) % p), 0);
        }
    }
}
