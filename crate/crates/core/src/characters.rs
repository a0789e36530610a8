//! One-dimensional characters used throughout: characters of `o_l^x`, the
//! additive characters `psi_t` and `psi_x`, and the characters of the
//! Borel-type subgroups and of the subgroups used in the sns construction.
//!
//! Values are stored as exponents `e` of `exp(2 pi i e / n)` where `n` is the
//! group's conductor.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::abelian::Polycyclic;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{psi_x_exp, Gl2, Mat2, Subgroup};
use crate::ring::{Elem, Ring};

/// Exponent of `psi(v)` at conductor `n`.
#[inline]
pub fn psi(ring: &Ring, n: u32, v: Elem) -> u32 {
    ring.psi_exp(v) * (n / ring.p().pow(ring.ell()))
}

/// Characters of a multiplicative subgroup of `o_l^x` (by default all of it).
#[derive(Clone)]
pub struct UnitCharacters {
    ring: Ring,
    n: u32,
    pc: Arc<Polycyclic<Elem>>,
    thetas: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl fmt::Debug for UnitCharacters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitCharacters(order {}, n = {})", self.pc.order(), self.n)
    }
}

impl UnitCharacters {
    /// All characters of `o_l^x`.
    pub fn new(ring: &Ring, n: u32) -> Result<UnitCharacters> {
        UnitCharacters::of_subgroup(ring, &ring.units(), n)
    }

    /// Characters of the subgroup of `o_l^x` with the given elements.
    pub fn of_subgroup(ring: &Ring, elems: &[Elem], n: u32) -> Result<UnitCharacters> {
        let r = ring.clone();
        let pc = Polycyclic::new(elems, 1, |a, b| r.mul(*a, *b), |a| *a as u64);
        if pc.order() != elems.len() {
            return Err(Error::NotASubgroup("unit subset is not a group".into()));
        }
        let thetas = pc.characters(n)?;
        let lookup = thetas.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(UnitCharacters { ring: ring.clone(), n, pc: Arc::new(pc), thetas, lookup })
    }

    pub fn count(&self) -> usize {
        self.thetas.len()
    }
    pub fn conductor(&self) -> u32 {
        self.n
    }
    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn elements(&self) -> &[Elem] {
        self.pc.elements()
    }

    /// Value exponent of character `idx` at the unit `x`.
    #[inline]
    pub fn exp(&self, idx: usize, x: Elem) -> u32 {
        self.pc.eval(&self.thetas[idx], self.n, x as u64).expect("argument outside the unit subgroup")
    }

    pub fn value(&self, idx: usize, x: Elem) -> Cyclotomic {
        Cyclotomic::root(self.n, self.exp(idx, x))
    }

    /// Index of the pointwise product `chi_a^i * chi_b^j`.
    pub fn combine(&self, a: usize, i: i64, b: usize, j: i64) -> usize {
        let n = self.n as i64;
        let th: Vec<u32> = self.thetas[a]
            .iter()
            .zip(&self.thetas[b])
            .map(|(&x, &y)| (x as i64 * i + y as i64 * j).rem_euclid(n) as u32)
            .collect();
        self.lookup[&th]
    }

    pub fn trivial(&self) -> usize {
        self.lookup[&vec![0; self.thetas[0].len()]]
    }

    /// Index of the character with the given values on the subgroup elements
    /// (in `elements()` order), if any.
    pub fn find_by_values(&self, f: impl Fn(Elem) -> u32) -> Vec<usize> {
        (0..self.count()).filter(|&i| self.elements().iter().all(|&x| self.exp(i, x) == f(x))).collect()
    }

    /// Characters whose restriction to `1 + w^k o` is `1 + w^k x -> psi(w^k c x)`.
    pub fn with_restriction(&self, k: u32, c: Elem) -> Vec<usize> {
        let r = &self.ring;
        let wk = r.pi_pow(k);
        let pts: Vec<(Elem, u32)> = r
            .elements()
            .map(|x| (r.add(1, r.mul(wk, x)), psi(r, self.n, r.mul(wk, r.mul(c, x)))))
            .filter(|(u, _)| r.is_unit(*u))
            .collect();
        (0..self.count()).filter(|&i| pts.iter().all(|&(u, e)| self.exp(i, u) == e)).collect()
    }

    /// The `lambda` (mod `w^{l1}`, least code) with
    /// `chi(1 + w^{l2} x) = psi(w^{l2} lambda x)`.
    pub fn lambda_of(&self, idx: usize) -> Result<Elem> {
        let r = &self.ring;
        let (l1, l2) = (r.ell1(), r.ell2());
        let bound = r.p().pow(l1) as Elem;
        let w = r.pi_pow(l2);
        (0..bound)
            .find(|&lam| {
                r.elements().all(|x| {
                    let u = r.add(1, r.mul(w, x));
                    self.exp(idx, u) == psi(r, self.n, r.mul(w, r.mul(lam, x)))
                })
            })
            .ok_or_else(|| Error::NoSolution(format!("no lambda for character {idx}")))
    }

    /// Nontrivial on `1 + w^{l-1} o` (units only).
    pub fn is_injective(&self, idx: usize) -> bool {
        let r = &self.ring;
        let w = r.pi_pow(r.ell() - 1);
        r.elements().map(|x| r.add(1, r.mul(w, x))).filter(|&u| r.is_unit(u)).any(|u| self.exp(idx, u) != 0)
    }

    /// `chi(-1) = 1`, equivalently `chi` is a square (the p-part being odd).
    pub fn is_square(&self, idx: usize) -> bool {
        self.exp(idx, self.ring.neg(1)) == 0
    }

    /// Exhaustive count of pairs `(chi_1, chi_2)` with `chi_1 chi_2^{-1}` injective.
    pub fn count_injective_pairs(&self) -> usize {
        let inj: Vec<bool> = (0..self.count()).map(|i| self.is_injective(i)).collect();
        let mut c = 0;
        for a in 0..self.count() {
            for b in 0..self.count() {
                if inj[self.combine(a, 1, b, -1)] {
                    c += 1;
                }
            }
        }
        c
    }
}

/// A one-dimensional character of a subgroup, evaluated to an exponent.
#[derive(Clone)]
pub struct LinChar {
    pub name: String,
    n: u32,
    f: Arc<dyn Fn(&Mat2) -> u32 + Send + Sync>,
}

impl fmt::Debug for LinChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinChar({})", self.name)
    }
}

impl LinChar {
    pub fn new(name: impl Into<String>, n: u32, f: impl Fn(&Mat2) -> u32 + Send + Sync + 'static) -> LinChar {
        LinChar { name: name.into(), n, f: Arc::new(f) }
    }
    pub fn trivial(n: u32) -> LinChar {
        LinChar::new("1", n, |_| 0)
    }
    #[inline]
    pub fn exp(&self, m: &Mat2) -> u32 {
        (self.f)(m)
    }
    pub fn value(&self, m: &Mat2) -> Cyclotomic {
        Cyclotomic::root(self.n, self.exp(m))
    }
    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Pointwise product with another character.
    pub fn times(&self, other: &LinChar) -> LinChar {
        let (a, b, n) = (self.clone(), other.clone(), self.n);
        LinChar::new(format!("{}*{}", self.name, other.name), n, move |m| (a.exp(m) + b.exp(m)) % n)
    }

    /// `m -> phi(x^{-1} m x)`, a character of `x H x^{-1}`.
    pub fn conjugated(&self, g: &Gl2, x: &Mat2) -> LinChar {
        let (a, g, x) = (self.clone(), g.clone(), *x);
        let xi = g.inv(&x);
        LinChar::new(format!("{}^x", self.name), self.n, move |m| a.exp(&g.mul(&g.mul(&xi, m), &x)))
    }

    /// Checks `phi(xy) = phi(x) phi(y)` exhaustively for small groups and on
    /// a deterministic sample of pairs otherwise.
    pub fn is_multiplicative(&self, g: &Gl2, h: &Subgroup) -> bool {
        let e = h.elements();
        let n = e.len();
        let check = |i: usize, j: usize| (self.exp(&e[i]) + self.exp(&e[j])) % self.n == self.exp(&g.mul(&e[i], &e[j]));
        if n * n <= 10_000 * 100 {
            (0..n).all(|i| (0..n).all(|j| check(i, j)))
        } else {
            (0..100_000usize).all(|k| check((k * 7919 + 3) % n, (k * 104_729 + 11) % n))
        }
    }
}

/// `psi_t(1 u; 0 1) = psi(w^{l-t} u)` on `U`.
pub fn psi_t(g: &Gl2, t: u32) -> LinChar {
    let r = g.ring().clone();
    let n = g.conductor();
    let w = r.pi_pow(r.ell() - t.min(r.ell()));
    let w = if t == 0 { 0 } else { w };
    LinChar::new(format!("psi_{t}"), n, move |m| psi(&r, n, r.mul(w, m[1])))
}

/// `chi (x) psi_t` on `ZU`: `x (1 y; 0 1) -> chi(x) psi(w^{l-t} y)`.
pub fn zu_character(g: &Gl2, chars: &UnitCharacters, chi: usize, t: u32) -> LinChar {
    let r = g.ring().clone();
    let n = g.conductor();
    let ch = chars.clone();
    let w = if t == 0 { 0 } else { r.pi_pow(r.ell() - t) };
    LinChar::new(format!("chi{chi}(x)psi_{t}"), n, move |m| {
        let x = m[0];
        let y = r.mul(m[1], r.inv_unit(x));
        (ch.exp(chi, x) * (n / ch.conductor()) + psi(&r, n, r.mul(w, y))) % n
    })
}

/// `(chi, chi', psi_t)` on `Z^t U`: `diag(x, x s) (1 v; 0 1) -> chi(x) chi'(s) psi(w^{l-t} v)`.
pub fn ztu_character(g: &Gl2, chars: &UnitCharacters, chi: usize, wchars: &UnitCharacters, chi2: usize, t: u32) -> LinChar {
    let r = g.ring().clone();
    let n = g.conductor();
    let (ch, wc) = (chars.clone(), wchars.clone());
    let w = if t == 0 { 0 } else { r.pi_pow(r.ell() - t) };
    LinChar::new(format!("(chi{chi},chi'{chi2},psi_{t})"), n, move |m| {
        let xi = r.inv_unit(m[0]);
        let s = r.mul(m[3], xi);
        let v = r.mul(m[1], xi);
        (ch.exp(chi, m[0]) + wc.exp(chi2, s) + psi(&r, n, r.mul(w, v))) % n
    })
}

/// `(chi_1, chi_2)(x z; 0 y) = chi_1(x) chi_2(y)` on `B`.
pub fn borel_pair(g: &Gl2, chars: &UnitCharacters, c1: usize, c2: usize) -> LinChar {
    let n = g.conductor();
    let ch = chars.clone();
    LinChar::new(format!("(chi{c1},chi{c2})"), n, move |m| (ch.exp(c1, m[0]) + ch.exp(c2, m[3])) % n)
}

/// `chi o det` on `G`.
pub fn det_character(g: &Gl2, chars: &UnitCharacters, c: usize) -> LinChar {
    let n = g.conductor();
    let (ch, gg) = (chars.clone(), g.clone());
    LinChar::new(format!("chi{c}.det"), n, move |m| ch.exp(c, gg.det(m)))
}

/// `psi_x` on `K^{l-i}` for `x` over `o_i` (given by its canonical lift).
pub fn psi_x(g: &Gl2, x: &Mat2, i: u32) -> LinChar {
    let (gg, x) = (g.clone(), *x);
    let n = g.conductor();
    let scale = n / g.ring().p().pow(g.ring().ell());
    LinChar::new(format!("psi_x(level {i})"), n, move |m| psi_x_exp(&gg, &x, i, m) * scale)
}

/// `psi'_A` on `N`: `psi(n_c + w^j beta n_b) mu(det n)` where `mu` is a
/// character of `o^x` given by index.
pub fn psi_a_prime(g: &Gl2, beta: Elem, j: u32, chars: &UnitCharacters, mu: usize) -> LinChar {
    let r = g.ring().clone();
    let n = g.conductor();
    let (ch, gg) = (chars.clone(), g.clone());
    let wjb = r.mul(r.pi_pow(j), beta);
    LinChar::new("psi'_A", n, move |m| {
        (psi(&r, n, r.add(m[2], r.mul(wjb, m[1]))) + ch.exp(mu, gg.det(m))) % n
    })
}

/// All extensions of a character `phi` of a normal subgroup `nsub` to
/// `nsub * c` where `c` is abelian and normalizes `nsub` and fixes `phi`.
/// Each extension is `n c -> phi(n) theta(c)` for a character `theta` of `c`
/// agreeing with `phi` on `c ∩ nsub`.
pub fn extensions_over_abelian(g: &Gl2, nsub: &Subgroup, phi: &LinChar, c: &Subgroup) -> Result<Vec<LinChar>> {
    let n = g.conductor();
    let gg = g.clone();
    let pc = Arc::new(Polycyclic::new(c.elements(), g.identity(), |a, b| gg.mul(a, b), |a| gg.key(a)));
    if pc.order() != c.order() {
        return Err(Error::NotASubgroup("centralizer is not abelian".into()));
    }
    let inter: Vec<Mat2> = c.elements().iter().filter(|m| nsub.contains(g, m)).copied().collect();
    // transversal of c / (c ∩ nsub)
    let mut transversal: Vec<Mat2> = Vec::new();
    let mut covered = std::collections::HashSet::new();
    for m in c.elements() {
        if covered.contains(&g.key(m)) {
            continue;
        }
        transversal.push(*m);
        for k in &inter {
            covered.insert(g.key(&g.mul(m, k)));
        }
    }
    let transversal = Arc::new(transversal);
    let mut out = Vec::new();
    for theta in pc.characters(n)? {
        let agrees = inter.iter().all(|k| pc.eval(&theta, n, g.key(k)) == Some(phi.exp(k)));
        if !agrees {
            continue;
        }
        let (gg, pc, tr, ns, ph, th) = (g.clone(), pc.clone(), transversal.clone(), nsub.clone(), phi.clone(), theta.clone());
        out.push(LinChar::new(format!("{}''[{}]", phi.name, out.len()), n, move |m| {
            for cc in tr.iter() {
                let nn = gg.mul(m, &gg.inv(cc));
                if ns.contains(&gg, &nn) {
                    return (ph.exp(&nn) + pc.eval(&th, n, gg.key(cc)).unwrap()) % n;
                }
            }
            panic!("element outside N C");
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_subgroup, SubgroupKind};
    use crate::ring::Flavor;

    fn setup(p: u32, ell: u32, fl: Flavor) -> (Gl2, UnitCharacters) {
        let r = Ring::new(p, ell, fl).unwrap();
        let g = Gl2::new(&r).unwrap();
        let ch = UnitCharacters::new(&r, g.conductor()).unwrap();
        (g, ch)
    }

    #[test]
    fn central_characters_and_lambda() {
        let (_, ch) = setup(3, 1, Flavor::Zmod);
        assert_eq!(ch.count(), 2);
        let (g, ch) = setup(3, 2, Flavor::Zmod);
        assert_eq!(ch.count(), 6);
        let r = g.ring();
        assert_eq!(ch.lambda_of(ch.trivial()).unwrap(), 0);
        // the character with chi(1+3) = zeta_3 has lambda = 1
        let n = g.conductor();
        let z3 = ch.find_by_values(|_| 0);
        assert_eq!(z3.len(), 1);
        let target: Vec<usize> = (0..ch.count()).filter(|&i| ch.exp(i, 4) == psi(r, n, 3)).collect();
        assert!(!target.is_empty());
        for i in target {
            assert_eq!(ch.lambda_of(i).unwrap(), 1);
        }
        // orthogonality
        for a in 0..ch.count() {
            for b in 0..ch.count() {
                let s = ch.elements().iter().fold(Cyclotomic::zero(n), |acc, &x| acc.add(&ch.value(a, x).mul(&ch.value(b, x).conj())));
                assert_eq!(s.as_integer(), Some(if a == b { 6 } else { 0 }));
            }
        }
    }

    #[test]
    fn injective_counts() {
        let (_, ch) = setup(3, 2, Flavor::Zmod);
        assert_eq!((0..ch.count()).filter(|&i| ch.is_injective(i)).count(), 4);
        assert_eq!(ch.count_injective_pairs(), 24);
        let (_, ch3) = setup(3, 3, Flavor::Zmod);
        assert_eq!(ch3.count_injective_pairs(), 3usize.pow(3) * 8);
        let (_, ch1) = setup(3, 1, Flavor::Zmod);
        assert_eq!(ch1.count_injective_pairs(), 2);
        assert!(!ch1.is_injective(ch1.trivial()));
    }

    #[test]
    fn injectivity_matches_lambda_difference() {
        let (_, ch) = setup(3, 3, Flavor::Zmod);
        let r = ch.ring().clone();
        for a in 0..ch.count() {
            for b in 0..ch.count() {
                let d = r.sub(ch.lambda_of(a).unwrap(), ch.lambda_of(b).unwrap());
                assert_eq!(ch.is_injective(ch.combine(a, 1, b, -1)), r.is_unit(d));
            }
        }
    }

    #[test]
    fn named_characters_are_multiplicative() {
        for fl in [Flavor::Zmod, Flavor::Tpoly] {
            let (g, ch) = setup(3, 2, fl);
            let r = g.ring().clone();
            let zu = build_subgroup(&g, &SubgroupKind::ZU).unwrap();
            let u = build_subgroup(&g, &SubgroupKind::U).unwrap();
            let b = build_subgroup(&g, &SubgroupKind::B).unwrap();
            for t in 0..=2 {
                assert!(psi_t(&g, t).is_multiplicative(&g, &u));
                for c in 0..ch.count() {
                    assert!(zu_character(&g, &ch, c, t).is_multiplicative(&g, &zu));
                }
                let zt = build_subgroup(&g, &SubgroupKind::ZtU(t)).unwrap();
                let w = crate::group::principal_units(&r, t);
                let wc = UnitCharacters::of_subgroup(&r, &w, g.conductor()).unwrap();
                for c in [0, 3] {
                    for c2 in 0..wc.count() {
                        assert!(ztu_character(&g, &ch, c, &wc, c2, t).is_multiplicative(&g, &zt));
                    }
                }
            }
            assert_eq!(psi_t(&g, 0).exp(&g.e12(1)), 0);
            assert_ne!(psi_t(&g, 2).exp(&g.e12(r.pi_pow(1))), 0);
            if fl == Flavor::Zmod {
                assert_ne!(psi_t(&g, 2).exp(&g.e12(1)), 0);
            }
            for c1 in 0..ch.count() {
                assert!(borel_pair(&g, &ch, c1, (c1 + 1) % 6).is_multiplicative(&g, &b));
            }
        }
    }

    #[test]
    fn duality_is_bijective() {
        for fl in [Flavor::Zmod, Flavor::Tpoly] {
            let (g, _) = setup(3, 2, fl);
            let r = g.ring().clone();
            let k1 = build_subgroup(&g, &SubgroupKind::K(1)).unwrap();
            let mut seen = std::collections::HashSet::new();
            for a in 0..3u16 {
                for b in 0..3u16 {
                    for c in 0..3u16 {
                        for d in 0..3u16 {
                            let phi = psi_x(&g, &[a, b, c, d], 1);
                            assert!(phi.is_multiplicative(&g, &k1));
                            let vals: Vec<u32> = k1.elements().iter().map(|m| phi.exp(m)).collect();
                            seen.insert(vals);
                        }
                    }
                }
            }
            assert_eq!(seen.len(), 81);
            // the example psi_x(I + 3y) = psi(3 tr(x y)) for x = diag(1, 0)
            let phi = psi_x(&g, &[1, 0, 0, 0], 1);
            for k in k1.elements() {
                let y0 = r.sub(k[0], 1);
                assert_eq!(phi.exp(k), psi(&r, g.conductor(), y0));
            }
        }
    }

    #[test]
    fn psi_t_orbits_cover_characters_of_u() {
        // every character of U is B-conjugate to exactly one psi_t (l <= 2)
        for ell in 1..=2 {
            let (g, _) = setup(3, ell, Flavor::Zmod);
            let r = g.ring().clone();
            let n = g.conductor();
            let b = build_subgroup(&g, &SubgroupKind::B).unwrap();
            // characters of U: u -> psi(c u), c in o
            for c in r.elements() {
                let target: Vec<u32> = r.elements().map(|u| psi(&r, n, r.mul(c, u))).collect();
                let mut hits = 0;
                for t in 0..=ell {
                    let pt = psi_t(&g, t);
                    let found = b.elements().iter().any(|x| {
                        let conj = pt.conjugated(&g, x);
                        r.elements().map(|u| conj.exp(&g.e12(u))).eq(target.iter().copied())
                    });
                    if found {
                        hits += 1;
                    }
                }
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn mu_alpha_extends_scalar_character() {
        for ell in 2..=3 {
            let (g, ch) = setup(3, ell, Flavor::Zmod);
            let r = g.ring().clone();
            let l2 = r.ell2();
            let k = build_subgroup(&g, &SubgroupKind::K(l2)).unwrap();
            for alpha in 0..r.p().pow(r.ell1()) as Elem {
                let ext = ch.with_restriction(l2, alpha);
                assert!(!ext.is_empty());
                for e in ext {
                    let mu = det_character(&g, &ch, e);
                    let px = psi_x(&g, &g.scalar(alpha), r.ell1());
                    assert!(k.elements().iter().all(|m| mu.exp(m) == px.exp(m)));
                }
            }
        }
    }
}
