//! The group `GL_2(o_l)`: matrix arithmetic, enumeration, named subgroups and
//! classification of matrices by their reduction to the residue field.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, Flavor, Ring};

/// A 2x2 matrix `[a, b, c, d]` (row-major) over `o_l`.
pub type Mat2 = [Elem; 4];

/// Default bound on `|G|` for storing every element.
pub const DEFAULT_ELEMENT_BUDGET: u64 = 1_000_000;

/// Exponent of the cyclotomic field used for every character value attached
/// to a ring: `p^l (p^2 - 1)` covers additive characters, characters of all
/// finite abelian subquotients that occur, and the exponent of `GL_2(o_l)`.
pub fn conductor_for(ring: &Ring) -> u32 {
    let p = ring.p();
    p.pow(ring.ell()) * (p * p - 1)
}

/// Enumerated (or lazily described) `GL_2(o_l)`.
#[derive(Clone)]
pub struct Gl2 {
    ring: Ring,
    s: u64,
    order: u64,
    conductor: u32,
    elems: Option<Arc<Vec<Mat2>>>,
    dense: Option<Arc<Vec<u32>>>,
}

/// The residue-field type of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixType {
    Cuspidal,
    SplitSemisimple,
    SplitNonSemisimple,
    NonRegular,
}

impl MatrixType {
    pub fn short(&self) -> &'static str {
        match self {
            MatrixType::Cuspidal => "cus",
            MatrixType::SplitSemisimple => "ss",
            MatrixType::SplitNonSemisimple => "sns",
            MatrixType::NonRegular => "non-reg",
        }
    }
}

/// Closed formula `q^(4l-3) (q-1)^2 (q+1)`.
pub fn gl2_order(q: u64, ell: u32) -> u64 {
    q.pow(4 * ell - 3) * (q - 1) * (q - 1) * (q + 1)
}

impl Gl2 {
    pub fn new(ring: &Ring) -> Result<Gl2> {
        Gl2::with_budget(ring, DEFAULT_ELEMENT_BUDGET)
    }

    /// Enumerates the group when `|G| <= budget`; otherwise keeps only the
    /// closed-form description (elements are then produced on demand as
    /// lifts of `GL_2(F_q)` times `K^1`).
    pub fn with_budget(ring: &Ring, budget: u64) -> Result<Gl2> {
        let s = ring.size() as u64;
        let order = gl2_order(ring.q() as u64, ring.ell());
        let mut g = Gl2 { ring: ring.clone(), s, order, conductor: conductor_for(ring), elems: None, dense: None };
        if order <= budget {
            let mut elems = Vec::with_capacity(order as usize);
            let dense_ok = s.pow(4) <= (1 << 23);
            let mut dense = if dense_ok { vec![u32::MAX; s.pow(4) as usize] } else { Vec::new() };
            for a in ring.elements() {
                for b in ring.elements() {
                    for c in ring.elements() {
                        for d in ring.elements() {
                            let m = [a, b, c, d];
                            if ring.is_unit(g.det(&m)) {
                                if dense_ok {
                                    dense[g.key(&m) as usize] = elems.len() as u32;
                                }
                                elems.push(m);
                            }
                        }
                    }
                }
            }
            if elems.len() as u64 != order {
                return Err(Error::NotASubgroup(format!("enumerated {} elements, expected {order}", elems.len())));
            }
            g.elems = Some(Arc::new(elems));
            if dense_ok {
                g.dense = Some(Arc::new(dense));
            }
        }
        Ok(g)
    }

    /// A copy that shares character conductor `n` (a multiple of this ring's).
    pub fn with_conductor(mut self, n: u32) -> Gl2 {
        assert_eq!(n % self.conductor, 0);
        self.conductor = n;
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn conductor(&self) -> u32 {
        self.conductor
    }
    pub fn is_materialized(&self) -> bool {
        self.elems.is_some()
    }

    pub fn elements(&self) -> Result<&[Mat2]> {
        self.elems
            .as_deref()
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::BudgetExceeded(format!("|G| = {} is not enumerated", self.order)))
    }

    /// Lexicographic key of a matrix on its canonical entries.
    #[inline]
    pub fn key(&self, m: &Mat2) -> u64 {
        let s = self.s;
        ((m[0] as u64 * s + m[1] as u64) * s + m[2] as u64) * s + m[3] as u64
    }

    pub fn from_key(&self, k: u64) -> Mat2 {
        let s = self.s;
        [(k / s / s / s) as Elem, (k / s / s % s) as Elem, (k / s % s) as Elem, (k % s) as Elem]
    }

    /// Position of `m` in the enumeration.
    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        if let Some(d) = &self.dense {
            let i = d[self.key(m) as usize];
            return (i != u32::MAX).then_some(i as usize);
        }
        let elems = self.elems.as_ref()?;
        let k = self.key(m);
        elems.binary_search_by_key(&k, |x| self.key(x)).ok()
    }

    #[inline]
    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let r = &self.ring;
        [
            r.add(r.mul(x[0], y[0]), r.mul(x[1], y[2])),
            r.add(r.mul(x[0], y[1]), r.mul(x[1], y[3])),
            r.add(r.mul(x[2], y[0]), r.mul(x[3], y[2])),
            r.add(r.mul(x[2], y[1]), r.mul(x[3], y[3])),
        ]
    }

    #[inline]
    pub fn det(&self, m: &Mat2) -> Elem {
        let r = &self.ring;
        r.sub(r.mul(m[0], m[3]), r.mul(m[1], m[2]))
    }

    #[inline]
    pub fn trace(&self, m: &Mat2) -> Elem {
        self.ring.add(m[0], m[3])
    }

    pub fn is_invertible(&self, m: &Mat2) -> bool {
        self.ring.is_unit(self.det(m))
    }

    /// Inverse of an invertible matrix.
    #[inline]
    pub fn inv(&self, m: &Mat2) -> Mat2 {
        let r = &self.ring;
        let di = r.inv_unit(self.det(m));
        [r.mul(m[3], di), r.neg(r.mul(m[1], di)), r.neg(r.mul(m[2], di)), r.mul(m[0], di)]
    }

    /// `g x g^{-1}`.
    pub fn conj(&self, g: &Mat2, x: &Mat2) -> Mat2 {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    pub fn identity(&self) -> Mat2 {
        [1, 0, 0, 1]
    }
    pub fn scalar(&self, x: Elem) -> Mat2 {
        [x, 0, 0, x]
    }
    pub fn diag(&self, x: Elem, y: Elem) -> Mat2 {
        [x, 0, 0, y]
    }
    pub fn e12(&self, u: Elem) -> Mat2 {
        [1, u, 0, 1]
    }
    pub fn e21(&self, c: Elem) -> Mat2 {
        [1, 0, c, 1]
    }

    pub fn mat_add(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let r = &self.ring;
        [r.add(x[0], y[0]), r.add(x[1], y[1]), r.add(x[2], y[2]), r.add(x[3], y[3])]
    }
    pub fn mat_sub(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let r = &self.ring;
        [r.sub(x[0], y[0]), r.sub(x[1], y[1]), r.sub(x[2], y[2]), r.sub(x[3], y[3])]
    }
    pub fn mat_scale(&self, k: Elem, x: &Mat2) -> Mat2 {
        let r = &self.ring;
        [r.mul(k, x[0]), r.mul(k, x[1]), r.mul(k, x[2]), r.mul(k, x[3])]
    }

    /// Entrywise reduction to `o_i`.
    pub fn project_mat(&self, m: &Mat2, i: u32) -> Mat2 {
        let md = self.ring.p().pow(i);
        m.map(|x| (x as u32 % md) as Elem)
    }

    /// The group over `o_i` (same prime and flavor, same conductor).
    pub fn at_level(&self, i: u32) -> Result<Gl2> {
        let r = self.ring.with_length(i)?;
        let g = Gl2::with_budget(&r, DEFAULT_ELEMENT_BUDGET)?;
        Ok(g.with_conductor(self.conductor))
    }

    /// Valuation of `x - y` for ring elements.
    pub fn val_diff(&self, x: Elem, y: Elem) -> u32 {
        self.ring.val(self.ring.sub(x, y))
    }

    /// Whether `m` lies in `K^i = ker(G_l -> G_i)`.
    pub fn in_congruence(&self, m: &Mat2, i: u32) -> bool {
        let r = &self.ring;
        r.val(r.sub(m[0], 1)) >= i && r.val(m[1]) >= i && r.val(m[2]) >= i && r.val(r.sub(m[3], 1)) >= i
    }

    /// Calls `f` on every element (enumerated order when materialized,
    /// otherwise as lifts of `GL_2(F_q)` times `K^1`).
    pub fn for_each_element(&self, mut f: impl FnMut(&Mat2)) {
        if let Some(e) = &self.elems {
            e.iter().for_each(&mut f);
            return;
        }
        let p = self.ring.p() as Elem;
        let k1 = congruence_elements(self, 1);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let g0 = [a, b, c, d];
                        if self.ring.is_unit(self.det(&g0)) {
                            for k in &k1 {
                                f(&self.mul(&g0, k));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Generators of `G`: `E12(w^i)`, `E21(1)` and `diag(u, 1)` for unit
    /// generators `u`.
    pub fn generators(&self) -> Vec<Mat2> {
        let mut g: Vec<Mat2> = additive_generators(&self.ring).into_iter().map(|u| self.e12(u)).collect();
        g.push(self.e21(1));
        for u in unit_generators(&self.ring) {
            g.push(self.diag(u, 1));
        }
        g
    }

    /// Order of an element.
    pub fn element_order(&self, m: &Mat2) -> u64 {
        let id = self.identity();
        let mut x = *m;
        let mut k = 1;
        while x != id {
            x = self.mul(&x, m);
            k += 1;
        }
        k
    }

    pub fn format_mat(&self, m: &Mat2) -> String {
        let f = |x| self.ring.format(x);
        format!("[[{}, {}], [{}, {}]]", f(m[0]), f(m[1]), f(m[2]), f(m[3]))
    }
}

/// `w^i` for `i < l`: these generate `(o_l, +)` in both flavors.
pub fn additive_generators(ring: &Ring) -> Vec<Elem> {
    match ring.flavor() {
        Flavor::Zmod => vec![1],
        Flavor::Tpoly => (0..ring.ell()).map(|i| ring.pi_pow(i)).collect(),
    }
}

/// Greedy generating set of a multiplicatively closed set of units given by
/// a membership list (scanned in code order).
pub fn greedy_unit_generators(ring: &Ring, members: &[Elem]) -> Vec<Elem> {
    let mut span: HashSet<Elem> = HashSet::from([1]);
    let mut gens = Vec::new();
    for &u in members {
        if span.contains(&u) {
            continue;
        }
        gens.push(u);
        // re-close the span
        let mut queue: VecDeque<Elem> = span.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = ring.mul(x, g);
                if span.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    gens
}

/// Generators of `o_l^x`.
pub fn unit_generators(ring: &Ring) -> Vec<Elem> {
    greedy_unit_generators(ring, &ring.units())
}

/// Elements of `1 + w^t o_l` (all units when `t = 0`).
pub fn principal_units(ring: &Ring, t: u32) -> Vec<Elem> {
    ring.units().into_iter().filter(|&u| t == 0 || ring.val(ring.sub(u, 1)) >= t).collect()
}

/// Elements of `K^i`.
pub fn congruence_elements(g: &Gl2, i: u32) -> Vec<Mat2> {
    let r = g.ring();
    let ideal: Vec<Elem> = r.elements().filter(|&x| r.val(x) >= i).collect();
    let mut out = Vec::with_capacity(ideal.len().pow(4));
    for &a in &ideal {
        for &b in &ideal {
            for &c in &ideal {
                for &d in &ideal {
                    out.push([r.add(1, a), b, c, r.add(1, d)]);
                }
            }
        }
    }
    out
}

/// Residue-field classification of a matrix over any `o_i`.
pub fn classify_matrix(ring: &Ring, x: &Mat2) -> MatrixType {
    let p = ring.p() as i64;
    let [a, b, c, d] = x.map(|e| e as i64 % p);
    if b == 0 && c == 0 && a == d {
        return MatrixType::NonRegular;
    }
    let tr = (a + d) % p;
    let det = (a * d - b * c).rem_euclid(p);
    let disc = (tr * tr - 4 * det).rem_euclid(p);
    if disc == 0 {
        MatrixType::SplitNonSemisimple
    } else if is_square_mod(disc, p) {
        MatrixType::SplitSemisimple
    } else {
        MatrixType::Cuspidal
    }
}

pub fn is_square_mod(x: i64, p: i64) -> bool {
    let x = x.rem_euclid(p);
    (0..p).any(|y| (y * y) % p == x)
}

/// The three-branch exponent `f(t, i)` governing intersections with `Z^t U`.
pub fn f_exponent(t: u32, i: u32, ring: &Ring) -> Result<u32> {
    let (ell, ell1, ell2) = (ring.ell(), ring.ell1(), ring.ell2());
    if t > ell || i < 1 || i > ell1 {
        return Err(Error::BadParam(format!("f(t={t}, i={i}) needs 0 <= t <= {ell}, 1 <= i <= {ell1}")));
    }
    Ok(if ell2 > t {
        t - t.saturating_sub(i)
    } else if i + t >= ell {
        ell1
    } else {
        t - ell2 + i
    })
}

// ---------------------------------------------------------------------------
// Subgroups

/// Named subgroups of `GL_2(o_l)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubgroupKind {
    /// Upper triangular matrices.
    B,
    /// Upper unitriangular matrices.
    U,
    /// Diagonal matrices.
    T,
    /// Scalar matrices (the center).
    Z,
    /// `{diag(x, x + w^t y)}`, the stabilizer of `psi_t` in `T`.
    Zt(u32),
    ZU,
    ZtU(u32),
    /// Congruence subgroup `K^i`.
    K(u32),
    /// Mirabolic subgroup: last row `(0, 1)`.
    P2,
    /// Centralizer of a matrix.
    Centralizer(Mat2),
    /// Inertia group in `G` of the character `psi_A` of `K^{l2}` (for `A` over `o_{l1}`).
    InertiaSA(Mat2),
    /// `N` for the shape `(alpha 1; w^j beta alpha)` with parameter `j`.
    N(u32),
    /// `N C(A)` for `A = (alpha 1; w^j beta alpha)`.
    NCA(Mat2, u32),
    /// `ZU ∩ S_A`.
    UA(Mat2),
    /// `(K^{l1} ∩ C(A)) K^{l2}`.
    Rx(Mat2),
}

/// A subgroup stored as a sorted element list with a generating set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub name: String,
    keys: Vec<u64>,
    elems: Vec<Mat2>,
    gens: Vec<Mat2>,
}

impl Subgroup {
    /// Builds from an element list; verifies closure exhaustively for small
    /// groups and on a deterministic sample otherwise.
    pub fn from_elements(g: &Gl2, name: &str, mut elems: Vec<Mat2>, gens: Option<Vec<Mat2>>) -> Result<Subgroup> {
        elems.sort_unstable_by_key(|m| g.key(m));
        elems.dedup();
        let keys: Vec<u64> = elems.iter().map(|m| g.key(m)).collect();
        let mut h = Subgroup { name: name.to_string(), keys, elems, gens: Vec::new() };
        if !h.contains(g, &g.identity()) {
            return Err(Error::NotASubgroup(format!("{name}: identity missing")));
        }
        let n = h.elems.len();
        let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if n * n <= 1_000_000 {
            Box::new((0..n).flat_map(move |i| (0..n).map(move |j| (i, j))))
        } else {
            Box::new((0..20_000usize).map(move |k| ((k * 7919 + 13) % n, (k * 104729 + 7) % n)))
        };
        for (i, j) in pairs {
            let prod = g.mul(&h.elems[i], &g.inv(&h.elems[j]));
            if !h.contains(g, &prod) {
                return Err(Error::NotASubgroup(format!("{name}: not closed")));
            }
        }
        h.gens = match gens {
            Some(gs) => gs,
            None => greedy_generators(g, &h.elems),
        };
        let span = closure(g, &h.gens, n + 1);
        if span.len() != n {
            return Err(Error::NotASubgroup(format!("{name}: generators span {} of {n} elements", span.len())));
        }
        Ok(h)
    }

    /// The subgroup generated by `gens`.
    pub fn generated(g: &Gl2, name: &str, gens: Vec<Mat2>, limit: usize) -> Result<Subgroup> {
        let span = closure(g, &gens, limit);
        if span.len() > limit {
            return Err(Error::BudgetExceeded(format!("{name}: more than {limit} elements")));
        }
        let mut elems: Vec<Mat2> = span.into_iter().map(|k| g.from_key(k)).collect();
        elems.sort_unstable_by_key(|m| g.key(m));
        let keys = elems.iter().map(|m| g.key(m)).collect();
        Ok(Subgroup { name: name.to_string(), keys, elems, gens })
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn elements(&self) -> &[Mat2] {
        &self.elems
    }
    pub fn generators(&self) -> &[Mat2] {
        &self.gens
    }
    pub fn contains(&self, g: &Gl2, m: &Mat2) -> bool {
        self.keys.binary_search(&g.key(m)).is_ok()
    }
    /// Position of `m` in the sorted element list.
    pub fn position(&self, g: &Gl2, m: &Mat2) -> Option<usize> {
        self.keys.binary_search(&g.key(m)).ok()
    }

    pub fn intersect(&self, g: &Gl2, other: &Subgroup, name: &str) -> Result<Subgroup> {
        let elems = self.elems.iter().filter(|m| other.contains(g, m)).copied().collect();
        Subgroup::from_elements(g, name, elems, None)
    }

    /// `H^x = x^{-1} H x` as an element list.
    pub fn conjugate_by(&self, g: &Gl2, x: &Mat2) -> Vec<Mat2> {
        let xi = g.inv(x);
        self.elems.iter().map(|h| g.mul(&g.mul(&xi, h), x)).collect()
    }
}

/// BFS closure of a generating set (keys), stopping after `limit + 1` elements.
pub fn closure(g: &Gl2, gens: &[Mat2], limit: usize) -> HashSet<u64> {
    let id = g.identity();
    let mut seen: HashSet<u64> = HashSet::from([g.key(&id)]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = g.mul(&x, s);
            if seen.insert(g.key(&y)) {
                if seen.len() > limit {
                    return seen;
                }
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Greedy generating set: scan elements in a fixed pseudo-random order and
/// keep each one not yet in the span.
pub fn greedy_generators(g: &Gl2, elems: &[Mat2]) -> Vec<Mat2> {
    let n = elems.len();
    let mut gens = Vec::new();
    let mut span = closure(g, &gens, n);
    let step = (1..n.max(2)).rev().find(|s| crate::cyclotomic::gcd(*s as u64, n as u64) == 1).unwrap_or(1);
    let mut idx = 0;
    for _ in 0..n {
        idx = (idx + step) % n;
        let m = elems[idx];
        if !span.contains(&g.key(&m)) {
            gens.push(m);
            span = closure(g, &gens, n);
            if span.len() >= n {
                break;
            }
        }
    }
    gens
}

fn upper(g: &Gl2, allowed: impl Fn(Elem, Elem) -> bool, unipotent: bool) -> Vec<Mat2> {
    let r = g.ring();
    let units = r.units();
    let mut out = Vec::new();
    for &x in &units {
        for &w in &units {
            if !allowed(x, w) {
                continue;
            }
            if unipotent {
                out.push([x, 0, 0, w]);
            } else {
                for u in r.elements() {
                    out.push([x, u, 0, w]);
                }
            }
        }
    }
    out
}

/// Centralizer `C_G(A)` of a matrix: `{a + bA}` when `A` is regular,
/// otherwise computed by filtering the enumerated group.
pub fn centralizer_elements(g: &Gl2, a: &Mat2) -> Result<Vec<Mat2>> {
    let r = g.ring();
    if classify_matrix(r, a) != MatrixType::NonRegular {
        let mut set = HashSet::new();
        let mut out = Vec::new();
        for x in r.elements() {
            for y in r.elements() {
                let m = g.mat_add(&g.scalar(x), &g.mat_scale(y, a));
                if g.is_invertible(&m) && set.insert(g.key(&m)) {
                    out.push(m);
                }
            }
        }
        return Ok(out);
    }
    Ok(g.elements()?.iter().filter(|m| g.mul(m, a) == g.mul(a, m)).copied().collect())
}

/// Value exponent (mod `p^l`) of `psi_A` on an element of `K^{l-i}` where
/// `A` is given over `o_i` (its code is its canonical lift).
pub fn psi_x_exp(g: &Gl2, x: &Mat2, i: u32, k: &Mat2) -> u32 {
    let r = g.ring();
    // k = I + w^{l-i} y; tr(x y) w^{l-i} = tr(x (k - I))
    let km = g.mat_sub(k, &g.identity());
    let prod = g.mul(x, &km);
    let _ = i;
    r.psi_exp(g.trace(&prod))
}

pub fn build_subgroup(g: &Gl2, kind: &SubgroupKind) -> Result<Subgroup> {
    let r = g.ring();
    let ell = r.ell();
    let unit_gens = unit_generators(r);
    let u_gens: Vec<Mat2> = additive_generators(r).into_iter().map(|u| g.e12(u)).collect();
    let z_gens: Vec<Mat2> = unit_gens.iter().map(|&u| g.scalar(u)).collect();
    let zt_gens = |t: u32| -> Vec<Mat2> {
        let mut v = z_gens.clone();
        let w = principal_units(r, t);
        v.extend(greedy_unit_generators(r, &w).into_iter().map(|s| g.diag(1, s)));
        v
    };
    let check_t = |t: u32| {
        if t > ell {
            Err(Error::BadParam(format!("t = {t} exceeds l = {ell}")))
        } else {
            Ok(())
        }
    };
    let close = |x: Elem, w: Elem, t: u32| t == 0 || r.val(r.sub(w, x)) >= t;
    match kind {
        SubgroupKind::B => {
            let mut gens: Vec<Mat2> = unit_gens.iter().flat_map(|&u| [g.diag(u, 1), g.diag(1, u)]).collect();
            gens.extend(u_gens);
            Subgroup::from_elements(g, "B", upper(g, |_, _| true, false), Some(gens))
        }
        SubgroupKind::U => {
            Subgroup::from_elements(g, "U", r.elements().map(|u| g.e12(u)).collect(), Some(u_gens))
        }
        SubgroupKind::T => {
            let gens = unit_gens.iter().flat_map(|&u| [g.diag(u, 1), g.diag(1, u)]).collect();
            Subgroup::from_elements(g, "T", upper(g, |_, _| true, true), Some(gens))
        }
        SubgroupKind::Z => Subgroup::from_elements(g, "Z", upper(g, |x, w| x == w, true), Some(z_gens)),
        SubgroupKind::Zt(t) => {
            check_t(*t)?;
            let t = *t;
            Subgroup::from_elements(g, &format!("Z^{t}"), upper(g, |x, w| close(x, w, t), true), Some(zt_gens(t)))
        }
        SubgroupKind::ZU => {
            let mut gens = z_gens.clone();
            gens.extend(u_gens);
            Subgroup::from_elements(g, "ZU", upper(g, |x, w| x == w, false), Some(gens))
        }
        SubgroupKind::ZtU(t) => {
            check_t(*t)?;
            let t = *t;
            let mut gens = zt_gens(t);
            gens.extend(u_gens);
            Subgroup::from_elements(g, &format!("Z^{t}U"), upper(g, |x, w| close(x, w, t), false), Some(gens))
        }
        SubgroupKind::K(i) => {
            if *i < 1 || *i > ell {
                return Err(Error::BadParam(format!("K(i) needs 1 <= i <= {ell}")));
            }
            let elems = congruence_elements(g, *i);
            let mut gens = Vec::new();
            for j in *i..ell {
                let w = r.pi_pow(j);
                gens.push(g.e12(w));
                gens.push(g.e21(w));
                gens.push(g.diag(r.add(1, w), 1));
                gens.push(g.diag(1, r.add(1, w)));
            }
            if *i == ell {
                gens.clear();
            }
            Subgroup::from_elements(g, &format!("K^{i}"), elems, Some(gens))
        }
        SubgroupKind::P2 => {
            let mut gens: Vec<Mat2> = unit_gens.iter().map(|&u| g.diag(u, 1)).collect();
            gens.extend(u_gens);
            Subgroup::from_elements(g, "P2", upper(g, |_, w| w == 1, false), Some(gens))
        }
        SubgroupKind::Centralizer(a) => Subgroup::from_elements(g, "C(A)", centralizer_elements(g, a)?, None),
        SubgroupKind::InertiaSA(a) => inertia_subgroup(g, a),
        SubgroupKind::N(j) => Subgroup::from_elements(g, &format!("N(j={j})"), n_elements(g, *j)?, None),
        SubgroupKind::NCA(a, j) => {
            check_sns_shape(g, a, *j)?;
            let n = n_elements(g, *j)?;
            let c = centralizer_elements(g, a)?;
            let mut gens = greedy_generators(g, &n);
            gens.extend(greedy_generators(g, &c));
            let limit = g.order() as usize;
            let h = Subgroup::generated(g, "NC(A)", gens.clone(), limit)?;
            Subgroup::from_elements(g, "NC(A)", h.elems, Some(gens))
        }
        SubgroupKind::UA(a) => {
            let sa = inertia_subgroup(g, a)?;
            let zu = build_subgroup(g, &SubgroupKind::ZU)?;
            zu.intersect(g, &sa, "U_A")
        }
        SubgroupKind::Rx(a) => {
            let (l1, l2) = (r.ell1(), r.ell2());
            let c = centralizer_elements(g, a)?;
            let mut gens: Vec<Mat2> = c.into_iter().filter(|m| g.in_congruence(m, l1.max(1))).collect();
            gens = greedy_generators(g, &gens);
            gens.extend(build_subgroup(g, &SubgroupKind::K(l2.max(1)))?.gens);
            let h = Subgroup::generated(g, "R_x", gens.clone(), g.order() as usize)?;
            Subgroup::from_elements(g, "R_x", h.elems, Some(gens))
        }
    }
}

/// Checks that `a = (alpha 1; w^j beta alpha)`.
pub fn check_sns_shape(g: &Gl2, a: &Mat2, j: u32) -> Result<()> {
    let r = g.ring();
    if a[0] != a[3] || a[1] != 1 || r.val(a[2]) < j.min(r.ell()) {
        return Err(Error::BadShape(format!("{} is not (alpha 1; w^{j} beta alpha)", g.format_mat(a))));
    }
    Ok(())
}

/// `N = {(1 + w^{l1} x, w^{l2 - j} z; w^{l2} y, 1 + w^{l1} w)}`.
pub fn n_elements(g: &Gl2, j: u32) -> Result<Vec<Mat2>> {
    let r = g.ring();
    let (l1, l2) = (r.ell1(), r.ell2());
    if j > l2 {
        return Err(Error::BadParam(format!("N needs j <= l2 = {l2}")));
    }
    let ideal = |k: u32| -> Vec<Elem> { r.elements().filter(|&x| r.val(x) >= k).collect() };
    let (i1, i12, i2) = (ideal(l1), ideal(l2 - j), ideal(l2));
    let mut out = Vec::new();
    for &x in &i1 {
        for &z in &i12 {
            for &y in &i2 {
                for &w in &i1 {
                    let m = [r.add(1, x), z, y, r.add(1, w)];
                    if g.is_invertible(&m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Inertia group of `psi_A` on `K^{l2}` computed from the defining condition
/// `psi_A(g k g^{-1}) = psi_A(k)` on a generating set of `K^{l2}`.
pub fn inertia_subgroup(g: &Gl2, a: &Mat2) -> Result<Subgroup> {
    let r = g.ring();
    let l2 = r.ell2();
    let kgens = build_subgroup(g, &SubgroupKind::K(l2))?.gens;
    let fixes = |x: &Mat2| kgens.iter().all(|k| psi_x_exp(g, a, r.ell1(), &g.conj(x, k)) == psi_x_exp(g, a, r.ell1(), k));
    let elems: Vec<Mat2> = g.elements()?.iter().filter(|x| fixes(x)).copied().collect();
    Subgroup::from_elements(g, "S_A", elems, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(p: u32, ell: u32) -> Gl2 {
        Gl2::new(&Ring::new(p, ell, Flavor::Zmod).unwrap()).unwrap()
    }

    #[test]
    fn orders_match_formula() {
        for p in [3, 5] {
            for ell in 1..=2 {
                let g = grp(p, ell);
                assert_eq!(g.elements().unwrap().len() as u64, gl2_order(p as u64, ell));
            }
        }
        assert_eq!(grp(3, 1).order(), 48);
        assert_eq!(grp(3, 2).order(), 3888);
        let g4 = Gl2::new(&Ring::new(3, 4, Flavor::Zmod).unwrap()).unwrap();
        assert_eq!(g4.order(), 25_509_168);
        assert!(!g4.is_materialized());
    }

    #[test]
    fn subgroup_orders() {
        for fl in [Flavor::Zmod, Flavor::Tpoly] {
            for p in [3u32, 5] {
                for ell in 1..=2u32 {
                    let r = Ring::new(p, ell, fl).unwrap();
                    let g = Gl2::new(&r).unwrap();
                    let q = p as usize;
                    let z = q.pow(ell - 1) * (q - 1);
                    let b = build_subgroup(&g, &SubgroupKind::B).unwrap();
                    let u = build_subgroup(&g, &SubgroupKind::U).unwrap();
                    let t = build_subgroup(&g, &SubgroupKind::T).unwrap();
                    assert_eq!(u.order(), q.pow(ell));
                    assert_eq!(build_subgroup(&g, &SubgroupKind::Z).unwrap().order(), z);
                    assert_eq!(b.order(), t.order() * u.order());
                    for i in 1..=ell {
                        let k = build_subgroup(&g, &SubgroupKind::K(i)).unwrap();
                        assert_eq!(k.order(), q.pow(4 * (ell - i)));
                    }
                    assert_eq!(build_subgroup(&g, &SubgroupKind::ZtU(ell)).unwrap().order(), z * q.pow(ell));
                    assert_eq!(build_subgroup(&g, &SubgroupKind::ZtU(0)).unwrap().order(), b.order());
                }
            }
        }
    }

    #[test]
    fn small_subgroup_examples() {
        let g = grp(3, 2);
        assert_eq!(build_subgroup(&g, &SubgroupKind::U).unwrap().order(), 9);
        assert_eq!(build_subgroup(&g, &SubgroupKind::Z).unwrap().order(), 6);
        let zu = build_subgroup(&g, &SubgroupKind::ZU).unwrap();
        assert_eq!(zu.order(), 54);
        assert_eq!(g.order() / zu.order() as u64, 72);
        assert_eq!(build_subgroup(&g, &SubgroupKind::Zt(1)).unwrap().order(), 18);
        let k1 = build_subgroup(&g, &SubgroupKind::K(1)).unwrap();
        assert_eq!(k1.order(), 81);
        for x in k1.elements() {
            for y in k1.elements() {
                assert_eq!(g.mul(x, y), g.mul(y, x));
            }
        }
    }

    #[test]
    fn classification_examples() {
        let r = Ring::new(3, 1, Flavor::Zmod).unwrap();
        assert_eq!(classify_matrix(&r, &[0, 1, 2, 0]), MatrixType::Cuspidal);
        assert_eq!(classify_matrix(&r, &[1, 0, 0, 2]), MatrixType::SplitSemisimple);
        assert_eq!(classify_matrix(&r, &[1, 1, 0, 1]), MatrixType::SplitNonSemisimple);
        assert_eq!(classify_matrix(&r, &[1, 0, 0, 1]), MatrixType::NonRegular);
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let g = grp(3, 1);
        let r = g.ring().clone();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let x = [a, b, c, d];
                        let t = classify_matrix(&r, &x);
                        for h in g.elements().unwrap() {
                            assert_eq!(classify_matrix(&r, &g.conj(h, &x)), t);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn f_exponent_examples() {
        let r4 = Ring::new(3, 4, Flavor::Zmod).unwrap();
        let r3 = Ring::new(3, 3, Flavor::Zmod).unwrap();
        assert_eq!(f_exponent(3, 2, &r4).unwrap(), 2);
        assert_eq!(f_exponent(2, 1, &r4).unwrap(), 1);
        assert_eq!(f_exponent(1, 1, &r3).unwrap(), 1);
        assert!(f_exponent(5, 1, &r4).is_err());
        assert!(f_exponent(1, 2, &r3).is_err());
    }

    #[test]
    fn generators_generate() {
        for fl in [Flavor::Zmod, Flavor::Tpoly] {
            let g = Gl2::new(&Ring::new(3, 2, fl).unwrap()).unwrap();
            assert_eq!(closure(&g, &g.generators(), 10_000).len() as u64, g.order());
        }
    }

    #[test]
    fn inertia_group_matches_centralizer_times_congruence() {
        // l = 2: S_x = C(x~) K^1 for regular x over o_1.
        let g = grp(3, 2);
        for a in [[0u16, 1, 2, 0], [1, 0, 0, 2], [1, 1, 0, 1]] {
            let sa = inertia_subgroup(&g, &a).unwrap();
            let c = centralizer_elements(&g, &a).unwrap();
            let k = build_subgroup(&g, &SubgroupKind::K(1)).unwrap();
            let mut gens = greedy_generators(&g, &c);
            gens.extend(k.generators().iter().copied());
            let prod = Subgroup::generated(&g, "CK", gens, 10_000).unwrap();
            assert_eq!(prod.order(), sa.order());
            assert!(prod.elements().iter().all(|m| sa.contains(&g, m)));
        }
    }
}
