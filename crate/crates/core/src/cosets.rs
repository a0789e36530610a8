//! Left cosets `gH` and double cosets `K\G/H`.
//!
//! A coset space stores one representative per coset and can `locate` any
//! group element `g`, returning the coset index `i` and `h` in `H` with
//! `g = rep_i h`. Double cosets are the orbits of `K` acting by left
//! multiplication on the cosets; a breadth-first sweep over generators of
//! `K` records a transporter for each coset, and every edge closing a cycle
//! produces a Schreier generator of the stabilizer, which decides whether a
//! pair of characters is compatible on `K ∩ gHg^{-1}`.

use std::collections::{HashMap, VecDeque};

use crate::characters::LinChar;
use crate::error::{Error, Result};
use crate::group::{Gl2, Mat2, Subgroup};
use crate::ring::Elem;

/// Coset space `G/H`.
pub trait CosetSpace: Send + Sync {
    fn len(&self) -> usize;
    fn rep(&self, i: usize) -> &Mat2;
    /// `(i, h)` with `g = rep_i h`.
    fn locate(&self, g: &Mat2) -> (usize, Mat2);
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Diagonal part allowed in a subgroup `D U` of the Borel subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BorelShape {
    /// `U`.
    Unipotent,
    /// Mirabolic `P_2`: diagonal `(x, 1)`.
    Mirabolic,
    /// `Z^t U`: diagonal `(x, w)` with `w/x` in `1 + w^t o`.
    ZtU(u32),
}

/// Cosets of a subgroup `D U` of `B` by a canonical form on columns; works
/// without enumerating `G`.
pub struct BorelCosets {
    g: Gl2,
    shape: BorelShape,
    reps: Vec<Mat2>,
    index: HashMap<u64, u32>,
}

impl BorelCosets {
    pub fn new(g: &Gl2, shape: BorelShape) -> Result<BorelCosets> {
        if let BorelShape::ZtU(t) = shape {
            if t > g.ring().ell() {
                return Err(Error::BadParam(format!("t = {t} exceeds l")));
            }
        }
        let mut cs = BorelCosets { g: g.clone(), shape, reps: Vec::new(), index: HashMap::new() };
        let gens = g.generators();
        let id = cs.canonical(&g.identity()).0;
        cs.index.insert(g.key(&id), 0);
        cs.reps.push(id);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in &gens {
                let (c, _) = cs.canonical(&g.mul(s, &cs.reps[i]));
                let k = g.key(&c);
                if !cs.index.contains_key(&k) {
                    cs.index.insert(k, cs.reps.len() as u32);
                    cs.reps.push(c);
                    queue.push_back(cs.reps.len() - 1);
                }
            }
        }
        Ok(cs)
    }

    pub fn shape(&self) -> BorelShape {
        self.shape
    }

    /// Canonical representative `c` of `gH` and `h` in `H` with `g h = c`.
    pub fn canonical(&self, m: &Mat2) -> (Mat2, Mat2) {
        let r = self.g.ring();
        let [a, b, c, d] = *m;
        // pivot row of the first column
        let (p_row, col1_p, col1_o, col2_p, col2_o) = if r.is_unit(c) { (1, c, a, d, b) } else { (0, a, c, b, d) };
        let x = match self.shape {
            BorelShape::Unipotent => 1,
            _ => r.inv_unit(col1_p),
        };
        // remaining entry of the second column after clearing the pivot row
        let inv_p = r.inv_unit(col1_p);
        let e = r.sub(col2_o, r.mul(col1_o, r.mul(col2_p, inv_p)));
        let w = match self.shape {
            BorelShape::Unipotent | BorelShape::Mirabolic => 1,
            BorelShape::ZtU(t) => {
                let ex = r.mul(e, x);
                let target: Elem = if t == 0 { 1 } else { r.project(ex, t).unwrap() };
                // w = x s with s = target / (e x), which lies in 1 + w^t o
                r.mul(x, r.mul(target, r.inv_unit(ex)))
            }
        };
        let u = r.neg(r.mul(col2_p, r.mul(w, inv_p)));
        let h = [x, u, 0, w];
        let canon = self.g.mul(m, &h);
        debug_assert!(if p_row == 1 { canon[3] == 0 } else { canon[1] == 0 });
        (canon, h)
    }
}

impl CosetSpace for BorelCosets {
    fn len(&self) -> usize {
        self.reps.len()
    }
    fn rep(&self, i: usize) -> &Mat2 {
        &self.reps[i]
    }
    fn locate(&self, m: &Mat2) -> (usize, Mat2) {
        let (c, h) = self.canonical(m);
        let i = self.index[&self.g.key(&c)] as usize;
        (i, self.g.inv(&h))
    }
}

/// Cosets of an arbitrary subgroup of an enumerated group, via a coset-id
/// table over all elements.
pub struct TableCosets {
    g: Gl2,
    reps: Vec<Mat2>,
    coset_of: Vec<u32>,
}

impl TableCosets {
    pub fn new(g: &Gl2, h: &Subgroup) -> Result<TableCosets> {
        let elems = g.elements()?;
        let mut coset_of = vec![u32::MAX; elems.len()];
        let mut reps = Vec::new();
        for (i, x) in elems.iter().enumerate() {
            if coset_of[i] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(*x);
            for y in h.elements() {
                let j = g.index_of(&g.mul(x, y)).expect("product outside G");
                coset_of[j] = id;
            }
        }
        Ok(TableCosets { g: g.clone(), reps, coset_of })
    }
}

impl CosetSpace for TableCosets {
    fn len(&self) -> usize {
        self.reps.len()
    }
    fn rep(&self, i: usize) -> &Mat2 {
        &self.reps[i]
    }
    fn locate(&self, m: &Mat2) -> (usize, Mat2) {
        let i = self.coset_of[self.g.index_of(m).expect("element outside G")] as usize;
        (i, self.g.mul(&self.g.inv(&self.reps[i]), m))
    }
}

/// Cosets `L/H` for subgroups `H <= L` given by their elements; works
/// without enumerating `G`.
pub struct SubsetCosets {
    g: Gl2,
    reps: Vec<Mat2>,
    coset_of: HashMap<u64, u32>,
}

impl SubsetCosets {
    pub fn new(g: &Gl2, l: &Subgroup, h: &Subgroup) -> Result<SubsetCosets> {
        let mut coset_of = HashMap::with_capacity(l.order());
        let mut reps = Vec::new();
        for x in l.elements() {
            if coset_of.contains_key(&g.key(x)) {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(*x);
            for y in h.elements() {
                let k = g.key(&g.mul(x, y));
                if coset_of.insert(k, id).is_some() {
                    return Err(Error::NotASubgroup(format!("{} is not contained in {}", h.name, l.name)));
                }
            }
        }
        if coset_of.len() != l.order() {
            return Err(Error::NotASubgroup(format!("{} is not contained in {}", h.name, l.name)));
        }
        Ok(SubsetCosets { g: g.clone(), reps, coset_of })
    }
}

impl CosetSpace for SubsetCosets {
    fn len(&self) -> usize {
        self.reps.len()
    }
    fn rep(&self, i: usize) -> &Mat2 {
        &self.reps[i]
    }
    fn locate(&self, m: &Mat2) -> (usize, Mat2) {
        let i = *self.coset_of.get(&self.g.key(m)).expect("element outside L") as usize;
        (i, self.g.mul(&self.g.inv(&self.reps[i]), m))
    }
}

/// Double cosets `K \ G / H`, with character-compatibility data for a pair
/// `(phi_k, phi_h)` when supplied.
pub struct DoubleCosets {
    /// Representative of each double coset (the first coset reached).
    pub reps: Vec<Mat2>,
    /// Number of left cosets `gH` in each double coset.
    pub sizes: Vec<usize>,
    /// Double coset of each left coset.
    pub orbit_of: Vec<u32>,
    /// Transporter `k_i` in `K` with `rep_i H = k_i g_d H`.
    pub transporter: Vec<Mat2>,
    /// Whether `phi_k(z) = phi_h(g^{-1} z g)` on `K ∩ g H g^{-1}`.
    pub supported: Vec<bool>,
}

impl DoubleCosets {
    /// Orbits of `K` (given by generators) on the coset space.
    pub fn compute(g: &Gl2, cosets: &dyn CosetSpace, k_gens: &[Mat2], chars: Option<(&LinChar, &LinChar)>) -> DoubleCosets {
        let n = cosets.len();
        let mut orbit_of = vec![u32::MAX; n];
        let mut transporter = vec![g.identity(); n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut supported = Vec::new();
        for start in 0..n {
            if orbit_of[start] != u32::MAX {
                continue;
            }
            let d = reps.len() as u32;
            let gd = *cosets.rep(start);
            let gd_inv = g.inv(&gd);
            reps.push(gd);
            orbit_of[start] = d;
            transporter[start] = g.identity();
            let mut ok = true;
            let mut count = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for s in k_gens {
                    let k_new = g.mul(s, &transporter[i]);
                    let (j, _) = cosets.locate(&g.mul(s, cosets.rep(i)));
                    if orbit_of[j] == u32::MAX {
                        orbit_of[j] = d;
                        transporter[j] = k_new;
                        count += 1;
                        queue.push_back(j);
                    } else if ok {
                        if let Some((pk, ph)) = chars {
                            // Schreier generator z = k_j^{-1} k_new in K ∩ g H g^{-1}
                            let z = g.mul(&g.inv(&transporter[j]), &k_new);
                            let zh = g.mul(&g.mul(&gd_inv, &z), &gd);
                            if pk.exp(&z) != ph.exp(&zh) {
                                ok = false;
                            }
                        }
                    }
                }
            }
            sizes.push(count);
            supported.push(ok);
        }
        DoubleCosets { reps, sizes, orbit_of, transporter, supported }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
    pub fn supported_count(&self) -> usize {
        self.supported.iter().filter(|&&s| s).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{zu_character, UnitCharacters};
    use crate::group::{build_subgroup, SubgroupKind};
    use crate::ring::{Flavor, Ring};

    fn grp(p: u32, ell: u32, fl: Flavor) -> Gl2 {
        Gl2::new(&Ring::new(p, ell, fl).unwrap()).unwrap()
    }

    #[test]
    fn borel_cosets_partition_the_group() {
        for fl in [Flavor::Zmod, Flavor::Tpoly] {
            let g = grp(3, 2, fl);
            for (shape, kind) in [
                (BorelShape::Unipotent, SubgroupKind::U),
                (BorelShape::Mirabolic, SubgroupKind::P2),
                (BorelShape::ZtU(0), SubgroupKind::B),
                (BorelShape::ZtU(1), SubgroupKind::ZtU(1)),
                (BorelShape::ZtU(2), SubgroupKind::ZU),
            ] {
                let h = build_subgroup(&g, &kind).unwrap();
                let cs = BorelCosets::new(&g, shape).unwrap();
                assert_eq!(cs.len() as u64 * h.order() as u64, g.order());
                for m in g.elements().unwrap().iter().step_by(7) {
                    let (i, hh) = cs.locate(m);
                    assert!(h.contains(&g, &hh));
                    assert_eq!(g.mul(cs.rep(i), &hh), *m);
                }
            }
        }
    }

    #[test]
    fn borel_cosets_without_enumeration() {
        let r = Ring::new(3, 4, Flavor::Zmod).unwrap();
        let g = Gl2::new(&r).unwrap();
        let cs = BorelCosets::new(&g, BorelShape::ZtU(4)).unwrap();
        assert_eq!(cs.len(), 5832);
    }

    #[test]
    fn bruhat_double_cosets() {
        let g = grp(3, 1, Flavor::Zmod);
        let b = build_subgroup(&g, &SubgroupKind::B).unwrap();
        let cs = BorelCosets::new(&g, BorelShape::ZtU(0)).unwrap();
        let dc = DoubleCosets::compute(&g, &cs, b.generators(), None);
        assert_eq!(dc.len(), 2);
        let g2 = grp(3, 2, Flavor::Zmod);
        let b2 = build_subgroup(&g2, &SubgroupKind::B).unwrap();
        let cs2 = BorelCosets::new(&g2, BorelShape::ZtU(0)).unwrap();
        // B\G/B has l + 1 elements
        assert_eq!(DoubleCosets::compute(&g2, &cs2, b2.generators(), None).len(), 3);
    }

    #[test]
    fn table_and_canonical_cosets_agree_on_double_coset_counts() {
        let g = grp(3, 2, Flavor::Zmod);
        let zu = build_subgroup(&g, &SubgroupKind::ZU).unwrap();
        let tc = TableCosets::new(&g, &zu).unwrap();
        let bc = BorelCosets::new(&g, BorelShape::ZtU(2)).unwrap();
        let ch = UnitCharacters::new(g.ring(), g.conductor()).unwrap();
        for t in 0..=2 {
            let mut total = 0;
            for c in 0..ch.count() {
                let phi = zu_character(&g, &ch, c, t);
                let a = DoubleCosets::compute(&g, &tc, zu.generators(), Some((&phi, &phi)));
                let b = DoubleCosets::compute(&g, &bc, zu.generators(), Some((&phi, &phi)));
                assert_eq!(a.len(), b.len());
                assert_eq!(a.supported_count(), b.supported_count());
                assert_eq!(a.sizes.iter().sum::<usize>(), 72);
                total += a.supported_count();
            }
            if t == 2 {
                // nine regular constituents per central character, 54 overall
                assert_eq!(total, 54);
            }
        }
    }
}
