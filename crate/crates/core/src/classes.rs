//! Conjugacy classes of an enumerated group (all of `G` or a stored
//! subgroup), with class sizes, inverse classes and power maps.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Gl2, Mat2, Subgroup};

/// An enumerated finite group: `G` itself or a stored subgroup of it.
#[derive(Clone)]
pub struct FiniteGroup {
    g: Gl2,
    sub: Option<Subgroup>,
}

impl FiniteGroup {
    pub fn whole(g: &Gl2) -> Result<FiniteGroup> {
        g.elements()?;
        Ok(FiniteGroup { g: g.clone(), sub: None })
    }
    pub fn subgroup(g: &Gl2, h: &Subgroup) -> FiniteGroup {
        FiniteGroup { g: g.clone(), sub: Some(h.clone()) }
    }
    pub fn gl2(&self) -> &Gl2 {
        &self.g
    }
    pub fn name(&self) -> String {
        self.sub.as_ref().map(|h| h.name.clone()).unwrap_or_else(|| "G".into())
    }
    pub fn elements(&self) -> &[Mat2] {
        match &self.sub {
            Some(h) => h.elements(),
            None => self.g.elements().expect("enumerated"),
        }
    }
    pub fn order(&self) -> usize {
        self.elements().len()
    }
    pub fn position(&self, m: &Mat2) -> Option<usize> {
        match &self.sub {
            Some(h) => h.position(&self.g, m),
            None => self.g.index_of(m),
        }
    }
    pub fn generators(&self) -> Vec<Mat2> {
        match &self.sub {
            Some(h) => h.generators().to_vec(),
            None => self.g.generators(),
        }
    }
}

/// Conjugacy classes of a finite group.
pub struct ClassData {
    pub group: FiniteGroup,
    class_of: Vec<u32>,
    pub reps: Vec<Mat2>,
    pub sizes: Vec<u64>,
    /// Class of the inverse of each class.
    pub inverse: Vec<u32>,
    /// Order of the elements in each class.
    pub elem_orders: Vec<u32>,
}

impl ClassData {
    pub fn new(group: FiniteGroup) -> Arc<ClassData> {
        let g = group.gl2().clone();
        let elems = group.elements();
        let gens = group.generators();
        let gens_inv: Vec<Mat2> = gens.iter().map(|s| g.inv(s)).collect();
        let mut class_of = vec![u32::MAX; elems.len()];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for i in 0..elems.len() {
            if class_of[i] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(elems[i]);
            class_of[i] = c;
            let mut size = 1u64;
            let mut queue = VecDeque::from([elems[i]]);
            while let Some(x) = queue.pop_front() {
                for (s, si) in gens.iter().zip(&gens_inv) {
                    let y = g.mul(&g.mul(s, &x), si);
                    let j = group.position(&y).expect("conjugate outside the group");
                    if class_of[j] == u32::MAX {
                        class_of[j] = c;
                        size += 1;
                        queue.push_back(y);
                    }
                }
            }
            sizes.push(size);
        }
        let mut cd = ClassData { group, class_of, reps, sizes, inverse: Vec::new(), elem_orders: Vec::new() };
        cd.inverse = cd.reps.iter().map(|r| cd.class_of_mat(&g.inv(r))).collect();
        cd.elem_orders = cd.reps.iter().map(|r| g.element_order(r) as u32).collect();
        Arc::new(cd)
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }
    pub fn order(&self) -> u64 {
        self.group.order() as u64
    }
    pub fn gl2(&self) -> &Gl2 {
        self.group.gl2()
    }
    /// Class of the element at position `i` in the group's element list.
    pub fn class_at(&self, i: usize) -> u32 {
        self.class_of[i]
    }
    pub fn class_of_mat(&self, m: &Mat2) -> u32 {
        self.class_of[self.group.position(m).expect("element outside the group")]
    }
    pub fn try_class_of_mat(&self, m: &Mat2) -> Result<u32> {
        self.group.position(m).map(|i| self.class_of[i]).ok_or(Error::OutOfDomain)
    }
    /// Class of `g^k` for `g` in class `c`.
    pub fn power(&self, c: usize, k: u64) -> u32 {
        let g = self.gl2();
        let mut acc = g.identity();
        let mut base = self.reps[c];
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = g.mul(&acc, &base);
            }
            base = g.mul(&base, &base);
            e >>= 1;
        }
        self.class_of_mat(&acc)
    }
    pub fn identity_class(&self) -> usize {
        self.class_of_mat(&self.gl2().identity()) as usize
    }
    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.elem_orders.iter().fold(1u64, |a, &b| crate::cyclotomic::lcm(a, b as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_subgroup, SubgroupKind};
    use crate::ring::{Flavor, Ring};

    #[test]
    fn class_counts() {
        let g = Gl2::new(&Ring::new(3, 1, Flavor::Zmod).unwrap()).unwrap();
        let cd = ClassData::new(FiniteGroup::whole(&g).unwrap());
        assert_eq!(cd.count(), 8);
        assert_eq!(cd.sizes.iter().sum::<u64>(), 48);
        assert_eq!(cd.sizes.iter().filter(|&&s| s == 1).count(), 2);
        // brute-force oracle: classes via all conjugates
        let elems = g.elements().unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for x in elems {
            if seen.contains(&g.key(x)) {
                continue;
            }
            count += 1;
            for h in elems {
                seen.insert(g.key(&g.conj(h, x)));
            }
        }
        assert_eq!(count, 8);
        let b = build_subgroup(&g, &SubgroupKind::B).unwrap();
        let cb = ClassData::new(FiniteGroup::subgroup(&g, &b));
        assert_eq!(cb.sizes.iter().sum::<u64>(), 12);
    }

    #[test]
    fn power_maps_and_inverses() {
        let g = Gl2::new(&Ring::new(3, 2, Flavor::Zmod).unwrap()).unwrap();
        let cd = ClassData::new(FiniteGroup::whole(&g).unwrap());
        assert_eq!(cd.sizes.iter().sum::<u64>(), 3888);
        for c in 0..cd.count() {
            assert_eq!(cd.power(c, 1) as usize, c);
            assert_eq!(cd.power(c, cd.elem_orders[c] as u64 - 1), cd.inverse[c]);
            assert_eq!(cd.power(c, cd.elem_orders[c] as u64) as usize, cd.identity_class());
        }
    }
}
