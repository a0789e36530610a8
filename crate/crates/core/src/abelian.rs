//! Finite abelian groups given by a generating sequence, with a polycyclic
//! normal form and an enumeration of all characters.
//!
//! Each element is written uniquely as `g_1^{e_1} ... g_k^{e_k}` with
//! `0 <= e_i < r_i`, where `r_i` is the order of `g_i` modulo the subgroup
//! generated by the earlier generators. A character with values in the
//! `n`-th roots of unity is a vector of exponents `theta_i` (mod `n`)
//! satisfying `r_i theta_i = sum_j c_ij theta_j` for the relation
//! `g_i^{r_i} = prod_{j<i} g_j^{c_ij}`.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Polycyclic presentation of a finite abelian group with elements of type `T`.
#[derive(Clone, Debug)]
pub struct Polycyclic<T: Copy> {
    gens: Vec<T>,
    orders: Vec<u32>,
    rels: Vec<Vec<u32>>,
    index: HashMap<u64, u32>,
    elems: Vec<T>,
}

impl<T: Copy> Polycyclic<T> {
    /// Builds the presentation from a generating list; redundant generators
    /// are dropped.
    pub fn new(gens: &[T], identity: T, mul: impl Fn(&T, &T) -> T, key: impl Fn(&T) -> u64) -> Polycyclic<T> {
        let mut pc = Polycyclic { gens: Vec::new(), orders: Vec::new(), rels: Vec::new(), index: HashMap::new(), elems: vec![identity] };
        pc.index.insert(key(&identity), 0);
        for g in gens {
            // relative order of g
            let mut r = 1u32;
            let mut x = *g;
            while !pc.index.contains_key(&key(&x)) {
                x = mul(&x, g);
                r += 1;
            }
            if r == 1 {
                continue;
            }
            let rel = pc.coords_of(pc.index[&key(&x)]);
            let size = pc.elems.len() as u32;
            // new elements s * g^e for e = 1..r, indexed s + size * e
            let mut new_elems = Vec::with_capacity((size * r) as usize);
            new_elems.extend_from_slice(&pc.elems);
            let mut power = *g;
            for e in 1..r {
                for (si, s) in pc.elems.iter().enumerate() {
                    let y = mul(s, &power);
                    pc.index.insert(key(&y), si as u32 + size * e);
                    new_elems.push(y);
                }
                power = mul(&power, g);
            }
            pc.elems = new_elems;
            pc.gens.push(*g);
            pc.orders.push(r);
            pc.rels.push(rel);
        }
        pc
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn generators(&self) -> &[T] {
        &self.gens
    }
    pub fn relative_orders(&self) -> &[u32] {
        &self.orders
    }
    /// Elements in normal-form order (mixed radix, first generator fastest).
    pub fn elements(&self) -> &[T] {
        &self.elems
    }

    fn coords_of(&self, mut idx: u32) -> Vec<u32> {
        self.orders
            .iter()
            .map(|&r| {
                let c = idx % r;
                idx /= r;
                c
            })
            .collect()
    }

    /// Exponent vector of an element given by its key.
    pub fn coords(&self, key: u64) -> Option<Vec<u32>> {
        self.index.get(&key).map(|&i| self.coords_of(i))
    }

    /// Position of an element in `elements()`.
    pub fn position(&self, key: u64) -> Option<u32> {
        self.index.get(&key).copied()
    }

    /// All characters with values in the `n`-th roots of unity, as exponent
    /// vectors on the generators, in lexicographic order of the free choices.
    pub fn characters(&self, n: u32) -> Result<Vec<Vec<u32>>> {
        let mut out = vec![Vec::new()];
        for (i, &r) in self.orders.iter().enumerate() {
            if !n.is_multiple_of(r) {
                return Err(Error::BadParam(format!("relative order {r} does not divide {n}")));
            }
            let mut next = Vec::with_capacity(out.len() * r as usize);
            for theta in &out {
                let rhs: u64 = self.rels[i].iter().zip(theta.iter()).map(|(&c, &t)| c as u64 * t as u64).sum::<u64>() % n as u64;
                if !rhs.is_multiple_of(r as u64) {
                    return Err(Error::NoSolution(format!("relation for generator {i} has no solution mod {n}")));
                }
                let base = (rhs / r as u64) as u32;
                for k in 0..r {
                    let mut th = theta.clone();
                    th.push((base + k * (n / r)) % n);
                    next.push(th);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Value exponent of the character `theta` at an element.
    pub fn eval(&self, theta: &[u32], n: u32, key: u64) -> Option<u32> {
        let mut idx = *self.index.get(&key)?;
        let mut e = 0u64;
        for (&r, &t) in self.orders.iter().zip(theta) {
            e += (idx % r) as u64 * t as u64;
            idx /= r;
        }
        Some((e % n as u64) as u32)
    }
}
