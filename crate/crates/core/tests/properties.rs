//! Randomized invariants of the ring, group, character and algebra layers.

use proptest::prelude::*;

use dgg_core::characters::{borel_pair, det_character, psi, zu_character, UnitCharacters};
use dgg_core::cyclotomic::Cyclotomic;
use dgg_core::formulas;
use dgg_core::group::{classify_matrix, Gl2, Mat2};
use dgg_core::hecke::WedderburnSignature;
use dgg_core::ring::{Elem, Flavor, Ring};

fn ring_strategy() -> impl Strategy<Value = Ring> {
    (prop::sample::select(vec![3u32, 5, 7]), 1u32..=4, prop::bool::ANY)
        .prop_filter_map("ring too large", |(p, ell, poly)| {
            let flavor = if poly { Flavor::Tpoly } else { Flavor::Zmod };
            Ring::new(p, ell, flavor).ok()
        })
}

fn elem(r: &Ring, seed: u64) -> Elem {
    (seed % r.size() as u64) as Elem
}

fn unit_mat(r: &Ring, g: &Gl2, s: [u64; 4]) -> Mat2 {
    let mut m = [elem(r, s[0]), elem(r, s[1]), elem(r, s[2]), elem(r, s[3])];
    if !g.is_invertible(&m) {
        m = [r.add(m[0], 1), m[1], m[2], r.add(m[3], 1)];
        if !g.is_invertible(&m) {
            m = [1, m[1], 0, 1];
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(r in ring_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (elem(&r, a), elem(&r, b), elem(&r, c));
        prop_assert_eq!(r.mul(r.mul(x, y), z), r.mul(x, r.mul(y, z)));
        prop_assert_eq!(r.mul(x, r.add(y, z)), r.add(r.mul(x, y), r.mul(x, z)));
        prop_assert_eq!(r.add(x, r.neg(x)), 0);
        if r.is_unit(x) {
            prop_assert_eq!(r.mul(x, r.inv_unit(x)), 1);
        }
        if x != 0 && y != 0 && r.mul(x, y) != 0 {
            prop_assert_eq!(r.val(r.mul(x, y)), r.val(x) + r.val(y));
        }
    }

    #[test]
    fn projection_is_a_ring_map(r in ring_strategy(), a in any::<u64>(), b in any::<u64>(), i in 1u32..=4) {
        let i = i.min(r.ell());
        let lower = r.with_length(i).unwrap();
        let (x, y) = (elem(&r, a), elem(&r, b));
        let pr = |v| r.project(v, i).unwrap();
        prop_assert_eq!(pr(r.add(x, y)), lower.add(pr(x), pr(y)));
        prop_assert_eq!(pr(r.mul(x, y)), lower.mul(pr(x), pr(y)));
        prop_assert_eq!(pr(r.lift(pr(x), i).unwrap()), pr(x));
    }

    #[test]
    fn additive_character_is_a_homomorphism(r in ring_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let n = r.p().pow(r.ell());
        let (x, y) = (elem(&r, a), elem(&r, b));
        prop_assert_eq!((psi(&r, n, x) + psi(&r, n, y)) % n, psi(&r, n, r.add(x, y)));
    }

    #[test]
    fn determinant_is_multiplicative_and_types_are_conjugation_invariant(
        r in ring_strategy(), s in any::<[u64; 4]>(), u in any::<[u64; 4]>()
    ) {
        let g = Gl2::with_budget(&r, 0).unwrap();
        let (x, y) = (unit_mat(&r, &g, s), unit_mat(&r, &g, u));
        prop_assert_eq!(g.det(&g.mul(&x, &y)), r.mul(g.det(&x), g.det(&y)));
        prop_assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
        prop_assert_eq!(classify_matrix(&r, &g.conj(&y, &x)), classify_matrix(&r, &x));
    }

    #[test]
    fn named_characters_are_multiplicative(
        ell in 1u32..=3, poly in prop::bool::ANY, s in any::<[u64; 8]>(), idx in any::<[usize; 3]>(), t in 0u32..=3
    ) {
        let r = Ring::new(3, ell, if poly { Flavor::Tpoly } else { Flavor::Zmod }).unwrap();
        let g = Gl2::with_budget(&r, 0).unwrap();
        let chars = UnitCharacters::new(&r, g.conductor()).unwrap();
        let k = chars.count();
        let n = g.conductor();
        let (a, b) = (unit_mat(&r, &g, [s[0], s[1], s[2], s[3]]), unit_mat(&r, &g, [s[4], s[5], s[6], s[7]]));
        let det = det_character(&g, &chars, idx[0] % k);
        prop_assert_eq!((det.exp(&a) + det.exp(&b)) % n, det.exp(&g.mul(&a, &b)));
        // upper triangular and scalar-times-unipotent parts of the samples
        let tri = |m: Mat2| {
            let d0 = if r.is_unit(m[0]) { m[0] } else { 1 };
            let d3 = if r.is_unit(m[3]) { m[3] } else { 1 };
            [d0, m[1], 0, d3]
        };
        let (ta, tb) = (tri(a), tri(b));
        let bp = borel_pair(&g, &chars, idx[1] % k, idx[2] % k);
        prop_assert_eq!((bp.exp(&ta) + bp.exp(&tb)) % n, bp.exp(&g.mul(&ta, &tb)));
        let zu = |m: Mat2| [m[0], m[1], 0, m[0]];
        let (za, zb) = (zu(ta), zu(tb));
        let phi = zu_character(&g, &chars, idx[0] % k, t.min(ell));
        prop_assert_eq!((phi.exp(&za) + phi.exp(&zb)) % n, phi.exp(&g.mul(&za, &zb)));
    }

    #[test]
    fn cyclotomic_products_match_complex_values(
        n in prop::sample::select(vec![3u32, 4, 8, 9, 12, 24, 72]),
        a in prop::collection::vec((0u32..72, -5i64..=5), 0..6),
        b in prop::collection::vec((0u32..72, -5i64..=5), 0..6)
    ) {
        let x = Cyclotomic::from_terms(n, &a.iter().map(|&(k, c)| (k % n, c)).collect::<Vec<_>>());
        let y = Cyclotomic::from_terms(n, &b.iter().map(|&(k, c)| (k % n, c)).collect::<Vec<_>>());
        let prod = x.mul(&y).to_complex();
        let want = x.to_complex() * y.to_complex();
        prop_assert!((prod - want).norm() < 1e-9 * (1.0 + want.norm()));
        let norm = x.mul(&x.conj()).to_complex();
        prop_assert!(norm.im.abs() < 1e-9 && norm.re > -1e-9);
        prop_assert_eq!(x.add(&y).sub(&y), x);
    }

    #[test]
    fn signature_dimensions_add(pairs in prop::collection::vec((1usize..6, 0usize..5), 0..5), more in prop::collection::vec((1usize..6, 0usize..5), 0..5)) {
        let a = WedderburnSignature::from_pairs(&pairs);
        let b = WedderburnSignature::from_pairs(&more);
        let m = a.merge(&b);
        prop_assert_eq!(m.dim(), a.dim() + b.dim());
        prop_assert_eq!(m.constituents(), a.constituents() + b.constituents());
        prop_assert_eq!(m.max_block(), a.max_block().max(b.max_block()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_are_consistent(q in prop::sample::select(vec![3u64, 5, 7, 11, 13]), ell in 1u32..=5) {
        // Ind_U psi_t splits over the central characters
        match formulas::group_order(q, ell) {
            Some(order) => prop_assert_eq!(formulas::dgg_dim(q, ell) * formulas::central_count(q, ell), order / q.pow(ell)),
            None => prop_assert!((q as f64).powi(4 * ell as i32 - 3) * ((q - 1) * (q - 1) * (q + 1)) as f64 > u64::MAX as f64),
        }
        if ell >= 2 {
            let rows = formulas::regular_table(q, ell).unwrap();
            // the regular part of V^t_chi, t < l: ss with multiplicity, sns with multiplicity
            let regular = formulas::n_ss(q, ell) * rows[0].dim + formulas::n_sns(q, ell) * rows[1].dim;
            prop_assert!(regular < formulas::dgg_dim(q, ell));
            // every regular irreducible has a central character, split evenly
            for r in &rows {
                prop_assert_eq!(r.count % formulas::central_count(q, ell), 0);
            }
        }
        if (2..=4).contains(&ell) {
            for t in 0..ell {
                let rows = formulas::sns_table(q, ell, t).unwrap();
                let with_mult: u64 = rows.iter().map(|r| r.count * r.mult).sum();
                prop_assert_eq!(with_mult, formulas::n_sns(q, ell));
            }
        }
    }
}
