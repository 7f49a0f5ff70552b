use nodal_kernel::quadric::{
    brute_force_q2, chi_quadric, cohomology, cone_ring_dim, dual, hom_quadric, QuadricSheaf,
    SheafKind,
};
use nodal_kernel::GradedDim;
use proptest::prelude::*;

fn kinds(n: u32) -> Vec<SheafKind> {
    if n % 2 == 1 {
        vec![SheafKind::LineBundle, SheafKind::Spinor]
    } else {
        vec![
            SheafKind::LineBundle,
            SheafKind::SpinorPrime,
            SheafKind::SpinorDoublePrime,
        ]
    }
}

#[test]
fn serre_duality_degreewise() {
    for n in 1..=12u32 {
        let nn = n as i64;
        for kind in kinds(n) {
            for k in -(nn + 3)..=(nn + 3) {
                let f = QuadricSheaf::new(kind, k);
                let lhs = cohomology(n, f.twisted(-nn)).unwrap().shift(nn).dual();
                let rhs = cohomology(n, dual(n, f)).unwrap();
                assert_eq!(lhs, rhs, "n = {n}, F = {f}");
            }
        }
    }
}

#[test]
fn interior_degrees_vanish() {
    for n in 1..=12u32 {
        let nn = n as i64;
        for kind in kinds(n) {
            for k in -(nn + 3)..=(nn + 3) {
                let h = cohomology(n, QuadricSheaf::new(kind, k)).unwrap();
                assert!(h.degrees().all(|d| d == 0 || d == nn), "n = {n}, k = {k}: {h}");
            }
        }
    }
}

#[test]
fn euler_matches_chi_path_on_all_pairs() {
    for n in 1..=12u32 {
        let nn = n as i64;
        for a in kinds(n) {
            for b in kinds(n) {
                for k in -(nn + 3)..=(nn + 3) {
                    let f = QuadricSheaf::new(a, k);
                    let g = QuadricSheaf::new(b, 0);
                    let h = hom_quadric(n, f, g).unwrap();
                    let chi = chi_quadric(n, f, g).unwrap();
                    assert_eq!(h.euler(), chi, "n = {n}, Hom({f}, {g}) = {h}");
                }
            }
        }
    }
}

#[test]
fn h0_bridge_to_cone_ring() {
    for n in 1..=12u32 {
        for k in -12..=8i64 {
            let h = cohomology(n, QuadricSheaf::o(k)).unwrap();
            assert_eq!(h.get(0), cone_ring_dim(n, k), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn tautological_h0_relation() {
    for m in 0..=5u32 {
        let n = 2 * m + 1;
        let r = 1u64 << (m + 1);
        for k in 0..=10i64 {
            let lhs = cohomology(n, QuadricSheaf::s(k + 1)).unwrap().get(0);
            let o = cohomology(n, QuadricSheaf::o(k)).unwrap().get(0);
            let s = cohomology(n, QuadricSheaf::s(k)).unwrap().get(0);
            assert_eq!(lhs, r * o - s, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn q2_matches_kunneth_on_all_twists() {
    for a in kinds(2) {
        for b in kinds(2) {
            for k in -5..=5i64 {
                for l in -5..=5i64 {
                    let f = QuadricSheaf::new(a, k);
                    let g = QuadricSheaf::new(b, l);
                    assert_eq!(
                        hom_quadric(2, f, g).unwrap(),
                        brute_force_q2(f, g),
                        "Hom({f}, {g})"
                    );
                }
            }
        }
    }
}

#[test]
fn even_spinor_hom_table() {
    let c1 = GradedDim::single(1, 1);
    for n in [2u32, 4, 6, 8] {
        let s1 = QuadricSheaf::s1(0);
        let s2 = QuadricSheaf::s2(0);
        assert_eq!(hom_quadric(n, s1, s1).unwrap(), GradedDim::unit());
        assert_eq!(hom_quadric(n, s2, s2).unwrap(), GradedDim::unit());
        assert!(hom_quadric(n, s1.twisted(1), s1).unwrap().is_zero());
        assert!(hom_quadric(n, s2.twisted(1), s2).unwrap().is_zero());
        assert!(hom_quadric(n, s2, s1).unwrap().is_zero());
        assert!(hom_quadric(n, s1, s2).unwrap().is_zero());
        assert_eq!(hom_quadric(n, s2.twisted(1), s1).unwrap(), c1);
        assert_eq!(hom_quadric(n, s1.twisted(1), s2).unwrap(), c1);
    }
}

proptest! {
    #[test]
    fn hom_is_twist_invariant(n in 1u32..=9, a in 0usize..3, b in 0usize..3, k in -8i64..8, l in -8i64..8, t in -5i64..5) {
        let ks = kinds(n);
        let f = QuadricSheaf::new(ks[a % ks.len()], k);
        let g = QuadricSheaf::new(ks[b % ks.len()], l);
        prop_assert_eq!(
            hom_quadric(n, f, g).unwrap(),
            hom_quadric(n, f.twisted(t), g.twisted(t)).unwrap()
        );
    }

    #[test]
    fn serre_duality_on_homs(n in 1u32..=9, a in 0usize..3, b in 0usize..3, k in -8i64..8) {
        // Hom(F, G) = Hom(G, F(-n))^∨[-n]
        let ks = kinds(n);
        let f = QuadricSheaf::new(ks[a % ks.len()], k);
        let g = QuadricSheaf::new(ks[b % ks.len()], 0);
        let nn = n as i64;
        let lhs = hom_quadric(n, f, g).unwrap();
        let rhs = hom_quadric(n, g, f.twisted(-nn)).unwrap().dual().shift(-nn);
        prop_assert_eq!(lhs, rhs);
    }
}
