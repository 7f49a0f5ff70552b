use nodal_kernel::nodal::{build_context, chi_push, hom_push, verify_dim_detailed, NodalSetup};
use nodal_kernel::quadric::QuadricSheaf;

#[test]
fn every_dimension_verifies() {
    for d in 2..=13 {
        let (report, errors) = verify_dim_detailed(d);
        for item in report.items.iter().filter(|i| !i.pass) {
            eprintln!("d={d} {}: expected {} got {}", item.id, item.expected, item.got);
        }
        assert!(errors.is_empty(), "d = {d}: {errors:?}");
        assert!(report.all_pass, "d = {d}");
    }
}

#[test]
fn euler_characteristic_matches_hom_tables() {
    for d in 2..=9 {
        let setup = NodalSetup::new(d).unwrap();
        let ctx = build_context(d).unwrap();
        let roster = setup.roster();
        for &f in &roster {
            for &g in &roster {
                let h = hom_push(setup.n, f, g).unwrap();
                assert_eq!(h.euler(), chi_push(setup.n, f, g).unwrap());
                let via_ctx = ctx.hom(&nodal_kernel::formalcat::ObjExpr::push(f), &nodal_kernel::formalcat::ObjExpr::push(g)).unwrap();
                assert_eq!(h, via_ctx);
            }
        }
    }
}

#[test]
fn pushed_spinors_carry_a_degree_two_class() {
    for d in (2..=12).step_by(2) {
        let n = (d - 1) as u32;
        let s = QuadricSheaf::s(0);
        assert_eq!(hom_push(n, s, s).unwrap().render(), "C ⊕ C[−2]");
    }
}
