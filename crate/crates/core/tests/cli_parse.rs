use nodal_kernel::cli::parse_expr;
use nodal_kernel::formalcat::{Gen, ObjExpr};
use nodal_kernel::quadric::{QuadricSheaf, SheafKind};
use nodal_kernel::Error;
use proptest::prelude::*;

fn sheaf() -> impl Strategy<Value = QuadricSheaf> {
    let kind = prop_oneof![
        Just(SheafKind::LineBundle),
        Just(SheafKind::Spinor),
        Just(SheafKind::SpinorPrime),
        Just(SheafKind::SpinorDoublePrime),
    ];
    (kind, -4i64..=4).prop_map(|(k, t)| QuadricSheaf::new(k, t))
}

fn gen() -> impl Strategy<Value = Gen> {
    prop_oneof![
        sheaf().prop_map(Gen::Push),
        sheaf().prop_map(Gen::Sheaf),
        sheaf().prop_map(Gen::Pull),
        sheaf().prop_map(Gen::PushPull),
        (-3i64..=3, -3i64..=3).prop_map(|(h, big_h)| Gen::AmbientLine { h, big_h }),
        (prop::sample::select(vec!["T", "E", "Ax"]), -2i64..=2)
            .prop_map(|(n, twist)| Gen::Named { name: n.to_string(), twist }),
    ]
}

fn expr() -> impl Strategy<Value = ObjExpr> {
    let leaf = prop_oneof![gen().prop_map(ObjExpr::gen), Just(ObjExpr::zero())];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), -3i64..=3).prop_map(|(e, m)| e.shift(m)),
            (inner.clone(), -2i64..=2).prop_map(|(e, k)| e.twist(k)),
            (inner.clone(), 1u32..=3).prop_map(|(e, m)| e.times(m)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.plus(&b)),
            (inner.clone(), inner).prop_map(|(a, b)| ObjExpr::cone(&a, &b)),
        ]
    })
}

proptest! {
    #[test]
    fn parse_inverts_render(e in expr()) {
        let text = e.render();
        let parsed = parse_expr(&text).unwrap();
        prop_assert_eq!(parsed, e.normalize(), "{}", text);
    }
}

#[test]
fn example_terms() {
    let t = parse_expr("cone(j*S' -> j*S''[2])").unwrap();
    assert_eq!(t.render(), "cone(j*S' -> j*S''[2])");
    assert_eq!(parse_expr("cone(j*S'[1] -> j*S''[3])").unwrap(), t.shift(1));
    assert_eq!(parse_expr("j*S + j*S").unwrap().render(), "j*S^2");
    assert_eq!(parse_expr("cone(j*O -> j*O)").unwrap(), ObjExpr::zero());
}

#[test]
fn parse_errors_carry_columns() {
    let col = |s: &str| match parse_expr(s) {
        Err(Error::Parse { column, .. }) => column,
        other => panic!("{s}: {other:?}"),
    };
    assert_eq!(col("cone(j*S' ->"), 13);
    assert_eq!(col("j*S[1"), 6);
    assert_eq!(col("j*S ]"), 5);
    assert_eq!(col("OY(2x)"), 5);
}
