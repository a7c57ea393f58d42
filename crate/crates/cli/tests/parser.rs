//! Parser round-trip and error-position coverage.

use fractal_calc::ExprNode;
use fractal_calc_cli::parse::{parse_expr, ParseError};
use proptest::prelude::*;

/// The 20-expression corpus exercised for print/parse idempotence.
const CORPUS: [&str; 20] = [
    "E_a(x^{1a})",
    "sin_a(x^{1a}) * cos_a(x^{1a})",
    "x^{2a} + 3",
    "x^{2a} - x^{1a}",
    "1 / (1 + x)",
    "E_a(2 * x)",
    "cos_a(x^{2a})",
    "x * x - 0.5",
    "(x + 1) * (x + 2)",
    "E_a(x^{1a}) / x^{1a}",
    "2.5",
    "x",
    "sin_a(x^{1a} + 1)",
    "x^{3a} * x^{2a}",
    "E_a(x^{1a}) - 1",
    "0.5 * cos_a(x^{1a}) + 0.25 * sin_a(x^{1a})",
    "x / (x + 1) / (x + 2)",
    "E_a(0.5 * x + 1)",
    "x^{10a}",
    "cos_a(x^{1a}) * cos_a(x^{1a}) + sin_a(x^{1a}) * sin_a(x^{1a})",
];

#[test]
fn corpus_round_trips() {
    for src in CORPUS {
        let tree = parse_expr(src).unwrap_or_else(|e| panic!("{src}: {e}"));
        let printed = format!("{tree}");
        let reparsed =
            parse_expr(&printed).unwrap_or_else(|e| panic!("{src} -> {printed}: {e}"));
        assert_eq!(tree, reparsed, "{src} -> {printed}");
        // Idempotence: printing the reparsed tree is a fixed point.
        assert_eq!(printed, format!("{reparsed}"));
    }
}

#[test]
fn malformed_inputs_carry_positions() {
    let cases: [(&str, usize, &str); 8] = [
        ("x^{2a", 5, "'}'"),
        ("", 0, "expression"),
        ("E_a(", 4, "number"),
        ("1 +", 3, "number"),
        ("(x", 2, "')'"),
        ("x^", 2, "'{'"),
        ("x^{a}", 3, "number"),
        ("2 @ 3", 2, "expression"),
    ];
    for (src, offset, expected) in cases {
        let err: ParseError = parse_expr(src).unwrap_err();
        assert_eq!(err.offset, offset, "{src}: {err}");
        assert!(
            err.expected.contains(&expected),
            "{src}: expected set {:?} missing {expected}",
            err.expected
        );
    }
}

#[test]
fn unknown_names_are_rejected() {
    assert!(parse_expr("foo(x)").is_err());
    assert!(parse_expr("sin(x)").is_err());
}

// Tree generator producing exactly the shapes the printer emits: constants
// are non-negative (negation is expressed through the subtraction sugar) and
// compositions never wrap the first monomial.
fn leaf() -> impl Strategy<Value = ExprNode> {
    prop_oneof![
        (0.0_f64..100.0).prop_map(ExprNode::Const),
        Just(ExprNode::Var),
        (1u32..9).prop_map(|k| ExprNode::FracMonomial(k as f64)),
        Just(ExprNode::MlExp),
        Just(ExprNode::SinA),
        Just(ExprNode::CosA),
    ]
}

fn tree() -> impl Strategy<Value = ExprNode> {
    leaf().prop_recursive(4, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| ExprNode::Add(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| ExprNode::Add(
                Box::new(l),
                Box::new(ExprNode::Mul(Box::new(ExprNode::Const(-1.0)), Box::new(r)))
            )),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| ExprNode::Mul(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| ExprNode::Div(Box::new(l), Box::new(r))),
            (prop_oneof![Just(ExprNode::MlExp), Just(ExprNode::SinA), Just(ExprNode::CosA)], inner)
                .prop_filter_map("composition over the bare monomial collapses", |(head, g)| {
                    if g == ExprNode::FracMonomial(1.0) {
                        None
                    } else {
                        Some(ExprNode::Compose(Box::new(head), Box::new(g)))
                    }
                }),
        ]
    })
}

proptest! {
    #[test]
    fn printed_trees_reparse_identically(t in tree()) {
        let printed = format!("{t}");
        let reparsed = parse_expr(&printed).map_err(|e| {
            TestCaseError::fail(format!("{printed}: {e}"))
        })?;
        prop_assert_eq!(&reparsed, &t, "printed: {}", printed);
    }
}
