mod common {
    pub mod expr_oracle;
}

use common::expr_oracle::{bindings, expr, shunting_yard};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerok_core::expr::{eval, parse_str, tokenize, Env, ExprError};

const CORPUS: usize = 1000;

fn corpus(seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..CORPUS).map(|_| expr(&mut rng, 4)).collect()
}

#[test]
fn printed_form_reparses_to_the_same_tree() {
    for src in corpus(11) {
        let e = parse_str(&src).unwrap_or_else(|err| panic!("`{src}`: {err}"));
        let printed = e.to_string();
        let back = parse_str(&printed).unwrap_or_else(|err| panic!("`{printed}`: {err}"));
        assert_eq!(back, e, "round trip of `{src}` via `{printed}`");
    }
}

#[test]
fn evaluator_agrees_with_shunting_yard_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut compared = 0;
    for src in corpus(13) {
        let (u, v, z) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let c1 = 0.1;
        let env = Env::at(u, v, z).with_constants([("c1", c1)]);
        let ours = eval(&parse_str(&src).unwrap(), &env);
        let oracle = shunting_yard(&src, &bindings(u, v, z, c1));
        match (ours, oracle) {
            (Ok(a), Some(b)) => {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "`{src}`: {a} vs {b}");
                compared += 1;
            }
            (Err(ExprError::Eval { .. }), None) => {}
            (a, b) => panic!("`{src}` at ({u}, {v}, {z}): evaluator {a:?}, oracle {b:?}"),
        }
    }
    assert!(compared >= CORPUS / 2, "only {compared} finite samples");
}

#[test]
fn error_offsets() {
    let lex = |s: &str| tokenize(s).unwrap_err();
    assert_eq!(lex("1 @ 2"), ExprError::Lex { offset: 2 });
    assert_eq!(lex("u + $"), ExprError::Lex { offset: 4 });

    let parse_offset = |s: &str| match parse_str(s) {
        Err(ExprError::Parse { offset, .. }) => offset,
        other => panic!("`{s}`: expected parse error, got {other:?}"),
    };
    assert_eq!(parse_offset("sin()"), 4);
    assert_eq!(parse_offset("1 +"), 3);
    assert_eq!(parse_offset("(1 + 2"), 6);
    assert_eq!(parse_offset("1 2"), 2);
    assert_eq!(parse_offset("2 * * u"), 4);
    assert!(matches!(
        parse_str("foo(1)"),
        Err(ExprError::UnknownFunction { offset: 0, .. })
    ));

    let env = Env::default();
    for s in ["sqrt(-1)", "log(0)", "1/(z-z)"] {
        assert!(matches!(eval(&parse_str(s).unwrap(), &env), Err(ExprError::Eval { .. })), "{s}");
    }
}

#[test]
fn documented_examples() {
    let v = |s: &str| eval(&parse_str(s).unwrap(), &Env::default()).unwrap();
    assert_eq!(v("2^3^2"), 512.0);
    assert_eq!(v("-2^2"), -4.0);
    assert_eq!(v("1+2*3"), 7.0);
    assert_eq!(v("2^-1"), 0.5);
}
