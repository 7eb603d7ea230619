//! Random expression sources and an independent shunting-yard evaluator.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

const FUNCS: [&str; 11] = [
    "sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "atan", "abs",
];

fn space<R: Rng>(rng: &mut R) -> &'static str {
    [" ", "", "", "  "][rng.gen_range(0..4)]
}

fn number<R: Rng>(rng: &mut R) -> String {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(0..10).to_string(),
        1 => format!("{:.3}", rng.gen_range(0.0..5.0)),
        2 => format!("{}e-{}", rng.gen_range(1..9), rng.gen_range(1..3)),
        _ => format!("{}.{}", rng.gen_range(0..4), rng.gen_range(0..100)),
    }
}

fn atom<R: Rng>(rng: &mut R, depth: u32) -> String {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..6) {
            0 | 1 => number(rng),
            2 => "u".into(),
            3 => "v".into(),
            4 => "z".into(),
            _ => ["pi", "e", "c1"][rng.gen_range(0..3)].into(),
        };
    }
    match rng.gen_range(0..2) {
        0 => format!("({}{}{})", space(rng), expr(rng, depth - 1), space(rng)),
        _ => {
            let f = FUNCS[rng.gen_range(0..FUNCS.len())];
            format!("{f}({})", expr(rng, depth - 1))
        }
    }
}

fn factor<R: Rng>(rng: &mut R, depth: u32) -> String {
    match rng.gen_range(0..6) {
        0 if depth > 0 => format!("-{}{}", space(rng), factor(rng, depth - 1)),
        1 if depth > 0 => {
            // small exponents keep most samples finite
            let exp = match rng.gen_range(0..3) {
                0 => rng.gen_range(0..4).to_string(),
                1 => format!("-{}", rng.gen_range(1..3)),
                _ => format!("({})", factor(rng, depth - 1)),
            };
            format!("{}{}^{}{}", atom(rng, depth - 1), space(rng), space(rng), exp)
        }
        _ => atom(rng, depth),
    }
}

fn term<R: Rng>(rng: &mut R, depth: u32) -> String {
    let mut s = factor(rng, depth);
    for _ in 0..rng.gen_range(0..3) {
        let op = if rng.gen_bool(0.5) { "*" } else { "/" };
        s = format!("{s}{}{op}{}{}", space(rng), space(rng), factor(rng, depth.saturating_sub(1)));
    }
    s
}

/// A random well-formed source string of nesting depth at most `depth`.
pub fn expr<R: Rng>(rng: &mut R, depth: u32) -> String {
    let mut s = term(rng, depth);
    for _ in 0..rng.gen_range(0..3) {
        let op = if rng.gen_bool(0.5) { "+" } else { "-" };
        s = format!("{s}{}{op}{}{}", space(rng), space(rng), term(rng, depth.saturating_sub(1)));
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Op(char),
    Open,
    Close,
}

fn lex(src: &str) -> Option<Vec<Tok>> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && (b[j] as char).is_ascii_digit() {
                    i = j;
                    while i < b.len() && (b[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Tok::Num(src[start..i].parse().ok()?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Name(src[start..i].to_string()));
        } else {
            out.push(match c {
                '(' => Tok::Open,
                ')' => Tok::Close,
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                _ => return None,
            });
            i += 1;
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Stack {
    Op(char),
    Neg,
    Func(String),
    Open,
}

fn prec(s: &Stack) -> u8 {
    match s {
        Stack::Op('+') | Stack::Op('-') => 1,
        Stack::Op('*') | Stack::Op('/') => 2,
        Stack::Neg => 3,
        Stack::Op('^') => 4,
        _ => 0,
    }
}

#[derive(Clone, Debug)]
enum Rpn {
    Num(f64),
    Op(char),
    Neg,
    Func(String),
}

/// Reverse Polish form; unary minus binds looser than `^`, which is right
/// associative.
fn to_rpn(tokens: &[Tok], vars: &BTreeMap<String, f64>) -> Option<Vec<Rpn>> {
    let mut out = Vec::new();
    let mut stack: Vec<Stack> = Vec::new();
    let mut expect_operand = true;
    for (k, t) in tokens.iter().enumerate() {
        match t {
            Tok::Num(x) => {
                out.push(Rpn::Num(*x));
                expect_operand = false;
            }
            Tok::Name(n) if tokens.get(k + 1) == Some(&Tok::Open) => {
                stack.push(Stack::Func(n.clone()));
            }
            Tok::Name(n) => {
                out.push(Rpn::Num(*vars.get(n)?));
                expect_operand = false;
            }
            Tok::Op('-') if expect_operand => stack.push(Stack::Neg),
            Tok::Op(c) => {
                let me = Stack::Op(*c);
                let right = *c == '^';
                while let Some(top) = stack.last() {
                    let pop = if right { prec(top) > prec(&me) } else { prec(top) >= prec(&me) };
                    if !pop || matches!(top, Stack::Open | Stack::Func(_)) {
                        break;
                    }
                    out.push(match stack.pop()? {
                        Stack::Op(o) => Rpn::Op(o),
                        Stack::Neg => Rpn::Neg,
                        _ => unreachable!(),
                    });
                }
                stack.push(me);
                expect_operand = true;
            }
            Tok::Open => {
                stack.push(Stack::Open);
                expect_operand = true;
            }
            Tok::Close => {
                loop {
                    match stack.pop()? {
                        Stack::Open => break,
                        Stack::Op(o) => out.push(Rpn::Op(o)),
                        Stack::Neg => out.push(Rpn::Neg),
                        Stack::Func(_) => return None,
                    }
                }
                if let Some(Stack::Func(_)) = stack.last() {
                    if let Some(Stack::Func(f)) = stack.pop() {
                        out.push(Rpn::Func(f));
                    }
                }
                expect_operand = false;
            }
        }
    }
    while let Some(s) = stack.pop() {
        out.push(match s {
            Stack::Op(o) => Rpn::Op(o),
            Stack::Neg => Rpn::Neg,
            _ => return None,
        });
    }
    Some(out)
}

fn call(f: &str, x: f64) -> f64 {
    match f {
        "sin" => x.sin(),
        "cos" => x.cos(),
        "tan" => x.tan(),
        "exp" => x.exp(),
        "log" => x.ln(),
        "sqrt" => x.sqrt(),
        "sinh" => x.sinh(),
        "cosh" => x.cosh(),
        "tanh" => x.tanh(),
        "atan" => x.atan(),
        "abs" => x.abs(),
        _ => f64::NAN,
    }
}

/// Evaluates `src` with IEEE semantics; `None` if the source is malformed or
/// any intermediate value is not finite.
pub fn shunting_yard(src: &str, vars: &BTreeMap<String, f64>) -> Option<f64> {
    let rpn = to_rpn(&lex(src)?, vars)?;
    let mut st: Vec<f64> = Vec::new();
    for item in rpn {
        let r = match item {
            Rpn::Num(x) => x,
            Rpn::Neg => -st.pop()?,
            Rpn::Func(f) => call(&f, st.pop()?),
            Rpn::Op(o) => {
                let b = st.pop()?;
                let a = st.pop()?;
                match o {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' => a / b,
                    _ => a.powf(b),
                }
            }
        };
        if !r.is_finite() {
            return None;
        }
        st.push(r);
    }
    if st.len() == 1 {
        st.pop()
    } else {
        None
    }
}

/// Variable and constant bindings for the oracle.
pub fn bindings(u: f64, v: f64, z: f64, c1: f64) -> BTreeMap<String, f64> {
    [
        ("u", u),
        ("v", v),
        ("z", z),
        ("c1", c1),
        ("pi", std::f64::consts::PI),
        ("e", std::f64::consts::E),
    ]
    .into_iter()
    .map(|(k, x)| (k.to_string(), x))
    .collect()
}
