//! Text syntax for monomials, shared by certificate files and the CLI.
//!
//! ```text
//! -1 * U1^-1 U2 V1^-1 V2^-1
//! exp(i*pi*1/3) * V2 U1
//! +i * I
//! ```
//!
//! An optional leading phase (`+1`, `-1`, `+i`, `-i`, or `exp(i*pi*p/q)`),
//! an optional `*`, then generator powers `U<dof>` / `V<dof>` with optional
//! `^<int>`, dofs numbered from 1. Factors are multiplied in the order
//! written, so non-canonical input picks up the reordering phase. `I`
//! denotes the identity. The printer always emits the canonical order.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monomial::{monomial_mul, Generator, WeylMonomial};
use crate::phase::{parse_rational, PhaseExp};
use crate::system::DofSystem;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        self.skip_ws();
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected {s:?}")))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let end = rest.find(|c| !f(c)).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            pos: self.pos,
            msg: msg.into(),
        }
    }
}

fn parse_phase(cur: &mut Cursor<'_>) -> Result<Option<PhaseExp>> {
    if cur.eat("exp(") {
        cur.expect("i")?;
        cur.expect("*")?;
        cur.expect("pi")?;
        cur.expect("*")?;
        cur.skip_ws();
        let start = cur.pos;
        let body = cur.take_while(|c| c != ')');
        let q = parse_rational(body).ok_or_else(|| Error::Parse {
            input: cur.src.to_string(),
            pos: start,
            msg: "expected rational exponent p/q".into(),
        })?;
        cur.expect(")")?;
        return Ok(Some(PhaseExp::new(q)));
    }
    let start = cur.pos;
    let token = cur.take_while(|c| matches!(c, '+' | '-' | '0'..='9' | 'i'));
    let phase = match token {
        "" => return Ok(None),
        "1" | "+1" => PhaseExp::one(),
        "-1" => PhaseExp::minus_one(),
        "i" | "+i" => PhaseExp::i(),
        "-i" => PhaseExp::from_ratio(3, 2),
        _ => {
            cur.pos = start;
            return Err(cur.err(format!("unsupported scalar {token:?}")));
        }
    };
    Ok(Some(phase))
}

fn parse_int(cur: &mut Cursor<'_>) -> Result<BigInt> {
    cur.skip_ws();
    let paren = cur.eat("(");
    cur.skip_ws();
    let start = cur.pos;
    let sign = if cur.eat("-") {
        -1
    } else {
        cur.eat("+");
        1
    };
    let digits = cur.take_while(|c| c.is_ascii_digit());
    if digits.is_empty() {
        cur.pos = start;
        return Err(cur.err("expected integer"));
    }
    let value: BigInt = digits.parse::<BigInt>().expect("ascii digits") * sign;
    if paren {
        cur.expect(")")?;
    }
    Ok(value)
}

/// Parses the text syntax into the canonical monomial of `system`.
pub fn parse_monomial(system: &Arc<DofSystem>, text: &str) -> Result<WeylMonomial> {
    let mut cur = Cursor { src: text, pos: 0 };
    cur.skip_ws();
    let phase = parse_phase(&mut cur)?;
    let mut acc = WeylMonomial::scalar(system, phase.clone().unwrap_or_else(PhaseExp::one));
    let mut factors = 0usize;
    loop {
        cur.skip_ws();
        if cur.eat("*") {
            continue;
        }
        let Some(c) = cur.rest().chars().next() else {
            break;
        };
        let gen = match c {
            'U' => Generator::U,
            'V' => Generator::V,
            'I' => {
                cur.pos += 1;
                factors += 1;
                continue;
            }
            _ => return Err(cur.err(format!("unexpected {c:?}"))),
        };
        cur.pos += 1;
        let start = cur.pos;
        let dof: usize = cur
            .take_while(|c| c.is_ascii_digit())
            .parse()
            .map_err(|_| Error::Parse {
                input: text.to_string(),
                pos: start,
                msg: "expected dof index".into(),
            })?;
        if dof == 0 || dof > system.n_dof() {
            cur.pos = start;
            return Err(cur.err(format!("dof index {dof} outside 1..={}", system.n_dof())));
        }
        let power = if cur.eat("^") {
            parse_int(&mut cur)?
        } else {
            BigInt::one()
        };
        let mut m = vec![BigInt::zero(); system.n_dof()];
        let mut n = m.clone();
        match gen {
            Generator::U => m[dof - 1] = power,
            Generator::V => n[dof - 1] = power,
        }
        let f = WeylMonomial::from_exponents(system, PhaseExp::one(), m, n);
        acc = monomial_mul(&acc, &f);
        factors += 1;
    }
    if factors == 0 && phase.is_none() {
        return Err(cur.err("empty monomial"));
    }
    Ok(acc)
}

fn format_phase(phase: &PhaseExp) -> Option<String> {
    let q = phase.exponent();
    let half = BigRational::new(1.into(), 2.into());
    let three_half = BigRational::new(3.into(), 2.into());
    if q.is_zero() {
        None
    } else if q.is_one() {
        Some("-1".into())
    } else if *q == half {
        Some("+i".into())
    } else if *q == three_half {
        Some("-i".into())
    } else {
        Some(format!("exp(i*pi*{q})"))
    }
}

/// Canonical text: phase prefix (omitted when `+1`), then factors in normal order.
pub fn format_monomial(mono: &WeylMonomial) -> String {
    let mut body = Vec::new();
    for (j, (m, n)) in mono
        .u_exponents()
        .iter()
        .zip(mono.v_exponents())
        .enumerate()
    {
        for (g, e) in [("U", m), ("V", n)] {
            if e.is_zero() {
                continue;
            }
            if e.is_one() {
                body.push(format!("{g}{}", j + 1));
            } else {
                body.push(format!("{g}{}^{e}", j + 1));
            }
        }
    }
    let body = if body.is_empty() {
        "I".to_string()
    } else {
        body.join(" ")
    };
    match format_phase(mono.phase()) {
        Some(p) => format!("{p} * {body}"),
        None => body,
    }
}
