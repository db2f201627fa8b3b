//! Text and JSON formats for fixed-point data.
//!
//! Text format: one fixed point per line, `<sign> w1 w2 ... wn` with sign
//! `+` or `-`. Lines starting with `#` are comments, blank lines are
//! ignored. The JSON mirror is `{"points":[{"sign":1,"weights":[2,3,7]}]}`.

use crate::data::{FixedPointData, FixedPointDatum, Sign};
use crate::error::{Error, Result};

pub fn parse_text(text: &str) -> Result<FixedPointData> {
    let mut points = Vec::new();
    let mut arity = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut tokens = line.split_whitespace();
        let sign = match tokens.next() {
            Some("+") => Sign::Plus,
            Some("-") => Sign::Minus,
            Some(other) => return Err(err(format!("expected sign `+` or `-`, found `{other}`"))),
            None => unreachable!("non-empty line has a token"),
        };
        let mut weights = Vec::new();
        for token in tokens {
            let w: u64 = token
                .parse()
                .map_err(|_| err(format!("`{token}` is not a positive integer weight")))?;
            if w == 0 {
                return Err(err("weights must be positive".into()));
            }
            weights.push(w);
        }
        if weights.is_empty() {
            return Err(err("a fixed point needs at least one weight".into()));
        }
        match arity {
            None => arity = Some(weights.len()),
            Some(n) if n != weights.len() => {
                return Err(err(format!(
                    "inconsistent arity: expected {n} weights, found {}",
                    weights.len()
                )))
            }
            _ => {}
        }
        points.push(FixedPointDatum::new(sign, weights).map_err(|e| err(e.to_string()))?);
    }
    FixedPointData::new(points)
}

pub fn to_text(data: &FixedPointData) -> String {
    let mut out = String::new();
    for p in data.points() {
        out.push(p.sign().symbol());
        for w in p.weights() {
            out.push(' ');
            out.push_str(&w.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn parse_json(text: &str) -> Result<FixedPointData> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

pub fn to_json(data: &FixedPointData) -> String {
    serde_json::to_string(data).expect("fixed-point data always serializes")
}

/// Parses either format, choosing JSON when the first non-blank character
/// is `{`.
pub fn parse_any(text: &str) -> Result<FixedPointData> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spheres() -> FixedPointData {
        FixedPointData::from_pairs(&[
            (1, &[7, 2, 3]),
            (-1, &[7, 2, 3]),
            (1, &[5, 2, 3]),
            (-1, &[5, 2, 3]),
        ])
        .unwrap()
    }

    #[test]
    fn parses_sphere_pair_text() {
        let d = parse_text("+ 7 2 3\n- 7 2 3\n+ 5 2 3\n- 5 2 3").unwrap();
        assert_eq!(d, spheres());
    }

    #[test]
    fn comments_and_blank_lines() {
        let d = parse_text("# spheres\n\n+ 7 2 3\n  - 7 2 3  \n").unwrap();
        assert_eq!(d.len(), 2);
        assert!(parse_text("").unwrap().is_empty());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_text("+ 1 0 2") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_text("+ 1 2\n\n+ 1 2 3") {
            Err(Error::Parse { line: 3, message }) => assert!(message.contains("arity")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_text("* 1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_text("+ -3 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_text("+"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn json_mirror() {
        let json = to_json(&spheres());
        assert_eq!(
            json,
            r#"{"points":[{"sign":1,"weights":[2,3,7]},{"sign":-1,"weights":[2,3,7]},{"sign":1,"weights":[2,3,5]},{"sign":-1,"weights":[2,3,5]}]}"#
        );
        assert_eq!(parse_json(&json).unwrap(), spheres());
        assert_eq!(parse_any(&json).unwrap(), spheres());
        assert!(parse_json(r#"{"points":[{"sign":0,"weights":[1]}]}"#).is_err());
        assert!(parse_json(r#"{"points":[{"sign":1,"weights":[0]}]}"#).is_err());
        assert!(parse_json(r#"{"points":[{"sign":1,"weights":[1]},{"sign":1,"weights":[1,2]}]}"#).is_err());
    }

    fn arb_data() -> impl Strategy<Value = FixedPointData> {
        (1usize..5).prop_flat_map(|n| {
            prop::collection::vec(
                (any::<bool>(), prop::collection::vec(1u64..1_000_000, n)),
                0..6,
            )
            .prop_map(|pts| {
                let points = pts
                    .into_iter()
                    .map(|(plus, ws)| {
                        let sign = if plus { Sign::Plus } else { Sign::Minus };
                        FixedPointDatum::new(sign, ws).unwrap()
                    })
                    .collect();
                FixedPointData::new(points).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(d in arb_data()) {
            prop_assert_eq!(parse_text(&to_text(&d)).unwrap(), d.clone());
            prop_assert_eq!(parse_json(&to_json(&d)).unwrap(), d);
        }
    }
}
