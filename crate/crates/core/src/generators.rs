//! The standard examples: rotations of spheres, linear actions on complex
//! projective spaces, and a blown-up six-sphere. Points are emitted in the
//! conventional listing order.

use crate::data::{from_complex_weights, FixedPointData, FixedPointDatum, Sign};
use crate::error::{Error, Result};

fn positive(params: &[(&'static str, u64)]) -> Result<()> {
    match params.iter().find(|(_, v)| *v == 0) {
        Some(&(name, _)) => Err(Error::NonPositiveParameter { name }),
        None => Ok(()),
    }
}

fn datum(sign: Sign, weights: &[u64]) -> FixedPointDatum {
    FixedPointDatum::new(sign, weights.to_vec()).expect("generator weights are positive")
}

fn build(points: Vec<FixedPointDatum>) -> FixedPointData {
    FixedPointData::new(points).expect("generator output has uniform arity")
}

/// Rotation of `S^6` with weights `a, b, c`: `{+,a,b,c}, {-,a,b,c}`.
pub fn gen_s6(a: u64, b: u64, c: u64) -> Result<FixedPointData> {
    positive(&[("a", a), ("b", b), ("c", c)])?;
    Ok(build(vec![datum(Sign::Plus, &[a, b, c]), datum(Sign::Minus, &[a, b, c])]))
}

/// Two rotated six-spheres joined along free orbits.
pub fn gen_s6_pair(a: u64, b: u64, c: u64, d: u64, e: u64, f: u64) -> Result<FixedPointData> {
    positive(&[("d", d), ("e", e), ("f", f)])?;
    gen_s6(a, b, c)?.disjoint_union(&gen_s6(d, e, f)?)
}

/// Linear action on `CP^3` with weights `0, a, a+b, a+b+c` on the
/// homogeneous coordinates.
pub fn gen_cp3(a: u64, b: u64, c: u64) -> Result<FixedPointData> {
    positive(&[("a", a), ("b", b), ("c", c)])?;
    Ok(build(vec![
        datum(Sign::Plus, &[a, a + b, a + b + c]),
        datum(Sign::Minus, &[a, b, b + c]),
        datum(Sign::Plus, &[b, c, a + b]),
        datum(Sign::Minus, &[c, b + c, a + b + c]),
    ]))
}

/// Complex weights of the four fixed points of [`gen_cp3`].
pub fn cp3_complex_weights(a: u64, b: u64, c: u64) -> [[i128; 3]; 4] {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    [
        [a, a + b, a + b + c],
        [-a, b, b + c],
        [-a - b, -b, c],
        [-a - b - c, -b - c, -c],
    ]
}

/// `S^6` rotated with weights `c, b, a+b`, blown up equivariantly at the
/// south pole: the north pole followed by the three new fixed points.
pub fn gen_blowup(a: u64, b: u64, c: u64) -> Result<FixedPointData> {
    positive(&[("a", a), ("b", b), ("c", c)])?;
    Ok(build(vec![
        datum(Sign::Plus, &[b, c, a + b]),
        datum(Sign::Minus, &[c, b + c, a + b + c]),
        datum(Sign::Minus, &[a, b, b + c]),
        datum(Sign::Plus, &[a, a + b, a + b + c]),
    ]))
}

/// Complex weights at the three points created by the blow-up in
/// [`gen_blowup`], in order.
pub fn blowup_complex_weights(a: u64, b: u64, c: u64) -> [[i128; 3]; 3] {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    [[-c, b + c, a + b + c], [-b - c, a, b], [-a - b - c, -a, a + b]]
}

/// Linear action on `CP^2` with weights `0, a, a+b`.
pub fn gen_cp2(a: u64, b: u64) -> Result<FixedPointData> {
    positive(&[("a", a), ("b", b)])?;
    Ok(build(vec![
        datum(Sign::Plus, &[a, a + b]),
        datum(Sign::Minus, &[a, b]),
        datum(Sign::Plus, &[b, a + b]),
    ]))
}

/// Converts a list of complex weight triples through
/// [`from_complex_weights`].
pub fn from_complex_list(lists: &[[i128; 3]]) -> Result<FixedPointData> {
    FixedPointData::new(
        lists
            .iter()
            .map(|ws| from_complex_weights(ws))
            .collect::<Result<Vec<_>>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(pairs: &[(i64, &[u64])]) -> FixedPointData {
        FixedPointData::from_pairs(pairs).unwrap()
    }

    #[test]
    fn s6_examples() {
        assert_eq!(gen_s6(1, 2, 3).unwrap(), data(&[(1, &[1, 2, 3]), (-1, &[1, 2, 3])]));
        assert_eq!(gen_s6(1, 1, 1).unwrap(), data(&[(1, &[1, 1, 1]), (-1, &[1, 1, 1])]));
        assert_eq!(gen_s6(7, 2, 3).unwrap(), data(&[(1, &[7, 2, 3]), (-1, &[7, 2, 3])]));
        assert_eq!(gen_s6(0, 2, 3), Err(Error::NonPositiveParameter { name: "a" }));
    }

    #[test]
    fn s6_pair_examples() {
        let spheres = data(&[(1, &[7, 2, 3]), (-1, &[7, 2, 3]), (1, &[5, 2, 3]), (-1, &[5, 2, 3])]);
        assert_eq!(gen_s6_pair(7, 2, 3, 5, 2, 3).unwrap(), spheres);
        let ones = gen_s6_pair(1, 1, 1, 1, 1, 1).unwrap();
        assert_eq!(ones.count_sign(Sign::Plus), 2);
        assert_eq!(ones.distinct_weights(), vec![1]);
        assert_eq!(
            gen_s6_pair(1, 2, 3, 4, 5, 6).unwrap(),
            data(&[(1, &[1, 2, 3]), (-1, &[1, 2, 3]), (1, &[4, 5, 6]), (-1, &[4, 5, 6])])
        );
        assert_eq!(gen_s6_pair(1, 2, 3, 4, 0, 6), Err(Error::NonPositiveParameter { name: "e" }));
    }

    #[test]
    fn cp3_examples() {
        assert_eq!(
            gen_cp3(1, 1, 1).unwrap(),
            data(&[(1, &[1, 2, 3]), (-1, &[1, 1, 2]), (1, &[1, 1, 2]), (-1, &[1, 2, 3])])
        );
        assert_eq!(
            gen_cp3(1, 2, 3).unwrap(),
            data(&[(1, &[1, 3, 6]), (-1, &[1, 2, 5]), (1, &[2, 3, 3]), (-1, &[3, 5, 6])])
        );
        for a in 1..=4 {
            for b in 1..=4 {
                for c in 1..=4 {
                    let converted = from_complex_list(&cp3_complex_weights(a, b, c)).unwrap();
                    assert_eq!(converted, gen_cp3(a, b, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn blowup_examples() {
        assert!(gen_blowup(1, 1, 1).unwrap().multiset_eq(&gen_cp3(1, 1, 1).unwrap()));
        for (a, b, c) in [(1, 2, 3), (4, 1, 2), (2, 5, 1)] {
            let blown = gen_blowup(a, b, c).unwrap();
            assert!(blown.multiset_eq(&gen_cp3(a, b, c).unwrap()));
            let created = from_complex_list(&blowup_complex_weights(a, b, c)).unwrap();
            assert_eq!(created.points(), &blown.points()[1..]);
        }
    }

    #[test]
    fn cp2_examples() {
        assert_eq!(gen_cp2(1, 1).unwrap(), data(&[(1, &[1, 2]), (-1, &[1, 1]), (1, &[1, 2])]));
        assert_eq!(gen_cp2(1, 2).unwrap(), data(&[(1, &[1, 3]), (-1, &[1, 2]), (1, &[2, 3])]));
        let d = gen_cp2(2, 5).unwrap();
        assert_eq!(d.weights_with_sign(Sign::Plus), vec![2, 5, 7, 7]);
        assert_eq!(d.weights_with_sign(Sign::Minus), vec![2, 5]);
    }
}
