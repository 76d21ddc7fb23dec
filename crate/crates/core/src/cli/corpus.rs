//! Bundled scenarios. Elements are written in the power basis of the
//! field generator `t`; the radical each expression stands for is the
//! element's name. Selected identities in the splitting field of x^3 - 2
//! (t = 2^(1/3) + sqrt(-3)):
//!
//! - 2^(1/3) = (-4t^5 + t^4 - 40t^3 + 26t^2 - 92t - 91)/90
//! - w 2^(1/3) = (t^5 + t^4 + 10t^3 + 16t^2 + 13t + 79)/60
//! - w = (4t^5 - t^4 + 40t^3 - 26t^2 + 182t + 1)/180
//!
//! In Q(sqrt2, sqrt3) with t = sqrt2 + sqrt3: sqrt2 = (t^3 - 9t)/2,
//! sqrt3 = (11t - t^3)/2, sqrt6 = (t^2 - 5)/2.

use super::scenario::{parse_scenario, Scenario};
use crate::arith::Q;
use crate::error::Result;
use crate::numberfield::Poly;

pub const BUNDLED: [(&str, &str); 7] = [
    ("rationals", include_str!("../../corpus/rationals.json")),
    ("sqrt2", include_str!("../../corpus/sqrt2.json")),
    ("eisenstein", include_str!("../../corpus/eisenstein.json")),
    ("biquadratic", include_str!("../../corpus/biquadratic.json")),
    ("cyclotomic5", include_str!("../../corpus/cyclotomic5.json")),
    ("cube_root_two", include_str!("../../corpus/cube_root_two.json")),
    ("cyclotomic8", include_str!("../../corpus/cyclotomic8.json")),
];

/// `Res_y(y^3 - 2, (x - y)^2 + 3)`, the minimal polynomial of
/// `2^(1/3) + sqrt(-3)`, by interpolation at seven integer points.
pub fn cube_root_two_polynomial() -> Poly {
    let cube = Poly::from_ints(&[-2, 0, 0, 1]);
    let points: Vec<(Q, Q)> = (0..7i64)
        .map(|x| {
            // (x - y)^2 + 3 as a polynomial in y
            let quad = Poly::from_ints(&[x * x + 3, -2 * x, 1]);
            (Q::from_integer(x.into()), cube.resultant(&quad))
        })
        .collect();
    Poly::interpolate(&points)
}

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Loads one bundled scenario. The degree-6 field is checked against the
/// resultant computed here before use.
pub fn bundled_scenario(name: &str, precision: Option<u32>) -> Result<Scenario> {
    let text = bundled_text(name)
        .ok_or_else(|| crate::Error::InvalidInput(format!("no bundled scenario '{}'", name)))?;
    let s = parse_scenario(text, precision)?;
    if name == "cube_root_two" && s.field.defining_poly() != &cube_root_two_polynomial() {
        return Err(crate::Error::SchemaError("bundled degree-6 polynomial disagrees with the resultant".into()));
    }
    Ok(s)
}

pub fn bundled_corpus(precision: Option<u32>) -> Result<Vec<Scenario>> {
    BUNDLED.iter().map(|(n, _)| bundled_scenario(n, precision)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_polynomial() {
        assert_eq!(cube_root_two_polynomial(), Poly::from_ints(&[31, 36, 27, -4, 9, 0, 1]));
    }
}
