//! Domino tilings of cubical regions, their flux and twist, and the flux
//! curves whose linking data recover the twist.

pub mod cli;
pub mod cubical;
pub mod curves;
pub mod error;
pub mod fixtures;
pub mod framing;
pub mod geom;
pub mod homology;
pub mod linalg;
pub mod linkhel;
pub mod pipes;
pub mod region;
pub mod shell;
pub mod tiling;
pub mod twist;
pub mod verify;

pub use error::*;

use num_rational::Rational64;

/// Parses `"p/q"`, `"p"` or a decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    let bad = || format!("not a rational number: {s:?}");
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let i: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let den = 10i64.pow(frac.len() as u32);
        let mag = i.abs() * den + f;
        return Ok(Rational64::new(if neg { -mag } else { mag }, den));
    }
    s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/6"), Ok(Rational64::new(1, 6)));
        assert_eq!(parse_rational("-3"), Ok(Rational64::from_integer(-3)));
        assert_eq!(parse_rational("-0.5"), Ok(Rational64::new(-1, 2)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
