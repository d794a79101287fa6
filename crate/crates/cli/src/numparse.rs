//! Integer arguments with conveniences: scientific notation is accepted and
//! normalized to exact integers ("1e12", "2.5e3"), underscores are ignored,
//! and "a..b" denotes an inclusive range.

use anyhow::{anyhow, bail, Result};

/// Parse one integer expression exactly.
pub fn parse_integer(input: &str) -> Result<i64> {
    let s: String = input.trim().chars().filter(|&c| c != '_').collect();
    if s.is_empty() {
        bail!("empty integer");
    }
    let bad = || anyhow!("'{input}' is not an integer");

    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        None => (s.as_str(), 0u32),
        Some((m, e)) => (m, e.parse::<u32>().map_err(|_| bad())?),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        None => (mantissa, ""),
        Some((i, f)) => (i, f),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    // 2.5e3 = 2500 exactly; 2.53e1 has no integer value.
    if frac_part.len() as u32 > exponent {
        bail!("'{input}' does not denote an integer (fractional digits exceed the exponent)");
    }

    let digits = format!("{int_part}{frac_part}");
    let scale = exponent - frac_part.len() as u32;
    let base: i64 = digits
        .parse()
        .map_err(|_| anyhow!("'{input}' is out of range"))?;
    10i64
        .checked_pow(scale)
        .and_then(|p| base.checked_mul(p))
        .ok_or_else(|| anyhow!("'{input}' is out of range"))
}

/// Expand a list of point arguments; each is an integer, a comma list, or an
/// inclusive range "a..b".
pub fn parse_points(args: &[String]) -> Result<Vec<i64>> {
    let mut points = Vec::new();
    for arg in args {
        for piece in arg.split(',').filter(|p| !p.trim().is_empty()) {
            match piece.split_once("..") {
                None => points.push(parse_integer(piece)?),
                Some((a, b)) => {
                    let lo = parse_integer(a)?;
                    let hi = parse_integer(b)?;
                    if lo > hi {
                        bail!("range '{piece}' is empty (start exceeds end)");
                    }
                    if hi - lo >= 10_000_000 {
                        bail!("range '{piece}' has more than 1e7 points");
                    }
                    points.extend(lo..=hi);
                }
            }
        }
    }
    if points.is_empty() {
        bail!("no points given");
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_scientific() {
        assert_eq!(parse_integer("28").unwrap(), 28);
        assert_eq!(parse_integer("1e3").unwrap(), 1000);
        assert_eq!(parse_integer("2.5e3").unwrap(), 2500);
        assert_eq!(parse_integer("1E12").unwrap(), 1_000_000_000_000);
        assert_eq!(parse_integer("1_000_000").unwrap(), 1_000_000);
        assert!(parse_integer("1.23e1").is_err());
        assert!(parse_integer("-5").is_err());
        assert!(parse_integer("1e40").is_err());
        assert!(parse_integer("abc").is_err());
    }

    #[test]
    fn points_and_ranges() {
        let args = vec!["3..6".to_string(), "10,1e2".to_string()];
        assert_eq!(parse_points(&args).unwrap(), vec![3, 4, 5, 6, 10, 100]);
        assert!(parse_points(&["9..5".to_string()]).is_err());
        assert!(parse_points(&[]).is_err());
    }
}
