//! Number formatting for human-readable output.

/// `x` with 12 significant digits, trailing zeros removed.
pub fn format_significant(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::format_significant;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_significant(3.0), "3");
        assert_eq!(format_significant(3.186227883702517), "3.1862278837");
        assert_eq!(format_significant(1.0 / 12.0), "0.0833333333333");
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(-2.5), "-2.5");
        assert_eq!(format_significant(1234.5), "1234.5");
    }
}
