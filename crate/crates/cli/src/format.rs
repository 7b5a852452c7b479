//! Number and table rendering.

/// Formats `x` with 12 significant digits, in scientific notation when
/// `|x| < 1e-4` or `|x| ≥ 1e6`. Trailing zeros are dropped.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let mag = x.abs();
    if !(1e-4..1e6).contains(&mag) {
        let s = format!("{x:.11e}");
        let (mantissa, exp) = s
            .split_once('e')
            .expect("scientific format has an exponent");
        return format!("{}e{exp}", trim(mantissa));
    }
    let digits = mag.log10().floor() as i32;
    let decimals = (11 - digits).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

/// Comma-separated values with a header row and LF endings.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(num(2.0), "2");
        assert_eq!(num(0.606048262748896), "0.606048262749");
        assert_eq!(num(-1234.5678901234567), "-1234.56789012");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(0.0001), "0.0001");
    }

    #[test]
    fn scientific_range() {
        assert_eq!(num(1.5e-5), "1.5e-5");
        assert_eq!(num(2.5e6), "2.5e6");
        assert_eq!(num(999999.0), "999999");
        assert_eq!(num(-3.0e-12), "-3e-12");
        assert_eq!(num(f64::NAN), "nan");
    }

    #[test]
    fn tables_and_csv() {
        let rows = vec![vec!["1".to_string(), "22".to_string()]];
        assert_eq!(csv(&["a", "b"], &rows), "a,b\n1,22\n");
        assert_eq!(table(&["abc", "d"], &rows), "abc  d\n1    22\n");
    }
}
