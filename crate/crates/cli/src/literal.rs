use num_complex::Complex64;

/// Parse `x`, `yi`, `x+yi`, `x-yi`, `i`, `-i` or a JSON pair `[x, y]`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.starts_with('[') {
        let pair: Vec<f64> = serde_json::from_str(&s).ok()?;
        return match pair.as_slice() {
            [re, im] => Some(Complex64::new(*re, *im)),
            _ => None,
        };
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse().ok()?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse().ok()?,
    };
    Some(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let c = Complex64::new;
        assert_eq!(parse_complex("0.5"), Some(c(0.5, 0.0)));
        assert_eq!(parse_complex("i"), Some(c(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Some(c(0.0, -1.0)));
        assert_eq!(parse_complex("2.5i"), Some(c(0.0, 2.5)));
        assert_eq!(parse_complex("0.3+0.9i"), Some(c(0.3, 0.9)));
        assert_eq!(parse_complex("-0.3 - i"), Some(c(-0.3, -1.0)));
        assert_eq!(parse_complex("1e-2+2e-1i"), Some(c(0.01, 0.2)));
        assert_eq!(parse_complex("[0.3, -0.9]"), Some(c(0.3, -0.9)));
        assert_eq!(parse_complex("x"), None);
        assert_eq!(parse_complex("[1]"), None);
    }
}
