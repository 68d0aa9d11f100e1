/// Fixed-notation formatting with 12 significant digits; keeps CSV
/// output bit-identical across runs and platforms.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let prec = (11 - mag).max(0) as usize;
    format!("{x:.prec$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_shapes() {
        assert_eq!(sig12(0.32), "0.320000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(-0.5), "-0.500000000000");
        assert_eq!(sig12(1234.5), "1234.50000000");
    }

    #[test]
    fn twelve_digits_survive_roundtrip() {
        for &x in &[0.1234567890123, 3.141592653589793, 1e-7, 123456.789] {
            let s = sig12(x);
            let back: f64 = s.parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs().max(1.0), "{s}");
        }
    }
}
