//! Number formatting shared by the JSON and CSV writers.

/// `%.17g`: 17 significant digits, trailing zeros removed, scientific
/// notation outside `1e-4 ≤ |x| < 1e17`. Non-finite values render as
/// `inf`, `-inf`, `nan`.
pub fn fmt_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let digits = (P - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", digits, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        assert_eq!(fmt_g17(4.0), "4");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(-2.5), "-2.5");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-5");
        assert_eq!(fmt_g17(1e20), "1e20");
        assert_eq!(fmt_g17(123456.0), "123456");
        assert_eq!(fmt_g17(-0.0), "0");
        assert_eq!(fmt_g17(f64::INFINITY), "inf");
    }

    #[test]
    fn round_trips() {
        for x in [0.381966011250105, 1.0 / 3.0, 2.0 + 2.0 * (0.7f64).cos(), 6.02e23, -1e-300] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
