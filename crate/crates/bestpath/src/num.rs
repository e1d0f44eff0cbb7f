//! Float rendering shared by the JSON and CSV writers.

use serde_json::value::RawValue;

/// `%.17g`: 17 significant digits, trailing zeros removed, positional
/// notation for exponents in `-5..17`. Round-trips every finite `f64`.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if (-5..17).contains(&exp) {
        let body = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        } else {
            let point = exp as usize + 1;
            if digits.len() <= point {
                format!("{digits}{}", "0".repeat(point - digits.len()))
            } else {
                format!("{}.{}", &digits[..point], &digits[point..])
            }
        };
        format!("{sign}{body}")
    } else {
        let (head, tail) = digits.split_at(1);
        let frac = if tail.is_empty() { String::new() } else { format!(".{tail}") };
        format!("{sign}{head}{frac}e{exp}")
    }
}

/// Text for a CSV cell; non-finite values as `inf`, `-inf`, `nan`.
pub fn cell(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        g17(x)
    }
}

/// JSON value for a float: a number when finite, else the string `cell`
/// would produce.
pub fn json(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        g17(x)
    } else {
        format!("\"{}\"", cell(x))
    };
    RawValue::from_string(text).expect("valid JSON literal")
}

pub fn json_opt(x: Option<f64>) -> Box<RawValue> {
    match x {
        Some(v) => json(v),
        None => RawValue::from_string("null".into()).expect("valid JSON literal"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(-2.5), "-2.5");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(41.825), "41.825000000000003");
        assert_eq!(g17(1e20), "1e20");
        assert_eq!(g17(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(g17(123456.0), "123456");
        assert_eq!(g17(0.0001), "0.0001");
        assert_eq!(cell(f64::INFINITY), "inf");
        assert_eq!(json(f64::NAN).get(), "\"nan\"");
    }

    #[test]
    fn round_trips() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, -7.25e-300, 6.02e23, f64::MAX, f64::MIN_POSITIVE, 5e-324] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
