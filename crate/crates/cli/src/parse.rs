//! Parsers for command-line values.

use std::path::Path;

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::Value;
use tate_core::angle::RationalAngle;
use tate_core::bruhat::BruhatFunction;
use tate_core::characters::MultCharacter;
use tate_core::PadicNumber;

use crate::error::CliError;

/// `"re,im"` or `"re"`.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("expected \"re,im\", got {text:?}"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(bad()),
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

pub fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    tate_core::arith::parse_rational(text).map_err(CliError::core(format!("parsing {text:?}")))
}

pub fn parse_angle(text: &str) -> Result<RationalAngle, CliError> {
    RationalAngle::from_rational(&parse_rational(text)?).map_err(CliError::core("angle"))
}

/// A rational, or a p-adic number in the `p=.. v=.. digits=[..] prec=..` form.
pub fn parse_padic(text: &str, p: u64, prec: u32) -> Result<PadicNumber, CliError> {
    if text.contains("digits=") || text.contains("zero") {
        let x = PadicNumber::parse_text(text).map_err(CliError::core("parsing p-adic number"))?;
        if x.prime() != p {
            return Err(CliError::Usage(format!("number is over Q_{}, expected Q_{p}", x.prime())));
        }
        return Ok(x);
    }
    PadicNumber::from_ratio(&parse_rational(text)?, p, prec).map_err(CliError::core("expanding"))
}

/// Character descriptors:
/// `unramified`, `legendre`, `odd:ALPHA` (`χ̲(g) = e^{2πiα}`), and for `p = 2`
/// `dyadic:BETA,GAMMA` (`χ̲(−1) = e^{2πiβ}`, `χ̲(5) = e^{2πiγ}`).
pub fn parse_character(text: &str, p: u64, s: Complex64) -> Result<MultCharacter, CliError> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let ctx = CliError::core(format!("character {text:?}"));
    match (kind, rest) {
        ("unramified" | "trivial", "") => MultCharacter::unramified(p, s).map_err(ctx),
        ("legendre", "") => MultCharacter::legendre(p, s).map_err(ctx),
        ("odd", a) => MultCharacter::odd(p, s, parse_angle(a)?).map_err(ctx),
        ("dyadic", bg) => {
            if p != 2 {
                return Err(CliError::Usage("dyadic characters need --p 2".into()));
            }
            let (b, g) = bg
                .split_once(',')
                .ok_or_else(|| CliError::Usage("dyadic:BETA,GAMMA expected".into()))?;
            MultCharacter::dyadic(s, parse_angle(b)?, parse_angle(g)?).map_err(ctx)
        }
        _ => Err(CliError::Usage(format!(
            "unknown character {text:?}: use unramified, legendre, odd:ALPHA or dyadic:BETA,GAMMA"
        ))),
    }
}

/// `P:REST`.
pub fn split_prime(text: &str) -> Result<(u64, &str), CliError> {
    let (p, rest) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("expected PRIME:VALUE, got {text:?}")))?;
    let p = p.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad prime in {text:?}")))?;
    Ok((p, rest))
}

pub fn parse_coeffs(text: &str) -> Result<Vec<u64>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|c| c.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad coefficient in {text:?}"))))
        .collect()
}

/// A Bruhat function from a JSON file: either the bare `{p, terms}` object or
/// a result document whose `result.function` holds one.
pub fn load_function(path: &Path) -> Result<BruhatFunction, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    function_from_json(&text)
}

pub fn function_from_json(text: &str) -> Result<BruhatFunction, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
    let body = match v.pointer("/result/function") {
        Some(f) => f.clone(),
        None => v,
    };
    serde_json::from_value(body).map_err(|e| CliError::Usage(format!("not a Bruhat function: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("0.5, -3").unwrap(), Complex64::new(0.5, -3.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn characters() {
        let s = Complex64::new(0.5, 0.0);
        assert_eq!(parse_character("legendre", 5, s).unwrap().degree(), 1);
        assert_eq!(parse_character("odd:1/20", 5, s).unwrap().degree(), 2);
        assert_eq!(parse_character("dyadic:1/2,1/2", 2, s).unwrap().degree(), 3);
        assert!(parse_character("odd:1/3", 5, s).is_err());
        assert!(parse_character("cubic", 5, s).is_err());
    }

    #[test]
    fn padic_text_or_rational() {
        let a = parse_padic("24/17", 3, 10).unwrap();
        let b = parse_padic(&a.to_text(), 3, 10).unwrap();
        assert_eq!(a, b);
        assert!(parse_padic(&a.to_text(), 5, 10).is_err());
    }
}
