//! Descriptor syntax: `F(e1,e2,e3)` / `B(d1,d2)` for bundles and
//! `a*xi + b*f` (or `-K`) for divisor classes.

use super::{
    anticanonical_class, normalize_bundle, BundleError, BundleType, DivisorClass, NormalizedBundle,
};

pub fn parse_bundle(text: &str) -> Result<NormalizedBundle, BundleError> {
    let bad = || BundleError::BadDescriptor(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (head, rest) = s.split_at(s.find('(').ok_or_else(bad)?);
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let nums = inner
        .split(',')
        .map(|n| n.parse::<i64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    match (head, nums.as_slice()) {
        ("F", [e1, e2, e3]) => Ok(normalize_bundle(*e1, *e2, *e3)),
        ("B", [d1, d2]) => {
            if *d2 < 0 || d1 < d2 {
                return Err(BundleError::NotNormalized(*d1, *d2));
            }
            Ok(NormalizedBundle {
                bundle: BundleType::new(*d1 as u32, *d2 as u32)?,
                shift: 0,
                permutation: [0, 1, 2],
            })
        }
        _ => Err(bad()),
    }
}

/// Parse `a*xi + b*f`. Terms may appear in any order, be repeated, omit the
/// coefficient, or be bare integers times a symbol; `-K` and `K` name the
/// anticanonical and canonical classes of `bundle`.
pub fn parse_class(text: &str, bundle: &BundleType) -> Result<DivisorClass, BundleError> {
    let bad = || BundleError::BadClass(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    match s.as_str() {
        "-K" => return Ok(anticanonical_class(bundle)),
        "K" => return Ok(-anticanonical_class(bundle)),
        "" => return Err(bad()),
        _ => {}
    }
    // split into signed terms
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for (i, c) in s.char_indices() {
        // `+-2*f` is one term
        if (c == '+' || c == '-') && i > 0 && bytes[i - 1] != b'+' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);

    let mut class = DivisorClass::ZERO;
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(term)),
        };
        let (coeff, symbol) = match body.split_once('*') {
            Some((c, sym)) => (c.parse::<i64>().map_err(|_| bad())?, sym),
            None => (1, body),
        };
        let unit = match symbol {
            "xi" => DivisorClass::XI,
            "f" | "F" => DivisorClass::FIBER,
            _ => return Err(bad()),
        };
        class = class + (sign * coeff) * unit;
    }
    Ok(class)
}
