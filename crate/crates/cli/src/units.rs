//! Quantity parsing for command-line values with unit suffixes.

use std::f64::consts::PI;

fn split_suffix<'a>(s: &'a str, suffixes: &[&'a str]) -> (&'a str, Option<&'a str>) {
    let s = s.trim();
    for suf in suffixes {
        if let Some(num) = s.strip_suffix(suf) {
            return (num.trim(), Some(suf));
        }
    }
    (s, None)
}

fn number(s: &str, what: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("cannot parse `{s}` as a {what}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what} must be finite"))
    }
}

/// Length with `nm`, `um`/`µm` or `m` suffix, returned in metres.
pub fn parse_length(s: &str) -> Result<f64, String> {
    match split_suffix(s, &["nm", "um", "µm", "m"]) {
        (n, Some("nm")) => Ok(number(n, "length")? / 1e9),
        (n, Some("um" | "µm")) => Ok(number(n, "length")? / 1e6),
        (n, Some(_)) => number(n, "length"),
        (_, None) => Err(format!("length `{s}` needs a unit suffix (nm, um or m)")),
    }
}

/// Angle in radians, degrees with a `deg` suffix, or a multiple of π
/// written `pi`, `0.25pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    match split_suffix(s, &["deg", "rad", "pi"]) {
        (n, Some("deg")) => Ok(number(n, "angle")? * PI / 180.0),
        ("", Some("pi")) => Ok(PI),
        (n, Some("pi")) => Ok(number(n, "angle")? * PI),
        (n, _) => number(n, "angle"),
    }
}

/// Magnetic field with `T` or `G` suffix, returned in tesla.
pub fn parse_field(s: &str) -> Result<f64, String> {
    let v = match split_suffix(s, &["T", "G"]) {
        (n, Some("T")) => number(n, "field")?,
        (n, Some(_)) => vdw_torque::constants::gauss_to_tesla(number(n, "field")?),
        (_, None) => return Err(format!("field `{s}` needs a unit suffix (T or G)")),
    };
    if v < 0.0 {
        return Err("field magnitude must be >= 0".into());
    }
    Ok(v)
}

pub fn parse_plain(s: &str) -> Result<f64, String> {
    number(s.trim(), "number")
}

/// Grid as `start:stop:count` (inclusive, evenly spaced) or a comma list.
pub fn parse_grid(s: &str, value: impl Fn(&str) -> Result<f64, String>) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let n: usize = count
                .trim()
                .parse()
                .map_err(|_| format!("grid count `{count}` is not a positive integer"))?;
            if n == 0 {
                return Err("grid count must be >= 1".into());
            }
            Ok(vdw_torque::sweep::linspace(value(start)?, value(stop)?, n))
        }
        [_] => s.split(',').map(|v| value(v)).collect(),
        _ => Err(format!("cannot parse grid `{s}`; use start:stop:count or a comma list")),
    }
}
