//! Apertures written as rational multiples of π: `pi`, `pi/20`, `3pi/2`,
//! `3*pi/2`, `2/3pi`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Aperture {
    num: u32,
    den: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Aperture {
    pub fn new(num: u32, den: u32) -> anyhow::Result<Self> {
        if num == 0 || den == 0 {
            bail!("aperture {num}π/{den} is not positive");
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        if num >= 2 * den {
            bail!("aperture {num}π/{den} must be below 2π");
        }
        Ok(Self { num, den })
    }

    pub const fn pi_over(den: u32) -> Self {
        Self { num: 1, den }
    }

    pub fn radians(&self) -> f64 {
        f64::from(self.num) * PI / f64::from(self.den)
    }

    /// `θ0 = p/q·π` gives the ground-state Bessel order `q/p`.
    pub fn fraction(&self) -> (u32, u32) {
        (self.num, self.den)
    }
}

impl fmt::Display for Aperture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (1, 1) => write!(f, "pi"),
            (n, 1) => write!(f, "{n}pi"),
            (1, d) => write!(f, "pi/{d}"),
            (n, d) => write!(f, "{n}pi/{d}"),
        }
    }
}

impl FromStr for Aperture {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect::<String>().to_lowercase();
        let compact = compact.replace('π', "pi");
        let Some(at) = compact.find("pi") else {
            bail!("aperture '{s}' must be a rational multiple of pi, e.g. pi/20 or 3pi/2");
        };
        let (before, after) = (&compact[..at], &compact[at + 2..]);
        let parse = |t: &str, what: &str| -> anyhow::Result<u32> {
            t.parse::<u32>().with_context(|| format!("bad {what} '{t}' in aperture '{s}'"))
        };
        // "p/q pi" or "p pi / q" or "pi / q"
        let (num, den) = match (before.split_once('/'), after.strip_prefix('/')) {
            (Some((p, q)), None) if after.is_empty() => (parse(p, "numerator")?, parse(q, "denominator")?),
            (None, Some(q)) => {
                (if before.is_empty() { 1 } else { parse(before, "numerator")? }, parse(q, "denominator")?)
            }
            (None, None) if after.is_empty() => (if before.is_empty() { 1 } else { parse(before, "numerator")? }, 1),
            _ => bail!("cannot parse aperture '{s}'"),
        };
        Self::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        for (text, num, den) in [
            ("pi", 1, 1),
            ("pi/20", 1, 20),
            ("3pi/2", 3, 2),
            ("3*pi/2", 3, 2),
            ("3/2pi", 3, 2),
            (" 2 pi / 4 ", 1, 2),
            ("π/15", 1, 15),
        ] {
            let a: Aperture = text.parse().unwrap();
            assert_eq!(a.fraction(), (num, den), "{text}");
        }
        assert_eq!("3pi/2".parse::<Aperture>().unwrap().radians(), 3.0 * PI / 2.0);
    }

    #[test]
    fn labels_round_trip() {
        for text in ["pi", "pi/20", "3pi/2", "2pi/3", "5pi/4"] {
            assert_eq!(text.parse::<Aperture>().unwrap().to_string(), text);
        }
    }

    #[test]
    fn rejects_out_of_range_and_garbage() {
        for text in ["2pi", "0pi", "pi/0", "1.5", "pi/x", "", "7pi/3"] {
            assert!(text.parse::<Aperture>().is_err(), "{text}");
        }
    }
}
